#pragma once

#include "recnet/error.hpp"
#include "recnet/parallel.hpp"
#include "recnet/spatial_graph.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace recnet {

using Rng = std::mt19937_64;

enum class Direction { minimize, maximize };

struct GaConfig {
    std::size_t population_size = 10;
    /// Generations including the random initial one; 1 means no refinement.
    std::size_t max_iterations = 100;
    double crossover_prob = 0.9;
    /// Per-gene probability; unset means 1 / genome length.
    std::optional<double> mutation_prob;
    std::size_t tournament_size = 2;
    std::size_t elitism_count = 1;
    std::uint64_t rng_seed = 0;
    /// Fitness evaluation threads (0 = automatic). Does not affect results.
    unsigned threads = 1;

    void validate() const;
};

struct GenerationRecord {
    std::size_t generation = 0;
    /// Best fitness seen up to and including this generation.
    double best_fitness = 0.0;
    double seconds = 0.0;
};

template <typename Genome>
struct GaResult {
    Genome best;
    double best_fitness = 0.0;
    std::vector<GenerationRecord> history;
    /// Fitness of every member of the random initial population.
    std::vector<double> initial_fitness;
};

/// Raised when the fitness evaluator throws or returns NaN; carries the chromosome.
template <typename Genome>
class EvaluationError : public Error {
public:
    EvaluationError(const std::string& what, Genome chromosome)
        : Error("fitness evaluation failed: " + what), chromosome_(std::move(chromosome)) {}
    const Genome& chromosome() const { return chromosome_; }

private:
    Genome chromosome_;
};

/// Genes in [0, 1]. Uniform crossover; mutation resamples a gene uniformly.
class RealVectorEncoding {
public:
    using Genome = std::vector<double>;

    explicit RealVectorEncoding(std::size_t length) : length_(length) {}

    std::size_t length() const { return length_; }
    double default_mutation_prob() const { return length_ == 0 ? 0.0 : 1.0 / static_cast<double>(length_); }

    Genome random(Rng& rng) const;
    std::pair<Genome, Genome> crossover(const Genome& a, const Genome& b, Rng& rng) const;
    void mutate(Genome& g, double per_gene, Rng& rng) const;
    bool valid(const Genome& g) const;

private:
    std::size_t length_;
};

/// Exactly `size` distinct members of a candidate pool, kept sorted.
///
/// Crossover pools the union of both parents and draws each child as a
/// uniform size-N subsample of it. Mutation swaps each member, with the given
/// probability, for a uniformly chosen non-member.
class SubsetEncoding {
public:
    using Genome = std::vector<NodeIndex>;

    /// Throws ConfigError unless 1 <= size <= pool size and the pool has no repeats.
    SubsetEncoding(std::vector<NodeIndex> pool, std::size_t size);

    const std::vector<NodeIndex>& pool() const { return pool_; }
    std::size_t size() const { return size_; }
    double default_mutation_prob() const { return 1.0 / static_cast<double>(size_); }

    Genome random(Rng& rng) const;
    std::pair<Genome, Genome> crossover(const Genome& a, const Genome& b, Rng& rng) const;
    void mutate(Genome& g, double per_gene, Rng& rng) const;
    bool valid(const Genome& g) const;

private:
    std::vector<NodeIndex> pool_;  // sorted
    std::size_t size_;
};

namespace detail {

inline bool better(double a, double b, Direction dir) {
    return dir == Direction::minimize ? a < b : a > b;
}

template <typename Genome, typename Fitness>
std::vector<double> evaluate_all(const std::vector<Genome>& genomes, std::size_t first, const Fitness& fitness,
                                 unsigned threads) {
    std::vector<double> out(genomes.size() - first);
    parallel_for(out.size(), threads, [&](std::size_t k) {
        const Genome& g = genomes[first + k];
        double value = 0.0;
        try {
            value = static_cast<double>(fitness(g));
        } catch (const std::exception& e) {
            throw EvaluationError<Genome>(e.what(), g);
        }
        if (std::isnan(value)) throw EvaluationError<Genome>("fitness is NaN", g);
        out[k] = value;
    });
    return out;
}

}  // namespace detail

/// Classic generational GA: random initial population, tournament selection
/// of parent pairs, crossover with crossover_prob, per-gene mutation, and
/// replacement of the population keeping the elitism_count best. Returns the
/// best chromosome ever evaluated. All random decisions come from one
/// generator seeded with rng_seed on the calling thread, so the result does
/// not depend on `threads`.
template <typename Encoding, typename Fitness>
GaResult<typename Encoding::Genome> run_ga(const Fitness& fitness, Direction direction, const Encoding& encoding,
                                           const GaConfig& config) {
    using Genome = typename Encoding::Genome;
    using Clock = std::chrono::steady_clock;
    config.validate();
    const unsigned threads = resolve_threads(config.threads);
    const double mutation_prob = config.mutation_prob.value_or(encoding.default_mutation_prob());
    const std::size_t eta = config.population_size;

    Rng rng(config.rng_seed);
    std::bernoulli_distribution do_crossover(config.crossover_prob);
    std::uniform_int_distribution<std::size_t> pick(0, eta - 1);

    GaResult<Genome> result;
    auto started = Clock::now();

    std::vector<Genome> population;
    population.reserve(eta);
    for (std::size_t i = 0; i < eta; ++i) population.push_back(encoding.random(rng));
    std::vector<double> scores = detail::evaluate_all(population, 0, fitness, threads);
    result.initial_fitness = scores;

    std::size_t best_idx = 0;
    for (std::size_t i = 1; i < eta; ++i) {
        if (detail::better(scores[i], scores[best_idx], direction)) best_idx = i;
    }
    result.best = population[best_idx];
    result.best_fitness = scores[best_idx];
    result.history.push_back({0, result.best_fitness, std::chrono::duration<double>(Clock::now() - started).count()});

    auto tournament = [&]() {
        std::size_t winner = pick(rng);
        for (std::size_t k = 1; k < config.tournament_size; ++k) {
            const std::size_t challenger = pick(rng);
            if (detail::better(scores[challenger], scores[winner], direction)) winner = challenger;
        }
        return winner;
    };

    std::vector<std::size_t> order(eta);
    for (std::size_t generation = 1; generation < config.max_iterations; ++generation) {
        started = Clock::now();
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return detail::better(scores[a], scores[b], direction);
        });

        std::vector<Genome> next;
        std::vector<double> next_scores;
        next.reserve(eta);
        for (std::size_t e = 0; e < config.elitism_count; ++e) {
            next.push_back(population[order[e]]);
            next_scores.push_back(scores[order[e]]);
        }
        const std::size_t elites = next.size();
        while (next.size() < eta) {
            const std::size_t a = tournament();
            const std::size_t b = tournament();
            Genome first;
            Genome second;
            if (do_crossover(rng)) {
                std::tie(first, second) = encoding.crossover(population[a], population[b], rng);
            } else {
                first = population[a];
                second = population[b];
            }
            encoding.mutate(first, mutation_prob, rng);
            encoding.mutate(second, mutation_prob, rng);
            next.push_back(std::move(first));
            if (next.size() < eta) next.push_back(std::move(second));
        }
        const auto child_scores = detail::evaluate_all(next, elites, fitness, threads);
        next_scores.insert(next_scores.end(), child_scores.begin(), child_scores.end());

        population = std::move(next);
        scores = std::move(next_scores);
        for (std::size_t i = 0; i < eta; ++i) {
            if (detail::better(scores[i], result.best_fitness, direction)) {
                result.best_fitness = scores[i];
                result.best = population[i];
            }
        }
        result.history.push_back(
            {generation, result.best_fitness, std::chrono::duration<double>(Clock::now() - started).count()});
    }
    return result;
}

/// Loss descent per generation divided by runtime per generation.
struct PerformanceRecord {
    double loss_descent_per_generation = 0.0;
    double seconds_per_generation = 0.0;
    double index = 0.0;
};

PerformanceRecord performance_index(double initial_best_loss, double final_best_loss, std::size_t generations,
                                    double total_seconds);

/// "generation,best_fitness" table; deterministic for a given seed.
std::string format_generations_csv(const std::vector<GenerationRecord>& history);

/// "generation,seconds" wall-clock table, kept apart from the fitness trace.
std::string format_generation_times_csv(const std::vector<GenerationRecord>& history);

}  // namespace recnet
