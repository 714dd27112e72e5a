#include "recnet/ga.hpp"

#include "recnet/csv.hpp"

#include <iterator>

namespace recnet {

void GaConfig::validate() const {
    if (population_size < 2) throw ConfigError("population size must be at least 2");
    if (max_iterations < 1) throw ConfigError("maximum iterations must be at least 1");
    if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0)) throw ConfigError("crossover probability must lie in [0, 1]");
    if (mutation_prob && !(*mutation_prob >= 0.0 && *mutation_prob <= 1.0)) {
        throw ConfigError("mutation probability must lie in [0, 1]");
    }
    if (tournament_size < 2) throw ConfigError("tournament size must be at least 2");
    if (elitism_count >= population_size) throw ConfigError("elitism count must be smaller than the population");
}

RealVectorEncoding::Genome RealVectorEncoding::random(Rng& rng) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Genome g(length_);
    for (auto& x : g) x = unit(rng);
    return g;
}

std::pair<RealVectorEncoding::Genome, RealVectorEncoding::Genome> RealVectorEncoding::crossover(const Genome& a,
                                                                                                const Genome& b,
                                                                                                Rng& rng) const {
    std::bernoulli_distribution coin(0.5);
    Genome first(a);
    Genome second(b);
    for (std::size_t i = 0; i < length_; ++i) {
        if (coin(rng)) std::swap(first[i], second[i]);
    }
    return {std::move(first), std::move(second)};
}

void RealVectorEncoding::mutate(Genome& g, double per_gene, Rng& rng) const {
    std::bernoulli_distribution flip(per_gene);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto& x : g) {
        if (flip(rng)) x = unit(rng);
        x = std::clamp(x, 0.0, 1.0);
    }
}

bool RealVectorEncoding::valid(const Genome& g) const {
    return g.size() == length_ && std::all_of(g.begin(), g.end(), [](double x) { return x >= 0.0 && x <= 1.0; });
}

SubsetEncoding::SubsetEncoding(std::vector<NodeIndex> pool, std::size_t size) : pool_(std::move(pool)), size_(size) {
    std::sort(pool_.begin(), pool_.end());
    if (std::adjacent_find(pool_.begin(), pool_.end()) != pool_.end()) throw ConfigError("candidate pool has repeats");
    if (size_ < 1 || size_ > pool_.size()) {
        throw ConfigError("subset size " + std::to_string(size_) + " must lie in [1, " + std::to_string(pool_.size()) + "]");
    }
}

SubsetEncoding::Genome SubsetEncoding::random(Rng& rng) const {
    Genome g;
    g.reserve(size_);
    std::sample(pool_.begin(), pool_.end(), std::back_inserter(g), static_cast<std::ptrdiff_t>(size_), rng);
    return g;
}

std::pair<SubsetEncoding::Genome, SubsetEncoding::Genome> SubsetEncoding::crossover(const Genome& a, const Genome& b,
                                                                                    Rng& rng) const {
    Genome merged;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(merged));
    Genome first;
    Genome second;
    std::sample(merged.begin(), merged.end(), std::back_inserter(first), static_cast<std::ptrdiff_t>(size_), rng);
    std::sample(merged.begin(), merged.end(), std::back_inserter(second), static_cast<std::ptrdiff_t>(size_), rng);
    return {std::move(first), std::move(second)};
}

void SubsetEncoding::mutate(Genome& g, double per_gene, Rng& rng) const {
    if (g.size() >= pool_.size()) return;
    std::bernoulli_distribution flip(per_gene);
    std::vector<NodeIndex> leaving;
    for (const NodeIndex member : g) {
        if (flip(rng)) leaving.push_back(member);
    }
    for (const NodeIndex member : leaving) {
        Genome outside;
        outside.reserve(pool_.size() - g.size());
        std::set_difference(pool_.begin(), pool_.end(), g.begin(), g.end(), std::back_inserter(outside));
        std::uniform_int_distribution<std::size_t> pick(0, outside.size() - 1);
        const NodeIndex incoming = outside[pick(rng)];
        g.erase(std::lower_bound(g.begin(), g.end(), member));
        g.insert(std::lower_bound(g.begin(), g.end(), incoming), incoming);
    }
}

bool SubsetEncoding::valid(const Genome& g) const {
    if (g.size() != size_ || !std::is_sorted(g.begin(), g.end())) return false;
    if (std::adjacent_find(g.begin(), g.end()) != g.end()) return false;
    return std::includes(pool_.begin(), pool_.end(), g.begin(), g.end());
}

PerformanceRecord performance_index(double initial_best_loss, double final_best_loss, std::size_t generations,
                                    double total_seconds) {
    if (generations < 1) throw ConfigError("performance index needs at least one generation");
    if (!(total_seconds > 0.0)) throw ConfigError("performance index needs a positive runtime");
    PerformanceRecord out;
    const auto gens = static_cast<double>(generations);
    out.loss_descent_per_generation = (initial_best_loss - final_best_loss) / gens;
    out.seconds_per_generation = total_seconds / gens;
    out.index = out.loss_descent_per_generation / out.seconds_per_generation;
    return out;
}

std::string format_generations_csv(const std::vector<GenerationRecord>& history) {
    std::string out = "generation,best_fitness\n";
    for (const auto& r : history) out += std::to_string(r.generation) + "," + csv::format_double(r.best_fitness) + "\n";
    return out;
}

std::string format_generation_times_csv(const std::vector<GenerationRecord>& history) {
    std::string out = "generation,seconds\n";
    for (const auto& r : history) out += std::to_string(r.generation) + "," + csv::format_double(r.seconds) + "\n";
    return out;
}

}  // namespace recnet
