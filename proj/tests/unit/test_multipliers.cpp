#include "doctest.h"
#include "support.hpp"

#include "recnet/csv.hpp"
#include "recnet/error.hpp"
#include "recnet/multipliers.hpp"

#include <limits>
#include <random>

using namespace recnet;

namespace {

MultiplierProblem abc_path(std::size_t size) {
    const auto g = load_edge_list({"A", "B", "C"}, {{"A", "B"}, {"B", "C"}});
    return make_multiplier_problem(g, ThresholdVector({0.6, 0.5, 1.0}), size);
}

MultiplierProblem random_problem(std::uint64_t seed, std::size_t n, std::size_t size) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::string> ids;
    std::vector<std::pair<NodeIndex, NodeIndex>> edges;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("m" + std::to_string(i));
    for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 2; j < n; ++j)
            if (unit(rng) < 0.2) edges.push_back({i, j});
    std::vector<double> tau;
    for (std::size_t i = 0; i < n; ++i) tau.push_back(0.2 + 0.8 * unit(rng));
    return make_multiplier_problem(graph_from_indices(ids, edges), ThresholdVector(tau), size);
}

// Independent enumeration: recursive choice over the pool.
void enumerate(const MultiplierProblem& p, std::size_t start, std::vector<NodeIndex>& cur, std::size_t& best,
               std::size_t& count) {
    if (cur.size() == p.size) {
        ++count;
        best = std::max(best, multiplier_objective(cur, p));
        return;
    }
    for (std::size_t k = start; k < p.candidate_pool.size(); ++k) {
        cur.push_back(p.candidate_pool[k]);
        enumerate(p, k + 1, cur, best, count);
        cur.pop_back();
    }
}

}  // namespace

TEST_CASE("forcing the first node of the path recovers everything") {
    const auto p = abc_path(1);
    CHECK(natural_recovered(p) == 0);
    CHECK(multiplier_objective(std::vector<NodeIndex>{0}, p) == 3);
    // forcing B: A needs 0.6 of {B} -> yes, C needs all of {B} -> yes
    CHECK(multiplier_objective(std::vector<NodeIndex>{1}, p) == 3);
    // forcing C: B reaches 1/2 -> week 3, then A sees B -> week 4
    CHECK(multiplier_objective(std::vector<NodeIndex>{2}, p) == 3);

    const auto everyone = abc_path(3);
    CHECK(multiplier_objective(std::vector<NodeIndex>{0, 1, 2}, everyone) == 3);
}

TEST_CASE("objective input checks") {
    const auto p = abc_path(2);
    CHECK_THROWS_AS(multiplier_objective(std::vector<NodeIndex>{0}, p), DataError);
    CHECK_THROWS_AS(multiplier_objective(std::vector<NodeIndex>{1, 1}, p), DataError);
    CHECK_THROWS_AS(abc_path(0), ConfigError);
    CHECK_THROWS_AS(abc_path(4), ConfigError);
    const auto g = load_edge_list({"A", "B", "C"}, {{"A", "B"}, {"B", "C"}});
    const auto restricted =
        make_multiplier_problem(g, ThresholdVector({0.6, 0.5, 1.0}), 1, {}, std::vector<NodeIndex>{2, 0});
    CHECK(restricted.candidate_pool == std::vector<NodeIndex>{0, 2});
    CHECK_THROWS_AS(multiplier_objective(std::vector<NodeIndex>{1}, restricted), DataError);
    CHECK_THROWS_AS(make_multiplier_problem(g, ThresholdVector({0.6, 0.5, 1.0}), 1, {}, std::vector<NodeIndex>{7}),
                    ConfigError);
}

TEST_CASE("increment rate") {
    CHECK(increment_rate(1705, 1609) == doctest::Approx(100.0 * 96.0 / 1609.0));
    CHECK(std::abs(increment_rate(1705, 1609) - 5.97) < 0.005);
    CHECK(increment_rate(42, 42) == 0.0);
    CHECK(increment_rate(0, 4) == -100.0);
    CHECK_THROWS_AS(increment_rate(3, 0), DataError);
}

TEST_CASE("binomial coefficients") {
    CHECK(binomial(30, 3) == 4060);
    CHECK(binomial(10, 0) == 1);
    CHECK(binomial(10, 10) == 1);
    CHECK(binomial(3, 5) == 0);
    CHECK(binomial(62, 31) == 465428353255261088ULL);
    CHECK(binomial(67, 33) == 14226520737620288370ULL);
    CHECK(binomial(68, 34) == std::numeric_limits<std::uint64_t>::max());
}

TEST_CASE("brute force agrees with an independent enumeration") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto p = random_problem(seed, 11, 3);
        std::vector<NodeIndex> cur;
        std::size_t best = 0, count = 0;
        enumerate(p, 0, cur, best, count);
        const auto bf = brute_force_multipliers(p);
        CHECK(bf.objective == best);
        CHECK(bf.evaluated == count);
        CHECK(bf.evaluated == binomial(11, 3));
        CHECK(multiplier_objective(bf.members, p) == bf.objective);
        CHECK(brute_force_multipliers(p, 1'000'000, 3).members == bf.members);
    }
}

TEST_CASE("brute force breaks ties by the first subset in index order") {
    // no edges, every threshold 1: any single forced node gives exactly 1
    const auto g = load_edge_list({"x", "y", "z"}, {});
    const auto p = make_multiplier_problem(g, ThresholdVector({1.0, 1.0, 1.0}), 1);
    const auto bf = brute_force_multipliers(p);
    CHECK(bf.objective == 1);
    CHECK(bf.members == std::vector<NodeIndex>{0});
    CHECK_THROWS_AS(brute_force_multipliers(p, 2), ConfigError);
}

TEST_CASE("GA search reaches the brute-force optimum on a small instance") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        CAPTURE(seed);
        const auto p = random_problem(seed + 100, 10, 2);
        const auto bf = brute_force_multipliers(p);
        GaConfig cfg;
        cfg.max_iterations = 500;
        cfg.rng_seed = seed;
        const auto res = search_multipliers(p, cfg);
        CHECK(res.recovered_with == bf.objective);
        CHECK(res.members.size() == 2);
        CHECK(res.recovered_without == natural_recovered(p));
        CHECK(res.recovered_with >= res.recovered_without);
        CHECK(res.increment_rate.has_value() == (res.recovered_without > 0));
        CHECK(res.history.size() == 500);
    }
}

TEST_CASE("selection and summary tables") {
    const auto g = load_edge_list({"A", "B", "C"}, {});
    CHECK(format_selection_csv(g, std::vector<NodeIndex>{2}) == "id,selected\nA,0\nB,0\nC,1\n");
    std::vector<MultiplierSummaryRow> rows{{1, 5, 4, 25.0}, {2, 3, 0, std::nullopt}};
    CHECK(format_multiplier_summary_csv(rows) ==
          "N,recovered_with,recovered_without,increment_rate\n1,5,4,25\n2,3,0,\n");

    const auto dir = testsupport::scratch_dir("selection");
    csv::write_atomic(dir / "s.csv", format_selection_csv(g, std::vector<NodeIndex>{0, 2}));
    CHECK(read_selection_csv((dir / "s.csv").string()) == std::vector<std::string>{"A", "C"});
    csv::write_atomic(dir / "bad.csv", "id,selected\nA,yes\n");
    CHECK_THROWS_AS(read_selection_csv((dir / "bad.csv").string()), DataError);
}
