#include "doctest.h"
#include "support.hpp"

#include "recnet/csv.hpp"
#include "recnet/error.hpp"
#include "recnet/synthetic.hpp"
#include "recnet/threshold_fit.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace recnet;

namespace {

FitProblem path_problem(std::vector<double> durations) {
    return build_fit_problem(testsupport::path_graph(durations.size()), durations);
}

bool has_warning(const FitProblem& p, const std::string& fragment) {
    return std::any_of(p.warnings.begin(), p.warnings.end(),
                       [&](const std::string& w) { return w.find(fragment) != std::string::npos; });
}

}  // namespace

TEST_CASE("seeds are the nodes recovering before the cutoff") {
    const auto p = path_problem({2.14, 5.0, 14.0});
    CHECK(p.seed_mask == std::vector<bool>{true, false, false});
    CHECK(p.free_nodes == std::vector<NodeIndex>{1, 2});
    CHECK(p.num_seeds() == 1);
    CHECK(p.warnings.empty());
    CHECK(p.empirical.recovery_week(0) == 3);

    const auto cut = build_fit_problem(testsupport::path_graph(3), std::vector<double>{2.14, 5.0, 14.0}, 6.0);
    CHECK(cut.free_nodes == std::vector<NodeIndex>{2});
}

TEST_CASE("degenerate seed sets produce warnings, not errors") {
    const auto none = path_problem({4.0, 5.0, 6.0});
    CHECK(none.num_seeds() == 0);
    CHECK(has_warning(none, "no node recovers"));

    const auto early = path_problem({1.5, 5.0, 6.0});
    CHECK(has_warning(early, "other than the first update week"));

    const auto all = path_problem({2.5, 2.5, 2.5});
    CHECK(all.free_nodes.empty());
    const auto fit = fit_thresholds(all, GaConfig{});
    CHECK(fit.final_loss == 0);
    CHECK(fit.thresholds.seed_count() == 3);

    CHECK_THROWS_AS(build_fit_problem(testsupport::path_graph(2), std::vector<double>{3.0}), DataError);
}

TEST_CASE("hand-counted fitness on a three-node path") {
    const auto p = path_problem({2.5, 4.0, 5.0});
    CHECK(fit_fitness(std::vector<double>{0.5, 1.0}, p) == 0);
    // neither free node ever recovers: 11 + 10 empirical recovered cells missed
    CHECK(fit_fitness(std::vector<double>{1.0, 1.0}, p) == 21);
    // both recover at week 3: one week early and two weeks early
    CHECK(fit_fitness(std::vector<double>{0.0, 0.0}, p) == 3);
    // node 1 at week 4, node 2 needs half of {1,...}: only neighbour is 1 -> week 5
    CHECK(fit_fitness(std::vector<double>{0.3, 0.7}, p) == 0);
    CHECK_THROWS_AS(fit_fitness(std::vector<double>{0.5}, p), DataError);
}

TEST_CASE("streaming fitness equals loss of the full simulation") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 300; ++k) {
        const std::size_t n = 2 + rng() % 20;
        std::vector<std::string> ids;
        std::vector<std::pair<NodeIndex, NodeIndex>> edges;
        for (std::size_t i = 0; i < n; ++i) ids.push_back("n" + std::to_string(i));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (unit(rng) < 0.25) edges.push_back({i, j});
        std::vector<double> durations;
        for (std::size_t i = 0; i < n; ++i) durations.push_back(1.0 + 13.0 * unit(rng));
        const DiffusionSchedule sched{14, 1 + int(rng() % 3)};
        const auto p = build_fit_problem(graph_from_indices(ids, edges), durations, 3.0, sched);
        std::vector<double> chromosome;
        for (std::size_t i = 0; i < p.free_nodes.size(); ++i) chromosome.push_back(unit(rng));
        CHECK(fit_fitness(chromosome, p) == fit_loss_by_resimulation(assemble_thresholds(p, chromosome), p));
    }
}

TEST_CASE("GA recovers a tiny instance exactly") {
    const auto p = path_problem({2.5, 4.0, 5.0});
    GaConfig cfg;
    cfg.max_iterations = 500;
    cfg.rng_seed = 3;
    const auto fit = fit_thresholds(p, cfg);
    CHECK(fit.final_loss == 0);
    CHECK(fit.thresholds[0] == 0.0);
    CHECK(fit.thresholds.is_seed(0));
    CHECK(fit.ga.history.size() == 500);
}

TEST_CASE("fit never ends worse than its initial population") {
    SynthSpec spec;
    spec.n = 30;
    spec.rng_seed = 8;
    const auto inst = generate_instance(spec);
    const auto p = build_fit_problem(inst.graph, inst.durations);
    GaConfig cfg;
    cfg.max_iterations = 100;
    const auto fit = fit_thresholds(p, cfg);
    CHECK(fit.final_loss <= *std::max_element(fit.ga.initial_fitness.begin(), fit.ga.initial_fitness.end()));
    CHECK(fit.final_loss <= *std::min_element(fit.ga.initial_fitness.begin(), fit.ga.initial_fitness.end()));
    CHECK(fit.final_loss == fit_loss_by_resimulation(fit.thresholds, p));
}

TEST_CASE("random baseline") {
    SynthSpec spec;
    spec.n = 40;
    spec.rng_seed = 2;
    const auto inst = generate_instance(spec);
    const auto p = build_fit_problem(inst.graph, inst.durations);

    const auto a = random_baseline(p, 1000, 10, 1);
    const auto a4 = random_baseline(p, 1000, 10, 4);
    CHECK(a.losses == a4.losses);
    CHECK(a.mean == a4.mean);

    const auto b = random_baseline(p, 1000, 11, 1);
    CHECK(a.losses != b.losses);
    // two independent estimates of the same mean
    const double se = std::sqrt(a.stddev * a.stddev / 1000 + b.stddev * b.stddev / 1000);
    CHECK(std::abs(a.mean - b.mean) <= 3 * se);

    double sum = 0;
    for (auto l : a.losses) sum += double(l);
    CHECK(a.mean == doctest::Approx(sum / 1000));
    double ss = 0;
    for (auto l : a.losses) ss += (double(l) - a.mean) * (double(l) - a.mean);
    CHECK(a.stddev == doctest::Approx(std::sqrt(ss / 999)));

    CHECK(random_baseline(p, 1, 10).stddev == 0.0);
    CHECK_THROWS_AS(random_baseline(p, 0, 10), ConfigError);
}

TEST_CASE("threshold table round trip") {
    const auto g = testsupport::path_graph(3);
    const ThresholdVector t({0.0, 0.125, 1.0}, {true, false, false});
    const auto dir = testsupport::scratch_dir("thresholds");
    csv::write_atomic(dir / "t.csv", format_thresholds_csv(g, t));
    const auto back = read_thresholds_csv((dir / "t.csv").string(), g);
    CHECK(back.values()[1] == 0.125);
    CHECK(back.seed_mask() == t.seed_mask());
    CHECK(read_threshold_ids((dir / "t.csv").string()) == g.ids());

    csv::write_atomic(dir / "bad.csv", "id,threshold,is_seed\np0,0,1\np1,0.5,0\n");
    CHECK_THROWS_WITH_AS(read_thresholds_csv((dir / "bad.csv").string(), g), doctest::Contains("p2"), DataError);
    csv::write_atomic(dir / "seed.csv", "id,threshold,is_seed\np0,0.2,1\np1,0.5,0\np2,0.5,0\n");
    CHECK_THROWS_AS(read_thresholds_csv((dir / "seed.csv").string(), g), DataError);
}
