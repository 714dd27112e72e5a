#include "doctest.h"
#include "support.hpp"

#include "recnet/cli.hpp"
#include "recnet/csv.hpp"

#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <sstream>

using namespace recnet;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli_dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json load_json(const fs::path& p) { return nlohmann::json::parse(csv::read_text(p)); }

void compare_tables(const fs::path& a, const fs::path& b) {
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
        const auto name = entry.path().filename().string();
        if (name == "run_manifest.json" || entry.is_directory()) continue;
        CAPTURE(name);
        REQUIRE(fs::exists(b / name));
        const auto x = csv::read_text(entry.path());
        const auto y = csv::read_text(b / name);
        CHECK(x == y);
        ++compared;
    }
    CHECK(compared > 0);
}

}  // namespace

TEST_CASE("usage errors exit with 1") {
    CHECK(cli({}).code == 1);
    CHECK(cli({"frobnicate"}).code == 1);
    CHECK(cli({"fit", "--no-such-flag"}).code == 1);
    CHECK(cli({"synth", "--n", "many"}).code == 1);
    const auto help = cli({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("multipliers") != std::string::npos);
}

TEST_CASE("configuration problems exit with 2") {
    const auto dir = testsupport::scratch_dir("cli_config");
    CHECK(cli({"fit", "--out", dir.string()}).code == 2);
    CHECK(cli({"--config", (dir / "missing.toml").string(), "synth"}).code == 2);
    CHECK(cli({"synth", "--seed-fraction", "0", "--out", dir.string()}).code == 2);
    CHECK(cli({"build-graph", "--edges", "x.csv", "--geometry", "y.json", "--out", dir.string()}).code == 2);
    const auto r = cli({"synth", "--graph-kind", "hex", "--out", dir.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("hex") != std::string::npos);
}

TEST_CASE("data problems exit with 3") {
    const auto dir = testsupport::scratch_dir("cli_data");
    csv::write_atomic(dir / "loop.csv", "src,dst\na,b\nb,b\n");
    const auto r = cli({"build-graph", "--edges", (dir / "loop.csv").string(), "--out", (dir / "o").string()});
    CHECK(r.code == 3);
    CHECK(r.err.find("self-loop on node 'b'") != std::string::npos);
    CHECK(cli({"build-graph", "--edges", (dir / "absent.csv").string(), "--out", (dir / "o").string()}).code == 3);
}

TEST_CASE("build-graph reports the metrics of a 2010-node edge list") {
    const auto dir = testsupport::scratch_dir("cli_metrics");
    std::string edges = "src,dst\n";
    std::size_t m = 0;
    auto add = [&](int a, int b) {
        edges += "v" + std::to_string(a) + ",v" + std::to_string(b) + "\n";
        ++m;
    };
    for (int step : {1, 2, 3})
        for (int i = 0; i + step < 2010; ++i) add(i, i + step);
    for (int i = 0; i < 55; ++i) add(i, i + 4);
    REQUIRE(m == 6079);
    csv::write_atomic(dir / "edges.csv", edges);
    const auto r = cli({"build-graph", "--edges", (dir / "edges.csv").string(), "--out", (dir / "o").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out == "n=2010 m=6079 k=6.049 d=0.00301\n");
    const auto metrics = load_json(dir / "o" / "graph_metrics.json");
    CHECK(metrics["m"] == 6079);
    const auto manifest = load_json(dir / "o" / "run_manifest.json");
    CHECK(manifest["command"] == "build-graph");
    CHECK(manifest["outputs"].size() == 2);
    CHECK(manifest.contains("started_at"));
}

TEST_CASE("build-graph from geometry") {
    const auto dir = testsupport::scratch_dir("cli_geometry");
    REQUIRE(cli({"synth", "--n", "9", "--out", dir.string()}).code == 0);
    const auto r = cli({"build-graph", "--geometry", (dir / "geometry.geojson").string(), "--rule", "rook", "--out",
                        (dir / "rook").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("n=9 m=12 ", 0) == 0);
    CHECK(cli({"build-graph", "--geometry", (dir / "geometry.geojson").string(), "--rule", "hex", "--out",
               (dir / "hex").string()})
              .code == 2);
}

TEST_CASE("durations from a visit table") {
    const auto dir = testsupport::scratch_dir("cli_durations");
    std::string visits = "id,day,visits\n";
    for (int d = 0; d < 14 + 99; ++d) {
        visits += "a," + std::to_string(d) + ",100\n";
        visits += "b," + std::to_string(d) + "," + (d >= 14 && d < 24 ? "0" : "100") + "\n";
    }
    csv::write_atomic(dir / "visits.csv", visits);
    const auto r = cli({"durations", "--visits", (dir / "visits.csv").string(), "--baseline-start", "0",
                        "--baseline-end", "13", "--recovery-start", "14", "--ma-halfwidth", "0", "--out",
                        (dir / "o").string()});
    REQUIRE(r.code == 0);
    CHECK(csv::read_text(dir / "o" / "durations.csv") ==
          "id,duration_weeks\na," + csv::format_double(1.0 / 7.0) + "\nb," + csv::format_double(10.0 / 7.0) + "\n");
    CHECK(cli({"durations", "--visits", (dir / "visits.csv").string(), "--out", (dir / "o").string()}).code == 2);
}

TEST_CASE("config file values apply and flags override them") {
    const auto dir = testsupport::scratch_dir("cli_config_file");
    REQUIRE(cli({"synth", "--n", "20", "--out", (dir / "inst").string()}).code == 0);
    csv::write_atomic(dir / "run.toml", "[fit]\nmax-iterations = 7\npopulation = 6\n");
    const std::vector<std::string> base{"--config", (dir / "run.toml").string(), "fit", "--edges",
                                        (dir / "inst" / "edges.csv").string(), "--durations",
                                        (dir / "inst" / "durations.csv").string()};
    auto args = base;
    args.insert(args.end(), {"--out", (dir / "a").string()});
    REQUIRE(cli(args).code == 0);
    auto report = load_json(dir / "a" / "fit_report.json");
    CHECK(report["max_iterations"] == 7);
    CHECK(report["population_size"] == 6);

    args = base;
    args.insert(args.end(), {"--max-iterations", "9", "--out", (dir / "b").string()});
    REQUIRE(cli(args).code == 0);
    report = load_json(dir / "b" / "fit_report.json");
    CHECK(report["max_iterations"] == 9);
    CHECK(report["population_size"] == 6);
    const auto manifest = load_json(dir / "b" / "run_manifest.json");
    CHECK(manifest["config"].get<std::string>().find("max-iterations=9") != std::string::npos);
}

TEST_CASE("the full pipeline is reproducible across thread counts") {
    const auto dir = testsupport::scratch_dir("cli_pipeline");
    const auto inst = dir / "inst";
    REQUIRE(cli({"synth", "--n", "30", "--graph-kind", "perturbed_grid", "--seed", "4", "--out", inst.string()}).code ==
            0);
    for (const char* threads : {"1", "4"}) {
        const auto out = dir / (std::string("t") + threads);
        const auto edges = (inst / "edges.csv").string();
        REQUIRE(cli({"fit", "--edges", edges, "--durations", (inst / "durations.csv").string(), "--max-iterations", "300",
                     "--baseline-runs", "200", "--threads", threads, "--out", out.string()})
                    .code == 0);
        REQUIRE(cli({"multipliers", "--edges", edges, "--geometry", (inst / "geometry.geojson").string(), "--thresholds",
                     (out / "thresholds.csv").string(), "--N", "1,3", "--max-iterations", "100", "--threads", threads,
                     "--out", out.string()})
                    .code == 0);
        REQUIRE(cli({"analyze", "--thresholds", (out / "thresholds.csv").string(), "--attributes",
                     (inst / "attributes.csv").string(), "--multipliers", (out / "multipliers_N1.csv").string(),
                     (out / "multipliers_N3.csv").string(), "--out", out.string()})
                    .code == 0);
        REQUIRE(cli({"baseline", "--edges", edges, "--durations", (inst / "durations.csv").string(), "--runs", "300",
                     "--threads", threads, "--out", out.string()})
                    .code == 0);
    }
    compare_tables(dir / "t1", dir / "t4");
    CHECK(fs::exists(dir / "t1" / "multipliers_N3.geojson"));
    CHECK(fs::exists(dir / "t1" / "multiplier_attributes.csv"));
    const auto report = load_json(dir / "t1" / "analysis_report.json");
    CHECK(report["tertile_sizes"].size() == 3);
    CHECK(report["threshold_correlations"].contains("per_capita_income"));
}

TEST_CASE("multiplier search matches brute force on a small instance") {
    const auto dir = testsupport::scratch_dir("cli_multipliers");
    REQUIRE(cli({"synth", "--n", "10", "--seed-fraction", "0.1", "--tau-lo", "0.3", "--tau-hi", "0.9",
                 "--allow-unrecovered", "--out", dir.string()})
                .code == 0);
    const std::vector<std::string> base{"multipliers", "--edges", (dir / "edges.csv").string(), "--thresholds",
                                        (dir / "planted_thresholds.csv").string(), "--N", "3"};
    auto ga = base;
    ga.insert(ga.end(), {"--out", (dir / "ga").string()});
    auto bf = base;
    bf.insert(bf.end(), {"--brute-force", "--out", (dir / "bf").string()});
    REQUIRE(cli(ga).code == 0);
    REQUIRE(cli(bf).code == 0);
    const auto a = csv::parse(csv::read_text(dir / "ga" / "multipliers_summary.csv"));
    const auto b = csv::parse(csv::read_text(dir / "bf" / "multipliers_summary.csv"));
    CHECK(a.rows[0][1] == b.rows[0][1]);
    CHECK(a.rows[0][2] == b.rows[0][2]);
    CHECK_FALSE(fs::exists(dir / "bf" / "multipliers_N3_generations.csv"));

    auto capped = bf;
    capped.insert(capped.end(), {"--enumeration-cap", "10"});
    CHECK(cli(capped).code == 2);
}

TEST_CASE("default multiplier sizes") {
    CHECK(default_multiplier_sizes(2010) == std::vector<std::size_t>{20, 60, 101, 201});
    CHECK(default_multiplier_sizes(10) == std::vector<std::size_t>{1});
    CHECK(default_multiplier_sizes(50) == std::vector<std::size_t>{1, 2, 3, 5});
}

TEST_CASE("the installed executable reports exit codes") {
    const char* exe = std::getenv("RECNET_CLI");
    if (!exe) return;
    const auto dir = testsupport::scratch_dir("cli_exe");
    const std::string quiet = " > " + (dir / "log").string() + " 2>&1";
    auto status = [&](const std::string& args) {
        const int raw = std::system((std::string(exe) + " " + args + quiet).c_str());
        return WEXITSTATUS(raw);
    };
    CHECK(status("--version") == 0);
    CHECK(status("nonsense") == 1);
    CHECK(status("synth --seed-fraction 0 --out " + dir.string()) == 2);
    CHECK(status("build-graph --edges " + (dir / "none.csv").string() + " --out " + dir.string()) == 3);
}
