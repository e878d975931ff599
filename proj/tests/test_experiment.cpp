#include "icr/error.hpp"
#include "icr/experiment.hpp"
#include "icr/io.hpp"
#include "icr/synth.hpp"

#include <doctest.h>
#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

using namespace icr;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_bench() {
    ExperimentConfig cfg;
    cfg.p = 12;
    cfg.q = 8;
    cfg.k = 2;
    cfg.realizations = 6;
    cfg.seed = 11;
    return cfg;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / "icr_experiment_tests" / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("parallel_for visits every index once and rethrows the lowest failure") {
    std::vector<std::atomic<int>> hits(100);
    parallel_for(100, 4, [&](std::size_t i) { ++hits[i]; });
    for (auto& h : hits) CHECK(h.load() == 1);
    try {
        parallel_for(50, 4, [](std::size_t i) {
            if (i == 17 || i == 30) throw std::runtime_error(std::to_string(i));
        });
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "17");
    }
}

TEST_CASE("bench csv has the fixed header and one row per realization and method") {
    const auto cfg = small_bench();
    const auto r = run_synth_bench(cfg);
    const auto csv = bench_csv(r);
    CHECK(csv.rfind(std::string(kBenchCsvHeader) + "\n", 0) == 0);
    CHECK(r.rows.size() == 6 * 4);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 6 * 4);
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
        const auto& a = r.rows[i - 1];
        const auto& b = r.rows[i];
        CHECK((a.realization < b.realization || (a.realization == b.realization && a.method < b.method)));
    }
    for (const auto& row : r.rows) {
        CHECK(row.seed == derive_realization_seed(cfg.seed, row.realization));
        CHECK(row.mse_vs_global.has_value());
    }
}

TEST_CASE("results do not depend on the thread count") {
    auto cfg = small_bench();
    const auto one = bench_csv(run_synth_bench(cfg));
    cfg.threads = 4;
    const auto four = bench_csv(run_synth_bench(cfg));
    CHECK(one == four);
    const auto json = nlohmann::json::parse(bench_summary_json(cfg, run_synth_bench(cfg)));
    CHECK(json["schema_version"] == 1);
    CHECK(json["methods"].size() == 4);
}

TEST_CASE("oracle requests above the size cap are refused, defaults skip it") {
    auto cfg = small_bench();
    cfg.p = 30;
    cfg.q = 15;
    cfg.realizations = 1;
    for (const auto& row : run_synth_bench(cfg).rows) CHECK(row.method != "oracle");
    cfg.methods = std::vector<std::string>{"icr", "oracle"};
    try {
        run_synth_bench(cfg);
        FAIL("expected ProblemTooLarge");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ProblemTooLarge);
    }
}

TEST_CASE("sweep grid validation and output shape") {
    auto cfg = small_bench();
    cfg.realizations = 2;
    cfg.sweep_values = {};
    CHECK_THROWS_AS(run_sweep(cfg), Error);
    cfg.sweep_values = {1.5};
    CHECK_THROWS_AS(run_sweep(cfg), Error);
    cfg.sweep_values = {1, 3};
    cfg.methods = std::vector<std::string>{"icr", "elastic_net"};
    const auto pts = run_sweep(cfg);
    REQUIRE(pts.size() == 2);
    const auto csv = sweep_csv(cfg, pts);
    CHECK(csv.rfind(std::string(kSweepCsvHeader) + "\n", 0) == 0);
    // same realization seeds at each grid point
    CHECK(pts[0].result.rows[0].seed == pts[1].result.rows[0].seed);
}

TEST_CASE("exported instance solves to the same answer as the in-memory one") {
    auto cfg = small_bench();
    const fs::path dir = fresh_dir("export");
    export_synth_instance(cfg, dir);
    const auto inst = generate(synth_spec(cfg, derive_realization_seed(cfg.seed, 0)));
    CHECK(read_matrix(dir / "design.icrmat") == inst.design);
    CHECK(read_vector(dir / "observation.icrmat") == inst.observation);

    ExperimentConfig solve;
    solve.command = "solve";
    solve.design = (dir / "design.icrmat").string();
    solve.observation = (dir / "observation.icrmat").string();
    solve.kappa = static_cast<double>(cfg.k) / cfg.p;
    solve.sigma = cfg.sigma;
    const auto report = nlohmann::json::parse(run_solve(solve));
    const auto direct = icr_solve(inst.model(), synth_prior(cfg), icr_config(cfg, IcrVariant::unconstrained)).first;
    REQUIRE(report["x"].size() == static_cast<std::size_t>(cfg.p));
    for (int i = 0; i < cfg.p; ++i) CHECK(report["x"][i].get<double>() == direct.x[i]);
    CHECK(report["cost"].get<double>() == direct.cost);
    CHECK(report.contains("trace"));

    solve.kappa.reset();
    CHECK_THROWS_AS(run_solve(solve), Error);
}

TEST_CASE("run_command writes its files into the output directory") {
    auto cfg = small_bench();
    cfg.realizations = 2;
    cfg.out_dir = fresh_dir("cmd").string();
    const auto files = run_command(cfg);
    CHECK(fs::exists(fs::path(cfg.out_dir) / "synth_bench.csv"));
    CHECK(fs::exists(fs::path(cfg.out_dir) / "synth_bench_summary.json"));
    const auto back = parse_config(slurp(fs::path(cfg.out_dir) / "config.txt"));
    CHECK(back == cfg);
    CHECK(files.size() == 3);
}

TEST_CASE("mnist run on the bundled sample") {
    ExperimentConfig cfg;
    cfg.command = "mnist";
    cfg.mnist_images = std::string(ICR_TEST_DATA_DIR) + "/mnist-sample-100-images-idx3-ubyte.gz";
    cfg.mnist_labels = std::string(ICR_TEST_DATA_DIR) + "/mnist-sample-100-labels-idx1-ubyte.gz";
    cfg.mnist_count = 2;
    cfg.threads = 2;
    const auto r = run_mnist(cfg);
    CHECK(r.rows == 28);
    CHECK(r.table.size() == 6);
    CHECK(r.reconstructions.size() == 2);
    CHECK(mnist_csv(r).rfind(std::string(kMnistCsvHeader) + "\n", 0) == 0);
    const auto j = nlohmann::json::parse(mnist_summary_json(cfg, r));
    CHECK(j.contains("ordering"));
    cfg.mnist_images.clear();
    CHECK_THROWS_AS(run_mnist(cfg), Error);
}
