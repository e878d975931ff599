#pragma once

#include "icr/config.hpp"
#include "icr/metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace icr {

/// Calls fn(i) for i in [0, n) on up to `threads` workers pulling indices from
/// a shared counter. The exception of the lowest failing index is rethrown.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

/// One (realization, method) outcome.
struct MethodRow {
    std::size_t realization = 0;
    std::uint64_t seed = 0;
    std::string method;
    double cost = 0;
    double mse_vs_x0 = 0;
    double sm_vs_x0 = 0;
    Eigen::Index sparsity = 0;
    std::optional<double> mse_vs_global;
    std::optional<double> sm_vs_global;
    int iterations = 0;
    bool converged = false;
    std::optional<double> tail_growth;  ///< ICR variants only
    double wall_time_s = 0;             ///< kept out of the CSV
    Eigen::Index p = 0;
};

struct MethodSummary {
    std::string method;
    EvalReport vs_x0;
    std::optional<EvalReport> vs_global;
    int converged_runs = 0;
    int quasi_cauchy_violations = 0;
    double max_tail_growth = 0;
};

struct BenchResult {
    std::vector<MethodRow> rows;  ///< sorted by (realization, method)
    std::vector<MethodSummary> methods;
    std::vector<std::string> skipped;  ///< requested but not applicable, with reason
};

/// Runs cfg.realizations seeded instances with every resolved method.
BenchResult run_synth_bench(const ExperimentConfig& cfg);

inline constexpr std::string_view kBenchCsvHeader =
    "realization,seed,method,cost,mse_vs_x0,sm_vs_x0,sparsity,mse_vs_global,sm_vs_global,"
    "iterations,converged,tail_growth";

std::string bench_csv(const BenchResult& r);
std::string bench_summary_json(const ExperimentConfig& cfg, const BenchResult& r);

struct SweepPoint {
    double value = 0;
    BenchResult result;
};

/// cfg.sweep_param over cfg.sweep_values; every grid point reuses the same
/// realization seeds. Raises InvalidArgument on an empty grid.
std::vector<SweepPoint> run_sweep(const ExperimentConfig& cfg);

inline constexpr std::string_view kSweepCsvHeader = "sweep_param,grid_value,method,metric,mean";

std::string sweep_csv(const ExperimentConfig& cfg, const std::vector<SweepPoint>& points);
std::string sweep_summary_json(const ExperimentConfig& cfg, const std::vector<SweepPoint>& points);

struct ImageRow {
    std::size_t image = 0;
    std::optional<int> label;
    std::uint64_t seed = 0;
    std::string method;
    double mse = 0;
    Eigen::Index sparsity = 0;
    int iterations = 0;
    bool converged = false;
    double wall_time_s = 0;
};

struct MnistResult {
    int rows = 0;
    int cols = 0;
    std::vector<ImageRow> table;  ///< sorted by (image, method)
    /// Reconstructions of the first method per image, as bytes.
    std::vector<std::vector<std::uint8_t>> reconstructions;
    std::vector<std::size_t> images;
    std::vector<std::pair<std::string, double>> mean_mse;  ///< method order as configured
};

MnistResult run_mnist(const ExperimentConfig& cfg);

inline constexpr std::string_view kMnistCsvHeader =
    "image,label,seed,method,mse,sparsity,iterations,converged";

std::string mnist_csv(const MnistResult& r);
std::string mnist_summary_json(const ExperimentConfig& cfg, const MnistResult& r);

/// Reads cfg.design / cfg.observation, solves with the single configured
/// method and returns the JSON report (x, gamma, cost, trace).
std::string run_solve(const ExperimentConfig& cfg);

/// Writes design, observation and x0 of realization 0 of cfg as ICRMAT01
/// files into `dir`.
void export_synth_instance(const ExperimentConfig& cfg, const std::filesystem::path& dir);

/// Output root: cfg.out_dir, else $ICR_OUT_DIR, else the working directory.
std::filesystem::path output_dir(const ExperimentConfig& cfg);

/// Run the configured command and write its files. Returns the files written.
std::vector<std::filesystem::path> run_command(const ExperimentConfig& cfg);

}  // namespace icr
