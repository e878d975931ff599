#pragma once

#include "icr/baselines.hpp"
#include "icr/icr.hpp"
#include "icr/synth.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace icr {

inline constexpr int kConfigSchemaVersion = 1;

/// Everything a run needs. Optional fields print as "auto" and are resolved
/// per instance:
///   kappa     k/p for synthetic runs, 0.19 for images, required for solve
///   lambda    sigma^2
///   alpha     1 / (2 (q + p + 1))
///   en_l1     mean(rho) clamped at 0; en_l2 lambda; lasso_l1 mean(rho)
///   methods   per command (see default_methods)
struct ExperimentConfig {
    std::string command = "synth-bench";
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out_dir;

    int p = 64;
    int q = 32;
    int k = 10;
    double sigma = 0.01;
    AmplitudeDist amplitude = AmplitudeDist::standard_normal;
    bool unit_columns = true;
    int realizations = 100;

    std::optional<double> kappa;
    std::optional<double> lambda;
    bool allow_non_sparsifying = false;

    double tol = 1e-6;
    int max_outer_iters = 500;
    Pruning pruning = Pruning::off;
    std::optional<double> alpha;
    double mu_floor = 1e-12;
    int max_inner_iters = 2000;
    double kkt_tolerance = 1e-8;

    std::optional<double> en_l1;
    std::optional<double> en_l2;
    std::optional<double> lasso_l1;

    std::optional<std::vector<std::string>> methods;
    int oracle_max_p = 20;

    std::string sweep_param = "k";
    std::vector<double> sweep_values{5, 15, 25, 35, 50, 75};

    std::string mnist_images;
    std::string mnist_labels;
    int mnist_first = 0;
    int mnist_count = 20;
    int mnist_q = 150;

    std::string design;
    std::string observation;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Known keys in file order.
const std::vector<std::string_view>& config_keys();

/// Set one field from its text form. Unknown keys and bad values raise
/// InvalidArgument.
void set_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value);
std::string get_config_value(const ExperimentConfig& cfg, std::string_view key);

/// (key, value) pairs for every field, in file order.
std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& cfg);

/// "key = value" lines; '#' starts a comment. schema_version must match when
/// present. Later keys override earlier ones.
ExperimentConfig parse_config(std::string_view text);
void apply_config_text(ExperimentConfig& cfg, std::string_view text);
std::string format_config(const ExperimentConfig& cfg);

std::vector<std::string> default_methods(const ExperimentConfig& cfg);
std::vector<std::string> resolved_methods(const ExperimentConfig& cfg);

SynthSpec synth_spec(const ExperimentConfig& cfg, std::uint64_t seed);
double resolved_lambda(const ExperimentConfig& cfg);
SpikeSlabPrior synth_prior(const ExperimentConfig& cfg);
SolverSettings solver_settings(const ExperimentConfig& cfg);
IcrConfig icr_config(const ExperimentConfig& cfg, IcrVariant variant);
ElasticNetParams elastic_net_params(const ExperimentConfig& cfg, const SpikeSlabPrior& prior);
double lasso_weight(const ExperimentConfig& cfg, const SpikeSlabPrior& prior);

}  // namespace icr
