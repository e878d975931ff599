#pragma once

#include "icr/model.hpp"
#include "icr/prox.hpp"

#include <optional>
#include <vector>

namespace icr {

inline constexpr int kOracleHardMaxP = 24;

struct OracleConfig {
    int max_p = 20;
    std::optional<int> max_support;
    bool nonneg = false;
    /// Used only for the non-negative per-support solves.
    SolverSettings settings;
};

struct SupportFit {
    Vector x;  ///< length p, zero off the support
    double cost = 0;
};

/// Ridge regression restricted to `support`:
/// min ||y - A_S x_S||^2 + lambda ||x_S||^2 + sum_{i in S} rho_i.
SupportFit ridge_on_support(const MeasurementModel& model, const SpikeSlabPrior& prior,
                            const std::vector<Eigen::Index>& support);

/// Exhaustive minimizer of map_cost over every activation pattern (optionally
/// capped in size). Ties go to the smaller support, then the lexicographically
/// smaller one. The returned gamma is the winning support itself.
RecoverySolution global_map(const MeasurementModel& model, const SpikeSlabPrior& prior,
                            const OracleConfig& config = {});

}  // namespace icr
