#pragma once

#include "icr/model.hpp"

#include <span>
#include <vector>

namespace icr {

/// ||x - ref||^2 / p
double mse(const Vector& x, const Vector& reference);

/// Symmetric default threshold: 1e-6 * max(1, ||x||_inf, ||ref||_inf).
double default_support_threshold(const Vector& x, const Vector& reference);

/// Percentage of coordinates whose zero/nonzero status agrees.
double support_match(const Vector& x, const Vector& reference, double zero_threshold);
double support_match(const Vector& x, const Vector& reference);

Eigen::Index sparsity_level(const Vector& x, double zero_threshold);

/// Aggregate figures of merit for one method over a set of realizations.
struct EvalReport {
    double avg_cost = 0;
    double mse = 0;  ///< mean-normalized (||.||^2 / p), averaged over realizations
    double mse_sum = 0;  ///< sum-normalized (||.||^2), averaged
    double support_match_pct = 0;
    double sparsity_level = 0;
    double wall_time_s = 0;  ///< median over realizations
    int n_realizations = 0;
};

/// Per-realization record fed to `aggregate`.
struct RealizationMetrics {
    double cost = 0;
    double mse = 0;
    double support_match_pct = 0;
    double sparsity = 0;
    double wall_time_s = 0;
    Eigen::Index p = 0;
};

/// Means are accumulated in input order so the result does not depend on
/// how the realizations were scheduled, only on their order.
EvalReport aggregate(std::span<const RealizationMetrics> rows);

double median(std::vector<double> values);

}  // namespace icr
