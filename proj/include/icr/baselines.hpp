#pragma once

#include "icr/model.hpp"
#include "icr/prox.hpp"

namespace icr {

struct ElasticNetParams {
    double l1_weight = 0;
    double l2_weight = 0;

    /// l2 = lambda, l1 = mean(rho) clamped at 0.
    static ElasticNetParams relaxation_of(const SpikeSlabPrior& prior);
};

struct BaselineResult {
    RecoverySolution solution;
    double kkt = 0;
};

/// min ||y - A x||^2 + l2 ||x||^2 + l1 ||x||_1, reported with map_cost under
/// `prior` so costs are comparable with ICR.
BaselineResult elastic_net(const MeasurementModel& model, const SpikeSlabPrior& prior,
                           const ElasticNetParams& params, const SolverSettings& settings = {});

/// Elastic net with l2 = 0.
BaselineResult lasso(const MeasurementModel& model, const SpikeSlabPrior& prior, double l1_weight,
                     const SolverSettings& settings = {});

}  // namespace icr
