#include "icr/baselines.hpp"

#include "icr/error.hpp"

#include <algorithm>
#include <cmath>

namespace icr {

ElasticNetParams ElasticNetParams::relaxation_of(const SpikeSlabPrior& prior) {
    return {std::max(prior.rho().mean(), 0.0), prior.lambda()};
}

BaselineResult elastic_net(const MeasurementModel& model, const SpikeSlabPrior& prior,
                           const ElasticNetParams& params, const SolverSettings& settings) {
    if (!(params.l1_weight >= 0.0) || !(params.l2_weight >= 0.0) ||
        !std::isfinite(params.l1_weight) || !std::isfinite(params.l2_weight))
        throw Error(ErrorCode::InvalidArgument, "elastic net weights must be finite and >= 0");
    if (params.l1_weight == 0.0 && params.l2_weight == 0.0)
        throw Error(ErrorCode::InvalidArgument, "elastic net weights cannot both be zero");
    if (prior.size() != model.cols())
        throw Error(ErrorCode::DimensionMismatch, "prior length does not match design columns");

    const QuadraticForm quad = QuadraticForm::from_model(model, params.l2_weight);
    const Vector weights = Vector::Constant(model.cols(), params.l1_weight);
    ProxResult res = solve_weighted_l1_quadratic(quad, weights, settings);
    BaselineResult out;
    out.kkt = res.kkt;
    out.solution = make_solution(std::move(res.x), model, prior, res.iterations, res.converged);
    return out;
}

BaselineResult lasso(const MeasurementModel& model, const SpikeSlabPrior& prior, double l1_weight,
                     const SolverSettings& settings) {
    return elastic_net(model, prior, {l1_weight, 0.0}, settings);
}

}  // namespace icr
