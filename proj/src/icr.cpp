#include "icr/icr.hpp"

#include "icr/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace icr {

std::vector<Eigen::Index> lemma1_prune(const Vector& mu, const Vector& rho, double alpha) {
    if (mu.size() != rho.size())
        throw Error(ErrorCode::DimensionMismatch, "mu and rho lengths differ");
    std::vector<Eigen::Index> out;
    for (Eigen::Index j = 0; j < mu.size(); ++j)
        if (std::abs(mu[j]) < alpha * rho[j]) out.push_back(j);
    return out;
}

double default_lemma1_alpha(Eigen::Index q, Eigen::Index p) {
    return 1.0 / (2.0 * static_cast<double>(q + p + 1));
}

std::pair<MeasurementModel, double> normalize_for_lemma1(const MeasurementModel& model) {
    const double ymax = model.observation().cwiseAbs().maxCoeff();
    const double factor = 1.0 / std::max(1.0, ymax);
    MeasurementModel scaled(model.design(), model.observation() * factor, model.sigma() * factor);
    return {std::move(scaled), factor};
}

namespace {

void validate(const MeasurementModel& model, const SpikeSlabPrior& prior, const IcrConfig& cfg,
              double alpha) {
    if (prior.size() != model.cols())
        throw Error(ErrorCode::DimensionMismatch, "prior length does not match design columns");
    if (!(cfg.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
    if (cfg.max_outer_iters < 1)
        throw Error(ErrorCode::InvalidArgument, "max_outer_iters must be positive");
    if (!(cfg.mu_floor > 0.0)) throw Error(ErrorCode::InvalidArgument, "mu_floor must be positive");
    if (cfg.pruning == Pruning::lemma1) {
        const double bound = 1.0 / (2.0 * static_cast<double>(model.rows() + model.cols()));
        if (!(alpha > 0.0 && alpha < bound))
            throw Error(ErrorCode::InvalidArgument, "pruning alpha must lie in (0, 1/(2(q+p)))");
        if (!model.has_unit_columns())
            throw Error(ErrorCode::InvalidArgument, "pruning requires unit-norm design columns");
        if (model.observation().cwiseAbs().maxCoeff() > 1.0)
            throw Error(ErrorCode::InvalidArgument,
                        "pruning requires ||y||_inf <= 1; see normalize_for_lemma1");
    }
}

}  // namespace

std::pair<RecoverySolution, IcrTrace> icr_solve(const MeasurementModel& model,
                                                const SpikeSlabPrior& prior,
                                                const IcrConfig& config) {
    const Eigen::Index p = model.cols();
    const double alpha = config.alpha.value_or(default_lemma1_alpha(model.rows(), p));
    validate(model, prior, config, alpha);

    const Vector& rho = prior.rho();
    // Non-positive rho means activation is free; the surrogate drops its term.
    const Vector rho_pos = rho.cwiseMax(0.0);
    const QuadraticForm quad = QuadraticForm::from_model(model, prior.lambda());
    const bool nonneg = config.variant == IcrVariant::nonnegative;

    IcrTrace trace;
    trace.alpha = alpha;
    trace.mu0 = model.design().transpose() * model.observation();

    Vector mu = trace.mu0;
    Vector sum_x = Vector::Zero(p);
    Vector x_prev = Vector::Zero(p);
    std::vector<bool> pruned_mask(static_cast<std::size_t>(p), false);
    std::vector<Eigen::Index> pruned;
    Vector penalty(p);

    bool converged = false;
    double best_cost = std::numeric_limits<double>::infinity();
    std::size_t best = 0;

    for (int n = 1; n <= config.max_outer_iters; ++n) {
        if (config.pruning == Pruning::lemma1) {
            bool grew = false;
            for (Eigen::Index j : lemma1_prune(mu, rho, alpha)) {
                if (!pruned_mask[static_cast<std::size_t>(j)]) {
                    pruned_mask[static_cast<std::size_t>(j)] = true;
                    pruned.push_back(j);
                    grew = true;
                }
            }
            if (grew) std::sort(pruned.begin(), pruned.end());
        }
        for (Eigen::Index i = 0; i < p; ++i) {
            penalty[i] = pruned_mask[static_cast<std::size_t>(i)]
                             ? std::numeric_limits<double>::infinity()
                             : rho_pos[i] / std::max(std::abs(mu[i]), config.mu_floor);
        }

        std::optional<Vector> warm;
        if (n > 1) warm = x_prev;
        ProxResult sub = nonneg ? solve_nonneg_linear_quadratic(quad, penalty, config.inner, warm)
                                : solve_weighted_l1_quadratic(quad, penalty, config.inner, warm);

        sum_x += sub.x;
        mu = sum_x / static_cast<double>(n);

        IcrIteration rec;
        rec.step_residual = (sub.x - x_prev).norm() / std::max(1.0, sub.x.norm());
        rec.subproblem_objective = sub.objective - quad.constant();
        rec.inner_iterations = sub.iterations;
        rec.inner_converged = sub.converged;
        rec.pruned = pruned;
        rec.map_cost = make_solution(sub.x, model, prior, n, false).cost;
        rec.x = std::move(sub.x);
        rec.mu = mu;
        x_prev = rec.x;

        if (rec.map_cost < best_cost) {
            best_cost = rec.map_cost;
            best = trace.iterations.size();
        }
        const bool stop = rec.step_residual <= config.tol;
        trace.iterations.push_back(std::move(rec));
        if (stop) {
            converged = true;
            break;
        }
    }

    const std::size_t chosen = converged ? trace.iterations.size() - 1 : best;
    trace.best_index = chosen;
    const IcrIteration& it = trace.iterations[chosen];
    trace.gamma_ratio = Vector::Zero(p);
    for (Eigen::Index i = 0; i < p; ++i)
        if (it.x[i] != 0.0)
            trace.gamma_ratio[i] = it.x[i] / std::copysign(std::max(std::abs(it.mu[i]),
                                                                    config.mu_floor),
                                                           it.mu[i]);

    RecoverySolution sol = make_solution(it.x, model, prior,
                                         static_cast<int>(trace.iterations.size()), converged);
    return {std::move(sol), std::move(trace)};
}

IcrDiagnostics icr_diagnostics(const IcrTrace& trace) {
    IcrDiagnostics diag;
    const auto& its = trace.iterations;
    if (its.empty()) throw Error(ErrorCode::InvalidArgument, "empty trace");
    diag.final_step_residual = its.back().step_residual;
    if (its.size() < 2) return diag;

    const double noise = 1e-12 * std::max(1.0, std::abs(its.back().subproblem_objective));
    for (std::size_t k = 0; k + 1 < its.size(); ++k) {
        const double n = static_cast<double>(k + 1);
        const double d =
            std::abs(its[k + 1].subproblem_objective - its[k].subproblem_objective);
        diag.d.push_back(d);
        diag.scaled.push_back(d > noise ? n * d : 0.0);
    }

    const std::size_t len = diag.scaled.size();
    const std::size_t tail_start = len / 2;
    for (std::size_t k = tail_start; k < len; ++k)
        diag.tail_sup = std::max(diag.tail_sup, diag.scaled[k]);

    const std::size_t tail_len = len - tail_start;
    if (tail_len >= 2) {
        const std::size_t mid = tail_start + tail_len / 2;
        double early = 0.0;
        double late = 0.0;
        for (std::size_t k = tail_start; k < mid; ++k) early = std::max(early, diag.scaled[k]);
        for (std::size_t k = mid; k < len; ++k) late = std::max(late, diag.scaled[k]);
        if (late == 0.0)
            diag.tail_growth = early == 0.0 ? 1.0 : 0.0;
        else
            diag.tail_growth = early == 0.0 ? std::numeric_limits<double>::infinity()
                                            : late / early;
        diag.quasi_cauchy_violation = diag.tail_growth > 10.0;
    }
    return diag;
}

}  // namespace icr
