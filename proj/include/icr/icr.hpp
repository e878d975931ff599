#pragma once

#include "icr/model.hpp"
#include "icr/prox.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace icr {

enum class IcrVariant { unconstrained, nonnegative };
enum class Pruning { off, lemma1 };

struct IcrConfig {
    IcrVariant variant = IcrVariant::unconstrained;
    /// Relative stopping tolerance on ||x(n) - x(n-1)|| / max(1, ||x(n)||).
    double tol = 1e-6;
    int max_outer_iters = 500;
    Pruning pruning = Pruning::off;
    /// Pruning constant; defaults to 1 / (2 (q + p + 1)) when unset.
    std::optional<double> alpha;
    /// Lower bound on |mu_i| in the penalty denominator.
    double mu_floor = 1e-12;
    SolverSettings inner;
};

/// One outer iteration n >= 1.
struct IcrIteration {
    Vector x;                          ///< x(n)
    Vector mu;                         ///< running mean of x(1..n)
    double subproblem_objective = 0;   ///< f_n(x(n)), without the ||y||^2 constant
    double step_residual = 0;          ///< relative ||x(n) - x(n-1)||
    double map_cost = 0;               ///< map_cost of the hard-rounded iterate
    std::vector<Eigen::Index> pruned;  ///< cumulative pruned set, sorted
    int inner_iterations = 0;
    bool inner_converged = true;
};

struct IcrTrace {
    Vector mu0;  ///< A'y
    std::vector<IcrIteration> iterations;
    /// Raw activation ratios x*_i / mu*_i of the returned iterate (0 where x*_i = 0).
    Vector gamma_ratio;
    double alpha = 0;
    std::size_t best_index = 0;  ///< iteration returned as the solution (0-based)
};

struct IcrDiagnostics {
    /// d_n = |f_{n+1}(x(n+1)) - f_n(x(n))|, n = 1 .. N-1
    std::vector<double> d;
    /// n * d_n
    std::vector<double> scaled;
    /// sup of n * d_n over the last half of the sequence
    double tail_sup = 0;
    /// max(n d_n) over the late half of the tail divided by the early half
    double tail_growth = 1;
    bool quasi_cauchy_violation = false;
    double final_step_residual = 0;
};

/// All j with |mu_j| < alpha * rho_j (strict).
std::vector<Eigen::Index> lemma1_prune(const Vector& mu, const Vector& rho, double alpha);

/// Default pruning constant 1 / (2 (q + p + 1)).
double default_lemma1_alpha(Eigen::Index q, Eigen::Index p);

/// Rescale y and sigma by 1 / max(1, ||y||_inf). Returns the scaled model and
/// the factor applied.
std::pair<MeasurementModel, double> normalize_for_lemma1(const MeasurementModel& model);

std::pair<RecoverySolution, IcrTrace> icr_solve(const MeasurementModel& model,
                                                const SpikeSlabPrior& prior,
                                                const IcrConfig& config = {});

IcrDiagnostics icr_diagnostics(const IcrTrace& trace);

}  // namespace icr
