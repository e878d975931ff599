#pragma once

#include "icr/model.hpp"

#include <optional>

namespace icr {

/// Smooth part x' G x + c' x + constant of the convex subproblems.
/// G is symmetric PSD (A'A + lambda I when built from a model). The
/// Lipschitz constant of the gradient 2 G x + c is estimated once on
/// construction.
class QuadraticForm {
public:
    QuadraticForm(Matrix gram, Vector linear, double constant = 0.0);

    /// G = A'A + l2 I, c = -2 A'y, constant = ||y||^2.
    static QuadraticForm from_model(const MeasurementModel& model, double l2_weight);

    const Matrix& gram() const noexcept { return gram_; }
    const Vector& linear() const noexcept { return linear_; }
    double constant() const noexcept { return constant_; }
    double lipschitz() const noexcept { return lipschitz_; }
    Eigen::Index size() const noexcept { return linear_.size(); }

    double value(const Vector& x) const;
    Vector gradient(const Vector& x) const;

    /// G x. Forms built from a wide design (2q < p) apply A'(A x) + l2 x,
    /// which is cheaper than the dense p x p product.
    Vector apply(const Vector& x) const;

private:
    Matrix gram_;
    Matrix factor_;  ///< A when the factored product is used, else empty
    double shift_ = 0.0;
    Vector linear_;
    double constant_;
    double lipschitz_;
};

struct SolverSettings {
    int max_inner_iters = 2000;
    double kkt_tolerance = 1e-8;
};

enum class PenaltyMode { weighted_l1, nonneg };

struct ProxResult {
    Vector x;
    double objective = 0.0;
    double kkt = 0.0;
    int iterations = 0;
    /// false means MaxItersExceeded; x is then the best iterate seen.
    bool converged = false;
};

/// 2 * lambda_max(gram) by power iteration from a fixed pseudo-random start.
/// Raises PowerIterationStall if the Rayleigh quotient has not settled
/// after max(10 p, 1000) iterations.
double lipschitz_estimate(const Matrix& gram);

/// Norm-inf of the minimal-norm subgradient (weighted_l1) or of the
/// projected gradient (nonneg). Infinite penalties pin a coordinate to 0.
double kkt_residual(const Vector& x, const QuadraticForm& q, const Vector& penalty,
                    PenaltyMode mode);

/// argmin_x x'Gx + c'x + sum_i w_i |x_i|.  w_i = +inf pins x_i to exactly 0.
ProxResult solve_weighted_l1_quadratic(const QuadraticForm& q, const Vector& weights,
                                       const SolverSettings& settings = {},
                                       const std::optional<Vector>& warm_start = std::nullopt);

/// argmin_{x >= 0} x'Gx + (c + d)'x where d is the linear penalty.
/// d_i = +inf pins x_i to 0.
ProxResult solve_nonneg_linear_quadratic(const QuadraticForm& q, const Vector& linear_penalty,
                                         const SolverSettings& settings = {},
                                         const std::optional<Vector>& warm_start = std::nullopt);

/// Objective value including the penalty term, as minimized by the solvers.
double penalized_objective(const Vector& x, const QuadraticForm& q, const Vector& penalty,
                           PenaltyMode mode);

}  // namespace icr
