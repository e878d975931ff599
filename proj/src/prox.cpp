#include "icr/prox.hpp"

#include "icr/error.hpp"
#include "icr/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace icr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kStepInflation = 1.01;
// Accepted iterations with an unchanged sign pattern before trying an exact
// solve on that pattern.
constexpr int kPolishAfter = 10;

bool is_pinned(double penalty) { return std::isinf(penalty) && penalty > 0.0; }

void validate_penalty(const QuadraticForm& q, const Vector& penalty, PenaltyMode mode) {
    if (penalty.size() != q.size())
        throw Error(ErrorCode::DimensionMismatch, "penalty length does not match quadratic form");
    for (Eigen::Index i = 0; i < penalty.size(); ++i) {
        const double w = penalty[i];
        if (std::isnan(w) || w == -kInf)
            throw Error(ErrorCode::NonFiniteInput, "penalty contains NaN or -inf");
        if (mode == PenaltyMode::weighted_l1 && w < 0.0)
            throw Error(ErrorCode::InvalidArgument, "l1 weights must be nonnegative");
    }
}

}  // namespace

double lipschitz_estimate(const Matrix& gram) {
    const Eigen::Index p = gram.rows();
    if (p == 0) return 0.0;
    CounterRng rng(0x1c2f5a3b9d7e4401ULL);
    Vector v(p);
    for (Eigen::Index i = 0; i < p; ++i) v[i] = 2.0 * rng.uniform() - 1.0;
    v.normalize();

    const int max_iters = std::max<int>(10 * static_cast<int>(p), 1000);
    double rayleigh = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        Vector w = gram * v;
        const double next = v.dot(w);
        const double wn = w.norm();
        if (wn == 0.0) return 0.0;
        v = w / wn;
        if (it > 0 && std::abs(next - rayleigh) <= 1e-10 * std::abs(next)) {
            // one more Rayleigh quotient on the normalized iterate is never smaller
            return 2.0 * std::max(next, v.dot(gram * v));
        }
        rayleigh = next;
    }
    throw Error(ErrorCode::PowerIterationStall, "power iteration did not settle");
}

QuadraticForm::QuadraticForm(Matrix gram, Vector linear, double constant)
    : gram_(std::move(gram)), linear_(std::move(linear)), constant_(constant) {
    if (gram_.rows() != gram_.cols() || gram_.rows() != linear_.size())
        throw Error(ErrorCode::DimensionMismatch, "quadratic form dimensions disagree");
    if (!gram_.allFinite() || !linear_.allFinite() || !std::isfinite(constant_))
        throw Error(ErrorCode::NonFiniteInput, "quadratic form contains non-finite values");
    const double scale = std::max(1.0, gram_.cwiseAbs().maxCoeff());
    if ((gram_ - gram_.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw Error(ErrorCode::InvalidArgument, "gram matrix is not symmetric");
    lipschitz_ = lipschitz_estimate(gram_);
}

QuadraticForm QuadraticForm::from_model(const MeasurementModel& model, double l2_weight) {
    const Matrix& a = model.design();
    Matrix gram = a.transpose() * a;
    gram.diagonal().array() += l2_weight;
    QuadraticForm q(std::move(gram), -2.0 * (a.transpose() * model.observation()),
                    model.observation().squaredNorm());
    if (2 * a.rows() < a.cols()) {
        q.factor_ = a;
        q.shift_ = l2_weight;
    }
    return q;
}

Vector QuadraticForm::apply(const Vector& x) const {
    if (factor_.size() == 0) return gram_ * x;
    Vector ax = factor_ * x;
    Vector out = factor_.transpose() * ax;
    out += shift_ * x;
    return out;
}

double QuadraticForm::value(const Vector& x) const {
    return x.dot(apply(x)) + linear_.dot(x) + constant_;
}

Vector QuadraticForm::gradient(const Vector& x) const { return 2.0 * apply(x) + linear_; }

double penalized_objective(const Vector& x, const QuadraticForm& q, const Vector& penalty,
                           PenaltyMode mode) {
    double pen = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0) continue;
        if (mode == PenaltyMode::nonneg && x[i] < 0.0) return kInf;
        pen += mode == PenaltyMode::weighted_l1 ? penalty[i] * std::abs(x[i]) : penalty[i] * x[i];
    }
    return q.value(x) + pen;
}

namespace {

double residual_from_gradient(const Vector& x, const Vector& grad, const Vector& penalty,
                              PenaltyMode mode) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double w = penalty[i];
        double r;
        if (is_pinned(w)) {
            r = x[i] == 0.0 ? 0.0 : kInf;
        } else if (mode == PenaltyMode::weighted_l1) {
            if (x[i] > 0.0)
                r = std::abs(grad[i] + w);
            else if (x[i] < 0.0)
                r = std::abs(grad[i] - w);
            else
                r = std::max(std::abs(grad[i]) - w, 0.0);
        } else {
            const double g = grad[i] + w;
            if (x[i] > 0.0)
                r = std::abs(g);
            else if (x[i] == 0.0)
                r = std::max(-g, 0.0);
            else
                r = kInf;
        }
        worst = std::max(worst, r);
    }
    return worst;
}

/// Accelerated proximal gradient with function-value and gradient restart.
/// The accepted iterate sequence is monotone in the objective. G*x is carried
/// along the extrapolation so each iteration costs one product with G.
/// Once the sign pattern has been stable for a few iterations the solver
/// tries the exact solve on that pattern (see `polish`).
ProxResult accelerated_prox(const QuadraticForm& q, const Vector& penalty, PenaltyMode mode,
                            const SolverSettings& settings,
                            const std::optional<Vector>& warm_start) {
    validate_penalty(q, penalty, mode);
    if (settings.max_inner_iters < 1 || !(settings.kkt_tolerance > 0.0))
        throw Error(ErrorCode::InvalidArgument, "solver settings must be positive");
    const Eigen::Index p = q.size();
    const Vector& c = q.linear();

    auto prox = [&](Vector& v, double step) {
        for (Eigen::Index i = 0; i < p; ++i) {
            const double w = penalty[i];
            if (is_pinned(w)) {
                v[i] = 0.0;
            } else if (mode == PenaltyMode::weighted_l1) {
                const double mag = std::abs(v[i]) - step * w;
                v[i] = mag > 0.0 ? std::copysign(mag, v[i]) : 0.0;
            } else {
                v[i] = std::max(v[i] - step * w, 0.0);
            }
        }
    };
    auto objective = [&](const Vector& x, const Vector& gx) {
        double pen = 0.0;
        for (Eigen::Index i = 0; i < p; ++i) {
            if (x[i] == 0.0) continue;
            pen += mode == PenaltyMode::weighted_l1 ? penalty[i] * std::abs(x[i])
                                                    : penalty[i] * x[i];
        }
        return x.dot(gx) + c.dot(x) + q.constant() + pen;
    };

    Vector x = Vector::Zero(p);
    if (warm_start) {
        if (warm_start->size() != p)
            throw Error(ErrorCode::DimensionMismatch, "warm start has wrong length");
        if (!warm_start->allFinite())
            throw Error(ErrorCode::NonFiniteInput, "warm start is not finite");
        x = *warm_start;
        for (Eigen::Index i = 0; i < p; ++i) {
            if (is_pinned(penalty[i])) x[i] = 0.0;
            if (mode == PenaltyMode::nonneg && x[i] < 0.0) x[i] = 0.0;
        }
    }

    ProxResult res;
    Vector gx = q.apply(x);
    double fx = objective(x, gx);
    double kkt = residual_from_gradient(x, 2.0 * gx + c, penalty, mode);
    if (kkt <= settings.kkt_tolerance) {
        res.x = std::move(x);
        res.objective = fx;
        res.kkt = kkt;
        res.converged = true;
        return res;
    }

    double lip = q.lipschitz();
    if (!(lip > 0.0)) lip = 1.0;
    const double step = 1.0 / (kStepInflation * lip);

    Vector y = x;
    Vector gy = gx;
    Vector x_prev = x;
    Vector gx_prev = gx;
    double theta = 1.0;
    bool plain_step = true;

    // Sign pattern of the current iterate and how long it has been stable.
    std::vector<signed char> pattern(static_cast<std::size_t>(p), 0);
    int stable = 0;
    auto update_pattern = [&] {
        bool same = true;
        for (Eigen::Index i = 0; i < p; ++i) {
            const signed char s = x[i] > 0.0 ? 1 : (x[i] < 0.0 ? -1 : 0);
            if (s != pattern[static_cast<std::size_t>(i)]) {
                pattern[static_cast<std::size_t>(i)] = s;
                same = false;
            }
        }
        stable = same ? stable + 1 : 0;
    };

    // Exact minimizer of the smooth part plus the linearized penalty on the
    // current pattern. Kept only if it preserves the pattern and does not
    // raise the objective; the KKT check below stays the acceptance test.
    auto polish = [&]() -> bool {
        std::vector<Eigen::Index> support;
        for (Eigen::Index i = 0; i < p; ++i)
            if (pattern[static_cast<std::size_t>(i)] != 0) support.push_back(i);
        if (support.empty()) return false;
        const auto s = static_cast<Eigen::Index>(support.size());
        Matrix h = 2.0 * q.gram()(support, support);
        Vector rhs(s);
        for (Eigen::Index a = 0; a < s; ++a) {
            const Eigen::Index i = support[static_cast<std::size_t>(a)];
            const double pen = mode == PenaltyMode::weighted_l1
                                   ? penalty[i] * pattern[static_cast<std::size_t>(i)]
                                   : penalty[i];
            rhs[a] = -(c[i] + pen);
        }
        Eigen::LLT<Matrix> llt(h);
        if (llt.info() != Eigen::Success) return false;
        const Vector zs = llt.solve(rhs);
        Vector z = Vector::Zero(p);
        for (Eigen::Index a = 0; a < s; ++a) {
            const Eigen::Index i = support[static_cast<std::size_t>(a)];
            if (!(zs[a] * pattern[static_cast<std::size_t>(i)] > 0.0)) return false;
            z[i] = zs[a];
        }
        Vector gz = q.apply(z);
        const double fz = objective(z, gz);
        if (!(fz <= fx)) return false;
        x_prev.swap(x);
        gx_prev.swap(gx);
        x = std::move(z);
        gx = std::move(gz);
        fx = fz;
        y = x;
        gy = gx;
        theta = 1.0;
        plain_step = true;
        return true;
    };

    int it = 0;
    for (; it < settings.max_inner_iters; ++it) {
        Vector cand = y - step * (2.0 * gy + c);
        prox(cand, step);
        Vector gcand = q.apply(cand);
        const double fcand = objective(cand, gcand);

        if (fcand > fx && !plain_step) {
            // momentum overshoot: restart from the current iterate
            y = x;
            gy = gx;
            theta = 1.0;
            plain_step = true;
            continue;
        }

        x_prev.swap(x);
        gx_prev.swap(gx);
        x = std::move(cand);
        gx = std::move(gcand);
        fx = fcand;

        kkt = residual_from_gradient(x, 2.0 * gx + c, penalty, mode);
        if (kkt <= settings.kkt_tolerance) {
            ++it;
            res.converged = true;
            break;
        }

        update_pattern();
        if (stable >= kPolishAfter) {
            stable = 0;
            if (polish()) {
                kkt = residual_from_gradient(x, 2.0 * gx + c, penalty, mode);
                if (kkt <= settings.kkt_tolerance) {
                    ++it;
                    res.converged = true;
                    break;
                }
                continue;
            }
        }

        double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
        double beta = (theta - 1.0) / theta_next;
        if ((y - x).dot(x - x_prev) > 0.0) {
            theta_next = 1.0;
            beta = 0.0;
        }
        theta = theta_next;
        y = x + beta * (x - x_prev);
        gy = gx + beta * (gx - gx_prev);
        plain_step = beta == 0.0;
    }

    res.x = std::move(x);
    res.objective = fx;
    res.kkt = kkt;
    res.iterations = it;
    return res;
}

}  // namespace

double kkt_residual(const Vector& x, const QuadraticForm& q, const Vector& penalty,
                    PenaltyMode mode) {
    validate_penalty(q, penalty, mode);
    if (x.size() != q.size())
        throw Error(ErrorCode::DimensionMismatch, "x length does not match quadratic form");
    return residual_from_gradient(x, q.gradient(x), penalty, mode);
}

ProxResult solve_weighted_l1_quadratic(const QuadraticForm& q, const Vector& weights,
                                       const SolverSettings& settings,
                                       const std::optional<Vector>& warm_start) {
    return accelerated_prox(q, weights, PenaltyMode::weighted_l1, settings, warm_start);
}

ProxResult solve_nonneg_linear_quadratic(const QuadraticForm& q, const Vector& linear_penalty,
                                         const SolverSettings& settings,
                                         const std::optional<Vector>& warm_start) {
    return accelerated_prox(q, linear_penalty, PenaltyMode::nonneg, settings, warm_start);
}

}  // namespace icr
