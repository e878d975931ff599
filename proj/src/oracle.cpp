#include "icr/oracle.hpp"

#include "icr/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace icr {

namespace {

void check_support(const std::vector<Eigen::Index>& support, Eigen::Index p) {
    for (std::size_t k = 0; k < support.size(); ++k) {
        if (support[k] < 0 || support[k] >= p)
            throw Error(ErrorCode::InvalidArgument, "support index out of range");
        if (k > 0 && support[k] <= support[k - 1])
            throw Error(ErrorCode::InvalidArgument, "support must be strictly increasing");
    }
}

/// Precomputed normal equations shared by every support.
struct NormalEquations {
    Matrix gram;  // A'A
    Vector rhs;   // A'y
    double yy;    // ||y||^2
    double lambda;

    NormalEquations(const MeasurementModel& model, double l2)
        : gram(model.design().transpose() * model.design()),
          rhs(model.design().transpose() * model.observation()),
          yy(model.observation().squaredNorm()),
          lambda(l2) {}

    /// Ridge solve on S. Returns the restricted smooth cost
    /// ||y||^2 - rhs_S' x_S (valid at the ridge stationary point).
    double solve(const std::vector<Eigen::Index>& s, Vector& xs) const {
        const auto k = static_cast<Eigen::Index>(s.size());
        if (k == 0) {
            xs.resize(0);
            return yy;
        }
        Matrix m(k, k);
        Vector b(k);
        for (Eigen::Index r = 0; r < k; ++r) {
            b[r] = rhs[s[r]];
            for (Eigen::Index c = 0; c < k; ++c) m(r, c) = gram(s[r], s[c]);
            m(r, r) += lambda;
        }
        xs = m.llt().solve(b);
        return yy - b.dot(xs);
    }

    /// Non-negative restricted solve; exact when the ridge solution is already >= 0.
    double solve_nonneg(const std::vector<Eigen::Index>& s, Vector& xs,
                        const SolverSettings& settings) const {
        const double ridge_cost = solve(s, xs);
        if (xs.size() == 0 || xs.minCoeff() >= 0.0) return ridge_cost;
        const auto k = static_cast<Eigen::Index>(s.size());
        Matrix m(k, k);
        Vector b(k);
        for (Eigen::Index r = 0; r < k; ++r) {
            b[r] = rhs[s[r]];
            for (Eigen::Index c = 0; c < k; ++c) m(r, c) = gram(s[r], s[c]);
            m(r, r) += lambda;
        }
        QuadraticForm q(std::move(m), -2.0 * b, yy);
        ProxResult res = solve_nonneg_linear_quadratic(q, Vector::Zero(k), settings);
        xs = std::move(res.x);
        return res.objective;
    }
};

Vector scatter(const std::vector<Eigen::Index>& s, const Vector& xs, Eigen::Index p) {
    Vector x = Vector::Zero(p);
    for (std::size_t k = 0; k < s.size(); ++k) x[s[k]] = xs[static_cast<Eigen::Index>(k)];
    return x;
}

/// Advance `s` to the next k-combination of {0..p-1} in lexicographic order.
bool next_combination(std::vector<Eigen::Index>& s, Eigen::Index p) {
    const auto k = static_cast<Eigen::Index>(s.size());
    Eigen::Index i = k - 1;
    while (i >= 0 && s[i] == p - k + i) --i;
    if (i < 0) return false;
    ++s[i];
    for (Eigen::Index j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
    return true;
}

}  // namespace

SupportFit ridge_on_support(const MeasurementModel& model, const SpikeSlabPrior& prior,
                            const std::vector<Eigen::Index>& support) {
    if (prior.size() != model.cols())
        throw Error(ErrorCode::DimensionMismatch, "prior length does not match design columns");
    check_support(support, model.cols());
    NormalEquations ne(model, prior.lambda());
    Vector xs;
    ne.solve(support, xs);
    SupportFit fit;
    fit.x = scatter(support, xs, model.cols());
    ActivationPattern gamma(model.cols());
    for (auto i : support) gamma.set(i, true);
    fit.cost = map_cost(fit.x, gamma, model, prior);
    return fit;
}

RecoverySolution global_map(const MeasurementModel& model, const SpikeSlabPrior& prior,
                            const OracleConfig& config) {
    const Eigen::Index p = model.cols();
    if (config.max_p > kOracleHardMaxP)
        throw Error(ErrorCode::InvalidArgument, "oracle max_p cannot exceed 24");
    if (p > config.max_p) throw Error(ErrorCode::ProblemTooLarge, "p exceeds oracle max_p");
    if (prior.size() != p)
        throw Error(ErrorCode::DimensionMismatch, "prior length does not match design columns");
    const Eigen::Index kmax =
        config.max_support ? std::min<Eigen::Index>(*config.max_support, p) : p;
    if (kmax < 0) throw Error(ErrorCode::InvalidArgument, "max_support must be nonnegative");

    const NormalEquations ne(model, prior.lambda());
    const Vector& rho = prior.rho();

    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<Eigen::Index> best_support;
    Vector best_xs;
    Vector xs;

    for (Eigen::Index k = 0; k <= kmax; ++k) {
        std::vector<Eigen::Index> s(static_cast<std::size_t>(k));
        for (Eigen::Index j = 0; j < k; ++j) s[static_cast<std::size_t>(j)] = j;
        do {
            double cost = config.nonneg ? ne.solve_nonneg(s, xs, config.settings)
                                        : ne.solve(s, xs);
            for (auto i : s) cost += rho[i];
            // enumeration order is (size, lex), so only strict improvements replace
            const double tie_tol = 1e-12 * std::max(1.0, std::abs(best_cost));
            if (cost < best_cost - tie_tol || !std::isfinite(best_cost)) {
                best_cost = cost;
                best_support = s;
                best_xs = xs;
            }
        } while (next_combination(s, p));
    }

    RecoverySolution sol;
    sol.x = scatter(best_support, best_xs, p);
    sol.gamma = ActivationPattern(p);
    for (auto i : best_support) sol.gamma.set(i, true);
    sol.cost = map_cost(sol.x, sol.gamma, model, prior);
    sol.iterations = 0;
    sol.converged = true;
    return sol;
}

}  // namespace icr
