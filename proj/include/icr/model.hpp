#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace icr {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Observation model y = A x + n with n ~ N(0, sigma^2 I).
class MeasurementModel {
public:
    /// Throws DimensionMismatch / InvalidArgument when the invariants fail.
    /// With require_unit_columns every column norm must be within 1e-9 of 1.
    MeasurementModel(Matrix design, Vector observation, double noise_sigma,
                     bool require_unit_columns = false);

    const Matrix& design() const noexcept { return design_; }
    const Vector& observation() const noexcept { return observation_; }
    double sigma() const noexcept { return sigma_; }
    Eigen::Index rows() const noexcept { return design_.rows(); }
    Eigen::Index cols() const noexcept { return design_.cols(); }

    bool has_unit_columns(double tol = 1e-9) const;

private:
    Matrix design_;
    Vector observation_;
    double sigma_;
};

struct PriorOptions {
    /// When false, rho_i <= 0 raises NonSparsifyingPrior; otherwise it is
    /// recorded as a warning on the prior.
    bool allow_non_sparsifying = false;
};

/// Spike-and-slab prior: gamma_i ~ Bernoulli(kappa_i), and given gamma_i = 1,
/// x_i ~ N(0, sigma^2 / lambda). The activation penalties rho are computed
/// once at construction.
class SpikeSlabPrior {
public:
    SpikeSlabPrior(Vector kappa, double lambda, double sigma, PriorOptions options = {});

    static SpikeSlabPrior uniform(Eigen::Index p, double kappa, double lambda, double sigma,
                                  PriorOptions options = {});

    const Vector& kappa() const noexcept { return kappa_; }
    double lambda() const noexcept { return lambda_; }
    double sigma() const noexcept { return sigma_; }
    const Vector& rho() const noexcept { return rho_; }
    Eigen::Index size() const noexcept { return kappa_.size(); }

    /// Number of coordinates with rho_i <= 0 (only nonzero when allowed).
    Eigen::Index non_sparsifying_count() const noexcept { return non_sparsifying_; }

private:
    Vector kappa_;
    double lambda_;
    double sigma_;
    Vector rho_;
    Eigen::Index non_sparsifying_ = 0;
};

/// Binary activation vector gamma.
class ActivationPattern {
public:
    ActivationPattern() = default;
    explicit ActivationPattern(Eigen::Index p) : bits_(static_cast<std::size_t>(p), 0) {}
    explicit ActivationPattern(std::vector<std::uint8_t> bits);

    /// gamma_i = 1{|x_i| > threshold}
    static ActivationPattern from_threshold(const Vector& x, double threshold);

    Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(bits_.size()); }
    bool operator[](Eigen::Index i) const { return bits_[static_cast<std::size_t>(i)] != 0; }
    void set(Eigen::Index i, bool on) { bits_[static_cast<std::size_t>(i)] = on ? 1 : 0; }
    Eigen::Index count() const noexcept;
    std::vector<Eigen::Index> support() const;
    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

    friend bool operator==(const ActivationPattern&, const ActivationPattern&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

struct RecoverySolution {
    Vector x;
    ActivationPattern gamma;
    double cost = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// rho_i = sigma^2 log(2 pi sigma^2 (1 - kappa_i)^2 / (lambda kappa_i^2)).
/// Pure formula; no sign check.
Vector compute_rho(const Vector& kappa, double lambda, double sigma);

/// Same as the SpikeSlabPrior constructor's check: raises NonSparsifyingPrior
/// when any entry is <= 0.
Vector compute_rho_checked(const Vector& kappa, double lambda, double sigma);

/// ||y - A x||^2 + lambda ||x||^2 + sum_i rho_i gamma_i, with no rescaling.
double map_cost(const Vector& x, const ActivationPattern& gamma, const MeasurementModel& model,
                const SpikeSlabPrior& prior);

/// log f(y|A,x,gamma) + log f(x|gamma) + log f(gamma|kappa), minus the
/// (x, gamma)-independent Gaussian normalizer (q/2)(log sigma^2 + log 2 pi).
/// All kappa-only terms are kept. Returns -infinity when gamma_i = 0 but x_i != 0.
double log_posterior(const Vector& x, const ActivationPattern& gamma,
                     const MeasurementModel& model, const SpikeSlabPrior& prior);

/// Default hard-rounding threshold 1e-6 * max(1, ||x||_inf).
double default_zero_threshold(const Vector& x);

/// Hard-round x into gamma, zero the entries that fall below the threshold,
/// and evaluate map_cost on the resulting feasible pair.
RecoverySolution make_solution(Vector x, const MeasurementModel& model,
                               const SpikeSlabPrior& prior, int iterations, bool converged);

}  // namespace icr
