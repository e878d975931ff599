#include "icr/model.hpp"

#include "icr/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace icr {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonSparsifyingPrior: return "NonSparsifyingPrior";
    case ErrorCode::PowerIterationStall: return "PowerIterationStall";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::MaxItersExceeded: return "MaxItersExceeded";
    case ErrorCode::ProblemTooLarge: return "ProblemTooLarge";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::TruncatedPayload: return "TruncatedPayload";
    case ErrorCode::TrailingBytes: return "TrailingBytes";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

MeasurementModel::MeasurementModel(Matrix design, Vector observation, double noise_sigma,
                                   bool require_unit_columns)
    : design_(std::move(design)), observation_(std::move(observation)), sigma_(noise_sigma) {
    if (design_.rows() < 1 || design_.cols() < 1)
        throw Error(ErrorCode::InvalidArgument, "design matrix must be at least 1x1");
    if (observation_.size() != design_.rows())
        throw Error(ErrorCode::DimensionMismatch, "observation length does not match design rows");
    if (!(sigma_ > 0.0) || !std::isfinite(sigma_))
        throw Error(ErrorCode::InvalidArgument, "noise sigma must be positive and finite");
    if (!design_.allFinite() || !observation_.allFinite())
        throw Error(ErrorCode::NonFiniteInput, "measurement model contains non-finite values");
    if (require_unit_columns && !has_unit_columns())
        throw Error(ErrorCode::InvalidArgument, "design matrix columns are not unit norm");
}

bool MeasurementModel::has_unit_columns(double tol) const {
    for (Eigen::Index j = 0; j < design_.cols(); ++j)
        if (std::abs(design_.col(j).norm() - 1.0) > tol) return false;
    return true;
}

Vector compute_rho(const Vector& kappa, double lambda, double sigma) {
    const double s2 = sigma * sigma;
    Vector rho(kappa.size());
    for (Eigen::Index i = 0; i < kappa.size(); ++i) {
        const double k = kappa[i];
        const double odds = (1.0 - k) / k;
        rho[i] = s2 * std::log(2.0 * std::numbers::pi * s2 * odds * odds / lambda);
    }
    return rho;
}

namespace {

void validate_prior_params(const Vector& kappa, double lambda, double sigma) {
    if (kappa.size() < 1) throw Error(ErrorCode::InvalidArgument, "kappa must be non-empty");
    for (Eigen::Index i = 0; i < kappa.size(); ++i)
        if (!(kappa[i] > 0.0 && kappa[i] < 1.0))
            throw Error(ErrorCode::InvalidArgument, "kappa entries must lie strictly in (0,1)");
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw Error(ErrorCode::InvalidArgument, "sigma must be positive");
}

Eigen::Index count_non_positive(const Vector& rho) {
    return (rho.array() <= 0.0).count();
}

}  // namespace

Vector compute_rho_checked(const Vector& kappa, double lambda, double sigma) {
    validate_prior_params(kappa, lambda, sigma);
    Vector rho = compute_rho(kappa, lambda, sigma);
    if (const auto bad = count_non_positive(rho); bad > 0) {
        std::ostringstream os;
        os << bad << " of " << rho.size()
           << " activation penalties are <= 0 (kappa too large for sigma/lambda); min rho = "
           << rho.minCoeff();
        throw Error(ErrorCode::NonSparsifyingPrior, os.str());
    }
    return rho;
}

SpikeSlabPrior::SpikeSlabPrior(Vector kappa, double lambda, double sigma, PriorOptions options)
    : kappa_(std::move(kappa)), lambda_(lambda), sigma_(sigma) {
    if (options.allow_non_sparsifying) {
        validate_prior_params(kappa_, lambda_, sigma_);
        rho_ = compute_rho(kappa_, lambda_, sigma_);
        non_sparsifying_ = count_non_positive(rho_);
    } else {
        rho_ = compute_rho_checked(kappa_, lambda_, sigma_);
    }
    if (!rho_.allFinite()) throw Error(ErrorCode::NonFiniteInput, "rho is not finite");
}

SpikeSlabPrior SpikeSlabPrior::uniform(Eigen::Index p, double kappa, double lambda, double sigma,
                                       PriorOptions options) {
    return SpikeSlabPrior(Vector::Constant(p, kappa), lambda, sigma, options);
}

ActivationPattern::ActivationPattern(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto& b : bits_)
        if (b > 1) throw Error(ErrorCode::InvalidArgument, "activation entries must be 0 or 1");
}

ActivationPattern ActivationPattern::from_threshold(const Vector& x, double threshold) {
    ActivationPattern g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) g.set(i, std::abs(x[i]) > threshold);
    return g;
}

Eigen::Index ActivationPattern::count() const noexcept {
    Eigen::Index n = 0;
    for (auto b : bits_) n += b;
    return n;
}

std::vector<Eigen::Index> ActivationPattern::support() const {
    std::vector<Eigen::Index> s;
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i]) s.push_back(static_cast<Eigen::Index>(i));
    return s;
}

namespace {

void check_dims(const Vector& x, const ActivationPattern& gamma, const MeasurementModel& model,
                const SpikeSlabPrior& prior) {
    const auto p = model.cols();
    if (x.size() != p || gamma.size() != p || prior.size() != p)
        throw Error(ErrorCode::DimensionMismatch, "x, gamma, prior and design columns disagree");
}

}  // namespace

double map_cost(const Vector& x, const ActivationPattern& gamma, const MeasurementModel& model,
                const SpikeSlabPrior& prior) {
    check_dims(x, gamma, model, prior);
    const double fit = (model.observation() - model.design() * x).squaredNorm();
    double activation = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (gamma[i]) activation += prior.rho()[i];
    return fit + prior.lambda() * x.squaredNorm() + activation;
}

double log_posterior(const Vector& x, const ActivationPattern& gamma,
                     const MeasurementModel& model, const SpikeSlabPrior& prior) {
    check_dims(x, gamma, model, prior);
    const double s2 = prior.sigma() * prior.sigma();
    const double lambda = prior.lambda();
    // Gaussian likelihood without its normalizer.
    double lp = -(model.observation() - model.design() * x).squaredNorm() / (2.0 * s2);
    const double slab_log_norm = -0.5 * std::log(2.0 * std::numbers::pi * s2 / lambda);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double k = prior.kappa()[i];
        if (gamma[i]) {
            lp += slab_log_norm - lambda * x[i] * x[i] / (2.0 * s2) + std::log(k);
        } else {
            if (x[i] != 0.0) return -std::numeric_limits<double>::infinity();
            lp += std::log1p(-k);
        }
    }
    return lp;
}

double default_zero_threshold(const Vector& x) {
    const double scale = x.size() > 0 ? x.cwiseAbs().maxCoeff() : 0.0;
    return 1e-6 * std::max(1.0, scale);
}

RecoverySolution make_solution(Vector x, const MeasurementModel& model,
                               const SpikeSlabPrior& prior, int iterations, bool converged) {
    const double thr = default_zero_threshold(x);
    RecoverySolution sol;
    sol.gamma = ActivationPattern::from_threshold(x, thr);
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (!sol.gamma[i]) x[i] = 0.0;
    sol.x = std::move(x);
    sol.cost = map_cost(sol.x, sol.gamma, model, prior);
    sol.iterations = iterations;
    sol.converged = converged;
    return sol;
}

}  // namespace icr
