#include "icr/metrics.hpp"

#include "icr/error.hpp"

#include <algorithm>
#include <cmath>

namespace icr {

namespace {

void same_length(const Vector& a, const Vector& b) {
    if (a.size() != b.size())
        throw Error(ErrorCode::DimensionMismatch, "vectors have different lengths");
    if (a.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty vector");
}

}  // namespace

double mse(const Vector& x, const Vector& reference) {
    same_length(x, reference);
    return (x - reference).squaredNorm() / static_cast<double>(x.size());
}

double default_support_threshold(const Vector& x, const Vector& reference) {
    const double scale = std::max(x.cwiseAbs().maxCoeff(), reference.cwiseAbs().maxCoeff());
    return 1e-6 * std::max(1.0, scale);
}

double support_match(const Vector& x, const Vector& reference, double zero_threshold) {
    same_length(x, reference);
    if (!(zero_threshold > 0.0))
        throw Error(ErrorCode::InvalidArgument, "zero threshold must be positive");
    Eigen::Index agree = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        agree += (std::abs(x[i]) > zero_threshold) == (std::abs(reference[i]) > zero_threshold);
    return 100.0 * static_cast<double>(agree) / static_cast<double>(x.size());
}

double support_match(const Vector& x, const Vector& reference) {
    same_length(x, reference);
    return support_match(x, reference, default_support_threshold(x, reference));
}

Eigen::Index sparsity_level(const Vector& x, double zero_threshold) {
    return (x.array().abs() > zero_threshold).count();
}

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    const auto mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid),
                     values.end());
    const double hi = values[mid];
    if (values.size() % 2 == 1) return hi;
    const double lo = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

EvalReport aggregate(std::span<const RealizationMetrics> rows) {
    EvalReport r;
    r.n_realizations = static_cast<int>(rows.size());
    if (rows.empty()) return r;
    std::vector<double> times;
    times.reserve(rows.size());
    for (const auto& m : rows) {
        r.avg_cost += m.cost;
        r.mse += m.mse;
        r.mse_sum += m.mse * static_cast<double>(m.p);
        r.support_match_pct += m.support_match_pct;
        r.sparsity_level += m.sparsity;
        times.push_back(m.wall_time_s);
    }
    const double n = static_cast<double>(rows.size());
    r.avg_cost /= n;
    r.mse /= n;
    r.mse_sum /= n;
    r.support_match_pct /= n;
    r.sparsity_level /= n;
    r.wall_time_s = median(std::move(times));
    return r;
}

}  // namespace icr
