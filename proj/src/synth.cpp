#include "icr/synth.hpp"

#include "icr/error.hpp"
#include "icr/rng.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

namespace icr {

std::string_view to_string(AmplitudeDist d) noexcept {
    return d == AmplitudeDist::standard_normal ? "standard_normal" : "uniform_pm1";
}

AmplitudeDist amplitude_dist_from_string(std::string_view s) {
    if (s == "standard_normal") return AmplitudeDist::standard_normal;
    if (s == "uniform_pm1") return AmplitudeDist::uniform_pm1;
    throw Error(ErrorCode::InvalidArgument, "unknown amplitude distribution: " + std::string(s));
}

MeasurementModel SynthInstance::model(std::optional<double> nominal_sigma) const {
    const double s = nominal_sigma.value_or(sigma);
    return MeasurementModel(design, observation, s);
}

Matrix gaussian_design(Eigen::Index q, Eigen::Index p, CounterRng& rng, bool unit_columns) {
    Matrix a(q, p);
    for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index i = 0; i < q; ++i) a(i, j) = rng.normal();
    if (unit_columns) {
        for (Eigen::Index j = 0; j < p; ++j) {
            const double n = a.col(j).norm();
            if (n > 0.0) a.col(j) /= n;
        }
    }
    return a;
}

SynthInstance generate(const SynthSpec& spec) {
    if (spec.p < 1 || spec.q < 1 || spec.k < 0 || spec.k > spec.p)
        throw Error(ErrorCode::InvalidArgument, "synth spec requires p, q >= 1 and 0 <= k <= p");
    if (!(spec.sigma >= 0.0))
        throw Error(ErrorCode::InvalidArgument, "synth sigma must be >= 0");

    CounterRng rng(spec.seed);
    SynthInstance inst;
    inst.sigma = spec.sigma;
    inst.design = gaussian_design(spec.q, spec.p, rng, spec.unit_columns);

    std::vector<int> idx(static_cast<std::size_t>(spec.p));
    std::iota(idx.begin(), idx.end(), 0);
    for (int t = 0; t < spec.k; ++t) {
        const auto remaining = static_cast<std::uint64_t>(spec.p - t);
        const auto pick = t + static_cast<int>(rng.below(remaining));
        std::swap(idx[static_cast<std::size_t>(t)], idx[static_cast<std::size_t>(pick)]);
    }
    std::sort(idx.begin(), idx.begin() + spec.k);

    inst.x0 = Vector::Zero(spec.p);
    for (int t = 0; t < spec.k; ++t) {
        const double a = spec.amplitude_dist == AmplitudeDist::standard_normal
                             ? rng.normal()
                             : (rng.uniform() < 0.5 ? -1.0 : 1.0);
        inst.x0[idx[static_cast<std::size_t>(t)]] = a;
    }

    inst.observation = inst.design * inst.x0;
    for (int i = 0; i < spec.q; ++i) inst.observation[i] += spec.sigma * rng.normal();
    return inst;
}

std::uint64_t derive_realization_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
    return mix64(master_seed + (index + 1) * kGoldenGamma);
}

}  // namespace icr
