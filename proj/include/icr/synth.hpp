#pragma once

#include "icr/model.hpp"
#include "icr/rng.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace icr {

enum class AmplitudeDist { standard_normal, uniform_pm1 };

std::string_view to_string(AmplitudeDist d) noexcept;
AmplitudeDist amplitude_dist_from_string(std::string_view s);

struct SynthSpec {
    int p = 64;
    int q = 32;
    int k = 10;
    double sigma = 0.01;
    std::uint64_t seed = 0;
    AmplitudeDist amplitude_dist = AmplitudeDist::standard_normal;
    bool unit_columns = true;
};

/// A generated instance. sigma may be 0 (noiseless); `model()` then needs an
/// explicit nominal sigma since the measurement model requires sigma > 0.
struct SynthInstance {
    Matrix design;
    Vector observation;
    Vector x0;
    double sigma = 0;

    MeasurementModel model(std::optional<double> nominal_sigma = std::nullopt) const;
};

/// q x p matrix of N(0,1) draws taken column-major from `rng`; columns are
/// scaled to unit norm when requested.
Matrix gaussian_design(Eigen::Index q, Eigen::Index p, CounterRng& rng, bool unit_columns);

/// Draw order from a single CounterRng(seed) stream:
///   1. A entries, column-major, N(0,1); columns then scaled to unit norm
///   2. support: partial Fisher-Yates over 0..p-1, k swaps, then sorted
///   3. amplitudes, one per sorted support index
///   4. noise, q entries N(0, sigma^2)
/// uniform_pm1 draws amplitudes uniformly from {-1, +1}.
SynthInstance generate(const SynthSpec& spec);

/// mix64(master + (index + 1) * golden). Injective in index for a fixed master.
std::uint64_t derive_realization_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

}  // namespace icr
