#pragma once

#include "icr/icr.hpp"
#include "icr/model.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace icr {

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

/// IDX3-ubyte image stack, row-major pixels.
struct IdxImageSet {
    std::uint32_t count = 0;
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    std::vector<std::uint8_t> pixels;

    std::size_t image_size() const noexcept { return std::size_t{rows} * cols; }
    std::span<const std::uint8_t> image(std::size_t i) const;
};

/// Big-endian magic 0x00000803, three big-endian u32 dims, then exactly
/// count*rows*cols bytes. Raises BadMagic, TruncatedPayload or TrailingBytes.
IdxImageSet parse_idx_images(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> serialize_idx_images(const IdxImageSet& set);

/// IDX1-ubyte labels (magic 0x00000801).
std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes);

/// File readers; gzip input is inflated transparently.
IdxImageSet read_idx_images(const std::filesystem::path& path);
std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path);

enum class ImageMethod { icr_nn, icr, elastic_net };

std::string_view to_string(ImageMethod m) noexcept;

struct ImageRecoveryConfig {
    int measurements = 150;
    double sigma = 0.01;
    double kappa = 0.19;
    /// Slab precision; sigma^2 when unset (unit-variance slab).
    std::optional<double> lambda;
    IcrConfig icr;
};

/// Pixels scaled to [0, 1].
Vector image_to_vector(std::span<const std::uint8_t> pixels);

/// Round and clamp to bytes, for writing graymaps.
std::vector<std::uint8_t> vector_to_image(const Vector& x);

/// y = A x + n with a seeded unit-column Gaussian A. Draw order from
/// CounterRng(seed): A column-major, then the noise.
MeasurementModel measure_image(const Vector& x, int measurements, double sigma, std::uint64_t seed);

SpikeSlabPrior image_prior(Eigen::Index p, const ImageRecoveryConfig& config);

struct ImageRecovery {
    Vector reconstruction;
    double mse = 0;
    RecoverySolution solution;
    double tail_growth = 1;
};

/// Solve an already measured image with one method and score it against `truth`.
ImageRecovery recover_measured(const MeasurementModel& model, const Vector& truth,
                               ImageMethod method, const ImageRecoveryConfig& config);

/// Measure and recover in one call.
ImageRecovery recover_image(std::span<const std::uint8_t> pixels, const ImageRecoveryConfig& config,
                            std::uint64_t seed, ImageMethod method = ImageMethod::icr_nn);

}  // namespace icr
