#include "icr/mnist.hpp"

#include "icr/baselines.hpp"
#include "icr/error.hpp"
#include "icr/io.hpp"
#include "icr/metrics.hpp"
#include "icr/rng.hpp"
#include "icr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace icr {

namespace {

std::uint32_t get_be32(const std::uint8_t* p) {
    return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) |
           std::uint32_t{p[3]};
}

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void check_payload(std::size_t have, std::uint64_t need) {
    if (have < need) throw Error(ErrorCode::TruncatedPayload, "IDX payload is shorter than its header says");
    if (have > need) throw Error(ErrorCode::TrailingBytes, "IDX payload has trailing bytes");
}

}  // namespace

std::span<const std::uint8_t> IdxImageSet::image(std::size_t i) const {
    if (i >= count) throw Error(ErrorCode::InvalidArgument, "image index out of range");
    return std::span(pixels).subspan(i * image_size(), image_size());
}

IdxImageSet parse_idx_images(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4 || get_be32(bytes.data()) != kIdxImageMagic)
        throw Error(ErrorCode::BadMagic, "not an IDX3-ubyte image file");
    if (bytes.size() < 16) throw Error(ErrorCode::TruncatedPayload, "IDX header truncated");
    IdxImageSet set;
    set.count = get_be32(bytes.data() + 4);
    set.rows = get_be32(bytes.data() + 8);
    set.cols = get_be32(bytes.data() + 12);
    if (set.rows == 0 || set.cols == 0)
        throw Error(ErrorCode::MalformedInput, "IDX image dimensions must be positive");
    check_payload(bytes.size() - 16, std::uint64_t{set.count} * set.rows * set.cols);
    set.pixels.assign(bytes.begin() + 16, bytes.end());
    return set;
}

std::vector<std::uint8_t> serialize_idx_images(const IdxImageSet& set) {
    if (set.pixels.size() != std::size_t{set.count} * set.image_size())
        throw Error(ErrorCode::DimensionMismatch, "pixel buffer does not match dimensions");
    std::vector<std::uint8_t> out;
    out.reserve(16 + set.pixels.size());
    put_be32(out, kIdxImageMagic);
    put_be32(out, set.count);
    put_be32(out, set.rows);
    put_be32(out, set.cols);
    out.insert(out.end(), set.pixels.begin(), set.pixels.end());
    return out;
}

std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4 || get_be32(bytes.data()) != kIdxLabelMagic)
        throw Error(ErrorCode::BadMagic, "not an IDX1-ubyte label file");
    if (bytes.size() < 8) throw Error(ErrorCode::TruncatedPayload, "IDX header truncated");
    check_payload(bytes.size() - 8, get_be32(bytes.data() + 4));
    return {bytes.begin() + 8, bytes.end()};
}

IdxImageSet read_idx_images(const std::filesystem::path& path) {
    return parse_idx_images(read_file_bytes(path));
}

std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path) {
    return parse_idx_labels(read_file_bytes(path));
}

std::string_view to_string(ImageMethod m) noexcept {
    switch (m) {
        case ImageMethod::icr_nn: return "icr_nn";
        case ImageMethod::icr: return "icr";
        case ImageMethod::elastic_net: return "elastic_net";
    }
    return "?";
}

Vector image_to_vector(std::span<const std::uint8_t> pixels) {
    Vector x(static_cast<Eigen::Index>(pixels.size()));
    for (std::size_t i = 0; i < pixels.size(); ++i) x[static_cast<Eigen::Index>(i)] = pixels[i] / 255.0;
    return x;
}

std::vector<std::uint8_t> vector_to_image(const Vector& x) {
    std::vector<std::uint8_t> out(static_cast<std::size_t>(x.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i)
        out[static_cast<std::size_t>(i)] =
            static_cast<std::uint8_t>(std::lround(std::clamp(x[i], 0.0, 1.0) * 255.0));
    return out;
}

MeasurementModel measure_image(const Vector& x, int measurements, double sigma, std::uint64_t seed) {
    if (measurements < 1 || measurements > x.size())
        throw Error(ErrorCode::InvalidArgument, "measurement count must be in [1, pixel count]");
    CounterRng rng(seed);
    Matrix a = gaussian_design(measurements, x.size(), rng, true);
    Vector y = a * x;
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += sigma * rng.normal();
    return MeasurementModel(std::move(a), std::move(y), sigma);
}

SpikeSlabPrior image_prior(Eigen::Index p, const ImageRecoveryConfig& config) {
    const double lambda = config.lambda.value_or(config.sigma * config.sigma);
    return SpikeSlabPrior::uniform(p, config.kappa, lambda, config.sigma);
}

ImageRecovery recover_measured(const MeasurementModel& model, const Vector& truth,
                               ImageMethod method, const ImageRecoveryConfig& config) {
    const SpikeSlabPrior prior = image_prior(model.cols(), config);
    ImageRecovery out;
    if (method == ImageMethod::elastic_net) {
        out.solution =
            elastic_net(model, prior, ElasticNetParams::relaxation_of(prior), config.icr.inner).solution;
    } else {
        IcrConfig cfg = config.icr;
        cfg.variant = method == ImageMethod::icr_nn ? IcrVariant::nonnegative : IcrVariant::unconstrained;
        auto [sol, trace] = icr_solve(model, prior, cfg);
        out.tail_growth = icr_diagnostics(trace).tail_growth;
        out.solution = std::move(sol);
    }
    out.reconstruction = out.solution.x;
    out.mse = mse(out.reconstruction, truth);
    return out;
}

ImageRecovery recover_image(std::span<const std::uint8_t> pixels, const ImageRecoveryConfig& config,
                            std::uint64_t seed, ImageMethod method) {
    const Vector truth = image_to_vector(pixels);
    return recover_measured(measure_image(truth, config.measurements, config.sigma, seed), truth,
                            method, config);
}

}  // namespace icr
