#include "icr/error.hpp"
#include "icr/experiment.hpp"
#include "icr/metrics.hpp"
#include "icr/mnist.hpp"

#include <doctest.h>

#include <array>
#include <filesystem>

using namespace icr;

namespace {

const std::filesystem::path kData = ICR_TEST_DATA_DIR;

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::InvalidArgument;
}

const IdxImageSet& sample() {
    static const IdxImageSet s = read_idx_images(kData / "mnist-sample-100-images-idx3-ubyte.gz");
    return s;
}

}  // namespace

TEST_CASE("idx image header example") {
    const std::vector<std::uint8_t> bytes{0, 0, 8, 3, 0, 0, 0, 1, 0, 0, 0, 2, 0, 0, 0, 2, 10, 20, 30, 40};
    const auto set = parse_idx_images(bytes);
    CHECK(set.count == 1);
    CHECK(set.rows == 2);
    CHECK(set.cols == 2);
    CHECK(set.image(0)[3] == 40);
    CHECK(serialize_idx_images(set) == bytes);

    auto bad = bytes;
    bad[3] = 1;
    CHECK(code_of([&] { parse_idx_images(bad); }) == ErrorCode::BadMagic);
    auto shorter = bytes;
    shorter.pop_back();
    CHECK(code_of([&] { parse_idx_images(shorter); }) == ErrorCode::TruncatedPayload);
    auto longer = bytes;
    longer.push_back(1);
    CHECK(code_of([&] { parse_idx_images(longer); }) == ErrorCode::TrailingBytes);
    CHECK(code_of([&] { parse_idx_images(std::span(bytes).first(10)); }) == ErrorCode::TruncatedPayload);
}

TEST_CASE("bundled sample parses and round trips") {
    const auto& s = sample();
    CHECK(s.count == 100);
    CHECK(s.rows == 28);
    CHECK(s.cols == 28);
    CHECK(parse_idx_images(serialize_idx_images(s)).pixels == s.pixels);
    const auto labels = read_idx_labels(kData / "mnist-sample-100-labels-idx1-ubyte.gz");
    CHECK(labels.size() == 100);
    for (auto l : labels) CHECK(l <= 9);
    CHECK(code_of([] { parse_idx_labels(std::vector<std::uint8_t>{0, 0, 8, 3, 0, 0, 0, 0}); }) == ErrorCode::BadMagic);
}

TEST_CASE("pixel scaling round trips") {
    const auto& s = sample();
    const Vector x = image_to_vector(s.image(0));
    CHECK(x.minCoeff() >= 0.0);
    CHECK(x.maxCoeff() <= 1.0);
    const auto back = vector_to_image(x);
    CHECK(std::equal(back.begin(), back.end(), s.image(0).begin()));
}

TEST_CASE("all-zero image is recovered as zero when the noise is negligible") {
    const std::vector<std::uint8_t> zeros(784, 0);
    ImageRecoveryConfig cfg;
    cfg.sigma = 1e-9;
    for (ImageMethod m : {ImageMethod::icr_nn, ImageMethod::icr, ImageMethod::elastic_net}) {
        const auto r = recover_image(zeros, cfg, 5, m);
        CHECK(r.reconstruction.isZero(1e-3));
        CHECK(r.mse <= 1e-6);
    }
}

TEST_CASE("single bright pixel is found and beats the zero reconstruction") {
    std::vector<std::uint8_t> img(784, 0);
    img[14 * 28 + 14] = 255;
    ImageRecoveryConfig cfg;
    const auto r = recover_image(img, cfg, 7);
    CHECK(r.solution.gamma[14 * 28 + 14]);
    const Vector truth = image_to_vector(img);
    CHECK(r.mse < mse(Vector::Zero(784), truth));
}

TEST_CASE("measurement count validation") {
    const std::vector<std::uint8_t> img(784, 0);
    ImageRecoveryConfig cfg;
    cfg.measurements = 785;
    CHECK_THROWS_AS(recover_image(img, cfg, 1), Error);
}

TEST_CASE("more measurements do not raise the average error") {
    const auto& s = sample();
    const std::array<int, 3> qs{100, 150, 300};
    constexpr std::size_t kImages = 20;
    std::vector<std::array<double, 3>> err(kImages);
    parallel_for(kImages * qs.size(), 4, [&](std::size_t job) {
        const std::size_t img = job / qs.size();
        const std::size_t qi = job % qs.size();
        ImageRecoveryConfig cfg;
        cfg.measurements = qs[qi];
        err[img][qi] = recover_image(s.image(img), cfg, 1000 + img).mse;
    });
    for (std::size_t a = 0; a + 1 < qs.size(); ++a) {
        int violations = 0;
        double lo = 0, hi = 0;
        for (std::size_t i = 0; i < kImages; ++i) {
            violations += err[i][a + 1] > err[i][a];
            lo += err[i][a];
            hi += err[i][a + 1];
        }
        CHECK(hi <= lo);
        CHECK(violations <= 1);
    }
}
