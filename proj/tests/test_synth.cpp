#include "icr/error.hpp"
#include "icr/oracle.hpp"
#include "icr/rng.hpp"
#include "icr/synth.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <unordered_set>

using namespace icr;

TEST_CASE("counter stream matches reference splitmix64 outputs") {
    // splitmix64 seeded with 0: first two outputs
    CounterRng rng(0);
    CHECK(rng.next_u64() == 0xe220a8397b1dcdafULL);
    CHECK(rng.next_u64() == 0x6e789e6aa1b965f4ULL);
    CounterRng a(5), b(5);
    for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
}

TEST_CASE("uniform and normal draws have the expected moments") {
    CounterRng rng(11);
    const int n = 200000;
    double su = 0, sn = 0, sn2 = 0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        CHECK_FALSE((u <= 0.0 || u >= 1.0));
        su += u;
        const double z = rng.normal();
        sn += z;
        sn2 += z * z;
    }
    CHECK(std::abs(su / n - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
    CHECK(std::abs(sn / n) < 5.0 / std::sqrt(n));
    CHECK(std::abs(sn2 / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
    for (int i = 0; i < 1000; ++i) CHECK(rng.below(7) < 7);
}

TEST_CASE("same seed gives a bitwise identical instance") {
    SynthSpec s;
    s.seed = 1234;
    const auto a = generate(s);
    const auto b = generate(s);
    CHECK(a.design == b.design);
    CHECK(a.observation == b.observation);
    CHECK(a.x0 == b.x0);
    s.seed = 1235;
    CHECK_FALSE(generate(s).design == a.design);
}

TEST_CASE("instance shape, unit columns and support size") {
    SynthSpec s;
    s.p = 40;
    s.q = 20;
    s.k = 7;
    s.seed = 3;
    const auto inst = generate(s);
    CHECK(inst.design.rows() == 20);
    CHECK(inst.design.cols() == 40);
    for (Eigen::Index j = 0; j < 40; ++j) CHECK(std::abs(inst.design.col(j).norm() - 1.0) <= 1e-12);
    CHECK((inst.x0.array() != 0.0).count() == 7);
    s.amplitude_dist = AmplitudeDist::uniform_pm1;
    const auto pm = generate(s);
    for (Eigen::Index i = 0; i < 40; ++i) CHECK((pm.x0[i] == 0.0 || std::abs(pm.x0[i]) == 1.0));
    CHECK(amplitude_dist_from_string(to_string(AmplitudeDist::uniform_pm1)) == AmplitudeDist::uniform_pm1);
    CHECK_THROWS_AS(amplitude_dist_from_string("laplace"), Error);
}

TEST_CASE("invalid specs are rejected") {
    SynthSpec s;
    s.k = s.p + 1;
    CHECK_THROWS_AS(generate(s), Error);
    s = SynthSpec{};
    s.sigma = -1.0;
    CHECK_THROWS_AS(generate(s), Error);
    s = SynthSpec{};
    s.q = 0;
    CHECK_THROWS_AS(generate(s), Error);
}

TEST_CASE("raw design entries are standard normal") {
    SynthSpec s;
    s.p = 200;
    s.q = 100;
    s.k = 1;
    s.unit_columns = false;
    s.seed = 77;
    const Matrix a = generate(s).design;
    const double n = static_cast<double>(a.size());
    const double mean = a.mean();
    const double var = (a.array() - mean).square().sum() / (n - 1.0);
    CHECK(std::abs(mean) < 5.0 / std::sqrt(n));
    CHECK(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / n));
}

TEST_CASE("noise energy concentrates near sigma squared") {
    SynthSpec s;
    s.p = 256;
    s.q = 200;
    s.k = 10;
    s.sigma = 0.05;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        s.seed = seed;
        const auto inst = generate(s);
        const double e = (inst.observation - inst.design * inst.x0).squaredNorm() / s.q;
        CHECK(std::abs(e / (s.sigma * s.sigma) - 1.0) < 0.3);
    }
}

TEST_CASE("noiseless instance is recovered on its support up to ridge shrinkage") {
    SynthSpec s;
    s.p = 12;
    s.q = 10;
    s.k = 3;
    s.sigma = 0.0;
    s.seed = 8;
    const auto inst = generate(s);
    CHECK((inst.observation - inst.design * inst.x0).norm() == 0.0);
    CHECK_THROWS_AS(inst.model(), Error);
    const auto model = inst.model(0.01);
    const auto prior = SpikeSlabPrior::uniform(12, 0.1, 1e-6, 0.01);
    std::vector<Eigen::Index> support;
    for (Eigen::Index i = 0; i < 12; ++i)
        if (inst.x0[i] != 0.0) support.push_back(i);
    const SupportFit fit = ridge_on_support(model, prior, support);
    CHECK((fit.x - inst.x0).norm() <= 1e-4 * inst.x0.norm());
    // direct solve on the support
    Matrix as(10, 3);
    for (int j = 0; j < 3; ++j) as.col(j) = inst.design.col(support[j]);
    const Vector direct = (as.transpose() * as + 1e-6 * Matrix::Identity(3, 3)).ldlt().solve(as.transpose() * inst.observation);
    for (int j = 0; j < 3; ++j) CHECK(fit.x[support[j]] == doctest::Approx(direct[j]).epsilon(1e-9));
}

TEST_CASE("realization seeds do not collide") {
    CHECK(derive_realization_seed(9, 0) != derive_realization_seed(9, 1));
    CHECK(derive_realization_seed(9, 4) == derive_realization_seed(9, 4));
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(1 << 21);
    bool collision = false;
    for (std::uint64_t i = 0; i < 1000000; ++i)
        if (!seen.insert(derive_realization_seed(42, i)).second) collision = true;
    CHECK_FALSE(collision);
}
