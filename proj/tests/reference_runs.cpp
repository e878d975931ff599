// Seeded benchmark examples that take a few seconds each. Kept out of the unit
// binary so a miss here does not mask unit failures.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "icr/experiment.hpp"

#include <doctest.h>

using namespace icr;

namespace {

const MethodSummary& find(const BenchResult& r, const std::string& m) {
    for (const auto& s : r.methods)
        if (s.method == m) return s;
    throw std::runtime_error("missing method " + m);
}

}  // namespace

TEST_CASE("p=64, q=32, k=10: ICR support match against x0 over 100 seeds") {
    ExperimentConfig cfg;
    cfg.p = 64;
    cfg.q = 32;
    cfg.k = 10;
    cfg.sigma = 0.01;
    cfg.realizations = 100;
    cfg.methods = std::vector<std::string>{"icr"};
    const auto s = find(run_synth_bench(cfg), "icr");
    MESSAGE("mean SM vs x0 " << s.vs_x0.support_match_pct << "%, MSE " << s.vs_x0.mse);
    CHECK(s.vs_x0.support_match_pct >= 90.0);
}

TEST_CASE("desk-scale sparsifying prior: ICR against the oracle and elastic net") {
    // same instance family as the oracle-anchored table but with lambda = sigma^2,
    // where rho > 0 and the problem is genuinely combinatorial
    ExperimentConfig cfg;
    cfg.p = 16;
    cfg.q = 8;
    cfg.k = 3;
    cfg.realizations = 200;
    cfg.methods = std::vector<std::string>{"icr", "elastic_net", "oracle"};
    const auto r = run_synth_bench(cfg);
    const auto& icr_s = find(r, "icr");
    const auto& en_s = find(r, "elastic_net");
    const auto& or_s = find(r, "oracle");
    MESSAGE("SM vs global ICR " << icr_s.vs_global->support_match_pct << "% EN " << en_s.vs_global->support_match_pct
                                << "%; cost ICR " << icr_s.vs_x0.avg_cost << " oracle " << or_s.vs_x0.avg_cost
                                << "; MSE vs global ICR " << icr_s.vs_global->mse << " EN " << en_s.vs_global->mse);
    CHECK(icr_s.vs_x0.avg_cost >= or_s.vs_x0.avg_cost - 1e-12);
    CHECK(icr_s.vs_global->support_match_pct >= en_s.vs_global->support_match_pct);
}
