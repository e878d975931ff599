#include "icr/config.hpp"
#include "icr/error.hpp"

#include <doctest.h>

using namespace icr;

TEST_CASE("formatted config parses back to the same value") {
    ExperimentConfig cfg;
    CHECK(parse_config(format_config(cfg)) == cfg);
    cfg.command = "sweep";
    cfg.seed = 18446744073709551615ULL;
    cfg.sigma = 0.1 + 0.2;
    cfg.kappa = 1.0 / 3.0;
    cfg.lambda = 1e-4;
    cfg.pruning = Pruning::lemma1;
    cfg.methods = std::vector<std::string>{"icr", "oracle"};
    cfg.sweep_param = "sigma";
    cfg.sweep_values = {0.01, 0.02, 0.05};
    cfg.amplitude = AmplitudeDist::uniform_pm1;
    cfg.out_dir = "/tmp/x y";
    const auto text = format_config(cfg);
    CHECK(text.rfind("schema_version = 1\n", 0) == 0);
    CHECK(parse_config(text) == cfg);
}

TEST_CASE("every key reads back what was written") {
    ExperimentConfig cfg;
    for (const auto& [key, value] : config_entries(cfg)) {
        ExperimentConfig other;
        set_config_value(other, key, value);
        CHECK(get_config_value(other, key) == value);
    }
    CHECK(config_keys().size() == config_entries(cfg).size());
}

TEST_CASE("comments, blanks and auto values") {
    const auto cfg = parse_config("# header\n\n p = 128  # trailing\nkappa = auto\nlambda = 0.5\n");
    CHECK(cfg.p == 128);
    CHECK_FALSE(cfg.kappa.has_value());
    CHECK(cfg.lambda == 0.5);
}

TEST_CASE("bad config input is rejected") {
    CHECK_THROWS_AS(parse_config("nonsense = 1\n"), Error);
    CHECK_THROWS_AS(parse_config("p 12\n"), Error);
    CHECK_THROWS_AS(parse_config("p = twelve\n"), Error);
    CHECK_THROWS_AS(parse_config("schema_version = 2\n"), Error);
    CHECK_THROWS_AS(parse_config("methods = icr,magic\n"), Error);
    CHECK_THROWS_AS(parse_config("pruning = always\n"), Error);
    CHECK_THROWS_AS(parse_config("command = dance\n"), Error);
    CHECK_THROWS_AS(parse_config("unit_columns = maybe\n"), Error);
}

TEST_CASE("method defaults depend on the command and size") {
    ExperimentConfig cfg;
    cfg.p = 16;
    CHECK(resolved_methods(cfg) == std::vector<std::string>{"icr", "elastic_net", "lasso", "oracle"});
    cfg.p = 64;
    CHECK(resolved_methods(cfg) == std::vector<std::string>{"icr", "elastic_net", "lasso"});
    cfg.command = "mnist";
    CHECK(resolved_methods(cfg) == std::vector<std::string>{"icr_nn", "icr", "elastic_net"});
    cfg.methods = std::vector<std::string>{"lasso"};
    CHECK(resolved_methods(cfg) == std::vector<std::string>{"lasso"});
}

TEST_CASE("auto parameters resolve from the instance") {
    ExperimentConfig cfg;
    cfg.p = 100;
    cfg.k = 5;
    cfg.sigma = 0.1;
    const auto prior = synth_prior(cfg);
    CHECK(prior.kappa()[0] == doctest::Approx(0.05));
    CHECK(prior.lambda() == doctest::Approx(0.01));
    const auto en = elastic_net_params(cfg, prior);
    CHECK(en.l2_weight == prior.lambda());
    CHECK(en.l1_weight == doctest::Approx(prior.rho()[0]));
    cfg.en_l1 = 0.25;
    CHECK(elastic_net_params(cfg, prior).l1_weight == 0.25);
    cfg.lasso_l1 = 0.5;
    CHECK(lasso_weight(cfg, prior) == 0.5);
    const auto ic = icr_config(cfg, IcrVariant::nonnegative);
    CHECK(ic.variant == IcrVariant::nonnegative);
    CHECK(ic.inner.max_inner_iters == cfg.max_inner_iters);
}
