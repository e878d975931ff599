#include "icr/config.hpp"

#include "icr/error.hpp"
#include "icr/io.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <limits>

namespace icr {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view want) {
    throw Error(ErrorCode::InvalidArgument, "config key '" + std::string(key) + "': '" +
                                                std::string(value) + "' is not " + std::string(want));
}

template <class Int>
Int to_int(std::string_view key, std::string_view v) {
    Int out{};
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) bad_value(key, v, "an integer");
    return out;
}

double to_real(std::string_view key, std::string_view v) {
    try {
        const double d = parse_double(v);
        if (!std::isfinite(d)) bad_value(key, v, "a finite number");
        return d;
    } catch (const Error&) {
        bad_value(key, v, "a number");
    }
}

bool to_bool(std::string_view key, std::string_view v) {
    if (v == "true") return true;
    if (v == "false") return false;
    bad_value(key, v, "true or false");
}

std::optional<double> to_auto_real(std::string_view key, std::string_view v) {
    if (v == "auto") return std::nullopt;
    return to_real(key, v);
}

std::string from_auto(const std::optional<double>& v) { return v ? format_double(*v) : "auto"; }

std::vector<std::string> split_list(std::string_view v) {
    std::vector<std::string> out;
    while (true) {
        const auto comma = v.find(',');
        const auto item = trim(v.substr(0, comma));
        if (!item.empty()) out.emplace_back(item);
        if (comma == std::string_view::npos) break;
        v.remove_prefix(comma + 1);
    }
    return out;
}

template <class T>
std::string join(const std::vector<T>& items, const std::function<std::string(const T&)>& fmt) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        out += fmt(items[i]);
    }
    return out;
}

bool known_method(std::string_view m) {
    return m == "icr" || m == "icr_nn" || m == "elastic_net" || m == "lasso" || m == "oracle";
}

struct Field {
    std::string_view key;
    std::function<std::string(const ExperimentConfig&)> get;
    std::function<void(ExperimentConfig&, std::string_view)> set;
};

#define INT_FIELD(name)                                                              \
    Field {                                                                          \
        #name, [](const ExperimentConfig& c) { return std::to_string(c.name); },    \
            [](ExperimentConfig& c, std::string_view v) { c.name = to_int<int>(#name, v); } \
    }
#define REAL_FIELD(name)                                                             \
    Field {                                                                          \
        #name, [](const ExperimentConfig& c) { return format_double(c.name); },     \
            [](ExperimentConfig& c, std::string_view v) { c.name = to_real(#name, v); } \
    }
#define AUTO_FIELD(name)                                                             \
    Field {                                                                          \
        #name, [](const ExperimentConfig& c) { return from_auto(c.name); },         \
            [](ExperimentConfig& c, std::string_view v) { c.name = to_auto_real(#name, v); } \
    }
#define BOOL_FIELD(name)                                                             \
    Field {                                                                          \
        #name, [](const ExperimentConfig& c) { return std::string(c.name ? "true" : "false"); }, \
            [](ExperimentConfig& c, std::string_view v) { c.name = to_bool(#name, v); } \
    }
#define TEXT_FIELD(name)                                                             \
    Field {                                                                          \
        #name, [](const ExperimentConfig& c) { return c.name; },                    \
            [](ExperimentConfig& c, std::string_view v) { c.name = std::string(v); } \
    }

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        Field{"command", [](const ExperimentConfig& c) { return c.command; },
              [](ExperimentConfig& c, std::string_view v) {
                  if (v != "synth-bench" && v != "sweep" && v != "mnist" && v != "solve" &&
                      v != "synth-export")
                      bad_value("command", v, "a known command");
                  c.command = std::string(v);
              }},
        Field{"seed", [](const ExperimentConfig& c) { return std::to_string(c.seed); },
              [](ExperimentConfig& c, std::string_view v) { c.seed = to_int<std::uint64_t>("seed", v); }},
        INT_FIELD(threads),
        TEXT_FIELD(out_dir),
        INT_FIELD(p),
        INT_FIELD(q),
        INT_FIELD(k),
        REAL_FIELD(sigma),
        Field{"amplitude", [](const ExperimentConfig& c) { return std::string(to_string(c.amplitude)); },
              [](ExperimentConfig& c, std::string_view v) {
                  try {
                      c.amplitude = amplitude_dist_from_string(v);
                  } catch (const Error&) {
                      bad_value("amplitude", v, "standard_normal or uniform_pm1");
                  }
              }},
        BOOL_FIELD(unit_columns),
        INT_FIELD(realizations),
        AUTO_FIELD(kappa),
        AUTO_FIELD(lambda),
        BOOL_FIELD(allow_non_sparsifying),
        REAL_FIELD(tol),
        INT_FIELD(max_outer_iters),
        Field{"pruning",
              [](const ExperimentConfig& c) {
                  return std::string(c.pruning == Pruning::lemma1 ? "lemma1" : "off");
              },
              [](ExperimentConfig& c, std::string_view v) {
                  if (v == "off")
                      c.pruning = Pruning::off;
                  else if (v == "lemma1")
                      c.pruning = Pruning::lemma1;
                  else
                      bad_value("pruning", v, "off or lemma1");
              }},
        AUTO_FIELD(alpha),
        REAL_FIELD(mu_floor),
        INT_FIELD(max_inner_iters),
        REAL_FIELD(kkt_tolerance),
        AUTO_FIELD(en_l1),
        AUTO_FIELD(en_l2),
        AUTO_FIELD(lasso_l1),
        Field{"methods",
              [](const ExperimentConfig& c) {
                  if (!c.methods) return std::string("auto");
                  return join<std::string>(*c.methods, [](const std::string& s) { return s; });
              },
              [](ExperimentConfig& c, std::string_view v) {
                  if (v == "auto") {
                      c.methods.reset();
                      return;
                  }
                  auto list = split_list(v);
                  if (list.empty()) bad_value("methods", v, "a non-empty method list");
                  for (const auto& m : list)
                      if (!known_method(m)) bad_value("methods", m, "a known method");
                  c.methods = std::move(list);
              }},
        INT_FIELD(oracle_max_p),
        Field{"sweep_param", [](const ExperimentConfig& c) { return c.sweep_param; },
              [](ExperimentConfig& c, std::string_view v) {
                  if (v != "k" && v != "sigma") bad_value("sweep_param", v, "k or sigma");
                  c.sweep_param = std::string(v);
              }},
        Field{"sweep_values",
              [](const ExperimentConfig& c) {
                  return join<double>(c.sweep_values, [](const double& d) { return format_double(d); });
              },
              [](ExperimentConfig& c, std::string_view v) {
                  std::vector<double> vals;
                  for (const auto& s : split_list(v)) vals.push_back(to_real("sweep_values", s));
                  c.sweep_values = std::move(vals);
              }},
        TEXT_FIELD(mnist_images),
        TEXT_FIELD(mnist_labels),
        INT_FIELD(mnist_first),
        INT_FIELD(mnist_count),
        INT_FIELD(mnist_q),
        TEXT_FIELD(design),
        TEXT_FIELD(observation),
    };
    return table;
}

#undef INT_FIELD
#undef REAL_FIELD
#undef AUTO_FIELD
#undef BOOL_FIELD
#undef TEXT_FIELD

const Field& field(std::string_view key) {
    for (const auto& f : fields())
        if (f.key == key) return f;
    throw Error(ErrorCode::InvalidArgument, "unknown config key '" + std::string(key) + "'");
}

}  // namespace

const std::vector<std::string_view>& config_keys() {
    static const std::vector<std::string_view> keys = [] {
        std::vector<std::string_view> out;
        for (const auto& f : fields()) out.push_back(f.key);
        return out;
    }();
    return keys;
}

void set_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
    field(key).set(cfg, trim(value));
}

std::string get_config_value(const ExperimentConfig& cfg, std::string_view key) {
    return field(key).get(cfg);
}

std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& f : fields()) out.emplace_back(f.key, f.get(cfg));
    return out;
}

void apply_config_text(ExperimentConfig& cfg, std::string_view text) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw Error(ErrorCode::InvalidArgument,
                        "config line " + std::to_string(line_no) + ": expected key = value");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key == "schema_version") {
            if (value != std::to_string(kConfigSchemaVersion))
                throw Error(ErrorCode::InvalidArgument,
                            "unsupported config schema_version " + std::string(value));
            continue;
        }
        set_config_value(cfg, key, value);
    }
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig cfg;
    apply_config_text(cfg, text);
    return cfg;
}

std::string format_config(const ExperimentConfig& cfg) {
    std::string out = "schema_version = " + std::to_string(kConfigSchemaVersion) + "\n";
    for (const auto& [k, v] : config_entries(cfg)) out += k + " = " + v + "\n";
    return out;
}

std::vector<std::string> default_methods(const ExperimentConfig& cfg) {
    if (cfg.command == "mnist") return {"icr_nn", "icr", "elastic_net"};
    if (cfg.command == "solve") return {"icr"};
    std::vector<std::string> m{"icr", "elastic_net", "lasso"};
    if (cfg.p <= cfg.oracle_max_p) m.emplace_back("oracle");
    return m;
}

std::vector<std::string> resolved_methods(const ExperimentConfig& cfg) {
    return cfg.methods ? *cfg.methods : default_methods(cfg);
}

SynthSpec synth_spec(const ExperimentConfig& cfg, std::uint64_t seed) {
    SynthSpec s;
    s.p = cfg.p;
    s.q = cfg.q;
    s.k = cfg.k;
    s.sigma = cfg.sigma;
    s.seed = seed;
    s.amplitude_dist = cfg.amplitude;
    s.unit_columns = cfg.unit_columns;
    return s;
}

double resolved_lambda(const ExperimentConfig& cfg) {
    return cfg.lambda.value_or(cfg.sigma * cfg.sigma);
}

SpikeSlabPrior synth_prior(const ExperimentConfig& cfg) {
    const double kappa = cfg.kappa.value_or(static_cast<double>(cfg.k) / cfg.p);
    return SpikeSlabPrior::uniform(cfg.p, kappa, resolved_lambda(cfg), cfg.sigma,
                                   PriorOptions{cfg.allow_non_sparsifying});
}

SolverSettings solver_settings(const ExperimentConfig& cfg) {
    return SolverSettings{cfg.max_inner_iters, cfg.kkt_tolerance};
}

IcrConfig icr_config(const ExperimentConfig& cfg, IcrVariant variant) {
    IcrConfig c;
    c.variant = variant;
    c.tol = cfg.tol;
    c.max_outer_iters = cfg.max_outer_iters;
    c.pruning = cfg.pruning;
    c.alpha = cfg.alpha;
    c.mu_floor = cfg.mu_floor;
    c.inner = solver_settings(cfg);
    return c;
}

ElasticNetParams elastic_net_params(const ExperimentConfig& cfg, const SpikeSlabPrior& prior) {
    ElasticNetParams p = ElasticNetParams::relaxation_of(prior);
    if (cfg.en_l1) p.l1_weight = *cfg.en_l1;
    if (cfg.en_l2) p.l2_weight = *cfg.en_l2;
    return p;
}

double lasso_weight(const ExperimentConfig& cfg, const SpikeSlabPrior& prior) {
    return cfg.lasso_l1.value_or(ElasticNetParams::relaxation_of(prior).l1_weight);
}

}  // namespace icr
