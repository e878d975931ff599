#include "icr/experiment.hpp"

#include "icr/baselines.hpp"
#include "icr/error.hpp"
#include "icr/io.hpp"
#include "icr/mnist.hpp"
#include "icr/oracle.hpp"
#include "icr/version.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace icr {

using ojson = nlohmann::ordered_json;

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads < 1) throw Error(ErrorCode::InvalidArgument, "threads must be >= 1");
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::exception_ptr first_err;
    std::size_t first_err_index = n;
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(err_mu);
                if (i < first_err_index) {
                    first_err_index = i;
                    first_err = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (first_err) std::rethrow_exception(first_err);
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool is_icr(std::string_view m) { return m == "icr" || m == "icr_nn"; }

struct MethodOutcome {
    RecoverySolution solution;
    std::optional<double> tail_growth;
    bool quasi_cauchy_violation = false;
};

MethodOutcome run_method(std::string_view method, const MeasurementModel& model,
                         const SpikeSlabPrior& prior, const ExperimentConfig& cfg) {
    MethodOutcome out;
    if (is_icr(method)) {
        const IcrVariant v = method == "icr_nn" ? IcrVariant::nonnegative : IcrVariant::unconstrained;
        const IcrConfig icfg = icr_config(cfg, v);
        if (cfg.pruning == Pruning::lemma1) {
            auto [scaled, factor] = normalize_for_lemma1(model);
            auto [sol, trace] = icr_solve(scaled, prior, icfg);
            const auto diag = icr_diagnostics(trace);
            out.tail_growth = diag.tail_growth;
            out.quasi_cauchy_violation = diag.quasi_cauchy_violation;
            out.solution = make_solution(sol.x / factor, model, prior, sol.iterations, sol.converged);
        } else {
            auto [sol, trace] = icr_solve(model, prior, icfg);
            const auto diag = icr_diagnostics(trace);
            out.tail_growth = diag.tail_growth;
            out.quasi_cauchy_violation = diag.quasi_cauchy_violation;
            out.solution = std::move(sol);
        }
    } else if (method == "elastic_net") {
        out.solution = elastic_net(model, prior, elastic_net_params(cfg, prior), solver_settings(cfg)).solution;
    } else if (method == "lasso") {
        out.solution = lasso(model, prior, lasso_weight(cfg, prior), solver_settings(cfg)).solution;
    } else if (method == "oracle") {
        OracleConfig oc;
        oc.max_p = cfg.oracle_max_p;
        oc.settings = solver_settings(cfg);
        out.solution = global_map(model, prior, oc);
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown method '" + std::string(method) + "'");
    }
    return out;
}

void validate_bench(const ExperimentConfig& cfg) {
    if (cfg.realizations < 1) throw Error(ErrorCode::InvalidArgument, "realizations must be >= 1");
    if (cfg.threads < 1) throw Error(ErrorCode::InvalidArgument, "threads must be >= 1");
    if (!(cfg.sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be > 0");
}

ojson report_json(const EvalReport& r) {
    return ojson{{"avg_cost", r.avg_cost},
                 {"mse", r.mse},
                 {"mse_sum", r.mse_sum},
                 {"support_match_pct", r.support_match_pct},
                 {"sparsity_level", r.sparsity_level},
                 {"wall_time_s", r.wall_time_s},
                 {"n_realizations", r.n_realizations}};
}

ojson config_json(const ExperimentConfig& cfg) {
    ojson c = ojson::object();
    c["schema_version"] = kConfigSchemaVersion;
    for (const auto& [k, v] : config_entries(cfg)) c[k] = v;
    return c;
}

ojson report_header(const ExperimentConfig& cfg) {
    return ojson{{"schema_version", kConfigSchemaVersion},
                 {"version", std::string(version())},
                 {"command", cfg.command},
                 {"master_seed", cfg.seed},
                 {"config", config_json(cfg)},
                 {"conventions",
                  {{"mse", "mean-normalized ||x - ref||^2 / p; mse_sum is ||x - ref||^2"},
                   {"support_threshold", "1e-6 * max(1, ||x||_inf, ||ref||_inf)"},
                   {"wall_time_s", "median over realizations"}}}};
}

std::string opt_cell(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

}  // namespace

BenchResult run_synth_bench(const ExperimentConfig& cfg) {
    validate_bench(cfg);
    const SpikeSlabPrior prior = synth_prior(cfg);
    BenchResult out;

    std::vector<std::string> methods;
    for (const auto& m : resolved_methods(cfg)) {
        if (m == "oracle" && cfg.p > cfg.oracle_max_p)
            throw Error(ErrorCode::ProblemTooLarge,
                        "oracle requested but p exceeds oracle_max_p = " + std::to_string(cfg.oracle_max_p));
        if (m == "lasso" && !(lasso_weight(cfg, prior) > 0.0)) {
            out.skipped.push_back("lasso: l1 weight resolves to 0 (mean rho <= 0)");
            continue;
        }
        if (std::find(methods.begin(), methods.end(), m) == methods.end()) methods.push_back(m);
    }
    const bool with_oracle = std::find(methods.begin(), methods.end(), "oracle") != methods.end();

    const auto n = static_cast<std::size_t>(cfg.realizations);
    std::vector<std::vector<MethodRow>> per_real(n);
    parallel_for(n, cfg.threads, [&](std::size_t r) {
        const std::uint64_t seed = derive_realization_seed(cfg.seed, r);
        const SynthInstance inst = generate(synth_spec(cfg, seed));
        const MeasurementModel model = inst.model();

        std::vector<std::pair<std::string, MethodOutcome>> results;
        std::vector<double> times;
        for (const auto& m : methods) {
            const auto t0 = std::chrono::steady_clock::now();
            results.emplace_back(m, run_method(m, model, prior, cfg));
            times.push_back(seconds_since(t0));
        }
        const Vector* global = nullptr;
        for (const auto& [m, res] : results)
            if (m == "oracle") global = &res.solution.x;

        auto& rows = per_real[r];
        for (std::size_t i = 0; i < results.size(); ++i) {
            const auto& [m, res] = results[i];
            MethodRow row;
            row.realization = r;
            row.seed = seed;
            row.method = m;
            row.cost = res.solution.cost;
            row.mse_vs_x0 = mse(res.solution.x, inst.x0);
            row.sm_vs_x0 = support_match(res.solution.x, inst.x0);
            row.sparsity = res.solution.gamma.count();
            if (global) {
                row.mse_vs_global = mse(res.solution.x, *global);
                row.sm_vs_global = support_match(res.solution.x, *global);
            }
            row.iterations = res.solution.iterations;
            row.converged = res.solution.converged;
            row.tail_growth = res.tail_growth;
            row.wall_time_s = times[i];
            row.p = cfg.p;
            rows.push_back(std::move(row));
        }
        std::sort(rows.begin(), rows.end(),
                  [](const MethodRow& a, const MethodRow& b) { return a.method < b.method; });
    });

    for (auto& rows : per_real)
        for (auto& row : rows) out.rows.push_back(std::move(row));

    for (const auto& m : methods) {
        MethodSummary s;
        s.method = m;
        std::vector<RealizationMetrics> vx, vg;
        for (const auto& row : out.rows) {
            if (row.method != m) continue;
            vx.push_back({row.cost, row.mse_vs_x0, row.sm_vs_x0, static_cast<double>(row.sparsity),
                          row.wall_time_s, row.p});
            if (with_oracle)
                vg.push_back({row.cost, *row.mse_vs_global, *row.sm_vs_global,
                              static_cast<double>(row.sparsity), row.wall_time_s, row.p});
            s.converged_runs += row.converged ? 1 : 0;
            if (row.tail_growth) {
                s.max_tail_growth = std::max(s.max_tail_growth, *row.tail_growth);
                s.quasi_cauchy_violations += *row.tail_growth > 10.0 ? 1 : 0;
            }
        }
        s.vs_x0 = aggregate(vx);
        if (with_oracle) s.vs_global = aggregate(vg);
        out.methods.push_back(std::move(s));
    }
    return out;
}

std::string bench_csv(const BenchResult& r) {
    std::string out(kBenchCsvHeader);
    out += '\n';
    for (const auto& row : r.rows) {
        out += std::to_string(row.realization) + ',' + std::to_string(row.seed) + ',' + row.method + ',' +
               format_double(row.cost) + ',' + format_double(row.mse_vs_x0) + ',' +
               format_double(row.sm_vs_x0) + ',' + std::to_string(row.sparsity) + ',' +
               opt_cell(row.mse_vs_global) + ',' + opt_cell(row.sm_vs_global) + ',' +
               std::to_string(row.iterations) + ',' + (row.converged ? "1" : "0") + ',' +
               opt_cell(row.tail_growth) + '\n';
    }
    return out;
}

namespace {

ojson methods_json(const BenchResult& r) {
    ojson methods = ojson::object();
    for (const auto& s : r.methods) {
        ojson m{{"vs_x0", report_json(s.vs_x0)},
                {"vs_global", s.vs_global ? report_json(*s.vs_global) : ojson(nullptr)},
                {"converged_runs", s.converged_runs}};
        if (is_icr(s.method)) {
            m["quasi_cauchy_violations"] = s.quasi_cauchy_violations;
            m["max_tail_growth"] = s.max_tail_growth;
        }
        methods[s.method] = std::move(m);
    }
    return methods;
}

}  // namespace

std::string bench_summary_json(const ExperimentConfig& cfg, const BenchResult& r) {
    ojson j = report_header(cfg);
    const SpikeSlabPrior prior = synth_prior(cfg);
    j["resolved"] = {{"kappa", prior.kappa()[0]},
                     {"lambda", prior.lambda()},
                     {"rho", prior.rho()[0]},
                     {"methods", resolved_methods(cfg)}};
    j["methods"] = methods_json(r);
    j["skipped"] = r.skipped;
    return j.dump(2) + "\n";
}

std::vector<SweepPoint> run_sweep(const ExperimentConfig& cfg) {
    if (cfg.sweep_values.empty()) throw Error(ErrorCode::InvalidArgument, "sweep grid is empty");
    std::vector<SweepPoint> out;
    for (const double v : cfg.sweep_values) {
        ExperimentConfig c = cfg;
        if (cfg.sweep_param == "k") {
            if (v != std::floor(v) || v < 0 || v > cfg.p)
                throw Error(ErrorCode::InvalidArgument, "k grid values must be integers in [0, p]");
            c.k = static_cast<int>(v);
        } else if (cfg.sweep_param == "sigma") {
            if (!(v > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma grid values must be > 0");
            c.sigma = v;
        } else {
            throw Error(ErrorCode::InvalidArgument, "sweep_param must be k or sigma");
        }
        out.push_back({v, run_synth_bench(c)});
    }
    return out;
}

namespace {

std::vector<std::pair<std::string, double>> sweep_metrics(const MethodSummary& s) {
    std::vector<std::pair<std::string, double>> m{{"cost", s.vs_x0.avg_cost},
                                                  {"mse", s.vs_x0.mse},
                                                  {"mse_sum", s.vs_x0.mse_sum},
                                                  {"sm_vs_x0", s.vs_x0.support_match_pct},
                                                  {"sparsity", s.vs_x0.sparsity_level}};
    if (s.vs_global) {
        m.emplace_back("mse_vs_global", s.vs_global->mse);
        m.emplace_back("sm_vs_global", s.vs_global->support_match_pct);
    }
    return m;
}

}  // namespace

std::string sweep_csv(const ExperimentConfig& cfg, const std::vector<SweepPoint>& points) {
    std::string out(kSweepCsvHeader);
    out += '\n';
    for (const auto& pt : points)
        for (const auto& s : pt.result.methods)
            for (const auto& [metric, val] : sweep_metrics(s))
                out += cfg.sweep_param + ',' + format_double(pt.value) + ',' + s.method + ',' + metric +
                       ',' + format_double(val) + '\n';
    return out;
}

std::string sweep_summary_json(const ExperimentConfig& cfg, const std::vector<SweepPoint>& points) {
    ojson j = report_header(cfg);
    ojson grid = ojson::array();
    for (const auto& pt : points)
        grid.push_back({{cfg.sweep_param, pt.value}, {"methods", methods_json(pt.result)},
                        {"skipped", pt.result.skipped}});
    j["grid"] = std::move(grid);
    return j.dump(2) + "\n";
}

MnistResult run_mnist(const ExperimentConfig& cfg) {
    if (cfg.mnist_images.empty())
        throw Error(ErrorCode::InvalidArgument, "mnist_images path is required");
    if (cfg.threads < 1) throw Error(ErrorCode::InvalidArgument, "threads must be >= 1");
    if (cfg.mnist_first < 0 || cfg.mnist_count < 1)
        throw Error(ErrorCode::InvalidArgument, "mnist_first must be >= 0 and mnist_count >= 1");
    const IdxImageSet set = read_idx_images(cfg.mnist_images);
    std::vector<std::uint8_t> labels;
    if (!cfg.mnist_labels.empty()) {
        labels = read_idx_labels(cfg.mnist_labels);
        if (labels.size() != set.count)
            throw Error(ErrorCode::DimensionMismatch, "label count does not match image count");
    }
    const auto first = static_cast<std::size_t>(cfg.mnist_first);
    const auto count = static_cast<std::size_t>(cfg.mnist_count);
    if (first + count > set.count)
        throw Error(ErrorCode::InvalidArgument, "image range exceeds the " + std::to_string(set.count) +
                                                    " images in " + cfg.mnist_images);

    std::vector<ImageMethod> methods;
    std::vector<std::string> names;
    for (const auto& m : resolved_methods(cfg)) {
        if (m == "icr_nn")
            methods.push_back(ImageMethod::icr_nn);
        else if (m == "icr")
            methods.push_back(ImageMethod::icr);
        else if (m == "elastic_net")
            methods.push_back(ImageMethod::elastic_net);
        else
            throw Error(ErrorCode::InvalidArgument, "method '" + m + "' is not available for images");
        names.push_back(m);
    }

    ImageRecoveryConfig rc;
    rc.measurements = cfg.mnist_q;
    rc.sigma = cfg.sigma;
    rc.kappa = cfg.kappa.value_or(0.19);
    rc.lambda = cfg.lambda;
    rc.icr = icr_config(cfg, IcrVariant::nonnegative);

    MnistResult out;
    out.rows = static_cast<int>(set.rows);
    out.cols = static_cast<int>(set.cols);
    out.reconstructions.resize(count);
    std::vector<std::vector<ImageRow>> per_image(count);
    parallel_for(count, cfg.threads, [&](std::size_t t) {
        const std::size_t idx = first + t;
        const std::uint64_t seed = derive_realization_seed(cfg.seed, idx);
        const Vector truth = image_to_vector(set.image(idx));
        const MeasurementModel model = measure_image(truth, rc.measurements, rc.sigma, seed);
        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            const auto t0 = std::chrono::steady_clock::now();
            ImageRecovery rec = recover_measured(model, truth, methods[mi], rc);
            ImageRow row;
            row.image = idx;
            if (!labels.empty()) row.label = labels[idx];
            row.seed = seed;
            row.method = names[mi];
            row.mse = rec.mse;
            row.sparsity = rec.solution.gamma.count();
            row.iterations = rec.solution.iterations;
            row.converged = rec.solution.converged;
            row.wall_time_s = seconds_since(t0);
            per_image[t].push_back(std::move(row));
            if (mi == 0) out.reconstructions[t] = vector_to_image(rec.reconstruction);
        }
        std::sort(per_image[t].begin(), per_image[t].end(),
                  [](const ImageRow& a, const ImageRow& b) { return a.method < b.method; });
    });
    for (std::size_t t = 0; t < count; ++t) {
        out.images.push_back(first + t);
        for (auto& row : per_image[t]) out.table.push_back(std::move(row));
    }
    for (const auto& name : names) {
        double sum = 0;
        for (const auto& row : out.table)
            if (row.method == name) sum += row.mse;
        out.mean_mse.emplace_back(name, sum / static_cast<double>(count));
    }
    return out;
}

std::string mnist_csv(const MnistResult& r) {
    std::string out(kMnistCsvHeader);
    out += '\n';
    for (const auto& row : r.table)
        out += std::to_string(row.image) + ',' + (row.label ? std::to_string(*row.label) : "") + ',' +
               std::to_string(row.seed) + ',' + row.method + ',' + format_double(row.mse) + ',' +
               std::to_string(row.sparsity) + ',' + std::to_string(row.iterations) + ',' +
               (row.converged ? "1" : "0") + '\n';
    return out;
}

std::string mnist_summary_json(const ExperimentConfig& cfg, const MnistResult& r) {
    ojson j = report_header(cfg);
    j["resolved"] = {{"kappa", cfg.kappa.value_or(0.19)},
                     {"lambda", resolved_lambda(cfg)},
                     {"measurements", cfg.mnist_q},
                     {"pixel_scale", "x = byte / 255"}};
    ojson methods = ojson::object();
    for (const auto& [name, mean] : r.mean_mse) {
        std::vector<double> times;
        for (const auto& row : r.table)
            if (row.method == name) times.push_back(row.wall_time_s);
        methods[name] = {{"mean_mse", mean}, {"wall_time_s", median(times)}};
    }
    j["methods"] = std::move(methods);
    j["images"] = r.images.size();

    auto mean_of = [&](std::string_view name) -> std::optional<double> {
        for (const auto& [n, v] : r.mean_mse)
            if (n == name) return v;
        return std::nullopt;
    };
    const auto nn = mean_of("icr_nn"), un = mean_of("icr"), en = mean_of("elastic_net");
    ojson ordering = ojson::object();
    if (nn && un) ordering["icr_nn_le_icr"] = *nn <= *un;
    if (un && en) ordering["icr_le_elastic_net"] = *un <= *en;
    if (nn && un && en) ordering["holds"] = *nn <= *un && *un <= *en;
    j["ordering"] = std::move(ordering);
    return j.dump(2) + "\n";
}

std::string run_solve(const ExperimentConfig& cfg) {
    if (cfg.design.empty() || cfg.observation.empty())
        throw Error(ErrorCode::InvalidArgument, "solve needs both design and observation paths");
    if (!cfg.kappa) throw Error(ErrorCode::InvalidArgument, "solve needs an explicit kappa");
    const auto methods = resolved_methods(cfg);
    if (methods.size() != 1) throw Error(ErrorCode::InvalidArgument, "solve takes exactly one method");
    const std::string& method = methods.front();

    Matrix a = read_matrix(cfg.design);
    Vector y = read_vector(cfg.observation);
    const MeasurementModel model(std::move(a), std::move(y), cfg.sigma);
    const SpikeSlabPrior prior = SpikeSlabPrior::uniform(model.cols(), *cfg.kappa, resolved_lambda(cfg),
                                                         cfg.sigma, PriorOptions{cfg.allow_non_sparsifying});

    ojson j = report_header(cfg);
    j["method"] = method;
    RecoverySolution sol;
    if (is_icr(method)) {
        const IcrVariant v = method == "icr_nn" ? IcrVariant::nonnegative : IcrVariant::unconstrained;
        double factor = 1.0;
        std::pair<RecoverySolution, IcrTrace> res;
        if (cfg.pruning == Pruning::lemma1) {
            auto [scaled, f] = normalize_for_lemma1(model);
            factor = f;
            res = icr_solve(scaled, prior, icr_config(cfg, v));
            sol = make_solution(res.first.x / factor, model, prior, res.first.iterations,
                                res.first.converged);
        } else {
            res = icr_solve(model, prior, icr_config(cfg, v));
            sol = res.first;
        }
        const IcrTrace& trace = res.second;
        ojson iters = ojson::array();
        for (std::size_t n = 0; n < trace.iterations.size(); ++n) {
            const auto& it = trace.iterations[n];
            iters.push_back({{"n", n + 1},
                             {"map_cost", it.map_cost},
                             {"subproblem_objective", it.subproblem_objective},
                             {"step_residual", it.step_residual},
                             {"pruned", it.pruned.size()},
                             {"inner_iterations", it.inner_iterations}});
        }
        const auto diag = icr_diagnostics(trace);
        j["trace"] = {{"iterations", std::move(iters)},
                      {"best_index", trace.best_index},
                      {"gamma_ratio", std::vector<double>(trace.gamma_ratio.begin(), trace.gamma_ratio.end())},
                      {"lemma1_scale", factor},
                      {"diagnostics",
                       {{"tail_sup", diag.tail_sup},
                        {"tail_growth", diag.tail_growth},
                        {"quasi_cauchy_violation", diag.quasi_cauchy_violation},
                        {"final_step_residual", diag.final_step_residual}}}};
    } else {
        sol = run_method(method, model, prior, cfg).solution;
    }
    j["x"] = std::vector<double>(sol.x.begin(), sol.x.end());
    j["gamma"] = sol.gamma.bits();
    j["cost"] = sol.cost;
    j["iterations"] = sol.iterations;
    j["converged"] = sol.converged;
    return j.dump(2) + "\n";
}

void export_synth_instance(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
    const SynthInstance inst = generate(synth_spec(cfg, derive_realization_seed(cfg.seed, 0)));
    write_matrix_binary(dir / "design.icrmat", inst.design);
    write_matrix_binary(dir / "observation.icrmat", inst.observation);
    write_matrix_binary(dir / "x0.icrmat", inst.x0);
}

std::filesystem::path output_dir(const ExperimentConfig& cfg) {
    if (!cfg.out_dir.empty()) return cfg.out_dir;
    if (const char* env = std::getenv("ICR_OUT_DIR"); env && *env) return env;
    return std::filesystem::current_path();
}

std::vector<std::filesystem::path> run_command(const ExperimentConfig& cfg) {
    const auto dir = output_dir(cfg);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create output directory " + dir.string());

    std::vector<std::filesystem::path> written;
    auto emit = [&](const std::string& name, std::string_view text) {
        write_text_file(dir / name, text);
        written.push_back(dir / name);
    };

    if (cfg.command == "synth-bench") {
        const BenchResult r = run_synth_bench(cfg);
        emit("synth_bench.csv", bench_csv(r));
        emit("synth_bench_summary.json", bench_summary_json(cfg, r));
    } else if (cfg.command == "sweep") {
        const auto points = run_sweep(cfg);
        emit("sweep.csv", sweep_csv(cfg, points));
        emit("sweep_summary.json", sweep_summary_json(cfg, points));
        for (const auto& s : points.front().result.methods) {
            for (const auto& [metric, unused] : sweep_metrics(s)) {
                std::string dat = "# " + cfg.sweep_param + " " + metric + "\n";
                for (const auto& pt : points)
                    for (const auto& ps : pt.result.methods)
                        if (ps.method == s.method)
                            for (const auto& [m2, v] : sweep_metrics(ps))
                                if (m2 == metric) dat += format_double(pt.value) + " " + format_double(v) + "\n";
                emit("sweep_" + s.method + "_" + metric + ".dat", dat);
            }
        }
    } else if (cfg.command == "mnist") {
        const MnistResult r = run_mnist(cfg);
        emit("mnist.csv", mnist_csv(r));
        emit("mnist_summary.json", mnist_summary_json(cfg, r));
        for (std::size_t t = 0; t < r.images.size(); ++t) {
            const auto path = dir / ("mnist_recon_" + std::to_string(r.images[t]) + ".pgm");
            write_pgm(path, r.rows, r.cols, r.reconstructions[t]);
            written.push_back(path);
        }
    } else if (cfg.command == "solve") {
        emit("solve.json", run_solve(cfg));
    } else if (cfg.command == "synth-export") {
        export_synth_instance(cfg, dir);
        for (const char* f : {"design.icrmat", "observation.icrmat", "x0.icrmat"}) written.push_back(dir / f);
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown command '" + cfg.command + "'");
    }
    emit("config.txt", format_config(cfg));
    return written;
}

}  // namespace icr
