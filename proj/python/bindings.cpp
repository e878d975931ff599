#include "icr/baselines.hpp"
#include "icr/config.hpp"
#include "icr/error.hpp"
#include "icr/experiment.hpp"
#include "icr/icr.hpp"
#include "icr/metrics.hpp"
#include "icr/model.hpp"
#include "icr/oracle.hpp"
#include "icr/synth.hpp"
#include "icr/version.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace icr;

namespace {

SpikeSlabPrior make_prior(Eigen::Index p, double kappa, std::optional<double> lambda, double sigma,
                          bool allow_non_sparsifying) {
    return SpikeSlabPrior::uniform(p, kappa, lambda.value_or(sigma * sigma), sigma,
                                   PriorOptions{allow_non_sparsifying});
}

py::dict solution_dict(const RecoverySolution& s) {
    py::dict d;
    d["x"] = s.x;
    std::vector<Eigen::Index> support = s.gamma.support();
    d["support"] = support;
    d["cost"] = s.cost;
    d["iterations"] = s.iterations;
    d["converged"] = s.converged;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Sparse recovery under a spike-and-slab prior";
    m.attr("__version__") = std::string(version());

    // kept alive for the lifetime of the interpreter
    static PyObject* error_type = py::exception<Error>(m, "IcrError", PyExc_RuntimeError).release().ptr();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(error_type, (std::string(to_string(e.code())) + ": " + e.what()).c_str());
        }
    });

    m.def("compute_rho", &compute_rho, py::arg("kappa"), py::arg("lam"), py::arg("sigma"),
          "Activation penalties sigma^2 log(2 pi sigma^2 (1-k)^2 / (lambda k^2)).");

    m.def(
        "map_cost",
        [](const Matrix& a, const Vector& y, const Vector& x, double sigma, double kappa,
           std::optional<double> lam) {
            const MeasurementModel model(a, y, sigma);
            const auto prior = make_prior(a.cols(), kappa, lam, sigma, true);
            return map_cost(x, ActivationPattern::from_threshold(x, default_zero_threshold(x)), model, prior);
        },
        py::arg("A"), py::arg("y"), py::arg("x"), py::arg("sigma"), py::arg("kappa"),
        py::arg("lam") = py::none());

    m.def(
        "icr_solve",
        [](const Matrix& a, const Vector& y, double sigma, double kappa, std::optional<double> lam,
           bool nonneg, double tol, int max_outer_iters, bool allow_non_sparsifying) {
            const MeasurementModel model(a, y, sigma);
            const auto prior = make_prior(a.cols(), kappa, lam, sigma, allow_non_sparsifying);
            IcrConfig cfg;
            cfg.variant = nonneg ? IcrVariant::nonnegative : IcrVariant::unconstrained;
            cfg.tol = tol;
            cfg.max_outer_iters = max_outer_iters;
            py::gil_scoped_release release;
            auto [sol, trace] = icr_solve(model, prior, cfg);
            const auto diag = icr_diagnostics(trace);
            py::gil_scoped_acquire acquire;
            py::dict d = solution_dict(sol);
            d["tail_growth"] = diag.tail_growth;
            std::vector<double> costs;
            for (const auto& it : trace.iterations) costs.push_back(it.map_cost);
            d["cost_trace"] = costs;
            return d;
        },
        py::arg("A"), py::arg("y"), py::arg("sigma"), py::arg("kappa"), py::arg("lam") = py::none(),
        py::arg("nonneg") = false, py::arg("tol") = 1e-6, py::arg("max_outer_iters") = 500,
        py::arg("allow_non_sparsifying") = false);

    m.def(
        "global_map",
        [](const Matrix& a, const Vector& y, double sigma, double kappa, std::optional<double> lam,
           bool allow_non_sparsifying) {
            const MeasurementModel model(a, y, sigma);
            const auto prior = make_prior(a.cols(), kappa, lam, sigma, allow_non_sparsifying);
            return solution_dict(global_map(model, prior));
        },
        py::arg("A"), py::arg("y"), py::arg("sigma"), py::arg("kappa"), py::arg("lam") = py::none(),
        py::arg("allow_non_sparsifying") = false);

    m.def(
        "elastic_net",
        [](const Matrix& a, const Vector& y, double l1, double l2) {
            const MeasurementModel model(a, y, 1.0);
            const auto prior = SpikeSlabPrior::uniform(a.cols(), 0.01, 1.0, 1.0, PriorOptions{true});
            return elastic_net(model, prior, {l1, l2}).solution.x;
        },
        py::arg("A"), py::arg("y"), py::arg("l1"), py::arg("l2"),
        "argmin ||y - Ax||^2 + l2 ||x||^2 + l1 ||x||_1");

    m.def(
        "generate",
        [](int p, int q, int k, double sigma, std::uint64_t seed) {
            SynthSpec s;
            s.p = p;
            s.q = q;
            s.k = k;
            s.sigma = sigma;
            s.seed = seed;
            const auto inst = icr::generate(s);
            return py::make_tuple(inst.design, inst.observation, inst.x0);
        },
        py::arg("p"), py::arg("q"), py::arg("k"), py::arg("sigma"), py::arg("seed"),
        "Seeded synthetic instance; returns (A, y, x0).");

    m.def("mse", &mse, py::arg("x"), py::arg("reference"));
    m.def(
        "support_match", [](const Vector& x, const Vector& r) { return support_match(x, r); },
        py::arg("x"), py::arg("reference"));

    m.def(
        "run_synth_bench_csv",
        [](const std::string& config_text) {
            const auto cfg = parse_config(config_text);
            py::gil_scoped_release release;
            return bench_csv(run_synth_bench(cfg));
        },
        py::arg("config_text"), "Run a synthetic benchmark from `key = value` config text; returns CSV.");
}
