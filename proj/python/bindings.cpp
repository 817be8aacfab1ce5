// Python bindings. Thin wrappers over the C++ API: points cross the boundary
// as NumPy arrays, library errors surface as misoagp.Error subclasses.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "misoagp/misoagp.hpp"

namespace py = pybind11;
using namespace misoagp;

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

PointList rows_of(const RowMatrix& X) {
    PointList out;
    out.reserve(static_cast<std::size_t>(X.rows()));
    for (Eigen::Index i = 0; i < X.rows(); ++i) out.emplace_back(X.row(i).transpose());
    return out;
}

RowMatrix stack(const std::vector<Eigen::VectorXd>& points, std::size_t dims) {
    RowMatrix M(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(dims));
    for (std::size_t i = 0; i < points.size(); ++i) M.row(static_cast<Eigen::Index>(i)) = points[i].transpose();
    return M;
}

KernelFamily family_of(const std::string& name) {
    if (auto f = parse_kernel_family(name)) return *f;
    throw InvalidArgument("unknown kernel family '" + name + "'");
}

KernelParams make_params(const std::string& kernel, double length_scale, double signal_variance, double rq_alpha) {
    KernelParams p;
    p.family = family_of(kernel);
    p.length_scale = length_scale;
    p.signal_variance = signal_variance;
    p.rq_alpha = rq_alpha;
    p.validate();
    return p;
}

Dataset dataset_of(const RowMatrix& X, const std::vector<double>& y) {
    Dataset d{rows_of(X), y};
    d.validate();
    return d;
}

py::dict trace_dict(const TraceFile& t) {
    std::vector<std::size_t> iteration, source, dhat;
    std::vector<double> y, nominal, actual, best, augmented;
    std::vector<bool> corrected;
    std::vector<Eigen::VectorXd> xs;
    for (const auto& r : t.rows) {
        iteration.push_back(r.iteration);
        source.push_back(r.source);
        xs.push_back(r.x);
        y.push_back(r.y);
        nominal.push_back(r.nominal_cost_cum);
        actual.push_back(r.actual_cost_cum);
        best.push_back(r.best_seen);
        augmented.push_back(r.augmented_best_seen);
        dhat.push_back(r.dhat_size);
        corrected.push_back(r.corrected);
    }
    py::dict out;
    out["iteration"] = iteration;
    out["source"] = source;
    out["x"] = stack(xs, t.dims);
    out["y"] = y;
    out["nominal_cost_cum"] = nominal;
    out["actual_cost_cum"] = actual;
    out["best_seen"] = best;
    out["augmented_best_seen"] = augmented;
    out["dhat_size"] = dhat;
    out["corrected"] = corrected;
    return out;
}

}  // namespace

PYBIND11_MODULE(_misoagp, m) {
    m.doc() = "Multi-information-source Bayesian optimization with an augmented Gaussian process";

    static py::exception<Error> base(m, "Error");
    static py::exception<ConfigError> config_error(m, "ConfigError", base.ptr());
    static py::exception<InvalidArgument> invalid(m, "InvalidArgument", base.ptr());
    static py::exception<SourceEvaluationError> source_error(m, "SourceEvaluationError", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ConfigError& e) {
            py::set_error(config_error, e.what());
        } catch (const InvalidArgument& e) {
            py::set_error(invalid, e.what());
        } catch (const SourceEvaluationError& e) {
            py::set_error(source_error, e.what());
        } catch (const Error& e) {
            py::set_error(base, e.what());
        }
    });

    py::class_<GaussianProcess>(m, "GaussianProcess")
        .def_static(
            "fit",
            [](const RowMatrix& X, const std::vector<double>& y, const std::string& kernel, double length_scale,
               double signal_variance, double rq_alpha, double noise) {
                return GaussianProcess::fit(dataset_of(X, y),
                                            make_params(kernel, length_scale, signal_variance, rq_alpha), noise);
            },
            py::arg("X"), py::arg("y"), py::arg("kernel") = "SE", py::arg("length_scale") = 0.5,
            py::arg("signal_variance") = 1.0, py::arg("rq_alpha") = 1.0, py::arg("noise") = 0.0,
            "Condition a GP with fixed hyperparameters on points of the unit cube.")
        .def_static(
            "train",
            [](const RowMatrix& X, const std::vector<double>& y, const std::string& kernel, std::size_t restarts,
               std::uint64_t seed) {
                MleConfig c;
                c.family = family_of(kernel);
                c.restarts = restarts;
                return mle_train(dataset_of(X, y), c, seed);
            },
            py::arg("X"), py::arg("y"), py::arg("kernel") = "SE", py::arg("restarts") = 10, py::arg("seed") = 0,
            "Multi-start maximum-likelihood training with fitted noise.")
        .def(
            "predict",
            [](const GaussianProcess& gp, const RowMatrix& X) {
                std::vector<double> mean, var;
                for (const auto& x : rows_of(X)) {
                    const auto p = gp.predict(x);
                    mean.push_back(p.mean);
                    var.push_back(p.variance);
                }
                return py::make_tuple(mean, var);
            },
            py::arg("X"), "Posterior mean and variance at each row of X.")
        .def_property_readonly("log_marginal_likelihood", &GaussianProcess::log_marginal_likelihood)
        .def_property_readonly("length_scale", [](const GaussianProcess& gp) { return gp.params().length_scale; })
        .def_property_readonly("signal_variance",
                               [](const GaussianProcess& gp) { return gp.params().signal_variance; })
        .def_property_readonly("noise", &GaussianProcess::noise)
        .def("__len__", &GaussianProcess::size);

    m.def("expected_improvement", py::overload_cast<double, double, double, double>(&expected_improvement),
          py::arg("mean"), py::arg("sigma"), py::arg("f_best"), py::arg("xi") = 0.0);
    m.def("probability_of_improvement", py::overload_cast<double, double, double, double>(&probability_of_improvement),
          py::arg("mean"), py::arg("sigma"), py::arg("f_best"), py::arg("xi") = 0.0);
    m.def(
        "beta",
        [](std::size_t n, std::size_t dim, double delta_conf) {
            BetaSchedule s;
            s.dim = dim;
            s.delta_conf = delta_conf;
            return beta(s, n);
        },
        py::arg("n"), py::arg("dim"), py::arg("delta_conf") = 0.05);
    m.def(
        "latin_hypercube",
        [](std::size_t d, std::size_t n, std::uint64_t seed) { return stack(latin_hypercube(d, n, seed), d); },
        py::arg("d"), py::arg("n"), py::arg("seed") = 0);

    m.def("benchmark_names", &benchmark_names);
    m.def(
        "evaluate_benchmark",
        [](const std::string& name, std::size_t source, const Eigen::VectorXd& x, const BenchmarkParams& params) {
            auto b = make_benchmark(name, params);
            if (source < 1 || source > b.sources.size())
                throw InvalidArgument("source must be in 1.." + std::to_string(b.sources.size()));
            return b.sources[source - 1]->evaluate(x).y;
        },
        py::arg("name"), py::arg("source"), py::arg("x"), py::arg("params") = BenchmarkParams{},
        "Evaluate source `source` (1-based) of a built-in benchmark at raw point x.");

    m.def(
        "validate_config",
        [](const std::string& json_text) -> std::vector<std::string> {
            try {
                parse_config(json_text);
            } catch (const ConfigError& e) {
                return e.violations();
            }
            return {};
        },
        py::arg("json_text"), "List of configuration violations; empty when the config is valid.");
    m.def(
        "run_experiment",
        [](const std::string& json_text, std::optional<std::filesystem::path> output_dir,
           std::optional<std::uint64_t> seed, bool resume) {
            const auto config = parse_config(json_text);
            RunOptions options{seed, std::move(output_dir), resume};
            std::ostringstream log;
            ExperimentResult r;
            {
                py::gil_scoped_release release;
                r = run_experiment(config, options, log);
            }
            py::dict out;
            out["status"] = r.status;
            out["traces"] = r.traces;
            out["summary"] = r.summary;
            out["message"] = r.message;
            out["log"] = log.str();
            return out;
        },
        py::arg("json_text"), py::arg("output_dir") = py::none(), py::arg("seed") = py::none(),
        py::arg("resume") = false,
        "Run a JSON experiment configuration; returns status (0 ok, 3 runtime failure), trace paths and log.");
    m.def(
        "read_trace", [](const std::filesystem::path& path) { return trace_dict(read_trace_csv(path)); },
        py::arg("path"), "Load a trace CSV into a dict of columns.");
}
