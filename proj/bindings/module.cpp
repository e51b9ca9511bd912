#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "elmpde/assembly.hpp"
#include "elmpde/config.hpp"
#include "elmpde/features.hpp"
#include "elmpde/geometry.hpp"
#include "elmpde/io.hpp"
#include "elmpde/metrics.hpp"
#include "elmpde/problems.hpp"
#include "elmpde/runner.hpp"
#include "elmpde/solvers.hpp"

namespace py = pybind11;
using namespace elmpde;

PYBIND11_MODULE(_core, m) {
    m.doc() = "random-feature collocation solver for PDE benchmarks";

    py::enum_<PointRule>(m, "PointRule")
        .value("fixed", PointRule::fixed)
        .value("linear", PointRule::linear)
        .value("sqrt", PointRule::sqrt_rule);
    py::enum_<Method>(m, "Method")
        .value("lse", Method::lse)
        .value("pielm", Method::pielm)
        .value("xtfc", Method::xtfc);
    py::enum_<Ratio>(m, "Ratio")
        .value("under", Ratio::under)
        .value("square", Ratio::square)
        .value("over", Ratio::over);

    py::class_<Domain>(m, "Domain")
        .def_static("box", &Domain::box, py::arg("bounds"))
        .def_static("polygon", &Domain::polygon, py::arg("vertices"))
        .def_static("space_time", &Domain::space_time, py::arg("spatial"), py::arg("t0"),
                    py::arg("tf"))
        .def_property_readonly("dim", &Domain::dim)
        .def("bounding_box", &Domain::bounding_box)
        .def("volume", &Domain::volume)
        .def("boundary_measure", &Domain::boundary_measure)
        .def("characteristic_length", &Domain::characteristic_length)
        .def("boundary_distance", &Domain::boundary_distance)
        .def("contains", [](const Domain& d, const Eigen::VectorXd& p) {
            return contains(d, p);
        });

    py::class_<PointSet>(m, "PointSet")
        .def_readonly("interior", &PointSet::interior)
        .def_readonly("boundary", &PointSet::boundary)
        .def_readonly("seed", &PointSet::seed);
    m.def("sample_point_set", &sample_point_set, py::arg("domain"), py::arg("n_interior"),
          py::arg("n_boundary"), py::arg("seed"));

    py::class_<PointAllocation>(m, "PointAllocation")
        .def_readonly("n_interior", &PointAllocation::n_interior)
        .def_readonly("n_boundary", &PointAllocation::n_boundary)
        .def_readonly("clamped", &PointAllocation::clamped);
    m.def("allocate_counts", &allocate_counts, py::arg("total_n"), py::arg("rule"),
          py::arg("domain"), py::arg("fixed_boundary") = 0);

    py::class_<RandomFeatureLayer>(m, "RandomFeatureLayer")
        .def_static("create", &RandomFeatureLayer::create, py::arg("neurons"),
                    py::arg("dim"), py::arg("half_range"), py::arg("seed"))
        .def_property_readonly("neurons", &RandomFeatureLayer::neurons)
        .def_property_readonly("dim", &RandomFeatureLayer::dim)
        .def_property_readonly("weights", &RandomFeatureLayer::weights)
        .def_property_readonly("biases", &RandomFeatureLayer::biases)
        .def("eval", &RandomFeatureLayer::eval, py::arg("points"))
        .def("eval_derivative", &RandomFeatureLayer::eval_derivative, py::arg("points"),
             py::arg("alpha"))
        .def("predict", &RandomFeatureLayer::predict, py::arg("beta"), py::arg("points"),
             py::arg("alpha") = MultiIndex{0, 0, 0});

    m.def("pinv_solve", &pinv_solve, py::arg("H"), py::arg("y"),
          py::arg("rank_tol") = 1e-12);
    m.def("singular_values", &singular_values, py::arg("A"));
    m.def("numerical_rank", &numerical_rank, py::arg("sigma"), py::arg("rank_tol") = 1e-12);
    m.def(
        "lse_solve",
        [](const Eigen::MatrixXd& A, const Eigen::VectorXd& f, const Eigen::MatrixXd& C,
           const Eigen::VectorXd& g, double rank_tol) {
            const LseSolution s = lse_solve(A, f, C, g, rank_tol);
            return py::make_tuple(s.beta, s.interior_residual_norm,
                                  s.constraint_residual_norm);
        },
        py::arg("A"), py::arg("f"), py::arg("C"), py::arg("g"),
        py::arg("rank_tol") = 1e-12);
    m.def("penalty_solve", &penalty_solve, py::arg("A"), py::arg("f"), py::arg("C"),
          py::arg("g"), py::arg("lam") = 1.0, py::arg("rank_tol") = 1e-12);

    py::class_<GaussNewtonOptions>(m, "GaussNewtonOptions")
        .def(py::init<>())
        .def_readwrite("max_iters", &GaussNewtonOptions::max_iters)
        .def_readwrite("step_cap", &GaussNewtonOptions::step_cap)
        .def_readwrite("res_tol", &GaussNewtonOptions::res_tol)
        .def_readwrite("rank_tol", &GaussNewtonOptions::rank_tol);

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("problem_id", &RunConfig::problem_id)
        .def_readwrite("method", &RunConfig::method)
        .def_readwrite("lam", &RunConfig::lambda)
        .def_readwrite("n_total", &RunConfig::n_total)
        .def_readwrite("point_rule", &RunConfig::point_rule)
        .def_readwrite("fixed_boundary", &RunConfig::fixed_boundary)
        .def_readwrite("ratio", &RunConfig::ratio)
        .def_readwrite("half_range", &RunConfig::half_range)
        .def_readwrite("seed", &RunConfig::seed)
        .def_readwrite("rank_tol", &RunConfig::rank_tol)
        .def_readwrite("gn", &RunConfig::gn)
        .def_readwrite("n_test", &RunConfig::n_test);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("n_interior", &RunResult::n_interior)
        .def_readonly("n_boundary", &RunResult::n_boundary)
        .def_readonly("neurons", &RunResult::neurons)
        .def_readonly("beta", &RunResult::beta)
        .def_readonly("constraint_rank", &RunResult::constraint_rank)
        .def_readonly("interior_residual_norm", &RunResult::interior_residual_norm)
        .def_readonly("constraint_residual_norm", &RunResult::constraint_residual_norm)
        .def_readonly("iterations", &RunResult::iterations)
        .def_readonly("converged", &RunResult::converged)
        .def_readonly("residual_trace", &RunResult::residual_trace)
        .def_readonly("rmse", &RunResult::rmse)
        .def_readonly("wall_ms", &RunResult::wall_ms)
        .def("predict", [](const RunResult& r, const Eigen::VectorXd& p) {
            return r.predict(p);
        });

    m.def("run_single", &run_single, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());

    m.def("catalog_ids", [] {
        std::vector<std::string> ids;
        for (const auto& pb : catalog()) ids.push_back(pb.id);
        return ids;
    });
    m.def("problem_info", [](const std::string& id) {
        const BenchmarkProblem& pb = lookup(id);
        py::dict d;
        d["id"] = pb.id;
        d["dim"] = pb.domain.dim();
        d["nonlinear"] = pb.is_nonlinear();
        d["extrapolation"] = pb.constraint_curve.has_value();
        return d;
    });
    m.def("exact_value", [](const std::string& id, const Eigen::VectorXd& p) {
        return lookup(id).exact.value(p);
    });

    py::class_<SpectrumEntry>(m, "SpectrumEntry")
        .def_readonly("label", &SpectrumEntry::label)
        .def_readonly("sigma", &SpectrumEntry::sigma)
        .def_readonly("effective_condition", &SpectrumEntry::effective_condition);
    m.def("spectrum_report", [](const std::string& id, const RunConfig& cfg) {
        return spectrum_report(lookup(id), cfg).entries;
    });

    m.def(
        "run_convergence",
        [](const RunConfig& base, const std::vector<int>& n_grid,
           const std::vector<std::uint64_t>& seeds, int jobs) {
            ConvergenceStudy study{base, n_grid, seeds};
            const ConvergenceTable t = run_convergence(study, jobs);
            py::list rows;
            for (const auto& c : t.cells) {
                py::dict d;
                d["N"] = c.n_total;
                d["L"] = c.neurons;
                d["N_I"] = c.n_interior;
                d["N_B"] = c.n_boundary;
                d["seed"] = c.seed;
                d["ok"] = c.ok;
                d["rmse"] = c.rmse;
                d["reason"] = c.reason;
                rows.append(std::move(d));
            }
            return py::make_tuple(rows, t.median_rmse);
        },
        py::arg("base"), py::arg("n_grid"), py::arg("seeds"), py::arg("jobs") = 1);

    m.def(
        "rmse",
        [](const std::function<double(const Eigen::VectorXd&)>& prediction,
           const std::string& id, int n_interior, int n_boundary, std::uint64_t seed) {
            return rmse(prediction, lookup(id), n_interior, n_boundary, seed);
        },
        py::arg("prediction"), py::arg("problem_id"), py::arg("n_interior_test"),
        py::arg("n_boundary_test"), py::arg("seed"));
}
