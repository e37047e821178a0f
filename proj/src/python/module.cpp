#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "fpt/diagnostics.hpp"
#include "fpt/exact.hpp"
#include "fpt/monte_carlo.hpp"
#include "fpt/reference.hpp"
#include "fpt/report.hpp"

namespace py = pybind11;
using namespace fpt;

namespace {

struct PySchedule {
    SchedulePtr ptr;
};

struct PyBoundary {
    BoundaryPtr ptr;
};

nlohmann::json json_from_str(const std::string& s) { return nlohmann::json::parse(s); }

py::dict estimate_dict(const McEstimate& e) {
    py::dict d;
    d["mean"] = e.mean;
    d["std_error"] = e.std_error;
    d["replications"] = e.replications;
    d["survivors"] = e.survivors;
    return d;
}

}  // namespace

PYBIND11_MODULE(_fpt, m) {
    m.doc() = "First-passage times of random walks over moving boundaries";

    py::class_<PySchedule>(m, "Schedule")
        .def_property_readonly("horizon", [](const PySchedule& s) { return s.ptr->horizon(); })
        .def("sigma2_at", [](const PySchedule& s, std::size_t k) { return s.ptr->sigma2_at(k); })
        .def("cum_var", [](const PySchedule& s, std::size_t n) { return s.ptr->cum_var(n); })
        .def("lattice_span", [](const PySchedule& s) { return s.ptr->lattice_span(); })
        .def("to_json", [](const PySchedule& s) { return s.ptr->to_json().dump(); });

    py::class_<PyBoundary>(m, "Boundary")
        .def("g_at", [](const PyBoundary& b, std::size_t n) { return b.ptr->g_at(n); })
        .def_property_readonly("family", [](const PyBoundary& b) { return b.ptr->family(); })
        .def("to_json", [](const PyBoundary& b) { return b.ptr->to_json().dump(); });

    m.def("make_ssrw", [](std::size_t n) { return PySchedule{make_ssrw(n)}; });
    m.def("make_power_weighted",
          [](double p, std::size_t n) { return PySchedule{make_power_weighted(p, n)}; });
    m.def("make_four_point", [](std::size_t n) { return PySchedule{make_four_point(n)}; });
    m.def("make_four_point_lattice", [](std::size_t n, double grid) {
        return PySchedule{make_four_point_lattice(n, grid)};
    });
    m.def("make_truncated_pareto", [](double p, double grid, std::size_t n) {
        return PySchedule{make_truncated_pareto(p, grid, n)};
    });
    m.def("schedule_from_json", [](const std::string& spec, std::size_t n_max) {
        return PySchedule{schedule_from_json(json_from_str(spec), n_max)};
    });

    m.def("make_constant_boundary",
          [](double x) { return PyBoundary{make_constant_boundary(x)}; });
    m.def("make_log_damped_boundary", [](double c, double gamma, const PySchedule& s) {
        return PyBoundary{make_log_damped_boundary(c, gamma, s.ptr)};
    });
    m.def("make_table_boundary", [](std::vector<double> values) {
        return PyBoundary{make_table_boundary(std::move(values))};
    });
    m.def("boundary_from_json", [](const std::string& spec, const PySchedule& s) {
        return PyBoundary{boundary_from_json(json_from_str(spec), s.ptr)};
    });

    py::class_<ExactResult>(m, "ExactResult")
        .def_property_readonly("n_max", &ExactResult::n_max)
        .def_readonly("lost_mass", &ExactResult::lost_mass)
        .def("survival_at", &ExactResult::survival_at)
        .def("ez_star_at", &ExactResult::ez_star_at)
        .def("absorbed_mass_at", &ExactResult::absorbed_mass_at)
        .def("absorbed_neg_s_at", &ExactResult::absorbed_neg_s_at);

    m.def(
        "evolve",
        [](const PySchedule& schedule, const PyBoundary& boundary, std::size_t n_max) {
            return evolve(*schedule.ptr, *boundary.ptr, n_max);
        },
        py::arg("schedule"), py::arg("boundary"), py::arg("n_max"));
    m.def("ssrw_survival_oracle", &ssrw_survival_oracle);

    m.def(
        "estimate_survival",
        [](const PySchedule& schedule, const PyBoundary& boundary, std::size_t n,
           std::uint64_t seed, std::size_t replications, int threads) {
            McConfig cfg;
            cfg.seed = seed;
            cfg.replications = replications;
            cfg.threads = threads;
            return estimate_dict(estimate_survival(*schedule.ptr, *boundary.ptr, n, cfg));
        },
        py::arg("schedule"), py::arg("boundary"), py::arg("n"), py::arg("seed") = 0,
        py::arg("replications") = 100'000, py::arg("threads") = 0);

    m.def("lindeberg_fraction", [](const PySchedule& s, std::size_t n, double eps) {
        return lindeberg_fraction(*s.ptr, n, eps);
    });
    m.def("lambda_n", [](const PySchedule& s, std::size_t n) { return lambda_n(*s.ptr, n); });
    m.def("series_lind_plus", [](const PySchedule& s, double eps, std::size_t N) {
        return series_lind_plus(*s.ptr, eps, N).to_json().dump();
    });

    m.def("normal_cdf", &normal_cdf);
    m.def("psi", &psi);
    m.def("bm_constant_survival", &bm_constant_survival);
    m.def("meander_endpoint_cdf", &meander_endpoint_cdf);

    m.def(
        "run_experiment",
        [](const std::string& config_json) {
            std::ostringstream log;
            const int code =
                run_experiment(ExperimentConfig::from_json(json_from_str(config_json)), log);
            return py::make_tuple(code, log.str());
        },
        py::arg("config_json"));
}
