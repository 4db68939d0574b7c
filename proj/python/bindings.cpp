#include "singlab/halfplane.hpp"
#include "singlab/io.hpp"
#include "singlab/profile.hpp"
#include "singlab/radial.hpp"
#include "singlab/regimes.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace singlab;

namespace {

py::array_t<double> field_array(const Field& f)
{
    py::array_t<double> a({f.grid.n_r, f.grid.n_theta});
    std::copy(f.values.begin(), f.values.end(), a.mutable_data());
    return a;
}

// JSON text is the interchange format; Python parses it with the json module.
template <class T>
std::string as_json(const T& v)
{
    return nlohmann::json(v).dump();
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    py::register_exception<ParameterDomainError>(m, "ParameterDomainError", PyExc_ValueError);
    py::register_exception<SingularInputError>(m, "SingularInputError", PyExc_ValueError);
    py::register_exception<FitError>(m, "FitError", PyExc_RuntimeError);
    py::register_exception<NonconvergenceError>(m, "NonconvergenceError", PyExc_RuntimeError);

    m.attr("__version__") = std::string(tool_version());

    py::class_<Params>(m, "Params")
        .def(py::init<int, double, double, double>(), py::arg("N"), py::arg("p"), py::arg("q"), py::arg("M"))
        .def_readwrite("N", &Params::N)
        .def_readwrite("p", &Params::p)
        .def_readwrite("q", &Params::q)
        .def_readwrite("M", &Params::M)
        .def("__repr__", &describe);

    m.def("validate", py::overload_cast<const Params&>(&validate));
    m.def("exponents", [](const Params& p) { return as_json(exponents(p)); });
    m.def("critical_constants", [](const Params& p) { return as_json(critical_constants(p)); });
    m.def("classify", [](const Params& p) { return classify(p).labels(); });
    m.def("q_star", &q_star_of);
    m.def("m_star_star", &m_star_star);
    m.def("m_star_star_r", &m_star_star_r);
    m.def("M_Np", &M_Np);
    m.def("m_star", &m_star);
    m.def("constant_profile_roots", [](int N, double p, double M) {
        std::vector<std::pair<double, int>> out;
        for (const auto& r : constant_profile_roots(N, p, M).roots) out.emplace_back(r.X, r.multiplicity);
        return out;
    });

    py::class_<ProfileSolution>(m, "ProfileSolution")
        .def_readonly("theta", &ProfileSolution::theta)
        .def_readonly("omega", &ProfileSolution::omega)
        .def_readonly("omega_at_pole", &ProfileSolution::omega_at_pole)
        .def_readonly("shooting_parameter", &ProfileSolution::shooting_parameter)
        .def_readonly("residual", &ProfileSolution::residual);
    m.def("solve_min_profile", [](const Params& p) {
        return solve_min_profile(make_problem(p, ProfileVariant::half_sphere_dirichlet));
    });
    m.def("solve_psi", &solve_psi);
    m.def("existence_threshold", [](int N, double p, double lo, double hi, double tol) {
        const auto b = existence_threshold(N, p, lo, hi, tol);
        return std::make_pair(b.lo, b.hi);
    });

    py::class_<RadialTrajectory>(m, "RadialTrajectory")
        .def_readonly("r", &RadialTrajectory::r)
        .def_readonly("u", &RadialTrajectory::u)
        .def_readonly("du", &RadialTrajectory::du)
        .def_readonly("diverged", &RadialTrajectory::diverged);
    m.def("integrate", &integrate, py::arg("params"), py::arg("r0"), py::arg("u0"), py::arg("v0"), py::arg("r1"),
          py::arg("tol") = 1e-10);
    m.def("ko_check", &ko_check);
    m.def("osserman_check", &osserman_check);
    m.def("supersolution_radius", &supersolution_radius);

    py::class_<PolarGrid>(m, "PolarGrid")
        .def(py::init([](double r_min, double r_max, int n_r, int n_theta) {
                 return PolarGrid{r_min, r_max, n_r, n_theta};
             }),
             py::arg("r_min") = 1e-4, py::arg("r_max") = 1.0, py::arg("n_r") = 256, py::arg("n_theta") = 128)
        .def_readonly("r_min", &PolarGrid::r_min)
        .def_readonly("r_max", &PolarGrid::r_max)
        .def_readonly("n_r", &PolarGrid::n_r)
        .def_readonly("n_theta", &PolarGrid::n_theta);
    m.def(
        "fundamental_solution",
        [](const PolarGrid& g, const Params& p, double k) {
            const auto fs = fundamental_solution(g, p, k);
            return py::make_tuple(field_array(fs.field), as_json(fs.report));
        },
        py::arg("grid"), py::arg("params"), py::arg("k"));
    m.def("solve_absorption", [](const PolarGrid& g, double p, double k, double tol) {
        return field_array(solve_absorption(g, p, k, tol).first);
    });
}
