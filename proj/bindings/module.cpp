// python bindings for the nonlocal-diffusion toolkit: group arithmetic,
// kernel construction, and the experiment driver.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "heisen/experiments.hpp"
#include "heisen/group.hpp"
#include "heisen/kernel.hpp"
#include "heisen/transform.hpp"

namespace py = pybind11;
using namespace heisen;

namespace {

GroupPoint make_point(const std::vector<double>& x, const std::vector<double>& y, double s) {
    if (x.size() != y.size()) throw std::invalid_argument("x and y must have equal length");
    GroupPoint p;
    p.x = x;
    p.y = y;
    p.s = s;
    return p;
}

py::dict result_to_dict(const ExperimentResult& res) {
    py::dict out;
    out["name"] = res.name;
    out["passed"] = res.passed();
    py::dict metrics;
    for (const auto& [k, v] : res.metrics) metrics[py::str(k)] = std::stod(v);
    out["metrics"] = metrics;
    py::list checks;
    for (const auto& c : res.checks) {
        py::dict d;
        d["name"] = c.name;
        d["pass"] = c.pass;
        d["detail"] = c.detail;
        checks.append(d);
    }
    out["checks"] = checks;
    out["columns"] = res.table.columns;
    py::list rows;
    for (const auto& r : res.table.rows) {
        py::list row;
        for (const auto& cell : r) row.append(cell);
        rows.append(row);
    }
    out["rows"] = rows;
    py::dict echo;
    for (const auto& [k, v] : res.echo) echo[py::str(k)] = v;
    out["echo"] = echo;
    return out;
}

Config dict_to_config(const py::dict& d) {
    Config cfg;
    for (auto item : d)
        cfg[py::str(item.first).cast<std::string>()] = py::str(item.second).cast<std::string>();
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_heisen, m) {
    m.doc() = "nonlocal diffusion on the Heisenberg group";

    py::class_<GroupPoint>(m, "GroupPoint")
        .def(py::init(&make_point), py::arg("x"), py::arg("y"), py::arg("s"))
        .def_readwrite("x", &GroupPoint::x)
        .def_readwrite("y", &GroupPoint::y)
        .def_readwrite("s", &GroupPoint::s)
        .def("z_norm_sq", &GroupPoint::z_norm_sq)
        .def("__repr__", [](const GroupPoint& p) {
            std::string r = "GroupPoint(x=[";
            for (double v : p.x) r += std::to_string(v) + ",";
            r += "], y=[";
            for (double v : p.y) r += std::to_string(v) + ",";
            r += "], s=" + std::to_string(p.s) + ")";
            return r;
        });

    m.def("group_mul", &group_mul, py::arg("p"), py::arg("q"),
          "Heisenberg product (z,s)(z~,s~) = (z+z~, s+s~+Im<z,z~>/2)");
    m.def("group_inverse", &group_inverse, py::arg("p"));
    m.def("dilate", [](const GroupPoint& p, double r) { return dilate(r, p); },
          py::arg("p"), py::arg("r"), "parabolic dilation (r^{1/2} z, r s)");

    py::class_<KernelSpec>(m, "KernelSpec")
        .def_readonly("n", &KernelSpec::n)
        .def_readonly("Rz", &KernelSpec::Rz)
        .def_readonly("Rs", &KernelSpec::Rs)
        .def_readonly("amplitude", &KernelSpec::amplitude)
        .def_readonly("mass", &KernelSpec::mass)
        .def_readonly("C1", &KernelSpec::C1)
        .def_readonly("eps", &KernelSpec::eps)
        .def("evaluate",
             [](const KernelSpec& J, double z_norm, double s) { return J.evaluate(z_norm, s); },
             py::arg("z_norm"), py::arg("s"));

    m.def("build_kernel",
          [](int n, double Rz) { return build_kernel(n, KernelShape::ball_bump, Rz); },
          py::arg("n") = 1, py::arg("Rz") = 1.0,
          "compactly supported bump kernel with unit mass and matched second moments");
    m.def("rescaled_kernel", &rescaled_kernel, py::arg("J"), py::arg("eps"));

    m.def("experiment_names", [] { return experiment_names(); });
    m.def("default_config", [](const std::string& name) {
        py::dict d;
        for (const auto& [k, v] : default_config(name)) d[py::str(k)] = v;
        return d;
    });
    m.def("run_experiment",
          [](const std::string& name, const py::dict& overrides) {
              return result_to_dict(run_experiment(name, dict_to_config(overrides)));
          },
          py::arg("name"), py::arg("overrides") = py::dict());

    m.def("roundtrip_error", [](double lambda_max, int n_lambda, int k_max,
                                double energy_cutoff) {
        const RadialProfile f = RadialProfile::sample(
            1, 8.0, 12.0, 96, 129,
            [](double r, double s) { return std::exp(-r * r - s * s); });
        const SpectralGrid grid =
            SpectralGrid::uniform(1, lambda_max, n_lambda, k_max, energy_cutoff);
        const RadialProfile g = inverse(forward(f, grid), f);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < f.values.size(); ++i) {
            num = std::max(num, std::abs(f.values[i] - g.values[i]));
            den = std::max(den, std::abs(f.values[i]));
        }
        return num / den;
    },
          py::arg("lambda_max") = 12.0, py::arg("n_lambda") = 384, py::arg("k_max") = 1600,
          py::arg("energy_cutoff") = 120.0,
          "sup-norm relative error of inverse(forward(gaussian)) on the sample grid");
}
