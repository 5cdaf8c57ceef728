#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ruledgeo/errors.hpp"
#include "ruledgeo/invariants.hpp"
#include "ruledgeo/job.hpp"
#include "ruledgeo/mesh_io.hpp"

namespace py = pybind11;
using namespace ruledgeo;

namespace {

py::dict frenet_dict(const FrenetData& f) {
  py::dict d;
  d["position"] = f.position;
  d["T"] = f.T;
  d["N"] = f.N;
  d["B"] = f.B;
  d["kappa"] = f.kappa;
  d["tau"] = f.tau;
  d["speed"] = f.speed;
  return d;
}

py::dict summary_dict(const TheoremSummary& s) {
  py::dict d;
  d["samples"] = s.samples;
  d["tangent_ruling_samples"] = s.tangent_ruling_samples;
  d["max_abs_k_g"] = s.max_abs_k_g;
  d["max_abs_k_n"] = s.max_abs_k_n;
  d["max_abs_T1"] = s.max_abs_T1;
  d["max_abs_T2"] = s.max_abs_T2;
  d["max_abs_T3"] = s.max_abs_T3;
  d["max_abs_rho"] = s.max_abs_rho;
  d["geodesic"] = s.geodesic;
  d["asymptotic"] = s.asymptotic;
  d["line_of_curvature_paper"] = s.line_of_curvature_paper;
  d["line_of_curvature_standard"] = s.line_of_curvature_standard;
  d["tangent_ruling"] = s.corollary5;
  return d;
}

py::dict mesh_dict(const Mesh& m) {
  py::array_t<double> v({static_cast<py::ssize_t>(m.vertices.size()), py::ssize_t{3}});
  py::array_t<int> f({static_cast<py::ssize_t>(m.faces.size()), py::ssize_t{3}});
  auto vw = v.mutable_unchecked<2>();
  auto fw = f.mutable_unchecked<2>();
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    for (int k = 0; k < 3; ++k) vw(i, k) = m.vertices[i][k];
  }
  for (std::size_t i = 0; i < m.faces.size(); ++i) {
    for (int k = 0; k < 3; ++k) fw(i, k) = m.faces[i][k];
  }
  py::dict d;
  d["vertices"] = v;
  d["faces"] = f;
  d["flat_shaded"] = m.flat_shaded;
  d["obj"] = write_obj(m);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Ruled surfaces along a space curve in an adapted frame";

  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<DomainError>(m, "DomainError");
  py::register_exception<GeometryError>(m, "GeometryError");
  py::register_exception<ConfigError>(m, "ConfigError");

  py::class_<Expr>(m, "Expr")
      .def("__str__", &Expr::to_string)
      .def("__eq__", [](const Expr& a, const Expr& b) { return a == b; })
      .def("is_constant", &Expr::is_constant)
      .def("__call__", [](const Expr& e, double s) { return eval(e, s); })
      .def("jet", [](const Expr& e, double s) {
        const Jet3 j = eval_jet(e, s);
        return py::make_tuple(j.value, j.d1, j.d2, j.d3);
      });
  m.def("parse", [](const std::string& text) { return parse(text); });

  m.def(
      "frenet",
      [](const std::string& x, const std::string& y, const std::string& z, double t) {
        return frenet_dict(frenet(CurveDef{parse(x), parse(y), parse(z), t, t}, t));
      },
      py::arg("x"), py::arg("y"), py::arg("z"), py::arg("t"));

  py::class_<JobConfig>(m, "Config")
      .def_readonly("n_s", &JobConfig::n_s)
      .def_readonly("n_v", &JobConfig::n_v);
  m.def("load_config", &load_config);
  m.def("parse_config", [](const std::string& text) { return parse_config(text); });

  m.def("theorems", [](const JobConfig& c) {
    return summary_dict(theorem_report(RuledSurface(c.surface, c.n_s), c.tolerances.tol_inv).summary);
  });
  m.def("developable", [](const JobConfig& c) {
    const ClassificationReport r = classify(c.surface, c.n_s, c.n_v, c.tolerances.tol_dev);
    return py::make_tuple(std::string(to_string(r.developable)), r.max_abs_det);
  });
  m.def("tessellate", [](const JobConfig& c) { return mesh_dict(tessellate(c.surface, c.n_s, c.n_v)); });

  m.def("run_cli", [](std::vector<std::string> args) {
    args.insert(args.begin(), "ruledgeo");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
