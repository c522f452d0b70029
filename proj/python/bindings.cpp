#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wentzell/decomposition.hpp"
#include "wentzell/disk.hpp"
#include "wentzell/interval.hpp"
#include "wentzell/perturbation.hpp"
#include "wentzell/probes.hpp"
#include "wentzell/runner.hpp"

namespace py = pybind11;
using namespace wentzell;

namespace {

py::array_t<Complex> matrix_to_numpy(const Matrix& m) {
  py::array_t<Complex> out({m.rows(), m.cols()});
  auto buf = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) buf(i, j) = m(i, j);
  return out;
}

Matrix numpy_to_matrix(py::array_t<Complex, py::array::c_style | py::array::forcecast> a) {
  if (a.ndim() != 2) throw DimensionMismatch("expected a 2-d array");
  Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
  auto buf = a.unchecked<2>();
  for (py::ssize_t i = 0; i < a.shape(0); ++i)
    for (py::ssize_t j = 0; j < a.shape(1); ++j)
      m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = buf(i, j);
  return m;
}

WentzellProblem make_problem(double beta, double gamma) {
  return WentzellProblem::laplacian(beta, gamma);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dense numerical laboratory for operators with Wentzell boundary conditions";

  py::register_exception<Error>(m, "WentzellError");

  // dense kernels
  m.def(
      "solve_linear",
      [](py::array_t<Complex, py::array::c_style | py::array::forcecast> A,
         py::array_t<Complex, py::array::c_style | py::array::forcecast> b) {
        return matrix_to_numpy(solve_linear(numpy_to_matrix(A), numpy_to_matrix(b)));
      },
      py::arg("A"), py::arg("rhs"));
  m.def(
      "matrix_exponential",
      [](py::array_t<Complex, py::array::c_style | py::array::forcecast> A, double t) {
        return matrix_to_numpy(matrix_exponential(numpy_to_matrix(A), t));
      },
      py::arg("A"), py::arg("t") = 1.0);
  m.def(
      "operator_norm",
      [](py::array_t<Complex, py::array::c_style | py::array::forcecast> A,
         const std::string& norm) {
        return operator_norm(numpy_to_matrix(A), norm == "sup" ? Norm::Sup : Norm::Spectral);
      },
      py::arg("A"), py::arg("norm") = "sup");
  m.def("singular_values",
        [](py::array_t<Complex, py::array::c_style | py::array::forcecast> A) {
          return singular_values(numpy_to_matrix(A));
        });

  // interval model
  py::class_<WentzellProblem>(m, "WentzellProblem")
      .def(py::init(&make_problem), py::arg("beta"), py::arg("gamma") = 0.0,
           "Canonical n=1 Laplacian with beta * d/dn + gamma feedback")
      .def_readonly("n", &WentzellProblem::n);
  py::class_<DiscreteModel>(m, "DiscreteModel")
      .def_property_readonly("N", [](const DiscreteModel& mod) { return mod.grid.nodes; })
      .def_property_readonly("A_m", [](const DiscreteModel& mod) { return matrix_to_numpy(mod.A_m.mat); })
      .def_property_readonly("B", [](const DiscreteModel& mod) { return matrix_to_numpy(mod.B.mat); })
      .def_property_readonly("A0", [](const DiscreteModel& mod) { return matrix_to_numpy(mod.A0.mat); });
  m.def("build_model", &build_model, py::arg("problem"), py::arg("N"));
  m.def(
      "wentzell_generator",
      [](const DiscreteModel& model) { return matrix_to_numpy(wentzell_generator(model).mat); },
      py::arg("model"));

  // decomposition
  m.def(
      "dirichlet_map",
      [](const DiscreteModel& model, Complex lambda) {
        return matrix_to_numpy(dirichlet_map(model, lambda).map.mat);
      },
      py::arg("model"), py::arg("lam") = Complex(0.0, 0.0));
  m.def(
      "dtn_operator",
      [](const DiscreteModel& model, Complex lambda) {
        return matrix_to_numpy(dtn_operator(model, lambda).mat);
      },
      py::arg("model"), py::arg("lam") = Complex(0.0, 0.0));
  m.def(
      "similarity_check",
      [](const DiscreteModel& model, std::size_t samples, std::uint64_t seed) {
        const SimilarityReport rep = similarity_check(model, samples, seed);
        py::dict out;
        out["max_residual"] = rep.max_residual;
        out["exact_tier"] = rep.exact_tier;
        out["residuals"] = rep.residuals;
        return out;
      },
      py::arg("model"), py::arg("samples") = 20, py::arg("seed") = 0);

  // probes
  m.def(
      "sector_angle",
      [](py::array_t<Complex, py::array::c_style | py::array::forcecast> op) {
        return sector_angle_estimate(numpy_to_matrix(op)).angle_estimate;
      },
      py::arg("op"));
  m.def(
      "theorem31_experiment",
      [](const WentzellProblem& problem, std::size_t N) {
        const Theorem31Report rep = theorem31_experiment(problem, N);
        py::dict out;
        out["pass"] = rep.pass;
        out["angle_wentzell"] = rep.angle_wentzell;
        out["angle_dirichlet"] = rep.angle_dirichlet;
        out["angle_g0"] = rep.angle_g0;
        out["angle_dtn"] = rep.angle_dtn;
        return out;
      },
      py::arg("problem"), py::arg("N") = 201);

  // disk model
  py::class_<DiskModel>(m, "DiskModel")
      .def_readonly("K", &DiskModel::max_mode)
      .def_readonly("beta", &DiskModel::beta)
      .def_readonly("gamma", &DiskModel::gamma)
      .def_readonly("q", &DiskModel::q)
      .def("dtn_B0", [](const DiskModel& d, int k) { return d.dtn_B0.at(d.index(k)); })
      .def("C", [](const DiskModel& d, int k) { return d.C.at(d.index(k)); })
      .def("N_B", [](const DiskModel& d, int k) { return d.N_B.at(d.index(k)); });
  m.def("build_disk_model", &build_disk_model, py::arg("K"), py::arg("beta"), py::arg("gamma"),
        py::arg("q"));
  m.def("disk_wq_identity_check", &disk_wq_identity_check, py::arg("model"));

  // config-driven runner
  m.def(
      "run_config",
      [](const std::string& config_json) {
        const ExperimentConfig config = parse_config(Json::parse(config_json));
        const ReportEnvelope envelope = execute(config);
        return envelope.to_json().dump(2);
      },
      py::arg("config_json"), "Execute a config document; returns the report JSON");

  m.attr("__version__") = WENTZELL_LAB_VERSION;
}
