#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kscars/algebra.hpp"
#include "kscars/analytic.hpp"
#include "kscars/basis.hpp"
#include "kscars/dynamics.hpp"
#include "kscars/error.hpp"
#include "kscars/fitting.hpp"
#include "kscars/lanczos.hpp"
#include "kscars/operators.hpp"

namespace py = pybind11;
using namespace kscars;

namespace {

FitWindow window_for(const std::string& name, int n) {
  if (name == "table") return FitWindow::table(n);
  if (name == "standard") return FitWindow::standard(n);
  fail(ErrorKind::Configuration, "window must be 'table' or 'standard'");
}

}  // namespace

PYBIND11_MODULE(_kscars, m) {
  m.doc() = "Krylov complexity of constrained spin chains";

  static PyObject* error_type = py::exception<Error>(m, "KscarsError", PyExc_RuntimeError).release().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(py::str(e.what()));
      exc.attr("kind") = py::str(std::string(to_string(e.kind())));
      PyErr_SetObject(error_type, exc.ptr());
    }
  });

  py::class_<ConstrainedBasis, std::shared_ptr<ConstrainedBasis>>(m, "Basis")
      .def_property_readonly("n_sites", &ConstrainedBasis::n_sites)
      .def_property_readonly("constraint",
                             [](const ConstrainedBasis& b) { return std::string(to_string(b.constraint())); })
      .def("__len__", &ConstrainedBasis::size)
      .def("states", [](const ConstrainedBasis& b) { return std::vector<Mask>(b.states().begin(), b.states().end()); })
      .def("index_of", &ConstrainedBasis::index_of)
      .def("to_bitstring", &ConstrainedBasis::to_bitstring);

  m.def(
      "build_basis",
      [](int n, const std::string& constraint) {
        return std::const_pointer_cast<ConstrainedBasis>(build_basis(n, parse_constraint(constraint)));
      },
      py::arg("n_sites"), py::arg("constraint") = "pxp");
  m.def("lucas_dimension", &lucas_dimension);

  py::class_<StateVector>(m, "State")
      .def_property_readonly("amplitudes", [](const StateVector& s) { return s.amplitudes; })
      .def("norm", &StateVector::norm);
  m.def(
      "product_state",
      [](const std::shared_ptr<ConstrainedBasis>& b, const std::string& pattern) { return product_state(b, pattern); },
      py::arg("basis"), py::arg("pattern"));

  py::class_<SparseOperator>(m, "Operator")
      .def_property_readonly("dimension", &SparseOperator::dimension)
      .def_property_readonly("nonzeros", &SparseOperator::nonzeros)
      .def_property_readonly("hermitian", &SparseOperator::hermitian)
      .def("to_dense", &SparseOperator::to_dense)
      .def("adjoint", &SparseOperator::adjoint)
      .def("apply", [](const SparseOperator& h, const StateVector& v) { return apply(h, v); });
  m.def(
      "build_operator",
      [](const std::shared_ptr<ConstrainedBasis>& b, const std::string& model, double lambda, double chi,
         double alpha_scale) {
        return build_operator(b, {parse_model(model), lambda, chi, alpha_scale});
      },
      py::arg("basis"), py::arg("model"), py::arg("lam") = 0.0, py::arg("chi") = 0.0,
      py::arg("alpha_scale") = 1.0);
  m.def("commutator", &commutator);
  m.def("frobenius_norm", &frobenius_norm);

  py::class_<TridiagonalData>(m, "Tridiagonal")
      .def_readonly("a", &TridiagonalData::a)
      .def_readonly("b", &TridiagonalData::b)
      .def_readonly("krylov_dim", &TridiagonalData::krylov_dim)
      .def_readonly("terminated_naturally", &TridiagonalData::terminated_naturally)
      .def_readonly("tail_norm", &TridiagonalData::tail_norm)
      .def_readonly("krylov_vectors", &TridiagonalData::krylov_vectors)
      .def("b_by_index", &TridiagonalData::b_by_index)
      .def("matrix", &TridiagonalData::tridiagonal);
  m.def("run_lanczos", &run_lanczos, py::arg("h"), py::arg("v0"), py::arg("kmax") = kDefaultKmax,
        py::arg("b_tol") = kDefaultBTol, py::arg("store_vectors") = false);

  py::class_<EvolutionSeries>(m, "Evolution")
      .def_readonly("time", &EvolutionSeries::time)
      .def_readonly("psi", &EvolutionSeries::psi)
      .def_readonly("complexity", &EvolutionSeries::complexity)
      .def_readonly("entropy", &EvolutionSeries::entropy)
      .def_readonly("fidelity", &EvolutionSeries::fidelity_abs)
      .def_readonly("leakage", &EvolutionSeries::leakage)
      .def("complexity_with_leakage", [](const EvolutionSeries& s) { return complexity_with_leakage(s); })
      .def("revival_peaks", [](const EvolutionSeries& s, double threshold, double window) {
        std::vector<std::pair<double, double>> out;
        for (const auto& p : revival_peaks(s, threshold, window)) out.emplace_back(p.time, p.value);
        return out;
      }, py::arg("threshold") = 0.1, py::arg("window") = 2.0);
  m.def("uniform_grid", &uniform_grid, py::arg("tmax"), py::arg("dt"));
  m.def("evolve_tridiagonal", &evolve_tridiagonal, py::arg("tri"), py::arg("grid"));
  m.def(
      "evolve_full",
      [](const SparseOperator& h, const StateVector& v0, const std::vector<double>& grid, const TridiagonalData& tri,
         double tolerance) { return evolve_full(h, v0, grid, tri, {tolerance, 30, 60}); },
      py::arg("h"), py::arg("v0"), py::arg("grid"), py::arg("tri"), py::arg("tolerance") = 1e-10);
  m.def("time_average", &time_average);

  m.def("q_number", &q_number, py::arg("x"), py::arg("q"));
  m.def(
      "lanczos_suq2",
      [](int n, double j, double alpha, double q) { return lanczos_suq2(n, {j, alpha, 0.0, 0.0, q}); },
      py::arg("n"), py::arg("j"), py::arg("alpha"), py::arg("q"));
  m.def(
      "su2_wavefunction",
      [](int n, double t, double j, double alpha, double eta0, double delta) {
        return su2_wavefunction(n, t, {j, alpha, eta0, delta, 1.0});
      },
      py::arg("n"), py::arg("t"), py::arg("j"), py::arg("alpha"), py::arg("eta0") = 0.0, py::arg("delta") = 0.0);

  py::class_<DeformationFit>(m, "DeformationFit")
      .def_readonly("n_sites", &DeformationFit::n_sites)
      .def_readonly("q", &DeformationFit::q_hat)
      .def_readonly("alpha", &DeformationFit::alpha_hat)
      .def_readonly("residual", &DeformationFit::residual);
  m.def(
      "fit_q_alpha",
      [](const std::vector<double>& b, int n, const std::string& window) {
        return fit_q_alpha(b, n, window_for(window, n));
      },
      py::arg("b"), py::arg("n_sites"), py::arg("window") = "standard");
  m.def(
      "fit_alpha_su2",
      [](const std::vector<double>& b, int n) {
        const auto f = fit_alpha_su2(b, n);
        return std::make_pair(f.alpha_hat, f.residual);
      },
      py::arg("b"), py::arg("n_sites"));
  m.def(
      "extrapolate_q",
      [](const std::vector<std::pair<int, double>>& pts) {
        const auto r = extrapolate_q(std::span<const std::pair<int, double>>(pts));
        py::dict d;
        d["slope"] = r.slope;
        d["intercept"] = r.intercept;
        d["q_infinity"] = r.q_infinity;
        d["r_squared"] = r.r_squared;
        d["std_error"] = r.std_error;
        return d;
      },
      py::arg("size_q"));

  m.def(
      "check_su2_identities",
      [](const std::shared_ptr<ConstrainedBasis>& b, const std::string& family, double lambda) {
        std::vector<std::pair<std::string, double>> out;
        for (const auto& r : check_su2_identities(b, parse_family(family), lambda))
          out.emplace_back(r.identity_name, r.residual_frobenius);
        return out;
      },
      py::arg("basis"), py::arg("family"), py::arg("lam") = 0.0);
}
