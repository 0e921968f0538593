#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fermirep/errors.hpp"
#include "fermirep/expression.hpp"
#include "fermirep/fock.hpp"
#include "fermirep/io.hpp"
#include "fermirep/liealg.hpp"
#include "fermirep/schwinger.hpp"
#include "fermirep/verify.hpp"

namespace py = pybind11;
using namespace fermirep;

namespace {

std::vector<MatrixEntry> to_entries(const std::vector<std::tuple<int, int, Complex>>& raw) {
  std::vector<MatrixEntry> out;
  out.reserve(raw.size());
  for (const auto& [r, c, v] : raw) out.push_back({r, c, v});
  return out;
}

py::list ops_to_list(const RepresentationResult& rep) {
  py::list out;
  for (const auto& op : rep.ops) out.append(op);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fermionic operator representations of unitary groups";

  auto parse_error = py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_ValueError);
  py::register_exception<ClosureError>(m, "ClosureError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  (void)parse_error;

  m.def("max_modes", &max_modes);

  py::class_<FockOperator>(m, "FockOperator")
      .def_static("zero", &FockOperator::zero)
      .def_static("identity", &FockOperator::identity)
      .def_static("from_entries",
                  [](int modes, const std::vector<std::tuple<int, int, Complex>>& raw) {
                    const auto entries = to_entries(raw);
                    return FockOperator::from_entries(modes, entries);
                  })
      .def_property_readonly("modes", &FockOperator::modes)
      .def_property_readonly("dim", &FockOperator::dim)
      .def_property_readonly("nnz", &FockOperator::nnz)
      .def("coeff", &FockOperator::coeff)
      .def("entries",
           [](const FockOperator& op) {
             std::vector<std::tuple<int, int, Complex>> out;
             for (const auto& e : op.entries()) out.emplace_back(e.row, e.col, e.value);
             return out;
           })
      .def("to_dense", &FockOperator::to_dense)
      .def("adjoint", &FockOperator::adjoint)
      .def("max_abs", &FockOperator::max_abs)
      .def("is_zero", &FockOperator::is_zero)
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(-py::self)
      .def(py::self * py::self)
      .def(Complex() * py::self)
      .def(py::self * Complex())
      .def(py::self == py::self)
      .def("__repr__", [](const FockOperator& op) {
        return "<FockOperator modes=" + std::to_string(op.modes()) +
               " nnz=" + std::to_string(op.nnz()) + ">";
      });

  m.def("annihilation", py::overload_cast<int, int>(&annihilation), py::arg("n"), py::arg("i"));
  m.def("creation", py::overload_cast<int, int>(&creation), py::arg("n"), py::arg("i"));
  m.def("number_operator", &number_operator, py::arg("n"), py::arg("i"));
  m.def("total_number", &total_number, py::arg("n"));
  m.def("commutator", py::overload_cast<const FockOperator&, const FockOperator&>(&commutator));
  m.def("anticommutator", &anticommutator);
  m.def("max_abs_diff", py::overload_cast<const FockOperator&, const FockOperator&>(&max_abs_diff));
  m.def("sector_indices", &sector_indices, py::arg("n"), py::arg("m"));

  py::class_<GeneratorSet>(m, "GeneratorSet")
      .def(py::init<std::vector<DenseMatrix>, std::vector<std::string>>())
      .def_property_readonly("dim", &GeneratorSet::dim)
      .def("__len__", &GeneratorSet::size)
      .def("__getitem__", [](const GeneratorSet& g, std::size_t i) { return DenseMatrix(g[i]); })
      .def("label", &GeneratorSet::label)
      .def("is_hermitian", &GeneratorSet::is_hermitian, py::arg("tol") = kDefaultTolerance)
      .def("is_traceless", &GeneratorSet::is_traceless, py::arg("tol") = kDefaultTolerance);

  py::class_<StructureConstants>(m, "StructureConstants")
      .def("at", &StructureConstants::at)
      .def("complete", &StructureConstants::complete)
      .def("__len__", &StructureConstants::size);

  m.def("gell_mann", &gell_mann);
  m.def("generalized_gell_mann", &generalized_gell_mann, py::arg("d"));
  m.def("spin1_matrices", &spin1_matrices);
  m.def("gellmann_from_spin1", &gellmann_from_spin1);
  m.def("gellmann_from_spin1_corrected", &gellmann_from_spin1_corrected);
  m.def("conjugation_matrix", &conjugation_matrix, py::arg("n"));
  m.def("conjugate_rep", &conjugate_rep, py::arg("gens"), py::arg("n"));
  m.def("structure_constants",
        py::overload_cast<const GeneratorSet&, double>(&structure_constants), py::arg("gens"),
        py::arg("tol") = kDefaultTolerance);

  py::class_<SelectivePolynomial>(m, "SelectivePolynomial")
      .def_property_readonly("n", &SelectivePolynomial::n)
      .def_property_readonly("m", &SelectivePolynomial::m)
      .def_property_readonly("degree", &SelectivePolynomial::degree)
      .def("__call__", [](const SelectivePolynomial& p, double x) { return p(x); })
      .def("__str__", &SelectivePolynomial::to_string);
  m.def("selective_function", &selective_function, py::arg("n"), py::arg("m"));

  m.def("standard_rep",
        [](const GeneratorSet& g, int n) { return ops_to_list(standard_rep(g, n)); },
        py::arg("gens"), py::arg("n"));
  m.def("nssfr_u3_explicit", [] { return ops_to_list(nssfr_u3_explicit()); });
  m.def("nssfr_un", [](const GeneratorSet& g, int n) { return ops_to_list(nssfr_un(g, n)); },
        py::arg("gens"), py::arg("n"));
  m.def("rep_ucnm",
        [](const GeneratorSet& g, int n, int k) { return ops_to_list(rep_ucnm(g, n, k)); },
        py::arg("gens"), py::arg("n"), py::arg("m"));
  m.def("mixed_rep",
        [](const GeneratorSet& g, const GeneratorSet& g2, int n, int k, bool minus, bool plus,
           double tol) { return ops_to_list(mixed_rep(g, g2, n, k, minus, plus, tol)); },
        py::arg("gens"), py::arg("gens2"), py::arg("n"), py::arg("m"), py::arg("xi_minus"),
        py::arg("xi_plus"), py::arg("tol") = kDefaultTolerance);
  m.def("element_operators", py::overload_cast<int, int>(&element_operators), py::arg("n"),
        py::arg("m"));

  m.def("eval_expression",
        [](const std::string& text, int n) { return OperatorExpression::parse(text).evaluate(n); },
        py::arg("text"), py::arg("n"));
  m.def("format_expression",
        [](const std::string& text) { return OperatorExpression::parse(text).to_string(); });

  m.def(
      "run_suite_json",
      [](int n_max, double tol, unsigned threads) {
        SuiteOptions options;
        options.threads = threads;
        VerificationReport report;
        {
          py::gil_scoped_release release;
          report = run_suite(n_max, tol, options);
        }
        return report_to_json(report).dump();
      },
      py::arg("n_max"), py::arg("tol") = kDefaultTolerance, py::arg("threads") = 0);
}
