#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "fermirep/errors.hpp"
#include "fermirep/expression.hpp"
#include "fermirep/io.hpp"
#include "fermirep/liealg.hpp"
#include "fermirep/schwinger.hpp"
#include "fermirep/verify.hpp"

namespace fermirep::cli {

namespace {

namespace fs = std::filesystem;

/// Reported as exit code 2 after printing the message.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", value);
  std::string text = buf;
  return text == "-0" ? "0" : text;
}

std::string format_complex(Complex z) {
  if (z.imag() == 0.0) return format_real(z.real());
  if (z.real() == 0.0) return format_real(z.imag()) + "i";
  return format_real(z.real()) + (z.imag() < 0 ? "-" : "+") + format_real(std::abs(z.imag())) + "i";
}

/// Defining representation of su(d): the Gell-Mann matrices for d = 3.
GeneratorSet defining_generators(int d) {
  return d == 3 ? gell_mann() : generalized_gell_mann(d);
}

void require_positive_modes(int n) {
  if (n < 1) {
    throw UsageError("--n must be at least 1, got " + std::to_string(n));
  }
  check_mode_count(n);
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream file(path);
  if (!file) {
    throw IoError("cannot write " + path.string());
  }
  file << text;
  if (!file) {
    throw IoError("write to " + path.string() + " failed");
  }
}

// ---------------------------------------------------------------------------
// build

struct BuildArgs {
  std::string group;
  int n = 0;
  std::optional<int> m;
  std::string out;
  int xi_minus = 1;
  int xi_plus = 1;
  bool conjugate = false;
};

BuildArtifacts make_build(const BuildArgs& a) {
  require_positive_modes(a.n);
  if (a.group == "un-standard") {
    auto gens = defining_generators(a.n);
    return {standard_rep(gens, a.n), gens, std::nullopt, false, false};
  }
  if (a.group == "un-nonstandard") {
    auto gens = defining_generators(a.n);
    return {nssfr_un(gens, a.n), gens, std::nullopt, false, false};
  }
  if (!a.m) {
    throw UsageError("--m is required for " + a.group);
  }
  const int m = *a.m;
  if (m < 1 || m > a.n - 1) {
    throw UsageError("--m must lie in [1, " + std::to_string(a.n - 1) + "], got " +
                     std::to_string(m));
  }
  auto gens = defining_generators(static_cast<int>(binomial(a.n, m)));
  if (a.group == "ucnm") {
    return {rep_ucnm(gens, a.n, m), gens, std::nullopt, false, false};
  }
  if ((a.xi_minus != 0 && a.xi_minus != 1) || (a.xi_plus != 0 && a.xi_plus != 1)) {
    throw UsageError("--xi-minus and --xi-plus take 0 or 1");
  }
  const int d = static_cast<int>(gens[0].rows());
  auto gens2 = a.conjugate ? conjugate_rep(gens, d) : gens;
  auto rep = mixed_rep(gens, gens2, a.n, m, a.xi_minus == 1, a.xi_plus == 1);
  return {std::move(rep), gens, std::move(gens2), a.xi_minus == 1, a.xi_plus == 1};
}

int cmd_build(const BuildArgs& a, std::ostream& out) {
  const auto build = make_build(a);
  write_build(a.out, build);
  out << "wrote " << build.rep.size() << " generators (" << build.rep.meta.variant << ", dim "
      << (1 << build.rep.meta.modes) << ") to " << a.out << '\n';
  return kPass;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  int n = 0;
  double tol = kDefaultTolerance;
  std::string report;
  std::string format = "text";
  std::string from;
  unsigned threads = 0;
  std::size_t budget = SuiteOptions{}.max_identities;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  if (!(a.tol > 0.0)) {
    throw UsageError("--tol must be positive");
  }
  VerificationReport report;
  if (!a.from.empty()) {
    const auto build = read_build(a.from);
    report = verify_representation(build.rep, build.gens, a.tol);
  } else {
    require_positive_modes(a.n);
    SuiteOptions options;
    options.threads = a.threads;
    options.max_identities = a.budget;
    report = run_suite(a.n, a.tol, options);
  }

  const std::string text = report_to_text(report);
  const std::string json = report_to_json(report).dump(1) + "\n";
  if (a.report.empty()) {
    out << (a.format == "json" ? json : text);
  } else {
    write_text_file(a.report, a.format == "json" ? json : text);
    out << text.substr(text.rfind('\n', text.size() - 2) + 1);
  }
  return report.overall() ? kPass : kVerificationFailed;
}

// ---------------------------------------------------------------------------
// table

struct TableArgs {
  std::string what;
  int n = 0;
  std::optional<int> m;
  std::string format = "text";
};

std::string rational_string(const Rational& r) {
  std::ostringstream s;
  s << r;
  return s.str();
}

int table_selective(const TableArgs& a, std::ostream& out) {
  if (a.n < 2) {
    throw UsageError("selective functions need --n >= 2");
  }
  std::vector<int> ms;
  if (a.m) {
    ms.push_back(*a.m);
  } else {
    for (int m = 1; m < a.n; ++m) ms.push_back(m);
  }
  Json doc = Json::array();
  for (int m : ms) {
    const auto f = selective_function(a.n, m);
    if (a.format == "json") {
      Json coeffs = Json::array();
      for (const auto& c : f.coefficients()) coeffs.push_back(rational_string(c));
      doc.push_back({{"n", a.n}, {"m", m}, {"coefficients", coeffs}, {"text", f.to_string()}});
    } else if (a.m) {
      out << f.to_string() << '\n';
    } else {
      out << "f_" << a.n << "^(" << m << ")(x) = " << f.to_string() << '\n';
    }
  }
  if (a.format == "json") out << doc.dump(1) << '\n';
  return kPass;
}

int table_structure(const TableArgs& a, std::ostream& out) {
  const int d = a.m ? static_cast<int>(binomial(a.n, *a.m)) : a.n;
  if (a.m && (*a.m < 1 || *a.m > a.n - 1)) {
    throw UsageError("--m must lie in [1, n - 1]");
  }
  if (d < 2) {
    throw UsageError("structure constants need an algebra su(d) with d >= 2");
  }
  const auto gens = defining_generators(d);
  const auto c = structure_constants(gens);
  const std::size_t k = gens.size();
  const bool compact = k <= 9;
  Json doc = Json::array();
  // [G_i, G_j] = 2i f_ijk G_k; only the i < j < k triples are listed.
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      for (const auto& term : c.terms(i, j)) {
        if (term.index <= j) continue;
        const Complex f = term.value / Complex(0.0, 2.0);
        if (std::abs(f) < 1e-12) continue;
        if (a.format == "json") {
          doc.push_back({{"i", i + 1}, {"j", j + 1}, {"k", term.index + 1},
                         {"re", f.real()}, {"im", f.imag()}});
          continue;
        }
        out << "f_";
        if (compact) {
          out << i + 1 << j + 1 << term.index + 1;
        } else {
          out << i + 1 << ',' << j + 1 << ',' << term.index + 1;
        }
        out << " = " << format_complex(f) << '\n';
      }
    }
  }
  if (a.format == "json") out << doc.dump(1) << '\n';
  return kPass;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string expr;
  int n = 0;
  std::string out;
  std::string compare;
  double tol = kDefaultTolerance;
  std::string format = "text";
};

void print_operator(const FockOperator& op, std::ostream& out) {
  out << "dim " << op.dim() << ", " << op.nnz() << " nonzero\n";
  if (op.dim() <= 16) {
    const auto dense = op.to_dense();
    std::vector<std::string> cells;
    std::size_t width = 1;
    for (Eigen::Index r = 0; r < dense.rows(); ++r) {
      for (Eigen::Index c = 0; c < dense.cols(); ++c) {
        cells.push_back(format_complex(dense(r, c)));
        width = std::max(width, cells.back().size());
      }
    }
    for (Eigen::Index r = 0; r < dense.rows(); ++r) {
      for (Eigen::Index c = 0; c < dense.cols(); ++c) {
        const auto& cell = cells[static_cast<std::size_t>(r * dense.cols() + c)];
        out << (c == 0 ? "" : " ") << std::string(width - cell.size(), ' ') << cell;
      }
      out << '\n';
    }
    return;
  }
  for (const auto& e : op.entries()) {
    out << e.row << ' ' << e.col << ' ' << format_complex(e.value) << '\n';
  }
}

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  require_positive_modes(a.n);
  std::optional<OperatorExpression> expr;
  try {
    expr = OperatorExpression::parse(a.expr);
  } catch (const ParseError& ex) {
    err << "parse error at column " << ex.column() + 1 << ": " << ex.what() << '\n'
        << "  " << a.expr << '\n'
        << "  " << std::string(ex.column(), ' ') << "^\n";
    return kUsage;
  }
  if (expr->max_mode() > a.n) {
    throw UsageError("expression uses mode " + std::to_string(expr->max_mode()) +
                     " but --n is " + std::to_string(a.n));
  }
  const FockOperator op = expr->evaluate(a.n);

  if (!a.out.empty()) {
    write_matrix_file(a.out, op, {{"expression", expr->to_string()}});
  } else if (a.compare.empty()) {
    if (a.format == "json") {
      out << matrix_to_json(op, {{"expression", expr->to_string()}}).dump(1) << '\n';
    } else {
      print_operator(op, out);
    }
  }

  if (!a.compare.empty()) {
    const auto reference = read_matrix_file(a.compare);
    if (reference.modes() != op.modes()) {
      out << "FAIL  " << a.compare << " has " << reference.modes() << " modes, expression has "
          << op.modes() << '\n';
      return kVerificationFailed;
    }
    const double diff = max_abs_diff(op, reference);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", diff);
    const bool ok = diff <= a.tol;
    out << (ok ? "PASS  " : "FAIL  ") << "max |diff| = " << buf << " against " << a.compare
        << (diff == 0.0 ? " (exact)" : "") << '\n';
    return ok ? kPass : kVerificationFailed;
  }
  return kPass;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fermionic Schwinger representations: build, verify, tabulate, evaluate", "fermirep"};
  app.require_subcommand(1);
  const auto formats = CLI::IsMember({"text", "json"});

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build", "Build a representation and write its matrices");
  build_cmd->add_option("group", build.group, "Representation")
      ->required()
      ->check(CLI::IsMember({"un-standard", "un-nonstandard", "ucnm", "mixed"}));
  build_cmd->add_option("--n", build.n, "Number of modes")->required();
  build_cmd->add_option("--m", build.m, "Particle number (ucnm, mixed)");
  build_cmd->add_option("--out", build.out, "Output directory")->required();
  build_cmd->add_option("--xi-minus", build.xi_minus, "Include the m sector (mixed)");
  build_cmd->add_option("--xi-plus", build.xi_plus, "Include the n - m sector (mixed)");
  build_cmd->add_flag("--conjugate", build.conjugate,
                      "Use the conjugate representation in the n - m sector (mixed)");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run the verification suite");
  verify_cmd->add_option("--n", verify.n, "Largest mode count");
  verify_cmd->add_option("--tol", verify.tol, "Residual tolerance");
  verify_cmd->add_option("--report", verify.report, "Write the full report here");
  verify_cmd->add_option("--format", verify.format, "Report format")->check(formats);
  verify_cmd->add_option("--from", verify.from, "Verify a directory written by build");
  verify_cmd->add_option("--threads", verify.threads, "Worker threads (0 = all cores)");
  verify_cmd->add_option("--budget", verify.budget,
                         "Identities per check before sampling (0 = no sampling)");

  TableArgs table;
  auto* table_cmd = app.add_subcommand("table", "Print selective polynomials or structure constants");
  table_cmd->add_option("what", table.what, "Table")
      ->required()
      ->check(CLI::IsMember({"selective", "structure"}));
  table_cmd->add_option("--n", table.n, "Modes (selective) or dimension (structure)")->required();
  table_cmd->add_option("--m", table.m, "Particle number");
  table_cmd->add_option("--format", table.format, "Output format")->check(formats);

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate an operator expression");
  eval_cmd->add_option("expr", eval.expr, "Expression, e.g. \"adag(1)*a(2)\"")->required();
  eval_cmd->add_option("--n", eval.n, "Number of modes")->required();
  eval_cmd->add_option("--out", eval.out, "Write the matrix file here");
  eval_cmd->add_option("--compare", eval.compare, "Compare against a matrix file");
  eval_cmd->add_option("--tol", eval.tol, "Comparison tolerance");
  eval_cmd->add_option("--format", eval.format, "Output format")->check(formats);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (build_cmd->parsed()) return cmd_build(build, out);
    if (verify_cmd->parsed()) {
      if (verify.from.empty() && verify_cmd->count("--n") == 0) {
        throw UsageError("verify needs --n or --from");
      }
      return cmd_verify(verify, out);
    }
    if (table_cmd->parsed()) {
      return table.what == "selective" ? table_selective(table, out) : table_structure(table, out);
    }
    return cmd_eval(eval, out, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    // ArgumentError, ValidationError, DegeneracyError, ParseError
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::length_error& e) {
    // CapacityError
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::runtime_error& e) {
    // ClosureError, DependenceError: the input does not form a Lie algebra
    err << "error: " << e.what() << '\n';
    return kVerificationFailed;
  }
}

}  // namespace fermirep::cli
