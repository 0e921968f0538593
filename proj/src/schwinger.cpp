#include "fermirep/schwinger.hpp"

#include <algorithm>
#include <cmath>

#include "fermirep/errors.hpp"

namespace fermirep {

namespace {

constexpr Complex kI(0.0, 1.0);

void check_selective_domain(int n, int m) {
  if (n < 2) {
    throw ArgumentError("selective function needs n >= 2, got " + std::to_string(n));
  }
  if (m < 1 || m > n - 1) {
    throw ArgumentError("selective function needs 1 <= m <= n - 1, got m = " + std::to_string(m) +
                        " for n = " + std::to_string(n));
  }
}

void check_dimension(const GeneratorSet& gens, std::size_t expected) {
  if (static_cast<std::size_t>(gens.dim()) != expected) {
    throw ArgumentError("generators are " + std::to_string(gens.dim()) + "x" +
                        std::to_string(gens.dim()) + ", expected " + std::to_string(expected) +
                        "x" + std::to_string(expected));
  }
}

std::vector<std::string> labels_of(const GeneratorSet& gens) {
  return {gens.labels().begin(), gens.labels().end()};
}

// sum_ab g(a, b) * ops[a * k + b], accumulated entrywise.
FockOperator combine(const DenseMatrix& g, const std::vector<FockOperator>& ops, int modes,
                     std::vector<MatrixEntry>& scratch) {
  const auto k = g.rows();
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      const Complex coeff = g(a, b);
      if (coeff == Complex(0.0)) {
        continue;
      }
      for (auto e : ops[static_cast<std::size_t>(a * k + b)].entries()) {
        e.value *= coeff;
        scratch.push_back(e);
      }
    }
  }
  auto op = FockOperator::from_entries(modes, scratch);
  scratch.clear();
  return op;
}

}  // namespace

// ---------------------------------------------------------------------------
// Selective polynomials

SelectivePolynomial::SelectivePolynomial(int n, int m, std::vector<Rational> coefficients)
    : n_(n), m_(m), coefficients_(std::move(coefficients)) {
  check_selective_domain(n, m);
  while (coefficients_.size() > 1 && coefficients_.back() == 0) {
    coefficients_.pop_back();
  }
  if (coefficients_.empty() || static_cast<int>(coefficients_.size()) > n - 1) {
    throw ValidationError("selective polynomial for n = " + std::to_string(n) +
                          " must have degree at most " + std::to_string(n - 2));
  }
  for (int k = 1; k <= n - 1; ++k) {
    const Rational expected = (k == m) ? 1 : 0;
    if ((*this)(Rational(k)) != expected) {
      throw ValidationError("polynomial is not selective for m = " + std::to_string(m) +
                            " at x = " + std::to_string(k));
    }
  }
}

Rational SelectivePolynomial::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

double SelectivePolynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
    acc = acc * x + it->convert_to<double>();
  }
  return acc;
}

std::string SelectivePolynomial::to_string() const {
  std::string out;
  for (int power = degree(); power >= 0; --power) {
    const Rational& c = coefficients_[static_cast<std::size_t>(power)];
    if (c == 0) {
      continue;
    }
    const bool negative = c < 0;
    if (out.empty()) {
      out += negative ? "-" : "";
    } else {
      out += negative ? " - " : " + ";
    }
    const Rational magnitude = negative ? Rational(-c) : c;
    const bool integral = denominator(magnitude) == 1;
    if (power == 0 || magnitude != 1) {
      if (integral) {
        out += numerator(magnitude).str();
      } else if (power == 0) {
        out += magnitude.str();
      } else {
        out += "(" + magnitude.str() + ")";
      }
    }
    if (power == 1) {
      out += "x";
    } else if (power > 1) {
      out += "x^" + std::to_string(power);
    }
  }
  return out.empty() ? "0" : out;
}

SelectivePolynomial selective_function(int n, int m) {
  check_selective_domain(n, m);
  std::vector<Rational> coeffs{Rational(1)};
  for (int i = 1; i <= n - 1; ++i) {
    if (i == m) {
      continue;
    }
    // multiply by (x - i) / (m - i)
    const Rational scale = Rational(1) / Rational(m - i);
    std::vector<Rational> next(coeffs.size() + 1, Rational(0));
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      next[k + 1] += coeffs[k] * scale;
      next[k] -= coeffs[k] * scale * i;
    }
    coeffs = std::move(next);
  }
  return SelectivePolynomial(n, m, std::move(coeffs));
}

FockOperator eval_at_number_operator(const SelectivePolynomial& p, const LadderSet& ladders) {
  if (p.n() != ladders.modes()) {
    throw ArgumentError("selective polynomial is for n = " + std::to_string(p.n()) +
                        ", operator space has " + std::to_string(ladders.modes()) + " modes");
  }
  std::vector<Complex> values;
  values.reserve(ladders.basis().size());
  for (const auto& s : ladders.basis().states()) {
    values.emplace_back(p(Rational(s.particle_count())).convert_to<double>(), 0.0);
  }
  return FockOperator::diagonal(ladders.modes(), values);
}

FockOperator eval_at_number_operator(const SelectivePolynomial& p, int n) {
  return eval_at_number_operator(p, LadderSet(n));
}

// ---------------------------------------------------------------------------
// Standard and non-standard representations

FockOperator bilinear(const DenseMatrix& g, const LadderSet& ladders) {
  const int n = ladders.modes();
  if (g.rows() != n || g.cols() != n) {
    throw ArgumentError("bilinear coefficient matrix must be " + std::to_string(n) + "x" +
                        std::to_string(n));
  }
  FockOperator out(n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const Complex coeff = g(a, b);
      if (coeff != Complex(0.0)) {
        out += coeff * (ladders.creator(a + 1) * ladders.annihilator(b + 1));
      }
    }
  }
  return out;
}

RepresentationResult standard_rep(const GeneratorSet& gens, const LadderSet& ladders) {
  check_dimension(gens, static_cast<std::size_t>(ladders.modes()));
  RepresentationResult rep;
  rep.meta = {"un-standard", ladders.modes(), std::nullopt, labels_of(gens)};
  rep.ops.reserve(gens.size());
  for (const auto& g : gens.matrices()) {
    rep.ops.push_back(bilinear(g, ladders));
  }
  return rep;
}

RepresentationResult standard_rep(const GeneratorSet& gens, int n) {
  return standard_rep(gens, LadderSet(n));
}

RepresentationResult nssfr_u3_explicit(const LadderSet& ladders) {
  if (ladders.modes() != 3) {
    throw ArgumentError("explicit three-mode construction needs exactly 3 modes");
  }
  const int n = 3;
  auto hop = [&](int i, int j) { return ladders.creator(i) * ladders.annihilator(j); };
  const FockOperator one = FockOperator::identity(n);
  const FockOperator n1 = ladders.number(1);
  const FockOperator n2 = ladders.number(2);
  const FockOperator n3 = ladders.number(3);

  const FockOperator sym12 = hop(1, 2) + hop(2, 1);
  const FockOperator sym13 = hop(1, 3) + hop(3, 1);
  const FockOperator sym23 = hop(2, 3) + hop(3, 2);
  const FockOperator asym12 = -kI * hop(1, 2) + kI * hop(2, 1);
  const FockOperator asym13 = -kI * hop(1, 3) + kI * hop(3, 1);
  const FockOperator asym23 = -kI * hop(2, 3) + kI * hop(3, 2);

  RepresentationResult rep;
  rep.ops.reserve(8);
  rep.ops.push_back(sym12 * (one - n3) + sym23 * n1);
  rep.ops.push_back(asym12 * (one - n3) + asym23 * n1);
  rep.ops.push_back(n1 - n2 - Complex(2.0) * (n1 * n3) + n1 * n2 + n2 * n3);
  rep.ops.push_back(sym13 * (one - Complex(2.0) * n2));
  rep.ops.push_back(asym13 * (one - Complex(2.0) * n2));
  rep.ops.push_back(sym23 * (one - n1) + sym12 * n3);
  rep.ops.push_back(asym23 * (one - n1) + asym12 * n3);
  rep.ops.push_back(Complex(1.0 / std::sqrt(3.0)) *
                    (n1 + n2 - Complex(2.0) * n3 + Complex(2.0) * (n1 * n3) - n2 * n3 - n1 * n2));

  std::vector<std::string> labels;
  for (int i = 1; i <= 8; ++i) {
    labels.push_back("lambda_" + std::to_string(i));
  }
  rep.meta = {"nssfr-u3-explicit", n, std::nullopt, std::move(labels)};
  return rep;
}

RepresentationResult nssfr_u3_explicit() { return nssfr_u3_explicit(LadderSet(3)); }

RepresentationResult nssfr_un(const GeneratorSet& gens, const LadderSet& ladders) {
  const int n = ladders.modes();
  if (n < 3) {
    throw ArgumentError("non-standard construction needs n >= 3, got " + std::to_string(n));
  }
  check_dimension(gens, static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const Complex tr = gens[i].trace();
    if (std::abs(tr) >= kDefaultTolerance) {
      throw ValidationError("generator " + gens.label(i) +
                            " has nonzero trace; the fully occupied sector would not vanish");
    }
  }
  const GeneratorSet conj = conjugate_rep(gens, n);
  const FockOperator low = eval_at_number_operator(selective_function(n, 1), ladders);
  const FockOperator high = eval_at_number_operator(selective_function(n, n - 1), ladders);

  RepresentationResult rep;
  rep.meta = {"un-nonstandard", n, std::nullopt, labels_of(gens)};
  rep.ops.reserve(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i) {
    rep.ops.push_back(bilinear(gens[i], ladders) * low + bilinear(conj[i], ladders) * high);
  }
  return rep;
}

RepresentationResult nssfr_un(const GeneratorSet& gens, int n) {
  if (n < 3) {
    throw ArgumentError("non-standard construction needs n >= 3, got " + std::to_string(n));
  }
  return nssfr_un(gens, LadderSet(n));
}

// ---------------------------------------------------------------------------
// Sector representations

SectorOperatorSet sector_operators(const LadderSet& ladders, int m) {
  const int n = ladders.modes();
  if (m < 0 || m > n) {
    throw ArgumentError("particle number " + std::to_string(m) + " outside [0, " +
                        std::to_string(n) + "]");
  }
  SectorOperatorSet out;
  out.n = n;
  out.m = m;
  for (const auto& s : ladders.basis().states()) {
    if (s.particle_count() == m) {
      out.zetas.push_back(s);
    }
  }
  std::sort(out.zetas.begin(), out.zetas.end(),
            [](const OccupationState& a, const OccupationState& b) {
              return a.binary_value() > b.binary_value();
            });
  out.ops.reserve(out.zetas.size());
  for (const auto& zeta : out.zetas) {
    FockOperator op = FockOperator::identity(n);
    for (int mode = n; mode >= 1; --mode) {
      if (zeta.occupied(mode)) {
        op = op * ladders.annihilator(mode);
      }
    }
    out.ops.push_back(std::move(op));
  }
  return out;
}

SectorOperatorSet sector_operators(int n, int m) { return sector_operators(LadderSet(n), m); }

std::vector<FockOperator> element_operators(const LadderSet& ladders, int m) {
  const int n = ladders.modes();
  if (m < 1 || m > n - 1) {
    throw ArgumentError("element operators need 1 <= m <= n - 1, got m = " + std::to_string(m) +
                        " for n = " + std::to_string(n));
  }
  const auto sector = sector_operators(ladders, m);
  const FockOperator select = eval_at_number_operator(selective_function(n, m), ladders);
  std::vector<FockOperator> raised;
  raised.reserve(sector.ops.size());
  for (const auto& o : sector.ops) {
    raised.push_back(o.adjoint());
  }
  std::vector<FockOperator> q;
  q.reserve(sector.ops.size() * sector.ops.size());
  for (const auto& oi : raised) {
    for (const auto& oj : sector.ops) {
      q.push_back(oi * oj * select);
    }
  }
  return q;
}

std::vector<FockOperator> element_operators(int n, int m) {
  return element_operators(LadderSet(n), m);
}

RepresentationResult rep_ucnm(const GeneratorSet& gens, const LadderSet& ladders, int m) {
  const int n = ladders.modes();
  if (m < 1 || m > n - 1) {
    throw ArgumentError("sector representation needs 1 <= m <= n - 1, got m = " +
                        std::to_string(m) + " for n = " + std::to_string(n));
  }
  check_dimension(gens, binomial(n, m));
  const auto q = element_operators(ladders, m);
  RepresentationResult rep;
  rep.meta = {"ucnm", n, m, labels_of(gens)};
  rep.ops.reserve(gens.size());
  std::vector<MatrixEntry> scratch;
  for (const auto& g : gens.matrices()) {
    rep.ops.push_back(combine(g, q, n, scratch));
  }
  return rep;
}

RepresentationResult rep_ucnm(const GeneratorSet& gens, int n, int m) {
  return rep_ucnm(gens, LadderSet(n), m);
}

RepresentationResult mixed_rep(const GeneratorSet& gens, const GeneratorSet& gens2,
                               const LadderSet& ladders, int m, bool xi_minus, bool xi_plus,
                               double tol) {
  const int n = ladders.modes();
  if (m < 1 || m > n - 1) {
    throw ArgumentError("mixed representation needs 1 <= m <= n - 1, got m = " +
                        std::to_string(m) + " for n = " + std::to_string(n));
  }
  const int conjugate_m = n - m;
  if (conjugate_m == m) {
    throw DegeneracyError("sector m = " + std::to_string(m) + " is its own conjugate for n = " +
                          std::to_string(n));
  }
  if (!xi_minus && !xi_plus) {
    throw ArgumentError("at least one of xi_minus, xi_plus must be 1");
  }
  const std::size_t k = binomial(n, m);
  check_dimension(gens, k);
  check_dimension(gens2, k);
  if (gens.size() != gens2.size()) {
    throw ArgumentError("generator sets have " + std::to_string(gens.size()) + " and " +
                        std::to_string(gens2.size()) + " members");
  }
  const bool identical = std::equal(gens.matrices().begin(), gens.matrices().end(),
                                    gens2.matrices().begin());
  if (!identical) {
    const double diff =
        max_abs_diff(structure_constants(gens, tol), structure_constants(gens2, tol));
    if (!(diff < tol)) {
      throw ValidationError("generator sets have different structure constants (max diff " +
                            std::to_string(diff) + ")");
    }
  }

  std::vector<FockOperator> q_low;
  std::vector<FockOperator> q_high;
  if (xi_minus) {
    q_low = element_operators(ladders, m);
  }
  if (xi_plus) {
    q_high = element_operators(ladders, conjugate_m);
  }
  RepresentationResult rep;
  rep.meta = {"mixed", n, m, labels_of(gens)};
  rep.ops.reserve(gens.size());
  std::vector<MatrixEntry> scratch;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    FockOperator op(n);
    if (xi_minus) {
      op += combine(gens[i], q_low, n, scratch);
    }
    if (xi_plus) {
      op += combine(gens2[i], q_high, n, scratch);
    }
    rep.ops.push_back(std::move(op));
  }
  return rep;
}

RepresentationResult mixed_rep(const GeneratorSet& gens, const GeneratorSet& gens2, int n, int m,
                               bool xi_minus, bool xi_plus, double tol) {
  return mixed_rep(gens, gens2, LadderSet(n), m, xi_minus, xi_plus, tol);
}

}  // namespace fermirep
