#pragma once

// Fermionic Schwinger-type representations on the n-mode Fock space:
//
//  * standard_rep       G -> sum_ab G^ab a+_a a_b
//  * nssfr_u3_explicit  the quartic three-mode construction, term by term
//  * nssfr_un           bilinears in G and its conjugate, weighted by
//                       selective polynomials of the total number operator
//  * rep_ucnm           matrix units Q_ij of the N = m sector
//  * mixed_rep          sector m and its conjugate sector n - m combined
//
// Every builder has an overload taking a LadderSet so that all operators of
// a construction are assembled from one set of ladder matrices.

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fermirep/fock.hpp"
#include "fermirep/liealg.hpp"

namespace fermirep {

using Rational = boost::multiprecision::cpp_rational;

/// Polynomial of degree n - 2 that is 1 at x = m and 0 at every other
/// integer of [1, n - 1]. Coefficients are exact and ordered by ascending
/// power.
class SelectivePolynomial {
 public:
  /// Throws ValidationError if the coefficients do not have the selective
  /// property for (n, m).
  SelectivePolynomial(int n, int m, std::vector<Rational> coefficients);

  int n() const noexcept { return n_; }
  int m() const noexcept { return m_; }
  int degree() const noexcept { return static_cast<int>(coefficients_.size()) - 1; }
  const std::vector<Rational>& coefficients() const noexcept { return coefficients_; }

  Rational operator()(const Rational& x) const;
  double operator()(double x) const;

  /// Descending powers, e.g. "-x^2 + 4x - 3"; fractions print as "(1/2)x".
  std::string to_string() const;

 private:
  int n_;
  int m_;
  std::vector<Rational> coefficients_;
};

SelectivePolynomial selective_function(int n, int m);

/// Diagonal operator p(N) with N the total number operator.
FockOperator eval_at_number_operator(const SelectivePolynomial& p, int n);
FockOperator eval_at_number_operator(const SelectivePolynomial& p, const LadderSet& ladders);

struct RepresentationMeta {
  std::string variant;
  int modes = 0;
  std::optional<int> particles;
  std::vector<std::string> labels;
};

struct RepresentationResult {
  std::vector<FockOperator> ops;
  RepresentationMeta meta;

  std::size_t size() const noexcept { return ops.size(); }
  const FockOperator& operator[](std::size_t i) const { return ops.at(i); }
};

/// O_i = a_n^{z_n} ... a_1^{z_1} for the C(n, m) occupation vectors z of
/// weight m, ordered descending as binary numbers with mode 1 most
/// significant.
struct SectorOperatorSet {
  int n = 0;
  int m = 0;
  std::vector<FockOperator> ops;
  std::vector<OccupationState> zetas;
};

/// sum_ab G^ab a+_a a_b
FockOperator bilinear(const DenseMatrix& g, const LadderSet& ladders);

RepresentationResult standard_rep(const GeneratorSet& gens, int n);
RepresentationResult standard_rep(const GeneratorSet& gens, const LadderSet& ladders);

RepresentationResult nssfr_u3_explicit();
RepresentationResult nssfr_u3_explicit(const LadderSet& ladders);

/// Requires n >= 3 and traceless generators (ValidationError otherwise).
RepresentationResult nssfr_un(const GeneratorSet& gens, int n);
RepresentationResult nssfr_un(const GeneratorSet& gens, const LadderSet& ladders);

SectorOperatorSet sector_operators(int n, int m);
SectorOperatorSet sector_operators(const LadderSet& ladders, int m);

/// Q_ij = O+_i O_j f_n^(m)(N), row-major: Q_ij at index i * C(n,m) + j
/// (0-based i, j). Requires 1 <= m <= n - 1.
std::vector<FockOperator> element_operators(int n, int m);
std::vector<FockOperator> element_operators(const LadderSet& ladders, int m);

RepresentationResult rep_ucnm(const GeneratorSet& gens, int n, int m);
RepresentationResult rep_ucnm(const GeneratorSet& gens, const LadderSet& ladders, int m);

/// sum G^ab Q^(m)_ab * xi_minus + sum G'^ab Q^(n-m)_ab * xi_plus.
/// Requires n - m != m, at least one xi set, and structure constants of
/// `gens2` matching those of `gens` to `tol`.
RepresentationResult mixed_rep(const GeneratorSet& gens, const GeneratorSet& gens2, int n, int m,
                               bool xi_minus, bool xi_plus, double tol = kDefaultTolerance);
RepresentationResult mixed_rep(const GeneratorSet& gens, const GeneratorSet& gens2,
                               const LadderSet& ladders, int m, bool xi_minus, bool xi_plus,
                               double tol = kDefaultTolerance);

}  // namespace fermirep
