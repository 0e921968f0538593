#pragma once

// Matrix Lie-algebra generators: Gell-Mann matrices and their su(d)
// generalization, spin-1 matrices, structure-constant extraction and the
// conjugation lambda -> U (-lambda^*) U^+.
//
// Generator indices are 0-based positions in a GeneratorSet.

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace fermirep {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;

inline constexpr double kDefaultTolerance = 1e-10;

class GeneratorSet {
 public:
  /// All matrices must be square with a common dimension; one label each.
  GeneratorSet(std::vector<DenseMatrix> matrices, std::vector<std::string> labels);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return matrices_.size(); }
  const DenseMatrix& matrix(std::size_t index) const { return matrices_.at(index); }
  const DenseMatrix& operator[](std::size_t index) const { return matrices_.at(index); }
  const std::string& label(std::size_t index) const { return labels_.at(index); }
  std::span<const DenseMatrix> matrices() const noexcept { return matrices_; }
  std::span<const std::string> labels() const noexcept { return labels_; }

  /// Sparse copy of matrix(index), exact zeros dropped.
  const Eigen::SparseMatrix<Complex, Eigen::RowMajor>& sparse(std::size_t index) const {
    return sparse_.at(index);
  }

  bool is_hermitian(double tol = kDefaultTolerance) const;
  bool is_traceless(double tol = kDefaultTolerance) const;

 private:
  int dim_ = 0;
  std::vector<DenseMatrix> matrices_;
  std::vector<std::string> labels_;
  std::vector<Eigen::SparseMatrix<Complex, Eigen::RowMajor>> sparse_;
};

/// Every matrix multiplied by `factor`; labels unchanged.
GeneratorSet scaled(const GeneratorSet& gens, Complex factor);

struct StructureTerm {
  std::size_t index;
  Complex value;
};

/// c[i][j][l] with [G_i, G_j] = sum_l c[i][j][l] G_l, stored sparsely per
/// computed pair. Setting (i, j) also defines (j, i) = -(i, j); (i, i) is
/// always empty.
class StructureConstants {
 public:
  explicit StructureConstants(std::size_t size) : size_(size) {}

  std::size_t size() const noexcept { return size_; }
  void set(std::size_t i, std::size_t j, std::vector<StructureTerm> terms);
  bool has(std::size_t i, std::size_t j) const;
  /// Nonzero terms for (i, j), ordered by l. Throws ArgumentError if the
  /// pair was not computed.
  std::vector<StructureTerm> terms(std::size_t i, std::size_t j) const;
  Complex at(std::size_t i, std::size_t j, std::size_t l) const;
  /// Computed pairs (i < j), ascending.
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const;
  bool complete() const noexcept { return table_.size() == size_ * (size_ - 1) / 2; }

 private:
  void check_index(std::size_t i) const;

  std::size_t size_;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<StructureTerm>> table_;
};

/// Largest |c_a - c_b| over pairs computed in `a`; throws ArgumentError if
/// sizes differ or `b` lacks one of those pairs.
double max_abs_diff(const StructureConstants& a, const StructureConstants& b);

using GeneratorPair = std::pair<std::size_t, std::size_t>;

/// Solves [G_i, G_j] = sum_l c[i][j][l] G_l for every pair by projecting the
/// commutator through the Gram matrix of the trace inner product
/// <A, B> = tr(A^+ B). Throws DependenceError for a singular Gram matrix and
/// ClosureError when a commutator leaves the span by `tol` or more.
StructureConstants structure_constants(const GeneratorSet& gens, double tol = kDefaultTolerance);

/// Same, restricted to the listed pairs.
StructureConstants structure_constants(const GeneratorSet& gens, double tol,
                                       std::span<const GeneratorPair> pairs);

/// The eight standard Gell-Mann matrices lambda_1..lambda_8.
GeneratorSet gell_mann();

/// d^2 - 1 traceless Hermitian generators with tr(G_a G_b) = 2 delta_ab,
/// nested so that the first (k-1)^2 - 1 span su(k-1): for k = 2..d the
/// symmetric/antisymmetric pairs (j, k), j < k, then the k-th diagonal
/// generator. d = 2 gives the Pauli matrices, d = 3 the Gell-Mann matrices.
GeneratorSet generalized_gell_mann(int d);

/// {J+, J-, J3} of spin 1.
GeneratorSet spin1_matrices();

/// The eight quadratic forms in J+, J-, J3 of the published spin-1 route to
/// the Gell-Mann matrices, evaluated as printed. Entries 1..6 are lambda_1..6;
/// entry 7 comes out as -lambda_7 and entry 8 as diag(1, -1, 0)/sqrt(3).
GeneratorSet gellmann_from_spin1();

/// Same forms with the overall sign of the seventh and the sign of the
/// [J3 J-, J+ J3] term of the eighth reversed; equals gell_mann().
GeneratorSet gellmann_from_spin1_corrected();

/// Real n x n antidiagonal matrix with alternating signs, +1 in row 1.
DenseMatrix conjugation_matrix(int n);

/// lambda'_i = U (-lambda_i^*) U^+ with U = conjugation_matrix(n).
GeneratorSet conjugate_rep(const GeneratorSet& gens, int n);

DenseMatrix commutator(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace fermirep
