#pragma once

// Occupation-number space of n fermionic modes and the ladder operators
// acting on it.
//
// Mode indices are 1-based throughout (mode i is the i-th fermion). Basis
// indices are 0-based positions in the canonical ordering: ascending
// particle number, and within a sector ascending lexicographic order of the
// occupied-mode sets. For n = 3:
//
//   0: vac   1: {1}   2: {2}   3: {3}   4: {1,2}   5: {1,3}   6: {2,3}   7: {1,2,3}
//
// A basis state with occupied modes j1 < j2 < ... < jk is
//   a+_{j1} a+_{j2} ... a+_{jk} |vac>
// so a_i picks up (-1)^(number of occupied modes below i).

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace fermirep {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor, int>;

inline constexpr int kDefaultMaxModes = 14;
inline constexpr int kHardMaxModes = 24;

/// Current mode cap: FERMIREP_MAX_MODES if set to an integer in
/// [1, kHardMaxModes], otherwise kDefaultMaxModes.
int max_modes();

/// Throws CapacityError unless 1 <= n <= max_modes().
void check_mode_count(int n);

/// C(n, k); zero when k is outside [0, n].
std::size_t binomial(int n, int k);

class OccupationState {
 public:
  OccupationState(int modes, std::uint32_t mask);

  /// `bits[i-1]` is the occupancy of mode i; every entry must be 0 or 1.
  static OccupationState from_bits(std::span<const int> bits);
  /// `occupied` lists 1-based mode indices, in any order, without repeats.
  static OccupationState from_occupied(int modes, std::span<const int> occupied);

  int modes() const noexcept { return modes_; }
  /// Bit (i-1) holds the occupancy of mode i.
  std::uint32_t mask() const noexcept { return mask_; }
  bool occupied(int mode) const;
  int particle_count() const noexcept;
  std::vector<int> bits() const;
  std::vector<int> occupied_modes() const;
  /// The bit string read as a binary number with mode 1 most significant.
  std::uint64_t binary_value() const noexcept;
  /// "{1,3}" style; the vacuum prints as "{}".
  std::string to_string() const;

  friend bool operator==(const OccupationState&, const OccupationState&) = default;

 private:
  int modes_;
  std::uint32_t mask_;
};

class FockBasis {
 public:
  explicit FockBasis(int modes);

  int modes() const noexcept { return modes_; }
  std::size_t size() const noexcept { return states_.size(); }
  const OccupationState& state(std::size_t index) const { return states_.at(index); }
  std::span<const OccupationState> states() const noexcept { return states_; }
  std::size_t index_of(const OccupationState& state) const;
  std::size_t index_of_mask(std::uint32_t mask) const { return index_by_mask_.at(mask); }

  /// Sectors are contiguous: [sector_begin(m), sector_end(m)).
  std::size_t sector_begin(int m) const;
  std::size_t sector_end(int m) const;

 private:
  int modes_;
  std::vector<OccupationState> states_;
  std::vector<std::size_t> index_by_mask_;
  std::vector<std::size_t> sector_offsets_;
};

FockBasis build_basis(int n);

struct MatrixEntry {
  int row;
  int col;
  Complex value;

  friend bool operator==(const MatrixEntry&, const MatrixEntry&) = default;
};

/// Sparse complex operator on the 2^n-dimensional Fock space. Never stores an
/// entry whose value is exactly zero.
class FockOperator {
 public:
  /// Zero operator on `modes` modes.
  explicit FockOperator(int modes);
  FockOperator(int modes, SparseMatrix matrix);

  static FockOperator zero(int modes) { return FockOperator(modes); }
  static FockOperator identity(int modes);
  static FockOperator diagonal(int modes, std::span<const Complex> values);
  /// Duplicate positions are summed.
  static FockOperator from_entries(int modes, std::span<const MatrixEntry> entries);

  int modes() const noexcept { return modes_; }
  int dim() const noexcept { return static_cast<int>(matrix_.rows()); }
  std::size_t nnz() const noexcept { return static_cast<std::size_t>(matrix_.nonZeros()); }
  Complex coeff(int row, int col) const;
  const SparseMatrix& matrix() const noexcept { return matrix_; }

  /// Nonzero entries sorted by (row, col).
  std::vector<MatrixEntry> entries() const;
  Eigen::MatrixXcd to_dense() const;

  FockOperator adjoint() const;
  /// Largest absolute entry; 0 for the zero operator.
  double max_abs() const;
  bool is_zero() const noexcept { return matrix_.nonZeros() == 0; }

  FockOperator& operator+=(const FockOperator& other);
  FockOperator& operator-=(const FockOperator& other);
  FockOperator& operator*=(Complex scalar);

  friend FockOperator operator+(FockOperator lhs, const FockOperator& rhs) { return lhs += rhs; }
  friend FockOperator operator-(FockOperator lhs, const FockOperator& rhs) { return lhs -= rhs; }
  friend FockOperator operator-(FockOperator op) { return op *= Complex(-1.0); }
  friend FockOperator operator*(const FockOperator& lhs, const FockOperator& rhs);
  friend FockOperator operator*(Complex scalar, FockOperator op) { return op *= scalar; }
  friend FockOperator operator*(FockOperator op, Complex scalar) { return op *= scalar; }

  /// Exact entrywise equality.
  friend bool operator==(const FockOperator& lhs, const FockOperator& rhs);

 private:
  void require_compatible(const FockOperator& other) const;
  void canonicalize();

  int modes_;
  SparseMatrix matrix_;
};

FockOperator commutator(const FockOperator& a, const FockOperator& b);
FockOperator anticommutator(const FockOperator& a, const FockOperator& b);
/// max |a - b| over all entries.
double max_abs_diff(const FockOperator& a, const FockOperator& b);

FockOperator annihilation(int n, int i);
FockOperator creation(int n, int i);
FockOperator number_operator(int n, int i);
FockOperator total_number(int n);
/// Basis indices of the N = m sector, ascending.
std::vector<std::size_t> sector_indices(int n, int m);

enum class LadderKind { annihilation, creation };

/// The 2n ladder matrices of an n-mode space, built once and shared by the
/// representation builders. Normally canonical; `with_flipped_sign` produces
/// a deliberately corrupted copy for sensitivity testing.
class LadderSet {
 public:
  explicit LadderSet(int modes);

  int modes() const noexcept { return basis_.modes(); }
  const FockBasis& basis() const noexcept { return basis_; }
  const FockOperator& annihilator(int mode) const;
  const FockOperator& creator(int mode) const;
  /// a+_i a_i
  FockOperator number(int mode) const;
  FockOperator total_number() const;
  bool is_canonical() const noexcept { return canonical_; }

  /// Copy with the sign of the `entry`-th stored nonzero (in (row, col)
  /// order) of one ladder matrix flipped. Only that matrix changes.
  LadderSet with_flipped_sign(LadderKind kind, int mode, std::size_t entry) const;

 private:
  FockBasis basis_;
  std::vector<FockOperator> annihilators_;
  std::vector<FockOperator> creators_;
  bool canonical_ = true;
};

}  // namespace fermirep
