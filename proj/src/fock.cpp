#include "fermirep/fock.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdlib>
#include <string_view>

#include "fermirep/errors.hpp"

namespace fermirep {

int max_modes() {
  const char* raw = std::getenv("FERMIREP_MAX_MODES");
  if (raw == nullptr) {
    return kDefaultMaxModes;
  }
  std::string_view text(raw);
  int value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || value < 1 ||
      value > kHardMaxModes) {
    return kDefaultMaxModes;
  }
  return value;
}

void check_mode_count(int n) {
  const int cap = max_modes();
  if (n < 1 || n > cap) {
    throw CapacityError("mode count " + std::to_string(n) + " outside [1, " +
                        std::to_string(cap) + "]");
  }
}

std::size_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) {
    return 0;
  }
  k = std::min(k, n - k);
  std::size_t result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  }
  return result;
}

// ---------------------------------------------------------------------------
// OccupationState

OccupationState::OccupationState(int modes, std::uint32_t mask) : modes_(modes), mask_(mask) {
  if (modes < 1 || modes > kHardMaxModes) {
    throw ArgumentError("occupation state needs 1.." + std::to_string(kHardMaxModes) + " modes");
  }
  if ((mask >> modes) != 0) {
    throw ArgumentError("occupation mask has bits above mode " + std::to_string(modes));
  }
}

OccupationState OccupationState::from_bits(std::span<const int> bits) {
  std::uint32_t mask = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != 0 && bits[i] != 1) {
      throw ArgumentError("occupation bits must be 0 or 1");
    }
    if (bits[i] == 1) {
      mask |= 1u << i;
    }
  }
  return OccupationState(static_cast<int>(bits.size()), mask);
}

OccupationState OccupationState::from_occupied(int modes, std::span<const int> occupied) {
  std::uint32_t mask = 0;
  for (int mode : occupied) {
    if (mode < 1 || mode > modes) {
      throw ArgumentError("mode index " + std::to_string(mode) + " outside [1, " +
                          std::to_string(modes) + "]");
    }
    const std::uint32_t bit = 1u << (mode - 1);
    if ((mask & bit) != 0) {
      throw ArgumentError("mode " + std::to_string(mode) + " listed twice");
    }
    mask |= bit;
  }
  return OccupationState(modes, mask);
}

bool OccupationState::occupied(int mode) const {
  if (mode < 1 || mode > modes_) {
    throw ArgumentError("mode index " + std::to_string(mode) + " outside [1, " +
                        std::to_string(modes_) + "]");
  }
  return ((mask_ >> (mode - 1)) & 1u) != 0;
}

int OccupationState::particle_count() const noexcept { return std::popcount(mask_); }

std::vector<int> OccupationState::bits() const {
  std::vector<int> out(static_cast<std::size_t>(modes_));
  for (int i = 0; i < modes_; ++i) {
    out[static_cast<std::size_t>(i)] = static_cast<int>((mask_ >> i) & 1u);
  }
  return out;
}

std::vector<int> OccupationState::occupied_modes() const {
  std::vector<int> out;
  for (int i = 0; i < modes_; ++i) {
    if (((mask_ >> i) & 1u) != 0) {
      out.push_back(i + 1);
    }
  }
  return out;
}

std::uint64_t OccupationState::binary_value() const noexcept {
  std::uint64_t value = 0;
  for (int i = 0; i < modes_; ++i) {
    value = (value << 1) | ((mask_ >> i) & 1u);
  }
  return value;
}

std::string OccupationState::to_string() const {
  std::string out = "{";
  bool first = true;
  for (int mode : occupied_modes()) {
    if (!first) {
      out += ',';
    }
    out += std::to_string(mode);
    first = false;
  }
  out += '}';
  return out;
}

// ---------------------------------------------------------------------------
// FockBasis

FockBasis::FockBasis(int modes) : modes_(modes) {
  check_mode_count(modes);
  const std::size_t dim = std::size_t{1} << modes;
  states_.reserve(dim);
  index_by_mask_.assign(dim, 0);
  sector_offsets_.reserve(static_cast<std::size_t>(modes) + 2);

  // Lexicographic k-subsets of {0, ..., n-1}, for k = 0..n.
  for (int k = 0; k <= modes; ++k) {
    sector_offsets_.push_back(states_.size());
    std::vector<int> combo(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      combo[static_cast<std::size_t>(i)] = i;
    }
    while (true) {
      std::uint32_t mask = 0;
      for (int bit : combo) {
        mask |= 1u << bit;
      }
      index_by_mask_[mask] = states_.size();
      states_.emplace_back(modes, mask);

      int pos = k - 1;
      while (pos >= 0 && combo[static_cast<std::size_t>(pos)] == modes - k + pos) {
        --pos;
      }
      if (pos < 0) {
        break;
      }
      ++combo[static_cast<std::size_t>(pos)];
      for (int j = pos + 1; j < k; ++j) {
        combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
  }
  sector_offsets_.push_back(states_.size());
}

std::size_t FockBasis::index_of(const OccupationState& state) const {
  if (state.modes() != modes_) {
    throw ArgumentError("state has " + std::to_string(state.modes()) + " modes, basis has " +
                        std::to_string(modes_));
  }
  return index_by_mask_[state.mask()];
}

std::size_t FockBasis::sector_begin(int m) const {
  if (m < 0 || m > modes_) {
    throw ArgumentError("particle number " + std::to_string(m) + " outside [0, " +
                        std::to_string(modes_) + "]");
  }
  return sector_offsets_[static_cast<std::size_t>(m)];
}

std::size_t FockBasis::sector_end(int m) const {
  return sector_begin(m) + binomial(modes_, m);
}

FockBasis build_basis(int n) { return FockBasis(n); }

// ---------------------------------------------------------------------------
// FockOperator

namespace {

int dim_for(int modes) {
  if (modes < 1 || modes > kHardMaxModes) {
    throw ArgumentError("operator needs 1.." + std::to_string(kHardMaxModes) + " modes");
  }
  return 1 << modes;
}

}  // namespace

FockOperator::FockOperator(int modes) : modes_(modes), matrix_(dim_for(modes), dim_for(modes)) {
  matrix_.makeCompressed();
}

FockOperator::FockOperator(int modes, SparseMatrix matrix) : modes_(modes), matrix_(std::move(matrix)) {
  const int dim = dim_for(modes);
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw ArgumentError("matrix is " + std::to_string(matrix_.rows()) + "x" +
                        std::to_string(matrix_.cols()) + ", expected " + std::to_string(dim) +
                        "x" + std::to_string(dim));
  }
  canonicalize();
}

FockOperator FockOperator::identity(int modes) {
  const int dim = dim_for(modes);
  SparseMatrix m(dim, dim);
  m.setIdentity();
  return FockOperator(modes, std::move(m));
}

FockOperator FockOperator::diagonal(int modes, std::span<const Complex> values) {
  const int dim = dim_for(modes);
  if (values.size() != static_cast<std::size_t>(dim)) {
    throw ArgumentError("diagonal needs " + std::to_string(dim) + " values");
  }
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(values.size());
  for (int i = 0; i < dim; ++i) {
    triplets.emplace_back(i, i, values[static_cast<std::size_t>(i)]);
  }
  SparseMatrix m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return FockOperator(modes, std::move(m));
}

FockOperator FockOperator::from_entries(int modes, std::span<const MatrixEntry> entries) {
  const int dim = dim_for(modes);
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(entries.size());
  for (const auto& e : entries) {
    if (e.row < 0 || e.row >= dim || e.col < 0 || e.col >= dim) {
      throw ArgumentError("entry (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                          ") outside a " + std::to_string(dim) + "-dimensional space");
    }
    triplets.emplace_back(e.row, e.col, e.value);
  }
  SparseMatrix m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return FockOperator(modes, std::move(m));
}

Complex FockOperator::coeff(int row, int col) const {
  if (row < 0 || row >= dim() || col < 0 || col >= dim()) {
    throw ArgumentError("coefficient index out of range");
  }
  return matrix_.coeff(row, col);
}

std::vector<MatrixEntry> FockOperator::entries() const {
  std::vector<MatrixEntry> out;
  out.reserve(nnz());
  // Row-major storage iterates rows in order and columns ascending within a row.
  for (int row = 0; row < matrix_.outerSize(); ++row) {
    for (SparseMatrix::InnerIterator it(matrix_, row); it; ++it) {
      out.push_back({row, static_cast<int>(it.col()), it.value()});
    }
  }
  return out;
}

Eigen::MatrixXcd FockOperator::to_dense() const { return Eigen::MatrixXcd(matrix_); }

FockOperator FockOperator::adjoint() const {
  return FockOperator(modes_, SparseMatrix(matrix_.adjoint()));
}

double FockOperator::max_abs() const {
  double best = 0.0;
  const Complex* values = matrix_.valuePtr();
  for (Eigen::Index k = 0; k < matrix_.nonZeros(); ++k) {
    best = std::max(best, std::abs(values[k]));
  }
  return best;
}

FockOperator& FockOperator::operator+=(const FockOperator& other) {
  require_compatible(other);
  matrix_ = matrix_ + other.matrix_;
  canonicalize();
  return *this;
}

FockOperator& FockOperator::operator-=(const FockOperator& other) {
  require_compatible(other);
  matrix_ = matrix_ - other.matrix_;
  canonicalize();
  return *this;
}

FockOperator& FockOperator::operator*=(Complex scalar) {
  matrix_ *= scalar;
  canonicalize();
  return *this;
}

FockOperator operator*(const FockOperator& lhs, const FockOperator& rhs) {
  lhs.require_compatible(rhs);
  SparseMatrix product = lhs.matrix_ * rhs.matrix_;
  return FockOperator(lhs.modes_, std::move(product));
}

bool operator==(const FockOperator& lhs, const FockOperator& rhs) {
  return lhs.modes_ == rhs.modes_ && lhs.entries() == rhs.entries();
}

void FockOperator::require_compatible(const FockOperator& other) const {
  if (modes_ != other.modes_) {
    throw ArgumentError("operators act on " + std::to_string(modes_) + " and " +
                        std::to_string(other.modes_) + " modes");
  }
}

void FockOperator::canonicalize() {
  matrix_.prune([](const Eigen::Index&, const Eigen::Index&, const Complex& v) {
    return v != Complex(0.0, 0.0);
  });
  matrix_.makeCompressed();
}

FockOperator commutator(const FockOperator& a, const FockOperator& b) { return a * b - b * a; }

FockOperator anticommutator(const FockOperator& a, const FockOperator& b) { return a * b + b * a; }

double max_abs_diff(const FockOperator& a, const FockOperator& b) { return (a - b).max_abs(); }

// ---------------------------------------------------------------------------
// Ladder operators

namespace {

void check_mode_index(int n, int i) {
  if (i < 1 || i > n) {
    throw ArgumentError("mode index " + std::to_string(i) + " outside [1, " + std::to_string(n) +
                        "]");
  }
}

FockOperator build_annihilator(const FockBasis& basis, int i) {
  check_mode_index(basis.modes(), i);
  const std::uint32_t bit = 1u << (i - 1);
  const std::uint32_t below = bit - 1;
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(basis.size() / 2);
  for (std::size_t col = 0; col < basis.size(); ++col) {
    const std::uint32_t mask = basis.state(col).mask();
    if ((mask & bit) == 0) {
      continue;
    }
    const double sign = (std::popcount(mask & below) % 2 == 0) ? 1.0 : -1.0;
    const auto row = basis.index_of_mask(mask & ~bit);
    triplets.emplace_back(static_cast<int>(row), static_cast<int>(col), Complex(sign, 0.0));
  }
  const int dim = static_cast<int>(basis.size());
  SparseMatrix m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return FockOperator(basis.modes(), std::move(m));
}

std::vector<Complex> particle_counts(const FockBasis& basis) {
  std::vector<Complex> values;
  values.reserve(basis.size());
  for (const auto& s : basis.states()) {
    values.emplace_back(static_cast<double>(s.particle_count()), 0.0);
  }
  return values;
}

}  // namespace

FockOperator annihilation(int n, int i) {
  check_mode_count(n);
  check_mode_index(n, i);
  return build_annihilator(FockBasis(n), i);
}

FockOperator creation(int n, int i) { return annihilation(n, i).adjoint(); }

FockOperator number_operator(int n, int i) {
  check_mode_count(n);
  check_mode_index(n, i);
  FockBasis basis(n);
  std::vector<Complex> values;
  values.reserve(basis.size());
  for (const auto& s : basis.states()) {
    values.emplace_back(s.occupied(i) ? 1.0 : 0.0, 0.0);
  }
  return FockOperator::diagonal(n, values);
}

FockOperator total_number(int n) {
  FockBasis basis(n);
  const auto values = particle_counts(basis);
  return FockOperator::diagonal(n, values);
}

std::vector<std::size_t> sector_indices(int n, int m) {
  FockBasis basis(n);
  std::vector<std::size_t> out;
  for (std::size_t k = basis.sector_begin(m); k < basis.sector_end(m); ++k) {
    out.push_back(k);
  }
  return out;
}

// ---------------------------------------------------------------------------
// LadderSet

LadderSet::LadderSet(int modes) : basis_(modes) {
  annihilators_.reserve(static_cast<std::size_t>(modes));
  creators_.reserve(static_cast<std::size_t>(modes));
  for (int i = 1; i <= modes; ++i) {
    annihilators_.push_back(build_annihilator(basis_, i));
    creators_.push_back(annihilators_.back().adjoint());
  }
}

const FockOperator& LadderSet::annihilator(int mode) const {
  check_mode_index(modes(), mode);
  return annihilators_[static_cast<std::size_t>(mode - 1)];
}

const FockOperator& LadderSet::creator(int mode) const {
  check_mode_index(modes(), mode);
  return creators_[static_cast<std::size_t>(mode - 1)];
}

FockOperator LadderSet::number(int mode) const { return creator(mode) * annihilator(mode); }

FockOperator LadderSet::total_number() const {
  const auto values = particle_counts(basis_);
  return FockOperator::diagonal(modes(), values);
}

LadderSet LadderSet::with_flipped_sign(LadderKind kind, int mode, std::size_t entry) const {
  check_mode_index(modes(), mode);
  LadderSet copy = *this;
  auto& target = (kind == LadderKind::annihilation ? copy.annihilators_ : copy.creators_)
      [static_cast<std::size_t>(mode - 1)];
  auto entries = target.entries();
  if (entry >= entries.size()) {
    throw ArgumentError("ladder matrix has " + std::to_string(entries.size()) +
                        " nonzeros, cannot flip entry " + std::to_string(entry));
  }
  entries[entry].value = -entries[entry].value;
  target = FockOperator::from_entries(modes(), entries);
  copy.canonical_ = false;
  return copy;
}

}  // namespace fermirep
