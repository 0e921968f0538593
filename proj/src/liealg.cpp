#include "fermirep/liealg.hpp"

#include <algorithm>
#include <cmath>

#include "fermirep/errors.hpp"

namespace fermirep {

namespace {

using SparseRow = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

constexpr Complex kI(0.0, 1.0);

// Terms with |c| at or below this are treated as zero structure constants.
constexpr double kTermCutoff = 1e-13;

SparseRow to_sparse(const DenseMatrix& m) {
  SparseRow s = m.sparseView(0.0, 0.0);
  s.prune([](const Eigen::Index&, const Eigen::Index&, const Complex& v) {
    return v != Complex(0.0);
  });
  s.makeCompressed();
  return s;
}

DenseMatrix unit(int d, int row, int col) {
  DenseMatrix m = DenseMatrix::Zero(d, d);
  m(row, col) = 1.0;
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// GeneratorSet

GeneratorSet::GeneratorSet(std::vector<DenseMatrix> matrices, std::vector<std::string> labels)
    : matrices_(std::move(matrices)), labels_(std::move(labels)) {
  if (matrices_.empty()) {
    throw ArgumentError("generator set is empty");
  }
  if (labels_.size() != matrices_.size()) {
    throw ArgumentError("generator set has " + std::to_string(matrices_.size()) +
                        " matrices but " + std::to_string(labels_.size()) + " labels");
  }
  dim_ = static_cast<int>(matrices_.front().rows());
  for (const auto& m : matrices_) {
    if (m.rows() != dim_ || m.cols() != dim_) {
      throw ArgumentError("generator matrices must all be " + std::to_string(dim_) + "x" +
                          std::to_string(dim_));
    }
  }
  sparse_.reserve(matrices_.size());
  for (const auto& m : matrices_) {
    sparse_.push_back(to_sparse(m));
  }
}

bool GeneratorSet::is_hermitian(double tol) const {
  return std::all_of(matrices_.begin(), matrices_.end(), [tol](const DenseMatrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() < tol;
  });
}

bool GeneratorSet::is_traceless(double tol) const {
  return std::all_of(matrices_.begin(), matrices_.end(),
                     [tol](const DenseMatrix& m) { return std::abs(m.trace()) < tol; });
}

GeneratorSet scaled(const GeneratorSet& gens, Complex factor) {
  std::vector<DenseMatrix> mats;
  mats.reserve(gens.size());
  for (const auto& m : gens.matrices()) {
    mats.push_back(factor * m);
  }
  return GeneratorSet(std::move(mats), {gens.labels().begin(), gens.labels().end()});
}

DenseMatrix commutator(const DenseMatrix& a, const DenseMatrix& b) { return a * b - b * a; }

// ---------------------------------------------------------------------------
// StructureConstants

void StructureConstants::check_index(std::size_t i) const {
  if (i >= size_) {
    throw ArgumentError("generator index " + std::to_string(i) + " outside [0, " +
                        std::to_string(size_) + ")");
  }
}

void StructureConstants::set(std::size_t i, std::size_t j, std::vector<StructureTerm> terms) {
  check_index(i);
  check_index(j);
  if (i == j) {
    throw ArgumentError("structure constants of (i, i) are identically zero");
  }
  std::sort(terms.begin(), terms.end(),
            [](const StructureTerm& a, const StructureTerm& b) { return a.index < b.index; });
  if (i > j) {
    std::swap(i, j);
    for (auto& t : terms) {
      t.value = -t.value;
    }
  }
  table_[{i, j}] = std::move(terms);
}

bool StructureConstants::has(std::size_t i, std::size_t j) const {
  check_index(i);
  check_index(j);
  return i == j || table_.contains({std::min(i, j), std::max(i, j)});
}

std::vector<StructureTerm> StructureConstants::terms(std::size_t i, std::size_t j) const {
  check_index(i);
  check_index(j);
  if (i == j) {
    return {};
  }
  auto it = table_.find({std::min(i, j), std::max(i, j)});
  if (it == table_.end()) {
    throw ArgumentError("structure constants for pair (" + std::to_string(i) + ", " +
                        std::to_string(j) + ") were not computed");
  }
  auto out = it->second;
  if (i > j) {
    for (auto& t : out) {
      t.value = -t.value;
    }
  }
  return out;
}

Complex StructureConstants::at(std::size_t i, std::size_t j, std::size_t l) const {
  check_index(l);
  for (const auto& t : terms(i, j)) {
    if (t.index == l) {
      return t.value;
    }
  }
  return Complex(0.0);
}

std::vector<std::pair<std::size_t, std::size_t>> StructureConstants::pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(table_.size());
  for (const auto& [key, terms] : table_) {
    out.push_back(key);
  }
  return out;
}

double max_abs_diff(const StructureConstants& a, const StructureConstants& b) {
  if (a.size() != b.size()) {
    throw ArgumentError("structure constants of " + std::to_string(a.size()) + " and " +
                        std::to_string(b.size()) + " generators are not comparable");
  }
  double worst = 0.0;
  std::vector<Complex> scratch(a.size(), Complex(0.0));
  for (const auto& [i, j] : a.pairs()) {
    for (const auto& t : a.terms(i, j)) {
      scratch[t.index] += t.value;
    }
    for (const auto& t : b.terms(i, j)) {
      scratch[t.index] -= t.value;
    }
    for (auto& v : scratch) {
      worst = std::max(worst, std::abs(v));
      v = Complex(0.0);
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Structure-constant extraction

namespace {

// Solves Gram * c = b for the generator coefficients of a matrix given by
// its inner products b_l = <G_l, X>.
class GramSolver {
 public:
  explicit GramSolver(const GeneratorSet& gens) : k_(gens.size()) {
    const auto d = static_cast<std::size_t>(gens.dim());
    // position -> (generator, entry) lists, so inner products cost O(nnz).
    positions_.resize(d * d);
    for (std::size_t g = 0; g < k_; ++g) {
      const auto& s = gens.sparse(g);
      for (int r = 0; r < s.outerSize(); ++r) {
        for (SparseRow::InnerIterator it(s, r); it; ++it) {
          positions_[static_cast<std::size_t>(r) * d + static_cast<std::size_t>(it.col())]
              .push_back({g, it.value()});
        }
      }
    }
    dim_ = d;

    // Gram matrix G_ab = tr(G_a^+ G_b), sparse since most sets are orthogonal.
    std::vector<Eigen::Triplet<Complex>> triplets;
    for (const auto& list : positions_) {
      for (const auto& [a, va] : list) {
        for (const auto& [b, vb] : list) {
          triplets.emplace_back(static_cast<int>(a), static_cast<int>(b), std::conj(va) * vb);
        }
      }
    }
    Eigen::SparseMatrix<Complex> gram(static_cast<Eigen::Index>(k_), static_cast<Eigen::Index>(k_));
    gram.setFromTriplets(triplets.begin(), triplets.end());
    triplets.clear();
    triplets.shrink_to_fit();

    double scale = 0.0;
    for (Eigen::Index n = 0; n < gram.nonZeros(); ++n) {
      scale = std::max(scale, std::abs(gram.valuePtr()[n]));
    }
    diagonal_ = true;
    for (int col = 0; col < gram.outerSize() && diagonal_; ++col) {
      for (Eigen::SparseMatrix<Complex>::InnerIterator it(gram, col); it; ++it) {
        if (it.row() != col && std::abs(it.value()) > 1e-14 * scale) {
          diagonal_ = false;
          break;
        }
      }
    }
    if (diagonal_) {
      inverse_diagonal_.resize(k_);
      for (std::size_t a = 0; a < k_; ++a) {
        const double g = std::real(gram.coeff(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)));
        if (!(g > 1e-12 * std::max(1.0, scale))) {
          throw DependenceError("generator " + gens.label(a) + " has zero norm");
        }
        inverse_diagonal_[a] = 1.0 / g;
      }
    } else {
      lu_ = Eigen::FullPivLU<DenseMatrix>(DenseMatrix(gram));
      lu_.setThreshold(1e-12);
      if (static_cast<std::size_t>(lu_.rank()) != k_) {
        throw DependenceError("generator set is linearly dependent (Gram rank " +
                              std::to_string(lu_.rank()) + " of " + std::to_string(k_) + ")");
      }
    }
  }

  // Coefficients of X in the generator basis (least-squares projection).
  std::vector<StructureTerm> project(const SparseRow& x) const {
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(k_));
    for (int r = 0; r < x.outerSize(); ++r) {
      for (SparseRow::InnerIterator it(x, r); it; ++it) {
        for (const auto& [g, v] : positions_[static_cast<std::size_t>(r) * dim_ +
                                             static_cast<std::size_t>(it.col())]) {
          b(static_cast<Eigen::Index>(g)) += std::conj(v) * it.value();
        }
      }
    }
    std::vector<StructureTerm> terms;
    if (diagonal_) {
      for (std::size_t g = 0; g < k_; ++g) {
        const Complex c = b(static_cast<Eigen::Index>(g)) * inverse_diagonal_[g];
        if (std::abs(c) > kTermCutoff) {
          terms.push_back({g, c});
        }
      }
    } else {
      const Eigen::VectorXcd c = lu_.solve(b);
      for (std::size_t g = 0; g < k_; ++g) {
        if (std::abs(c(static_cast<Eigen::Index>(g))) > kTermCutoff) {
          terms.push_back({g, c(static_cast<Eigen::Index>(g))});
        }
      }
    }
    return terms;
  }

 private:
  std::size_t k_;
  std::size_t dim_ = 0;
  std::vector<std::vector<std::pair<std::size_t, Complex>>> positions_;
  bool diagonal_ = true;
  std::vector<double> inverse_diagonal_;
  Eigen::FullPivLU<DenseMatrix> lu_;
};

double residual(const SparseRow& x, const std::vector<StructureTerm>& terms,
                const GeneratorSet& gens) {
  SparseRow r = x;
  for (const auto& t : terms) {
    r -= t.value * gens.sparse(t.index);
  }
  double worst = 0.0;
  for (Eigen::Index k = 0; k < r.nonZeros(); ++k) {
    worst = std::max(worst, std::abs(r.valuePtr()[k]));
  }
  return worst;
}

}  // namespace

StructureConstants structure_constants(const GeneratorSet& gens, double tol,
                                       std::span<const GeneratorPair> pairs) {
  const GramSolver solver(gens);
  StructureConstants c(gens.size());
  for (auto [i, j] : pairs) {
    if (i >= gens.size() || j >= gens.size()) {
      throw ArgumentError("generator pair (" + std::to_string(i) + ", " + std::to_string(j) +
                          ") outside a set of " + std::to_string(gens.size()));
    }
    if (i == j) {
      continue;
    }
    if (i > j) {
      std::swap(i, j);
    }
    const SparseRow x = SparseRow(gens.sparse(i) * gens.sparse(j)) -
                        SparseRow(gens.sparse(j) * gens.sparse(i));
    auto terms = solver.project(x);
    const double r = residual(x, terms, gens);
    if (!(r < tol)) {
      throw ClosureError("[" + gens.label(i) + ", " + gens.label(j) +
                         "] is outside the span of the generators (residual " +
                         std::to_string(r) + ")");
    }
    c.set(i, j, std::move(terms));
  }
  return c;
}

StructureConstants structure_constants(const GeneratorSet& gens, double tol) {
  std::vector<GeneratorPair> pairs;
  pairs.reserve(gens.size() * (gens.size() - 1) / 2);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      pairs.emplace_back(i, j);
    }
  }
  return structure_constants(gens, tol, pairs);
}

// ---------------------------------------------------------------------------
// Concrete generator sets

GeneratorSet gell_mann() {
  const double r3 = 1.0 / std::sqrt(3.0);
  std::vector<DenseMatrix> m(8, DenseMatrix::Zero(3, 3));
  m[0](0, 1) = 1.0;
  m[0](1, 0) = 1.0;
  m[1](0, 1) = -kI;
  m[1](1, 0) = kI;
  m[2](0, 0) = 1.0;
  m[2](1, 1) = -1.0;
  m[3](0, 2) = 1.0;
  m[3](2, 0) = 1.0;
  m[4](0, 2) = -kI;
  m[4](2, 0) = kI;
  m[5](1, 2) = 1.0;
  m[5](2, 1) = 1.0;
  m[6](1, 2) = -kI;
  m[6](2, 1) = kI;
  m[7](0, 0) = r3;
  m[7](1, 1) = r3;
  m[7](2, 2) = -2.0 * r3;
  std::vector<std::string> labels;
  for (int i = 1; i <= 8; ++i) {
    labels.push_back("lambda_" + std::to_string(i));
  }
  return GeneratorSet(std::move(m), std::move(labels));
}

GeneratorSet generalized_gell_mann(int d) {
  if (d < 2) {
    throw ArgumentError("generalized Gell-Mann set needs d >= 2, got " + std::to_string(d));
  }
  std::vector<DenseMatrix> mats;
  std::vector<std::string> labels;
  mats.reserve(static_cast<std::size_t>(d * d - 1));
  for (int k = 1; k < d; ++k) {
    for (int j = 0; j < k; ++j) {
      mats.push_back(unit(d, j, k) + unit(d, k, j));
      labels.push_back("S_" + std::to_string(j + 1) + "_" + std::to_string(k + 1));
      mats.push_back(-kI * unit(d, j, k) + kI * unit(d, k, j));
      labels.push_back("A_" + std::to_string(j + 1) + "_" + std::to_string(k + 1));
    }
    // Diagonal generator with k ones followed by -k, normalized to tr(D^2) = 2.
    DenseMatrix diag = DenseMatrix::Zero(d, d);
    const double norm = std::sqrt(2.0 / (static_cast<double>(k) * (k + 1)));
    for (int j = 0; j < k; ++j) {
      diag(j, j) = norm;
    }
    diag(k, k) = -static_cast<double>(k) * norm;
    mats.push_back(std::move(diag));
    labels.push_back("D_" + std::to_string(k));
  }
  return GeneratorSet(std::move(mats), std::move(labels));
}

GeneratorSet spin1_matrices() {
  const double s2 = std::sqrt(2.0);
  DenseMatrix plus = DenseMatrix::Zero(3, 3);
  plus(0, 1) = s2;
  plus(1, 2) = s2;
  DenseMatrix minus = plus.adjoint();
  DenseMatrix j3 = DenseMatrix::Zero(3, 3);
  j3(0, 0) = 1.0;
  j3(2, 2) = -1.0;
  return GeneratorSet({plus, minus, j3}, {"J+", "J-", "J3"});
}

namespace {

GeneratorSet spin1_quadratic_forms(bool corrected) {
  const auto spin = spin1_matrices();
  const DenseMatrix& jp = spin[0];
  const DenseMatrix& jm = spin[1];
  const DenseMatrix& j3 = spin[2];
  const double s2 = std::sqrt(2.0);
  const double s3 = std::sqrt(3.0);

  const DenseMatrix j3jp = j3 * jp;
  const DenseMatrix jmj3 = jm * j3;
  const DenseMatrix j3jm = j3 * jm;
  const DenseMatrix jpj3 = jp * j3;
  const DenseMatrix jp2 = jp * jp;
  const DenseMatrix jm2 = jm * jm;
  const double flip = corrected ? -1.0 : 1.0;

  std::vector<DenseMatrix> m;
  m.reserve(8);
  m.push_back((s2 / 2.0) * (j3jp + jmj3));
  m.push_back((-kI * s2 / 2.0) * (j3jp - jmj3));
  m.push_back(0.5 * commutator(j3jp, jmj3));
  m.push_back(0.5 * (jp2 + jm2));
  m.push_back((-kI / 2.0) * (jp2 - jm2));
  m.push_back((-s2 / 2.0) * (j3jm + jpj3));
  m.push_back((flip * kI * s2 / 2.0) * (j3jm - jpj3));
  m.push_back((1.0 / (4.0 * s3)) * commutator(jp2, jm2) +
              (flip / (2.0 * s3)) * commutator(j3jm, jpj3));
  std::vector<std::string> labels;
  for (int i = 1; i <= 8; ++i) {
    labels.push_back("lambda_" + std::to_string(i));
  }
  return GeneratorSet(std::move(m), std::move(labels));
}

}  // namespace

GeneratorSet gellmann_from_spin1() { return spin1_quadratic_forms(false); }

GeneratorSet gellmann_from_spin1_corrected() { return spin1_quadratic_forms(true); }

DenseMatrix conjugation_matrix(int n) {
  if (n < 2) {
    throw ArgumentError("conjugation matrix needs n >= 2, got " + std::to_string(n));
  }
  DenseMatrix u = DenseMatrix::Zero(n, n);
  for (int row = 0; row < n; ++row) {
    u(row, n - 1 - row) = (row % 2 == 0) ? 1.0 : -1.0;
  }
  return u;
}

GeneratorSet conjugate_rep(const GeneratorSet& gens, int n) {
  if (gens.dim() != n) {
    throw ArgumentError("generators are " + std::to_string(gens.dim()) + "x" +
                        std::to_string(gens.dim()) + ", expected " + std::to_string(n) + "x" +
                        std::to_string(n));
  }
  const DenseMatrix u = conjugation_matrix(n);
  std::vector<DenseMatrix> mats;
  std::vector<std::string> labels;
  mats.reserve(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i) {
    mats.push_back(u * (-gens[i].conjugate()) * u.adjoint());
    labels.push_back(gens.label(i) + "'");
  }
  return GeneratorSet(std::move(mats), std::move(labels));
}

}  // namespace fermirep
