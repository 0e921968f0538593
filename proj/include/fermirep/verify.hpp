#pragma once

// Property checks over the constructions in schwinger.hpp. Every check
// reports the largest absolute entry of the residual operator (Chebyshev
// norm) and passes iff that residual is below the tolerance.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fermirep/fock.hpp"
#include "fermirep/liealg.hpp"
#include "fermirep/schwinger.hpp"

namespace fermirep {

struct CheckResult {
  std::string name;
  bool passed = false;
  double max_residual = 0.0;
  double elapsed_ms = 0.0;
  /// Number of identities evaluated.
  std::size_t identities = 0;
  /// Per-generator residuals, for checks that report them.
  std::vector<double> item_residuals;
  std::string detail;
};

struct ReportParams {
  int n = 0;
  std::optional<int> m;
  std::string variant;
  double tolerance = kDefaultTolerance;
};

struct VerificationReport {
  ReportParams params;
  std::vector<CheckResult> checks;

  /// Conjunction of all pass flags (true for an empty report).
  bool overall() const;
  std::size_t failures() const;
  const CheckResult* find(std::string_view name) const;
  /// Appends `other`'s checks, each name prefixed with `prefix`.
  void merge(const VerificationReport& other, std::string_view prefix = {});
  void sort_by_name();
};

struct CheckOptions {
  /// Above this many identities a check evaluates a fixed-seed random
  /// sample of this size instead of all of them. 0 disables sampling.
  std::size_t max_identities = 0;
  std::uint64_t seed = 0x5eed'f00d'cafe'0001ULL;
};

/// {a_i, a+_j} = delta_ij, {a_i, a_j} = 0, {a+_i, a+_j} = 0 for all pairs.
VerificationReport check_anticommutation(int n, double tol = kDefaultTolerance);
VerificationReport check_anticommutation(const LadderSet& ladders, double tol = kDefaultTolerance);

/// [rho_i, rho_j] = sum_l c[i][j][l] rho_l for every pair present in `c`.
VerificationReport check_closure(const RepresentationResult& rep, const StructureConstants& c,
                                 double tol = kDefaultTolerance);

/// [Q_ij, Q_kl] = delta_jk Q_il - delta_li Q_kj with Q_ij = q[i * k + j].
VerificationReport check_eij_algebra(std::span<const FockOperator> q, std::size_t k,
                                     double tol = kDefaultTolerance, const CheckOptions& options = {});

/// [rho_i, N] = 0 for every operator.
VerificationReport check_number_commutant(const RepresentationResult& rep, int n,
                                          double tol = kDefaultTolerance);
VerificationReport check_number_commutant(std::span<const FockOperator> ops, int n,
                                          double tol = kDefaultTolerance);

/// rho(G_i) is Hermitian whenever G_i is.
VerificationReport check_hermiticity(const RepresentationResult& rep, const GeneratorSet& gens,
                                     double tol = kDefaultTolerance);

/// Two checks with |i> = O+_i |vac>:
///  "outer_products"        Q_ij acts as |i><j| on the N = m sector;
///  "filled_state_residue"  on every other sector Q_ij vanishes except for
///                          Q_ii |full> = f_n^(m)(n) |full>.
VerificationReport check_outer_products(std::span<const FockOperator> q, const LadderSet& ladders,
                                        int m, double tol = kDefaultTolerance);

struct BlockDecomposition {
  int n = 0;
  std::map<int, DenseMatrix> blocks;
  /// Largest absolute entry outside all diagonal sector blocks.
  double off_block_norm = 0.0;
};

BlockDecomposition block_decompose(const FockOperator& op);
FockOperator reassemble(const BlockDecomposition& blocks);

/// For each operator: the block of every sector listed in `expected` must
/// equal the corresponding generator matrix, all other sector blocks and
/// everything off the block diagonal must vanish.
VerificationReport check_sector_blocks(const RepresentationResult& rep,
                                       const std::map<int, const GeneratorSet*>& expected,
                                       double tol = kDefaultTolerance);

/// Max entrywise difference, per generator.
VerificationReport compare_ops(const RepresentationResult& a, const RepresentationResult& b,
                               double tol = kDefaultTolerance);

/// Max entrywise difference between matching matrices of two sets.
VerificationReport compare_generators(const GeneratorSet& a, const GeneratorSet& b,
                                      double tol = kDefaultTolerance);

/// Closure, number commutant and hermiticity of a representation built from
/// `gens`. Used for both in-memory and file-based verification so the two
/// produce identical reports.
VerificationReport verify_representation(const RepresentationResult& rep, const GeneratorSet& gens,
                                         double tol = kDefaultTolerance);

struct SuiteOptions {
  /// Ladder matrices used for n modes; defaults to the canonical ones.
  std::function<LadderSet(int)> ladders;
  /// Identity budget per check; see CheckOptions.
  std::size_t max_identities = 100'000;
  /// Worker threads; 0 picks hardware concurrency.
  unsigned threads = 0;
};

/// Full catalogue for 2 <= n <= n_max (n = 1 runs anticommutation only).
/// Checks are named "nNN.<family>.<check>" and returned sorted by name.
VerificationReport run_suite(int n_max, double tol = kDefaultTolerance,
                             const SuiteOptions& options = {});

}  // namespace fermirep
