#include "fermirep/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <set>
#include <thread>

#include "fermirep/errors.hpp"

namespace fermirep {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

CheckResult finish(std::string name, double residual, std::size_t identities, double tol,
                   Clock::time_point start) {
  CheckResult r;
  r.name = std::move(name);
  r.max_residual = residual;
  r.identities = identities;
  r.passed = residual < tol;
  r.elapsed_ms = elapsed_ms(start);
  return r;
}

VerificationReport single(CheckResult result, double tol) {
  VerificationReport report;
  report.params.tolerance = tol;
  report.checks.push_back(std::move(result));
  return report;
}

double dense_max_abs(const DenseMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

// ---------------------------------------------------------------------------
// VerificationReport

bool VerificationReport::overall() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::size_t VerificationReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.passed; }));
}

const CheckResult* VerificationReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) {
      return &c;
    }
  }
  return nullptr;
}

void VerificationReport::merge(const VerificationReport& other, std::string_view prefix) {
  for (auto c : other.checks) {
    c.name = std::string(prefix) + c.name;
    checks.push_back(std::move(c));
  }
}

void VerificationReport::sort_by_name() {
  std::stable_sort(checks.begin(), checks.end(),
                   [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
}

// ---------------------------------------------------------------------------
// Individual checks

VerificationReport check_anticommutation(const LadderSet& ladders, double tol) {
  const int n = ladders.modes();
  const FockOperator identity = FockOperator::identity(n);
  VerificationReport report;
  report.params = {n, std::nullopt, "anticommutation", tol};

  struct Family {
    const char* name;
    bool left_creator;
    bool right_creator;
  };
  for (const Family family : {Family{"anticommutation.a_adag", false, true},
                              Family{"anticommutation.a_a", false, false},
                              Family{"anticommutation.adag_adag", true, true}}) {
    const auto start = Clock::now();
    double worst = 0.0;
    for (int i = 1; i <= n; ++i) {
      const auto& left = family.left_creator ? ladders.creator(i) : ladders.annihilator(i);
      for (int j = 1; j <= n; ++j) {
        const auto& right = family.right_creator ? ladders.creator(j) : ladders.annihilator(j);
        FockOperator residual = anticommutator(left, right);
        if (!family.left_creator && family.right_creator && i == j) {
          residual -= identity;
        }
        worst = std::max(worst, residual.max_abs());
      }
    }
    report.checks.push_back(
        finish(family.name, worst, static_cast<std::size_t>(n) * static_cast<std::size_t>(n), tol, start));
  }
  return report;
}

VerificationReport check_anticommutation(int n, double tol) {
  return check_anticommutation(LadderSet(n), tol);
}

VerificationReport check_closure(const RepresentationResult& rep, const StructureConstants& c,
                                 double tol) {
  if (rep.size() != c.size()) {
    throw ArgumentError("representation has " + std::to_string(rep.size()) +
                        " operators but structure constants cover " + std::to_string(c.size()));
  }
  const auto start = Clock::now();
  double worst = 0.0;
  std::size_t count = 0;
  std::string worst_pair;
  for (const auto& [i, j] : c.pairs()) {
    FockOperator residual = commutator(rep[i], rep[j]);
    for (const auto& t : c.terms(i, j)) {
      residual -= t.value * rep[t.index];
    }
    const double r = residual.max_abs();
    if (r > worst) {
      worst = r;
      worst_pair = "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
    }
    ++count;
  }
  auto result = finish("closure", worst, count, tol, start);
  if (!result.passed) {
    result.detail = "worst pair " + worst_pair;
  }
  VerificationReport report = single(std::move(result), tol);
  report.params = {rep.meta.modes, rep.meta.particles, rep.meta.variant, tol};
  return report;
}

VerificationReport check_eij_algebra(std::span<const FockOperator> q, std::size_t k, double tol,
                                     const CheckOptions& options) {
  if (q.size() != k * k) {
    throw ArgumentError("expected " + std::to_string(k * k) + " element operators, got " +
                        std::to_string(q.size()));
  }
  const auto start = Clock::now();
  auto at = [&](std::size_t i, std::size_t j) -> const FockOperator& { return q[i * k + j]; };
  double worst = 0.0;
  auto check = [&](std::size_t i, std::size_t j, std::size_t a, std::size_t b) {
    FockOperator residual = commutator(at(i, j), at(a, b));
    if (j == a) {
      residual -= at(i, b);
    }
    if (b == i) {
      residual += at(a, j);
    }
    worst = std::max(worst, residual.max_abs());
  };

  const std::size_t total = k * k * k * k;
  std::size_t count = 0;
  if (options.max_identities == 0 || total <= options.max_identities) {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t a = 0; a < k; ++a)
          for (std::size_t b = 0; b < k; ++b) {
            check(i, j, a, b);
            ++count;
          }
  } else {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    for (; count < options.max_identities; ++count) {
      const std::size_t i = pick(rng);
      const std::size_t j = pick(rng);
      const std::size_t a = pick(rng);
      const std::size_t b = pick(rng);
      check(i, j, a, b);
    }
  }
  auto result = finish("eij_algebra", worst, count, tol, start);
  if (count < total) {
    result.detail = "sampled " + std::to_string(count) + " of " + std::to_string(total);
  }
  return single(std::move(result), tol);
}

VerificationReport check_number_commutant(std::span<const FockOperator> ops, int n, double tol) {
  const auto start = Clock::now();
  const FockOperator number = total_number(n);
  CheckResult result;
  double worst = 0.0;
  result.item_residuals.reserve(ops.size());
  for (const auto& op : ops) {
    if (op.modes() != n) {
      throw ArgumentError("operator acts on " + std::to_string(op.modes()) + " modes, expected " +
                          std::to_string(n));
    }
    const double r = commutator(op, number).max_abs();
    result.item_residuals.push_back(r);
    worst = std::max(worst, r);
  }
  auto finished = finish("number_commutant", worst, ops.size(), tol, start);
  finished.item_residuals = std::move(result.item_residuals);
  VerificationReport report = single(std::move(finished), tol);
  report.params.n = n;
  return report;
}

VerificationReport check_number_commutant(const RepresentationResult& rep, int n, double tol) {
  auto report = check_number_commutant(std::span<const FockOperator>(rep.ops), n, tol);
  report.params = {n, rep.meta.particles, rep.meta.variant, tol};
  return report;
}

VerificationReport check_hermiticity(const RepresentationResult& rep, const GeneratorSet& gens,
                                     double tol) {
  if (rep.size() != gens.size()) {
    throw ArgumentError("representation and generator set differ in size");
  }
  const auto start = Clock::now();
  double worst = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (dense_max_abs(gens[i] - gens[i].adjoint()) >= tol) {
      continue;
    }
    worst = std::max(worst, max_abs_diff(rep[i], rep[i].adjoint()));
    ++count;
  }
  return single(finish("hermiticity", worst, count, tol, start), tol);
}

VerificationReport check_outer_products(std::span<const FockOperator> q, const LadderSet& ladders,
                                        int m, double tol) {
  const auto start = Clock::now();
  const int n = ladders.modes();
  const auto sector = sector_operators(ladders, m);
  const std::size_t k = sector.ops.size();
  if (q.size() != k * k) {
    throw ArgumentError("expected " + std::to_string(k * k) + " element operators, got " +
                        std::to_string(q.size()));
  }
  // |i> = O+_i |vac>: column 0 of O+_i.
  std::vector<std::vector<MatrixEntry>> kets;
  kets.reserve(k);
  for (const auto& o : sector.ops) {
    std::vector<MatrixEntry> ket;
    for (const auto& e : o.adjoint().entries()) {
      if (e.col == 0) {
        ket.push_back(e);
      }
    }
    kets.push_back(std::move(ket));
  }
  const auto& basis = ladders.basis();
  const auto in_sector = [&](int index) {
    return basis.state(static_cast<std::size_t>(index)).particle_count() == m;
  };
  // Outside the N = m columns only the filled state survives the selective
  // polynomial: Q_ij - |i><j| = delta_ij f(n) |full><full|.
  const double residue = static_cast<double>(selective_function(n, m)(Rational(n)));
  const int full = (1 << n) - 1;

  double sector_worst = 0.0;
  double residue_worst = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<MatrixEntry> outer;
      for (const auto& bra : kets[j]) {
        for (const auto& ket : kets[i]) {
          outer.push_back({ket.row, bra.row, ket.value * std::conj(bra.value)});
        }
      }
      const auto expected = FockOperator::from_entries(n, outer);
      std::vector<MatrixEntry> inside;
      std::vector<MatrixEntry> outside;
      for (const auto& e : (q[i * k + j] - expected).entries()) {
        (in_sector(e.col) ? inside : outside).push_back(e);
      }
      for (const auto& e : inside) {
        sector_worst = std::max(sector_worst, std::abs(e.value));
      }
      if (i == j) {
        outside.push_back({full, full, Complex(-residue)});
      }
      residue_worst = std::max(residue_worst, FockOperator::from_entries(n, outside).max_abs());
    }
  }
  VerificationReport report = single(finish("outer_products", sector_worst, k * k, tol, start), tol);
  auto tail = finish("filled_state_residue", residue_worst, k * k, tol, start);
  char value[32];
  std::snprintf(value, sizeof value, "%.17g", residue);
  tail.detail = std::string("Q_ii - |i><i| = ") + value + " |full><full|";
  report.checks.push_back(std::move(tail));
  return report;
}

// ---------------------------------------------------------------------------
// Blocks

BlockDecomposition block_decompose(const FockOperator& op) {
  const FockBasis basis(op.modes());
  BlockDecomposition out;
  out.n = op.modes();
  for (int m = 0; m <= out.n; ++m) {
    const auto size = static_cast<Eigen::Index>(binomial(out.n, m));
    out.blocks.emplace(m, DenseMatrix::Zero(size, size));
  }
  for (const auto& e : op.entries()) {
    const int row_sector = basis.state(static_cast<std::size_t>(e.row)).particle_count();
    const int col_sector = basis.state(static_cast<std::size_t>(e.col)).particle_count();
    if (row_sector != col_sector) {
      out.off_block_norm = std::max(out.off_block_norm, std::abs(e.value));
      continue;
    }
    const auto offset = basis.sector_begin(row_sector);
    out.blocks[row_sector](static_cast<Eigen::Index>(static_cast<std::size_t>(e.row) - offset),
                           static_cast<Eigen::Index>(static_cast<std::size_t>(e.col) - offset)) =
        e.value;
  }
  return out;
}

FockOperator reassemble(const BlockDecomposition& decomposition) {
  const FockBasis basis(decomposition.n);
  std::vector<MatrixEntry> entries;
  for (const auto& [m, block] : decomposition.blocks) {
    if (block.rows() != static_cast<Eigen::Index>(binomial(decomposition.n, m)) ||
        block.cols() != block.rows()) {
      throw ArgumentError("block for sector " + std::to_string(m) + " has the wrong shape");
    }
    const auto offset = static_cast<int>(basis.sector_begin(m));
    for (Eigen::Index r = 0; r < block.rows(); ++r) {
      for (Eigen::Index c = 0; c < block.cols(); ++c) {
        if (block(r, c) != Complex(0.0)) {
          entries.push_back({offset + static_cast<int>(r), offset + static_cast<int>(c), block(r, c)});
        }
      }
    }
  }
  return FockOperator::from_entries(decomposition.n, entries);
}

VerificationReport check_sector_blocks(const RepresentationResult& rep,
                                       const std::map<int, const GeneratorSet*>& expected,
                                       double tol) {
  const auto start = Clock::now();
  const int n = rep.meta.modes;
  for (const auto& [m, gens] : expected) {
    if (m < 0 || m > n || gens == nullptr || gens->size() != rep.size() ||
        static_cast<std::size_t>(gens->dim()) != binomial(n, m)) {
      throw ArgumentError("expected blocks do not match the representation");
    }
  }
  CheckResult result;
  double worst = 0.0;
  for (std::size_t i = 0; i < rep.size(); ++i) {
    if (rep[i].modes() != n) {
      throw ArgumentError("operator mode count differs from the representation's");
    }
    const auto blocks = block_decompose(rep[i]);
    double r = blocks.off_block_norm;
    for (const auto& [m, block] : blocks.blocks) {
      auto it = expected.find(m);
      r = std::max(r, it == expected.end() ? dense_max_abs(block)
                                           : dense_max_abs(block - (*it->second)[i]));
    }
    result.item_residuals.push_back(r);
    worst = std::max(worst, r);
  }
  auto finished = finish("sector_blocks", worst, rep.size(), tol, start);
  finished.item_residuals = std::move(result.item_residuals);
  return single(std::move(finished), tol);
}

VerificationReport compare_ops(const RepresentationResult& a, const RepresentationResult& b,
                               double tol) {
  if (a.size() != b.size()) {
    throw ArgumentError("representations have " + std::to_string(a.size()) + " and " +
                        std::to_string(b.size()) + " operators");
  }
  const auto start = Clock::now();
  std::vector<double> diffs;
  diffs.reserve(a.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].modes() != b[i].modes()) {
      throw ArgumentError("operator " + std::to_string(i) + " acts on different mode counts");
    }
    diffs.push_back(max_abs_diff(a[i], b[i]));
    worst = std::max(worst, diffs.back());
  }
  auto result = finish("compare", worst, a.size(), tol, start);
  result.item_residuals = std::move(diffs);
  return single(std::move(result), tol);
}

VerificationReport compare_generators(const GeneratorSet& a, const GeneratorSet& b, double tol) {
  if (a.size() != b.size() || a.dim() != b.dim()) {
    throw ArgumentError("generator sets differ in shape");
  }
  const auto start = Clock::now();
  std::vector<double> diffs;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diffs.push_back(dense_max_abs(a[i] - b[i]));
    worst = std::max(worst, diffs.back());
  }
  auto result = finish("compare", worst, a.size(), tol, start);
  result.item_residuals = std::move(diffs);
  return single(std::move(result), tol);
}

VerificationReport verify_representation(const RepresentationResult& rep, const GeneratorSet& gens,
                                         double tol) {
  VerificationReport report;
  report.params = {rep.meta.modes, rep.meta.particles, rep.meta.variant, tol};
  report.merge(check_closure(rep, structure_constants(gens, tol), tol));
  report.merge(check_number_commutant(rep, rep.meta.modes, tol));
  report.merge(check_hermiticity(rep, gens, tol));
  return report;
}

// ---------------------------------------------------------------------------
// Suite

namespace {

struct Task {
  std::string prefix;
  std::function<VerificationReport()> run;
};

std::string two_digits(int value) {
  return (value < 10 ? "0" : "") + std::to_string(value);
}

std::vector<GeneratorPair> closure_pairs(std::size_t k, std::size_t budget, std::uint64_t seed) {
  const std::size_t total = k * (k - 1) / 2;
  std::vector<GeneratorPair> pairs;
  if (budget == 0 || total <= budget) {
    pairs.reserve(total);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        pairs.emplace_back(i, j);
      }
    }
    return pairs;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, k - 1);
  std::set<GeneratorPair> chosen;
  while (chosen.size() < budget) {
    std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    if (i == j) {
      continue;
    }
    chosen.emplace(std::min(i, j), std::max(i, j));
  }
  return {chosen.begin(), chosen.end()};
}

VerificationReport closure_report(const RepresentationResult& rep, const GeneratorSet& gens,
                                  double tol, const SuiteOptions& options) {
  const auto pairs = closure_pairs(gens.size(), options.max_identities, CheckOptions{}.seed);
  auto report = check_closure(rep, structure_constants(gens, tol, pairs), tol);
  const std::size_t total = gens.size() * (gens.size() - 1) / 2;
  if (pairs.size() < total) {
    report.checks.front().detail =
        "sampled " + std::to_string(pairs.size()) + " of " + std::to_string(total) + " pairs";
  }
  return report;
}

void add_tasks_for(int n, double tol, const SuiteOptions& options, std::vector<Task>& tasks) {
  const std::string tag = "n" + two_digits(n) + ".";
  auto ladders_for = [&options, n]() {
    return options.ladders ? options.ladders(n) : LadderSet(n);
  };

  tasks.push_back({tag, [=]() { return check_anticommutation(ladders_for(), tol); }});
  if (n < 2) {
    return;
  }

  tasks.push_back({tag + "standard.", [=]() {
                     const LadderSet ladders = ladders_for();
                     const GeneratorSet gens = n == 3 ? gell_mann() : generalized_gell_mann(n);
                     const auto rep = standard_rep(gens, ladders);
                     VerificationReport r;
                     r.merge(closure_report(rep, gens, tol, options));
                     r.merge(check_number_commutant(rep, n, tol));
                     r.merge(check_hermiticity(rep, gens, tol));
                     if (n == 3) {
                       const GeneratorSet conj = conjugate_rep(gens, 3);
                       r.merge(check_sector_blocks(rep, {{1, &gens}, {2, &conj}}, tol));
                     }
                     return r;
                   }});

  tasks.push_back({tag + "bilinears.", [=]() {
                     const LadderSet ladders = ladders_for();
                     std::vector<FockOperator> q;
                     for (int i = 1; i <= n; ++i) {
                       for (int j = 1; j <= n; ++j) {
                         q.push_back(ladders.creator(i) * ladders.annihilator(j));
                       }
                     }
                     CheckOptions opts;
                     opts.max_identities = options.max_identities;
                     return check_eij_algebra(q, static_cast<std::size_t>(n), tol, opts);
                   }});

  if (n >= 3) {
    tasks.push_back({tag + "nssfr.", [=]() {
                       const LadderSet ladders = ladders_for();
                       const GeneratorSet gens = n == 3 ? gell_mann() : generalized_gell_mann(n);
                       const auto rep = nssfr_un(gens, ladders);
                       VerificationReport r;
                       r.merge(closure_report(rep, gens, tol, options));
                       r.merge(check_number_commutant(rep, n, tol));
                       r.merge(check_hermiticity(rep, gens, tol));
                       r.merge(check_sector_blocks(rep, {{1, &gens}, {n - 1, &gens}}, tol));
                       return r;
                     }});
  }

  if (n == 3) {
    tasks.push_back({tag + "explicit_nssfr.", [=]() {
                       const LadderSet ladders = ladders_for();
                       const auto gens = gell_mann();
                       const auto explicit_rep = nssfr_u3_explicit(ladders);
                       VerificationReport r;
                       r.merge(compare_ops(explicit_rep, nssfr_un(gens, ladders), tol));
                       r.merge(closure_report(explicit_rep, gens, tol, options));
                       return r;
                     }});
  }

  for (int m = 1; m <= n - 1; ++m) {
    const std::string sector_tag = tag + "m" + two_digits(m) + ".";
    const auto k = binomial(n, m);
    tasks.push_back({sector_tag + "elements.", [=]() {
                       const LadderSet ladders = ladders_for();
                       const auto q = element_operators(ladders, m);
                       CheckOptions opts;
                       opts.max_identities = options.max_identities;
                       VerificationReport r;
                       r.merge(check_eij_algebra(q, k, tol, opts));
                       r.merge(check_outer_products(q, ladders, m, tol));
                       r.merge(check_number_commutant(q, n, tol));
                       return r;
                     }});
    tasks.push_back({sector_tag + "ucnm.", [=]() {
                       const LadderSet ladders = ladders_for();
                       const auto gens = generalized_gell_mann(static_cast<int>(k));
                       const auto rep = rep_ucnm(gens, ladders, m);
                       VerificationReport r;
                       r.merge(closure_report(rep, gens, tol, options));
                       r.merge(check_number_commutant(rep, n, tol));
                       r.merge(check_hermiticity(rep, gens, tol));
                       r.merge(check_sector_blocks(rep, {{m, &gens}}, tol));
                       return r;
                     }});
    if (m < n - m) {
      tasks.push_back({sector_tag + "mixed.", [=]() {
                         const LadderSet ladders = ladders_for();
                         const auto gens = generalized_gell_mann(static_cast<int>(k));
                         const auto both = mixed_rep(gens, gens, ladders, m, true, true, tol);
                         VerificationReport r;
                         r.merge(closure_report(both, gens, tol, options));
                         r.merge(check_number_commutant(both, n, tol));
                         r.merge(check_sector_blocks(both, {{m, &gens}, {n - m, &gens}}, tol));
                         r.merge(compare_ops(mixed_rep(gens, gens, ladders, m, true, false, tol),
                                             rep_ucnm(gens, ladders, m), tol),
                                 "reduction.");
                         return r;
                       }});
    }
  }
}

}  // namespace

VerificationReport run_suite(int n_max, double tol, const SuiteOptions& options) {
  check_mode_count(n_max);
  std::vector<Task> tasks;
  for (int n = 1; n <= n_max; ++n) {
    add_tasks_for(n, tol, options, tasks);
  }

  std::vector<VerificationReport> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      const auto start = Clock::now();
      try {
        results[t] = tasks[t].run();
      } catch (const std::exception& e) {
        CheckResult failed;
        failed.name = "error";
        failed.passed = false;
        failed.max_residual = std::numeric_limits<double>::max();
        failed.elapsed_ms = elapsed_ms(start);
        failed.detail = e.what();
        results[t] = single(std::move(failed), tol);
      }
    }
  };
  unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp(threads, 1u, static_cast<unsigned>(std::max<std::size_t>(tasks.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) {
    pool.emplace_back(worker);
  }
  worker();
  for (auto& t : pool) {
    t.join();
  }

  VerificationReport report;
  report.params = {n_max, std::nullopt, "suite", tol};
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    report.merge(results[t], tasks[t].prefix);
  }
  report.sort_by_name();
  return report;
}

}  // namespace fermirep
