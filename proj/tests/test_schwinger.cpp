#include <doctest.h>

#include <random>

#include "fermirep/errors.hpp"
#include "fermirep/schwinger.hpp"
#include "fermirep/verify.hpp"
#include "oracle.hpp"

using namespace fermirep;

TEST_CASE("selective polynomials agree with the product formula") {
  for (int n = 2; n <= 10; ++n) {
    for (int m = 1; m <= n - 1; ++m) {
      const auto f = selective_function(n, m);
      CHECK(f.degree() == std::max(0, n - 2));
      for (int x = -2; x <= n + 2; ++x) {
        CHECK(f(Rational(x)) == oracle::selective(n, m, x));
      }
      const Rational half(1, 2);
      CHECK(f(half) == oracle::selective(n, m, half));
    }
  }
}

TEST_CASE("printed selective polynomials") {
  CHECK(selective_function(4, 2).to_string() == "-x^2 + 4x - 3");
  CHECK(selective_function(3, 1).to_string() == "-x + 2");
  CHECK(selective_function(3, 2).to_string() == "x - 1");
  CHECK(selective_function(2, 1).to_string() == "1");
  CHECK(selective_function(5, 1).to_string() == "-(1/6)x^3 + (3/2)x^2 - (13/3)x + 4");
  CHECK(selective_function(4, 2)(2.5) == doctest::Approx(0.75));
}

TEST_CASE("selective polynomial validation") {
  CHECK_THROWS_AS(selective_function(1, 1), ArgumentError);
  CHECK_THROWS_AS(selective_function(4, 0), ArgumentError);
  CHECK_THROWS_AS(selective_function(4, 4), ArgumentError);
  // x - 1 is selective for (3, 2) but not for (3, 1)
  CHECK_NOTHROW(SelectivePolynomial(3, 2, {Rational(-1), Rational(1)}));
  CHECK_THROWS_AS(SelectivePolynomial(3, 1, {Rational(-1), Rational(1)}), ValidationError);
}

TEST_CASE("selective polynomial of N") {
  for (int n = 2; n <= 6; ++n) {
    for (int m = 1; m < n; ++m) {
      const auto p = eval_at_number_operator(selective_function(n, m), n);
      CHECK(oracle::max_abs(p.to_dense() - oracle::selective_of_number(n, m)) < 1e-12);
    }
  }
}

TEST_CASE("bilinears against Kronecker ladders") {
  std::mt19937_64 rng(7);
  for (int n = 2; n <= 5; ++n) {
    const LadderSet l(n);
    const auto u = oracle::random_unitary(n, rng);
    const auto g = oracle::rotated(generalized_gell_mann(n), u);
    for (std::size_t i = 0; i < g.size(); i += 3) {
      CHECK(oracle::max_abs(bilinear(g[i], l).to_dense() - oracle::bilinear(g[i], n)) < 1e-13);
    }
  }
  CHECK_THROWS_AS(bilinear(DenseMatrix::Zero(2, 2), LadderSet(3)), ArgumentError);
}

TEST_CASE("standard representation closes with the defining constants") {
  for (int n = 2; n <= 5; ++n) {
    const auto g = n == 3 ? gell_mann() : generalized_gell_mann(n);
    const auto rep = standard_rep(g, n);
    CHECK(rep.meta.variant == "un-standard");
    CHECK(rep.size() == g.size());
    CHECK(check_closure(rep, structure_constants(g)).overall());
    CHECK(check_number_commutant(rep, n, 1e-12).overall());
  }
}

TEST_CASE("explicit three-mode construction against the uniform one") {
  const auto explicit_rep = nssfr_u3_explicit();
  const auto uniform = nssfr_un(gell_mann(), 3);
  REQUIRE(explicit_rep.size() == 8);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(max_abs_diff(explicit_rep[i], uniform[i]) < 1e-12);
  }
  // lambda^h_4 = (a+_1 a_3 + a+_3 a_1)(1 - 2 N_2), built independently
  const oracle::Dense a13 = oracle::creator(3, 1) * oracle::annihilator(3, 3) +
                            oracle::creator(3, 3) * oracle::annihilator(3, 1);
  const oracle::Dense n2 = oracle::creator(3, 2) * oracle::annihilator(3, 2);
  const oracle::Dense lh4 = a13 * (oracle::Dense::Identity(8, 8) - 2.0 * n2);
  CHECK(oracle::max_abs(explicit_rep[3].to_dense() - lh4) == 0.0);
}

TEST_CASE("non-standard representation as an independent dense sum") {
  for (int n = 3; n <= 5; ++n) {
    const auto g = n == 3 ? gell_mann() : generalized_gell_mann(n);
    const auto gc = conjugate_rep(g, n);
    const auto rep = nssfr_un(g, n);
    const auto f1 = oracle::selective_of_number(n, 1);
    const auto fn = oracle::selective_of_number(n, n - 1);
    for (std::size_t i = 0; i < g.size(); i += 2) {
      const oracle::Dense expected = oracle::bilinear(g[i], n) * f1 + oracle::bilinear(gc[i], n) * fn;
      CHECK(oracle::max_abs(rep[i].to_dense() - expected) < 1e-12);
    }
  }
  CHECK_THROWS_AS(nssfr_un(generalized_gell_mann(2), 2), ArgumentError);
  std::vector<DenseMatrix> with_trace{DenseMatrix::Identity(3, 3)};
  CHECK_THROWS_AS(nssfr_un(GeneratorSet(with_trace, {"1"}), 3), ValidationError);
}

TEST_CASE("sector operators follow the descending binary order") {
  const auto s = sector_operators(4, 2);
  REQUIRE(s.ops.size() == 6);
  const LadderSet l(4);
  // O_1 = a_2 a_1, O_2 = a_3 a_1, O_3 = a_4 a_1, O_4 = a_3 a_2, O_5 = a_4 a_2, O_6 = a_4 a_3
  const int pairs[6][2] = {{2, 1}, {3, 1}, {4, 1}, {3, 2}, {4, 2}, {4, 3}};
  for (int k = 0; k < 6; ++k) {
    CHECK(s.ops[k] == l.annihilator(pairs[k][0]) * l.annihilator(pairs[k][1]));
  }
  CHECK(s.zetas[0].to_string() == "{1,2}");
  const auto s31 = sector_operators(3, 1);
  for (int k = 0; k < 3; ++k) CHECK(s31.ops[k] == annihilation(3, k + 1));
  CHECK(sector_operators(3, 0).ops.size() == 1);
  CHECK_THROWS_AS(sector_operators(3, 4), ArgumentError);

  // O+_i |vac> are orthonormal: Gram matrix is the identity
  for (int n = 2; n <= 6; ++n) {
    for (int m = 0; m <= n; ++m) {
      const auto so = sector_operators(n, m);
      std::vector<Eigen::VectorXcd> kets;
      for (const auto& o : so.ops) kets.push_back(o.adjoint().to_dense().col(0));
      for (std::size_t i = 0; i < kets.size(); ++i) {
        for (std::size_t j = 0; j < kets.size(); ++j) {
          CHECK(kets[i].dot(kets[j]) == Complex(i == j ? 1.0 : 0.0));
        }
      }
    }
  }
}

TEST_CASE("element operators act as matrix units on their sector") {
  const int n = 4, m = 2;
  const auto q = element_operators(n, m);
  REQUIRE(q.size() == 36);
  const auto so = sector_operators(n, m);
  const auto f = oracle::selective(n, m, n);
  for (std::size_t i = 0; i < 6; ++i) {
    const Eigen::VectorXcd ki = so.ops[i].adjoint().to_dense().col(0);
    for (std::size_t j = 0; j < 6; ++j) {
      const Eigen::VectorXcd kj = so.ops[j].adjoint().to_dense().col(0);
      oracle::Dense expected = ki * kj.adjoint();
      // the filled state is the one place the selective polynomial does not vanish
      if (i == j) expected(15, 15) += static_cast<double>(f);
      CHECK(oracle::max_abs(q[i * 6 + j].to_dense() - expected) == 0.0);
    }
  }
  CHECK(f == -3);
  CHECK_THROWS_AS(element_operators(4, 0), ArgumentError);
  CHECK_THROWS_AS(element_operators(4, 4), ArgumentError);
}

TEST_CASE("sector representation") {
  const auto g = generalized_gell_mann(6);
  const auto rep = rep_ucnm(g, 4, 2);
  CHECK(rep.size() == 35);
  CHECK(rep.meta.particles == 2);
  const auto idx = sector_indices(4, 2);
  for (std::size_t k = 0; k < rep.size(); k += 5) {
    const auto dense = rep[k].to_dense();
    for (std::size_t r = 0; r < 16; ++r) {
      for (std::size_t c = 0; c < 16; ++c) {
        const bool inside = std::find(idx.begin(), idx.end(), r) != idx.end() &&
                            std::find(idx.begin(), idx.end(), c) != idx.end();
        if (!inside) CHECK(dense(r, c) == Complex(0.0));
      }
    }
  }
  CHECK_THROWS_AS(rep_ucnm(generalized_gell_mann(5), 4, 2), ArgumentError);
  CHECK_THROWS_AS(rep_ucnm(g, 4, 0), ArgumentError);
}

TEST_CASE("mixed representation") {
  const auto g = generalized_gell_mann(3);
  const auto only_m = mixed_rep(g, g, 3, 1, true, false);
  const auto ucnm = rep_ucnm(g, 3, 1);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(only_m[i] == ucnm[i]);

  const auto both = mixed_rep(g, g, 3, 1, true, true);
  const auto nssfr = nssfr_un(gell_mann(), 3);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(max_abs_diff(both[i], nssfr[i]) < 1e-12);

  CHECK_THROWS_AS(mixed_rep(generalized_gell_mann(6), generalized_gell_mann(6), 4, 2, true, true),
                  DegeneracyError);
  CHECK_THROWS_AS(mixed_rep(g, g, 3, 1, false, false), ArgumentError);
  CHECK_THROWS_AS(mixed_rep(g, scaled(g, 2.0), 3, 1, true, true), ValidationError);
}

TEST_CASE("builders agree between the n and LadderSet overloads") {
  const LadderSet l(4);
  const auto g = generalized_gell_mann(4);
  const auto a = nssfr_un(g, 4);
  const auto b = nssfr_un(g, l);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}
