#include <random>

#include "cmreflex/errors.hpp"
#include "cmreflex/factor.hpp"
#include "cmreflex/matrix.hpp"
#include "cmreflex/poly.hpp"
#include "doctest.h"

using namespace cmreflex;

TEST_CASE("rational parsing and helpers") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational("-7") == -7);
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK(floor_div(-7, 2) == -4);
  CHECK(mod(-7, 5) == 3);
  CHECK(isqrt_ceil(17) == 5);
  Rational s = sqrt_upper(2, 64);
  CHECK(s * s >= 2);
  CHECK(s * s - 2 < Rational(1, 1000000));
  auto f = factor_integer(Integer(2 * 2 * 3) * Integer("1000000007") * Integer("998244353"));
  CHECK(f.size() == 4);
}

TEST_CASE("polynomial arithmetic") {
  UniPoly f{-1, 0, 1};
  auto [q, r] = divmod(f, UniPoly{-1, 1});
  CHECK(q == UniPoly{1, 1});
  CHECK(r.is_zero());
  CHECK(gcd(f, UniPoly{1, 1}) == UniPoly{1, 1});
  CHECK(discriminant(UniPoly{1, 0, 1}) == -4);
  CHECK(discriminant(UniPoly{1, 1, 1, 1, 1}) == 125);
  CHECK(resultant(UniPoly{1, 0, 1}, UniPoly{-1, 0, 1}) == 4);
  auto sq = squarefree_decomposition(UniPoly{1, 1} * UniPoly{1, 1} * UniPoly{-2, 1});
  REQUIRE(sq.size() == 2);
  CHECK(sq[0].second == 1);
  CHECK(sq[1].first == UniPoly{1, 1});
  UniPoly p = interpolate({0, 1, 2, 3}, {1, 2, 9, 28});
  CHECK(p == UniPoly{1, 0, 0, 1});
}

TEST_CASE("factorization examples") {
  auto f1 = factor_rational_poly(UniPoly{-1, 0, 1});
  REQUIRE(f1.size() == 2);
  CHECK(f1[0].first == UniPoly{-1, 1});
  CHECK(f1[1].first == UniPoly{1, 1});
  CHECK(is_irreducible(UniPoly{1, 0, 1}));
  CHECK(is_irreducible(UniPoly{3, 0, 6, 0, 1}));
  CHECK(!is_irreducible(UniPoly{4, 0, 0, 0, 1}));  // (x^2+2x+2)(x^2-2x+2)
  CHECK(is_irreducible(UniPoly{1, 1, 1, 1, 1}));
  // Swinnerton-Dyer style polynomial: irreducible over Q, splits mod every prime
  CHECK(is_irreducible(UniPoly{1, 0, -10, 0, 1}));
}

namespace {

// Independent irreducibility test for low-degree integer polynomials:
// no rational roots (rational root theorem) and, for degree 4, no
// monic quadratic factor with integer coefficients (bounded search).
UniPoly random_irreducible(std::mt19937_64& rng, int deg) {
  std::uniform_int_distribution<long> d(-6, 6);
  while (true) {
    std::vector<Rational> c(static_cast<size_t>(deg) + 1);
    for (int i = 0; i < deg; ++i) c[static_cast<size_t>(i)] = d(rng);
    c.back() = 1;
    UniPoly f(c);
    if (deg == 1) return f;
    if (f.coeff(0) == 0) continue;
    bool root = false;
    Integer c0 = abs(f.coeff(0).get_num());
    for (Integer r = 1; r <= c0 && !root; ++r) {
      if (c0 % r != 0) continue;
      if (f.eval(Rational(r)) == 0 || f.eval(Rational(-r)) == 0) root = true;
    }
    if (root) continue;
    if (deg <= 3) return f;
    // deg 4: test all monic quadratics x^2+bx+c with c | c0.
    bool split = false;
    for (long cc = -c0.get_si(); cc <= c0.get_si() && !split; ++cc) {
      if (cc == 0 || c0.get_si() % cc != 0) continue;
      for (long b = -40; b <= 40 && !split; ++b)
        if ((f % UniPoly{cc, b, 1}).is_zero()) split = true;
    }
    if (!split) return f;
  }
}

}  // namespace

TEST_CASE("factorization round trip on random products") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<int> nf(1, 4), dg(1, 4), mult(1, 2);
  for (int trial = 0; trial < 1000; ++trial) {
    UniPoly prod = UniPoly::constant(1);
    int parts = nf(rng);
    for (int k = 0; k < parts; ++k) {
      UniPoly g = random_irreducible(rng, dg(rng));
      int m = mult(rng);
      for (int j = 0; j < m; ++j) prod *= g;
    }
    prod *= Rational(3, 7);
    auto fac = factor_rational_poly(prod);
    UniPoly back = UniPoly::constant(prod.lead());
    for (auto& [g, e] : fac) {
      CHECK(g.is_monic());
      for (int j = 0; j < e; ++j) back *= g;
    }
    REQUIRE(back == prod);
  }
}

TEST_CASE("factor mod p") {
  auto f = factor_mod_p({1, 0, 1}, 5);
  CHECK(f.size() == 2);
  auto g = factor_mod_p({1, 0, 1}, 2);
  REQUIRE(g.size() == 1);
  CHECK(g[0].second == 2);
  auto h = factor_mod_p({1, 0, 1}, 7);
  REQUIRE(h.size() == 1);
  CHECK(h[0].first.size() == 3);
}

TEST_CASE("integer linear algebra") {
  ZMatrix a(2, 3);
  a(0, 0) = 2; a(0, 1) = 3; a(0, 2) = 4;
  a(1, 0) = 0; a(1, 1) = 6; a(1, 2) = 9;
  ZMatrix h = hnf(a);
  CHECK(h(1, 0) == 0);
  CHECK(det(h) == 3);  // index of lattice spanned by columns
  // HNF is canonical: a unimodular column change gives the same matrix.
  ZMatrix b(2, 3);
  for (int i = 0; i < 2; ++i) {
    b(i, 0) = a(i, 0) + a(i, 1);
    b(i, 1) = a(i, 1);
    b(i, 2) = a(i, 2) - 5 * a(i, 0);
  }
  CHECK(hnf(b) == h);
  CHECK(hnf(b, 6) == h);
  auto x = hnf_solve(h, ZVector{Integer(4), Integer(9)});
  REQUIRE(x);
  CHECK(h * *x == ZVector{Integer(4), Integer(9)});

  ZMatrix k = integer_kernel(a);
  CHECK(k.cols() == 1);
  ZMatrix prod = a * k;
  CHECK(prod(0, 0) == 0);
  CHECK(prod(1, 0) == 0);

  ZMatrix m(2, 2);
  m(0, 0) = 2; m(0, 1) = 4; m(1, 0) = 6; m(1, 1) = 8;
  auto sf = smith_form(m);
  CHECK(sf.diag == std::vector<Integer>{Integer(2), Integer(4)});
  ZMatrix d = sf.U * m * sf.V;
  CHECK(d(0, 0) == 2);
  CHECK(d(1, 1) == 4);
  CHECK(d(0, 1) == 0);

  QMatrix q = to_rational(m);
  QMatrix qi = inverse(q);
  CHECK(q * qi == QMatrix::identity(2));
  CHECK(det(q) == -8);
  CHECK(kernel_mod_p({{1, 2}, {2, 4}}, 2, 5).size() == 1);
}

TEST_CASE("random HNF consistency") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> d(-20, 20);
  for (int t = 0; t < 200; ++t) {
    size_t n = 1 + t % 4;
    ZMatrix a(n, n + 2);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n + 2; ++j) a(i, j) = d(rng);
    ZMatrix sub(n, n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) sub(i, j) = a(i, j);
    if (det(sub) == 0) continue;
    ZMatrix h = hnf(a);
    for (size_t i = 0; i < n; ++i) {
      CHECK(h(i, i) > 0);
      for (size_t j = i + 1; j < n; ++j) CHECK((h(i, j) >= 0 && h(i, j) < h(i, i)));
    }
    for (size_t j = 0; j < n + 2; ++j) CHECK(hnf_solve(h, a.column(j)).has_value());
    // every HNF column lies in the span of a (rational solve gives integrality via SNF of a)
    auto sf = smith_form(a);
    Integer idx = 1;
    for (auto& e : sf.diag) idx *= e;
    CHECK(det(h) == idx);
  }
}
