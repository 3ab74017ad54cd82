#include <random>

#include "cmreflex/errors.hpp"
#include "cmreflex/latticeav.hpp"
#include "doctest.h"

using namespace cmreflex;

namespace {

CMType first_type(const UniPoly& f) { return enumerate_cm_types(*cm_check(NumberField(f)))[0]; }

NFElement el(const NumberField& k, std::vector<long> c) {
  std::vector<Rational> q(c.begin(), c.end());
  q.resize(static_cast<size_t>(k.degree()));
  return k.from_coords(q);
}

FracIdeal gens(const Order& o, std::vector<NFElement> g) { return FracIdeal::from_generators(o, g); }

// number of reduced positive definite forms of discriminant d < 0
long form_class_number(long d) {
  long h = 0;
  for (long a = 1; 3 * a * a <= -d; ++a)
    for (long b = -a + 1; b <= a; ++b) {
      long num = b * b - d;
      if (num % (4 * a) != 0) continue;
      long c = num / (4 * a);
      if (c < a) continue;
      if (c == a && b < 0) continue;
      if (std::gcd(std::gcd(a, std::labs(b)), c) != 1) continue;
      ++h;
    }
  return h;
}

bool fundamental(long d) {
  auto squarefree = [](long x) {
    for (long p = 2; p * p <= x; ++p)
      if (x % (p * p) == 0) return false;
    return true;
  };
  long D = -d;
  if (D % 4 == 3) return squarefree(D);
  if (D % 4 == 0) {
    long q = D / 4;
    return (q % 4 == 1 || q % 4 == 2) && squarefree(q);
  }
  return false;
}

UniPoly quadratic_of_disc(long d) {
  if (d % 4 == 0) return UniPoly{-d / 4, 0, 1};
  return UniPoly{(1 - d) / 4, -1, 1};
}

}  // namespace

TEST_CASE("a-multiplications") {
  CMType t = first_type(UniPoly{1, 0, 1});
  const Order& o = t.cm.order;
  NumberField k = t.cm.field;
  LatticeAV A(t, FracIdeal::unit(o));
  FracIdeal a = FracIdeal::principal(o, el(k, {1, 1}));
  AMult l = amul(A, a);
  CHECK(l.target.lattice == ideal_inverse(a));
  CHECK(amul_degree(l) == 2);
  AMult id = amul(A, FracIdeal::unit(o));
  CHECK(id.target == A);
  CHECK(amul_degree(id) == 1);
  CHECK_THROWS_AS(amul(A, ideal_inverse(a)), Error);

  CHECK(elem_degree(A, el(k, {2})) == 4);
  CHECK(elem_degree(A, el(k, {1, 1})) == 2);
  CHECK_THROWS_AS(elem_degree(A, k.zero()), Error);

  AMult l2 = amul(l.target, FracIdeal::principal(o, el(k, {1, -1})));
  AMult c = compose(l, l2);
  CHECK(c.ideal == FracIdeal::principal(o, el(k, {2})));
  CHECK(amul_degree(c) == 4);
  CHECK(compose(l, amul(l.target, FracIdeal::unit(o))).ideal == a);
  CHECK_THROWS_AS(compose(l, l), Error);

  CHECK(hom_ideal(A, A) == FracIdeal::unit(o));
  CHECK(hom_ideal(A, LatticeAV(t, ideal_inverse(a))) == ideal_inverse(a));
  CHECK(factor_through(l, amul(A, FracIdeal::principal(o, el(k, {2})))));
  CHECK(!factor_through(amul(A, FracIdeal::principal(o, el(k, {3}))), amul(A, FracIdeal::principal(o, el(k, {2})))));

  CMType t5 = first_type(UniPoly{1, 1, 1, 1, 1});
  CHECK(elem_degree(LatticeAV(t5, FracIdeal::unit(t5.cm.order)), t5.cm.field.gen()) == 1);
}

TEST_CASE("a-multiplications over Z[sqrt -5]") {
  CMType t = first_type(UniPoly{5, 0, 1});
  const Order& o = t.cm.order;
  NumberField k = t.cm.field;
  LatticeAV A(t, FracIdeal::unit(o));
  FracIdeal p = gens(o, {el(k, {2}), el(k, {1, 1})});
  AMult l = amul(A, p);
  CHECK(l.target.lattice == ideal_inverse(p));
  CHECK(!isomorphism(A, l.target));
  CHECK(amul_degree(l) == 2);
  AMult c = compose(l, amul(l.target, p));
  CHECK(c.ideal == FracIdeal::principal(o, el(k, {2})));
  CHECK(amul_degree(c) == 4);
  CHECK(hom_ideal(A, l.target) == ideal_inverse(p));
  CHECK(min_isogeny_degree(A, l.target) == 2);
  CHECK(factor_through(l, amul(A, FracIdeal::principal(o, el(k, {2})))));
  // principal collapse
  NFElement x = el(k, {1, 2});
  AMult px = amul(A, FracIdeal::principal(o, x));
  auto w = isomorphism(A, px.target);
  REQUIRE(w);
  CHECK(ideal_scale(A.lattice, *w) == px.target.lattice);
}

TEST_CASE("degree law on samples") {
  std::mt19937_64 rng(3);
  for (auto f : {UniPoly{1, 0, 1}, UniPoly{5, 0, 1}, UniPoly{1, 1, 1, 1, 1}, UniPoly{3, 0, 6, 0, 1}}) {
    CMType t = first_type(f);
    const Order& o = t.cm.order;
    std::uniform_int_distribution<long> d(-5, 5);
    auto rnd = [&] {
      std::vector<Rational> c;
      for (int i = 0; i < o.degree(); ++i) c.emplace_back(d(rng));
      NFElement x = o.field().from_coords(c);
      return x.is_zero() ? o.field().one() : x;
    };
    auto ideal = [&] {
      auto b = FracIdeal::unit(o).basis();
      NFElement x = b[0] * Rational(d(rng)), y = b[0] * Rational(d(rng));
      for (auto& e : b) {
        x += e * Rational(d(rng));
        y += e * Rational(d(rng));
      }
      if (x.is_zero()) x = o.field().one();
      return gens(o, {x, y});
    };
    LatticeAV A(t, FracIdeal::principal(o, rnd()));
    for (int s = 0; s < 30; ++s) {
      AMult l = amul(A, ideal());
      AMult m = amul(l.target, ideal());
      CHECK(amul_degree(compose(l, m)) == amul_degree(l) * amul_degree(m));
      CHECK(Rational(amul_degree(l)) == numerical_norm(l.ideal));
    }
  }
}

TEST_CASE("isogeny classes") {
  CHECK(isogeny_classes(first_type(UniPoly{1, 0, 1})).size() == 1);
  auto c5 = isogeny_classes(first_type(UniPoly{5, 0, 1}));
  REQUIRE(c5.size() == 2);
  CHECK(c5[0].lattice.is_unit());
  const Order& o5 = c5[0].type.cm.order;
  CHECK(c5[1].lattice == gens(o5, {el(o5.field(), {2}), el(o5.field(), {1, 1})}));
  CHECK(isogeny_classes(first_type(UniPoly{6, -1, 1})).size() == 3);  // disc -23
  CHECK(isogeny_classes(first_type(UniPoly{1, 1, 1, 1, 1})).size() == 1);
  for (long d = -3; d > -100; --d) {
    if (!fundamental(d)) continue;
    auto reps = isogeny_classes(first_type(quadratic_of_disc(d)));
    INFO("d = " << d);
    CHECK(static_cast<long>(reps.size()) == form_class_number(d));
    for (size_t i = 0; i < reps.size(); ++i)
      for (size_t j = i + 1; j < reps.size(); ++j) CHECK(!isomorphism(reps[i], reps[j]));
  }
}

TEST_CASE("torsion modules") {
  CMType t = first_type(UniPoly{1, 0, 1});
  LatticeAV A(t, FracIdeal::unit(t.cm.order));
  TorsionModule T2 = torsion(A, 2);
  CHECK(T2.cardinality() == 4);
  CHECK(T2.generator == ZVector{1, 0});
  TorsionModule T1 = torsion(A, 1);
  CHECK(T1.cardinality() == 1);

  CMType t5 = first_type(UniPoly{1, 1, 1, 1, 1});
  TorsionModule Z2 = torsion(LatticeAV(t5, FracIdeal::unit(t5.cm.order)), 2);
  CHECK(Z2.cardinality() == 16);
  CHECK(prime_split(2, t5.cm.order)[0].f == 4);
}

TEST_CASE("commutants on quadratic torsion") {
  for (auto f : {UniPoly{1, 0, 1}, UniPoly{5, 0, 1}, UniPoly{1, -1, 1}, UniPoly{6, -1, 1}}) {
    for (auto& L : isogeny_classes(first_type(f)))
      for (long m = 1; m <= 4; ++m) {
        INFO(f.to_string() << " m = " << m);
        CHECK(commutant_is_scalar(torsion(L, m)));
      }
  }
}

TEST_CASE("isogenies of degree prime to m are bijective on torsion") {
  CMType t = first_type(UniPoly{5, 0, 1});
  const Order& o = t.cm.order;
  LatticeAV A(t, FracIdeal::unit(o));
  for (long p : {2, 3, 7}) {
    for (auto& P : prime_split(p, o)) {
      AMult l = amul(A, P.ideal);
      for (long m = 2; m <= 9; ++m) {
        bool coprime = gcd(amul_degree(l), Integer(m)) == 1;
        CHECK(is_bijection_mod(induced_map(l, m), m) == coprime);
      }
    }
  }
}
