#include <random>

#include "cmreflex/errors.hpp"
#include "cmreflex/polar.hpp"
#include "doctest.h"

using namespace cmreflex;

namespace {

NFElement el(const NumberField& k, std::vector<long> c) {
  std::vector<Rational> q(c.begin(), c.end());
  q.resize(static_cast<size_t>(k.degree()));
  return k.from_coords(q);
}

NFElement random_elem(const NumberField& k, std::mt19937_64& rng, long h) {
  std::uniform_int_distribution<long> d(-h, h);
  while (true) {
    std::vector<Rational> c;
    for (int i = 0; i < k.degree(); ++i) c.emplace_back(d(rng));
    NFElement x = k.from_coords(c);
    if (!x.is_zero()) return x;
  }
}

TypeQuadruple transform(const TypeQuadruple& q, const NFElement& a) {
  return {q.type, ideal_scale(q.ideal, a), q.t / (a * q.type.cm.conj(a))};
}

}  // namespace

TEST_CASE("riemann elements") {
  NumberField k(UniPoly{1, 0, 1});
  CMField cm = *cm_check(k);
  size_t plus = k.roots().roots[0].im_positive() ? 0 : 1;  // root index of +i
  CHECK(find_riemann_element(make_cm_type(cm, {plus})).alpha == k.gen());
  CHECK(find_riemann_element(make_cm_type(cm, {1 - plus})).alpha == -k.gen());

  for (auto p : {UniPoly{5, 0, 1}, UniPoly{1, 1, 1, 1, 1}, UniPoly{3, 0, 6, 0, 1}}) {
    CMField c = *cm_check(NumberField(p));
    for (auto& t : enumerate_cm_types(c)) {
      RiemannElement r = find_riemann_element(t);
      CHECK(r.alpha == find_riemann_element(t).alpha);
      CHECK(validate_quadruple({t, FracIdeal::unit(c.order), r.alpha}).valid);
    }
  }
}

TEST_CASE("quadruple validation") {
  NumberField k(UniPoly{1, 0, 1});
  CMField cm = *cm_check(k);
  CMType t = make_cm_type(cm, {k.roots().roots[0].im_positive() ? 0u : 1u});
  FracIdeal one = FracIdeal::unit(cm.order);
  CHECK(validate_quadruple({t, one, k.gen()}).valid);
  auto neg = validate_quadruple({t, one, -k.gen()});
  CHECK(!neg.valid);
  CHECK(neg.problems.size() == 1);
  CHECK(!validate_quadruple({t, one, k.one()}).valid);
  CHECK(!validate_quadruple({t, one, k.zero()}).valid);
}

TEST_CASE("valid t closed under totally positive scaling") {
  std::mt19937_64 rng(5);
  for (auto p : {UniPoly{3, 0, 6, 0, 1}, UniPoly{1, 1, 1, 1, 1}}) {
    CMField c = *cm_check(NumberField(p));
    for (auto& t : enumerate_cm_types(c)) {
      NFElement alpha = find_riemann_element(t).alpha;
      for (int s = 0; s < 20; ++s) {
        NFElement b = random_elem(c.real_field, rng, 4);
        NFElement a = c.real_incl(b * b + c.real_field.one());
        CHECK(validate_quadruple({t, FracIdeal::unit(c.order), a * alpha}).valid);
      }
    }
  }
}

TEST_CASE("quadruple equivalence") {
  NumberField k(UniPoly{1, 0, 1});
  CMField cm = *cm_check(k);
  CMType t = make_cm_type(cm, {k.roots().roots[0].im_positive() ? 0u : 1u});
  TypeQuadruple q1{t, FracIdeal::unit(cm.order), k.gen()};
  auto w = quadruples_equivalent(q1, transform(q1, el(k, {1, 1})));
  REQUIRE(w);
  CHECK(*w == el(k, {1, 1}));
  CHECK(!quadruples_equivalent(q1, {t, q1.ideal, el(k, {0, 2})}));
  auto self = quadruples_equivalent(q1, q1);
  REQUIRE(self);
  CHECK(*self == k.one());
  // different ideal class in Q(sqrt -5): never equivalent to the unit ideal
  NumberField k5(UniPoly{5, 0, 1});
  CMField c5 = *cm_check(k5);
  CMType t5 = make_cm_type(c5, {k5.roots().roots[0].im_positive() ? 0u : 1u});
  FracIdeal p2 = prime_split(2, c5.order)[0].ideal;
  CHECK(!quadruples_equivalent({t5, FracIdeal::unit(c5.order), k5.gen()}, {t5, p2, k5.gen()}));
}

TEST_CASE("equivalence is an equivalence relation on samples") {
  std::mt19937_64 rng(17);
  for (auto p : {UniPoly{1, 0, 1}, UniPoly{5, 0, 1}, UniPoly{3, 0, 6, 0, 1}, UniPoly{1, 1, 1, 1, 1}}) {
    CMField c = *cm_check(NumberField(p));
    for (auto& t : enumerate_cm_types(c)) {
      NFElement alpha = find_riemann_element(t).alpha;
      TypeQuadruple q1{t, FracIdeal::unit(c.order), alpha};
      for (int s = 0; s < 5; ++s) {
        NFElement a = random_elem(c.field, rng, 2), b = random_elem(c.field, rng, 2);
        TypeQuadruple q2 = transform(q1, a), q3 = transform(q2, b);
        CHECK(validate_quadruple(q2).valid);
        auto w12 = quadruples_equivalent(q1, q2);
        auto w21 = quadruples_equivalent(q2, q1);
        auto w23 = quadruples_equivalent(q2, q3);
        auto w13 = quadruples_equivalent(q1, q3);
        REQUIRE((w12 && w21 && w23 && w13));
        for (auto& [x, y, w] : {std::tuple{q1, q2, *w12}, {q2, q1, *w21}, {q1, q3, *w13}}) {
          CHECK(ideal_scale(x.ideal, w) == y.ideal);
          CHECK(x.t / (w * c.conj(w)) == y.t);
        }
        // the witness composition is itself a witness
        NFElement comp = *w12 * *w23;
        CHECK(ideal_scale(q1.ideal, comp) == q3.ideal);
        CHECK(q1.t / (comp * c.conj(comp)) == q3.t);
        // a scaling by 2 is not realizable by any unit
        CHECK(!quadruples_equivalent(q1, {t, q1.ideal, alpha * Rational(2)}));
      }
    }
  }
}
