#include "cmreflex/cmreflex.hpp"
#include "cmreflex/errors.hpp"
#include "doctest.h"

using namespace cmreflex;

namespace {

NumberField qi() { return NumberField(UniPoly{1, 0, 1}); }
NumberField qm5() { return NumberField(UniPoly{5, 0, 1}); }
NumberField zeta5() { return NumberField(UniPoly{1, 1, 1, 1, 1}); }
NumberField quartic() { return NumberField(UniPoly{3, 0, 6, 0, 1}); }

NFElement el(const NumberField& k, std::vector<long> c) {
  std::vector<Rational> q(c.begin(), c.end());
  q.resize(static_cast<size_t>(k.degree()));
  return k.from_coords(q);
}

}  // namespace

TEST_CASE("cm recognition") {
  auto a = cm_check(qi());
  REQUIRE(a);
  CHECK(a->real_field.degree() == 1);
  CHECK(!cm_check(NumberField(UniPoly{-2, 0, 0, 1})));
  CHECK(!cm_check(NumberField(UniPoly{-2, 0, 1})));
  auto q = cm_check(quartic());
  REQUIRE(q);
  // F = Q(sqrt 6)
  CHECK(q->real_field.degree() == 2);
  CHECK(q->real_field.disc() * 6 > 0);
  Integer d = Order::maximal(q->real_field).disc();
  CHECK(d == 24);
  CHECK(q->conj(q->conj(q->field.gen())) == q->field.gen());
  CHECK(!q->conj.is_identity());
  for (size_t i = 0; i < 4; ++i) CHECK(identify_root(q->field, q->conj(q->field.gen()), i) == q->conj_index(i));
}

TEST_CASE("cm types") {
  CHECK(enumerate_cm_types(*cm_check(qi())).size() == 2);
  CHECK(enumerate_cm_types(*cm_check(zeta5())).size() == 4);
  auto types = enumerate_cm_types(*cm_check(quartic()));
  CHECK(types.size() == 4);
  for (auto& t : types) {
    CHECK(t.phi.size() == 2);
    for (size_t i : t.phi) CHECK(!t.contains(t.cm.conj_index(i)));
  }
  auto cm = *cm_check(zeta5());
  CHECK_THROWS_AS(make_cm_type(cm, {0, 1}), Error);  // 0 and 1 are conjugate
  CHECK_THROWS_AS(make_cm_type(cm, {1}), Error);
}

TEST_CASE("reflex fields") {
  auto cmi = *cm_check(qi());
  for (auto& t : enumerate_cm_types(cmi)) {
    ReflexData r = reflex_field(t);
    CHECK(r.reflex.degree() == 2);
    CHECK(r.reflex_type.phi.size() == 1);
    CHECK(Order::maximal(r.reflex).disc() == -4);
  }
  auto cm5 = *cm_check(zeta5());
  ReflexData r5 = reflex_field(make_cm_type(cm5, {1, 3}));
  CHECK(r5.reflex.degree() == 4);
  CHECK(r5.stabilizer.size() == 1);
  CHECK(Order::maximal(r5.reflex).disc() == 125);
  for (auto& t : enumerate_cm_types(*cm_check(quartic()))) {
    ReflexData r = reflex_field(t);
    CHECK(r.closure.L.order() == 8);
    CHECK(r.reflex.degree() == 4);
    CHECK(r.stabilizer.size() == 2);
    CHECK(r.coset_reps.size() == 2);
  }
}

TEST_CASE("reflex norm on elements") {
  auto cmi = *cm_check(qi());
  CMType t = make_cm_type(cmi, {identify_root(qi(), qi().gen(), 0)});
  ReflexNorm N(t, qi());
  CHECK(N(el(qi(), {3, 1})) == el(qi(), {3, 1}));
  NFElement n2 = N(el(qi(), {2}));
  CHECK(n2 == el(qi(), {2}));
  CHECK(n2 * cmi.conj(n2) == el(qi(), {4}));
  CHECK_THROWS_AS(N(qi().zero()), Error);

  // Q(zeta5), Phi = {zeta -> zeta, zeta -> zeta^2}: N(zeta) = zeta * sigma_2^-1(zeta) = zeta * zeta^3 = zeta^4
  auto cm5 = *cm_check(zeta5());
  NumberField k = zeta5();
  NFElement z = k.gen();
  std::vector<size_t> phi{identify_root(k, z, 0), identify_root(k, z.pow(2), 0)};
  CHECK(phi[0] != phi[1]);
  ReflexNorm N5(make_cm_type(cm5, phi), k);
  CHECK(N5(z) == z.pow(4));
  NFElement a = el(k, {2, -1, 3});
  CHECK(N5(a) * cm5.conj(N5(a)) == k.from_rational(a.norm()));

  // x^3 - 2 does not contain the conjugates of Q(i)
  CHECK_THROWS_AS(ReflexNorm(t, NumberField(UniPoly{-2, 0, 0, 1})), Error);
}

TEST_CASE("reflex norm on ideals") {
  auto cmi = *cm_check(qi());
  CMType t = make_cm_type(cmi, {identify_root(qi(), qi().gen(), 0)});
  ReflexNorm N(t, qi());
  FracIdeal a = FracIdeal::principal(cmi.order, el(qi(), {1, 1}));
  CHECK(N(a) == a);

  NumberField k = zeta5();
  auto cm5 = *cm_check(k);
  CMType t5 = make_cm_type(cm5, {1, 3});
  ReflexNorm N5(t5, k);
  auto primes = prime_split(11, cm5.order);
  REQUIRE(primes.size() == 4);
  FracIdeal img = N5(primes[0].ideal);
  CHECK(img * ideal_conjugate(img, cm5.conj) == FracIdeal::principal(cm5.order, k.from_rational(11)));
  // a product of two distinct primes above 11
  auto fac = factor_ideal(img);
  CHECK(fac.size() == 2);
  CHECK(N5(primes[0].ideal * primes[1].ideal) == img * N5(primes[1].ideal));
  CHECK(N5(FracIdeal::unit(cm5.order)).is_unit());
  NFElement x = el(k, {1, 2, 0, -1});
  CHECK(N5(FracIdeal::principal(cm5.order, x)) == FracIdeal::principal(cm5.order, N5(x)));

  // the reflex-side ideal norm through the closure
  ReflexData r = reflex_field(t5);
  for (auto& P : primes) CHECK(r.norm_ideal(ideal_image(P.ideal, r.closure.embeds[0].after(FieldMorphism(k, k.gen())), r.reflex_type.cm.order)).is_integral());
}

TEST_CASE("identity suite") {
  for (auto k : {qi(), qm5(), zeta5()}) {
    for (auto& t : enumerate_cm_types(*cm_check(k))) {
      ReflexReport rep = verify_reflex_identities(t, NumberField(), 100, 7);
      for (auto& c : rep.checks) {
        INFO(k.min_poly().to_string() << " " << t.to_string() << " " << c.name << " " << c.witness);
        CHECK(c.checked > 0);
        CHECK(c.passed());
      }
    }
  }
}

TEST_CASE("identity suite in the degree 8 closure") {
  for (auto& t : enumerate_cm_types(*cm_check(quartic()))) {
    ReflexReport rep = verify_reflex_identities(t, NumberField(), 50, 11);
    for (auto& c : rep.checks) {
      INFO(t.to_string() << " " << c.name << " " << c.witness);
      CHECK(c.checked > 0);
      CHECK(c.passed());
    }
  }
}
