#include "cmreflex/errors.hpp"
#include "cmreflex/stverify.hpp"
#include "doctest.h"

using namespace cmreflex;

namespace {

CMCurveQ curve_i() { return make_cm_curve("y^2 = x^3 - x", -1, 0, CMEndo{UniPoly{1, 0, 1}, 2, 1}); }
CMCurveQ curve_rho() { return make_cm_curve("y^2 = x^3 + 1", 0, 1, CMEndo{UniPoly{1, 1, 1}, 1, 0}); }

}  // namespace

TEST_CASE("point counts") {
  CHECK(count_points({5, -1, 0}) == 8);
  CHECK(count_points({5, 0, 1}) == 6);
  CHECK(count_points({7, -1, 0}) == 8);
  CHECK_THROWS_AS(count_points({1000003, 1, 1}), Error);
  CHECK_THROWS_AS(count_points({5, 0, 0}), Error);
  for (long p : primes_up_to(400)) {
    if (p < 5) continue;
    for (auto [a4, a6] : {std::pair{-1L, 0L}, {0L, 1L}, {2L, 3L}}) {
      if ((4 * a4 * a4 * a4 + 27 * a6 * a6) % p == 0) continue;
      long ap = p + 1 - count_points({p, a4, a6});
      CHECK(ap * ap <= 4 * p);
    }
  }
}

TEST_CASE("cm endomorphisms reduce correctly") {
  for (long p : {5L, 13L, 17L, 29L, 7L, 19L, 31L}) {
    CHECK(check_cm_endo(curve_i(), p, 3));
    CHECK(check_cm_endo(curve_rho(), p, 3));
  }
  // a wrong description is caught
  CMCurveQ bad = curve_i();
  bad.endo.y_power = 0;
  CHECK(!check_cm_endo(bad, 13, 3));
}

TEST_CASE("frobenius elements") {
  CMCurveQ c = curve_i();
  FrobeniusData F = frobenius_element(c, 13);
  CHECK(F.pi * c.cm.conj(F.pi) == c.cm.field.from_rational(13));
  CHECK(F.pi.trace() == F.trace);
  CHECK(F.trace == 13 + 1 - count_points({13, -1, 0}));
  CHECK(frobenius_element(c, 13).pi == F.pi);
  FrobeniusData F5 = frobenius_element(c, 5);
  CHECK(F5.pi * c.cm.conj(F5.pi) == c.cm.field.from_rational(5));
  CHECK_THROWS_AS(frobenius_element(c, 3), Error);
  try {
    frobenius_element(c, 7);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::Supersingular);
  }
  FrobeniusData R = frobenius_element(curve_rho(), 7);
  CHECK(R.pi.norm() == 7);
}

TEST_CASE("ideal formula on the curve corpus") {
  for (const CMCurveQ& c : {curve_i(), curve_rho()}) {
    CMType phi = identity_type(c.cm);
    long checked = 0;
    for (long p : primes_up_to(300)) {
      if (p < 5) continue;
      FrobeniusData F;
      try {
        F = frobenius_element(c, p);
      } catch (const Error& e) {
        CHECK(e.code() == Errc::Supersingular);
        continue;
      }
      INFO(c.name << " p = " << p);
      CHECK(F.pi * c.cm.conj(F.pi) == c.cm.field.from_rational(p));
      CHECK(st_check_ideal(F, phi, c.cm.field, F.prime_above));
      FrobeniusData G = F;
      G.pi = c.cm.conj(F.pi);
      CHECK(!st_check_ideal(G, phi, c.cm.field, F.prime_above));
      ValuationReport rep = st_check_valuations(F, phi, c.cm.field, F.prime_above);
      CHECK(rep.all_ok());
      CHECK(rep.rows.size() == 2);
      ++checked;
    }
    CHECK(checked > 20);
  }
}

TEST_CASE("valuation rows at 13") {
  CMCurveQ c = curve_i();
  FrobeniusData F = frobenius_element(c, 13);
  ValuationReport rep = st_check_valuations(F, identity_type(c.cm), c.cm.field, F.prime_above);
  REQUIRE(rep.rows.size() == 2);
  std::vector<long> ords{rep.rows[0].ord, rep.rows[1].ord};
  std::sort(ords.begin(), ords.end());
  CHECK(ords == std::vector<long>{0, 1});
  for (auto& r : rep.rows) {
    CHECK(r.h == 1);
    CHECK(r.phi_h == r.ord);
  }
  // inert prime in symbolic mode
  PrimeIdeal P7 = prime_split(7, c.cm.order)[0];
  ValuationReport inert = st_check_valuations(st_rhs(identity_type(c.cm), c.cm.field, P7), identity_type(c.cm),
                                              c.cm.field, P7);
  CHECK(inert.all_ok());
  CHECK(!inert.note.empty());
}

TEST_CASE("right-hand side") {
  NumberField qi(UniPoly{1, 0, 1});
  CMField cmi = *cm_check(qi);
  auto P13 = prime_split(13, cmi.order)[0];
  CHECK(st_rhs(identity_type(cmi), qi, P13) == P13.ideal);
  CHECK_THROWS_AS(st_rhs(identity_type(cmi), qi, prime_split(2, cmi.order)[0]), Error);

  NumberField z5(UniPoly{1, 1, 1, 1, 1});
  CMField cm5 = *cm_check(z5);
  CMType t = make_cm_type(cm5, {1, 3});
  FracIdeal r11 = st_rhs(t, z5, prime_split(11, cm5.order)[0]);
  CHECK(numerical_norm(r11) == 121);
  CHECK(factor_ideal(r11).size() == 2);
  FracIdeal r2 = st_rhs(t, z5, prime_split(2, cm5.order)[0]);
  CHECK(numerical_norm(r2) == 256);
  // symbolic valuation identities for every type and small unramified prime
  for (auto& ty : enumerate_cm_types(cm5))
    for (long p : {2L, 3L, 11L, 19L, 31L, 41L})
      for (auto& P : prime_split(p, cm5.order)) {
        ValuationReport rep = st_check_valuations(st_rhs(ty, z5, P), ty, z5, P);
        CHECK(rep.all_ok());
      }
}

TEST_CASE("frobenius class check") {
  CHECK(frobenius_class_check(curve_i(), 13, 4));
  CHECK(frobenius_class_check(curve_rho(), 7, 5));
  CHECK_THROWS_AS(frobenius_class_check(curve_i(), 3, 2), Error);
}
