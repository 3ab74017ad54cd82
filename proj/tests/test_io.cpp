#include "cmreflex/errors.hpp"
#include "cmreflex/io.hpp"
#include "doctest.h"

using namespace cmreflex;
using io::json;

namespace {

Errc parse_code(const json& j) {
  try {
    io::field_from_json(j);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("numbers") {
  CHECK(io::to_json(Integer(-7)) == json(-7));
  Integer big = pow(Integer(10), 30);
  CHECK(io::to_json(big) == json(big.get_str()));
  CHECK(io::integer_from_json(io::to_json(big)) == big);
  CHECK(io::to_json(frac(3, -6)) == json("-1/2"));
  CHECK(io::rational_from_json(json("4/6")) == frac(2, 3));
  CHECK_THROWS_AS(io::rational_from_json(json(1.5)), Error);
}

TEST_CASE("field records") {
  NumberField k = io::field_from_json(json::parse(R"({"min_poly": [1, 1, 1, 1, 1], "name": "z5"})"));
  CHECK(k.degree() == 4);
  CHECK(k.name() == "z5");
  CHECK(io::field_from_json(io::to_json(k)) == k);
  NumberField h = io::field_from_json(json::parse(R"({"min_poly": ["1/4", 0, 1]})"));
  CHECK(h.min_poly().coeff(0) == frac(1, 4));
  CHECK(parse_code(json::parse(R"({"poly": [1, 0, 1]})")) == Errc::Parse);
  CHECK(parse_code(json::parse(R"({"min_poly": [1, 0, 2]})")) == Errc::Parse);
  CHECK(parse_code(json::parse(R"({"min_poly": [-1, 0, 1]})")) == Errc::NotIrreducible);
}

TEST_CASE("ideal round trips") {
  NumberField k(UniPoly{5, 0, 1});
  Order o = Order::maximal(k);
  for (long p : {2L, 3L, 7L, 29L})
    for (const auto& P : prime_split(p, o)) {
      json j = io::to_json(P);
      CHECK(j["p"] == p);
      CHECK(io::ideal_from_json(o, j) == P.ideal);
      FracIdeal inv = ideal_inverse(P.ideal);
      CHECK(io::ideal_from_json(o, io::to_json(inv)) == inv);
    }
  CHECK_THROWS_AS(io::ideal_from_json(o, json::parse(R"({"den": 1, "hnf": [[1]]})")), Error);
}

TEST_CASE("curve records") {
  json r = json::parse(R"({"name": "c", "a4": -1, "a6": 0, "cm_disc": -4,
                          "cm_endo": {"gamma_minpoly": [1, 0, 1], "x_power": 2, "y_power": 1}})");
  CMCurveQ c = io::curve_from_json(r);
  CHECK(c.cm.field.degree() == 2);
  CHECK(c.endo.x_power == 2);
  r["cm_disc"] = -3;
  CHECK_THROWS_AS(io::curve_from_json(r), Error);
  r.erase("a6");
  CHECK_THROWS_AS(io::curve_from_json(r), Error);
}

TEST_CASE("cm-type and group reports") {
  CMField cm = *cm_check(NumberField(UniPoly{1, 0, 1}));
  CMType t = make_cm_type(cm, {1});
  json j = io::to_json(t);
  CHECK(j["phi"] == json::array({1}));
  CHECK(j["field"]["min_poly"] == json::array({1, 0, 1}));
  RayClassGroup G = ray_class_group(cm, FracIdeal::principal(cm.order, cm.field.from_rational(5)));
  json g = io::to_json(G);
  CHECK(g["order"] == 4);
  CHECK(g["modulus"]["hnf"] == json::array({json::array({5, 0}), json::array({0, 5})}));
}
