#include "cmreflex/io.hpp"

#include <fstream>
#include <limits>

#include "cmreflex/errors.hpp"

namespace cmreflex::io {

json to_json(const Integer& z) {
  if (z.fits_slong_p()) return json(z.get_si());
  return json(z.get_str());
}

json to_json(const Rational& q) {
  if (q.get_den() == 1) return to_json(q.get_num());
  return json(to_string(q));
}

Integer integer_from_json(const json& j) {
  if (j.is_number_integer()) return Integer(static_cast<long>(j.get<long long>()));
  if (j.is_string()) {
    Integer z;
    if (z.set_str(j.get<std::string>(), 10) != 0) fail(Errc::Parse, "bad integer: " + j.dump());
    return z;
  }
  fail(Errc::Parse, "expected integer, got " + j.dump());
}

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(integer_from_json(j));
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error& e) {
      fail(Errc::Parse, "bad rational: " + j.dump());
    }
  }
  fail(Errc::Parse, "expected integer or \"p/q\", got " + j.dump());
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::Parse, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(Errc::Parse, path + ": " + e.what());
  }
}

NumberField field_from_json(const json& j) {
  if (!j.is_object() || !j.contains("min_poly") || !j["min_poly"].is_array())
    fail(Errc::Parse, "field record needs a \"min_poly\" array");
  std::vector<Rational> c;
  for (const auto& x : j["min_poly"]) c.push_back(rational_from_json(x));
  std::string name = j.value("name", std::string());
  UniPoly f(std::move(c));
  if (f.degree() < 1) fail(Errc::Parse, "min_poly must have positive degree");
  if (!f.is_monic()) fail(Errc::Parse, "min_poly must be monic");
  return NumberField(f, name);
}

NumberField load_field(const std::string& path) { return field_from_json(read_json_file(path)); }

json to_json(const NumberField& k) {
  json c = json::array();
  for (const auto& x : k.min_poly().coeffs()) c.push_back(to_json(x));
  json out{{"min_poly", c}};
  if (!k.name().empty()) out["name"] = k.name();
  return out;
}

json to_json(const NFElement& a) {
  json c = json::array();
  for (const auto& x : a.coords()) c.push_back(to_json(x));
  return c;
}

NFElement element_from_json(const NumberField& k, const json& j) {
  if (!j.is_array() || j.size() != static_cast<size_t>(k.degree()))
    fail(Errc::Parse, "element needs " + std::to_string(k.degree()) + " coordinates");
  std::vector<Rational> c;
  for (const auto& x : j) c.push_back(rational_from_json(x));
  return k.from_coords(std::move(c));
}

json to_json(const FracIdeal& a) {
  json rows = json::array();
  const ZMatrix& h = a.hnf();
  for (size_t i = 0; i < h.rows(); ++i) {
    json r = json::array();
    for (size_t j = 0; j < h.cols(); ++j) r.push_back(to_json(h(i, j)));
    rows.push_back(r);
  }
  return json{{"den", to_json(a.den())}, {"hnf", rows}};
}

FracIdeal ideal_from_json(const Order& o, const json& j) {
  if (!j.is_object() || !j.contains("den") || !j.contains("hnf")) fail(Errc::Parse, "ideal needs \"den\" and \"hnf\"");
  const json& rows = j["hnf"];
  size_t n = static_cast<size_t>(o.degree());
  if (!rows.is_array() || rows.size() != n) fail(Errc::Parse, "hnf must have one row per basis element");
  size_t m = rows[0].size();
  ZMatrix g(n, m);
  for (size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != m) fail(Errc::Parse, "ragged hnf");
    for (size_t k = 0; k < m; ++k) g(i, k) = integer_from_json(rows[i][k]);
  }
  Integer den = integer_from_json(j["den"]);
  if (den <= 0) fail(Errc::Parse, "den must be positive");
  return FracIdeal(o, den, g);
}

json to_json(const PrimeIdeal& P) {
  json out = to_json(P.ideal);
  out["p"] = to_json(P.p);
  out["e"] = P.e;
  out["f"] = P.f;
  return out;
}

json to_json(const CMType& phi) { return json{{"field", to_json(phi.cm.field)}, {"phi", phi.phi}}; }

json to_json(const TypeQuadruple& q) {
  return json{{"type", to_json(q.type)}, {"ideal", to_json(q.ideal)}, {"t", to_json(q.t)}};
}

json to_json(const LatticeAV& A) { return json{{"type", to_json(A.type)}, {"lattice", to_json(A.lattice)}}; }

json to_json(const RayClassGroup& G) {
  json d = json::array();
  for (const auto& x : G.elementary_divisors) d.push_back(to_json(x));
  return json{{"order", to_json(G.order)},
              {"elementary_divisors", d},
              {"modulus", to_json(G.modulus)},
              {"units_mod_m", to_json(G.units_mod_m)},
              {"unit_image", to_json(G.unit_image)},
              {"class_number", to_json(G.class_number)}};
}

CMCurveQ curve_from_json(const json& j) {
  for (const char* key : {"name", "a4", "a6", "cm_disc", "cm_endo"})
    if (!j.contains(key)) fail(Errc::Parse, std::string("curve record missing \"") + key + "\"");
  const json& e = j["cm_endo"];
  for (const char* key : {"gamma_minpoly", "x_power", "y_power"})
    if (!e.contains(key)) fail(Errc::Parse, std::string("cm_endo missing \"") + key + "\"");
  std::vector<Rational> c;
  for (const auto& x : e["gamma_minpoly"]) c.push_back(rational_from_json(x));
  CMEndo endo{UniPoly(std::move(c)), e["x_power"].get<long>(), e["y_power"].get<long>()};
  CMCurveQ curve =
      make_cm_curve(j["name"].get<std::string>(), integer_from_json(j["a4"]), integer_from_json(j["a6"]), endo);
  Integer disc = integer_from_json(j["cm_disc"]);
  if (curve.cm.order.disc() != disc)
    fail(Errc::Parse, curve.name + ": cm_disc " + disc.get_str() + " does not match " + curve.cm.order.disc().get_str());
  return curve;
}

std::vector<CMCurveQ> load_curves(const std::string& path) {
  json j = read_json_file(path);
  const json& list = j.is_object() && j.contains("curves") ? j["curves"] : j;
  if (!list.is_array()) fail(Errc::Parse, "curve corpus must be an array of records");
  std::vector<CMCurveQ> out;
  for (const auto& r : list) out.push_back(curve_from_json(r));
  return out;
}

}  // namespace cmreflex::io
