#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cmreflex/errors.hpp"
#include "cmreflex/io.hpp"

namespace py = pybind11;
using namespace cmreflex;
using io::json;

namespace {

py::object to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null:
      return py::none();
    case json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case json::value_t::number_integer:
      return py::int_(j.get<long long>());
    case json::value_t::number_unsigned:
      return py::int_(j.get<unsigned long long>());
    case json::value_t::number_float:
      return py::float_(j.get<double>());
    case json::value_t::string:
      return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list l;
      for (const auto& x : j) l.append(to_py(x));
      return l;
    }
    default: {
      py::dict d;
      for (auto it = j.begin(); it != j.end(); ++it) d[py::str(it.key())] = to_py(it.value());
      return d;
    }
  }
}

json from_py(const py::handle& h) {
  if (py::isinstance<py::bool_>(h)) return h.cast<bool>();
  if (py::isinstance<py::int_>(h)) {
    std::string s = py::str(h);
    return s.size() < 18 ? json(std::stoll(s)) : json(s);
  }
  if (py::isinstance<py::str>(h)) return h.cast<std::string>();
  json a = json::array();
  for (const auto& x : h) a.push_back(from_py(x));
  return a;
}

NumberField field_of(const py::sequence& min_poly) { return io::field_from_json(json{{"min_poly", from_py(min_poly)}}); }

CMField cm_of(const py::sequence& min_poly) {
  auto cm = cm_check(field_of(min_poly));
  if (!cm) throw py::value_error("not a CM field");
  return *cm;
}

CMType type_of(const py::sequence& min_poly, size_t index) {
  auto types = enumerate_cm_types(cm_of(min_poly));
  if (index >= types.size()) throw py::index_error("CM-type index out of range");
  return types[index];
}

CMCurveQ curve_of(const py::dict& record) {
  json r = json::object();
  for (auto item : record) {
    std::string key = py::str(item.first);
    if (py::isinstance<py::dict>(item.second)) {
      json sub = json::object();
      for (auto s : item.second.cast<py::dict>()) sub[std::string(py::str(s.first))] = from_py(s.second);
      r[key] = sub;
    } else {
      r[key] = from_py(item.second);
    }
  }
  return io::curve_from_json(r);
}

}  // namespace

PYBIND11_MODULE(_cmreflex, m) {
  m.doc() = "Exact CM-field, reflex norm and CM elliptic curve computations";

  static py::exception<Error> exc(m, "CMReflexError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = exc;
      PyErr_SetObject(err.ptr(), py::make_tuple(std::string(errc_name(e.code())), e.what()).ptr());
    }
  });

  m.def(
      "field_info",
      [](const py::sequence& f) {
        NumberField k = field_of(f);
        json out = io::to_json(k);
        out["degree"] = k.degree();
        out["disc"] = io::to_json(Order::maximal(k).disc());
        out["cm"] = cm_check(k).has_value();
        return to_py(out);
      },
      py::arg("min_poly"), "Degree, field discriminant and CM flag of Q[x]/(f).");

  m.def(
      "cm_types",
      [](const py::sequence& f) {
        std::vector<std::vector<size_t>> out;
        for (auto& t : enumerate_cm_types(cm_of(f))) out.push_back(t.phi);
        return out;
      },
      py::arg("min_poly"), "Every CM-type as a list of root indices.");

  m.def(
      "reflex",
      [](const py::sequence& f, size_t index) {
        ReflexData R = reflex_field(type_of(f, index));
        return to_py({{"reflex", io::to_json(R.reflex)},
                      {"reflex_degree", R.reflex.degree()},
                      {"reflex_type", R.reflex_type.phi},
                      {"closure_degree", R.closure.L.field.degree()},
                      {"galois_group", R.closure.group_name}});
      },
      py::arg("min_poly"), py::arg("type_index"));

  m.def(
      "reflex_norm",
      [](const py::sequence& f, size_t index, const py::sequence& coords) {
        CMType t = type_of(f, index);
        ReflexData R = reflex_field(t);
        return to_py(io::to_json(R.norm_elem(io::element_from_json(R.reflex, from_py(coords)))));
      },
      py::arg("min_poly"), py::arg("type_index"), py::arg("reflex_coords"),
      "N_Phi of an element of the reflex field, as coordinates in E.");

  m.def(
      "verify_reflex",
      [](const py::sequence& f, size_t index, int samples, unsigned long seed) {
        ReflexReport r;
        CMType t = type_of(f, index);
        {
          py::gil_scoped_release release;
          r = verify_reflex_identities(t, NumberField(), samples, seed);
        }
        json out = json::array();
        for (auto& c : r.checks)
          out.push_back({{"name", c.name}, {"checked", c.checked}, {"failed", c.failed}, {"witness", c.witness}});
        return to_py(out);
      },
      py::arg("min_poly"), py::arg("type_index"), py::arg("samples") = 100, py::arg("seed") = 42);

  m.def(
      "class_number", [](const py::sequence& f) { return ideal_class_representatives(cm_of(f).order).size(); },
      py::arg("min_poly"));

  m.def(
      "ray_class_group",
      [](const py::sequence& f, long modulus) {
        CMField k = cm_of(f);
        return to_py(io::to_json(ray_class_group(k, FracIdeal::principal(k.order, k.field.from_rational(modulus)))));
      },
      py::arg("min_poly"), py::arg("modulus"), "Ray class group modulo the principal ideal (m).");

  m.def(
      "count_points", [](long p, long a4, long a6) { return count_points(CurveFp{p, a4, a6}); }, py::arg("p"),
      py::arg("a4"), py::arg("a6"), "Points on y^2 = x^3 + a4 x + a6 over F_p, including infinity.");

  m.def(
      "frobenius",
      [](const py::dict& curve, long p, unsigned long seed) {
        CMCurveQ c = curve_of(curve);
        FrobeniusData F = frobenius_element(c, p, seed);
        CMType phi = identity_type(c.cm);
        return to_py({{"pi", io::to_json(F.pi)},
                      {"trace", io::to_json(F.trace)},
                      {"q", io::to_json(F.q)},
                      {"prime_above", io::to_json(F.prime_above)},
                      {"ideal_match", st_check_ideal(F, phi, c.cm.field, F.prime_above)},
                      {"valuation_match", st_check_valuations(F, phi, c.cm.field, F.prime_above).all_ok()}});
      },
      py::arg("curve"), py::arg("p"), py::arg("seed") = 1,
      "Frobenius element of a curve corpus record at p, with both checks of the ideal formula.");
}
