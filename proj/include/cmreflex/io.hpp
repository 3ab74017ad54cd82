#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cmreflex/latticeav.hpp"
#include "cmreflex/polar.hpp"
#include "cmreflex/rayclass.hpp"
#include "cmreflex/stverify.hpp"

namespace cmreflex::io {

using json = nlohmann::json;

// Integers go out as JSON numbers when they fit in 64 bits, strings otherwise;
// rationals with a denominator are always "p/q" strings.
json to_json(const Integer& z);
json to_json(const Rational& q);
Integer integer_from_json(const json& j);
Rational rational_from_json(const json& j);

// {"min_poly": [c0, ..., cn]} with optional "name". Throws Parse.
NumberField field_from_json(const json& j);
NumberField load_field(const std::string& path);
json to_json(const NumberField& k);

json to_json(const NFElement& a);  // power-basis coordinates
NFElement element_from_json(const NumberField& k, const json& j);

// {"den", "hnf"}; hnf rows are order coordinates, one column per generator.
json to_json(const FracIdeal& a);
FracIdeal ideal_from_json(const Order& o, const json& j);
// Ideal fields plus "p", "e", "f".
json to_json(const PrimeIdeal& P);

json to_json(const CMType& phi);        // {"field", "phi"}
json to_json(const TypeQuadruple& q);   // {"type", "ideal", "t"}
json to_json(const LatticeAV& A);       // {"type", "lattice"}
json to_json(const RayClassGroup& G);   // {"order", "elementary_divisors", "modulus", ...}

// Curve corpus record: {"name", "a4", "a6", "cm_disc",
// "cm_endo": {"gamma_minpoly", "x_power", "y_power"}}. cm_disc is checked
// against the discriminant of the maximal order of the CM field.
CMCurveQ curve_from_json(const json& j);
std::vector<CMCurveQ> load_curves(const std::string& path);

json read_json_file(const std::string& path);

}  // namespace cmreflex::io
