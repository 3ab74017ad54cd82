#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cmreflex/cmreflex.hpp"

namespace cmreflex {

// alpha with conj(alpha) = -alpha and Im(phi(alpha)) > 0 for phi in Phi.
struct RiemannElement {
  CMType type;
  NFElement alpha;
};

// (E, Phi; a, t) with conj(t) = -t and Im(phi(t)) > 0 for phi in Phi.
struct TypeQuadruple {
  CMType type;
  FracIdeal ideal;
  NFElement t;
};

// Sign of Im(phi_i(a)), certified; 0 only if the imaginary part is exactly 0.
int im_sign(const NFElement& a, size_t root_index);

// Deterministic. Throws SearchExhausted after `cap` box radii.
RiemannElement find_riemann_element(const CMType& phi, long cap = 64);

struct Validation {
  bool valid = true;
  std::vector<std::string> problems;
};
Validation validate_quadruple(const TypeQuadruple& q);

// a with ideal2 = a * ideal1 and t2 = t1 / (a conj(a)), if one exists. Among
// the witnesses (unique up to units of absolute value 1) the one with the
// lexicographically largest power-basis coordinates is returned.
// Throws UnitSearchInconclusive if the enumeration budget runs out.
std::optional<NFElement> quadruples_equivalent(const TypeQuadruple& q1, const TypeQuadruple& q2,
                                               unsigned long budget = 0);

}  // namespace cmreflex
