#pragma once

#include <functional>
#include <optional>

#include "cmreflex/matrix.hpp"

namespace cmreflex {

// LLL-reduce the integer combination matrix for a positive definite Gram
// matrix: returns unimodular U such that the basis (columns of B*U) is
// LLL-reduced for the form G (delta = 3/4). Exact rational arithmetic.
ZMatrix lll_transform(const QMatrix& gram);

// Fincke-Pohst: visit every nonzero integer vector x (up to sign) with
// x^T G x <= bound. The visitor returns true to stop early. Throws
// EnumerationBoundExceeded once more than `budget` tree nodes are visited.
// Returns true iff the visitor stopped the search.
bool enumerate_short_vectors(const QMatrix& gram, const Rational& bound,
                             const std::function<bool(const ZVector&, const Rational&)>& visit,
                             unsigned long budget);

// Node budget for enumerations: CMREFLEX_BUDGET if set, else 10^6.
unsigned long default_budget();

}  // namespace cmreflex
