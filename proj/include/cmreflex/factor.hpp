#pragma once

#include <utility>
#include <vector>

#include "cmreflex/poly.hpp"

namespace cmreflex {

using Factorization = std::vector<std::pair<UniPoly, int>>;

// Factor a nonzero polynomial over Q into monic irreducibles with multiplicity.
// Modular method: factor modulo a good prime, Hensel-lift, recombine.
// Factors come back sorted by (degree, coefficients).
Factorization factor_rational_poly(const UniPoly& f);

bool is_irreducible(const UniPoly& f);

// Monic irreducible factors of f modulo a prime p (p < 2^31), as coefficient
// vectors lowest degree first. Used by prime decomposition as well.
std::vector<std::pair<std::vector<long>, int>> factor_mod_p(const std::vector<long>& f, long p);

}  // namespace cmreflex
