#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "cmreflex/rational.hpp"

namespace cmreflex {

// Dense univariate polynomial over Q, coefficients lowest degree first.
// The zero polynomial has no coefficients; otherwise the last one is nonzero.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Rational> coeffs);
  UniPoly(std::initializer_list<long> coeffs);
  static UniPoly constant(const Rational& c);
  static UniPoly monomial(const Rational& c, int degree);
  static UniPoly x() { return monomial(1, 1); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(int i) const;
  const Rational& lead() const { return c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  bool has_integer_coeffs() const;

  UniPoly monic() const;
  UniPoly derivative() const;
  Rational eval(const Rational& x) const;
  UniPoly compose(const UniPoly& inner) const;
  // f(-x)
  UniPoly reflect() const;
  // Content-free integer polynomial with positive leading coefficient.
  UniPoly primitive_part() const;
  Integer content_denominator() const;

  UniPoly operator-() const;
  UniPoly& operator+=(const UniPoly& o);
  UniPoly& operator-=(const UniPoly& o);
  UniPoly& operator*=(const UniPoly& o);
  UniPoly& operator*=(const Rational& s);
  friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
  friend UniPoly operator-(UniPoly a, const UniPoly& b) { return a -= b; }
  friend UniPoly operator*(UniPoly a, const UniPoly& b) { return a *= b; }
  friend UniPoly operator*(UniPoly a, const Rational& s) { return a *= s; }
  friend UniPoly operator*(const Rational& s, UniPoly a) { return a *= s; }
  bool operator==(const UniPoly& o) const { return c_ == o.c_; }
  bool operator!=(const UniPoly& o) const { return !(*this == o); }

  std::string to_string(const std::string& var = "x") const;

 private:
  void trim();
  std::vector<Rational> c_;
};

std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b);
UniPoly operator/(const UniPoly& a, const UniPoly& b);  // exact quotient part
UniPoly operator%(const UniPoly& a, const UniPoly& b);
UniPoly gcd(UniPoly a, UniPoly b);  // monic
// s*a + t*b = g (g monic gcd)
void xgcd(const UniPoly& a, const UniPoly& b, UniPoly& g, UniPoly& s, UniPoly& t);
bool is_squarefree(const UniPoly& f);
// Yun: f = lc * prod g_i^i with g_i squarefree, pairwise coprime, monic.
std::vector<std::pair<UniPoly, int>> squarefree_decomposition(const UniPoly& f);
Rational resultant(const UniPoly& a, const UniPoly& b);
Rational discriminant(const UniPoly& f);
// Newton interpolation through (xs[i], ys[i]).
UniPoly interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys);
// Polynomial with the given roots: prod (x - r).
UniPoly from_roots(const std::vector<Rational>& roots);

// Canonical total order used to sort factor lists: degree, then coefficients.
bool poly_less(const UniPoly& a, const UniPoly& b);

}  // namespace cmreflex
