#include "cmreflex/poly.hpp"

#include <algorithm>
#include <sstream>

#include "cmreflex/errors.hpp"

namespace cmreflex {

UniPoly::UniPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

UniPoly::UniPoly(std::initializer_list<long> coeffs) {
  for (long v : coeffs) c_.emplace_back(v);
  trim();
}

UniPoly UniPoly::constant(const Rational& c) { return UniPoly(std::vector<Rational>{c}); }

UniPoly UniPoly::monomial(const Rational& c, int degree) {
  std::vector<Rational> v(static_cast<size_t>(degree) + 1);
  v.back() = c;
  return UniPoly(std::move(v));
}

void UniPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational UniPoly::coeff(int i) const {
  if (i < 0 || i > degree()) return 0;
  return c_[static_cast<size_t>(i)];
}

bool UniPoly::has_integer_coeffs() const {
  return std::all_of(c_.begin(), c_.end(), [](const Rational& q) { return q.get_den() == 1; });
}

UniPoly UniPoly::monic() const {
  if (is_zero()) return *this;
  Rational inv = 1 / lead();
  return *this * inv;
}

UniPoly UniPoly::derivative() const {
  std::vector<Rational> d;
  for (size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<long>(i));
  return UniPoly(std::move(d));
}

Rational UniPoly::eval(const Rational& x) const {
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

UniPoly UniPoly::compose(const UniPoly& inner) const {
  UniPoly acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * inner + constant(*it);
  return acc;
}

UniPoly UniPoly::reflect() const {
  std::vector<Rational> v = c_;
  for (size_t i = 1; i < v.size(); i += 2) v[i] = -v[i];
  return UniPoly(std::move(v));
}

Integer UniPoly::content_denominator() const {
  Integer d = 1;
  for (const auto& q : c_) d = lcm(d, q.get_den());
  return d;
}

UniPoly UniPoly::primitive_part() const {
  if (is_zero()) return *this;
  Integer d = content_denominator();
  Integer g = 0;
  std::vector<Rational> v;
  for (const auto& q : c_) {
    Integer z = q.get_num() * (d / q.get_den());
    g = gcd(g, z);
    v.emplace_back(z);
  }
  if (v.back() < 0) g = -g;
  for (auto& q : v) q /= g;
  return UniPoly(std::move(v));
}

UniPoly UniPoly::operator-() const {
  UniPoly r = *this;
  for (auto& q : r.c_) q = -q;
  return r;
}

UniPoly& UniPoly::operator+=(const UniPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

UniPoly& UniPoly::operator-=(const UniPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

UniPoly& UniPoly::operator*=(const UniPoly& o) {
  if (is_zero() || o.is_zero()) {
    c_.clear();
    return *this;
  }
  std::vector<Rational> r(c_.size() + o.c_.size() - 1);
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  }
  c_ = std::move(r);
  trim();
  return *this;
}

UniPoly& UniPoly::operator*=(const Rational& s) {
  if (s == 0) {
    c_.clear();
    return *this;
  }
  for (auto& q : c_) q *= s;
  return *this;
}

std::string UniPoly::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const Rational& q = c_[static_cast<size_t>(i)];
    if (q == 0) continue;
    Rational a = abs(q);
    if (!first) os << (q < 0 ? " - " : " + ");
    else if (q < 0) os << "-";
    first = false;
    if (i == 0 || a != 1) os << a.get_str();
    if (i >= 1) {
      if (a != 1) os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b) {
  require(!b.is_zero(), Errc::InvalidArgument, "polynomial division by zero");
  if (a.degree() < b.degree()) return {UniPoly(), a};
  std::vector<Rational> r = a.coeffs();
  std::vector<Rational> q(static_cast<size_t>(a.degree() - b.degree()) + 1);
  const auto& bc = b.coeffs();
  Rational inv = 1 / b.lead();
  for (int i = a.degree(); i >= b.degree(); --i) {
    Rational t = r[static_cast<size_t>(i)] * inv;
    if (t == 0) continue;
    size_t shift = static_cast<size_t>(i - b.degree());
    q[shift] = t;
    for (size_t j = 0; j < bc.size(); ++j) r[shift + j] -= t * bc[j];
  }
  r.resize(static_cast<size_t>(b.degree()));
  return {UniPoly(std::move(q)), UniPoly(std::move(r))};
}

UniPoly operator/(const UniPoly& a, const UniPoly& b) { return divmod(a, b).first; }
UniPoly operator%(const UniPoly& a, const UniPoly& b) { return divmod(a, b).second; }

UniPoly gcd(UniPoly a, UniPoly b) {
  while (!b.is_zero()) {
    UniPoly r = a % b;
    a = std::move(b);
    b = r.is_zero() ? r : r.primitive_part();
  }
  return a.monic();
}

void xgcd(const UniPoly& a, const UniPoly& b, UniPoly& g, UniPoly& s, UniPoly& t) {
  UniPoly r0 = a, r1 = b, s0 = UniPoly::constant(1), s1, t0, t1 = UniPoly::constant(1);
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    UniPoly s2 = s0 - q * s1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    UniPoly t2 = t0 - q * t1;
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) {
    g = r0;
    s = s0;
    t = t0;
    return;
  }
  Rational inv = 1 / r0.lead();
  g = r0 * inv;
  s = s0 * inv;
  t = t0 * inv;
}

bool is_squarefree(const UniPoly& f) {
  if (f.degree() <= 0) return true;
  return gcd(f, f.derivative()).degree() == 0;
}

std::vector<std::pair<UniPoly, int>> squarefree_decomposition(const UniPoly& f_in) {
  std::vector<std::pair<UniPoly, int>> out;
  if (f_in.degree() <= 0) return out;
  UniPoly f = f_in.monic();
  UniPoly fp = f.derivative();
  UniPoly a = gcd(f, fp);
  UniPoly b = f / a;
  UniPoly c = fp / a;
  UniPoly d = c - b.derivative();
  int i = 1;
  while (b.degree() > 0) {
    UniPoly g = gcd(b, d);
    if (g.degree() > 0) out.emplace_back(g, i);
    b = b / g;
    c = d / g;
    d = c - b.derivative();
    ++i;
  }
  return out;
}

Rational resultant(const UniPoly& a, const UniPoly& b) {
  // Euclidean algorithm over Q with the standard sign/leading coefficient bookkeeping.
  if (a.is_zero() || b.is_zero()) return 0;
  UniPoly f = a, g = b;
  Rational res = 1;
  while (true) {
    int df = f.degree(), dg = g.degree();
    if (dg == 0) return res * pow(g.lead(), df);
    UniPoly r = f % g;
    if (r.is_zero()) return 0;
    if ((df % 2 == 1) && (dg % 2 == 1)) res = -res;
    res *= pow(g.lead(), df - r.degree());
    f = std::move(g);
    g = std::move(r);
  }
}

Rational discriminant(const UniPoly& f) {
  int n = f.degree();
  require(n >= 1, Errc::InvalidArgument, "discriminant of a constant");
  Rational r = resultant(f, f.derivative()) / f.lead();
  if ((n * (n - 1) / 2) % 2 == 1) r = -r;
  return r;
}

UniPoly interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
  const size_t n = xs.size();
  std::vector<Rational> coef = ys;
  for (size_t j = 1; j < n; ++j)
    for (size_t i = n - 1; i >= j; --i) {
      coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j]);
      if (i == j) break;
    }
  UniPoly acc;
  for (size_t k = n; k-- > 0;) {
    acc = acc * UniPoly(std::vector<Rational>{-xs[k], 1}) + UniPoly::constant(coef[k]);
  }
  return acc;
}

UniPoly from_roots(const std::vector<Rational>& roots) {
  UniPoly acc = UniPoly::constant(1);
  for (const auto& r : roots) acc *= UniPoly(std::vector<Rational>{-r, 1});
  return acc;
}

bool poly_less(const UniPoly& a, const UniPoly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int i = a.degree(); i >= 0; --i) {
    Rational x = a.coeff(i), y = b.coeff(i);
    if (x != y) return x < y;
  }
  return false;
}

}  // namespace cmreflex
