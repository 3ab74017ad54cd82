#include "cmreflex/numberfield.hpp"

#include <mutex>

#include "cmreflex/errors.hpp"
#include "cmreflex/factor.hpp"

namespace cmreflex {

struct FieldData {
  UniPoly f;
  int n = 0;
  Integer disc;
  std::string name;
  std::vector<std::vector<Rational>> high_powers;  // x^n .. x^(2n-2) reduced
  std::vector<Rational> power_traces;              // Tr(x^k), k = 0 .. 2n-2
  QMatrix trace_matrix;

  mutable std::mutex roots_mutex;
  mutable RootIsolation roots;
  mutable bool roots_ready = false;
};

namespace {

std::vector<Rational> reduce_product(const FieldData& d, std::vector<Rational> prod) {
  const size_t n = static_cast<size_t>(d.n);
  std::vector<Rational> out(n);
  for (size_t i = 0; i < prod.size(); ++i) {
    if (prod[i] == 0) continue;
    if (i < n) {
      out[i] += prod[i];
    } else {
      const auto& row = d.high_powers[i - n];
      for (size_t j = 0; j < n; ++j)
        if (row[j] != 0) out[j] += prod[i] * row[j];
    }
  }
  return out;
}

// Power sums of the roots of a monic polynomial, p_0 .. p_count-1.
std::vector<Rational> power_sums(const UniPoly& f, size_t count) {
  const int n = f.degree();
  std::vector<Rational> p(count);
  if (count == 0) return p;
  p[0] = n;
  for (size_t k = 1; k < count; ++k) {
    Rational s = 0;
    const long kk = static_cast<long>(k);
    for (long i = 1; i <= std::min<long>(kk - 1, n); ++i) s += f.coeff(n - static_cast<int>(i)) * p[k - static_cast<size_t>(i)];
    if (kk <= n) s += kk * f.coeff(n - static_cast<int>(kk));
    p[k] = -s;
  }
  return p;
}

// Monic polynomial with the given power sums p_1..p_n (Newton identities).
UniPoly from_power_sums(const std::vector<Rational>& p, int n) {
  std::vector<Rational> e(static_cast<size_t>(n) + 1);
  e[0] = 1;
  for (int k = 1; k <= n; ++k) {
    Rational s = 0;
    for (int i = 1; i <= k; ++i) {
      Rational term = e[static_cast<size_t>(k - i)] * p[static_cast<size_t>(i)];
      if (i % 2 == 1) s += term;
      else s -= term;
    }
    e[static_cast<size_t>(k)] = s / k;
  }
  std::vector<Rational> c(static_cast<size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    Rational v = e[static_cast<size_t>(k)];
    if (k % 2 == 1) v = -v;
    c[static_cast<size_t>(n - k)] = v;
  }
  return UniPoly(std::move(c));
}

}  // namespace

NumberField::NumberField(const UniPoly& f, std::string name) {
  require(f.degree() >= 1, Errc::InvalidArgument, "defining polynomial must have positive degree");
  require(f.is_monic(), Errc::InvalidArgument, "defining polynomial must be monic: " + f.to_string());
  require(is_irreducible(f), Errc::NotIrreducible, f.to_string() + " is reducible over Q");
  auto d = std::make_shared<FieldData>();
  d->f = f;
  d->n = f.degree();
  d->name = std::move(name);
  Rational disc = discriminant(f);
  d->disc = disc.get_num() / disc.get_den();
  const size_t n = static_cast<size_t>(d->n);
  if (n >= 2) {
    std::vector<Rational> cur(n);
    // x^n = -(f_0 + ... + f_{n-1} x^{n-1})
    for (size_t j = 0; j < n; ++j) cur[j] = -f.coeff(static_cast<int>(j));
    d->high_powers.push_back(cur);
    for (size_t k = n + 1; k <= 2 * n - 2; ++k) {
      std::vector<Rational> next(n);
      Rational top = cur[n - 1];
      for (size_t j = n - 1; j >= 1; --j) next[j] = cur[j - 1];
      next[0] = 0;
      if (top != 0)
        for (size_t j = 0; j < n; ++j) next[j] += top * d->high_powers[0][j];
      d->high_powers.push_back(next);
      cur = std::move(next);
    }
  }
  d->power_traces = power_sums(f, 2 * n - 1);
  d->trace_matrix = QMatrix(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) d->trace_matrix(i, j) = d->power_traces[i + j];
  d_ = std::move(d);
}

const UniPoly& NumberField::min_poly() const { return d_->f; }
int NumberField::degree() const { return d_->n; }
const Integer& NumberField::disc() const { return d_->disc; }
const std::string& NumberField::name() const { return d_->name; }
const QMatrix& NumberField::trace_matrix() const { return d_->trace_matrix; }

bool NumberField::operator==(const NumberField& o) const {
  if (d_ == o.d_) return true;
  if (!d_ || !o.d_) return false;
  return d_->f == o.d_->f;
}

NFElement NumberField::zero() const { return NFElement(*this, std::vector<Rational>(static_cast<size_t>(degree()))); }
NFElement NumberField::one() const { return from_rational(1); }
NFElement NumberField::gen() const {
  if (degree() == 1) return from_rational(-d_->f.coeff(0));
  std::vector<Rational> c(static_cast<size_t>(degree()));
  c[1] = 1;
  return NFElement(*this, std::move(c));
}
NFElement NumberField::from_rational(const Rational& q) const {
  std::vector<Rational> c(static_cast<size_t>(degree()));
  c[0] = q;
  return NFElement(*this, std::move(c));
}
NFElement NumberField::from_coords(std::vector<Rational> coords) const { return NFElement(*this, std::move(coords)); }
NFElement NumberField::from_poly(const UniPoly& p) const {
  UniPoly r = p % d_->f;
  std::vector<Rational> c = r.coeffs();
  c.resize(static_cast<size_t>(degree()));
  return NFElement(*this, std::move(c));
}

RootIsolation NumberField::roots(unsigned bits) const {
  std::lock_guard<std::mutex> lock(d_->roots_mutex);
  if (!d_->roots_ready) {
    d_->roots = isolate_roots(d_->f, 64);
    d_->roots_ready = true;
  }
  if (d_->roots.prec < bits) d_->roots = refine_roots(d_->f, d_->roots, bits);
  return d_->roots;
}

bool NumberField::is_totally_imaginary() const {
  for (auto& b : roots().roots)
    if (b.im == 0) return false;
  return true;
}

bool NumberField::is_totally_real() const {
  for (auto& b : roots().roots)
    if (b.im != 0) return false;
  return true;
}

NFElement::NFElement(NumberField k, std::vector<Rational> coords) : k_(std::move(k)), c_(std::move(coords)) {
  require(c_.size() == static_cast<size_t>(k_.degree()), Errc::InvalidArgument, "coordinate vector has wrong length");
}

bool NFElement::is_zero() const {
  for (auto& q : c_)
    if (q != 0) return false;
  return true;
}

bool NFElement::is_rational() const {
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

bool NFElement::is_integral() const { return charpoly().has_integer_coeffs(); }

NFElement NFElement::operator-() const {
  NFElement r = *this;
  for (auto& q : r.c_) q = -q;
  return r;
}

NFElement& NFElement::operator+=(const NFElement& o) {
  for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

NFElement& NFElement::operator-=(const NFElement& o) {
  for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

NFElement& NFElement::operator*=(const NFElement& o) {
  const size_t n = c_.size();
  std::vector<Rational> prod(2 * n - 1);
  for (size_t i = 0; i < n; ++i) {
    if (c_[i] == 0) continue;
    for (size_t j = 0; j < n; ++j)
      if (o.c_[j] != 0) prod[i + j] += c_[i] * o.c_[j];
  }
  c_ = reduce_product(*k_.data(), std::move(prod));
  return *this;
}

NFElement& NFElement::operator*=(const Rational& s) {
  for (auto& q : c_) q *= s;
  return *this;
}

NFElement NFElement::inverse() const {
  require(!is_zero(), Errc::ZeroElement, "inverse of zero");
  if (is_rational()) return k_.from_rational(1 / c_[0]);
  UniPoly g, s, t;
  xgcd(as_poly(), k_.min_poly(), g, s, t);
  return k_.from_poly(s);
}

NFElement NFElement::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  NFElement result = k_.one(), base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

QMatrix NFElement::mult_matrix() const {
  const size_t n = c_.size();
  QMatrix m(n, n);
  NFElement col = *this;
  NFElement x = k_.gen();
  for (size_t j = 0; j < n; ++j) {
    m.set_column(j, col.c_);
    if (j + 1 < n) col *= x;
  }
  return m;
}

Rational NFElement::trace() const {
  Rational t = 0;
  const auto& p = k_.data()->power_traces;
  for (size_t i = 0; i < c_.size(); ++i) t += c_[i] * p[i];
  return t;
}

Rational NFElement::norm() const {
  if (is_rational()) return cmreflex::pow(c_[0], static_cast<long>(c_.size()));
  return resultant(k_.min_poly(), as_poly());
}

UniPoly NFElement::charpoly() const {
  const int n = k_.degree();
  std::vector<Rational> p(static_cast<size_t>(n) + 1);
  NFElement acc = *this;
  for (int k = 1; k <= n; ++k) {
    p[static_cast<size_t>(k)] = acc.trace();
    if (k < n) acc *= *this;
  }
  return from_power_sums(p, n);
}

UniPoly NFElement::minpoly() const {
  UniPoly c = charpoly();
  UniPoly g = gcd(c, c.derivative());
  return (c / g).monic();
}

Ball NFElement::embed(size_t root_index, unsigned bits) const {
  const Rational target(1, Integer(1) << bits);
  UniPoly p = as_poly();
  unsigned prec = bits + 32;
  for (int round = 0; round < 16; ++round) {
    Ball z = k_.roots(prec).roots[root_index];
    Ball v = eval(p, z, prec + 16);
    if (v.rad < target) return v;
    prec *= 2;
  }
  fail(Errc::InvalidArgument, "embedding evaluation did not reach requested precision");
}

std::string NFElement::to_string() const { return as_poly().to_string("a"); }

FieldMorphism::FieldMorphism(NumberField source, NFElement image) : src_(std::move(source)), img_(std::move(image)) {
  // Horner evaluation of min_poly(source) at the image.
  const auto& f = src_.min_poly().coeffs();
  NFElement acc = img_.field().zero();
  for (auto it = f.rbegin(); it != f.rend(); ++it) {
    acc *= img_;
    acc += img_.field().from_rational(*it);
  }
  require(acc.is_zero(), Errc::InvalidArgument, "image of generator is not a root of the source polynomial");
}

NFElement FieldMorphism::operator()(const NFElement& a) const {
  require(a.field() == src_, Errc::InvalidArgument, "morphism applied to element of another field");
  const auto& c = a.coords();
  NFElement acc = target().zero();
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    acc *= img_;
    acc += target().from_rational(*it);
  }
  return acc;
}

FieldMorphism FieldMorphism::after(const FieldMorphism& o) const {
  require(o.target() == src_, Errc::InvalidArgument, "morphisms do not compose");
  return FieldMorphism(o.src_, (*this)(o.img_));
}

bool FieldMorphism::is_identity() const { return src_ == target() && img_ == src_.gen(); }

QMatrix FieldMorphism::matrix() const {
  const size_t n = static_cast<size_t>(src_.degree()), m = static_cast<size_t>(target().degree());
  QMatrix a(m, n);
  NFElement p = target().one();
  for (size_t j = 0; j < n; ++j) {
    a.set_column(j, p.coords());
    p *= img_;
  }
  return a;
}

std::optional<NFElement> FieldMorphism::preimage(const NFElement& b) const {
  auto x = solve(matrix(), b.coords());
  if (!x) return std::nullopt;
  return src_.from_coords(*x);
}

std::vector<Embedding> certified_embeddings(const NumberField& k, unsigned bits) {
  require(bits >= 64, Errc::InvalidArgument, "precision must be at least 64 bits");
  auto iso = k.roots(bits);
  std::vector<Embedding> out;
  for (size_t i = 0; i < iso.roots.size(); ++i) out.push_back(Embedding{k, i, iso.roots[i], bits});
  return out;
}

Embedding refine(const Embedding& e, unsigned bits) {
  auto iso = e.field.roots(bits);
  return Embedding{e.field, e.root_index, iso.roots[e.root_index], std::max(bits, e.bits)};
}

size_t locate_root(const NumberField& k, const std::function<Ball(unsigned)>& value) {
  for (unsigned bits = 64; bits <= 8192; bits *= 2) {
    Ball v = value(bits);
    auto iso = k.roots(bits);
    size_t hit = iso.roots.size(), count = 0;
    for (size_t i = 0; i < iso.roots.size(); ++i)
      if (!v.disjoint(iso.roots[i])) {
        hit = i;
        ++count;
      }
    if (count == 1) return hit;
  }
  fail(Errc::InvalidArgument, "could not identify root");
}

size_t identify_root(const NumberField& k, const NFElement& a, size_t idx) {
  return locate_root(k, [&](unsigned bits) { return a.embed(idx, bits); });
}

}  // namespace cmreflex
