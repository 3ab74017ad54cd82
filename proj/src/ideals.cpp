#include "cmreflex/ideals.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <random>
#include <sstream>

#include "cmreflex/enumerate.hpp"
#include "cmreflex/errors.hpp"
#include "cmreflex/factor.hpp"
#include "cmreflex/galois.hpp"

namespace cmreflex {

struct OrderData {
  NumberField k;
  size_t n = 0;
  Integer den;        // basis = hnf / den
  ZMatrix hnf;
  QMatrix basis;
  QMatrix basis_inv;
  std::vector<ZVector> table;  // b_i b_j at index i*n + j
  ZMatrix trace_form;
  Integer disc;
  Integer index = 1;
  bool maximal = false;

  mutable std::mutex cache_mutex;
  mutable std::map<Integer, std::vector<PrimeIdeal>> primes;
  mutable std::optional<std::optional<FieldMorphism>> involution;
  mutable std::optional<Rational> unit_factor;  // bound factor for principal search
};

namespace {

std::shared_ptr<OrderData> build_order(const NumberField& k, const QMatrix& basis_in) {
  const size_t n = static_cast<size_t>(k.degree());
  require(basis_in.rows() == n && basis_in.cols() == n, Errc::InvalidArgument, "order basis has wrong shape");
  Integer den = 1;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) den = lcm(den, Integer(basis_in(i, j).get_den()));
  ZMatrix z(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) z(i, j) = Integer(basis_in(i, j) * den);
  auto d = std::make_shared<OrderData>();
  d->k = k;
  d->n = n;
  d->hnf = hnf(z);
  Integer g = den;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) g = gcd(g, d->hnf(i, j));
  if (g > 1) {
    den /= g;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) d->hnf(i, j) /= g;
  }
  d->den = den;
  require(d->hnf(0, 0) == den, Errc::InvalidArgument, "order must contain 1 and meet Q in Z");
  d->basis = QMatrix(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) d->basis(i, j) = frac(d->hnf(i, j), den);
  d->basis_inv = inverse(d->basis);

  std::vector<NFElement> b;
  for (size_t j = 0; j < n; ++j) b.push_back(k.from_coords(d->basis.column(j)));
  d->table.resize(n * n);
  d->trace_form = ZMatrix(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i; j < n; ++j) {
      NFElement p = b[i] * b[j];
      QVector c = d->basis_inv * p.coords();
      ZVector zc(n);
      for (size_t t = 0; t < n; ++t) {
        require(c[t].get_den() == 1, Errc::InvalidArgument, "basis span is not closed under multiplication");
        zc[t] = c[t].get_num();
      }
      d->table[i * n + j] = zc;
      d->table[j * n + i] = zc;
      Rational tr = p.trace();
      d->trace_form(i, j) = d->trace_form(j, i) = tr.get_num();
    }
  d->disc = det(d->trace_form);
  return d;
}

long to_long_mod(const Integer& a, long p) { return mod(a, Integer(p)).get_si(); }

}  // namespace

// ---------------------------------------------------------------- Order

const NumberField& Order::field() const { return d_->k; }
int Order::degree() const { return static_cast<int>(d_->n); }
const QMatrix& Order::basis() const { return d_->basis; }
const Integer& Order::disc() const { return d_->disc; }
const Integer& Order::index_in_maximal() const { return d_->index; }
bool Order::is_maximal() const { return d_->maximal; }
const ZMatrix& Order::trace_form() const { return d_->trace_form; }

bool Order::operator==(const Order& o) const {
  if (d_ == o.d_) return true;
  if (!d_ || !o.d_) return false;
  return d_->k == o.d_->k && d_->den == o.d_->den && d_->hnf == o.d_->hnf;
}

NFElement Order::element(const ZVector& c) const {
  QVector q(c.begin(), c.end());
  return element(q);
}

NFElement Order::element(const QVector& c) const { return d_->k.from_coords(d_->basis * c); }

QVector Order::coords(const NFElement& x) const { return d_->basis_inv * x.coords(); }

std::optional<ZVector> Order::int_coords(const NFElement& x) const {
  QVector c = coords(x);
  ZVector z(c.size());
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i].get_den() != 1) return std::nullopt;
    z[i] = c[i].get_num();
  }
  return z;
}

ZVector Order::mul(const ZVector& a, const ZVector& b) const {
  const size_t n = d_->n;
  ZVector r(n);
  for (size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < n; ++j) {
      if (b[j] == 0) continue;
      Integer s = a[i] * b[j];
      const ZVector& t = d_->table[i * n + j];
      for (size_t l = 0; l < n; ++l)
        if (t[l] != 0) r[l] += s * t[l];
    }
  }
  return r;
}

ZMatrix Order::mult_matrix(const ZVector& x) const {
  const size_t n = d_->n;
  ZMatrix m(n, n);
  for (size_t j = 0; j < n; ++j) {
    ZVector e(n);
    e[j] = 1;
    m.set_column(j, mul(x, e));
  }
  return m;
}

namespace {

// Multiply in order coordinates modulo p.
std::vector<long> mul_mod(const OrderData& d, const std::vector<long>& a, const std::vector<long>& b, long p) {
  const size_t n = d.n;
  std::vector<long> r(n, 0);
  for (size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < n; ++j) {
      if (b[j] == 0) continue;
      long s = static_cast<long>((static_cast<__int128>(a[i]) * b[j]) % p);
      const ZVector& t = d.table[i * n + j];
      for (size_t l = 0; l < n; ++l) {
        if (t[l] == 0) continue;
        long tl = to_long_mod(t[l], p);
        r[l] = static_cast<long>((r[l] + static_cast<__int128>(s) * tl) % p);
      }
    }
  }
  return r;
}

std::vector<long> pow_mod(const OrderData& d, std::vector<long> a, Integer e, long p) {
  std::vector<long> r(d.n, 0);
  r[0] = 1;
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = mul_mod(d, r, a, p);
    e >>= 1;
    if (e > 0) a = mul_mod(d, a, a, p);
  }
  return r;
}

ZMatrix hnf_with_p(const size_t n, const std::vector<ZVector>& vecs, const Integer& p) {
  ZMatrix g(n, vecs.size() + n);
  for (size_t j = 0; j < vecs.size(); ++j)
    for (size_t i = 0; i < n; ++i) g(i, j) = vecs[j][i];
  for (size_t i = 0; i < n; ++i) g(i, vecs.size() + i) = p;
  return hnf(g, p);
}

// p-radical of the order, as an HNF in order coordinates.
ZMatrix p_radical(const OrderData& d, long p) {
  const size_t n = d.n;
  Integer q = p;
  while (q < Integer(n)) q *= p;
  // columns: Frobenius images of the basis vectors
  std::vector<std::vector<long>> rows(n, std::vector<long>(n, 0));
  for (size_t j = 0; j < n; ++j) {
    std::vector<long> e(n, 0);
    e[j] = 1;
    std::vector<long> img = pow_mod(d, e, q, p);
    for (size_t i = 0; i < n; ++i) rows[i][j] = img[i];
  }
  auto ker = kernel_mod_p(rows, n, p);
  std::vector<ZVector> vecs;
  for (auto& v : ker) vecs.emplace_back(v.begin(), v.end());
  return hnf_with_p(n, vecs, p);
}

// One Round-2 enlargement at p; returns the new basis in power coordinates,
// or nullopt if the order is p-maximal.
std::optional<QMatrix> enlarge_at(const OrderData& d, long p) {
  const size_t n = d.n;
  ZMatrix rad = p_radical(d, p);
  std::vector<ZVector> radb = rad.columns();
  // img[i][j]: coordinates of b_i * a_j in the radical basis, mod p
  std::vector<std::vector<std::vector<long>>> img(n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      ZVector prod(n);
      for (size_t b = 0; b < n; ++b) {
        if (radb[j][b] == 0) continue;
        const ZVector& t = d.table[i * n + b];
        for (size_t l = 0; l < n; ++l) prod[l] += radb[j][b] * t[l];
      }
      auto c = hnf_solve(rad, prod);
      require(c.has_value(), Errc::InvalidArgument, "radical is not an ideal");
      std::vector<long> cl(n);
      for (size_t l = 0; l < n; ++l) cl[l] = to_long_mod((*c)[l], p);
      img[i].push_back(cl);
    }
  std::vector<std::vector<long>> rows;
  for (size_t j = 0; j < n; ++j)
    for (size_t l = 0; l < n; ++l) {
      std::vector<long> row(n);
      for (size_t i = 0; i < n; ++i) row[i] = img[i][j][l];
      rows.push_back(row);
    }
  auto ker = kernel_mod_p(rows, n, p);
  if (ker.empty()) return std::nullopt;
  std::vector<ZVector> vecs;
  for (auto& v : ker) vecs.emplace_back(v.begin(), v.end());
  ZMatrix u = hnf_with_p(n, vecs, p);
  QMatrix nb = d.basis * to_rational(u);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) nb(i, j) /= p;
  return nb;
}

}  // namespace

Order Order::equation_order(const NumberField& k) {
  require(k.min_poly().has_integer_coeffs(), Errc::Unsupported, "equation order needs an integral min_poly");
  Order o;
  auto d = build_order(k, QMatrix::identity(static_cast<size_t>(k.degree())));
  Order m = maximal(k);
  d->index = sqrt(Integer(d->disc / m.disc()));
  d->maximal = d->index == 1;
  o.d_ = d;
  return o;
}

namespace {

std::mutex maximal_mutex;
std::map<std::string, Order> maximal_cache;

std::shared_ptr<OrderData> compute_maximal(const NumberField& k);

}  // namespace

Order Order::maximal(const NumberField& k) {
  require(k.min_poly().has_integer_coeffs(), Errc::Unsupported, "maximal order needs an integral min_poly");
  const std::string key = k.min_poly().to_string();
  {
    std::lock_guard<std::mutex> lock(maximal_mutex);
    auto it = maximal_cache.find(key);
    if (it != maximal_cache.end()) return it->second;
  }
  Order o;
  o.d_ = compute_maximal(k);
  std::lock_guard<std::mutex> lock(maximal_mutex);
  return maximal_cache.emplace(key, o).first->second;
}

namespace {

std::shared_ptr<OrderData> compute_maximal(const NumberField& k) {
  const size_t n = static_cast<size_t>(k.degree());
  auto d = build_order(k, QMatrix::identity(n));
  for (auto& [p, e] : factor_integer(d->disc)) {
    if (e < 2) continue;
    require(p < Integer(1) << 31, Errc::Unsupported, "discriminant has a large square factor");
    long pl = p.get_si();
    while (true) {
      auto nb = enlarge_at(*d, pl);
      if (!nb) break;
      d = build_order(k, *nb);
    }
  }
  d->maximal = true;
  d->index = 1;
  return d;
}

}  // namespace

Order Order::from_basis(const NumberField& k, const QMatrix& basis) {
  auto d = build_order(k, basis);
  Order m = maximal(k);
  Integer q = d->disc / m.disc();
  d->index = sqrt(q);
  require(d->index * d->index * m.disc() == d->disc, Errc::InvalidArgument, "order discriminant inconsistent");
  d->maximal = d->index == 1;
  Order o;
  o.d_ = d;
  return o;
}

// ---------------------------------------------------------------- FracIdeal

namespace {

FracIdeal make_ideal(const Order& o, Integer den, const ZMatrix& gens, const Integer& modulus) {
  return FracIdeal(o, std::move(den), modulus == 0 ? gens : hnf(gens, modulus));
}

}  // namespace

FracIdeal::FracIdeal(Order o, Integer den, const ZMatrix& gens) : o_(std::move(o)), den_(std::move(den)) {
  require(den_ > 0, Errc::InvalidArgument, "ideal denominator must be positive");
  const size_t n = static_cast<size_t>(o_.degree());
  require(gens.rows() == n, Errc::InvalidArgument, "ideal generators have wrong length");
  bool is_hnf = gens.cols() == n;
  for (size_t i = 0; is_hnf && i < n; ++i) {
    if (gens(i, i) <= 0) is_hnf = false;
    for (size_t j = 0; is_hnf && j < n; ++j) {
      if (j < i && gens(i, j) != 0) is_hnf = false;
      if (j > i && (gens(i, j) < 0 || gens(i, j) >= gens(i, i))) is_hnf = false;
    }
  }
  h_ = is_hnf ? gens : cmreflex::hnf(gens);
  Integer g = den_;
  for (size_t i = 0; i < n && g != 1; ++i)
    for (size_t j = i; j < n && g != 1; ++j) g = gcd(g, h_(i, j));
  if (g > 1) {
    den_ /= g;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i; j < n; ++j) h_(i, j) /= g;
  }
}

FracIdeal FracIdeal::unit(const Order& o) {
  return FracIdeal(o, 1, ZMatrix::identity(static_cast<size_t>(o.degree())));
}

FracIdeal FracIdeal::principal(const Order& o, const NFElement& a) {
  require(!a.is_zero(), Errc::ZeroIdeal, "principal ideal of zero");
  const size_t n = static_cast<size_t>(o.degree());
  QMatrix m(n, n);
  for (size_t j = 0; j < n; ++j) {
    ZVector e(n);
    e[j] = 1;
    m.set_column(j, o.coords(a * o.element(e)));
  }
  Integer den = 1;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) den = lcm(den, Integer(m(i, j).get_den()));
  ZMatrix z(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) z(i, j) = Integer(m(i, j) * den);
  return make_ideal(o, den, z, abs(det(z)));
}

FracIdeal FracIdeal::from_generators(const Order& o, const std::vector<NFElement>& gens) {
  std::optional<FracIdeal> acc;
  for (auto& g : gens) {
    if (g.is_zero()) continue;
    FracIdeal p = principal(o, g);
    acc = acc ? ideal_sum(*acc, p) : p;
  }
  require(acc.has_value(), Errc::ZeroIdeal, "ideal generated by zero");
  return *acc;
}

bool FracIdeal::is_unit() const { return *this == unit(o_); }

std::vector<NFElement> FracIdeal::basis() const {
  std::vector<NFElement> out;
  const size_t n = h_.cols();
  for (size_t j = 0; j < n; ++j) {
    QVector c(n);
    for (size_t i = 0; i < n; ++i) c[i] = frac(h_(i, j), den_);
    out.push_back(o_.element(c));
  }
  return out;
}

bool FracIdeal::contains(const NFElement& x) const {
  QVector c = o_.coords(x);
  ZVector z(c.size());
  for (size_t i = 0; i < c.size(); ++i) {
    Rational s = c[i] * den_;
    if (s.get_den() != 1) return false;
    z[i] = s.get_num();
  }
  return hnf_solve(h_, z).has_value();
}

bool FracIdeal::contains(const FracIdeal& b) const {
  require(o_ == b.o_, Errc::OrderMismatch, "containment across orders");
  // b ⊆ this  iff  den_ * b.h columns / b.den lie in span(h_)
  const size_t n = h_.cols();
  for (size_t j = 0; j < n; ++j) {
    ZVector z(n);
    for (size_t i = 0; i < n; ++i) {
      Integer num = b.h_(i, j) * den_;
      if (!mpz_divisible_p(num.get_mpz_t(), b.den_.get_mpz_t())) return false;
      z[i] = num / b.den_;
    }
    if (!hnf_solve(h_, z)) return false;
  }
  return true;
}

Integer FracIdeal::min_integer() const {
  require(is_integral(), Errc::NonIntegralIdeal, "min_integer needs an integral ideal");
  return h_(0, 0);
}

bool FracIdeal::operator<(const FracIdeal& o) const {
  if (den_ != o.den_) return den_ < o.den_;
  const size_t n = h_.rows();
  for (size_t j = 0; j < n; ++j)
    for (size_t i = 0; i < n; ++i)
      if (h_(i, j) != o.h_(i, j)) return h_(i, j) < o.h_(i, j);
  return false;
}

std::string FracIdeal::to_string() const {
  std::ostringstream s;
  s << "{\"den\": " << den_.get_str() << ", \"hnf\": [";
  const size_t n = h_.rows();
  for (size_t j = 0; j < n; ++j) {
    s << (j ? ", [" : "[");
    for (size_t i = 0; i < n; ++i) s << (i ? ", " : "") << h_(i, j).get_str();
    s << "]";
  }
  s << "]}";
  return s.str();
}

FracIdeal ideal_product(const FracIdeal& a, const FracIdeal& b) {
  require(a.order() == b.order(), Errc::OrderMismatch, "ideals from different orders");
  const Order& o = a.order();
  const size_t n = static_cast<size_t>(o.degree());
  ZMatrix g(n, n * n);
  for (size_t i = 0; i < n; ++i) {
    ZMatrix m = o.mult_matrix(a.hnf().column(i)) * b.hnf();
    for (size_t j = 0; j < n; ++j)
      for (size_t r = 0; r < n; ++r) g(r, i * n + j) = m(r, j);
  }
  Integer modulus = det(a.hnf()) * det(b.hnf());
  return make_ideal(o, a.den() * b.den(), g, modulus);
}

FracIdeal ideal_sum(const FracIdeal& a, const FracIdeal& b) {
  require(a.order() == b.order(), Errc::OrderMismatch, "ideals from different orders");
  const size_t n = static_cast<size_t>(a.order().degree());
  Integer den = lcm(a.den(), b.den());
  Integer sa = den / a.den(), sb = den / b.den();
  ZMatrix g(n, 2 * n);
  for (size_t j = 0; j < n; ++j)
    for (size_t i = 0; i < n; ++i) {
      g(i, j) = a.hnf()(i, j) * sa;
      g(i, n + j) = b.hnf()(i, j) * sb;
    }
  Integer m = gcd(det(a.hnf()) * sa, det(b.hnf()) * sb);
  // det of a sublattice times any vector lies in it, so gcd of both works
  return make_ideal(a.order(), den, g, m);
}

namespace {

// Trace dual {x : Tr(x L) ⊆ Z} of the lattice (1/den) span(h).
FracIdeal dual(const FracIdeal& a) {
  const Order& o = a.order();
  const size_t n = static_cast<size_t>(o.degree());
  QMatrix c(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) c(i, j) = frac(a.hnf()(i, j), a.den());
  QMatrix dm = inverse(c.transpose() * to_rational(o.trace_form()));
  Integer den = 1;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) den = lcm(den, Integer(dm(i, j).get_den()));
  ZMatrix z(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) z(i, j) = Integer(dm(i, j) * den);
  return make_ideal(o, den, z, abs(det(z)));
}

}  // namespace

namespace {

// {x : x a ⊆ O}; the true inverse whenever a is invertible.
FracIdeal colon_unit(const FracIdeal& a) {
  FracIdeal codiff = dual(FracIdeal::unit(a.order()));
  return dual(ideal_product(a, codiff));
}

}  // namespace

FracIdeal ideal_inverse(const FracIdeal& a) {
  require(a.order().is_maximal(), Errc::Unsupported, "ideal inverse needs the maximal order");
  return colon_unit(a);
}

FracIdeal ideal_pow(const FracIdeal& a, long e) {
  FracIdeal base = e < 0 ? ideal_inverse(a) : a;
  unsigned long k = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  FracIdeal r = FracIdeal::unit(a.order());
  while (k) {
    if (k & 1) r = ideal_product(r, base);
    k >>= 1;
    if (k) base = ideal_product(base, base);
  }
  return r;
}

FracIdeal ideal_scale(const FracIdeal& a, const NFElement& s) {
  return ideal_product(a, FracIdeal::principal(a.order(), s));
}

Rational numerical_norm(const FracIdeal& a) {
  const size_t n = static_cast<size_t>(a.order().degree());
  return Rational(det(a.hnf())) / Rational(pow(a.den(), static_cast<unsigned long>(n)));
}

FracIdeal ideal_image(const FracIdeal& a, const FieldMorphism& m, const Order& target) {
  require(m.source() == a.order().field() && m.target() == target.field(), Errc::OrderMismatch,
          "morphism does not match the ideal and target order");
  std::vector<NFElement> gens;
  for (auto& b : a.basis()) gens.push_back(m(b));
  return FracIdeal::from_generators(target, gens);
}

// ---------------------------------------------------------------- primes

namespace {

std::vector<long> poly_mod(const std::vector<long>& c, long p) {
  std::vector<long> r = c;
  for (auto& x : r) x = ((x % p) + p) % p;
  return r;
}

struct Splitter {
  const Order& o;
  const OrderData& d;
  long p;
  std::mt19937_64 rng;
  std::vector<FracIdeal> found;
  std::vector<int> degrees;

  std::vector<long> reduce(const ZMatrix& h, const std::vector<long>& v) const {
    ZVector z(v.begin(), v.end());
    z = hnf_reduce(h, z);
    std::vector<long> out(z.size());
    for (size_t i = 0; i < z.size(); ++i) out[i] = to_long_mod(z[i], p);
    return out;
  }

  void split(const ZMatrix& J) {
    const size_t n = d.n;
    std::vector<size_t> free;
    for (size_t i = 0; i < n; ++i)
      if (J(i, i) != 1) free.push_back(i);
    const size_t dim = free.size();
    if (dim == 1) {
      found.emplace_back(o, 1, J);
      degrees.push_back(1);
      return;
    }
    std::uniform_int_distribution<long> dist(0, p - 1);
    for (int attempt = 0; attempt < 400; ++attempt) {
      std::vector<long> x(n);
      for (auto& c : x) c = dist(rng);
      x = reduce(J, x);
      // Krylov sequence until the first dependency
      std::vector<std::vector<long>> pw;
      std::vector<long> cur(n, 0);
      cur[0] = 1;
      cur = reduce(J, cur);
      std::vector<long> minpoly;
      for (size_t k = 0; k <= dim; ++k) {
        pw.push_back(cur);
        std::vector<std::vector<long>> rows(dim, std::vector<long>(pw.size()));
        for (size_t r = 0; r < dim; ++r)
          for (size_t c = 0; c < pw.size(); ++c) rows[r][c] = pw[c][free[r]];
        auto ker = kernel_mod_p(rows, pw.size(), p);
        if (!ker.empty()) {
          std::vector<long> v = ker[0];
          long lead = v.back();
          // normalize to monic
          long inv = 1;
          {
            long a = lead, e = p - 2;
            long base = a;
            inv = 1;
            while (e) {
              if (e & 1) inv = static_cast<long>(static_cast<__int128>(inv) * base % p);
              base = static_cast<long>(static_cast<__int128>(base) * base % p);
              e >>= 1;
            }
          }
          for (auto& c : v) c = static_cast<long>(static_cast<__int128>(c) * inv % p);
          minpoly = v;
          break;
        }
        cur = reduce(J, mul_mod(d, cur, x, p));
      }
      auto fac = factor_mod_p(poly_mod(minpoly, p), p);
      if (fac.size() == 1) {
        if (fac[0].first.size() - 1 == dim) {
          found.emplace_back(o, 1, J);
          degrees.push_back(static_cast<int>(dim));
          return;
        }
        continue;
      }
      for (auto& [g, mult] : fac) {
        // g(x) in the order, then J + g(x) O
        std::vector<long> val(n, 0);
        for (size_t t = g.size(); t-- > 0;) {
          val = mul_mod(d, val, x, p);
          val[0] = (val[0] + g[t]) % p;
        }
        ZVector gv(val.begin(), val.end());
        ZMatrix m = o.mult_matrix(gv);
        ZMatrix gens(n, 2 * n);
        for (size_t i = 0; i < n; ++i)
          for (size_t j = 0; j < n; ++j) {
            gens(i, j) = J(i, j);
            gens(i, n + j) = m(i, j);
          }
        split(hnf(gens, Integer(p)));
      }
      return;
    }
    fail(Errc::Unsupported, "prime splitting did not separate the residue algebra");
  }
};

NFElement anti_uniformizer(const FracIdeal& P) {
  FracIdeal inv = colon_unit(P);
  for (auto& b : inv.basis())
    if (!P.order().contains(b)) return b;
  fail(Errc::InvalidArgument, "no element of P^-1 outside the order");
}

long element_valuation(NFElement x, const PrimeIdeal& P, const NFElement& beta) {
  const Order& o = P.ideal.order();
  require(!x.is_zero(), Errc::ZeroElement, "valuation of zero");
  // x = y / d with y in the order
  Integer d = 1;
  for (auto& c : o.coords(x)) d = lcm(d, Integer(c.get_den()));
  x *= Rational(d);
  long v = 0;
  while (mpz_divisible_p(d.get_mpz_t(), P.p.get_mpz_t())) {
    d /= P.p;
    v -= P.e;
  }
  while (P.ideal.contains(x)) {
    x *= beta;
    ++v;
  }
  return v;
}

}  // namespace

std::vector<PrimeIdeal> prime_split(const Integer& p, const Order& o) {
  require(p > 1 && is_probable_prime(p), Errc::InvalidArgument, "prime_split needs a prime");
  require(p < Integer(1) << 31, Errc::Unsupported, "prime too large");
  require(!mpz_divisible_p(o.index_in_maximal().get_mpz_t(), p.get_mpz_t()), Errc::IndexDivisible,
          "p divides the order index");
  const OrderData& d = *o.data();
  {
    std::lock_guard<std::mutex> lock(d.cache_mutex);
    auto it = d.primes.find(p);
    if (it != d.primes.end()) return it->second;
  }
  long pl = p.get_si();
  ZMatrix rad = p_radical(d, pl);
  Splitter s{o, d, pl, std::mt19937_64(static_cast<unsigned long>(pl) * 7919UL + 17UL), {}, {}};
  s.split(rad);
  std::vector<PrimeIdeal> out;
  for (size_t i = 0; i < s.found.size(); ++i) {
    PrimeIdeal P;
    P.ideal = s.found[i];
    P.p = p;
    P.f = s.degrees[i];
    P.e = 1;
    out.push_back(P);
  }
  // ramification: valuation of p, through an anti-uniformizer
  for (auto& P : out) {
    NFElement beta = anti_uniformizer(P.ideal);
    NFElement x = o.field().from_rational(Rational(p));
    int e = 0;
    while (P.ideal.contains(x)) {
      x *= beta;
      ++e;
    }
    P.e = e;
  }
  std::sort(out.begin(), out.end(), [](const PrimeIdeal& a, const PrimeIdeal& b) {
    if (a.f != b.f) return a.f < b.f;
    if (a.e != b.e) return a.e < b.e;
    return a.ideal < b.ideal;
  });
  int total = 0;
  for (auto& P : out) total += P.e * P.f;
  require(total == o.degree(), Errc::InvalidArgument, "prime splitting failed: sum e f != n");
  std::lock_guard<std::mutex> lock(d.cache_mutex);
  d.primes[p] = out;
  return out;
}

long valuation(const NFElement& a, const Order& o, const PrimeIdeal& P) {
  require(P.ideal.order() == o, Errc::OrderMismatch, "prime from another order");
  return element_valuation(a, P, anti_uniformizer(P.ideal));
}

long valuation(const FracIdeal& a, const PrimeIdeal& P) {
  require(a.order() == P.ideal.order(), Errc::OrderMismatch, "prime from another order");
  NFElement beta = anti_uniformizer(P.ideal);
  long v = 0;
  bool first = true;
  for (auto& b : a.basis()) {
    if (b.is_zero()) continue;
    long w = element_valuation(b, P, beta);
    if (first || w < v) v = w;
    first = false;
  }
  return v;
}

std::vector<std::pair<PrimeIdeal, long>> factor_ideal(const FracIdeal& a) {
  const Order& o = a.order();
  require(o.is_maximal(), Errc::Unsupported, "factorization needs the maximal order");
  Integer N = det(a.hnf()) * a.den();
  std::vector<std::pair<PrimeIdeal, long>> out;
  if (N == 1) return out;
  for (auto& [p, e] : factor_integer(N)) {
    (void)e;
    for (auto& P : prime_split(p, o)) {
      long v = valuation(a, P);
      if (v != 0) out.emplace_back(P, v);
    }
  }
  return out;
}

FracIdeal from_factorization(const Order& o, const std::vector<std::pair<PrimeIdeal, long>>& fac) {
  FracIdeal r = FracIdeal::unit(o);
  for (auto& [P, v] : fac) r = ideal_product(r, ideal_pow(P.ideal, v));
  return r;
}

// ---------------------------------------------------------------- principality

std::optional<FieldMorphism> positive_involution(const NumberField& k) {
  if (k.is_totally_real()) return FieldMorphism(k, k.gen());
  if (!k.is_totally_imaginary()) return std::nullopt;
  RootIsolation iso = k.roots();
  for (auto& s : nf_automorphisms(k)) {
    if (s.is_identity()) continue;
    if (!s.after(s).is_identity()) continue;
    bool ok = true;
    for (size_t i = 0; i < iso.roots.size() && ok; ++i) ok = identify_root(k, s.image(), i) == iso.conj[i];
    if (ok) return s;
  }
  return std::nullopt;
}

QMatrix t2_gram(const FracIdeal& a, const FieldMorphism& conj) {
  auto b = a.basis();
  const size_t n = b.size();
  std::vector<NFElement> cb;
  for (auto& x : b) cb.push_back(conj(x));
  QMatrix g(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i; j < n; ++j) g(i, j) = g(j, i) = (b[i] * cb[j]).trace();
  return g;
}

std::vector<NFElement> short_elements(const FracIdeal& a, const FieldMorphism& conj, const Rational& bound,
                                      unsigned long budget) {
  if (budget == 0) budget = default_budget();
  QMatrix g = t2_gram(a, conj);
  auto b = a.basis();
  std::vector<std::pair<Rational, NFElement>> found;
  enumerate_short_vectors(
      g, bound,
      [&](const ZVector& x, const Rational& len) {
        NFElement e = a.order().field().zero();
        for (size_t i = 0; i < x.size(); ++i)
          if (x[i] != 0) e += b[i] * Rational(x[i]);
        found.emplace_back(len, e);
        return false;
      },
      budget);
  std::sort(found.begin(), found.end(), [](const auto& u, const auto& v) {
    if (u.first != v.first) return u.first < v.first;
    return u.second.coords() < v.second.coords();
  });
  std::vector<NFElement> out;
  for (auto& f : found) out.push_back(f.second);
  return out;
}

namespace {

std::optional<FieldMorphism> cached_involution(const Order& o) {
  const OrderData& d = *o.data();
  {
    std::lock_guard<std::mutex> lock(d.cache_mutex);
    if (d.involution) return *d.involution;
  }
  auto inv = positive_involution(o.field());
  std::lock_guard<std::mutex> lock(d.cache_mutex);
  d.involution = inv;
  return inv;
}

// c such that some generator of every principal ideal of norm N has
// T2 <= c * N^(2/n) (c * sqrt N for quartics).
Rational unit_factor(const Order& o, const FieldMorphism& conj) {
  const OrderData& d = *o.data();
  {
    std::lock_guard<std::mutex> lock(d.cache_mutex);
    if (d.unit_factor) return *d.unit_factor;
  }
  Rational c;
  const int n = o.degree();
  if (n <= 2) {
    require(n == 1 || !o.field().is_totally_real(), Errc::Unsupported, "real quadratic principality is not supported");
    c = n;
  } else if (n == 4 && !o.field().is_totally_real()) {
    Subfield F = fixed_field(o.field(), {FieldMorphism(o.field(), o.field().gen()), conj});
    Order of = Order::maximal(F.field);
    auto [x, y] = real_quadratic_fundamental_unit(of.disc());
    Rational s = (x * x - of.disc() * y * y == 4) ? Rational(x) : Rational(y) * sqrt_upper(Rational(of.disc()), 32);
    c = 2 * s;
  } else {
    fail(Errc::Unsupported, "principality testing supports CM fields of degree <= 4");
  }
  std::lock_guard<std::mutex> lock(d.cache_mutex);
  d.unit_factor = c;
  return c;
}

}  // namespace

std::optional<NFElement> is_principal(const FracIdeal& a, unsigned long budget) {
  const Order& o = a.order();
  require(o.is_maximal(), Errc::Unsupported, "principality needs the maximal order");
  if (budget == 0) budget = default_budget();
  const int n = o.degree();
  FracIdeal ai(o, 1, a.hnf());
  Integer N = det(ai.hnf());
  Rational scale = frac(1, a.den());
  if (n == 1) return o.field().from_rational(Rational(N) * scale);
  auto conj = cached_involution(o);
  require(conj.has_value(), Errc::Unsupported, "principality needs a CM or totally real field");
  Rational c = unit_factor(o, *conj);
  Rational bound;
  if (n == 2)
    bound = c * Rational(N);
  else
    bound = c * sqrt_upper(Rational(N), 32);
  QMatrix g = t2_gram(ai, *conj);
  auto b = ai.basis();
  std::optional<NFElement> gen;
  enumerate_short_vectors(
      g, bound,
      [&](const ZVector& x, const Rational&) {
        NFElement e = o.field().zero();
        for (size_t i = 0; i < x.size(); ++i)
          if (x[i] != 0) e += b[i] * Rational(x[i]);
        if (abs(e.norm()) == Rational(N)) {
          gen = e;
          return true;
        }
        return false;
      },
      budget);
  if (!gen) return std::nullopt;
  return *gen * scale;
}

std::vector<NFElement> roots_of_unity(const Order& o) {
  auto conj = cached_involution(o);
  require(conj.has_value(), Errc::Unsupported, "roots of unity need a CM or totally real field");
  const int n = o.degree();
  std::vector<NFElement> out;
  for (auto& x : short_elements(FracIdeal::unit(o), *conj, Rational(n))) {
    if ((x * (*conj)(x)).trace() != n) continue;
    out.push_back(x);
    out.push_back(-x);
  }
  std::sort(out.begin(), out.end(), [](const NFElement& u, const NFElement& v) { return u.coords() < v.coords(); });
  return out;
}

// ---------------------------------------------------------------- coprime scaling

CoprimeScale coprime_scale(const FracIdeal& a, const Integer& m) {
  const Order& o = a.order();
  require(m > 0, Errc::InvalidArgument, "modulus must be positive");
  auto coprime = [&](const FracIdeal& b) {
    return b.is_integral() && gcd(Integer(numerical_norm(b).get_num()), m) == 1;
  };
  if (coprime(a)) return {o.field().one(), a};
  std::vector<PrimeIdeal> primes;
  if (m > 1)
    for (auto& [p, e] : factor_integer(m)) {
      (void)e;
      for (auto& P : prime_split(p, o)) primes.push_back(P);
    }
  FracIdeal B = ideal_inverse(a);
  std::vector<FracIdeal> BP;
  for (auto& P : primes) BP.push_back(ideal_product(B, P.ideal));
  auto basis = B.basis();
  const size_t n = basis.size();
  auto try_scalar = [&](const NFElement& s) -> std::optional<CoprimeScale> {
    if (s.is_zero()) return std::nullopt;
    for (auto& bp : BP)
      if (bp.contains(s)) return std::nullopt;
    FracIdeal b = ideal_scale(a, s);
    if (!coprime(b)) return std::nullopt;
    return CoprimeScale{s, b};
  };
  for (auto& s : basis)
    if (auto r = try_scalar(s)) return *r;
  for (long R = 1; R < 64; ++R) {
    std::vector<long> c(n, -R);
    while (true) {
      long mx = 0;
      for (long v : c) mx = std::max(mx, std::labs(v));
      if (mx == R) {
        NFElement s = o.field().zero();
        for (size_t i = 0; i < n; ++i)
          if (c[i]) s += basis[i] * Rational(c[i]);
        if (auto r = try_scalar(s)) return *r;
      }
      size_t i = n;
      while (i-- > 0) {
        if (c[i] < R) {
          ++c[i];
          break;
        }
        c[i] = -R;
      }
      if (i == static_cast<size_t>(-1)) break;
    }
  }
  fail(Errc::SearchExhausted, "coprime scaling search exhausted");
}

// ---------------------------------------------------------------- real quadratic units

std::pair<Integer, Integer> real_quadratic_fundamental_unit(const Integer& D) {
  require(D > 1, Errc::InvalidArgument, "real quadratic discriminant must exceed 1");
  Integer r = sqrt(D);
  require(r * r != D, Errc::InvalidArgument, "discriminant is a square");
  const bool odd = mod(D, Integer(4)) == 1;
  // continued fraction of (P0 + sqrt(N)) / Q0: for D = 4N this is sqrt(N),
  // for odd D it is (sqrt(D) - 1) / 2
  Integer N = odd ? D : D / 4;
  Integer P = odd ? Integer(-1) : Integer(0), Q = odd ? Integer(2) : Integer(1);
  Integer sN = sqrt(N);
  Integer p0 = 1, p1 = 0, q0 = 0, q1 = 1;  // convergents h_{-1}, h_{-2}
  for (int it = 0; it < 200000; ++it) {
    // a = floor((P + sqrt N) / Q)
    Integer a = Q > 0 ? floor_div(P + sN, Q) : floor_div(P + sN + 1, Q);
    Integer h = a * p0 + p1, k = a * q0 + q1;
    p1 = p0;
    p0 = h;
    q1 = q0;
    q0 = k;
    if (k > 0) {
      if (odd) {
        // unit h + k w, w = (1 + sqrt D) / 2: norm h^2 + hk - k^2 (D-1)/4
        Integer nm = h * h + h * k - k * k * ((D - 1) / 4);
        if (nm == 1 || nm == -1) return {2 * h + k, k};
      } else {
        Integer nm = h * h - N * k * k;
        if (nm == 1 || nm == -1) return {2 * h, k};
      }
    }
    P = a * Q - P;
    Q = (N - P * P) / Q;
  }
  fail(Errc::SearchExhausted, "fundamental unit search exhausted");
}

}  // namespace cmreflex
