#include "cmreflex/latticeav.hpp"

#include <algorithm>
#include <functional>

#include "cmreflex/enumerate.hpp"
#include "cmreflex/errors.hpp"

namespace cmreflex {

LatticeAV::LatticeAV(CMType t, FracIdeal l) : type(std::move(t)), lattice(std::move(l)) {
  require(lattice.order() == type.cm.order, Errc::OrderMismatch, "lattice is not an ideal of O_E");
}

bool LatticeAV::operator==(const LatticeAV& o) const {
  return type.cm.field == o.type.cm.field && type.phi == o.type.phi && lattice == o.lattice;
}

AMult amul(const LatticeAV& A, const FracIdeal& a) {
  require(a.is_integral(), Errc::NonIntegralIdeal, "a-multiplication needs an integral ideal");
  return AMult{A, LatticeAV(A.type, ideal_inverse(a) * A.lattice), a};
}

Integer lattice_index(const FracIdeal& outer, const FracIdeal& inner) {
  Rational q = numerical_norm(inner) / numerical_norm(outer);
  require(q.get_den() == 1 && outer.contains(inner), Errc::InvalidArgument, "not a sublattice");
  return q.get_num();
}

Integer amul_degree(const AMult& l) { return lattice_index(l.target.lattice, l.source.lattice); }

Integer elem_degree(const LatticeAV& A, const NFElement& alpha) {
  require(!alpha.is_zero(), Errc::ZeroElement, "zero multiplier");
  require(A.type.cm.order.contains(alpha), Errc::InvalidArgument, "multiplier not in O_E");
  return abs(alpha.norm()).get_num();
}

AMult compose(const AMult& lambda, const AMult& mu) {
  require(lambda.target == mu.source, Errc::CompositionMismatch, "target and source differ");
  return AMult{lambda.source, mu.target, mu.ideal * lambda.ideal};
}

FracIdeal hom_ideal(const LatticeAV& A, const LatticeAV& B) {
  require(A.type.cm.field == B.type.cm.field && A.type.phi == B.type.phi, Errc::PairMismatch,
          "different CM-pairs");
  return ideal_inverse(A.lattice) * B.lattice;
}

std::optional<NFElement> isomorphism(const LatticeAV& A, const LatticeAV& B) { return is_principal(hom_ideal(A, B)); }

Integer min_isogeny_degree(const LatticeAV& A, const LatticeAV& B) {
  require(A.type.cm.field.degree() == 2, Errc::Unsupported, "minimal degree search needs an imaginary quadratic field");
  FracIdeal H = hom_ideal(A, B);
  // degree of x -> a x is N(a) N(A) / N(B); for quadratic fields N(a) = T2(a) / 2
  QMatrix g = t2_gram(H, A.type.cm.conj);
  Rational best = -1;
  for (Rational bound = 2 * g(0, 0);; bound *= 2) {
    enumerate_short_vectors(
        g, bound,
        [&](const ZVector&, const Rational& len) {
          if (best < 0 || len < best) best = len;
          return false;
        },
        default_budget());
    if (best >= 0) break;
  }
  Rational deg = best / 2 * numerical_norm(A.lattice) / numerical_norm(B.lattice);
  return deg.get_num();
}

bool factor_through(const AMult& lambda, const AMult& mu) {
  require(lambda.source == mu.source, Errc::SourceMismatch, "different sources");
  return lambda.ideal.contains(mu.ideal);
}

std::vector<FracIdeal> ideal_class_representatives(const Order& o) {
  const NumberField& k = o.field();
  const int n = k.degree();
  // Minkowski bound (4/pi)^r2 n!/n^n sqrt|d|, rounded up
  int r2 = 0;
  for (auto& r : k.roots().roots)
    if (!r.is_real_point()) ++r2;
  r2 /= 2;
  Rational M = pow(Rational(12733, 10000), r2);
  for (int i = 1; i <= n; ++i) M *= Rational(i, n);
  Integer d = abs(Rational(o.disc())).get_num();
  M *= Rational(isqrt_ceil(d));
  const long bound = static_cast<long>(floor_div(M.get_num(), M.get_den()).get_si());

  std::vector<PrimeIdeal> primes;
  for (long p : primes_up_to(bound))
    for (auto& P : prime_split(p, o))
      if (pow(P.p, static_cast<unsigned long>(P.f)) <= bound) primes.push_back(P);

  std::vector<std::pair<Integer, FracIdeal>> ideals;
  std::function<void(size_t, const FracIdeal&, const Integer&)> grow = [&](size_t from, const FracIdeal& a,
                                                                          const Integer& norm) {
    ideals.emplace_back(norm, a);
    for (size_t i = from; i < primes.size(); ++i) {
      Integer nn = norm * pow(primes[i].p, static_cast<unsigned long>(primes[i].f));
      if (nn <= bound) grow(i, a * primes[i].ideal, nn);
    }
  };
  grow(0, FracIdeal::unit(o), Integer(1));
  std::sort(ideals.begin(), ideals.end(), [](const auto& x, const auto& y) {
    return x.first != y.first ? x.first < y.first : x.second < y.second;
  });
  std::vector<FracIdeal> reps;
  for (auto& [nm, a] : ideals) {
    bool seen = false;
    for (auto& r : reps)
      if (is_principal(a * ideal_inverse(r))) {
        seen = true;
        break;
      }
    if (!seen) reps.push_back(a);
  }
  return reps;
}

std::vector<LatticeAV> isogeny_classes(const CMType& phi) {
  std::vector<LatticeAV> out;
  for (auto& r : ideal_class_representatives(phi.cm.order)) out.emplace_back(phi, r);
  return out;
}

namespace {

// Integer coordinates of x on the basis of the lattice a.
ZVector lattice_coords(const FracIdeal& a, const NFElement& x) {
  QVector c = a.order().coords(x);
  ZVector y(c.size());
  for (size_t i = 0; i < c.size(); ++i) {
    Rational v = c[i] * Rational(a.den());
    require(v.get_den() == 1, Errc::InvalidArgument, "element not in the lattice");
    y[i] = v.get_num();
  }
  auto s = hnf_solve(a.hnf(), y);
  require(s.has_value(), Errc::InvalidArgument, "element not in the lattice");
  return *s;
}

ZVector reduce(ZVector v, long m) {
  for (auto& x : v) x = mod(x, Integer(m));
  return v;
}

ZMatrix reduce(ZMatrix a, long m) {
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) a(i, j) = mod(a(i, j), Integer(m));
  return a;
}

// Advance v through (Z/m)^n lexicographically; false after the last vector.
bool next_vector(ZVector& v, long m) {
  for (size_t i = v.size(); i-- > 0;) {
    if (v[i] + 1 < m) {
      ++v[i];
      return true;
    }
    v[i] = 0;
  }
  return false;
}

}  // namespace

Integer TorsionModule::cardinality() const {
  return pow(Integer(m), static_cast<unsigned long>(av.type.cm.field.degree()));
}

ZVector TorsionModule::act(const ZVector& x, const ZVector& v) const {
  ZVector r(v.size());
  for (size_t k = 0; k < x.size(); ++k) {
    if (x[k] == 0) continue;
    ZVector w = action[k] * v;
    for (size_t i = 0; i < r.size(); ++i) r[i] += x[k] * w[i];
  }
  return reduce(r, m);
}

TorsionModule torsion(const LatticeAV& A, long m) {
  require(m >= 1, Errc::InvalidArgument, "m must be positive");
  TorsionModule T;
  T.av = A;
  T.m = m;
  const Order& o = A.type.cm.order;
  const size_t n = static_cast<size_t>(o.degree());
  auto lb = A.lattice.basis();
  for (auto& w : FracIdeal::unit(o).basis()) {
    ZMatrix a(n, n);
    for (size_t j = 0; j < n; ++j) a.set_column(j, lattice_coords(A.lattice, w * lb[j]));
    T.action.push_back(reduce(a, m));
  }
  T.generator = ZVector(n, 0);
  if (m == 1) return T;
  auto generates = [&](const ZVector& v) {
    ZMatrix span(n, n);
    for (size_t k = 0; k < n; ++k) span.set_column(k, T.action[k] * v);
    return gcd(det(span), Integer(m)) == 1;
  };
  // basis cosets first, then everything in lexicographic order
  for (size_t i = 0; i < n; ++i) {
    ZVector e(n, 0);
    e[i] = 1;
    if (generates(e)) {
      T.generator = e;
      return T;
    }
  }
  ZVector v(n, 0);
  while (next_vector(v, m))
    if (generates(v)) {
      T.generator = v;
      return T;
    }
  fail(Errc::InvalidArgument, "torsion module is not cyclic");
}

ZMatrix induced_map(const AMult& l, long m) {
  const size_t n = static_cast<size_t>(l.source.type.cm.field.degree());
  auto sb = l.source.lattice.basis();
  ZMatrix a(n, n);
  for (size_t j = 0; j < n; ++j) a.set_column(j, lattice_coords(l.target.lattice, sb[j]));
  return reduce(a, m);
}

bool is_bijection_mod(const ZMatrix& map, long m) {
  const size_t n = map.cols();
  std::vector<ZVector> images;
  ZVector v(n, 0);
  do images.push_back(reduce(map * v, m));
  while (next_vector(v, m));
  std::sort(images.begin(), images.end());
  return std::adjacent_find(images.begin(), images.end()) == images.end();
}

bool commutant_is_scalar(const TorsionModule& T) {
  const size_t n = T.generator.size();
  const long m = T.m;
  double count = 1;
  for (size_t i = 0; i < n * n; ++i) count *= static_cast<double>(m);
  require(count <= double(1 << 22), Errc::Unsupported, "commutant enumeration too large");
  // multiplications by elements of O_E/m
  std::vector<ZMatrix> scalars;
  ZVector x(n, 0);
  do {
    ZMatrix s(n, n);
    for (size_t k = 0; k < n; ++k)
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) s(i, j) += x[k] * T.action[k](i, j);
    scalars.push_back(reduce(s, m));
  } while (next_vector(x, m));
  auto key = [](const ZMatrix& a) { return a.columns(); };
  std::vector<std::vector<ZVector>> keys;
  for (auto& s : scalars) keys.push_back(key(s));
  std::sort(keys.begin(), keys.end());
  ZVector flat(n * n, 0);
  do {
    ZMatrix M(n, n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) M(i, j) = flat[i * n + j];
    bool commutes = true;
    for (auto& a : T.action)
      if (reduce(M * a, m) != reduce(a * M, m)) {
        commutes = false;
        break;
      }
    if (commutes && !std::binary_search(keys.begin(), keys.end(), key(M))) return false;
  } while (next_vector(flat, m));
  return true;
}

}  // namespace cmreflex
