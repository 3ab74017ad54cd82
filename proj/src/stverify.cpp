#include "cmreflex/stverify.hpp"

#include <algorithm>
#include <random>

#include "cmreflex/enumerate.hpp"
#include "cmreflex/errors.hpp"
#include "cmreflex/factor.hpp"
#include "cmreflex/latticeav.hpp"

namespace cmreflex {

namespace {

long md(long a, long p) {
  a %= p;
  return a < 0 ? a + p : a;
}

long mulm(long a, long b, long p) { return static_cast<long>(static_cast<__int128>(a) * b % p); }

long powm(long b, long e, long p) {
  long r = 1 % p;
  b = md(b, p);
  for (; e > 0; e >>= 1, b = mulm(b, b, p))
    if (e & 1) r = mulm(r, b, p);
  return r;
}

long invm(long a, long p) { return powm(a, p - 2, p); }

long md(const Integer& a, long p) { return mod(a, Integer(p)).get_si(); }

// F_{p^2} = F_p[s] / (s^2 - nr).
struct Fp2 {
  long a = 0, b = 0;
  bool operator==(const Fp2& o) const { return a == o.a && b == o.b; }
  bool operator!=(const Fp2& o) const { return !(*this == o); }
};

struct Field2 {
  long p, nr;

  explicit Field2(long p_) : p(p_), nr(2) {
    while (powm(nr, (p - 1) / 2, p) != p - 1) ++nr;
  }
  Fp2 c(long x) const { return {md(x, p), 0}; }
  Fp2 add(Fp2 x, Fp2 y) const { return {md(x.a + y.a, p), md(x.b + y.b, p)}; }
  Fp2 sub(Fp2 x, Fp2 y) const { return {md(x.a - y.a, p), md(x.b - y.b, p)}; }
  Fp2 neg(Fp2 x) const { return {md(-x.a, p), md(-x.b, p)}; }
  Fp2 mul(Fp2 x, Fp2 y) const {
    long a = md(mulm(x.a, y.a, p) + mulm(mulm(x.b, y.b, p), nr, p), p);
    long b = md(mulm(x.a, y.b, p) + mulm(x.b, y.a, p), p);
    return {a, b};
  }
  long norm(Fp2 x) const { return md(mulm(x.a, x.a, p) - mulm(mulm(x.b, x.b, p), nr, p), p); }
  Fp2 inv(Fp2 x) const {
    long n = invm(norm(x), p);
    return {mulm(x.a, n, p), md(-mulm(x.b, n, p), p)};
  }
  Fp2 pow(Fp2 x, Integer e) const {
    Fp2 r = c(1);
    while (e > 0) {
      if (mpz_odd_p(e.get_mpz_t())) r = mul(r, x);
      x = mul(x, x);
      e >>= 1;
    }
    return r;
  }
  // x^p: s^p = -s
  Fp2 frob(Fp2 x) const { return {x.a, md(-x.b, p)}; }
  bool is_square(Fp2 x) const {
    if (x == c(0)) return true;
    return powm(norm(x), (p - 1) / 2, p) == 1;
  }
  // Tonelli-Shanks in the group of order p^2 - 1.
  std::optional<Fp2> sqrt(Fp2 x) const {
    if (x == c(0)) return x;
    if (!is_square(x)) return std::nullopt;
    Integer q = Integer(p) * p - 1;
    unsigned long S = 0;
    while (mpz_even_p(q.get_mpz_t())) {
      q >>= 1;
      ++S;
    }
    Fp2 z{1, 1};
    while (is_square(z)) z = add(z, c(1));
    Fp2 m_c = pow(z, q), t = pow(x, q), r = pow(x, (q + 1) / 2);
    unsigned long M = S;
    while (t != c(1)) {
      unsigned long i = 0;
      Fp2 tt = t;
      while (tt != c(1)) {
        tt = mul(tt, tt);
        ++i;
      }
      Fp2 bb = m_c;
      for (unsigned long j = 0; j + 1 < M - i; ++j) bb = mul(bb, bb);
      M = i;
      m_c = mul(bb, bb);
      t = mul(t, m_c);
      r = mul(r, bb);
    }
    return r;
  }
};

struct Pt {
  bool inf = true;
  Fp2 x, y;
  bool operator==(const Pt& o) const { return inf == o.inf && (inf || (x == o.x && y == o.y)); }
};

struct Curve2 {
  Field2 F;
  Fp2 a4, a6;

  Fp2 rhs(Fp2 x) const { return F.add(F.add(F.mul(F.mul(x, x), x), F.mul(a4, x)), a6); }
  bool on(const Pt& P) const { return P.inf || F.mul(P.y, P.y) == rhs(P.x); }
  Pt neg(const Pt& P) const { return P.inf ? P : Pt{false, P.x, F.neg(P.y)}; }
  Pt add(const Pt& P, const Pt& Q) const {
    if (P.inf) return Q;
    if (Q.inf) return P;
    Fp2 l;
    if (P.x == Q.x) {
      if (F.add(P.y, Q.y) == F.c(0)) return Pt{};
      Fp2 num = F.add(F.mul(F.c(3), F.mul(P.x, P.x)), a4);
      l = F.mul(num, F.inv(F.mul(F.c(2), P.y)));
    } else {
      l = F.mul(F.sub(Q.y, P.y), F.inv(F.sub(Q.x, P.x)));
    }
    Fp2 x3 = F.sub(F.sub(F.mul(l, l), P.x), Q.x);
    Fp2 y3 = F.sub(F.mul(l, F.sub(P.x, x3)), P.y);
    return Pt{false, x3, y3};
  }
  Pt mul(Integer n, Pt P) const {
    if (n < 0) {
      n = -n;
      P = neg(P);
    }
    Pt r;
    while (n > 0) {
      if (mpz_odd_p(n.get_mpz_t())) r = add(r, P);
      P = add(P, P);
      n >>= 1;
    }
    return r;
  }
  Pt random_point(std::mt19937_64& rng) const {
    std::uniform_int_distribution<long> d(0, F.p - 1);
    while (true) {
      Fp2 x{d(rng), d(rng)};
      auto y = F.sqrt(rhs(x));
      if (y) return Pt{false, x, *y};
    }
  }
};

Integer curve_disc(const Integer& a4, const Integer& a6) { return 4 * a4 * a4 * a4 + 27 * a6 * a6; }

Curve2 reduce_curve(const CMCurveQ& c, long p) {
  Field2 F(p);
  return Curve2{F, F.c(md(c.a4, p)), F.c(md(c.a6, p))};
}

long scalar_pow(long t, long e, long p) { return e >= 0 ? powm(t, e, p) : powm(invm(t, p), -e, p); }

Pt apply_endo(const Curve2& C, const CMEndo& e, long theta, const Pt& P) {
  if (P.inf) return P;
  long p = C.F.p;
  return Pt{false, C.F.mul(C.F.c(scalar_pow(theta, e.x_power, p)), P.x),
            C.F.mul(C.F.c(scalar_pow(theta, e.y_power, p)), P.y)};
}

std::vector<long> roots_mod(const UniPoly& f, long p) {
  std::vector<long> c;
  for (int i = 0; i <= f.degree(); ++i) {
    const Rational& q = f.coeff(i);
    c.push_back(mulm(md(q.get_num(), p), invm(md(q.get_den(), p), p), p));
  }
  std::vector<long> out;
  for (auto& [g, mult] : factor_mod_p(c, p))
    if (g.size() == 2) out.push_back(md(-g[0] * invm(g[1], p), p));
  std::sort(out.begin(), out.end());
  return out;
}

void require_good(const CMCurveQ& c, long p) {
  require(p >= 3 && is_probable_prime(Integer(p)), Errc::InvalidArgument, "p must be an odd prime");
  require(md(curve_disc(c.a4, c.a6), p) != 0, Errc::InvalidArgument, "bad reduction at p");
}

}  // namespace

long count_points(const CurveFp& c) {
  require(c.p < 1000000, Errc::BudgetExceeded, "naive point count limited to p < 10^6");
  require(c.p >= 3 && is_probable_prime(Integer(c.p)), Errc::InvalidArgument, "p must be an odd prime");
  const long p = c.p;
  const long a4 = md(c.a4, p), a6 = md(c.a6, p);
  require(md(4 * mulm(mulm(a4, a4, p), a4, p) + 27 * mulm(a6, a6, p), p) != 0, Errc::InvalidArgument,
          "singular curve");
  std::vector<int> roots(static_cast<size_t>(p), 0);
  for (long y = 0; y < p; ++y) ++roots[static_cast<size_t>(mulm(y, y, p))];
  long n = 1;
  for (long x = 0; x < p; ++x) n += roots[static_cast<size_t>(md(mulm(mulm(x, x, p), x, p) + mulm(a4, x, p) + a6, p))];
  return n;
}

CMCurveQ make_cm_curve(std::string name, const Integer& a4, const Integer& a6, const CMEndo& endo) {
  NumberField E(endo.gamma_minpoly);
  auto cm = cm_check(E);
  require(cm.has_value() && E.degree() == 2, Errc::InvalidArgument, "CM field must be imaginary quadratic");
  require(curve_disc(a4, a6) != 0, Errc::InvalidArgument, "singular curve");
  return CMCurveQ{std::move(name), a4, a6, *cm, endo};
}

bool check_cm_endo(const CMCurveQ& c, long p, unsigned long seed, int n_points) {
  require_good(c, p);
  Curve2 C = reduce_curve(c, p);
  const UniPoly& g = c.endo.gamma_minpoly;
  std::mt19937_64 rng(seed);
  // in F_{p^2} every quadratic has its roots
  std::vector<long> th = roots_mod(g, p);
  if (th.empty()) return true;  // roots only in F_{p^2}; the relation is checked at split primes
  for (long theta : th)
    for (int i = 0; i < n_points; ++i) {
      Pt P = C.random_point(rng);
      Pt G = apply_endo(C, c.endo, theta, P);
      if (!C.on(G)) return false;
      // gamma^2 + c1 gamma + c0 = 0
      Pt s = C.add(apply_endo(C, c.endo, theta, G), C.mul(g.coeff(1).get_num(), G));
      s = C.add(s, C.mul(g.coeff(0).get_num(), P));
      if (!s.inf) return false;
    }
  return true;
}

FrobeniusData frobenius_element(const CMCurveQ& c, long p, unsigned long seed, int n_points) {
  require_good(c, p);
  long n = count_points(CurveFp{p, md(c.a4, p), md(c.a6, p)});
  long ap = p + 1 - n;
  require(md(ap, p) != 0, Errc::Supersingular, "supersingular reduction at " + std::to_string(p));
  const NumberField& E = c.cm.field;
  const Order& O = c.cm.order;
  std::vector<long> th = roots_mod(c.endo.gamma_minpoly, p);
  require(!th.empty(), Errc::IdentificationFailed, "ordinary prime is not split in E");
  const long theta = th.front();
  const long tangent = scalar_pow(theta, c.endo.x_power - c.endo.y_power, p);

  PrimeIdeal P;
  bool found_prime = false;
  for (auto& q : prime_split(p, O))
    if (q.ideal.contains(E.gen() - E.from_rational(tangent))) {
      P = q;
      found_prime = true;
    }
  require(found_prime, Errc::IdentificationFailed, "tangent action does not determine a prime");

  std::vector<NFElement> cands;
  for (auto& x : short_elements(FracIdeal::unit(O), c.cm.conj, Rational(2 * p)))
    for (const NFElement& y : {x, -x})
      if (y.norm() == p && y.trace() == ap) cands.push_back(y);
  Curve2 C = reduce_curve(c, p);
  std::vector<Pt> pts;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < n_points; ++i) pts.push_back(C.random_point(rng));
  std::vector<NFElement> ok;
  for (auto& pi : cands) {
    const auto& co = pi.coords();
    require(co[0].get_den() == 1 && co[1].get_den() == 1, Errc::IdentificationFailed,
            "gamma does not generate O_E");
    bool all = true;
    for (auto& Q : pts) {
      Pt fr{false, C.F.frob(Q.x), C.F.frob(Q.y)};
      Pt rhs = C.add(C.mul(co[0].get_num(), Q), C.mul(co[1].get_num(), apply_endo(C, c.endo, theta, Q)));
      if (!(fr == rhs)) {
        all = false;
        break;
      }
    }
    if (all) ok.push_back(pi);
  }
  require(ok.size() == 1, Errc::IdentificationFailed,
          std::to_string(ok.size()) + " Frobenius candidates match at p = " + std::to_string(p));
  return FrobeniusData{ok[0], Integer(p), Integer(ap), P, theta};
}

FracIdeal st_rhs(const CMType& phi, const NumberField& k, const PrimeIdeal& P) {
  const Order& oE = phi.cm.order;
  for (auto& v : prime_split(P.p, oE))
    require(v.e == 1, Errc::RamifiedPrime, "p ramifies in E");
  ReflexNorm N(phi, k);
  FracIdeal r = N.of_prime(P);
  Integer q = pow(P.p, static_cast<unsigned long>(P.f));
  require(numerical_norm(r) == Rational(pow(q, static_cast<unsigned long>(phi.cm.g()))), Errc::InvalidArgument,
          "norm of the right-hand side is not q^g");
  require(r * ideal_conjugate(r, phi.cm.conj) == FracIdeal::principal(oE, phi.cm.field.from_rational(q)),
          Errc::InvalidArgument, "right-hand side times its conjugate is not (q)");
  return r;
}

bool st_check_ideal(const FrobeniusData& F, const CMType& phi, const NumberField& k, const PrimeIdeal& P) {
  return FracIdeal::principal(phi.cm.order, F.pi) == st_rhs(phi, k, P);
}

bool ValuationReport::all_ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const ValuationRow& r) { return r.sum_ok && r.ratio_ok; });
}

ValuationReport st_check_valuations(const FracIdeal& ideal, const CMType& phi, const NumberField& k,
                                    const PrimeIdeal& P) {
  ValuationReport rep;
  const Order& oE = phi.cm.order;
  const NumberField& E = phi.cm.field;
  auto vs = prime_split(P.p, oE);
  const bool unramified = std::all_of(vs.begin(), vs.end(), [](const PrimeIdeal& v) { return v.e == 1; });
  if (vs.size() == 1 && vs[0].e == 1 && E.degree() == 2)
    rep.note = "p is inert in E: no ordinary reduction exists, the curve-side check is vacuous";
  // Hom(E, k) with the embeddings of Phi marked
  std::vector<std::pair<FieldMorphism, bool>> homs;
  for (auto& m : field_embeddings(E, k)) homs.emplace_back(m, phi.contains(identify_root(E, m.image(), 0)));
  for (auto& v : vs) {
    ValuationRow row;
    row.v = v;
    row.ord = valuation(ideal, v);
    row.ord_q = static_cast<long>(P.f) * v.e;
    row.sum_applies = unramified;
    for (auto& [m, in_phi] : homs) {
      if (!(prime_below(P, m, oE) == v)) continue;
      ++row.h;
      if (in_phi) {
        ++row.phi_h;
        row.sum_rhs += P.f / v.f;
      }
    }
    if (unramified) row.sum_ok = row.ord == row.sum_rhs;
    row.ratio_ok = row.ord * row.h == row.phi_h * row.ord_q;
    rep.rows.push_back(row);
  }
  return rep;
}

ValuationReport st_check_valuations(const FrobeniusData& F, const CMType& phi, const NumberField& k,
                                    const PrimeIdeal& P) {
  return st_check_valuations(FracIdeal::principal(phi.cm.order, F.pi), phi, k, P);
}

CMType identity_type(const CMField& cm) {
  return make_cm_type(cm, {identify_root(cm.field, cm.field.gen(), 0)});
}

bool frobenius_class_check(const CMCurveQ& c, long p, long m, unsigned long seed) {
  FrobeniusData F = frobenius_element(c, p, seed);
  require(gcd(Integer(m), F.q) == 1, Errc::NotCoprime, "m must be prime to p");
  CMType phi = identity_type(c.cm);
  ReflexData R = reflex_field(phi);
  // the prime of E* below P, through E* -> L <- E
  const Order& oR = R.reflex_type.cm.order;
  FracIdeal up = ideal_image(F.prime_above.ideal, R.closure.embeds[0], R.in_closure->k_order());
  PrimeIdeal below;
  bool found = false;
  for (auto& [Q, v] : factor_ideal(up)) {
    below = prime_below(Q, R.reflex_incl, oR);
    found = true;
    break;
  }
  require(found, Errc::InvalidArgument, "no prime above p in the closure");
  FracIdeal a = FracIdeal::principal(c.cm.order, F.pi);
  if (a != R.norm_ideal(below.ideal)) return false;
  LatticeAV A(phi, FracIdeal::unit(c.cm.order));
  AMult l = amul(A, a);
  return is_bijection_mod(induced_map(l, m), m);
}

}  // namespace cmreflex
