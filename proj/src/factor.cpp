#include "cmreflex/factor.hpp"

#include <algorithm>
#include <functional>
#include <random>

#include "cmreflex/errors.hpp"

namespace cmreflex {

namespace {

// ---------------------------------------------------------------------------
// Polynomials over F_p, p < 2^31, coefficients in [0, p).

using ModPoly = std::vector<long>;

void trim(ModPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

long mulmod(long a, long b, long p) { return static_cast<long>((static_cast<__int128>(a) * b) % p); }

long powmod(long b, long e, long p) {
  long r = 1 % p;
  b %= p;
  if (b < 0) b += p;
  while (e > 0) {
    if (e & 1) r = mulmod(r, b, p);
    b = mulmod(b, b, p);
    e >>= 1;
  }
  return r;
}

long invmod(long a, long p) { return powmod(a, p - 2, p); }

ModPoly add(const ModPoly& a, const ModPoly& b, long p) {
  ModPoly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + b[i]) % p;
  trim(r);
  return r;
}

ModPoly sub(const ModPoly& a, const ModPoly& b, long p) {
  ModPoly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] = ((r[i] - b[i]) % p + p) % p;
  trim(r);
  return r;
}

ModPoly mul(const ModPoly& a, const ModPoly& b, long p) {
  if (a.empty() || b.empty()) return {};
  std::vector<__int128> acc(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) acc[i + j] += static_cast<__int128>(a[i]) * b[j];
  ModPoly r(acc.size());
  for (size_t i = 0; i < acc.size(); ++i) r[i] = static_cast<long>(acc[i] % p);
  trim(r);
  return r;
}

void divmod(const ModPoly& a, const ModPoly& b, long p, ModPoly& q, ModPoly& r) {
  r = a;
  if (a.size() < b.size()) {
    q.clear();
    return;
  }
  q.assign(a.size() - b.size() + 1, 0);
  long inv = invmod(b.back(), p);
  for (size_t i = a.size(); i-- >= b.size();) {
    long t = mulmod(r[i], inv, p);
    size_t shift = i - (b.size() - 1);
    q[shift] = t;
    if (t != 0)
      for (size_t j = 0; j < b.size(); ++j) r[shift + j] = ((r[shift + j] - mulmod(t, b[j], p)) % p + p) % p;
    if (i == b.size() - 1) break;
  }
  trim(q);
  trim(r);
}

ModPoly rem(const ModPoly& a, const ModPoly& b, long p) {
  ModPoly q, r;
  divmod(a, b, p, q, r);
  return r;
}

ModPoly quo(const ModPoly& a, const ModPoly& b, long p) {
  ModPoly q, r;
  divmod(a, b, p, q, r);
  return q;
}

ModPoly make_monic(ModPoly a, long p) {
  if (a.empty()) return a;
  long inv = invmod(a.back(), p);
  for (auto& c : a) c = mulmod(c, inv, p);
  return a;
}

ModPoly gcd(ModPoly a, ModPoly b, long p) {
  while (!b.empty()) {
    ModPoly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a, p);
}

void xgcd(const ModPoly& a, const ModPoly& b, long p, ModPoly& g, ModPoly& s, ModPoly& t) {
  ModPoly r0 = a, r1 = b, s0{1}, s1, t0, t1{1};
  while (!r1.empty()) {
    ModPoly q, r;
    divmod(r0, r1, p, q, r);
    r0 = std::move(r1);
    r1 = std::move(r);
    ModPoly s2 = sub(s0, mul(q, s1, p), p);
    s0 = std::move(s1);
    s1 = std::move(s2);
    ModPoly t2 = sub(t0, mul(q, t1, p), p);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  long inv = invmod(r0.back(), p);
  for (auto& c : r0) c = mulmod(c, inv, p);
  for (auto& c : s0) c = mulmod(c, inv, p);
  for (auto& c : t0) c = mulmod(c, inv, p);
  g = r0;
  s = s0;
  t = t0;
}

ModPoly derivative(const ModPoly& a, long p) {
  ModPoly d;
  for (size_t i = 1; i < a.size(); ++i) d.push_back(mulmod(a[i], static_cast<long>(i % static_cast<size_t>(p)), p));
  trim(d);
  return d;
}

ModPoly powmod_poly(ModPoly base, const Integer& e, const ModPoly& m, long p) {
  ModPoly result{1};
  base = rem(base, m, p);
  size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    result = rem(mul(result, result, p), m, p);
    if (mpz_tstbit(e.get_mpz_t(), i)) result = rem(mul(result, base, p), m, p);
  }
  return result;
}

ModPoly reduce(const UniPoly& f, long p) {
  ModPoly r;
  Integer pp(p);
  for (const auto& q : f.coeffs()) {
    Integer num = mod(q.get_num(), pp);
    Integer den = mod(q.get_den(), pp);
    require(den != 0, Errc::InvalidArgument, "denominator divisible by p");
    r.push_back(mulmod(num.get_si(), invmod(den.get_si(), p), p));
  }
  trim(r);
  return r;
}

// Distinct-degree factorization of a squarefree monic polynomial.
std::vector<std::pair<ModPoly, int>> distinct_degree(ModPoly f, long p) {
  std::vector<std::pair<ModPoly, int>> out;
  ModPoly xp{0, 1};
  ModPoly h = xp;
  int d = 0;
  while (static_cast<int>(f.size()) - 1 >= 2 * (d + 1)) {
    ++d;
    h = powmod_poly(h, Integer(p), f, p);
    ModPoly g = gcd(f, sub(h, xp, p), p);
    if (g.size() > 1) {
      out.emplace_back(g, d);
      f = quo(f, g, p);
      h = rem(h, f, p);
    }
  }
  if (f.size() > 1) out.emplace_back(f, static_cast<int>(f.size()) - 1);
  return out;
}

// Split f (product of distinct monic irreducibles of degree d) completely.
void equal_degree(const ModPoly& f, int d, long p, std::mt19937_64& rng, std::vector<ModPoly>& out) {
  int n = static_cast<int>(f.size()) - 1;
  if (n == d) {
    out.push_back(f);
    return;
  }
  std::uniform_int_distribution<long> coef(0, p - 1);
  while (true) {
    ModPoly a(static_cast<size_t>(n));
    for (auto& c : a) c = coef(rng);
    trim(a);
    if (a.size() <= 1) continue;
    ModPoly b;
    if (p == 2) {
      // Trace map a + a^2 + ... + a^(2^(d-1)).
      ModPoly t = a, acc = a;
      for (int i = 1; i < d; ++i) {
        t = rem(mul(t, t, p), f, p);
        acc = add(acc, t, p);
      }
      b = acc;
    } else {
      Integer e = (pow(Integer(p), static_cast<unsigned long>(d)) - 1) / 2;
      b = sub(powmod_poly(a, e, f, p), ModPoly{1}, p);
    }
    ModPoly g = gcd(f, b, p);
    int dg = static_cast<int>(g.size()) - 1;
    if (dg > 0 && dg < n) {
      equal_degree(g, d, p, rng, out);
      equal_degree(quo(f, g, p), d, p, rng, out);
      return;
    }
  }
}

std::vector<ModPoly> factor_squarefree_mod_p(const ModPoly& f, long p) {
  std::mt19937_64 rng(0x5eed + static_cast<unsigned long>(p));
  std::vector<ModPoly> out;
  for (auto& [g, d] : distinct_degree(make_monic(f, p), p)) equal_degree(g, d, p, rng, out);
  return out;
}

int count_factors_mod_p(const ModPoly& f, long p) {
  int count = 0;
  for (auto& [g, d] : distinct_degree(make_monic(f, p), p)) count += (static_cast<int>(g.size()) - 1) / d;
  return count;
}

// ---------------------------------------------------------------------------
// Polynomials over Z/m for Hensel lifting.

using ZPoly = std::vector<Integer>;

void trim(ZPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

ZPoly zreduce(ZPoly a, const Integer& m) {
  for (auto& c : a) c = mod(c, m);
  trim(a);
  return a;
}

ZPoly zadd(const ZPoly& a, const ZPoly& b, const Integer& m) {
  ZPoly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return zreduce(std::move(r), m);
}

ZPoly zsub(const ZPoly& a, const ZPoly& b, const Integer& m) {
  ZPoly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  return zreduce(std::move(r), m);
}

ZPoly zmul(const ZPoly& a, const ZPoly& b, const Integer& m) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return zreduce(std::move(r), m);
}

// Division by a monic polynomial modulo m.
void zdivmod(const ZPoly& a, const ZPoly& b, const Integer& m, ZPoly& q, ZPoly& r) {
  r = a;
  if (a.size() < b.size()) {
    q.clear();
    return;
  }
  q.assign(a.size() - b.size() + 1, 0);
  for (size_t i = a.size(); i-- >= b.size();) {
    Integer t = mod(r[i], m);
    size_t shift = i - (b.size() - 1);
    q[shift] = t;
    if (t != 0)
      for (size_t j = 0; j < b.size(); ++j) r[shift + j] = mod(r[shift + j] - t * b[j], m);
    if (i == b.size() - 1) break;
  }
  r = zreduce(r, m);
  q = zreduce(q, m);
}

ZPoly from_mod(const ModPoly& a) {
  ZPoly r;
  for (long c : a) r.emplace_back(c);
  return r;
}

ZPoly from_uni(const UniPoly& f) {
  ZPoly r;
  for (const auto& q : f.coeffs()) r.push_back(q.get_num());
  return r;
}

// One quadratic Hensel step: f = g*h mod m, s*g + t*h = 1 mod m, h monic.
void hensel_step(const ZPoly& f, ZPoly& g, ZPoly& h, ZPoly& s, ZPoly& t, const Integer& m) {
  Integer m2 = m * m;
  ZPoly e = zsub(f, zmul(g, h, m2), m2);
  ZPoly q, r;
  zdivmod(zmul(s, e, m2), h, m2, q, r);
  ZPoly g2 = zadd(g, zadd(zmul(t, e, m2), zmul(q, g, m2), m2), m2);
  ZPoly h2 = zadd(h, r, m2);
  ZPoly b = zsub(zadd(zmul(s, g2, m2), zmul(t, h2, m2), m2), ZPoly{1}, m2);
  ZPoly c, d;
  zdivmod(zmul(s, b, m2), h2, m2, c, d);
  s = zsub(s, d, m2);
  t = zsub(t, zadd(zmul(t, b, m2), zmul(c, g2, m2), m2), m2);
  g = std::move(g2);
  h = std::move(h2);
}

// Lift F = lc * prod(factors) mod p to modulus M; returns monic lifts.
std::vector<ZPoly> lift_tree(const ZPoly& F, const std::vector<ModPoly>& factors, long p, const Integer& M) {
  Integer lc = F.back();
  if (factors.size() == 1) {
    Integer inv;
    mpz_invert(inv.get_mpz_t(), lc.get_mpz_t(), M.get_mpz_t());
    ZPoly r = F;
    for (auto& c : r) c = mod(c * inv, M);
    return {r};
  }
  size_t half = factors.size() / 2;
  std::vector<ModPoly> A(factors.begin(), factors.begin() + static_cast<long>(half));
  std::vector<ModPoly> B(factors.begin() + static_cast<long>(half), factors.end());
  ModPoly a{1}, b{1};
  for (auto& x : A) a = mul(a, x, p);
  for (auto& x : B) b = mul(b, x, p);
  long lcp = mod(lc, Integer(p)).get_si();
  ModPoly g_mod = a;
  for (auto& c : g_mod) c = mulmod(c, lcp, p);
  ModPoly gg, s_mod, t_mod;
  xgcd(g_mod, b, p, gg, s_mod, t_mod);
  ZPoly g = from_mod(g_mod), h = from_mod(b), s = from_mod(s_mod), t = from_mod(t_mod);
  Integer m(p);
  while (m < M) {
    hensel_step(F, g, h, s, t, m);
    m *= m;
  }
  g = zreduce(g, M);
  h = zreduce(h, M);
  // g keeps the leading coefficient of F; fix it exactly mod M.
  g.back() = mod(lc, M);
  auto left = lift_tree(g, A, p, M);
  auto right = lift_tree(h, B, p, M);
  left.insert(left.end(), right.begin(), right.end());
  return left;
}

Integer symmetric(const Integer& c, const Integer& M) {
  Integer r = mod(c, M);
  if (2 * r > M) r -= M;
  return r;
}

// Exact division test over Z: returns true and the quotient if g | f.
bool divides(const UniPoly& f, const UniPoly& g, UniPoly& quotient) {
  auto [q, r] = divmod(f, g);
  if (!r.is_zero() || !q.has_integer_coeffs()) return false;
  quotient = q;
  return true;
}

// f: primitive, squarefree, integer coefficients, degree >= 2, f(0) != 0.
std::vector<UniPoly> factor_squarefree_integer(const UniPoly& f) {
  const Integer lc = f.lead().get_num();
  UniPoly fp = f.derivative();
  long best_p = 0;
  int best_count = 1 << 30;
  int good = 0;
  for (long p : primes_up_to(2000)) {
    if (mpz_divisible_ui_p(lc.get_mpz_t(), static_cast<unsigned long>(p))) continue;
    ModPoly fm = reduce(f, p);
    if (static_cast<int>(fm.size()) - 1 != f.degree()) continue;
    ModPoly g = gcd(fm, derivative(fm, p), p);
    if (g.size() > 1) continue;
    int cnt = count_factors_mod_p(fm, p);
    if (cnt < best_count) {
      best_count = cnt;
      best_p = p;
    }
    if (cnt == 1) break;
    if (++good >= 8) break;
  }
  require(best_p != 0, Errc::InvalidArgument, "no good prime for factorization");
  if (best_count == 1) return {f};

  const long p = best_p;
  std::vector<ModPoly> modular = factor_squarefree_mod_p(reduce(f, p), p);

  // Mignotte-style bound on factor coefficients, times lc for the recombination.
  Integer norm2 = 0;
  for (const auto& q : f.coeffs()) norm2 += q.get_num() * q.get_num();
  Integer bound = (Integer(1) << static_cast<unsigned>(f.degree())) * (isqrt_ceil(norm2) + 1) * abs(lc);
  Integer M(p);
  while (M <= 2 * bound) M *= p;

  std::vector<ZPoly> lifted = lift_tree(from_uni(f), modular, p, M);

  std::vector<UniPoly> out;
  UniPoly rest = f;
  std::vector<bool> used(lifted.size(), false);
  size_t remaining = lifted.size();
  for (size_t size = 1; 2 * size <= remaining; ++size) {
    bool found_any = true;
    while (found_any && 2 * size <= remaining) {
      found_any = false;
      std::vector<size_t> idx;
      for (size_t i = 0; i < lifted.size(); ++i)
        if (!used[i]) idx.push_back(i);
      std::vector<size_t> comb(size);
      for (size_t i = 0; i < size; ++i) comb[i] = i;
      const Integer rest_lc = rest.lead().get_num();
      const Integer rest_c0 = rest.coeff(0).get_num();
      while (true) {
        // constant term pre-test
        Integer c0 = rest_lc;
        for (size_t i : comb) c0 = mod(c0 * (lifted[idx[i]].empty() ? Integer(0) : lifted[idx[i]][0]), M);
        c0 = symmetric(c0, M);
        bool plausible = c0 != 0 && mpz_divisible_p(Integer(rest_lc * rest_c0).get_mpz_t(), c0.get_mpz_t());
        if (plausible) {
          ZPoly prod{rest_lc};
          for (size_t i : comb) prod = zmul(prod, lifted[idx[i]], M);
          std::vector<Rational> coeffs;
          for (const auto& c : prod) coeffs.emplace_back(symmetric(c, M));
          UniPoly cand = UniPoly(coeffs).primitive_part();
          UniPoly q;
          if (cand.degree() > 0 && divides(rest, cand, q)) {
            out.push_back(cand);
            rest = q;
            for (size_t i : comb) used[idx[i]] = true;
            remaining -= size;
            found_any = true;
            break;
          }
        }
        // next combination
        int k = static_cast<int>(size) - 1;
        while (k >= 0 && comb[static_cast<size_t>(k)] == idx.size() - size + static_cast<size_t>(k)) --k;
        if (k < 0) break;
        comb[static_cast<size_t>(k)]++;
        for (size_t j = static_cast<size_t>(k) + 1; j < size; ++j) comb[j] = comb[j - 1] + 1;
      }
    }
  }
  if (rest.degree() > 0) out.push_back(rest.primitive_part());
  return out;
}

}  // namespace

std::vector<std::pair<std::vector<long>, int>> factor_mod_p(const std::vector<long>& f_in, long p) {
  ModPoly f = f_in;
  for (auto& c : f) c = ((c % p) + p) % p;
  trim(f);
  require(f.size() > 1, Errc::InvalidArgument, "factor_mod_p of a constant");
  f = make_monic(f, p);
  std::vector<std::pair<ModPoly, int>> out;
  // Squarefree decomposition in characteristic p.
  std::function<void(const ModPoly&, int)> rec = [&](const ModPoly& a, int mult) {
    if (a.size() <= 1) return;
    ModPoly da = derivative(a, p);
    if (da.empty()) {
      // a = b(x^p)
      ModPoly b;
      for (size_t i = 0; i < a.size(); i += static_cast<size_t>(p)) b.push_back(a[i]);
      rec(b, mult * static_cast<int>(p));
      return;
    }
    ModPoly c = gcd(a, da, p);
    ModPoly w = quo(a, c, p);
    int i = 1;
    while (w.size() > 1) {
      ModPoly y = gcd(w, c, p);
      ModPoly z = quo(w, y, p);
      if (z.size() > 1)
        for (auto& g : factor_squarefree_mod_p(z, p)) out.emplace_back(make_monic(g, p), mult * i);
      w = y;
      c = quo(c, y, p);
      ++i;
    }
    if (c.size() > 1) {
      ModPoly b;
      for (size_t k = 0; k < c.size(); k += static_cast<size_t>(p)) b.push_back(c[k]);
      rec(b, mult * static_cast<int>(p));
    }
  };
  rec(f, 1);
  // merge equal factors and sort
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return std::lexicographical_compare(a.first.rbegin(), a.first.rend(), b.first.rbegin(), b.first.rend());
  });
  std::vector<std::pair<ModPoly, int>> merged;
  for (auto& e : out) {
    if (!merged.empty() && merged.back().first == e.first) merged.back().second += e.second;
    else merged.push_back(e);
  }
  return merged;
}

Factorization factor_rational_poly(const UniPoly& f) {
  require(!f.is_zero(), Errc::InvalidArgument, "cannot factor the zero polynomial");
  Factorization out;
  for (auto& [g, mult] : squarefree_decomposition(f)) {
    UniPoly h = g.primitive_part();
    if (h.coeff(0) == 0) {
      out.emplace_back(UniPoly::x(), mult);
      h = h / UniPoly::x();
    }
    if (h.degree() <= 0) continue;
    if (h.degree() == 1) {
      out.emplace_back(h.monic(), mult);
      continue;
    }
    for (auto& fac : factor_squarefree_integer(h)) out.emplace_back(fac.monic(), mult);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first == b.first) return a.second < b.second;
    return poly_less(a.first, b.first);
  });
  return out;
}

bool is_irreducible(const UniPoly& f) {
  if (f.degree() <= 0) return false;
  auto fac = factor_rational_poly(f);
  return fac.size() == 1 && fac[0].second == 1;
}

}  // namespace cmreflex
