#include "cmreflex/rational.hpp"

#include <algorithm>
#include <map>

#include "cmreflex/errors.hpp"

namespace cmreflex {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Parse: return "Parse";
    case Errc::Unsupported: return "Unsupported";
    case Errc::NotIrreducible: return "NotIrreducible";
    case Errc::ClosureTooLarge: return "ClosureTooLarge";
    case Errc::OrderMismatch: return "OrderMismatch";
    case Errc::ZeroIdeal: return "ZeroIdeal";
    case Errc::IndexDivisible: return "IndexDivisible";
    case Errc::EnumerationBoundExceeded: return "EnumerationBoundExceeded";
    case Errc::ConjugatesMissing: return "ConjugatesMissing";
    case Errc::RootNotExact: return "RootNotExact";
    case Errc::SearchExhausted: return "SearchExhausted";
    case Errc::UnitSearchInconclusive: return "UnitSearchInconclusive";
    case Errc::NonIntegralIdeal: return "NonIntegralIdeal";
    case Errc::ZeroElement: return "ZeroElement";
    case Errc::CompositionMismatch: return "CompositionMismatch";
    case Errc::PairMismatch: return "PairMismatch";
    case Errc::SourceMismatch: return "SourceMismatch";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::Supersingular: return "Supersingular";
    case Errc::IdentificationFailed: return "IdentificationFailed";
    case Errc::RamifiedPrime: return "RamifiedPrime";
    case Errc::UnitsUnavailable: return "UnitsUnavailable";
    case Errc::ModulusTooLarge: return "ModulusTooLarge";
    case Errc::NotCoprime: return "NotCoprime";
  }
  return "Unknown";
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' ' || c == '+'; }), s.end());
  if (s.empty()) fail(Errc::Parse, "empty rational");
  auto slash = s.find('/');
  Integer num, den(1);
  auto parse_int = [](const std::string& t, Integer& out) {
    if (t.empty() || out.set_str(t, 10) != 0) fail(Errc::Parse, "bad integer '" + t + "'");
  };
  if (slash == std::string::npos) {
    parse_int(s, num);
  } else {
    parse_int(s.substr(0, slash), num);
    parse_int(s.substr(slash + 1), den);
    if (den == 0) fail(Errc::Parse, "zero denominator in '" + s + "'");
  }
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }
std::string to_string(const Integer& z) { return z.get_str(); }

Rational frac(const Integer& n, const Integer& d) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer ceil_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer floor(const Rational& q) { return floor_div(q.get_num(), q.get_den()); }
Integer ceil(const Rational& q) { return ceil_div(q.get_num(), q.get_den()); }

Integer mod(const Integer& a, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  if (r < 0) r += abs(m);
  return r;
}

Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

Integer pow(const Integer& b, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

Rational pow(const Rational& b, long e) {
  if (e < 0) return pow(Rational(1) / b, -e);
  Rational r(pow(b.get_num(), static_cast<unsigned long>(e)), pow(b.get_den(), static_cast<unsigned long>(e)));
  return r;
}

Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

Integer isqrt_ceil(const Integer& x) {
  Integer r;
  mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
  if (r * r < x) ++r;
  return r;
}

Rational sqrt_upper(const Rational& x, unsigned bits) {
  if (x <= 0) return 0;
  // sqrt(x) = sqrt(num*den)/den; scale by 2^bits for resolution.
  Integer scale = Integer(1) << bits;
  Integer radicand = x.get_num() * x.get_den() * scale * scale;
  Rational r(isqrt_ceil(radicand), x.get_den() * scale);
  r.canonicalize();
  return r;
}

bool is_probable_prime(const Integer& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

std::vector<long> primes_up_to(long bound) {
  std::vector<long> out;
  if (bound < 2) return out;
  std::vector<bool> sieve(static_cast<size_t>(bound) + 1, true);
  for (long i = 2; i <= bound; ++i) {
    if (!sieve[i]) continue;
    out.push_back(i);
    for (long j = i * i; j <= bound; j += i) sieve[j] = false;
  }
  return out;
}

namespace {

// Brent's variant of Pollard rho; n is odd composite.
Integer rho_split(const Integer& n) {
  for (unsigned long c = 1;; ++c) {
    Integer x = 2, y = 2, d = 1, q = 1, ys;
    unsigned long r = 1;
    auto f = [&](const Integer& v) { return mod(v * v + c, n); };
    while (d == 1) {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      while (k < r && d == 1) {
        ys = y;
        for (unsigned long i = 0; i < std::min(128UL, r - k); ++i) {
          y = f(y);
          q = mod(q * abs(Integer(x - y)), n);
        }
        d = gcd(q, n);
        k += 128;
      }
      r *= 2;
    }
    if (d == n) {
      do {
        ys = f(ys);
        d = gcd(abs(Integer(x - ys)), n);
      } while (d == 1);
    }
    if (d != n) return d;
  }
}

void factor_rec(const Integer& n, std::map<Integer, unsigned>& out) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    out[n]++;
    return;
  }
  Integer root;
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
    factor_rec(root, out);
    factor_rec(root, out);
    return;
  }
  Integer d = rho_split(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace

std::vector<std::pair<Integer, unsigned>> factor_integer(const Integer& n_in) {
  Integer n = abs(n_in);
  require(n != 0, Errc::InvalidArgument, "cannot factor zero");
  std::map<Integer, unsigned> found;
  static const std::vector<long> small = primes_up_to(1 << 16);
  for (long p : small) {
    if (n == 1) break;
    if (Integer(p) * p > n) break;
    while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) {
      found[Integer(p)]++;
      n /= p;
    }
  }
  factor_rec(n, found);
  return {found.begin(), found.end()};
}

}  // namespace cmreflex
