#include "cmreflex/ball.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "cmreflex/errors.hpp"

namespace cmreflex {

bool Ball::contains_zero() const { return re * re + im * im <= rad * rad; }

bool Ball::contains(const Ball& o) const {
  if (o.rad > rad) return false;
  Rational dr = re - o.re, di = im - o.im, slack = rad - o.rad;
  return dr * dr + di * di <= slack * slack;
}

bool Ball::disjoint(const Ball& o) const {
  Rational dr = re - o.re, di = im - o.im, sum = rad + o.rad;
  return dr * dr + di * di > sum * sum;
}

Rational Ball::abs_upper() const { return abs(re) + abs(im) + rad; }

Ball operator+(const Ball& a, const Ball& b) { return Ball{a.re + b.re, a.im + b.im, a.rad + b.rad}; }
Ball operator-(const Ball& a, const Ball& b) { return Ball{a.re - b.re, a.im - b.im, a.rad + b.rad}; }
Ball operator-(const Ball& a) { return Ball{-a.re, -a.im, a.rad}; }

Ball operator*(const Ball& a, const Ball& b) {
  Ball r;
  r.re = a.re * b.re - a.im * b.im;
  r.im = a.re * b.im + a.im * b.re;
  Rational ma = abs(a.re) + abs(a.im), mb = abs(b.re) + abs(b.im);
  r.rad = ma * b.rad + mb * a.rad + a.rad * b.rad;
  return r;
}

Ball operator*(const Rational& s, const Ball& b) { return Ball{s * b.re, s * b.im, abs(s) * b.rad}; }

namespace {

Rational round_dyadic(const Rational& x, unsigned prec) {
  Integer scale = Integer(1) << prec;
  Rational y = x * scale;
  Integer n = floor(y + Rational(1, 2));
  Rational r(n, scale);
  r.canonicalize();
  return r;
}

}  // namespace

Ball truncate(const Ball& b, unsigned prec) {
  Ball r;
  r.re = round_dyadic(b.re, prec);
  r.im = round_dyadic(b.im, prec);
  r.rad = b.rad + abs(r.re - b.re) + abs(r.im - b.im);
  return r;
}

Ball eval(const UniPoly& f, const Ball& z, unsigned prec) {
  Ball acc = Ball::exact(0);
  const auto& c = f.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    acc = acc * z;
    acc.re += *it;
    acc = truncate(acc, prec);
  }
  return acc;
}

namespace {

struct CQ {
  Rational re, im;
};

CQ mul(const CQ& a, const CQ& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }

void eval_exact(const UniPoly& f, const CQ& z, CQ& val, CQ& der) {
  // Horner for f and f' simultaneously.
  val = {0, 0};
  der = {0, 0};
  const auto& c = f.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    der = mul(der, z);
    der.re += val.re;
    der.im += val.im;
    val = mul(val, z);
    val.re += *it;
  }
}

Rational norm2(const CQ& a) { return a.re * a.re + a.im * a.im; }

CQ newton_step(const UniPoly& f, const CQ& z, unsigned prec, bool& ok) {
  CQ v, d;
  eval_exact(f, z, v, d);
  Rational dn = norm2(d);
  if (dn == 0) {
    ok = false;
    return z;
  }
  ok = true;
  // v / d = v * conj(d) / |d|^2
  CQ q{(v.re * d.re + v.im * d.im) / dn, (v.im * d.re - v.re * d.im) / dn};
  return {round_dyadic(z.re - q.re, prec), round_dyadic(z.im - q.im, prec)};
}

// Radius n|f(z)|/|f'(z)| bounds the distance from z to the nearest root.
bool root_radius(const UniPoly& f, const CQ& z, unsigned prec, Rational& rad) {
  CQ v, d;
  eval_exact(f, z, v, d);
  Rational dn = norm2(d);
  if (dn == 0) return false;
  Rational n = f.degree();
  Rational r2 = n * n * norm2(v) / dn;
  rad = sqrt_upper(r2, 2 * prec + 32);
  return true;
}

std::vector<std::complex<long double>> aberth(const UniPoly& f, unsigned salt) {
  using C = std::complex<long double>;
  const int n = f.degree();
  std::vector<C> c(static_cast<size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) c[static_cast<size_t>(i)] = static_cast<long double>(f.coeff(i).get_d());
  long double bound = 0;
  for (int i = 0; i < n; ++i) bound = std::max(bound, std::abs(c[static_cast<size_t>(i)] / c.back()));
  long double R = std::pow(bound, 1.0L / n) + 0.5L;
  std::vector<C> z(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    long double ang = 2.0L * 3.14159265358979323846L * k / n + 0.4L + 0.1L * salt;
    z[static_cast<size_t>(k)] = std::polar(R * (0.8L + 0.05L * ((k + salt) % 5)), ang);
  }
  auto horner = [&](C x, C& fx, C& dfx) {
    fx = c.back();
    dfx = 0;
    for (int i = n - 1; i >= 0; --i) {
      dfx = dfx * x + fx;
      fx = fx * x + c[static_cast<size_t>(i)];
    }
  };
  for (int it = 0; it < 2000; ++it) {
    long double maxstep = 0;
    for (int i = 0; i < n; ++i) {
      C fx, dfx;
      horner(z[static_cast<size_t>(i)], fx, dfx);
      if (fx == C(0)) continue;
      C ratio = fx / dfx;
      C sum = 0;
      for (int j = 0; j < n; ++j)
        if (j != i) sum += 1.0L / (z[static_cast<size_t>(i)] - z[static_cast<size_t>(j)]);
      C w = ratio / (1.0L - ratio * sum);
      z[static_cast<size_t>(i)] -= w;
      maxstep = std::max(maxstep, std::abs(w) / (1 + std::abs(z[static_cast<size_t>(i)])));
    }
    if (maxstep < 1e-18L) break;
  }
  return z;
}

bool f_is_even(const UniPoly& f) { return f.reflect() == f; }
bool f_is_odd(const UniPoly& f) { return f.reflect() == -f; }

// Snap, pair and certify; returns false if the midpoints do not separate.
bool certify(const UniPoly& f, std::vector<CQ>& z, unsigned prec, RootIsolation& out) {
  const size_t n = z.size();
  const Rational snap_tol(1, Integer(1) << (prec / 2));
  const bool sym = f_is_even(f) || f_is_odd(f);
  for (auto& w : z) {
    if (abs(w.im) <= snap_tol) w.im = 0;
    if (sym && abs(w.re) <= snap_tol) w.re = 0;
  }
  std::vector<size_t> conj(n, n);
  for (size_t i = 0; i < n; ++i) {
    if (z[i].im == 0) {
      conj[i] = i;
      continue;
    }
    if (z[i].im < 0 || conj[i] != n) continue;
    size_t best = n;
    Rational bd;
    for (size_t j = 0; j < n; ++j) {
      if (z[j].im >= 0 || conj[j] != n) continue;
      Rational d = norm2(CQ{z[j].re - z[i].re, z[j].im + z[i].im});
      if (best == n || d < bd) {
        best = j;
        bd = d;
      }
    }
    if (best == n) return false;
    z[best] = CQ{z[i].re, -z[i].im};
    conj[i] = best;
    conj[best] = i;
  }
  for (size_t i = 0; i < n; ++i)
    if (conj[i] == n) return false;
  std::vector<Ball> balls(n);
  for (size_t i = 0; i < n; ++i) {
    Rational r;
    if (!root_radius(f, z[i], prec, r)) return false;
    balls[i] = Ball{z[i].re, z[i].im, r};
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (!balls[i].disjoint(balls[j])) return false;
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (balls[a].re != balls[b].re) return balls[a].re < balls[b].re;
    return balls[a].im < balls[b].im;
  });
  std::vector<size_t> pos(n);
  for (size_t k = 0; k < n; ++k) pos[order[k]] = k;
  out.roots.resize(n);
  out.conj.resize(n);
  for (size_t k = 0; k < n; ++k) {
    out.roots[k] = balls[order[k]];
    out.conj[k] = pos[conj[order[k]]];
  }
  out.prec = prec;
  return true;
}

Rational max_radius(const RootIsolation& iso) {
  Rational m = 0;
  for (auto& b : iso.roots) m = std::max(m, b.rad);
  return m;
}

}  // namespace

RootIsolation isolate_roots(const UniPoly& f_in, unsigned bits) {
  require(f_in.degree() >= 1, Errc::InvalidArgument, "root isolation of a constant");
  require(is_squarefree(f_in), Errc::InvalidArgument, "root isolation needs a squarefree polynomial");
  UniPoly f = f_in.monic();
  const Rational target(1, Integer(1) << bits);
  for (unsigned salt = 0; salt < 8; ++salt) {
    auto approx = aberth(f, salt);
    std::vector<CQ> z;
    for (auto& w : approx) z.push_back(CQ{Rational(static_cast<double>(w.real())), Rational(static_cast<double>(w.imag()))});
    unsigned prec = 48;
    for (int round = 0; round < 24; ++round) {
      bool ok = true;
      for (int s = 0; s < 2 && ok; ++s)
        for (auto& w : z) {
          w = newton_step(f, w, prec, ok);
          if (!ok) break;
        }
      if (!ok) break;
      std::vector<CQ> trial = z;
      RootIsolation iso;
      if (certify(f, trial, prec, iso) && max_radius(iso) < target) return iso;
      prec *= 2;
    }
  }
  fail(Errc::InvalidArgument, "root isolation did not converge for " + f_in.to_string());
}

RootIsolation refine_roots(const UniPoly& f_in, const RootIsolation& iso, unsigned bits) {
  UniPoly f = f_in.monic();
  const Rational target(1, Integer(1) << bits);
  RootIsolation out = iso;
  const size_t n = iso.roots.size();
  unsigned top = iso.prec;
  for (size_t i = 0; i < n; ++i) {
    size_t j = iso.conj[i];
    if (j < i) {
      out.roots[i] = out.roots[j].conj();
      continue;
    }
    if (iso.roots[i].rad < target) continue;
    CQ z{iso.roots[i].re, iso.roots[i].im};
    unsigned prec = std::max(iso.prec, 48u);
    bool done = false;
    for (int round = 0; round < 40 && !done; ++round) {
      prec *= 2;
      bool ok = true;
      for (int s = 0; s < 2 && ok; ++s) z = newton_step(f, z, prec, ok);
      require(ok, Errc::InvalidArgument, "refinement hit a critical point");
      Rational r;
      if (!root_radius(f, z, prec, r)) continue;
      Ball b{z.re, z.im, r};
      if (r < target && iso.roots[i].contains(b)) {
        out.roots[i] = b;
        top = std::max(top, prec);
        done = true;
      }
    }
    require(done, Errc::InvalidArgument, "root refinement did not converge");
  }
  out.prec = std::max(top, bits);
  return out;
}

}  // namespace cmreflex
