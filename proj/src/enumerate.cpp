#include "cmreflex/enumerate.hpp"

#include <cstdlib>

#include "cmreflex/errors.hpp"

namespace cmreflex {

namespace {

struct Gso {
  std::vector<Rational> B;           // squared GS lengths
  std::vector<std::vector<Rational>> mu;
};

Gso gso(const QMatrix& g) {
  const size_t n = g.rows();
  Gso r;
  r.B.assign(n, 0);
  r.mu.assign(n, std::vector<Rational>(n, 0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < i; ++j) {
      Rational s = g(i, j);
      for (size_t k = 0; k < j; ++k) s -= r.mu[j][k] * r.mu[i][k] * r.B[k];
      r.mu[i][j] = s / r.B[j];
    }
    Rational s = g(i, i);
    for (size_t k = 0; k < i; ++k) s -= r.mu[i][k] * r.mu[i][k] * r.B[k];
    r.B[i] = s;
  }
  return r;
}

Integer round_nearest(const Rational& q) { return floor(q + Rational(1, 2)); }

}  // namespace

ZMatrix lll_transform(const QMatrix& gram) {
  const size_t n = gram.rows();
  ZMatrix u = ZMatrix::identity(n);
  QMatrix g = gram;
  // b_k <- b_k - q b_j on the form and the transform
  auto reduce = [&](size_t k, size_t j, const Integer& q) {
    for (size_t i = 0; i < n; ++i) u(i, k) -= q * u(i, j);
    Rational qq = q;
    Rational kk = g(k, k) - 2 * qq * g(k, j) + qq * qq * g(j, j);
    for (size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      g(k, i) -= qq * g(j, i);
      g(i, k) = g(k, i);
    }
    g(k, k) = kk;
  };
  size_t k = 1;
  unsigned long guard = 0;
  while (k < n) {
    require(++guard < 1000000, Errc::EnumerationBoundExceeded, "LLL did not converge");
    Gso s = gso(g);
    for (size_t jj = k; jj-- > 0;) {
      s = gso(g);
      if (abs(s.mu[k][jj]) > Rational(1, 2)) reduce(k, jj, round_nearest(s.mu[k][jj]));
    }
    s = gso(g);
    if (s.B[k] < (Rational(3, 4) - s.mu[k][k - 1] * s.mu[k][k - 1]) * s.B[k - 1]) {
      for (size_t i = 0; i < n; ++i) std::swap(u(i, k), u(i, k - 1));
      for (size_t i = 0; i < n; ++i) std::swap(g(i, k), g(i, k - 1));
      for (size_t i = 0; i < n; ++i) std::swap(g(k, i), g(k - 1, i));
      k = k > 1 ? k - 1 : 1;
    } else {
      ++k;
    }
  }
  return u;
}

bool enumerate_short_vectors(const QMatrix& gram, const Rational& bound,
                             const std::function<bool(const ZVector&, const Rational&)>& visit,
                             unsigned long budget) {
  const size_t n = gram.rows();
  if (n == 0 || bound <= 0) return false;
  ZMatrix u = lll_transform(gram);
  QMatrix ur = to_rational(u);
  QMatrix g = ur.transpose() * gram * ur;

  // x^T g x = sum_i q[i][i] (x_i + sum_{j>i} q[i][j] x_j)^2
  QMatrix q = g;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      q(j, i) = q(i, j);
      q(i, j) = q(i, j) / q(i, i);
    }
    for (size_t k = i + 1; k < n; ++k)
      for (size_t l = k; l < n; ++l) q(k, l) -= q(k, i) * q(i, l);
  }

  ZVector x(n, 0);
  unsigned long nodes = 0;
  bool stopped = false;
  // all coordinates above `level` are fixed; `rem` is the unused budget of the form
  std::function<void(size_t, const Rational&, bool)> rec = [&](size_t level, const Rational& rem, bool all_zero_above) {
    if (stopped) return;
    Rational c = 0;
    for (size_t j = level + 1; j < n; ++j) c -= q(level, j) * x[j];
    Rational s = sqrt_upper(rem / q(level, level), 32);
    Integer lo = ceil(c - s), hi = floor(c + s);
    if (all_zero_above && lo < 0) lo = 0;  // fix the sign of the first nonzero coordinate
    for (Integer v = lo; v <= hi && !stopped; ++v) {
      require(++nodes <= budget, Errc::EnumerationBoundExceeded,
              "short-vector search exceeded node budget " + std::to_string(budget) + " at bound " + to_string(bound));
      Rational d = Rational(v) - c;
      Rational used = q(level, level) * d * d;
      if (used > rem) continue;
      x[level] = v;
      Rational r2 = rem - used;
      bool zero = all_zero_above && v == 0;
      if (level == 0) {
        if (zero) continue;
        ZVector out = u * x;
        if (visit(out, bound - r2)) stopped = true;
      } else {
        rec(level - 1, r2, zero);
      }
    }
    x[level] = 0;
  };
  rec(n - 1, bound, true);
  return stopped;
}

unsigned long default_budget() {
  if (const char* e = std::getenv("CMREFLEX_BUDGET")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(e, &end, 10);
    if (end != e && v > 0) return v;
  }
  return 1000000UL;
}

}  // namespace cmreflex
