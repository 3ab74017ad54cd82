#include "cmreflex/matrix.hpp"

#include <algorithm>
#include <sstream>

#include "cmreflex/errors.hpp"

namespace cmreflex {

QMatrix to_rational(const ZMatrix& m) {
  QMatrix r(m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
  return r;
}

Rational det(QMatrix m) {
  require(m.rows() == m.cols(), Errc::InvalidArgument, "det of non-square matrix");
  const size_t n = m.rows();
  Rational d = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && m(piv, c) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      for (size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
      d = -d;
    }
    d *= m(c, c);
    Rational inv = 1 / m(c, c);
    for (size_t i = c + 1; i < n; ++i) {
      if (m(i, c) == 0) continue;
      Rational f = m(i, c) * inv;
      for (size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return d;
}

Integer det(const ZMatrix& a) {
  // Bareiss fraction-free elimination.
  require(a.rows() == a.cols(), Errc::InvalidArgument, "det of non-square matrix");
  const size_t n = a.rows();
  if (n == 0) return 1;
  ZMatrix m = a;
  Integer prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      size_t piv = k + 1;
      while (piv < n && m(piv, k) == 0) ++piv;
      if (piv == n) return 0;
      for (size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(k, j));
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) {
        Integer v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        m(i, j) = v;
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

namespace {

// In-place reduced row echelon form; returns pivot columns.
std::vector<size_t> rref(QMatrix& m) {
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    size_t piv = r;
    while (piv < m.rows() && m(piv, c) == 0) ++piv;
    if (piv == m.rows()) continue;
    for (size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
    Rational inv = 1 / m(r, c);
    for (size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      Rational f = m(i, c);
      for (size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

size_t rank(QMatrix m) { return rref(m).size(); }

QMatrix inverse(const QMatrix& m) {
  require(m.rows() == m.cols(), Errc::InvalidArgument, "inverse of non-square matrix");
  const size_t n = m.rows();
  QMatrix aug(n, 2 * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  auto piv = rref(aug);
  require(piv.size() == n && piv.back() == n - 1, Errc::InvalidArgument, "singular matrix");
  QMatrix inv(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

std::optional<QVector> solve(const QMatrix& a, const QVector& b) {
  const size_t n = a.cols();
  QMatrix aug(a.rows(), n + 1);
  for (size_t i = 0; i < a.rows(); ++i) {
    for (size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n) = b[i];
  }
  auto piv = rref(aug);
  if (!piv.empty() && piv.back() == n) return std::nullopt;
  QVector x(n);
  for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug(r, n);
  return x;
}

std::vector<QVector> kernel(const QMatrix& m) {
  QMatrix r = m;
  auto piv = rref(r);
  std::vector<bool> is_piv(m.cols(), false);
  for (size_t c : piv) is_piv[c] = true;
  std::vector<QVector> out;
  for (size_t free = 0; free < m.cols(); ++free) {
    if (is_piv[free]) continue;
    QVector v(m.cols());
    v[free] = 1;
    for (size_t row = 0; row < piv.size(); ++row) v[piv[row]] = -r(row, free);
    out.push_back(v);
  }
  return out;
}

namespace {

void ext_gcd(const Integer& a, const Integer& b, Integer& g, Integer& s, Integer& t) {
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
}

Integer lattice_modulus(const ZMatrix& gens) {
  const size_t n = gens.rows();
  QMatrix q = to_rational(gens);
  // Choose independent columns greedily.
  std::vector<size_t> chosen;
  for (size_t j = 0; j < gens.cols() && chosen.size() < n; ++j) {
    std::vector<size_t> trial = chosen;
    trial.push_back(j);
    QMatrix sub(n, trial.size());
    for (size_t c = 0; c < trial.size(); ++c)
      for (size_t i = 0; i < n; ++i) sub(i, c) = q(i, trial[c]);
    if (rank(sub) == trial.size()) chosen = trial;
  }
  require(chosen.size() == n, Errc::InvalidArgument, "hnf: generators do not span a full-rank lattice");
  ZMatrix sub(n, n);
  for (size_t c = 0; c < n; ++c)
    for (size_t i = 0; i < n; ++i) sub(i, c) = gens(i, chosen[c]);
  Integer d = abs(det(sub));
  return d;
}

}  // namespace

ZMatrix hnf(const ZMatrix& gens, const Integer& modulus_in) {
  const size_t n = gens.rows();
  Integer M = modulus_in == 0 ? lattice_modulus(gens) : abs(modulus_in);
  std::vector<ZVector> active;
  for (size_t j = 0; j < gens.cols(); ++j) {
    ZVector c = gens.column(j);
    for (auto& x : c) x = mod(x, M);
    if (std::any_of(c.begin(), c.end(), [](const Integer& x) { return x != 0; })) active.push_back(std::move(c));
  }
  ZMatrix H(n, n);
  for (size_t row = n; row-- > 0;) {
    // M*e_row joins only now; for rows below it is implicit in the mod-M reductions.
    ZVector e(n);
    e[row] = M;
    active.push_back(std::move(e));
    int piv = -1;
    for (size_t j = 0; j < active.size(); ++j) {
      if (active[j][row] == 0) continue;
      if (piv < 0) {
        piv = static_cast<int>(j);
        continue;
      }
      ZVector& p = active[static_cast<size_t>(piv)];
      ZVector& c = active[j];
      Integer g, s, t;
      ext_gcd(p[row], c[row], g, s, t);
      Integer a = p[row] / g, b = c[row] / g;
      for (size_t k = 0; k <= row; ++k) {
        Integer np = s * p[k] + t * c[k];
        Integer nc = a * c[k] - b * p[k];
        p[k] = std::move(np);
        c[k] = std::move(nc);
      }
    }
    require(piv >= 0, Errc::InvalidArgument, "hnf: lattice not full rank");
    ZVector pivot = std::move(active[static_cast<size_t>(piv)]);
    active.erase(active.begin() + piv);
    if (pivot[row] < 0)
      for (auto& x : pivot) x = -x;
    // Reduce remaining columns modulo M in the rows still to be processed.
    std::vector<ZVector> next;
    for (auto& c : active) {
      bool nonzero = false;
      for (size_t k = 0; k < row; ++k) {
        c[k] = mod(c[k], M);
        if (c[k] != 0) nonzero = true;
      }
      c[row] = 0;
      if (nonzero) next.push_back(std::move(c));
    }
    active = std::move(next);
    for (size_t k = 0; k < row; ++k) pivot[k] = mod(pivot[k], M);
    H.set_column(row, pivot);
  }
  // Reduce entries to the right of each diagonal element.
  for (size_t j = n; j-- > 0;) {
    for (size_t k = j + 1; k < n; ++k) {
      Integer q = floor_div(H(j, k), H(j, j));
      if (q == 0) continue;
      for (size_t i = 0; i <= j; ++i) H(i, k) -= q * H(i, j);
    }
  }
  return H;
}

ZVector hnf_reduce(const ZMatrix& h, ZVector v) {
  for (size_t i = h.rows(); i-- > 0;) {
    Integer q = floor_div(v[i], h(i, i));
    if (q == 0) continue;
    for (size_t k = 0; k <= i; ++k) v[k] -= q * h(k, i);
  }
  return v;
}

std::optional<ZVector> hnf_solve(const ZMatrix& h, const ZVector& v_in) {
  ZVector v = v_in;
  const size_t n = h.rows();
  ZVector x(n);
  for (size_t i = n; i-- > 0;) {
    if (!mpz_divisible_p(v[i].get_mpz_t(), h(i, i).get_mpz_t())) return std::nullopt;
    x[i] = v[i] / h(i, i);
    if (x[i] == 0) continue;
    for (size_t k = 0; k <= i; ++k) v[k] -= x[i] * h(k, i);
  }
  return x;
}

ZMatrix integer_kernel(const ZMatrix& a) {
  const size_t r = a.rows(), m = a.cols();
  std::vector<ZVector> cols(m);  // each: r entries of A part then m entries of transform
  for (size_t j = 0; j < m; ++j) {
    cols[j].resize(r + m);
    for (size_t i = 0; i < r; ++i) cols[j][i] = a(i, j);
    cols[j][r + j] = 1;
  }
  size_t k = 0;
  for (size_t row = 0; row < r && k < m; ++row) {
    int piv = -1;
    for (size_t j = k; j < m; ++j) {
      if (cols[j][row] == 0) continue;
      if (piv < 0) {
        piv = static_cast<int>(j);
        continue;
      }
      ZVector& p = cols[static_cast<size_t>(piv)];
      ZVector& c = cols[j];
      Integer g, s, t;
      ext_gcd(p[row], c[row], g, s, t);
      Integer x = p[row] / g, y = c[row] / g;
      for (size_t i = 0; i < r + m; ++i) {
        Integer np = s * p[i] + t * c[i];
        Integer nc = x * c[i] - y * p[i];
        p[i] = std::move(np);
        c[i] = std::move(nc);
      }
    }
    if (piv < 0) continue;
    std::swap(cols[k], cols[static_cast<size_t>(piv)]);
    ++k;
  }
  ZMatrix out(m, m - k);
  for (size_t j = k; j < m; ++j)
    for (size_t i = 0; i < m; ++i) out(i, j - k) = cols[j][r + i];
  return out;
}

SmithForm smith_form(const ZMatrix& a) {
  const size_t r = a.rows(), c = a.cols();
  ZMatrix D = a, U = ZMatrix::identity(r), V = ZMatrix::identity(c);
  auto swap_rows = [&](size_t i, size_t j) {
    for (size_t k = 0; k < c; ++k) std::swap(D(i, k), D(j, k));
    for (size_t k = 0; k < r; ++k) std::swap(U(i, k), U(j, k));
  };
  auto swap_cols = [&](size_t i, size_t j) {
    for (size_t k = 0; k < r; ++k) std::swap(D(k, i), D(k, j));
    for (size_t k = 0; k < c; ++k) std::swap(V(k, i), V(k, j));
  };
  auto add_row = [&](size_t dst, size_t src, const Integer& f) {  // row dst += f*row src
    for (size_t k = 0; k < c; ++k) D(dst, k) += f * D(src, k);
    for (size_t k = 0; k < r; ++k) U(dst, k) += f * U(src, k);
  };
  auto add_col = [&](size_t dst, size_t src, const Integer& f) {
    for (size_t k = 0; k < r; ++k) D(k, dst) += f * D(k, src);
    for (size_t k = 0; k < c; ++k) V(k, dst) += f * V(k, src);
  };
  const size_t n = std::min(r, c);
  for (size_t t = 0; t < n; ++t) {
    while (true) {
      // pivot: smallest nonzero |entry| in the trailing block
      bool any = false;
      size_t pi = t, pj = t;
      Integer best;
      for (size_t i = t; i < r; ++i)
        for (size_t j = t; j < c; ++j)
          if (D(i, j) != 0 && (!any || abs(D(i, j)) < best)) {
            any = true;
            best = abs(D(i, j));
            pi = i;
            pj = j;
          }
      if (!any) goto done;
      if (pi != t) swap_rows(pi, t);
      if (pj != t) swap_cols(pj, t);
      bool clean = true;
      for (size_t i = t + 1; i < r; ++i) {
        if (D(i, t) == 0) continue;
        Integer q = floor_div(D(i, t), D(t, t));
        add_row(i, t, -q);
        if (D(i, t) != 0) clean = false;
      }
      for (size_t j = t + 1; j < c; ++j) {
        if (D(t, j) == 0) continue;
        Integer q = floor_div(D(t, j), D(t, t));
        add_col(j, t, -q);
        if (D(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      // divisibility condition on the trailing block
      bool divides_all = true;
      for (size_t i = t + 1; i < r && divides_all; ++i)
        for (size_t j = t + 1; j < c; ++j)
          if (!mpz_divisible_p(D(i, j).get_mpz_t(), D(t, t).get_mpz_t())) {
            add_row(t, i, Integer(1));
            divides_all = false;
            break;
          }
      if (divides_all) break;
    }
    if (D(t, t) < 0) {
      for (size_t k = 0; k < c; ++k) D(t, k) = -D(t, k);
      for (size_t k = 0; k < r; ++k) U(t, k) = -U(t, k);
    }
  }
done:
  SmithForm sf;
  for (size_t t = 0; t < n; ++t) sf.diag.push_back(D(t, t));
  sf.U = U;
  sf.V = V;
  return sf;
}

std::vector<std::vector<long>> kernel_mod_p(const std::vector<std::vector<long>>& rows_in, size_t ncols, long p) {
  std::vector<std::vector<long>> m = rows_in;
  for (auto& row : m)
    for (auto& x : row) x = ((x % p) + p) % p;
  auto mulmod = [p](long a, long b) { return static_cast<long>((static_cast<__int128>(a) * b) % p); };
  auto inv = [&](long a) {
    long r = 1, b = a, e = p - 2;
    while (e > 0) {
      if (e & 1) r = mulmod(r, b);
      b = mulmod(b, b);
      e >>= 1;
    }
    return r;
  };
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t c = 0; c < ncols && r < m.size(); ++c) {
    size_t piv = r;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[r]);
    long iv = inv(m[r][c]);
    for (auto& x : m[r]) x = mulmod(x, iv);
    for (size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      long f = m[i][c];
      for (size_t j = 0; j < ncols; ++j) m[i][j] = ((m[i][j] - mulmod(f, m[r][j])) % p + p) % p;
    }
    pivots.push_back(c);
    ++r;
  }
  std::vector<bool> is_piv(ncols, false);
  for (size_t c : pivots) is_piv[c] = true;
  std::vector<std::vector<long>> out;
  for (size_t free = 0; free < ncols; ++free) {
    if (is_piv[free]) continue;
    std::vector<long> v(ncols, 0);
    v[free] = 1;
    for (size_t row = 0; row < pivots.size(); ++row) v[pivots[row]] = (p - m[row][free]) % p;
    out.push_back(v);
  }
  return out;
}

size_t rank_mod_p(std::vector<std::vector<long>> rows, size_t ncols, long p) {
  return ncols - kernel_mod_p(rows, ncols, p).size();
}

std::string to_string(const QMatrix& m) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < m.rows(); ++i) {
    os << (i ? "; " : "");
    for (size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j).get_str();
  }
  os << "]";
  return os.str();
}

}  // namespace cmreflex
