#include "cmreflex/galois.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "cmreflex/errors.hpp"
#include "cmreflex/factor.hpp"

namespace cmreflex {

NFPoly::NFPoly(NumberField k, std::vector<NFElement> coeffs) : k_(std::move(k)), c_(std::move(coeffs)) { trim(); }

NFPoly NFPoly::from_rational(const NumberField& k, const UniPoly& f) {
  std::vector<NFElement> c;
  for (auto& q : f.coeffs()) c.push_back(k.from_rational(q));
  return NFPoly(k, std::move(c));
}

void NFPoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

NFElement NFPoly::coeff(int i) const {
  if (i < 0 || i > degree()) return k_.zero();
  return c_[static_cast<size_t>(i)];
}

NFPoly NFPoly::monic() const {
  if (is_zero()) return *this;
  NFElement inv = lead().inverse();
  std::vector<NFElement> c;
  for (auto& a : c_) c.push_back(a * inv);
  return NFPoly(k_, std::move(c));
}

NFPoly NFPoly::derivative() const {
  std::vector<NFElement> c;
  for (size_t i = 1; i < c_.size(); ++i) c.push_back(c_[i] * Rational(static_cast<long>(i)));
  return NFPoly(k_, std::move(c));
}

NFElement NFPoly::eval(const NFElement& x) const {
  NFElement acc = k_.zero();
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

NFPoly NFPoly::shift(const NFElement& a) const {
  NFPoly lin(k_, {a, k_.one()});
  NFPoly acc(k_, {});
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc = acc * lin;
    acc += NFPoly(k_, {*it});
  }
  return acc;
}

NFPoly& NFPoly::operator+=(const NFPoly& o) {
  if (!k_.valid()) k_ = o.k_;
  while (c_.size() < o.c_.size()) c_.push_back(k_.zero());
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

NFPoly& NFPoly::operator-=(const NFPoly& o) {
  if (!k_.valid()) k_ = o.k_;
  while (c_.size() < o.c_.size()) c_.push_back(k_.zero());
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

NFPoly operator*(const NFPoly& a, const NFPoly& b) {
  if (a.is_zero() || b.is_zero()) return NFPoly(a.field().valid() ? a.field() : b.field(), {});
  const NumberField& k = a.field();
  std::vector<NFElement> c(a.coeffs().size() + b.coeffs().size() - 1, k.zero());
  for (size_t i = 0; i < a.coeffs().size(); ++i) {
    if (a.coeffs()[i].is_zero()) continue;
    for (size_t j = 0; j < b.coeffs().size(); ++j) c[i + j] += a.coeffs()[i] * b.coeffs()[j];
  }
  return NFPoly(k, std::move(c));
}

std::pair<NFPoly, NFPoly> divmod(const NFPoly& a, const NFPoly& b) {
  require(!b.is_zero(), Errc::InvalidArgument, "polynomial division by zero");
  const NumberField& k = b.field();
  if (a.degree() < b.degree()) return {NFPoly(k, {}), a};
  std::vector<NFElement> r = a.coeffs();
  std::vector<NFElement> q(static_cast<size_t>(a.degree() - b.degree()) + 1, k.zero());
  NFElement inv = b.lead().inverse();
  for (int i = a.degree(); i >= b.degree(); --i) {
    NFElement t = r[static_cast<size_t>(i)] * inv;
    if (t.is_zero()) continue;
    size_t shift = static_cast<size_t>(i - b.degree());
    q[shift] = t;
    for (size_t j = 0; j < b.coeffs().size(); ++j) r[shift + j] -= t * b.coeffs()[j];
  }
  r.resize(static_cast<size_t>(b.degree()));
  return {NFPoly(k, std::move(q)), NFPoly(k, std::move(r))};
}

NFPoly gcd(NFPoly a, NFPoly b) {
  while (!b.is_zero()) {
    NFPoly r = divmod(a, b).second;
    a = std::move(b);
    b = r.monic();
  }
  return a.monic();
}

UniPoly norm_poly(const NFPoly& g) {
  const NumberField& k = g.field();
  const int d = g.degree() * k.degree();
  std::vector<Rational> xs, ys;
  for (int i = 0; i <= d; ++i) {
    Rational x0 = (i % 2 == 0) ? Rational(i / 2) : Rational(-(i + 1) / 2);
    xs.push_back(x0);
    ys.push_back(g.eval(k.from_rational(x0)).norm());
  }
  return interpolate(xs, ys);
}

std::vector<NFPoly> factor_squarefree(const NFPoly& g_in) {
  NFPoly g = g_in.monic();
  const NumberField& k = g.field();
  if (g.degree() <= 1) return {g};
  if (k.degree() == 1) {
    std::vector<Rational> c;
    for (auto& a : g.coeffs()) c.push_back(a[0]);
    std::vector<NFPoly> out;
    for (auto& [h, e] : factor_rational_poly(UniPoly(c))) out.push_back(NFPoly::from_rational(k, h));
    return out;
  }
  const NFElement theta = k.gen();
  for (long step = 0; step < 64; ++step) {
    long s = (step % 2 == 0) ? step / 2 : -(step + 1) / 2;
    // g_s(x) = g(x - s*theta) has roots beta + s*theta
    NFPoly gs = g.shift(theta * Rational(-s));
    UniPoly n = norm_poly(gs);
    if (!is_squarefree(n)) continue;
    std::vector<NFPoly> out;
    for (auto& [h, e] : factor_rational_poly(n)) {
      NFPoly fac = gcd(gs, NFPoly::from_rational(k, h));
      if (fac.degree() >= 1) out.push_back(fac.shift(theta * Rational(s)).monic());
    }
    return out;
  }
  fail(Errc::InvalidArgument, "no squarefree norm found");
}

std::vector<NFElement> roots_in_field(const UniPoly& f, const NumberField& k) {
  std::vector<NFElement> out;
  UniPoly sqf = f.monic();
  sqf = sqf / gcd(sqf, sqf.derivative());
  for (auto& fac : factor_squarefree(NFPoly::from_rational(k, sqf)))
    if (fac.degree() == 1) out.push_back(-fac.coeff(0));
  return out;
}

std::vector<FieldMorphism> nf_automorphisms(const NumberField& k) {
  std::vector<FieldMorphism> out{FieldMorphism(k, k.gen())};
  if (k.degree() == 1) return out;
  auto roots = roots_in_field(k.min_poly(), k);
  std::sort(roots.begin(), roots.end(), [](const NFElement& a, const NFElement& b) { return a.coords() < b.coords(); });
  for (auto& r : roots)
    if (r != k.gen()) out.emplace_back(k, r);
  return out;
}

size_t GaloisField::index_of(const FieldMorphism& s) const {
  for (size_t i = 0; i < autos.size(); ++i)
    if (autos[i].image() == s.image()) return i;
  fail(Errc::InvalidArgument, "automorphism not found");
}

GaloisField make_galois(const NumberField& k, std::vector<FieldMorphism> autos) {
  require(autos.size() == static_cast<size_t>(k.degree()), Errc::Unsupported, "field is not Galois over Q");
  GaloisField g;
  g.field = k;
  // identity first, remaining in order of the complex root they send rho_0 to
  std::vector<std::pair<size_t, FieldMorphism>> tagged;
  for (auto& a : autos) tagged.emplace_back(identify_root(k, a.image(), 0), a);
  std::sort(tagged.begin(), tagged.end(), [](auto& x, auto& y) { return x.first < y.first; });
  auto id = std::find_if(tagged.begin(), tagged.end(), [](auto& t) { return t.second.is_identity(); });
  require(id != tagged.end(), Errc::InvalidArgument, "identity missing from automorphism list");
  std::rotate(tagged.begin(), id, id + 1);
  for (auto& [r, a] : tagged) {
    g.autos.push_back(a);
    g.root_of.push_back(r);
  }
  const size_t n = g.autos.size();
  g.mul.assign(n, std::vector<size_t>(n));
  g.inv.assign(n, 0);
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) {
      g.mul[a][b] = g.index_of(g.autos[a].after(g.autos[b]));
      if (g.mul[a][b] == 0) g.inv[a] = b;
    }
  const size_t cr = k.roots().conj[0];
  for (size_t a = 0; a < n; ++a)
    if (g.root_of[a] == cr) g.complex_conj = a;
  return g;
}

GaloisField as_galois(const NumberField& k) { return make_galois(k, nf_automorphisms(k)); }

std::string identify_group(const std::vector<std::vector<size_t>>& mul) {
  const size_t n = mul.size();
  std::vector<size_t> order(n, 1);
  for (size_t a = 0; a < n; ++a) {
    size_t x = a;
    while (x != 0) {
      x = mul[x][a];
      ++order[a];
    }
  }
  order[0] = 1;
  bool abelian = true;
  for (size_t a = 0; a < n && abelian; ++a)
    for (size_t b = 0; b < n; ++b)
      if (mul[a][b] != mul[b][a]) {
        abelian = false;
        break;
      }
  size_t maxord = *std::max_element(order.begin(), order.end());
  size_t involutions = static_cast<size_t>(std::count(order.begin(), order.end(), 2));
  const std::string sn = std::to_string(n);
  if (maxord == n) return "C" + sn;
  if (abelian) {
    if (maxord == 2) {
      int r = 0;
      for (size_t m = n; m > 1; m /= 2) ++r;
      return r == 2 ? "V4" : "C2^" + std::to_string(r);
    }
    if (n == 8) return "C4xC2";
    return "abelian-" + sn;
  }
  if (n == 6) return "S3";
  if (n == 8) return involutions == 1 ? "Q8" : "D4";
  if (n == 12 && maxord == 6) return "D6";
  if (n == 16 && maxord == 8 && involutions == 9) return "D8";
  return "order-" + sn;
}

namespace {

Integer height(const UniPoly& f) {
  Integer h = 0;
  for (auto& q : f.coeffs()) h = std::max(h, Integer(abs(q.get_num()) * q.get_den()));
  return h;
}

// Among candidate elements pick one of the required degree with the smallest
// defining polynomial; ties go to the earliest candidate.
Subfield best_primitive(const std::vector<NFElement>& cands, int degree) {
  std::optional<NFElement> best;
  UniPoly best_poly;
  for (auto y : cands) {
    UniPoly m = y.minpoly();
    if (m.degree() != degree) continue;
    if (!m.has_integer_coeffs()) {
      // d*y is integral once d clears every coefficient denominator
      Integer d = 1;
      for (int i = 0; i <= m.degree(); ++i) d = lcm(d, Integer(m.coeff(i).get_den()));
      y *= Rational(d);
      m = y.minpoly();
    }
    if (!best || height(m) < height(best_poly) ||
        (height(m) == height(best_poly) && poly_less(m, best_poly))) {
      best = y;
      best_poly = m;
    }
  }
  require(best.has_value(), Errc::InvalidArgument, "no primitive element found for subfield");
  NumberField sub(best_poly);
  return Subfield{sub, FieldMorphism(sub, *best)};
}

std::vector<NFElement> orbit_candidates(const NumberField& k, const std::vector<FieldMorphism>& group,
                                        const std::vector<NFElement>& seeds) {
  std::vector<NFElement> cands;
  for (auto& x : seeds) {
    NFElement s = k.zero(), p = k.one();
    for (auto& h : group) {
      NFElement hx = h(x);
      s += hx;
      p *= hx;
    }
    cands.push_back(s);
    cands.push_back(p);
  }
  return cands;
}

}  // namespace

Subfield fixed_field(const NumberField& k, const std::vector<FieldMorphism>& group) {
  const int d = k.degree() / static_cast<int>(group.size());
  std::vector<NFElement> seeds;
  NFElement th = k.gen();
  for (long c = 0; c < 6; ++c) seeds.push_back(th + k.from_rational(c));
  for (long c = 1; c < 4; ++c) seeds.push_back(th * th + k.from_rational(c) * th);
  auto cands = orbit_candidates(k, group, seeds);
  // basis of the fixed space as extra candidates
  const size_t n = static_cast<size_t>(k.degree());
  QMatrix stacked(n * group.size(), n);
  for (size_t g = 0; g < group.size(); ++g) {
    QMatrix m = group[g].matrix();
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) stacked(g * n + i, j) = m(i, j) - (i == j ? 1 : 0);
  }
  for (auto& v : kernel(stacked)) cands.push_back(k.from_coords(v));
  return best_primitive(cands, d);
}

Subfield fixed_field(const GaloisField& g, const std::vector<size_t>& subgroup) {
  std::vector<FieldMorphism> grp;
  for (size_t i : subgroup) grp.push_back(g.autos[i]);
  return fixed_field(g.field, grp);
}

std::vector<FieldMorphism> field_embeddings(const NumberField& src, const NumberField& dst) {
  std::vector<FieldMorphism> out;
  if (dst.degree() % src.degree() != 0) return out;
  for (auto& r : roots_in_field(src.min_poly(), dst)) out.emplace_back(src, r);
  return out;
}

namespace {

// Rewrite a polynomial whose coefficients lie in L = Q(gamma) as a polynomial
// in y over L', replacing gamma by y and x by z - s*y.
NFPoly substitute(const NFPoly& g, const NumberField& lp, const NFElement& z, long s) {
  NFPoly lin(lp, {z, lp.from_rational(-s)});
  NFPoly acc(lp, {});
  NFPoly power(lp, {lp.one()});
  for (int j = 0; j <= g.degree(); ++j) {
    std::vector<NFElement> cj;
    const NFElement gj = g.coeff(j);
    for (auto& q : gj.coords()) cj.push_back(lp.from_rational(q));
    acc += NFPoly(lp, cj) * power;
    power = power * lin;
  }
  return acc;
}

NFElement map_element(const NFElement& a, const NFElement& gamma_image) {
  const NumberField& t = gamma_image.field();
  NFElement acc = t.zero();
  const auto& c = a.coords();
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    acc *= gamma_image;
    acc += t.from_rational(*it);
  }
  return acc;
}

}  // namespace

GaloisClosure galois_closure(const NumberField& k) {
  const UniPoly& f = k.min_poly();
  const int n = k.degree();
  NumberField L = k;
  std::vector<NFElement> roots{k.gen()};
  // L.gen() = sum of combo[t].second * roots[combo[t].first]
  std::vector<std::pair<size_t, long>> combo{{0, 1}};

  while (static_cast<int>(roots.size()) < n) {
    NFPoly q = NFPoly::from_rational(L, f);
    for (auto& r : roots) q = divmod(q, NFPoly(L, {-r, L.one()})).first;
    auto facs = factor_squarefree(q);
    std::sort(facs.begin(), facs.end(), [](const NFPoly& a, const NFPoly& b) { return a.degree() < b.degree(); });
    bool grew = false;
    for (auto& fac : facs)
      if (fac.degree() == 1) {
        roots.push_back(-fac.coeff(0));
        grew = true;
      }
    if (grew) continue;
    const NFPoly& g = facs.front();
    require(L.degree() * g.degree() <= 16, Errc::ClosureTooLarge,
            "Galois closure of " + f.to_string() + " exceeds degree 16");
    const NFElement gamma = L.gen();
    bool adjoined = false;
    for (long step = 1; step < 64 && !adjoined; ++step) {
      long s = (step % 2 == 1) ? (step + 1) / 2 : -step / 2;
      NFPoly gs = g.shift(gamma * Rational(-s));
      UniPoly nrm = norm_poly(gs);
      if (!is_squarefree(nrm)) continue;
      NumberField lp(nrm.monic());
      NFElement z = lp.gen();
      NFPoly fl = NFPoly::from_rational(lp, L.min_poly());
      NFPoly common = gcd(fl, substitute(g, lp, z, s));
      require(common.degree() == 1, Errc::InvalidArgument, "closure step lost the old generator");
      NFElement gamma_new = -common.coeff(0);
      std::vector<NFElement> mapped;
      for (auto& r : roots) mapped.push_back(map_element(r, gamma_new));
      NFElement beta = z - gamma_new * Rational(s);
      mapped.push_back(beta);
      for (auto& c : combo) c.second *= s;
      combo.emplace_back(mapped.size() - 1, 1);
      roots = std::move(mapped);
      L = lp;
      adjoined = true;
    }
    require(adjoined, Errc::InvalidArgument, "no primitive element found while adjoining a root");
  }

  // Order the embeddings of k by the complex embedding rho_0 o embed.
  std::vector<std::pair<size_t, NFElement>> tagged;
  for (auto& r : roots) tagged.emplace_back(identify_root(k, r, 0), r);
  std::sort(tagged.begin(), tagged.end(), [](auto& a, auto& b) { return a.first < b.first; });
  for (size_t i = 0; i < tagged.size(); ++i)
    require(tagged[i].first == i, Errc::InvalidArgument, "embeddings into closure do not match roots");
  std::vector<NFElement> sorted_roots;
  for (auto& t : tagged) sorted_roots.push_back(t.second);
  // combo refers to positions in `roots`; translate to sorted positions
  for (auto& c : combo) {
    for (size_t j = 0; j < sorted_roots.size(); ++j)
      if (sorted_roots[j] == roots[c.first]) {
        c.first = j;
        break;
      }
  }

  // Automorphisms: images of the generator as the same combination of permuted roots.
  std::vector<FieldMorphism> autos;
  std::vector<size_t> used;
  for (auto& c : combo) used.push_back(c.first);
  std::vector<size_t> assign(used.size());
  std::vector<bool> taken(static_cast<size_t>(n), false);
  std::function<void(size_t)> rec = [&](size_t pos) {
    if (pos == used.size()) {
      NFElement img = L.zero();
      for (size_t t = 0; t < used.size(); ++t) img += sorted_roots[assign[t]] * Rational(combo[t].second);
      NFElement acc = L.zero();
      const auto& mc = L.min_poly().coeffs();
      for (auto it = mc.rbegin(); it != mc.rend(); ++it) {
        acc *= img;
        acc += L.from_rational(*it);
      }
      if (acc.is_zero()) autos.emplace_back(L, img);
      return;
    }
    for (size_t j = 0; j < static_cast<size_t>(n); ++j) {
      if (taken[j]) continue;
      taken[j] = true;
      assign[pos] = j;
      rec(pos + 1);
      taken[j] = false;
    }
  };
  rec(0);
  require(autos.size() == static_cast<size_t>(L.degree()), Errc::InvalidArgument, "automorphism count mismatch in closure");

  GaloisClosure out;
  out.base = k;
  out.L = make_galois(L, autos);
  for (auto& r : sorted_roots) out.embeds.emplace_back(k, r);
  for (auto& a : out.L.autos) {
    std::vector<size_t> p(static_cast<size_t>(n));
    for (size_t i = 0; i < p.size(); ++i) {
      NFElement im = a(sorted_roots[i]);
      auto it = std::find(sorted_roots.begin(), sorted_roots.end(), im);
      require(it != sorted_roots.end(), Errc::InvalidArgument, "automorphism does not permute roots");
      p[i] = static_cast<size_t>(it - sorted_roots.begin());
    }
    out.perm.push_back(p);
  }
  out.group_name = identify_group(out.L.mul);
  return out;
}

}  // namespace cmreflex
