#include "cmreflex/cmreflex.hpp"

#include <algorithm>
#include <memory>
#include <random>
#include <set>
#include <sstream>

#include "cmreflex/enumerate.hpp"
#include "cmreflex/errors.hpp"

namespace cmreflex {

// ---------------------------------------------------------------- CM fields and types

size_t CMField::conj_index(size_t i) const { return field.roots().conj[i]; }

std::optional<CMField> cm_check(const NumberField& k) {
  if (k.degree() % 2 != 0 || !k.is_totally_imaginary()) return std::nullopt;
  auto conj = positive_involution(k);
  if (!conj) return std::nullopt;
  Subfield F = fixed_field(k, {FieldMorphism(k, k.gen()), *conj});
  if (!F.field.is_totally_real()) return std::nullopt;
  return CMField{k, Order::maximal(k), *conj, F.field, F.incl};
}

bool CMType::contains(size_t i) const { return std::binary_search(phi.begin(), phi.end(), i); }

std::string CMType::to_string() const {
  std::ostringstream s;
  s << "{";
  for (size_t i = 0; i < phi.size(); ++i) s << (i ? ", " : "") << phi[i];
  s << "}";
  return s.str();
}

CMType make_cm_type(const CMField& cm, std::vector<size_t> phi) {
  std::sort(phi.begin(), phi.end());
  phi.erase(std::unique(phi.begin(), phi.end()), phi.end());
  const size_t n = static_cast<size_t>(cm.field.degree());
  require(phi.size() == n / 2, Errc::InvalidArgument, "a CM-type has [E:Q]/2 embeddings");
  for (size_t i : phi) {
    require(i < n, Errc::InvalidArgument, "embedding index out of range");
    require(!std::binary_search(phi.begin(), phi.end(), cm.conj_index(i)), Errc::InvalidArgument,
            "a CM-type contains one embedding from each conjugate pair");
  }
  return CMType{cm, phi};
}

std::vector<CMType> enumerate_cm_types(const CMField& cm) {
  const size_t n = static_cast<size_t>(cm.field.degree());
  std::vector<std::pair<size_t, size_t>> pairs;
  for (size_t i = 0; i < n; ++i)
    if (i < cm.conj_index(i)) pairs.emplace_back(i, cm.conj_index(i));
  std::vector<CMType> out;
  for (size_t t = 0; t < (size_t(1) << pairs.size()); ++t) {
    std::vector<size_t> phi;
    for (size_t j = 0; j < pairs.size(); ++j) phi.push_back((t >> j) & 1 ? pairs[j].second : pairs[j].first);
    out.push_back(make_cm_type(cm, phi));
  }
  return out;
}

// ---------------------------------------------------------------- reflex norm

ReflexNorm::ReflexNorm(const CMType& phi, const GaloisField& k) : phi_(phi), k_(k) { init(); }

ReflexNorm::ReflexNorm(const CMType& phi, const NumberField& k) : phi_(phi), k_(as_galois(k)) { init(); }

void ReflexNorm::init() {
  const NumberField& E = phi_.cm.field;
  ok_ = Order::maximal(k_.field);
  auto all = field_embeddings(E, k_.field);
  require(static_cast<int>(all.size()) == E.degree(), Errc::ConjugatesMissing,
          "k does not contain all conjugates of E");
  std::vector<std::pair<size_t, FieldMorphism>> chosen;
  for (auto& m : all) {
    size_t j = identify_root(E, m.image(), 0);
    if (phi_.contains(j)) chosen.emplace_back(j, m);
  }
  std::sort(chosen.begin(), chosen.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  require(chosen.size() == phi_.phi.size(), Errc::InvalidArgument, "embeddings do not match the CM-type");
  for (auto& [j, m] : chosen) {
    emb_.push_back(m);
    std::vector<size_t> rel;
    for (size_t t = 0; t < k_.order(); ++t)
      if (k_.autos[t](m.image()) == m.image()) rel.push_back(t);
    rel_group_.push_back(rel);
  }
}

NFElement ReflexNorm::operator()(const NFElement& a) const {
  require(a.field() == k_.field, Errc::InvalidArgument, "element not in k");
  require(!a.is_zero(), Errc::ZeroElement, "reflex norm of zero");
  NFElement r = phi_.cm.field.one();
  for (size_t i = 0; i < emb_.size(); ++i) {
    NFElement nm = k_.field.one();
    for (size_t t : rel_group_[i]) nm *= k_.autos[t](a);
    auto pre = emb_[i].preimage(nm);
    require(pre.has_value(), Errc::InvalidArgument, "relative norm does not lie in phi(E)");
    r *= *pre;
  }
  return r;
}

FracIdeal ReflexNorm::of_prime(const PrimeIdeal& P) const {
  FracIdeal r = FracIdeal::unit(phi_.cm.order);
  for (auto& m : emb_) {
    PrimeIdeal q = prime_below(P, m, phi_.cm.order);
    r = r * ideal_pow(q.ideal, P.f / q.f);
  }
  return r;
}

FracIdeal ReflexNorm::operator()(const FracIdeal& a) const {
  require(a.order() == ok_, Errc::OrderMismatch, "ideal is not an ideal of O_k");
  FracIdeal r = FracIdeal::unit(phi_.cm.order);
  for (auto& [P, v] : factor_ideal(a)) r = r * ideal_pow(of_prime(P), v);
  return r;
}

NFElement reflex_norm_elem(const CMType& phi, const NumberField& k, const NFElement& a) {
  return ReflexNorm(phi, k)(a);
}

FracIdeal reflex_norm_ideal(const CMType& phi, const NumberField& k, const FracIdeal& a) {
  return ReflexNorm(phi, k)(a);
}

PrimeIdeal prime_below(const PrimeIdeal& P, const FieldMorphism& m, const Order& small) {
  for (auto& q : prime_split(P.p, small)) {
    bool inside = true;
    for (auto& b : q.ideal.basis())
      if (!P.ideal.contains(m(b))) {
        inside = false;
        break;
      }
    if (inside) return q;
  }
  fail(Errc::InvalidArgument, "no prime below the given prime");
}

FracIdeal relative_norm(const FracIdeal& a, const FieldMorphism& m, const Order& small) {
  FracIdeal r = FracIdeal::unit(small);
  for (auto& [P, v] : factor_ideal(a)) {
    PrimeIdeal q = prime_below(P, m, small);
    r = r * ideal_pow(q.ideal, v * (P.f / q.f));
  }
  return r;
}

FracIdeal ideal_conjugate(const FracIdeal& a, const FieldMorphism& s) { return ideal_image(a, s, a.order()); }

// ---------------------------------------------------------------- reflex field

ReflexData reflex_field(const CMType& phi) {
  ReflexData r;
  r.type = phi;
  r.closure = galois_closure(phi.cm.field);
  const GaloisField& L = r.closure.L;
  const size_t G = L.order();
  for (size_t g = 0; g < G; ++g)
    if (phi.contains(r.closure.perm[g][0])) r.lift.push_back(g);
  std::set<size_t> S(r.lift.begin(), r.lift.end());
  for (size_t t = 0; t < G; ++t) {
    std::set<size_t> tS;
    for (size_t s : r.lift) tS.insert(L.mul[t][s]);
    if (tS == S) r.stabilizer.push_back(t);
  }
  std::set<size_t> covered;
  for (size_t s : r.lift) {
    if (covered.count(s)) continue;
    r.coset_reps.push_back(s);
    for (size_t h : r.stabilizer) covered.insert(L.mul[h][s]);
  }
  Subfield sub = fixed_field(L, r.stabilizer);
  r.reflex = sub.field;
  r.reflex_incl = sub.incl;
  auto cm = cm_check(r.reflex);
  require(cm.has_value(), Errc::InvalidArgument, "reflex field is not CM");
  std::vector<size_t> psi;
  const NFElement g0 = r.reflex_incl.image();
  for (size_t s : r.lift) psi.push_back(identify_root(r.reflex, L.autos[L.inv[s]](g0), 0));
  std::sort(psi.begin(), psi.end());
  psi.erase(std::unique(psi.begin(), psi.end()), psi.end());
  r.reflex_type = make_cm_type(*cm, psi);
  r.in_closure = std::make_shared<const ReflexNorm>(phi, L);
  return r;
}

NFElement ReflexData::norm_elem(const NFElement& b) const {
  const GaloisField& L = closure.L;
  NFElement x = reflex_incl(b);
  NFElement p = L.field.one();
  for (size_t s : coset_reps) p *= L.autos[L.inv[s]](x);
  auto pre = closure.embeds[0].preimage(p);
  require(pre.has_value(), Errc::InvalidArgument, "reflex norm does not land in E");
  return *pre;
}

FracIdeal ReflexData::norm_ideal(const FracIdeal& a) const {
  const ReflexNorm& rn = *in_closure;
  FracIdeal ext = ideal_image(a, reflex_incl, rn.k_order());
  FracIdeal rhs = rn(ext);
  const long m = static_cast<long>(stabilizer.size());
  std::vector<std::pair<PrimeIdeal, long>> root;
  for (auto& [P, v] : factor_ideal(rhs)) {
    require(v % m == 0, Errc::RootNotExact, "extension formula is not an exact power");
    root.emplace_back(P, v / m);
  }
  return from_factorization(type.cm.order, root);
}

// ---------------------------------------------------------------- identity suite

bool ReflexReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed(); });
}

namespace {

struct Recorder {
  std::vector<IdentityCheck> checks;
  IdentityCheck& get(const std::string& name) {
    for (auto& c : checks)
      if (c.name == name) return c;
    checks.push_back(IdentityCheck{name, 0, 0, ""});
    return checks.back();
  }
  void record(const std::string& name, bool ok, const std::string& witness) {
    IdentityCheck& c = get(name);
    ++c.checked;
    if (!ok) {
      if (c.failed == 0) c.witness = witness;
      ++c.failed;
    }
  }
};

// Order basis reduced for T2, so that small combinations have small norms.
std::vector<NFElement> reduced_basis(const Order& o) {
  auto conj = positive_involution(o.field());
  FracIdeal unit = FracIdeal::unit(o);
  auto b = unit.basis();
  if (!conj) return b;
  ZMatrix u = lll_transform(t2_gram(unit, *conj));
  std::vector<NFElement> out;
  for (size_t j = 0; j < b.size(); ++j) {
    NFElement e = o.field().zero();
    for (size_t i = 0; i < b.size(); ++i)
      if (u(i, j) != 0) e += b[i] * Rational(u(i, j));
    out.push_back(e);
  }
  return out;
}

NFElement sample(const std::vector<NFElement>& basis, std::mt19937_64& rng, long h, int max_terms) {
  std::uniform_int_distribution<long> d(-h, h);
  std::uniform_int_distribution<size_t> pick(0, basis.size() - 1);
  while (true) {
    NFElement x = basis[0] * Rational(d(rng));
    for (int t = 0; t < max_terms; ++t) x += basis[pick(rng)] * Rational(d(rng));
    if (!x.is_zero()) return x;
  }
}

// Embedding of sub into k compatible with the complex embeddings fixed by root 0
// of each side's ambient field: rho_k o j = rho_amb o incl.
std::optional<FieldMorphism> compatible_embedding(const NumberField& sub, size_t root_in_amb, const NumberField& k) {
  for (auto& j : field_embeddings(sub, k))
    if (identify_root(sub, j.image(), 0) == root_in_amb) return j;
  return std::nullopt;
}

}  // namespace

ReflexReport verify_reflex_identities(const CMType& phi, const NumberField& k_in, int n_samples, unsigned long seed,
                                      long prime_norm_bound) {
  Recorder rec;
  ReflexData R = reflex_field(phi);
  const GaloisField& L = R.closure.L;
  const bool k_is_L = !k_in.valid() || k_in == L.field;
  GaloisField kg = k_is_L ? L : as_galois(k_in);
  const ReflexNorm N = k_is_L ? *R.in_closure : ReflexNorm(phi, kg);
  const ReflexNorm& NL = *R.in_closure;
  const NumberField& k = kg.field;
  const Order& ok = N.k_order();
  const CMField& E = phi.cm;
  const Order& oE = E.order;
  const Order& oR = R.reflex_type.cm.order;

  // E* and L inside k, compatible with the fixed complex embeddings
  size_t reflex_root = identify_root(R.reflex, R.reflex_incl.image(), 0);
  auto jR = compatible_embedding(R.reflex, reflex_root, k);
  require(jR.has_value(), Errc::ConjugatesMissing, "k does not contain the reflex field");
  auto jL = k_is_L ? std::optional<FieldMorphism>(FieldMorphism(L.field, L.field.gen()))
                   : compatible_embedding(L.field, 0, k);
  require(jL.has_value(), Errc::ConjugatesMissing, "k does not contain the Galois closure of E");
  std::vector<size_t> rel_reflex;
  for (size_t t = 0; t < kg.order(); ++t)
    if (kg.autos[t](jR->image()) == jR->image()) rel_reflex.push_back(t);
  const long kL = k.degree() / L.field.degree();

  std::mt19937_64 rng(seed);
  auto kb = reduced_basis(ok);
  auto Lb = reduced_basis(NL.k_order());
  auto Rb = reduced_basis(oR);

  for (int t = 0; t < n_samples; ++t) {
    NFElement a = sample(kb, rng, 3, 3);
    NFElement b = sample(kb, rng, 3, 3);
    NFElement na = N(a), nb = N(b);
    std::string w = "a = " + a.to_string();

    // N(a) * conj(N(a)) = Nm_{k/Q}(a)
    NFElement lhs = na * E.conj(na);
    rec.record("norm-times-conjugate", lhs == E.field.from_rational(a.norm()), w);

    // the embedding formula agrees with the closure formula, raised to [k:L]
    NFElement aL = sample(Lb, rng, 3, 3);
    NFElement viaS = L.field.one();
    for (size_t s : R.lift) viaS *= L.autos[L.inv[s]](aL);
    auto pre = R.closure.embeds[0].preimage(viaS);
    bool ok_emb = pre.has_value() && N((*jL)(aL)) == pre->pow(kL);
    rec.record("embedding-formula", ok_emb, "a = " + aL.to_string());

    // N_{k,Phi} = N_Phi o Nm_{k/E*}
    NFElement nm = k.one();
    for (size_t s : rel_reflex) nm *= kg.autos[s](a);
    auto nmR = jR->preimage(nm);
    bool ok_through = nmR.has_value() && R.norm_elem(*nmR) == na;
    rec.record("through-reflex-norm", ok_through, w);

    // multiplicativity on elements
    rec.record("multiplicative", N(a * b) == na * nb, w + ", b = " + b.to_string());

    // principal ideals: N((a)) = (N(a))
    if (t < std::max(1, n_samples / 5)) {
      NFElement small = sample(kb, rng, 2, 1);
      bool okp = N(FracIdeal::principal(ok, small)) == FracIdeal::principal(oE, N(small));
      rec.record("principal", okp, "a = " + small.to_string());
    }
    // N_Phi on E*: element and ideal forms agree
    if (t < std::max(1, n_samples / 10)) {
      NFElement bR = sample(Rb, rng, 2, 1);
      bool oke = R.norm_ideal(FracIdeal::principal(oR, bR)) == FracIdeal::principal(oE, R.norm_elem(bR));
      rec.record("principal-reflex-ideal", oke, "b = " + bR.to_string());
    }
  }

  // units of O_k go to units of O_E
  {
    auto conj = positive_involution(k);
    std::vector<NFElement> units;
    if (conj) {
      unsigned long budget = default_budget();
      for (auto& x : short_elements(FracIdeal::unit(ok), *conj, Rational(3 * k.degree()), budget))
        if (abs(x.norm()) == 1) units.push_back(x);
    }
    for (auto& u : units) {
      NFElement nu = N(u);
      rec.record("units", abs(nu.norm()) == 1 && oE.contains(nu) && oE.contains(nu.inverse()), "u = " + u.to_string());
    }
  }

  // prime ideals of O_k of small norm
  std::vector<PrimeIdeal> primes;
  for (long p : primes_up_to(prime_norm_bound))
    for (auto& P : prime_split(p, ok))
      if (pow(Integer(p), static_cast<unsigned long>(P.f)) < prime_norm_bound) primes.push_back(P);
  std::vector<FracIdeal> images;
  for (auto& P : primes) {
    std::string w = "P = " + P.ideal.to_string() + " over " + P.p.get_str();
    FracIdeal img = N.of_prime(P);
    images.push_back(img);
    Integer q = pow(P.p, static_cast<unsigned long>(P.f));
    rec.record("ideal-norm-times-conjugate", img * ideal_conjugate(img, E.conj) == FracIdeal::principal(oE, E.field.from_rational(q)), w);
    FracIdeal down = relative_norm(P.ideal, *jR, oR);
    bool ok_through = false;
    try {
      ok_through = R.norm_ideal(down) == img;
    } catch (const Error& e) {
      if (e.code() != Errc::RootNotExact) throw;
    }
    rec.record("ideal-through-reflex-norm", ok_through, w);
    // N_Phi of the prime below, as an exact root, against an independent class-group route
    PrimeIdeal pR = prime_below(P, *jR, oR);
    bool ok_root = true;
    std::string w_root = "p = " + pR.ideal.to_string();
    try {
      FracIdeal root = R.norm_ideal(pR.ideal);
      FracIdeal acc = FracIdeal::unit(oR);
      for (long h = 1; h <= 12; ++h) {
        acc = acc * pR.ideal;
        std::optional<NFElement> gen;
        try {
          gen = is_principal(acc);
        } catch (const Error& e) {
          if (e.code() != Errc::Unsupported && e.code() != Errc::EnumerationBoundExceeded) throw;
          break;
        }
        if (gen) {
          ok_root = ideal_pow(root, h) == FracIdeal::principal(oE, R.norm_elem(*gen));
          break;
        }
      }
    } catch (const Error& e) {
      if (e.code() != Errc::RootNotExact) throw;
      ok_root = false;
    }
    rec.record("ideal-reflex-norm-root", ok_root, w_root);
  }
  for (size_t i = 0; i + 1 < primes.size(); i += 2) {
    FracIdeal prod = primes[i].ideal * primes[i + 1].ideal;
    rec.record("ideal-multiplicative", N(prod) == images[i] * images[i + 1],
               "P1 = " + primes[i].ideal.to_string() + ", P2 = " + primes[i + 1].ideal.to_string());
  }

  // sigma Phi = Phi  iff  sigma fixes E*
  {
    std::set<size_t> H(R.stabilizer.begin(), R.stabilizer.end());
    for (size_t g = 0; g < L.order(); ++g) {
      bool fixes = L.autos[g](R.reflex_incl.image()) == R.reflex_incl.image();
      rec.record("stabilizer", fixes == (H.count(g) > 0), "sigma index " + std::to_string(g));
    }
  }
  // E lies in the reflex field of (E*, Psi), inside L
  {
    std::set<size_t> S2;
    const NFElement g0 = R.reflex_incl.image();
    for (size_t g = 0; g < L.order(); ++g)
      if (R.reflex_type.contains(identify_root(R.reflex, L.autos[g](g0), 0))) S2.insert(g);
    bool ok = true;
    for (size_t t = 0; t < L.order(); ++t) {
      std::set<size_t> tS;
      for (size_t s : S2) tS.insert(L.mul[t][s]);
      if (tS == S2 && R.closure.perm[t][0] != 0) ok = false;
    }
    rec.record("reflex-of-reflex", ok, "type " + phi.to_string());
  }
  return ReflexReport{rec.checks};
}

}  // namespace cmreflex
