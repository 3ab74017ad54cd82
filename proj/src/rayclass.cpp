#include "cmreflex/rayclass.hpp"

#include <algorithm>
#include <random>

#include "cmreflex/errors.hpp"
#include "cmreflex/latticeav.hpp"

namespace cmreflex {

UnitGroup unit_group(const CMField& cm) {
  const Order& o = cm.order;
  auto mu = roots_of_unity(o);
  UnitGroup U;
  U.torsion_order = static_cast<long>(mu.size());
  for (auto& z : mu) {
    long ord = 1;
    for (NFElement w = z; w != cm.field.one(); w *= z) ++ord;
    if (ord == U.torsion_order) {
      U.torsion = z;
      break;
    }
  }
  const int n = cm.field.degree();
  if (n == 2) return U;
  require(n == 4, Errc::UnitsUnavailable, "unit group needs an imaginary quadratic or quartic CM field");
  // F = Q(sqrt D) with fundamental unit eps; O_E^x = mu x <eta>, eta = eps or u with u conj(u) = eps
  Order oF = Order::maximal(cm.real_field);
  auto [x, y] = real_quadratic_fundamental_unit(oF.disc());
  // sqrt(D) inside F: a root of t^2 - D
  const NumberField& F = cm.real_field;
  NFElement g = F.gen();
  const UniPoly& f = F.min_poly();
  // g = (-b + s)/2 with s^2 = b^2 - 4c; D = disc(O_F), s = [O_F : Z[g]] sqrt(D)
  Rational b = f.coeff(1), c = f.coeff(0);
  NFElement s = g * Rational(2) + F.from_rational(b);
  Rational ratio = (b * b - 4 * c) / Rational(oF.disc());
  Integer idx = isqrt_ceil(ratio.get_num());
  require(ratio.get_den() == 1 && idx * idx == ratio.get_num(), Errc::UnitsUnavailable, "unexpected real subfield");
  NFElement sqrtD = s * frac(1, idx);
  NFElement eps = (F.from_rational(Rational(x)) + sqrtD * Rational(y)) * Rational(1, 2);
  // sign of sqrt D is arbitrary; eps and its conjugate are both fundamental
  require(oF.contains(eps) && abs(eps.norm()) == 1, Errc::UnitsUnavailable, "fundamental unit failed to verify");
  NFElement epsE = cm.real_incl(eps);
  if (eps.norm() == 1) {
    Rational tr = epsE.trace();
    if (tr > 0) {
      // eps totally positive: look for u with u conj(u) = eps (then T2(u) = Tr(eps))
      for (auto& u : short_elements(FracIdeal::unit(o), cm.conj, tr))
        if (u * cm.conj(u) == epsE) {
          U.free.push_back(u);
          return U;
        }
    }
  }
  U.free.push_back(epsE);
  return U;
}

struct RayClassData {
  Order o;
  FracIdeal m;
  ZMatrix h;                      // HNF of m in order coordinates
  std::vector<Integer> stride;
  size_t size = 0;
  std::vector<int> unit_index;    // residue index -> position in units table, -1 if not a unit
  std::vector<std::vector<long>> unit_dlog;  // exponent vectors on residue generators
  std::vector<PrimeIdeal> primes;            // primes dividing m
  size_t n_res_gens = 0;
  // class group
  std::vector<FracIdeal> class_reps;
  std::vector<std::vector<long>> class_dlog;  // per class rep: exponents on class generators
  std::vector<FracIdeal> class_gens;
  Integer h_exp;  // class number, used as a common exponent
  ZMatrix V;
  std::vector<Integer> diag;  // all SNF diagonal entries (ones included)

  size_t index(const ZVector& v) const {
    Integer r = 0;
    for (size_t i = 0; i < v.size(); ++i) r += v[i] * stride[i];
    return r.get_ui();
  }
  ZVector residue(const NFElement& x) const {
    auto c = o.int_coords(x);
    require(c.has_value(), Errc::InvalidArgument, "element not integral");
    return hnf_reduce(h, *c);
  }
  size_t class_of(const FracIdeal& a) const {
    for (size_t i = 0; i < class_reps.size(); ++i)
      if (is_principal(a * ideal_inverse(class_reps[i]))) return i;
    fail(Errc::InvalidArgument, "ideal class not found");
  }
  bool coprime(const FracIdeal& a) const {
    for (auto& P : primes)
      if (valuation(a, P) != 0) return false;
    return true;
  }
};

namespace {

// Greedy generation of a finite abelian group given by its elements and a
// multiplication: returns generators and relation rows, and fills dlog.
template <class Mul>
std::pair<std::vector<size_t>, std::vector<std::vector<long>>> abelian_structure(
    const std::vector<size_t>& elements, size_t identity, Mul mul, std::vector<std::vector<long>>& dlog,
    std::vector<int>& in_group, size_t universe) {
  std::vector<size_t> gens;
  std::vector<std::vector<long>> rels;
  std::vector<std::vector<long>> exps(universe);
  std::vector<char> seen(universe, 0);
  std::vector<size_t> sub{identity};
  seen[identity] = 1;
  exps[identity] = {};
  for (size_t g : elements) {
    if (seen[g]) continue;
    const size_t j = gens.size();
    gens.push_back(g);
    for (size_t s : sub) exps[s].resize(j + 1, 0);
    // order of g modulo the current subgroup
    long ord = 1;
    size_t pw = g;
    while (!seen[pw]) {
      pw = mul(pw, g);
      ++ord;
    }
    std::vector<long> rel = exps[pw];
    rel.resize(j + 1, 0);
    for (auto& x : rel) x = -x;
    rel[j] += ord;
    rels.push_back(rel);
    std::vector<size_t> grown;
    for (size_t s : sub) {
      size_t cur = s;
      for (long t = 0; t < ord; ++t) {
        if (t > 0) {
          cur = mul(cur, g);
          seen[cur] = 1;
          exps[cur] = exps[s];
          exps[cur][j] = t;
        }
        grown.push_back(cur);
      }
    }
    sub = std::move(grown);
  }
  for (auto& r : rels) r.resize(gens.size(), 0);
  for (size_t s : sub) {
    exps[s].resize(gens.size(), 0);
    dlog[static_cast<size_t>(in_group[s])] = exps[s];
  }
  return {gens, rels};
}

}  // namespace

RayClassGroup ray_class_group(const CMField& k, const FracIdeal& modulus) {
  const Order& o = k.order;
  require(modulus.order() == o && modulus.is_integral(), Errc::InvalidArgument, "modulus must be an integral ideal");
  Integer N = numerical_norm(modulus).get_num();
  require(N <= 10000, Errc::ModulusTooLarge, "ray class groups need norm(m) <= 10^4");
  UnitGroup U = unit_group(k);

  auto D = std::make_shared<RayClassData>();
  D->o = o;
  D->m = modulus;
  D->h = modulus.hnf();
  const size_t n = static_cast<size_t>(o.degree());
  D->stride.resize(n);
  Integer st = 1;
  for (size_t i = 0; i < n; ++i) {
    D->stride[i] = st;
    st *= D->h(i, i);
  }
  D->size = st.get_ui();
  for (auto& [P, v] : factor_ideal(modulus)) D->primes.push_back(P);

  // enumerate (O/m)^x
  std::vector<ZVector> residues(D->size);
  std::vector<size_t> units;
  D->unit_index.assign(D->size, -1);
  {
    ZVector v(n, 0);
    for (size_t idx = 0; idx < D->size; ++idx) {
      Integer r = idx;
      for (size_t i = 0; i < n; ++i) {
        v[i] = r % D->h(i, i);
        r /= D->h(i, i);
      }
      residues[idx] = v;
      NFElement x = o.element(v);
      bool unit = true;
      for (auto& P : D->primes)
        if (P.ideal.contains(x)) {
          unit = false;
          break;
        }
      if (unit) {
        D->unit_index[idx] = static_cast<int>(units.size());
        units.push_back(idx);
      }
    }
  }
  auto mul = [&](size_t a, size_t b) { return D->index(hnf_reduce(D->h, o.mul(residues[a], residues[b]))); };
  const size_t one = D->index(hnf_reduce(D->h, *o.int_coords(k.field.one())));
  D->unit_dlog.assign(units.size(), {});
  auto [res_gens, res_rels] = abelian_structure(units, one, mul, D->unit_dlog, D->unit_index, D->size);
  D->n_res_gens = res_gens.size();

  // unit images
  std::vector<std::vector<long>> unit_rows;
  std::vector<NFElement> ugens{U.torsion};
  for (auto& e : U.free) ugens.push_back(e);
  for (auto& u : ugens) {
    size_t idx = D->index(D->residue(u));
    unit_rows.push_back(D->unit_dlog[static_cast<size_t>(D->unit_index[idx])]);
  }
  // size of the unit image, by closure
  Integer image;
  {
    std::vector<char> in(D->size, 0);
    std::vector<size_t> cur{one};
    in[one] = 1;
    for (size_t q = 0; q < cur.size(); ++q)
      for (auto& u : ugens) {
        size_t nx = mul(cur[q], D->index(D->residue(u)));
        if (!in[nx]) {
          in[nx] = 1;
          cur.push_back(nx);
        }
      }
    image = static_cast<unsigned long>(cur.size());
  }

  // class group, generators made coprime to m
  D->class_reps = ideal_class_representatives(o);
  const size_t h = D->class_reps.size();
  D->h_exp = static_cast<unsigned long>(h);
  std::vector<size_t> cl_elems;
  for (size_t i = 0; i < h; ++i) cl_elems.push_back(i);
  std::vector<FracIdeal> coprime_reps;
  for (auto& r : D->class_reps) coprime_reps.push_back(coprime_scale(r, N).ideal);
  auto cl_mul = [&](size_t a, size_t b) { return D->class_of(D->class_reps[a] * D->class_reps[b]); };
  std::vector<int> cl_index(h);
  for (size_t i = 0; i < h; ++i) cl_index[i] = static_cast<int>(i);
  D->class_dlog.assign(h, {});
  auto [cl_gens, cl_rels] = abelian_structure(cl_elems, 0, cl_mul, D->class_dlog, cl_index, h);
  for (size_t g : cl_gens) D->class_gens.push_back(coprime_reps[g]);

  const size_t r = D->n_res_gens, s = cl_gens.size();
  std::vector<std::vector<Integer>> rows;
  auto push = [&](const std::vector<long>& res, const std::vector<long>& cl) {
    std::vector<Integer> row(r + s, 0);
    for (size_t i = 0; i < res.size(); ++i) row[i] = res[i];
    for (size_t i = 0; i < cl.size(); ++i) row[r + i] = cl[i];
    rows.push_back(row);
  };
  for (auto& rr : res_rels) push(rr, {});
  for (auto& ur : unit_rows) push(ur, {});
  // class relations c_j^{o_j} prod c_i^{e_i} = (gamma), exponents made nonnegative
  for (auto& cr : cl_rels) {
    std::vector<long> e(s, 0);
    FracIdeal J = FracIdeal::unit(o);
    for (size_t i = 0; i < s; ++i) {
      long hi = static_cast<long>(h);
      e[i] = ((cr[i] % hi) + hi) % hi;
      if (cr[i] > 0 && e[i] == 0) e[i] = cr[i];  // keep the order entry itself
      J = J * ideal_pow(D->class_gens[i], e[i]);
    }
    auto gamma = is_principal(J);
    require(gamma.has_value(), Errc::InvalidArgument, "class relation is not principal");
    const auto& dl = D->unit_dlog[static_cast<size_t>(D->unit_index[D->index(D->residue(*gamma))])];
    std::vector<long> res(r);
    for (size_t i = 0; i < r; ++i) res[i] = -dl[i];
    push(res, e);
  }
  RayClassGroup G;
  G.field = k;
  G.modulus = modulus;
  for (size_t g : res_gens) G.generators.push_back(FracIdeal::principal(o, o.element(residues[g])));
  for (auto& c : D->class_gens) G.generators.push_back(c);
  const size_t cols = r + s;
  if (cols == 0) {
    G.order = 1;
  } else {
    ZMatrix R(rows.size(), cols);
    for (size_t i = 0; i < rows.size(); ++i)
      for (size_t j = 0; j < cols; ++j) R(i, j) = rows[i][j];
    G.relations = R;
    SmithForm sf = smith_form(R);
    D->V = sf.V;
    D->diag.assign(cols, 0);
    for (size_t i = 0; i < cols && i < sf.diag.size(); ++i) D->diag[i] = abs(Rational(sf.diag[i])).get_num();
    G.order = 1;
    for (auto& d : D->diag) {
      require(d != 0, Errc::InvalidArgument, "relation matrix is not of full rank");
      G.order *= d;
      if (d > 1) G.elementary_divisors.push_back(d);
    }
  }
  G.units_mod_m = static_cast<unsigned long>(units.size());
  G.unit_image = image;
  G.class_number = static_cast<unsigned long>(h);
  G.data = D;
  return G;
}

bool is_identity(const std::vector<Integer>& c) {
  return std::all_of(c.begin(), c.end(), [](const Integer& x) { return x == 0; });
}

namespace {

std::vector<Integer> to_canonical(const std::vector<Integer>& x, const RayClassGroup& G) {
  const RayClassData& D = *G.data;
  std::vector<Integer> out;
  for (size_t j = 0; j < D.diag.size(); ++j) {
    if (D.diag[j] == 1) continue;
    Integer y = 0;
    for (size_t i = 0; i < x.size(); ++i) y += x[i] * D.V(i, j);
    out.push_back(mod(y, D.diag[j]));
  }
  return out;
}

// generator-coordinate vector of an integral ideal coprime to m
std::vector<Integer> integral_coords(const FracIdeal& a, const RayClassGroup& G) {
  const RayClassData& D = *G.data;
  const size_t r = D.n_res_gens, s = D.class_gens.size();
  std::vector<long> b = D.class_dlog[D.class_of(a)];
  b.resize(s, 0);
  FracIdeal J = a;
  std::vector<long> e(s, 0);
  const long h = D.h_exp.get_si();
  for (size_t i = 0; i < s; ++i) {
    e[i] = ((-b[i]) % h + h) % h;
    J = J * ideal_pow(D.class_gens[i], e[i]);
  }
  auto gamma = is_principal(J);
  require(gamma.has_value(), Errc::InvalidArgument, "class reduction failed");
  int ui = D.unit_index[D.index(D.residue(*gamma))];
  require(ui >= 0, Errc::InvalidArgument, "generator not a unit mod m");
  const auto& dl = D.unit_dlog[static_cast<size_t>(ui)];
  std::vector<Integer> x(r + s, 0);
  for (size_t i = 0; i < r; ++i) x[i] = dl[i];
  for (size_t i = 0; i < s; ++i) x[r + i] = -e[i];
  return x;
}

}  // namespace

std::vector<Integer> ray_class(const FracIdeal& a, const RayClassGroup& G) {
  const RayClassData& D = *G.data;
  require(a.order() == D.o, Errc::OrderMismatch, "ideal of a different order");
  require(D.coprime(a), Errc::NotCoprime, "ideal not coprime to the modulus");
  const size_t cols = D.n_res_gens + D.class_gens.size();
  if (cols == 0) return {};
  std::vector<Integer> x(cols, 0);
  if (a.is_integral()) {
    x = integral_coords(a, G);
  } else {
    for (auto& [P, v] : factor_ideal(a)) {
      auto c = integral_coords(P.ideal, G);
      for (size_t i = 0; i < cols; ++i) x[i] += v * c[i];
    }
  }
  return to_canonical(x, G);
}

std::vector<Integer> class_add(const std::vector<Integer>& a, const std::vector<Integer>& b, const RayClassGroup& G) {
  std::vector<Integer> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = mod(a[i] + b[i], G.elementary_divisors[i]);
  return out;
}

TransportReport reflex_transport_check(const CMType& phi, long m, const FracIdeal& modulus_reflex, int samples,
                                       unsigned long seed, int max_escalations) {
  require(m >= 1, Errc::InvalidArgument, "m must be positive");
  ReflexData R = reflex_field(phi);
  const Order& oR = R.reflex_type.cm.order;
  const CMField& E = phi.cm;
  require(modulus_reflex.order() == oR && modulus_reflex.is_integral(), Errc::InvalidArgument,
          "modulus must be an integral ideal of the reflex field");
  RayClassGroup G = ray_class_group(E, FracIdeal::principal(E.order, E.field.from_rational(m)));
  TransportReport rep;
  rep.group_order = G.order;

  auto nclass = [&](const NFElement& beta) {
    return ray_class(FracIdeal::principal(E.order, R.norm_elem(beta)), G);
  };
  auto coprime_to = [&](const NFElement& x, const FracIdeal& mod_ideal) {
    for (auto& [P, v] : factor_ideal(mod_ideal))
      if (P.ideal.contains(x)) return false;
    return true;
  };
  const std::vector<long> escalation{m, 2, 3, 5, 7};
  FracIdeal mp = modulus_reflex;
  // m' must be divisible by m
  FracIdeal mm = FracIdeal::principal(oR, R.reflex.from_rational(m));
  if (!mm.contains(mp)) mp = mp * mm;
  std::vector<NFElement> rb = FracIdeal::unit(oR).basis();
  for (int round = 0;; ++round) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> d(-3, 3);
    auto mb = mp.basis();
    long fails = 0;
    for (int t = 0; t < samples; ++t) {
      NFElement x = R.reflex.zero();
      for (auto& b : mb) x += b * Rational(d(rng));
      NFElement beta = R.reflex.one() + x;
      if (beta.is_zero()) continue;
      if (!is_identity(nclass(beta))) ++fails;
    }
    rep.samples = samples;
    rep.failures = fails;
    if (fails == 0 || round >= max_escalations) break;
    mp = mp * FracIdeal::principal(oR, R.reflex.from_rational(escalation[static_cast<size_t>(round) % escalation.size()]));
    ++rep.escalations;
  }
  rep.modulus_used = mp;

  std::mt19937_64 rng(seed + 1);
  std::uniform_int_distribution<long> d(-4, 4);
  auto random_coprime = [&](const FracIdeal& mod_ideal) {
    while (true) {
      NFElement x = R.reflex.zero();
      for (auto& b : rb) x += b * Rational(d(rng));
      if (!x.is_zero() && coprime_to(x, mod_ideal)) return x;
    }
  };
  // multiplicativity on prime ideals of E* coprime to m
  std::vector<FracIdeal> primes;
  for (long p : primes_up_to(60))
    if (m % p != 0)
      for (auto& P : prime_split(p, oR)) primes.push_back(P.ideal);
  std::uniform_int_distribution<size_t> pick(0, primes.size() - 1);
  for (int t = 0; t < samples; ++t) {
    const FracIdeal& b1 = primes[pick(rng)];
    const FracIdeal& b2 = primes[pick(rng)];
    auto c12 = ray_class(R.norm_ideal(b1 * b2), G);
    auto c1 = ray_class(R.norm_ideal(b1), G), c2 = ray_class(R.norm_ideal(b2), G);
    ++rep.pairs;
    if (c12 != class_add(c1, c2, G)) ++rep.multiplicative_failures;
  }
  // negative control: beta merely coprime to m'
  for (int t = 0; t < samples; ++t) {
    NFElement beta = random_coprime(mp);
    ++rep.control_samples;
    if (!is_identity(nclass(beta))) ++rep.control_nontrivial;
  }
  return rep;
}

}  // namespace cmreflex
