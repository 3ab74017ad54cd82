// End-to-end acceptance run: one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <tuple>

#include "cmreflex/errors.hpp"
#include "cmreflex/io.hpp"

using namespace cmreflex;

namespace {

const std::string kData = CMREFLEX_DATA_DIR;

struct Outcome {
  bool ok = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

NFElement el(const NumberField& k, std::vector<long> c) {
  std::vector<Rational> q(c.begin(), c.end());
  q.resize(static_cast<size_t>(k.degree()));
  return k.from_coords(q);
}

NFElement random_elem(const NumberField& k, std::mt19937_64& rng, long h) {
  std::uniform_int_distribution<long> d(-h, h);
  while (true) {
    std::vector<Rational> c;
    for (int i = 0; i < k.degree(); ++i) c.emplace_back(d(rng));
    NFElement x = k.from_coords(c);
    if (!x.is_zero()) return x;
  }
}

FracIdeal random_integral_ideal(const Order& o, std::mt19937_64& rng, long h) {
  std::uniform_int_distribution<long> d(-h, h);
  auto b = FracIdeal::unit(o).basis();
  auto comb = [&] {
    NFElement x = o.field().zero();
    for (auto& e : b) x += e * Rational(d(rng));
    return x;
  };
  NFElement x = comb(), y = comb();
  if (x.is_zero()) x = o.field().one();
  return FracIdeal::from_generators(o, {x, y});
}

std::vector<NumberField> corpus_fields() {
  std::vector<NumberField> out;
  for (const char* f : {"qi.json", "qsqrtm5.json", "qzeta5.json", "x4_6x2_3.json"})
    out.push_back(io::load_field(kData + "/" + f));
  return out;
}

std::vector<CMCurveQ> corpus_curves() { return io::load_curves(kData + "/curves.json"); }

// Reduced positive definite binary quadratic forms (a, b, c) of discriminant d.
long form_class_number(long d) {
  long h = 0;
  for (long a = 1; 3 * a * a <= -d; ++a)
    for (long b = -a + 1; b <= a; ++b) {
      long num = b * b - d;
      if (num % (4 * a) != 0) continue;
      long c = num / (4 * a);
      if (c < a || (c == a && b < 0)) continue;
      if (std::gcd(std::gcd(a, std::labs(b)), c) != 1) continue;
      ++h;
    }
  return h;
}

bool fundamental(long d) {
  auto squarefree = [](long x) {
    for (long p = 2; p * p <= x; ++p)
      if (x % (p * p) == 0) return false;
    return true;
  };
  long D = -d;
  if (D % 4 == 3) return squarefree(D);
  if (D % 4 == 0) {
    long q = D / 4;
    return (q % 4 == 1 || q % 4 == 2) && squarefree(q);
  }
  return false;
}

UniPoly quadratic_of_disc(long d) {
  if (d % 4 == 0) return UniPoly{-d / 4, 0, 1};
  return UniPoly{(1 - d) / 4, -1, 1};
}

// All integral ideals of norm at most `bound`.
std::vector<FracIdeal> ideals_up_to(const Order& o, long bound) {
  std::vector<PrimeIdeal> primes;
  for (long p : primes_up_to(bound))
    for (auto& P : prime_split(p, o))
      if (numerical_norm(P.ideal) <= bound) primes.push_back(P);
  std::vector<FracIdeal> out;
  std::function<void(size_t, FracIdeal, Integer)> rec = [&](size_t i, FracIdeal a, Integer n) {
    if (i == primes.size()) {
      out.push_back(a);
      return;
    }
    rec(i + 1, a, n);
    Integer np = numerical_norm(primes[i].ideal).get_num();
    while (n * np <= bound) {
      n *= np;
      a = a * primes[i].ideal;
      rec(i + 1, a, n);
    }
  };
  rec(0, FracIdeal::unit(o), 1);
  return out;
}

TypeQuadruple transform(const TypeQuadruple& q, const NFElement& a) {
  return {q.type, ideal_scale(q.ideal, a), q.t / (a * q.type.cm.conj(a))};
}

// ---------------------------------------------------------------- criteria

Outcome st_ideal_formula() {
  auto t0 = Clock::now();
  long rows = 0, bad = 0, skipped = 0;
  for (const auto& c : corpus_curves()) {
    CMType phi = identity_type(c.cm);
    for (long p : primes_up_to(999)) {
      if (p < 5) continue;
      try {
        FrobeniusData F = frobenius_element(c, p);
        ++rows;
        if (!st_check_ideal(F, phi, c.cm.field, F.prime_above)) ++bad;
      } catch (const Error& e) {
        if (e.code() != Errc::Supersingular && e.code() != Errc::RamifiedPrime) throw;
        ++skipped;
      }
    }
  }
  double s = seconds_since(t0);
  std::ostringstream d;
  d << rows << " ordinary rows, " << bad << " mismatches, " << skipped << " skipped, " << s << " s";
  return {rows > 0 && bad == 0 && s < 60, d.str()};
}

Outcome st_valuations() {
  long rows = 0, bad = 0;
  for (const auto& c : corpus_curves()) {
    CMType phi = identity_type(c.cm);
    for (long p : primes_up_to(999)) {
      if (p < 5) continue;
      try {
        FrobeniusData F = frobenius_element(c, p);
        ++rows;
        if (!st_check_valuations(F, phi, c.cm.field, F.prime_above).all_ok()) ++bad;
      } catch (const Error& e) {
        if (e.code() != Errc::Supersingular && e.code() != Errc::RamifiedPrime) throw;
      }
    }
  }
  // symbolic side: the right-hand side itself, over Q(zeta5)
  NumberField z5 = io::load_field(kData + "/qzeta5.json");
  CMField cm5 = *cm_check(z5);
  long sym = 0, sym_bad = 0, disagree = 0, primes_used = 0;
  for (long p : primes_up_to(199)) {
    if (p == 5 || primes_used == 20) continue;
    ++primes_used;
    for (auto& ty : enumerate_cm_types(cm5))
      for (auto& P : prime_split(p, cm5.order)) {
        FracIdeal rhs = st_rhs(ty, z5, P);
        ValuationReport rep = st_check_valuations(rhs, ty, z5, P);
        ++sym;
        if (!rep.all_ok()) ++sym_bad;
        // the sum form and the ratio form must agree, also on a wrong ideal
        FracIdeal wrong = ideal_conjugate(rhs, cm5.conj);
        for (const ValuationReport& r : {rep, st_check_valuations(wrong, ty, z5, P)}) {
          bool sums = true, ratios = true;
          for (auto& row : r.rows) {
            sums = sums && row.sum_ok;
            ratios = ratios && row.ratio_ok;
          }
          if (sums != ratios) ++disagree;
        }
      }
  }
  std::ostringstream d;
  d << rows << " curve rows (" << bad << " bad); Q(zeta5): " << primes_used << " primes, " << sym << " checks, "
    << sym_bad << " bad, " << disagree << " sum/ratio disagreements";
  return {rows > 0 && bad == 0 && primes_used == 20 && sym_bad == 0 && disagree == 0, d.str()};
}

Outcome reflex_identities() {
  auto t0 = Clock::now();
  long types = 0, checks = 0, failed = 0;
  std::string witness;
  for (const auto& k : corpus_fields()) {
    CMField cm = *cm_check(k);
    for (auto& ty : enumerate_cm_types(cm)) {
      ++types;
      ReflexReport r = verify_reflex_identities(ty, NumberField(), 100, 20240601 + types, 200);
      for (auto& c : r.checks) {
        checks += c.checked;
        if (!c.passed()) {
          ++failed;
          if (witness.empty()) witness = k.min_poly().to_string() + " " + ty.to_string() + " " + c.name + ": " + c.witness;
        }
      }
    }
  }
  double s = seconds_since(t0);
  std::ostringstream d;
  d << types << " types, " << checks << " evaluations, " << failed << " failing checks, " << s << " s";
  if (!witness.empty()) d << "; first failure " << witness;
  return {failed == 0 && types == 12 && s < 120, d.str()};
}

Outcome class_number_oracle() {
  long fields = 0, bad = 0;
  std::string first;
  for (long d = -3; d > -100; --d) {
    if (!fundamental(d)) continue;
    ++fields;
    CMType t = enumerate_cm_types(*cm_check(NumberField(quadratic_of_disc(d))))[0];
    long got = static_cast<long>(isogeny_classes(t).size());
    long want = form_class_number(d);
    if (got != want) {
      ++bad;
      if (first.empty()) first = "d = " + std::to_string(d);
    }
  }
  std::ostringstream out;
  out << fields << " discriminants, " << bad << " mismatches" << (first.empty() ? "" : ", first " + first);
  return {fields > 0 && bad == 0, out.str()};
}

Outcome amul_calculus() {
  std::mt19937_64 rng(7);
  long n_deg = 0, n_comp = 0, n_fact = 0, n_hom = 0, bad = 0;
  for (const auto& k : corpus_fields()) {
    CMField cm = *cm_check(k);
    const Order& o = cm.order;
    auto types = enumerate_cm_types(cm);
    for (int s = 0; s < 130; ++s) {
      const CMType& t = types[static_cast<size_t>(s) % types.size()];
      LatticeAV A(t, ideal_scale(random_integral_ideal(o, rng, 4), random_elem(k, rng, 2).inverse()));
      FracIdeal a = random_integral_ideal(o, rng, 4), b = random_integral_ideal(o, rng, 4);
      AMult la = amul(A, a);
      // degree equals the numerical norm
      ++n_deg;
      if (Rational(amul_degree(la)) != numerical_norm(a)) ++bad;
      // composition multiplies degrees and ideals
      AMult lb = amul(la.target, b);
      AMult c = compose(la, lb);
      ++n_comp;
      if (amul_degree(c) != amul_degree(la) * amul_degree(lb) || c.ideal != a * b) ++bad;
      // lambda^b factors through lambda^a iff b is inside a
      FracIdeal b2 = (s % 2 == 0) ? a * b : b;
      AMult mb = amul(A, b2);
      ++n_fact;
      if (factor_through(la, mb) != a.contains(b2)) ++bad;
      // Hom(A, B) = B a^-1 and membership matches a A inside B
      LatticeAV B(t, ideal_scale(random_integral_ideal(o, rng, 4), random_elem(k, rng, 2).inverse()));
      FracIdeal H = hom_ideal(A, B);
      ++n_hom;
      bool ok = H == B.lattice * ideal_inverse(A.lattice);
      NFElement x = random_elem(k, rng, 3) * Rational(1, 1 + static_cast<long>(rng() % 3));
      ok = ok && H.contains(x) == B.lattice.contains(ideal_scale(A.lattice, x));
      if (!ok) ++bad;
    }
  }
  std::ostringstream d;
  d << n_deg << " degree, " << n_comp << " composition, " << n_fact << " factorization, " << n_hom
    << " Hom instances, " << bad << " failures";
  return {bad == 0 && std::min({n_deg, n_comp, n_fact, n_hom}) >= 500, d.str()};
}

Outcome riemann_layer() {
  std::mt19937_64 rng(11);
  long found = 0, pairs = 0, round_trips = 0, bad = 0, inconclusive = 0;
  std::vector<NumberField> fields = corpus_fields();
  for (const auto& c : corpus_curves()) fields.push_back(c.cm.field);
  for (const auto& k : fields) {
    CMField cm = *cm_check(k);
    for (auto& t : enumerate_cm_types(cm)) {
      ++pairs;
      RiemannElement r = find_riemann_element(t);
      bool ok = cm.conj(r.alpha) == -r.alpha;
      for (size_t i : t.phi) ok = ok && im_sign(r.alpha, i) > 0;
      if (ok) ++found;
    }
  }
  // round trips on the four corpus fields, 50 per field
  for (const auto& k : corpus_fields()) {
    CMField cm = *cm_check(k);
    auto types = enumerate_cm_types(cm);
    bool quadratic = k.degree() == 2;
    for (int s = 0; s < 50; ++s) {
      const CMType& t = types[static_cast<size_t>(s) % types.size()];
      TypeQuadruple q1{t, random_integral_ideal(cm.order, rng, 3), find_riemann_element(t).alpha};
      TypeQuadruple q2 = transform(q1, random_elem(k, rng, 2));
      try {
        auto w = quadruples_equivalent(q1, q2);
        ++round_trips;
        if (!w || ideal_scale(q1.ideal, *w) != q2.ideal || q1.t / (*w * cm.conj(*w)) != q2.t) ++bad;
        // scaling t by 3 cannot be undone by a unit
        TypeQuadruple q3{t, q2.ideal, q2.t * Rational(3)};
        if (quadruples_equivalent(q1, q3)) ++bad;
      } catch (const Error& e) {
        if (e.code() != Errc::UnitSearchInconclusive) throw;
        if (quadratic) ++inconclusive;
        else ++bad;
      }
    }
  }
  std::ostringstream d;
  d << found << "/" << pairs << " Riemann elements, " << round_trips << " round trips, " << bad << " failures, "
    << inconclusive << " inconclusive on quadratic fields";
  return {found == pairs && round_trips >= 200 && bad == 0 && inconclusive == 0, d.str()};
}

Outcome ray_class_layer() {
  long groups = 0, seq_bad = 0;
  for (const char* f : {"qi.json", "qsqrtm5.json"}) {
    CMField k = *cm_check(io::load_field(kData + "/" + f));
    for (const auto& m : ideals_up_to(k.order, 500)) {
      RayClassGroup G = ray_class_group(k, m);
      ++groups;
      Integer prod = 1;
      for (auto& d : G.elementary_divisors) prod *= d;
      if (G.order * G.unit_image != G.units_mod_m * G.class_number || prod != G.order) ++seq_bad;
    }
  }
  long transport_bad = 0, transports = 0;
  {
    CMField qi = *cm_check(io::load_field(kData + "/qi.json"));
    CMType t = make_cm_type(qi, {identify_root(qi.field, qi.field.gen(), 0)});
    ReflexData R = reflex_field(t);
    TransportReport r = reflex_transport_check(
        t, 3, FracIdeal::principal(R.reflex_type.cm.order, R.reflex.from_rational(3)), 50, 5);
    ++transports;
    if (!r.passed() || r.samples < 50) ++transport_bad;
    CMField z5 = *cm_check(io::load_field(kData + "/qzeta5.json"));
    for (auto& ty : enumerate_cm_types(z5)) {
      ReflexData Rt = reflex_field(ty);
      TransportReport r5 = reflex_transport_check(
          ty, 2, FracIdeal::principal(Rt.reflex_type.cm.order, Rt.reflex.from_rational(2)), 50, 5);
      ++transports;
      if (!r5.passed() || r5.samples < 50) ++transport_bad;
    }
  }
  long scaled = 0, scale_bad = 0;
  {
    std::mt19937_64 rng(13);
    CMField k5 = *cm_check(io::load_field(kData + "/qsqrtm5.json"));
    RayClassGroup G = ray_class_group(k5, FracIdeal::principal(k5.order, k5.field.from_rational(6)));
    for (int s = 0; s < 500; ++s) {
      FracIdeal a = ideal_scale(random_integral_ideal(k5.order, rng, 9), random_elem(k5.field, rng, 3).inverse());
      CoprimeScale cs = coprime_scale(a, 6);
      ++scaled;
      bool ok = cs.ideal.is_integral() && gcd(numerical_norm(cs.ideal).get_num(), Integer(6)) == 1 &&
                ideal_scale(a, cs.scalar) == cs.ideal;
      try {
        ray_class(cs.ideal, G);
      } catch (const Error&) {
        ok = false;
      }
      if (!ok) ++scale_bad;
    }
  }
  std::ostringstream d;
  d << groups << " ray class groups (" << seq_bad << " exact-sequence failures), " << transports << " transport runs ("
    << transport_bad << " failed), " << scaled << " coprime scalings (" << scale_bad << " bad)";
  return {groups > 0 && seq_bad == 0 && transport_bad == 0 && scale_bad == 0 && scaled == 500, d.str()};
}

Outcome negative_controls() {
  long split = 0, rejected = 0;
  for (const auto& c : corpus_curves()) {
    CMType phi = identity_type(c.cm);
    for (long p : primes_up_to(999)) {
      if (p < 5) continue;
      FrobeniusData F;
      try {
        F = frobenius_element(c, p);
      } catch (const Error& e) {
        if (e.code() != Errc::Supersingular && e.code() != Errc::RamifiedPrime) throw;
        continue;
      }
      ++split;
      FrobeniusData G = F;
      G.pi = c.cm.conj(F.pi);
      if (!st_check_ideal(G, phi, c.cm.field, F.prime_above)) ++rejected;
    }
  }
  CMField qi = *cm_check(io::load_field(kData + "/qi.json"));
  CMType t = make_cm_type(qi, {identify_root(qi.field, qi.field.gen(), 0)});
  ReflexData R = reflex_field(t);
  TransportReport r =
      reflex_transport_check(t, 3, FracIdeal::principal(R.reflex_type.cm.order, R.reflex.from_rational(3)), 50, 5);
  std::ostringstream d;
  d << "conjugate-swapped pi rejected at " << rejected << "/" << split << " split primes; " << r.control_nontrivial
    << "/" << r.control_samples << " merely coprime samples nontrivial in C_3(Q(i))";
  return {split > 0 && rejected == split && r.control_nontrivial > 0, d.str()};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"ideal formula for Frobenius on CM elliptic curves", st_ideal_formula},
      {"valuation form of the Frobenius formula", st_valuations},
      {"reflex norm identity suite", reflex_identities},
      {"isogeny classes match the forms class number", class_number_oracle},
      {"a-multiplication calculus", amul_calculus},
      {"Riemann elements and quadruple equivalence", riemann_layer},
      {"ray class groups and reflex transport", ray_class_layer},
      {"negative controls", negative_controls},
  };
  int failures = 0, i = 0;
  for (const auto& c : criteria) {
    ++i;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.ok) ++failures;
    std::printf("%s %d %s: %s\n", o.ok ? "PASS" : "FAIL", i, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
