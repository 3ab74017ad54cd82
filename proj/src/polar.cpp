#include "cmreflex/polar.hpp"

#include <algorithm>

#include "cmreflex/enumerate.hpp"
#include "cmreflex/errors.hpp"

namespace cmreflex {

int im_sign(const NFElement& a, size_t root_index) {
  if (a.is_zero()) return 0;
  UniPoly m = a.minpoly();
  for (unsigned bits = 64; bits <= 4096; bits *= 2) {
    Ball b = a.embed(root_index, bits);
    if (b.im_positive()) return 1;
    if (b.im_negative()) return -1;
    // the value is a root of m; it is real iff the only root disk meeting b is real
    auto iso = isolate_roots(m, bits);
    std::vector<const Ball*> near;
    for (auto& r : iso.roots)
      if (!r.disjoint(b)) near.push_back(&r);
    if (near.size() == 1 && near[0]->is_real_point()) return 0;
  }
  fail(Errc::InvalidArgument, "could not certify the sign of an imaginary part");
}

namespace {

bool positive_on_type(const NFElement& a, const CMType& phi) {
  for (size_t i : phi.phi)
    if (im_sign(a, i) <= 0) return false;
  return true;
}

// Integer vectors with max-norm exactly r, in lexicographic order.
template <class F>
bool for_each_on_shell(size_t dim, long r, F&& visit) {
  std::vector<long> c(dim, -r);
  while (true) {
    long m = 0;
    for (long x : c) m = std::max(m, std::labs(x));
    if (m == r && visit(c)) return true;
    size_t i = dim;
    while (i > 0) {
      --i;
      if (c[i] < r) {
        ++c[i];
        break;
      }
      c[i] = -r;
      if (i == 0) return false;
    }
  }
}

}  // namespace

RiemannElement find_riemann_element(const CMType& phi, long cap) {
  const CMField& cm = phi.cm;
  const NumberField& E = cm.field;
  NFElement x = E.gen();
  NFElement a0 = cm.conj(x) == -x ? x : x - cm.conj(x);
  if (positive_on_type(a0, phi)) return {phi, a0};
  if (positive_on_type(-a0, phi)) return {phi, -a0};
  Order oF = Order::maximal(cm.real_field);
  auto fb = FracIdeal::unit(oF).basis();
  std::optional<NFElement> found;
  for (long r = 1; r <= cap && !found; ++r) {
    for_each_on_shell(fb.size(), r, [&](const std::vector<long>& c) {
      NFElement a = cm.real_field.zero();
      for (size_t i = 0; i < c.size(); ++i) a += fb[i] * Rational(c[i]);
      if (a.is_zero()) return false;
      NFElement cand = cm.real_incl(a) * a0;
      if (positive_on_type(cand, phi)) {
        found = cand;
        return true;
      }
      return false;
    });
  }
  require(found.has_value(), Errc::SearchExhausted,
          "no sign-correcting element of O_F with coordinates up to " + std::to_string(cap));
  return {phi, *found};
}

Validation validate_quadruple(const TypeQuadruple& q) {
  Validation v;
  auto bad = [&](const std::string& s) {
    v.valid = false;
    v.problems.push_back(s);
  };
  const CMField& cm = q.type.cm;
  if (q.t.field() != cm.field) {
    bad("t is not an element of E");
    return v;
  }
  if (q.ideal.order() != cm.order) bad("ideal is not an ideal of O_E");
  if (q.t.is_zero()) {
    bad("t is zero");
    return v;
  }
  if (cm.conj(q.t) != -q.t) bad("conj(t) != -t");
  for (size_t i : q.type.phi)
    if (im_sign(q.t, i) <= 0) bad("Im(phi_" + std::to_string(i) + "(t)) <= 0");
  return v;
}

std::optional<NFElement> quadruples_equivalent(const TypeQuadruple& q1, const TypeQuadruple& q2,
                                               unsigned long budget) {
  require(q1.type.cm.field == q2.type.cm.field && q1.type.phi == q2.type.phi, Errc::InvalidArgument,
          "quadruples have different CM-pairs");
  const CMField& cm = q1.type.cm;
  auto g = is_principal(q2.ideal * ideal_inverse(q1.ideal), budget);
  if (!g) return std::nullopt;
  // need a unit u with u conj(u) = r; then T2(u) = Tr(r), so the search below is complete
  NFElement r = q1.t / q2.t / (*g * cm.conj(*g));
  if (cm.conj(r) != r) return std::nullopt;
  Rational tr = r.trace();
  if (tr <= 0 || !cm.order.contains(r) || !cm.order.contains(r.inverse())) return std::nullopt;
  std::vector<NFElement> hits;
  try {
    for (auto& u : short_elements(FracIdeal::unit(cm.order), cm.conj, tr, budget)) {
      if (u * cm.conj(u) != r) continue;
      hits.push_back(*g * u);
      hits.push_back(-(*g * u));
    }
  } catch (const Error& e) {
    if (e.code() != Errc::EnumerationBoundExceeded) throw;
    fail(Errc::UnitSearchInconclusive, "unit search ran out of budget; not a proof of inequivalence");
  }
  if (hits.empty()) return std::nullopt;
  return *std::max_element(hits.begin(), hits.end(),
                           [](const NFElement& a, const NFElement& b) { return a.coords() < b.coords(); });
}

}  // namespace cmreflex
