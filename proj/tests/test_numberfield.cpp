#include <random>

#include "cmreflex/errors.hpp"
#include "cmreflex/galois.hpp"
#include "doctest.h"

using namespace cmreflex;

namespace {

NumberField qi() { return NumberField(UniPoly{1, 0, 1}); }
NumberField cyclo5() { return NumberField(UniPoly{1, 1, 1, 1, 1}); }
NumberField quartic() { return NumberField(UniPoly{3, 0, 6, 0, 1}); }

NFElement random_element(const NumberField& k, std::mt19937_64& rng, long h = 5) {
  std::uniform_int_distribution<long> d(-h, h);
  std::vector<Rational> c;
  for (int i = 0; i < k.degree(); ++i) c.emplace_back(d(rng));
  return k.from_coords(c);
}

}  // namespace

TEST_CASE("field construction and element arithmetic") {
  CHECK_THROWS_AS(NumberField(UniPoly{-1, 0, 1}), Error);
  NumberField k = cyclo5();
  CHECK(k.degree() == 4);
  CHECK(k.disc() == 125);
  NFElement z = k.gen();
  CHECK(z.pow(5) == k.one());
  CHECK(z.norm() == 1);
  CHECK(z.trace() == -1);
  CHECK((k.one() - z).norm() == 5);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    NFElement a = random_element(k, rng), b = random_element(k, rng);
    if (a.is_zero() || b.is_zero()) continue;
    CHECK(a * a.inverse() == k.one());
    CHECK((a * b).norm() == a.norm() * b.norm());
    CHECK((a + b).trace() == a.trace() + b.trace());
    CHECK(a.charpoly().coeff(0) == a.norm());
  }
  NumberField q = quartic();
  CHECK(q.gen().minpoly() == q.min_poly());
  CHECK((q.gen() * q.gen()).minpoly() == UniPoly{3, 6, 1});
}

TEST_CASE("certified embeddings") {
  auto e = certified_embeddings(qi(), 64);
  REQUIRE(e.size() == 2);
  CHECK(e[0].approx.re == 0);
  CHECK(e[0].approx.im == -1);
  CHECK(e[1].approx.im == 1);
  CHECK(e[0].approx.rad < Rational(1, Integer(1) << 60));

  auto r = certified_embeddings(NumberField(UniPoly{-2, 0, 1}), 64);
  REQUIRE(r.size() == 2);
  CHECK(r[0].approx.im == 0);
  CHECK(r[1].approx.im == 0);
  CHECK(r[1].approx.re > Rational(1414, 1000));
  CHECK(r[1].approx.re < Rational(1415, 1000));

  NumberField q = quartic();
  auto iso = q.roots(64);
  REQUIRE(iso.roots.size() == 4);
  for (size_t i = 0; i < 4; ++i) {
    CHECK(iso.roots[i].re == 0);  // certified purely imaginary via symmetry of f
    CHECK(iso.roots[iso.conj[i]].im == -iso.roots[i].im);
  }
  CHECK(q.is_totally_imaginary());

  // refinement keeps the bracketed root
  auto z = cyclo5().roots(64);
  auto z2 = cyclo5().roots(512);
  for (size_t i = 0; i < 4; ++i) CHECK(z.roots[i].contains(z2.roots[i]));
  CHECK(z2.roots[0].rad < Rational(1, Integer(1) << 500));
  // canonical order for the fifth roots of unity: increasing real part, then imaginary
  CHECK(z.roots[0].re < 0);
  CHECK(z.roots[0].im < 0);
  CHECK(z.roots[1].im > 0);
  CHECK(z.roots[3].re > 0);
}

TEST_CASE("automorphisms") {
  CHECK(nf_automorphisms(qi()).size() == 2);
  CHECK(nf_automorphisms(NumberField(UniPoly{-2, 0, 0, 1})).size() == 1);
  auto autos = nf_automorphisms(cyclo5());
  REQUIRE(autos.size() == 4);
  // closure under composition and inverses
  for (auto& a : autos)
    for (auto& b : autos) {
      FieldMorphism c = a.after(b);
      CHECK(std::any_of(autos.begin(), autos.end(), [&](const FieldMorphism& x) { return x == c; }));
    }
  for (auto& a : autos)
    CHECK(std::any_of(autos.begin(), autos.end(), [&](const FieldMorphism& x) { return x.after(a).is_identity(); }));
  // phi o sigma is again an embedding, matched by certified disks
  NumberField k = cyclo5();
  for (auto& s : autos)
    for (size_t i = 0; i < 4; ++i) {
      size_t j = identify_root(k, s.image(), i);
      CHECK(j < 4);
    }
}

TEST_CASE("galois closures") {
  auto c1 = galois_closure(qi());
  CHECK(c1.L.field.degree() == 2);
  CHECK(c1.group_name == "C2");
  CHECK(c1.embeds.size() == 2);

  auto c2 = galois_closure(cyclo5());
  CHECK(c2.L.field.degree() == 4);
  CHECK(c2.group_name == "C4");

  auto c3 = galois_closure(quartic());
  CHECK(c3.L.field.degree() == 8);
  CHECK(c3.group_name == "D4");
  CHECK(c3.embeds.size() == 4);
  // transitive action on the embeddings
  std::vector<bool> hit(4, false);
  for (auto& p : c3.perm) hit[p[0]] = true;
  CHECK(std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }));

  auto c4 = galois_closure(NumberField(UniPoly{-2, 0, 0, 1}));
  CHECK(c4.L.field.degree() == 6);
  CHECK(c4.group_name == "S3");
}
