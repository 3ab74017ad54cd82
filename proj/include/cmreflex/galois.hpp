#pragma once

#include <string>
#include <vector>

#include "cmreflex/numberfield.hpp"

namespace cmreflex {

// Polynomial over a number field, coefficients lowest degree first.
class NFPoly {
 public:
  NFPoly() = default;
  NFPoly(NumberField k, std::vector<NFElement> coeffs);
  static NFPoly from_rational(const NumberField& k, const UniPoly& f);

  const NumberField& field() const { return k_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<NFElement>& coeffs() const { return c_; }
  NFElement coeff(int i) const;
  const NFElement& lead() const { return c_.back(); }

  NFPoly monic() const;
  NFPoly derivative() const;
  NFElement eval(const NFElement& x) const;
  // g(x + a)
  NFPoly shift(const NFElement& a) const;

  NFPoly& operator+=(const NFPoly& o);
  NFPoly& operator-=(const NFPoly& o);
  friend NFPoly operator+(NFPoly a, const NFPoly& b) { return a += b; }
  friend NFPoly operator-(NFPoly a, const NFPoly& b) { return a -= b; }
  friend NFPoly operator*(const NFPoly& a, const NFPoly& b);
  bool operator==(const NFPoly& o) const { return c_ == o.c_; }

 private:
  void trim();
  NumberField k_;
  std::vector<NFElement> c_;
};

std::pair<NFPoly, NFPoly> divmod(const NFPoly& a, const NFPoly& b);
NFPoly gcd(NFPoly a, NFPoly b);
// Res_y(min_poly(k)(y), g(y, x)): the norm of g down to Q[x].
UniPoly norm_poly(const NFPoly& g);
// Monic irreducible factors of a squarefree polynomial over k (Trager).
std::vector<NFPoly> factor_squarefree(const NFPoly& g);
// Roots in k of a rational polynomial.
std::vector<NFElement> roots_in_field(const UniPoly& f, const NumberField& k);

// All automorphisms of k (identity first).
std::vector<FieldMorphism> nf_automorphisms(const NumberField& k);

// A number field with its full automorphism group, which has order equal to
// the degree. Gal is stored with autos[0] = identity; `root_of[g]` is the
// index of the complex root rho_0(autos[g](gen)), so autos[g] corresponds to
// the complex embedding rho_0 o autos[g]; `mul[a][b]` indexes autos[a] o autos[b].
struct GaloisField {
  NumberField field;
  std::vector<FieldMorphism> autos;
  std::vector<size_t> root_of;
  std::vector<std::vector<size_t>> mul;
  std::vector<size_t> inv;
  size_t complex_conj = 0;  // autos[complex_conj] restricts to complex conjugation on rho_0(k)

  size_t order() const { return autos.size(); }
  size_t index_of(const FieldMorphism& s) const;
};

// Throws Unsupported if k is not Galois over Q.
GaloisField make_galois(const NumberField& k, std::vector<FieldMorphism> autos);
GaloisField as_galois(const NumberField& k);

struct GaloisClosure {
  NumberField base;
  GaloisField L;
  // embeds[i]: base -> L, with rho_0 o embeds[i] the i-th complex embedding of base.
  std::vector<FieldMorphism> embeds;
  // perm[g][i] = j  iff  autos[g] o embeds[i] = embeds[j].
  std::vector<std::vector<size_t>> perm;
  std::string group_name;
};

// Iterated root adjunction; ClosureTooLarge beyond degree 16.
GaloisClosure galois_closure(const NumberField& k);

// Name of a finite group from its multiplication table (order <= 16).
std::string identify_group(const std::vector<std::vector<size_t>>& mul);

// Fixed field of the subgroup given by indices into g.autos, with its
// inclusion into g.field.
struct Subfield {
  NumberField field;
  FieldMorphism incl;
};
Subfield fixed_field(const GaloisField& g, const std::vector<size_t>& subgroup);

// Subfield of k fixed by a group of automorphisms of k (k need not be Galois).
Subfield fixed_field(const NumberField& k, const std::vector<FieldMorphism>& group);

// Field embeddings src -> dst (as morphisms), as many as exist.
std::vector<FieldMorphism> field_embeddings(const NumberField& src, const NumberField& dst);

}  // namespace cmreflex
