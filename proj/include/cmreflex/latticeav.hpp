#pragma once

#include <optional>
#include <vector>

#include "cmreflex/cmreflex.hpp"

namespace cmreflex {

// C^Phi / Phi(lattice) for a fractional ideal of the maximal order of E.
struct LatticeAV {
  CMType type;
  FracIdeal lattice;

  LatticeAV() = default;
  LatticeAV(CMType type, FracIdeal lattice);
  bool operator==(const LatticeAV& o) const;
};

// The a-multiplication source -> target; identity on E, target.lattice = a^-1 source.lattice.
struct AMult {
  LatticeAV source, target;
  FracIdeal ideal;
};

AMult amul(const LatticeAV& A, const FracIdeal& a);  // NonIntegralIdeal unless a integral
Integer amul_degree(const AMult& l);
// [L : M] for lattices M inside L.
Integer lattice_index(const FracIdeal& outer, const FracIdeal& inner);
Integer elem_degree(const LatticeAV& A, const NFElement& alpha);
// mu after lambda.
AMult compose(const AMult& lambda, const AMult& mu);
// {a : a * A.lattice inside B.lattice}.
FracIdeal hom_ideal(const LatticeAV& A, const LatticeAV& B);
// Multiplier a with a * A.lattice = B.lattice, if A and B are isomorphic.
std::optional<NFElement> isomorphism(const LatticeAV& A, const LatticeAV& B);
// Smallest degree of a nonzero multiplier A -> B (imaginary quadratic E only).
Integer min_isogeny_degree(const LatticeAV& A, const LatticeAV& B);
bool factor_through(const AMult& lambda, const AMult& mu);

// One integral representative per ideal class, from the ideals of norm up
// to the Minkowski bound; (1) first, then by norm and canonical order.
std::vector<FracIdeal> ideal_class_representatives(const Order& o);
std::vector<LatticeAV> isogeny_classes(const CMType& phi);

// A_m = (1/m) lattice / lattice, in coordinates (Z/m)^n on the lattice basis.
struct TorsionModule {
  LatticeAV av;
  long m = 1;
  std::vector<ZMatrix> action;  // multiplication by each O_E basis element, mod m
  ZVector generator;            // O_E/m-module generator
  Integer cardinality() const;
  // coords of x in O_E (order coordinates) acting on v, mod m
  ZVector act(const ZVector& x, const ZVector& v) const;
};

TorsionModule torsion(const LatticeAV& A, long m);
// Matrix of the induced map source_m -> target_m, mod m.
ZMatrix induced_map(const AMult& l, long m);
// Exhaustive check that the map (Z/m)^n -> (Z/m)^n is a bijection.
bool is_bijection_mod(const ZMatrix& map, long m);
// Every endomorphism of the group A_m commuting with O_E is multiplication by
// an element of O_E/m. Exhaustive; Unsupported when m^(n^2) exceeds 2^22.
bool commutant_is_scalar(const TorsionModule& T);

}  // namespace cmreflex
