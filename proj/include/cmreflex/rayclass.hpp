#pragma once

#include <memory>
#include <vector>

#include "cmreflex/cmreflex.hpp"

namespace cmreflex {

// Generators of O_E^x: a root of unity of maximal order, then free generators.
// Imaginary quadratic fields and quartic CM fields; UnitsUnavailable otherwise.
struct UnitGroup {
  NFElement torsion;
  long torsion_order = 0;
  std::vector<NFElement> free;
};
UnitGroup unit_group(const CMField& cm);

struct RayClassData;

struct RayClassGroup {
  CMField field;
  FracIdeal modulus;
  std::vector<FracIdeal> generators;      // residue-unit generators as principal ideals, then class generators
  ZMatrix relations;                      // rows: relations among generators
  std::vector<Integer> elementary_divisors;  // nontrivial, d_1 | d_2 | ...
  Integer order;
  Integer units_mod_m;      // |(O/m)^x|
  Integer unit_image;       // |image of O^x in (O/m)^x|
  Integer class_number;
  std::shared_ptr<const RayClassData> data;
};

// Throws ModulusTooLarge for norm above 10^4, UnitsUnavailable.
RayClassGroup ray_class_group(const CMField& k, const FracIdeal& modulus);

// Class of an ideal coprime to the modulus, reduced modulo the elementary divisors.
std::vector<Integer> ray_class(const FracIdeal& a, const RayClassGroup& G);
bool is_identity(const std::vector<Integer>& c);
std::vector<Integer> class_add(const std::vector<Integer>& a, const std::vector<Integer>& b, const RayClassGroup& G);

struct TransportReport {
  FracIdeal modulus_used;   // on E*
  int escalations = 0;
  Integer group_order;      // |C_m(E)|
  long samples = 0;
  long failures = 0;        // congruent samples with nontrivial class under the final modulus
  long pairs = 0;
  long multiplicative_failures = 0;
  long control_samples = 0;
  long control_nontrivial = 0;  // merely coprime samples landing outside the identity
  bool passed() const { return failures == 0 && multiplicative_failures == 0; }
};

// b -> [N_Phi(b)] in C_(m)(E) kills principal ideals (beta) with beta = 1 mod m'.
// m' is multiplied by m and then by small primes while samples fail (at most
// max_escalations times).
TransportReport reflex_transport_check(const CMType& phi, long m, const FracIdeal& modulus_reflex, int samples,
                                       unsigned long seed, int max_escalations = 4);

}  // namespace cmreflex
