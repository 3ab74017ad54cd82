#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cmreflex/galois.hpp"
#include "cmreflex/ideals.hpp"

namespace cmreflex {

// A CM field E with its maximal order, complex conjugation and real subfield F.
struct CMField {
  NumberField field;
  Order order;
  FieldMorphism conj;
  NumberField real_field;
  FieldMorphism real_incl;  // F -> E

  int g() const { return field.degree() / 2; }
  // Root index of the complex conjugate of embedding i.
  size_t conj_index(size_t i) const;
};

// nullopt when k is not a CM field.
std::optional<CMField> cm_check(const NumberField& k);

// One embedding index from each conjugate pair, sorted.
struct CMType {
  CMField cm;
  std::vector<size_t> phi;

  bool contains(size_t i) const;
  std::string to_string() const;
};

// Throws InvalidArgument unless phi is a CM-type of cm.
CMType make_cm_type(const CMField& cm, std::vector<size_t> phi);

// All 2^g types; type t picks the larger index of the j-th pair iff bit j of t is set.
std::vector<CMType> enumerate_cm_types(const CMField& cm);

class ReflexNorm;

// Reflex data computed inside the Galois closure L of E, with L ⊂ C through
// its root 0 and E ⊂ L through closure.embeds[0].
struct ReflexData {
  CMType type;
  GaloisClosure closure;
  std::vector<size_t> lift;         // sigma in Gal(L) whose restriction to E lies in Phi
  std::vector<size_t> stabilizer;   // {tau : tau * lift = lift}
  std::vector<size_t> coset_reps;   // lift = disjoint union of stabilizer * s
  NumberField reflex;               // E*
  FieldMorphism reflex_incl;        // E* -> L
  CMType reflex_type;               // Psi on E*
  std::shared_ptr<const ReflexNorm> in_closure;  // N_{L,Phi}

  // N_Phi on E*: product over coset representatives, pulled back to E.
  NFElement norm_elem(const NFElement& b) const;
  // N_Phi on ideals of E*, as the exact [L:E*]-th root of the extension formula in L.
  FracIdeal norm_ideal(const FracIdeal& a) const;
};

ReflexData reflex_field(const CMType& phi);

// Reflex norm N_{k,Phi} for a Galois field k containing all conjugates of E:
// N(a) = prod_{phi in Phi} phi^-1(Nm_{k/phi E} a), on elements and ideals.
class ReflexNorm {
 public:
  ReflexNorm(const CMType& phi, const GaloisField& k);
  ReflexNorm(const CMType& phi, const NumberField& k);

  NFElement operator()(const NFElement& a) const;
  FracIdeal operator()(const FracIdeal& a) const;
  // Image of a prime of O_k.
  FracIdeal of_prime(const PrimeIdeal& P) const;

  const GaloisField& k() const { return k_; }
  const Order& k_order() const { return ok_; }
  const CMType& type() const { return phi_; }

 private:
  void init();
  CMType phi_;
  GaloisField k_;
  Order ok_;
  std::vector<FieldMorphism> emb_;                 // one per element of Phi, E -> k
  std::vector<std::vector<size_t>> rel_group_;     // Gal(k / emb(E))
};

NFElement reflex_norm_elem(const CMType& phi, const NumberField& k, const NFElement& a);
FracIdeal reflex_norm_ideal(const CMType& phi, const NumberField& k, const FracIdeal& a);

// Prime of the order `small` lying under P, for an inclusion m: small.field -> P's field.
PrimeIdeal prime_below(const PrimeIdeal& P, const FieldMorphism& m, const Order& small);

// Relative norm of an ideal of O_k down to the subfield given by m: M -> k.
FracIdeal relative_norm(const FracIdeal& a, const FieldMorphism& m, const Order& small);

// Apply a field automorphism to an ideal.
FracIdeal ideal_conjugate(const FracIdeal& a, const FieldMorphism& s);

struct IdentityCheck {
  std::string name;
  long checked = 0;
  long failed = 0;
  std::string witness;  // first failing input, if any
  bool passed() const { return failed == 0; }
};

struct ReflexReport {
  std::vector<IdentityCheck> checks;
  bool all_passed() const;
};

// The identity suite on elements (n_samples seeded samples) and on all primes
// of O_k of norm below prime_norm_bound. k must be Galois and contain all
// conjugates of E; pass an invalid NumberField to use the Galois closure.
ReflexReport verify_reflex_identities(const CMType& phi, const NumberField& k, int n_samples, unsigned long seed,
                                      long prime_norm_bound = 200);

}  // namespace cmreflex
