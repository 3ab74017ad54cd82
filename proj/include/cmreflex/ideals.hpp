#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cmreflex/matrix.hpp"
#include "cmreflex/numberfield.hpp"

namespace cmreflex {

struct OrderData;

// A full-rank subring of the field. The basis is held as den^-1 * hnf with
// hnf in column HNF on the power basis, so basis element 0 is 1.
class Order {
 public:
  Order() = default;
  // Maximal order by the Round-2 algorithm (min_poly must have integer coefficients).
  static Order maximal(const NumberField& k);
  // Z[x]; min_poly must have integer coefficients.
  static Order equation_order(const NumberField& k);
  // Order spanned by the columns of basis (power-basis coordinates). Throws
  // InvalidArgument unless the span is a ring containing 1.
  static Order from_basis(const NumberField& k, const QMatrix& basis);

  const NumberField& field() const;
  int degree() const;
  // Columns: basis elements in power-basis coordinates.
  const QMatrix& basis() const;
  const Integer& disc() const;
  const Integer& index_in_maximal() const;
  bool is_maximal() const;
  NFElement element(const ZVector& c) const;
  NFElement element(const QVector& c) const;
  // Coordinates of x in the order basis (rational in general).
  QVector coords(const NFElement& x) const;
  // Integer coordinates if x lies in the order.
  std::optional<ZVector> int_coords(const NFElement& x) const;
  bool contains(const NFElement& x) const { return int_coords(x).has_value(); }
  // Product of two elements in order coordinates.
  ZVector mul(const ZVector& a, const ZVector& b) const;
  // Matrix of y -> x y in order coordinates (x in the order).
  ZMatrix mult_matrix(const ZVector& x) const;
  // Tr(b_i b_j).
  const ZMatrix& trace_form() const;

  bool operator==(const Order& o) const;
  bool operator!=(const Order& o) const { return !(*this == o); }
  const OrderData* data() const { return d_.get(); }

 private:
  std::shared_ptr<const OrderData> d_;
};

// (1/den) * (span of the columns of hnf), columns in order coordinates.
class FracIdeal {
 public:
  FracIdeal() = default;
  // Normalizes: hnf recomputed, den made minimal.
  FracIdeal(Order o, Integer den, const ZMatrix& gens);

  static FracIdeal unit(const Order& o);
  static FracIdeal principal(const Order& o, const NFElement& a);  // ZeroIdeal on 0
  static FracIdeal from_generators(const Order& o, const std::vector<NFElement>& gens);

  const Order& order() const { return o_; }
  const Integer& den() const { return den_; }
  const ZMatrix& hnf() const { return h_; }
  bool is_integral() const { return den_ == 1; }
  bool is_unit() const;
  // Basis elements as field elements.
  std::vector<NFElement> basis() const;
  bool contains(const NFElement& x) const;
  // this ⊇ b
  bool contains(const FracIdeal& b) const;
  // Smallest positive integer in the ideal (integral ideals only).
  Integer min_integer() const;

  bool operator==(const FracIdeal& o) const { return o_ == o.o_ && den_ == o.den_ && h_ == o.h_; }
  bool operator!=(const FracIdeal& o) const { return !(*this == o); }
  bool operator<(const FracIdeal& o) const;
  std::string to_string() const;

 private:
  Order o_;
  Integer den_ = 1;
  ZMatrix h_;
};

FracIdeal ideal_product(const FracIdeal& a, const FracIdeal& b);
FracIdeal ideal_inverse(const FracIdeal& a);
FracIdeal ideal_pow(const FracIdeal& a, long e);
FracIdeal ideal_sum(const FracIdeal& a, const FracIdeal& b);
FracIdeal ideal_scale(const FracIdeal& a, const NFElement& s);
inline FracIdeal operator*(const FracIdeal& a, const FracIdeal& b) { return ideal_product(a, b); }
Rational numerical_norm(const FracIdeal& a);
// Image of an ideal under a field map into a field with maximal order `target`:
// the ideal generated by the images (extension).
FracIdeal ideal_image(const FracIdeal& a, const FieldMorphism& m, const Order& target);

struct PrimeIdeal {
  FracIdeal ideal;
  Integer p;
  int e = 0;
  int f = 0;
  bool operator==(const PrimeIdeal& o) const { return ideal == o.ideal; }
  bool operator<(const PrimeIdeal& o) const { return ideal < o.ideal; }
};

// Primes above p, sorted canonically.
std::vector<PrimeIdeal> prime_split(const Integer& p, const Order& o);
// Exponent of P in a nonzero fractional ideal.
long valuation(const FracIdeal& a, const PrimeIdeal& P);
long valuation(const NFElement& a, const Order& o, const PrimeIdeal& P);
// Prime factorization with nonzero exponents, sorted by prime.
std::vector<std::pair<PrimeIdeal, long>> factor_ideal(const FracIdeal& a);
FracIdeal from_factorization(const Order& o, const std::vector<std::pair<PrimeIdeal, long>>& fac);

// Complex conjugation as an automorphism of k if k is CM or totally real
// (identity in the totally real case); nullopt otherwise.
std::optional<FieldMorphism> positive_involution(const NumberField& k);

// Tr(x * conj(y)) on the basis of a, as a positive definite form.
QMatrix t2_gram(const FracIdeal& a, const FieldMorphism& conj);

// Generator of a if principal. Needs a totally real or CM field; the search
// budget defaults to default_budget().
std::optional<NFElement> is_principal(const FracIdeal& a, unsigned long budget = 0);

// Elements of the order with T2 below the bound (up to sign), shortest first.
std::vector<NFElement> short_elements(const FracIdeal& a, const FieldMorphism& conj, const Rational& bound,
                                      unsigned long budget = 0);

// Roots of unity in the field (CM or totally real), generator first is not
// guaranteed; sorted by power-basis coordinates.
std::vector<NFElement> roots_of_unity(const Order& o);

struct CoprimeScale {
  NFElement scalar;
  FracIdeal ideal;
};
// scalar * a integral with norm prime to m.
CoprimeScale coprime_scale(const FracIdeal& a, const Integer& m);

// Fundamental unit (x + y sqrt(D)) / 2 > 1 of the real quadratic order of
// discriminant D.
std::pair<Integer, Integer> real_quadratic_fundamental_unit(const Integer& D);

}  // namespace cmreflex
