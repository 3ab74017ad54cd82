#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cmreflex/ball.hpp"
#include "cmreflex/matrix.hpp"
#include "cmreflex/poly.hpp"

namespace cmreflex {

class NFElement;
struct FieldData;

// Q[x]/(f) for a monic irreducible f. Copies share the same immutable data,
// so a NumberField is cheap to pass around and safe to share across threads.
class NumberField {
 public:
  NumberField() = default;
  // Throws NotIrreducible / InvalidArgument.
  explicit NumberField(const UniPoly& min_poly, std::string name = "");

  const UniPoly& min_poly() const;
  int degree() const;
  const Integer& disc() const;  // discriminant of min_poly
  const std::string& name() const;
  bool valid() const { return d_ != nullptr; }

  NFElement zero() const;
  NFElement one() const;
  NFElement gen() const;
  NFElement from_rational(const Rational& q) const;
  NFElement from_coords(std::vector<Rational> coords) const;
  NFElement from_poly(const UniPoly& p) const;

  // Trace form Tr(x^i x^j) on the power basis.
  const QMatrix& trace_matrix() const;

  // Certified roots of min_poly, canonical order; radii below 2^-bits.
  RootIsolation roots(unsigned bits = 64) const;
  bool is_totally_imaginary() const;
  bool is_totally_real() const;

  bool operator==(const NumberField& o) const;
  bool operator!=(const NumberField& o) const { return !(*this == o); }
  const FieldData* data() const { return d_.get(); }

 private:
  std::shared_ptr<const FieldData> d_;
};

class NFElement {
 public:
  NFElement() = default;
  NFElement(NumberField k, std::vector<Rational> coords);

  const NumberField& field() const { return k_; }
  const std::vector<Rational>& coords() const { return c_; }
  const Rational& operator[](size_t i) const { return c_[i]; }
  UniPoly as_poly() const { return UniPoly(c_); }

  bool is_zero() const;
  bool is_rational() const;
  bool is_integral() const;  // characteristic polynomial has integer coefficients

  NFElement operator-() const;
  NFElement& operator+=(const NFElement& o);
  NFElement& operator-=(const NFElement& o);
  NFElement& operator*=(const NFElement& o);
  NFElement& operator*=(const Rational& s);
  friend NFElement operator+(NFElement a, const NFElement& b) { return a += b; }
  friend NFElement operator-(NFElement a, const NFElement& b) { return a -= b; }
  friend NFElement operator*(NFElement a, const NFElement& b) { return a *= b; }
  friend NFElement operator*(NFElement a, const Rational& s) { return a *= s; }
  friend NFElement operator*(const Rational& s, NFElement a) { return a *= s; }
  NFElement inverse() const;  // ZeroElement on zero
  friend NFElement operator/(const NFElement& a, const NFElement& b) { return a * b.inverse(); }
  NFElement pow(long e) const;
  bool operator==(const NFElement& o) const { return c_ == o.c_; }
  bool operator!=(const NFElement& o) const { return c_ != o.c_; }

  // Matrix of x -> a x on the power basis (columns are images of basis vectors).
  QMatrix mult_matrix() const;
  Rational trace() const;
  Rational norm() const;
  UniPoly charpoly() const;
  UniPoly minpoly() const;

  // Value under the complex embedding with the given root index, as a disk of
  // radius below 2^-bits.
  Ball embed(size_t root_index, unsigned bits = 64) const;

  std::string to_string() const;

 private:
  NumberField k_;
  std::vector<Rational> c_;
};

// Q-algebra map source -> target sending the generator to `image`.
class FieldMorphism {
 public:
  FieldMorphism() = default;
  // Checks exactly that min_poly(source) vanishes at image.
  FieldMorphism(NumberField source, NFElement image);

  const NumberField& source() const { return src_; }
  const NumberField& target() const { return img_.field(); }
  const NFElement& image() const { return img_; }

  NFElement operator()(const NFElement& a) const;
  // (this after o): o.target must equal this->source.
  FieldMorphism after(const FieldMorphism& o) const;
  bool is_identity() const;
  bool operator==(const FieldMorphism& o) const { return src_ == o.src_ && img_ == o.img_; }
  // Matrix of the Q-linear map on power bases (target coords of images of x^j).
  QMatrix matrix() const;
  // Preimage of an element known to lie in the image; nullopt otherwise.
  std::optional<NFElement> preimage(const NFElement& b) const;

 private:
  NumberField src_;
  NFElement img_;
};

// Complex embedding with certified enclosure of the root it is attached to.
struct Embedding {
  NumberField field;
  size_t root_index = 0;
  Ball approx;
  unsigned bits = 64;
};

std::vector<Embedding> certified_embeddings(const NumberField& k, unsigned bits = 64);
Embedding refine(const Embedding& e, unsigned bits);

// Index of the root of k's min_poly enclosed by value(bits) once bits is
// large enough; value must enclose a root of k.min_poly for every bits.
size_t locate_root(const NumberField& k, const std::function<Ball(unsigned)>& value);

// Index of the root of k's min_poly that equals phi(a), where a in the field
// of embedding index `idx` is known to be a root of k.min_poly.
size_t identify_root(const NumberField& k, const NFElement& a, size_t idx);

}  // namespace cmreflex
