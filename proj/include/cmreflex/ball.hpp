#pragma once

#include <vector>

#include "cmreflex/poly.hpp"

namespace cmreflex {

// Closed disk {z : |z - (re + i im)| <= rad} with exact rational data.
// Midpoints are kept dyadic by truncate(); radii absorb every rounding.
struct Ball {
  Rational re, im, rad;

  static Ball exact(const Rational& re, const Rational& im = 0) { return Ball{re, im, 0}; }

  bool contains_zero() const;
  bool contains(const Ball& o) const;
  bool disjoint(const Ball& o) const;
  bool is_real_point() const { return im == 0; }
  Ball conj() const { return Ball{re, -im, rad}; }
  // Cheap upper bound on |z| over the disk.
  Rational abs_upper() const;
  bool re_positive() const { return re > rad; }
  bool re_negative() const { return re < -rad; }
  bool im_positive() const { return im > rad; }
  bool im_negative() const { return im < -rad; }
};

Ball operator+(const Ball& a, const Ball& b);
Ball operator-(const Ball& a, const Ball& b);
Ball operator-(const Ball& a);
Ball operator*(const Ball& a, const Ball& b);
Ball operator*(const Rational& s, const Ball& b);
// Round midpoint to a multiple of 2^-prec, enlarging the radius to match.
Ball truncate(const Ball& b, unsigned prec);
// Evaluate f at every point of the disk; the result contains all values.
Ball eval(const UniPoly& f, const Ball& z, unsigned prec);

// Certified isolation of the complex roots of a squarefree rational polynomial.
// roots are pairwise disjoint disks, each containing exactly one root, in
// canonical order (real part, then imaginary part of the midpoint). Real roots
// have real midpoints; conjugate roots have exactly conjugate disks; for even
// or odd f, purely imaginary roots have purely imaginary midpoints.
struct RootIsolation {
  std::vector<Ball> roots;
  std::vector<size_t> conj;  // index of the complex-conjugate root
  unsigned prec = 0;         // radii are all below 2^-prec
};

RootIsolation isolate_roots(const UniPoly& f, unsigned bits);
// Shrink every disk below 2^-bits; the i-th root stays the i-th root.
RootIsolation refine_roots(const UniPoly& f, const RootIsolation& iso, unsigned bits);

}  // namespace cmreflex
