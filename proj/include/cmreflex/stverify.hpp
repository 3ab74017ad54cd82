#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cmreflex/cmreflex.hpp"

namespace cmreflex {

// y^2 = x^3 + a4 x + a6 over F_p.
struct CurveFp {
  long p = 0;
  long a4 = 0, a6 = 0;
};

// Throws BudgetExceeded for p >= 10^6, InvalidArgument for a singular curve.
long count_points(const CurveFp& c);

// The endomorphism [gamma](x, y) = (t^xp x, t^yp y), where t is a root of the
// minimal polynomial of gamma in the ground field.
struct CMEndo {
  UniPoly gamma_minpoly;
  long x_power = 0;
  long y_power = 0;
};

// A curve over Q with CM by the imaginary quadratic field E = Q[x]/(gamma_minpoly),
// gamma the generator of E.
struct CMCurveQ {
  std::string name;
  Integer a4, a6;
  CMField cm;
  CMEndo endo;
};

CMCurveQ make_cm_curve(std::string name, const Integer& a4, const Integer& a6, const CMEndo& endo);

// The minimal-polynomial relation of [gamma] on seeded points over F_{p^2}.
bool check_cm_endo(const CMCurveQ& c, long p, unsigned long seed, int n_points = 20);

struct FrobeniusData {
  NFElement pi;
  Integer q;
  Integer trace;
  PrimeIdeal prime_above;  // of E, fixed by the tangent action of [gamma]
  long theta = 0;          // root of gamma's minimal polynomial mod p used for [gamma]
};

// Throws Supersingular, IdentificationFailed, RamifiedPrime (bad reduction).
FrobeniusData frobenius_element(const CMCurveQ& c, long p, unsigned long seed = 1, int n_points = 20);

// prod_{phi in Phi} phi^-1(Nm_{k/phi E} P), with Nm(result) = q^g and
// result * conj(result) = (q) enforced.
FracIdeal st_rhs(const CMType& phi, const NumberField& k, const PrimeIdeal& P);
bool st_check_ideal(const FrobeniusData& F, const CMType& phi, const NumberField& k, const PrimeIdeal& P);

struct ValuationRow {
  PrimeIdeal v;
  long ord = 0;          // ord_v of the ideal under test
  bool sum_applies = false;
  long sum_rhs = 0;      // sum over phi in Phi with phi^-1(P) = v of f(P / phi v)
  long h = 0;            // |H_v|
  long phi_h = 0;        // |Phi and H_v|
  long ord_q = 0;        // ord_v(q)
  bool sum_ok = true;
  bool ratio_ok = true;
};

struct ValuationReport {
  std::vector<ValuationRow> rows;
  std::string note;
  bool all_ok() const;
};

ValuationReport st_check_valuations(const FracIdeal& ideal, const CMType& phi, const NumberField& k,
                                    const PrimeIdeal& P);
ValuationReport st_check_valuations(const FrobeniusData& F, const CMType& phi, const NumberField& k,
                                    const PrimeIdeal& P);

// The CM-type of E = k given by the identity embedding.
CMType identity_type(const CMField& cm);

// (pi) = N_Phi(p) for Phi the identity type, and pi gives a bijection on A_m.
bool frobenius_class_check(const CMCurveQ& c, long p, long m, unsigned long seed = 1);

}  // namespace cmreflex
