#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gaudinopers/common.hpp"

namespace gop {

// ---------------------------------------------------------------------------
// Dense univariate polynomials over Complex, coefficients ascending.  The
// zero polynomial is stored as a single zero coefficient.
// ---------------------------------------------------------------------------
struct Poly {
  Eigen::VectorXcd c;

  Poly() : c(Eigen::VectorXcd::Zero(1)) {}
  explicit Poly(Eigen::VectorXcd coeffs);
  static Poly constant(Complex v);
  static Poly x();

  int degree() const;  // -1 for the zero polynomial
  Complex lead() const;
  bool is_zero() const;
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator-(const Poly& a);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(Complex s, const Poly& a);
bool poly_equal(const Poly& a, const Poly& b);

Complex eval(const Poly& p, Complex x);
Poly derivative(const Poly& p);
Poly antiderivative(const Poly& p);  // zero constant term
// Drops trailing coefficients below rel_tol relative to the largest magnitude.
Poly trim(const Poly& p, double rel_tol = 1e-12);
Poly monic(const Poly& p);
Poly poly_from_roots(Complex lead, const std::vector<Complex>& roots);
Poly poly_pow(const Poly& p, int k);

struct PolyDivMod {
  Poly quot, rem;
};
PolyDivMod divmod(const Poly& p, const Poly& q);
// Synthetic division by (x - r); the remainder p(r) is discarded.
Poly deflate(const Poly& p, Complex r);
// Coefficients of p(center + s) as a polynomial in s (exact Horner shift).
Poly taylor_shift(const Poly& p, Complex center);

// Companion-matrix roots of the trimmed polynomial (degree many).
std::vector<Complex> poly_roots(const Poly& p, double rel_tol = 1e-12);

// Greedy clustering of numerically multiple roots; cluster centers of
// multiplicity k > 1 are polished on the (k-1)-th derivative.
std::vector<std::pair<Complex, int>> cluster_roots(
    const Poly& p, const std::vector<Complex>& roots, double radius);

// ---------------------------------------------------------------------------
// Rational functions num/den.  Arithmetic does not cancel common factors;
// call rat_normalize explicitly when a reduced form is wanted.
// ---------------------------------------------------------------------------
struct RatFun {
  Poly num, den;

  RatFun() : num(), den(Poly::constant(1.0)) {}
  RatFun(Poly n, Poly d);
  static RatFun constant(Complex v);
  static RatFun from_poly(const Poly& p);
  bool is_zero() const { return num.is_zero(); }
};

RatFun operator+(const RatFun& a, const RatFun& b);
RatFun operator-(const RatFun& a, const RatFun& b);
RatFun operator-(const RatFun& a);
RatFun operator*(const RatFun& a, const RatFun& b);
RatFun operator*(Complex s, const RatFun& a);
RatFun operator/(const RatFun& a, const RatFun& b);

Complex eval(const RatFun& f, Complex x);
RatFun derivative(const RatFun& f);
// Sum of residue/(x - pole) terms assembled over the common denominator.
RatFun rat_from_poles(const std::vector<std::pair<Complex, Complex>>& terms);
// Cancels numerator/denominator roots that agree within tol; monic denominator.
RatFun rat_normalize(const RatFun& f, double tol = 1e-7);

// ---------------------------------------------------------------------------
// Truncated Laurent expansions at a finite center.  Coefficients cover orders
// lo .. lo+size-1; arithmetic tracks through which order a result is valid.
// ---------------------------------------------------------------------------
struct LocalJet {
  Complex center = 0.0;
  int lo = 0;
  Eigen::VectorXcd c;

  int hi() const { return lo + int(c.size()) - 1; }
  Complex coeff(int order) const;
  static LocalJet constant(Complex center, Complex v, int K);
};

LocalJet operator+(const LocalJet& a, const LocalJet& b);
LocalJet operator-(const LocalJet& a, const LocalJet& b);
LocalJet operator*(const LocalJet& a, const LocalJet& b);
LocalJet operator*(Complex s, const LocalJet& a);
LocalJet jet_derivative(const LocalJet& a);
// Requires a nonzero leading coefficient (relative to rel_tol).
LocalJet jet_inverse(const LocalJet& a, double rel_tol = 1e-12);
LocalJet jet_pow(const LocalJet& a, int k, double rel_tol = 1e-12);
// Drops leading coefficients below rel_tol relative to the largest magnitude.
LocalJet jet_trim(const LocalJet& a, double rel_tol);

// Laurent expansion of f at center through order K.  Valuations of numerator
// and denominator are detected relative to tol; cancellation residue in the
// quotient is kept, so near-erased singular parts show up as small
// negative-order coefficients.
LocalJet local_jet(const RatFun& f, Complex center, int K, double tol = 1e-12);

// Jet of f(phi(s)) at phi.center; phi must have nonzero derivative there.
LocalJet compose_ratfun_jet(const RatFun& f, const LocalJet& phi,
                            double rel_tol = 1e-12);

// ---------------------------------------------------------------------------
// Partial fractions and integration of rational functions.
// ---------------------------------------------------------------------------
struct PFTerm {
  Complex pole;
  int order;       // >= 1
  Complex coeff;   // coefficient of (x - pole)^(-order)
};

struct PartialFractions {
  Poly polynomial;
  std::vector<PFTerm> terms;
};

PartialFractions partial_fractions(const RatFun& f, double tol = 1e-7);
// Same, with the denominator's pole structure supplied by the caller.
PartialFractions partial_fractions_known(
    const RatFun& f, const std::vector<std::pair<Complex, int>>& poles);

struct HermiteResult {
  RatFun rational_part;  // already integrated: d/dx of it is the order>=2 part
  std::vector<std::pair<Complex, Complex>> residues;  // (pole, simple coeff)
  Poly polynomial_part;  // polynomial part of the integrand itself
};

// f = d/dx(rational_part) + polynomial_part + sum residues/(x - pole).
HermiteResult hermite_integrate(const RatFun& f, double tol = 1e-7);
HermiteResult hermite_integrate_known(
    const RatFun& f, const std::vector<std::pair<Complex, int>>& poles);

}  // namespace gop
