#pragma once

#include <vector>

#include "gaudinopers/common.hpp"
#include "gaudinopers/ratfun.hpp"

namespace gop {

// Square matrix with rational-function entries, 0-based indexing.
struct RatMat {
  int n = 0;
  std::vector<RatFun> e;

  RatMat() = default;
  explicit RatMat(int size) : n(size), e(size * size) {}
  RatFun& at(int i, int j) { return e[i * n + j]; }
  const RatFun& at(int i, int j) const { return e[i * n + j]; }
  static RatMat identity(int size);
};

RatMat operator+(const RatMat& a, const RatMat& b);
RatMat operator-(const RatMat& a, const RatMat& b);
RatMat operator*(const RatMat& a, const RatMat& b);
RatMat mat_derivative(const RatMat& a);
Eigen::MatrixXcd eval(const RatMat& a, Complex x);

// Inverse of a unipotent upper-triangular matrix (finite Neumann series).
RatMat unipotent_inverse(const RatMat& g);

// First-order system d/dt + M(t) with -1 on the subdiagonal and zero below
// it (principal nilpotent normalization).
using MatrixOper = RatMat;

// g (d + M) g^{-1} = d + gMg^{-1} - g' g^{-1}; g must be unipotent
// upper-triangular.
MatrixOper gauge_transform(const MatrixOper& M, const RatMat& g);

struct CanonicalOper {
  std::vector<RatFun> v;  // v_1 .. v_{n-1}, the companion first row
  RatMat gauge;           // unipotent witness: gauge_transform(input, gauge)
};

// Reduces to companion form (first row 0, v_1..v_{n-1}; -1 subdiagonal) by
// peeling the matrix diagonal by diagonal.  The gauge generator at each step
// is the unique preimage with no component along the complement of the image
// of bracketing with the subdiagonal; any scalar (pure-trace) part of the
// input is projected away first.
CanonicalOper canonical_form(const MatrixOper& M);

MatrixOper companion_oper(const std::vector<RatFun>& v);

// phi'''/phi' - (3/2)(phi''/phi')^2 at the center of the jet.
LocalJet schwarzian(const LocalJet& phi);

// Coefficients after the substitution t = phi(s): the first transforms as a
// projective connection, the k-th (k > 1) as a (k+1)-differential.
std::vector<LocalJet> oper_coordinate_change(const CanonicalOper& oper,
                                             const LocalJet& phi);

// Residue data of a regular singularity from the constant terms c_k(0) of
// t^(k+1) v_k(t): the first slot is shifted by 1/4, the rest pass through.
Eigen::VectorXcd rs_residue(const std::vector<Complex>& c);

}  // namespace gop
