#pragma once

#include <optional>
#include <vector>

#include "gaudinopers/bethe.hpp"
#include "gaudinopers/common.hpp"
#include "gaudinopers/ratfun.hpp"
#include "gaudinopers/rootdata.hpp"

namespace gop {

struct ConnectionTerm {
  Complex pole;
  Coweight residue;
};

// First-order operator d/dt + u(t) with u Cartan-valued and rational with
// simple poles; u(t) = sum residue/(t - pole) over the stored terms.
struct CartanConnection {
  GeneralizedCartanMatrix cartan;
  std::vector<ConnectionTerm> terms;
};

// Terms (z_i, -coweight_i) for the sites and (w_j, coroot_{c(j)}) for the
// roots.  The roots need not solve the equations; collisions are rejected.
CartanConnection connection_from_roots(const BetheProblem& p,
                                       const std::vector<Complex>& roots);
CartanConnection connection_from_solution(const BetheProblem& p,
                                          const BetheSolution& sol);

// Pairing <alpha_a, u(t)> as a rational function.
RatFun component(const CartanConnection& conn, int a);

// Residue of the connection at infinity in the coordinate 1/t (the change of
// chart contributes 2*rho on top of minus the sum of finite residues).
Coweight residue_at_infinity_connection(const CartanConnection& conn);

// Diagonal coordinates u_1..u_n with u_k - u_{k+1} the k-th component and,
// for the trace-free realization, zero sum.  Defined for type A.
std::vector<RatFun> epsilon_coordinates(const CartanConnection& conn);

// Scalar differential operator d^n + v_1 d^(n-2) + ... + v_{n-1} obtained by
// expanding the first-order factorization attached to the classical type:
//   A: (d+u_1)...(d+u_n)
//   C: (d+u_1)...(d+u_n)(d-u_n)...(d-u_1)
//   B: the same with a bare d factor in the middle
struct ScalarOper {
  char type = 'A';
  int order = 0;
  std::vector<RatFun> v;  // v[k-1] is the coefficient of d^(order-1-k)
  std::optional<CartanConnection> source;  // kept for local expansions
};

ScalarOper miura_scalar_oper(const CartanConnection& conn, char type);

struct CoefficientTail {
  int k;  // which coefficient v_k
  std::vector<std::pair<int, Complex>> coeffs;  // negative orders only
};

struct PointRegularity {
  Complex point;
  bool erased = false;
  double max_tail = 0.0;
  std::vector<CoefficientTail> tails;
};

// Laurent tails of every coefficient at the queried points; a point is
// "erased" when every negative-order coefficient is below tol in magnitude.
std::vector<PointRegularity> regularity_report(const ScalarOper& oper,
                                               const std::vector<Complex>& points,
                                               double tol = 1e-9);

}  // namespace gop
