#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "gaudinopers/common.hpp"
#include "gaudinopers/rootdata.hpp"

namespace gop {

struct BetheSite {
  Complex z;
  Coweight coweight;  // dominant integral, stored by simple-root pairings
};

struct BetheProblem {
  GeneralizedCartanMatrix cartan;
  std::vector<BetheSite> sites;
  std::vector<int> colors;  // 1-based simple-root color of each sought root
  double coll_tol = 0.0;    // 0 derives the guard from the site geometry
};

BetheProblem make_problem(GeneralizedCartanMatrix cartan,
                          std::vector<BetheSite> sites, std::vector<int> colors,
                          double coll_tol = 0.0);

// Effective collision guard distance for the problem.
double collision_guard(const BetheProblem& p);
bool collides(const BetheProblem& p, const std::vector<Complex>& roots);
void check_collisions(const BetheProblem& p, const std::vector<Complex>& roots);

// Equation j: sum_i <alpha_{c(j)}, coweight_i>/(w_j - z_i)
//           - sum_{s != j} <alpha_{c(j)}, coroot_{c(s)}>/(w_j - w_s).
Eigen::VectorXcd residual(const BetheProblem& p,
                          const std::vector<Complex>& roots);
double residual_norm(const BetheProblem& p, const std::vector<Complex>& roots);
Eigen::MatrixXcd jacobian(const BetheProblem& p,
                          const std::vector<Complex>& roots);

struct NewtonOptions {
  double tol = 1e-12;
  int max_iter = 60;
  double damping = 1.0;  // initial step fraction, halved until progress
};

struct BetheSolution {
  std::vector<Complex> roots;
  double residual = 0.0;
  int iterations = 0;
  int jacobian_rank = 0;
  bool isolated = true;  // false when the Jacobian is rank deficient there
};

BetheSolution newton_solve(const BetheProblem& p,
                           const std::vector<Complex>& start,
                           const NewtonOptions& opts = {});

struct MultiStartOptions {
  int starts = 64;
  std::uint64_t seed = 1;
  double dedup_tol = 1e-8;
  double radius = 0.0;  // 0 derives a disc from the site geometry
  NewtonOptions newton;
};

struct MultiStartResult {
  std::vector<BetheSolution> solutions;
  int failed_starts = 0;
};

MultiStartResult multi_start_solve(const BetheProblem& p,
                                   const MultiStartOptions& opts = {});

// Roots agree as colored multisets within tol.
bool same_solution(const BetheProblem& p, const std::vector<Complex>& a,
                   const std::vector<Complex>& b, double tol);

// Coweight at infinity of a solution with the problem's color multiset:
// sum of site coweights minus sum of the colored simple coroots.
Coweight residue_at_infinity(const BetheProblem& p);

struct CellClassification {
  Coweight mu_infinity;
  Coweight lambda_infinity;  // dominant integral
  WeylWord word;             // weyl_act(word, lambda_infinity + rho) = mu + rho
};

// Places the color multiset in its Schubert cell.  Throws
// InconsistentResidueError when a pairing of mu_infinity is -1 (impossible
// for genuine solutions) or fails to be integral.
CellClassification classify_cell(const BetheProblem& p, int cap = 1000);

}  // namespace gop
