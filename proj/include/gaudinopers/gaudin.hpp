#pragma once

#include <map>
#include <utility>
#include <vector>

#include <Eigen/Sparse>

#include "gaudinopers/bethe.hpp"
#include "gaudinopers/common.hpp"
#include "gaudinopers/miura.hpp"

namespace gop {

// PBW monomial in the lowering generators E_ab (a > b) of gl_n, stored as a
// nondecreasing list of (a, b) letters under lexicographic order.
using GlMonomial = std::vector<std::pair<int, int>>;
// One monomial per tensor factor.
using TensorKey = std::vector<GlMonomial>;

struct WeightBasis {
  int n = 0;               // matrices act on sl_n data (type A, rank n-1)
  BetheProblem problem;    // sites and Cartan matrix of the underlying model
  std::vector<Eigen::VectorXd> gl_weights;  // per-site lift, size n each
  Eigen::VectorXi content;                  // lowering steps per simple root
  std::vector<TensorKey> keys;
  std::map<TensorKey, int> index;

  int dim() const { return static_cast<int>(keys.size()); }
};

// PBW basis of the weight space of the tensor product of Verma modules at
// highest weight minus the given simple-root content.  Requires type A.
WeightBasis weight_basis(const BetheProblem& p, const Eigen::VectorXi& content,
                         int cutoff = 8);
// Content read off from p.colors.
WeightBasis weight_basis(const BetheProblem& p, int cutoff = 8);

// E_ab acting on tensor factor `site` (0-based) of a key, normal-ordered.
std::map<TensorKey, double> act(const WeightBasis& basis, int a, int b,
                                int site, const TensorKey& key);

// sum_{j != i} (sum_{a != b} E_ab^(i) E_ba^(j) + Cartan part) / (z_i - z_j),
// with the Cartan part paired through the inverse Gram matrix of the h_k.
// Site indices are 0-based here and in act().
Eigen::SparseMatrix<Complex> gaudin_hamiltonian(const WeightBasis& basis,
                                                int i);

// Weighted sum over ordered set partitions of the roots into the tensor
// factors, with telescoping difference denominators ending at the site point.
Eigen::VectorXcd bethe_vector(const WeightBasis& basis,
                              const std::vector<Complex>& roots);

struct EigenCheck {
  Complex value;
  double residual;  // ||Hv - value*v|| / ||v||
};
EigenCheck eigencheck(const Eigen::SparseMatrix<Complex>& H,
                      const Eigen::VectorXcd& v);

// (lambda, lambda + 2 rho)/2 for an sl_n weight given by its pairings.
double casimir_scalar(int n, const Eigen::VectorXd& weight);

double commutator_norm(const Eigen::SparseMatrix<Complex>& A,
                       const Eigen::SparseMatrix<Complex>& B);

struct OperSample {
  Complex u;
  Complex quadratic;  // sum_i value_i/(u - z_i) + sum_i casimir_i/(u - z_i)^2
  Complex oper;       // second-symbol coefficient of the scalar operator
};

struct OperMatch {
  Complex kappa;  // proportionality fixed once on a one-site reference
  double max_dev = 0.0;
  std::vector<OperSample> samples;
  std::vector<EigenCheck> hamiltonians;  // per site, on the supplied vector
  std::vector<double> casimirs;
};

// Compares the quadratic eigenvalue function of a candidate eigenvector
// against the corresponding coefficient of the scalar operator built from the
// same roots, at off-pole sample points.
OperMatch eigenvalue_vs_oper(const BetheProblem& p,
                             const std::vector<Complex>& roots,
                             int n_samples = 7, int cutoff = 8);

}  // namespace gop
