#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gaudinopers/common.hpp"

namespace gop {

// Generalized Cartan matrix with the pairing convention a(i,j) = <alpha_j,
// coroot_i>: row i lists the pairings of all simple roots against coroot i.
// Simple-root indices are 1-based everywhere in the public interface.
struct GeneralizedCartanMatrix {
  Eigen::MatrixXi a;
  std::string kind;  // "A".."G" for the standard finite tables, else "general"

  int rank() const { return int(a.rows()); }
  int entry(int i, int j) const { return a(i - 1, j - 1); }
};

// Builds the standard finite-type matrix for a label like "A2", "B3", "G2".
GeneralizedCartanMatrix load_cartan(const std::string& label);
GeneralizedCartanMatrix load_cartan(char kind, int rank);

// Validates and wraps an explicit matrix; recognizes standard tables by shape.
GeneralizedCartanMatrix make_cartan(const Eigen::MatrixXi& a);

GeneralizedCartanMatrix langlands_dual(const GeneralizedCartanMatrix& A);

// Coweights are stored by their pairings with the simple roots:
// cw[a-1] = <alpha_a, cw> for a = 1..rank.
using Coweight = Eigen::VectorXd;

Coweight simple_coroot(const GeneralizedCartanMatrix& A, int i);
Coweight rho_coweight(const GeneralizedCartanMatrix& A);
Coweight zero_coweight(const GeneralizedCartanMatrix& A);

bool is_dominant(const Coweight& cw, double tol = 1e-9);
bool is_dominant_integral(const Coweight& cw, double tol = 1e-9);

// Simple reflection s_i acting on a coweight.
Coweight reflect(const GeneralizedCartanMatrix& A, int i, const Coweight& cw);

// Weyl words hold 1-based simple-root indices; acting applies the letters
// left to right (the first letter is the first reflection applied).
using WeylWord = std::vector<int>;

Coweight weyl_act(const GeneralizedCartanMatrix& A, const WeylWord& w,
                  const Coweight& cw);

struct DominantResult {
  Coweight dominant;
  WeylWord word;  // weyl_act(word, dominant) reproduces the input
};

// Repeatedly reflects at the smallest index with a negative pairing.  Throws
// NonTerminationError past `cap` reflections (possible for non-finite kinds).
DominantResult to_dominant(const GeneralizedCartanMatrix& A, const Coweight& cw,
                           int cap = 1000);

// Solves r = -y(lambda + rho) + rho for a Weyl word y, if one exists.
std::optional<WeylWord> residue_to_weyl(const GeneralizedCartanMatrix& A,
                                        const Coweight& residue,
                                        const Coweight& lambda, int cap = 1000);

}  // namespace gop
