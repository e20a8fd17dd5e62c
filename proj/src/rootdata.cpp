#include "gaudinopers/rootdata.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace gop {

namespace {

Eigen::MatrixXi chain_matrix(int n) {
  Eigen::MatrixXi a = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = 2;
    if (i + 1 < n) {
      a(i, i + 1) = -1;
      a(i + 1, i) = -1;
    }
  }
  return a;
}

Eigen::MatrixXi from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  Eigen::MatrixXi a = Eigen::MatrixXi::Identity(n, n) * 2;
  for (auto [i, j] : edges) {
    a(i - 1, j - 1) = -1;
    a(j - 1, i - 1) = -1;
  }
  return a;
}

Eigen::MatrixXi standard_table(char kind, int n) {
  switch (kind) {
    case 'A':
      if (n < 1) throw InputError("rank of A must be >= 1");
      return chain_matrix(n);
    case 'B': {
      if (n < 2) throw InputError("rank of B must be >= 2");
      Eigen::MatrixXi a = chain_matrix(n);
      a(n - 1, n - 2) = -2;
      return a;
    }
    case 'C': {
      if (n < 2) throw InputError("rank of C must be >= 2");
      Eigen::MatrixXi a = chain_matrix(n);
      a(n - 2, n - 1) = -2;
      return a;
    }
    case 'D': {
      if (n < 3) throw InputError("rank of D must be >= 3");
      std::vector<std::pair<int, int>> edges;
      for (int i = 1; i + 1 <= n - 2; ++i) edges.emplace_back(i, i + 1);
      edges.emplace_back(n - 2, n - 1);
      edges.emplace_back(n - 2, n);
      return from_edges(n, edges);
    }
    case 'E': {
      if (n < 6 || n > 8) throw InputError("rank of E must be 6, 7 or 8");
      std::vector<std::pair<int, int>> edges = {{1, 3}, {3, 4}, {4, 5}, {2, 4}};
      for (int i = 5; i < n; ++i) edges.emplace_back(i, i + 1);
      return from_edges(n, edges);
    }
    case 'F': {
      if (n != 4) throw InputError("rank of F must be 4");
      Eigen::MatrixXi a = chain_matrix(4);
      a(2, 1) = -2;
      return a;
    }
    case 'G': {
      if (n != 2) throw InputError("rank of G must be 2");
      Eigen::MatrixXi a(2, 2);
      a << 2, -1, -3, 2;
      return a;
    }
    default:
      throw InputError(std::string("unknown Cartan kind '") + kind + "'");
  }
}

void validate(const Eigen::MatrixXi& a) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw InputError("Cartan matrix must be square and nonempty");
  int n = int(a.rows());
  for (int i = 0; i < n; ++i) {
    if (a(i, i) != 2) throw InputError("Cartan matrix diagonal must be 2");
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (a(i, j) > 0) throw InputError("off-diagonal entries must be <= 0");
      if ((a(i, j) == 0) != (a(j, i) == 0))
        throw InputError("a(i,j) = 0 must imply a(j,i) = 0");
    }
  }
}

std::string recognize(const Eigen::MatrixXi& a) {
  int n = int(a.rows());
  for (char k : {'A', 'B', 'C', 'D', 'E', 'F', 'G'}) {
    Eigen::MatrixXi t;
    try {
      t = standard_table(k, n);
    } catch (const InputError&) {
      continue;
    }
    if (t == a) return std::string(1, k);
  }
  return "general";
}

}  // namespace

GeneralizedCartanMatrix load_cartan(char kind, int rank) {
  GeneralizedCartanMatrix A;
  A.a = standard_table(kind, rank);
  A.kind = std::string(1, kind);
  return A;
}

GeneralizedCartanMatrix load_cartan(const std::string& label) {
  if (label.size() < 2 || !std::isalpha(label[0]))
    throw InputError("Cartan label must look like \"A2\" or \"B3\"");
  char kind = char(std::toupper(label[0]));
  int rank = 0;
  try {
    rank = std::stoi(label.substr(1));
  } catch (const std::exception&) {
    throw InputError("bad rank in Cartan label '" + label + "'");
  }
  return load_cartan(kind, rank);
}

GeneralizedCartanMatrix make_cartan(const Eigen::MatrixXi& a) {
  validate(a);
  GeneralizedCartanMatrix A;
  A.a = a;
  A.kind = recognize(a);
  return A;
}

GeneralizedCartanMatrix langlands_dual(const GeneralizedCartanMatrix& A) {
  return make_cartan(A.a.transpose());
}

Coweight simple_coroot(const GeneralizedCartanMatrix& A, int i) {
  if (i < 1 || i > A.rank()) throw InputError("simple root index out of range");
  return A.a.row(i - 1).cast<double>().transpose();
}

Coweight rho_coweight(const GeneralizedCartanMatrix& A) {
  return Coweight::Ones(A.rank());
}

Coweight zero_coweight(const GeneralizedCartanMatrix& A) {
  return Coweight::Zero(A.rank());
}

bool is_dominant(const Coweight& cw, double tol) {
  return (cw.array() >= -tol).all();
}

bool is_dominant_integral(const Coweight& cw, double tol) {
  if (!is_dominant(cw, tol)) return false;
  for (int i = 0; i < cw.size(); ++i)
    if (std::abs(cw[i] - std::round(cw[i])) > tol) return false;
  return true;
}

Coweight reflect(const GeneralizedCartanMatrix& A, int i, const Coweight& cw) {
  if (i < 1 || i > A.rank()) throw InputError("reflection index out of range");
  if (cw.size() != A.rank()) throw InputError("coweight rank mismatch");
  return cw - cw[i - 1] * A.a.row(i - 1).cast<double>().transpose();
}

Coweight weyl_act(const GeneralizedCartanMatrix& A, const WeylWord& w,
                  const Coweight& cw) {
  Coweight out = cw;
  for (int i : w) out = reflect(A, i, out);
  return out;
}

DominantResult to_dominant(const GeneralizedCartanMatrix& A, const Coweight& cw,
                           int cap) {
  Coweight cur = cw;
  WeylWord visits;
  for (int step = 0; step < cap; ++step) {
    int neg = 0;
    for (int i = 1; i <= A.rank(); ++i) {
      if (cur[i - 1] < -1e-9) {
        neg = i;
        break;
      }
    }
    if (neg == 0) {
      std::reverse(visits.begin(), visits.end());
      return {cur, visits};
    }
    cur = reflect(A, neg, cur);
    visits.push_back(neg);
  }
  throw NonTerminationError("to_dominant did not reach the dominant chamber");
}

std::optional<WeylWord> residue_to_weyl(const GeneralizedCartanMatrix& A,
                                        const Coweight& residue,
                                        const Coweight& lambda, int cap) {
  Coweight delta = rho_coweight(A) - residue;
  DominantResult dom = to_dominant(A, delta, cap);
  Coweight target = lambda + rho_coweight(A);
  if ((dom.dominant - target).cwiseAbs().maxCoeff() > 1e-9) return std::nullopt;
  return dom.word;
}

}  // namespace gop
