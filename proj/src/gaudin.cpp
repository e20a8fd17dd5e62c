#include "gaudinopers/gaudin.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace gop {

namespace {

using Letter = std::pair<int, int>;
using MonoMap = std::map<GlMonomial, double>;

void merge(MonoMap& into, const MonoMap& add, double scale) {
  for (const auto& [m, c] : add) {
    double& slot = into[m];
    slot += scale * c;
    if (slot == 0.0) into.erase(m);
  }
}

// Normal-orders E_ab * (mono * v) on a Verma module of gl highest weight lam.
MonoMap apply_letter(int a, int b, const GlMonomial& mono,
                     const Eigen::VectorXd& lam) {
  MonoMap out;
  if (mono.empty()) {
    if (a > b) {
      out[{{a, b}}] = 1.0;
    } else if (a == b) {
      out[{}] = lam[a - 1];
    }
    return out;  // raising letters kill the highest weight vector
  }
  Letter h = mono.front();
  if (a > b && Letter{a, b} <= h) {
    GlMonomial m;
    m.reserve(mono.size() + 1);
    m.push_back({a, b});
    m.insert(m.end(), mono.begin(), mono.end());
    out[std::move(m)] = 1.0;
    return out;
  }
  GlMonomial rest(mono.begin() + 1, mono.end());
  // E_ab h = h E_ab + [E_ab, h], with [E_ab, E_cd] = d_bc E_ad - d_da E_cb.
  for (const auto& [m, c] : apply_letter(a, b, rest, lam))
    merge(out, apply_letter(h.first, h.second, m, lam), c);
  if (b == h.first) merge(out, apply_letter(a, h.second, rest, lam), 1.0);
  if (h.second == a) merge(out, apply_letter(h.first, b, rest, lam), -1.0);
  return out;
}

double cartan_eig(int k, const GlMonomial& mono, const Eigen::VectorXd& lam) {
  double v = lam[k - 1];
  for (const Letter& l : mono) {
    if (l.first == k) v += 1.0;
    if (l.second == k) v -= 1.0;
  }
  return v;
}

Eigen::VectorXd gl_lift(const Eigen::VectorXd& pairings) {
  const int n = static_cast<int>(pairings.size()) + 1;
  Eigen::VectorXd lam = Eigen::VectorXd::Zero(n);
  for (int a = n - 1; a >= 1; --a) lam[a - 1] = lam[a] + pairings[a - 1];
  return lam;
}

Eigen::VectorXi letter_content(const Letter& l, int rank) {
  Eigen::VectorXi c = Eigen::VectorXi::Zero(rank);
  for (int b = l.second; b < l.first; ++b) c[b - 1] += 1;
  return c;
}

}  // namespace

WeightBasis weight_basis(const BetheProblem& p, const Eigen::VectorXi& content,
                         int cutoff) {
  if (p.cartan.kind != "A")
    throw InputError("weight bases are implemented for type A only");
  const int rank = p.cartan.rank();
  const int n = rank + 1;
  if (content.size() != rank) throw InputError("content has the wrong rank");
  if (content.minCoeff() < 0) throw InputError("content must be nonnegative");
  if (content.sum() > cutoff)
    throw CapExceededError("weight space cutoff exceeded");

  WeightBasis basis;
  basis.n = n;
  basis.problem = p;
  basis.content = content;
  for (const BetheSite& s : p.sites)
    basis.gl_weights.push_back(gl_lift(s.coweight));

  std::vector<Letter> letters;
  std::vector<Eigen::VectorXi> lcontent;
  for (int a = 2; a <= n; ++a)
    for (int b = 1; b < a; ++b) {
      letters.push_back({a, b});
      lcontent.push_back(letter_content({a, b}, rank));
    }

  const int nsites = static_cast<int>(p.sites.size());
  if (nsites == 0) throw InputError("at least one site is required");

  // Multisets over the letters, nondecreasing by construction.
  std::vector<GlMonomial> monos;
  std::vector<Eigen::VectorXi> monoContent;
  {
    GlMonomial cur;
    Eigen::VectorXi used = Eigen::VectorXi::Zero(rank);
    std::function<void(size_t)> rec = [&](size_t idx) {
      if (idx == letters.size()) {
        monos.push_back(cur);
        monoContent.push_back(used);
        return;
      }
      rec(idx + 1);
      int added = 0;
      while (true) {
        used += lcontent[idx];
        ++added;
        if ((content - used).minCoeff() < 0) break;
        for (int k = 0; k < added; ++k) cur.push_back(letters[idx]);
        rec(idx + 1);
        for (int k = 0; k < added; ++k) cur.pop_back();
      }
      used -= added * lcontent[idx];
    };
    rec(0);
  }

  TensorKey key(nsites);
  Eigen::VectorXi remaining = content;
  std::function<void(int)> place = [&](int site) {
    if (site == nsites) {
      if (remaining.sum() == 0) basis.keys.push_back(key);
      return;
    }
    for (size_t m = 0; m < monos.size(); ++m) {
      if ((remaining - monoContent[m]).minCoeff() < 0) continue;
      key[site] = monos[m];
      remaining -= monoContent[m];
      place(site + 1);
      remaining += monoContent[m];
    }
    key[site].clear();
  };
  place(0);

  std::sort(basis.keys.begin(), basis.keys.end());
  for (size_t k = 0; k < basis.keys.size(); ++k)
    basis.index[basis.keys[k]] = static_cast<int>(k);
  return basis;
}

WeightBasis weight_basis(const BetheProblem& p, int cutoff) {
  Eigen::VectorXi content = Eigen::VectorXi::Zero(p.cartan.rank());
  for (int c : p.colors) content[c - 1] += 1;
  return weight_basis(p, content, cutoff);
}

std::map<TensorKey, double> act(const WeightBasis& basis, int a, int b,
                                int site, const TensorKey& key) {
  MonoMap local = apply_letter(a, b, key[site], basis.gl_weights[site]);
  std::map<TensorKey, double> out;
  for (const auto& [m, c] : local) {
    TensorKey k = key;
    k[site] = m;
    out[std::move(k)] = c;
  }
  return out;
}

Eigen::SparseMatrix<Complex> gaudin_hamiltonian(const WeightBasis& basis,
                                                int i) {
  const int n = basis.n;
  const int nsites = static_cast<int>(basis.problem.sites.size());
  if (i < 0 || i >= nsites) throw InputError("site index out of range");

  // Inverse Gram matrix of the simple coroot generators h_k.
  Eigen::MatrixXd gram =
      load_cartan('A', n - 1).a.cast<double>();
  Eigen::MatrixXd ginv = gram.inverse();

  std::vector<Eigen::Triplet<Complex>> trips;
  for (int col = 0; col < basis.dim(); ++col) {
    const TensorKey& key = basis.keys[col];
    std::map<TensorKey, Complex> acc;
    for (int j = 0; j < nsites; ++j) {
      if (j == i) continue;
      Complex pref =
          1.0 / (basis.problem.sites[i].z - basis.problem.sites[j].z);
      for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b) {
          if (a == b) continue;
          for (const auto& [k1, c1] : act(basis, b, a, j, key))
            for (const auto& [k2, c2] : act(basis, a, b, i, k1))
              acc[k2] += pref * c1 * c2;
        }
      double cart = 0.0;
      for (int k = 1; k < n; ++k)
        for (int l = 1; l < n; ++l) {
          double hk = cartan_eig(k, key[i], basis.gl_weights[i]) -
                      cartan_eig(k + 1, key[i], basis.gl_weights[i]);
          double hl = cartan_eig(l, key[j], basis.gl_weights[j]) -
                      cartan_eig(l + 1, key[j], basis.gl_weights[j]);
          cart += ginv(k - 1, l - 1) * hk * hl;
        }
      acc[key] += pref * cart;
    }
    for (const auto& [k, c] : acc) {
      auto it = basis.index.find(k);
      if (it == basis.index.end())
        throw Error("hamiltonian left the weight space");
      if (c != Complex(0.0)) trips.emplace_back(it->second, col, c);
    }
  }
  Eigen::SparseMatrix<Complex> H(basis.dim(), basis.dim());
  H.setFromTriplets(trips.begin(), trips.end());
  return H;
}

Eigen::VectorXcd bethe_vector(const WeightBasis& basis,
                              const std::vector<Complex>& roots) {
  const auto& p = basis.problem;
  const int nsites = static_cast<int>(p.sites.size());
  const int m = static_cast<int>(roots.size());
  if (roots.size() != p.colors.size())
    throw InputError("root list does not match the color list");
  Eigen::VectorXi content = Eigen::VectorXi::Zero(p.cartan.rank());
  for (int c : p.colors) content[c - 1] += 1;
  if (content != basis.content)
    throw InputError("roots do not match the basis content");

  Eigen::VectorXcd vec = Eigen::VectorXcd::Zero(basis.dim());

  std::vector<int> assign(m, 0);
  while (true) {
    // ordered blocks per site, iterated through all per-block permutations
    std::vector<std::vector<std::vector<int>>> perms(nsites);
    for (int j = 0; j < nsites; ++j) {
      std::vector<int> block;
      for (int k = 0; k < m; ++k)
        if (assign[k] == j) block.push_back(k);
      std::sort(block.begin(), block.end());
      do {
        perms[j].push_back(block);
      } while (std::next_permutation(block.begin(), block.end()));
    }

    std::vector<size_t> pick(nsites, 0);
    while (true) {
      Complex coeff = 1.0;
      std::map<TensorKey, Complex> total;
      bool first = true;
      for (int j = 0; j < nsites && coeff != Complex(0.0); ++j) {
        const std::vector<int>& ord = perms[j][pick[j]];
        for (size_t t = 0; t + 1 < ord.size(); ++t)
          coeff /= roots[ord[t]] - roots[ord[t + 1]];
        if (!ord.empty()) coeff /= roots[ord.back()] - p.sites[j].z;
        // monomial map for F_{c(ord_1)} ... F_{c(ord_a)} v, rightmost first
        MonoMap cur;
        cur[{}] = 1.0;
        for (int t = static_cast<int>(ord.size()) - 1; t >= 0; --t) {
          MonoMap next;
          int color = p.colors[ord[t]];
          for (const auto& [mono, c] : cur)
            merge(next, apply_letter(color + 1, color, mono,
                                     basis.gl_weights[j]),
                  c);
          cur = std::move(next);
        }
        if (first) {
          for (const auto& [mono, c] : cur) {
            TensorKey k(nsites);
            k[j] = mono;
            total[k] = c;
          }
          first = false;
        } else {
          std::map<TensorKey, Complex> next;
          for (const auto& [k, c0] : total)
            for (const auto& [mono, c] : cur) {
              TensorKey k2 = k;
              k2[j] = mono;
              next[k2] += c0 * c;
            }
          total = std::move(next);
        }
      }
      for (const auto& [k, c] : total) {
        auto it = basis.index.find(k);
        if (it == basis.index.end()) throw Error("key outside the basis");
        vec[it->second] += coeff * c;
      }
      int j = nsites - 1;
      while (j >= 0 && ++pick[j] == perms[j].size()) pick[j--] = 0;
      if (j < 0) break;
    }

    int k = m - 1;
    while (k >= 0 && ++assign[k] == nsites) assign[k--] = 0;
    if (k < 0) break;
  }
  return vec;
}

EigenCheck eigencheck(const Eigen::SparseMatrix<Complex>& H,
                      const Eigen::VectorXcd& v) {
  double nv = v.norm();
  if (nv == 0.0) throw InputError("cannot eigencheck the zero vector");
  Eigen::VectorXcd hv = H * v;
  Complex value = v.dot(hv) / (nv * nv);
  double residual = (hv - value * v).norm() / nv;
  return {value, residual};
}

double casimir_scalar(int n, const Eigen::VectorXd& weight) {
  if (weight.size() != n - 1) throw InputError("weight has the wrong rank");
  Eigen::MatrixXd A = load_cartan('A', n - 1).a.cast<double>();
  Eigen::VectorXd x = A.fullPivLu().solve(weight);
  Eigen::VectorXd shifted = weight + 2.0 * Eigen::VectorXd::Ones(n - 1);
  return 0.5 * x.dot(shifted);
}

double commutator_norm(const Eigen::SparseMatrix<Complex>& A,
                       const Eigen::SparseMatrix<Complex>& B) {
  Eigen::SparseMatrix<Complex> C = A * B - B * A;
  return C.norm();
}

OperMatch eigenvalue_vs_oper(const BetheProblem& p,
                             const std::vector<Complex>& roots, int n_samples,
                             int cutoff) {
  const int n = p.cartan.rank() + 1;
  WeightBasis basis = weight_basis(p, cutoff);
  Eigen::VectorXcd v = bethe_vector(basis, roots);
  if (v.norm() == 0.0) throw Error("the weighted vector vanished");

  OperMatch out;
  for (size_t i = 0; i < p.sites.size(); ++i) {
    Eigen::SparseMatrix<Complex> H =
        gaudin_hamiltonian(basis, static_cast<int>(i));
    out.hamiltonians.push_back(eigencheck(H, v));
    out.casimirs.push_back(casimir_scalar(n, p.sites[i].coweight));
  }

  CartanConnection conn = connection_from_roots(p, roots);
  ScalarOper oper = miura_scalar_oper(conn, 'A');
  const RatFun& v1 = oper.v[0];

  // One-site reference fixes the proportionality between the second-symbol
  // coefficient and the quadratic eigenvalue function.
  {
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(n - 1);
    e1[0] = 1.0;
    BetheProblem ref = make_problem(p.cartan, {{Complex(0.0), e1}}, {});
    CartanConnection rconn = connection_from_roots(ref, {});
    ScalarOper roper = miura_scalar_oper(rconn, 'A');
    Complex C = eval(roper.v[0], Complex(1.0));
    if (std::abs(C) < 1e-14)
      throw Error("reference coefficient vanished; cannot calibrate");
    out.kappa = casimir_scalar(n, e1) / C;
  }

  double R = 2.0;
  for (const BetheSite& s : p.sites) R = std::max(R, 2.0 + std::abs(s.z));
  for (Complex w : roots) R = std::max(R, 2.0 + std::abs(w));
  for (int s = 0; s < n_samples; ++s) {
    double angle = 2.0 * M_PI * (s + 0.37) / n_samples;
    Complex u = R * Complex(std::cos(angle), std::sin(angle));
    Complex quad = 0.0;
    for (size_t i = 0; i < p.sites.size(); ++i) {
      Complex d = u - p.sites[i].z;
      quad += out.hamiltonians[i].value / d + out.casimirs[i] / (d * d);
    }
    Complex oval = out.kappa * eval(v1, u);
    out.samples.push_back({u, quad, oval});
    out.max_dev = std::max(out.max_dev, std::abs(quad - oval));
  }
  return out;
}

}  // namespace gop
