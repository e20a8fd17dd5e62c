#include "gaudinopers/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace gop {

BetheProblem make_problem(GeneralizedCartanMatrix cartan,
                          std::vector<BetheSite> sites, std::vector<int> colors,
                          double coll_tol) {
  BetheProblem p{std::move(cartan), std::move(sites), std::move(colors),
                 coll_tol};
  for (const auto& s : p.sites) {
    if (s.coweight.size() != p.cartan.rank())
      throw InputError("site coweight rank mismatch");
    if (!is_dominant_integral(s.coweight))
      throw InputError("site coweights must be dominant integral");
  }
  for (int c : p.colors)
    if (c < 1 || c > p.cartan.rank())
      throw InputError("root color out of range");
  for (size_t i = 0; i < p.sites.size(); ++i)
    for (size_t j = i + 1; j < p.sites.size(); ++j)
      if (p.sites[i].z == p.sites[j].z)
        throw InputError("coincident evaluation points");
  if (p.coll_tol < 0.0) throw InputError("negative collision tolerance");
  return p;
}

double collision_guard(const BetheProblem& p) {
  if (p.coll_tol > 0.0) return p.coll_tol;
  double diam = 0.0;
  for (size_t i = 0; i < p.sites.size(); ++i)
    for (size_t j = i + 1; j < p.sites.size(); ++j)
      diam = std::max(diam, std::abs(p.sites[i].z - p.sites[j].z));
  return 1e-6 * std::max(diam, 1.0);
}

bool collides(const BetheProblem& p, const std::vector<Complex>& roots) {
  double eps = collision_guard(p);
  for (size_t j = 0; j < roots.size(); ++j) {
    for (const auto& s : p.sites)
      if (std::abs(roots[j] - s.z) < eps) return true;
    for (size_t k = j + 1; k < roots.size(); ++k)
      if (std::abs(roots[j] - roots[k]) < eps) return true;
  }
  return false;
}

void check_collisions(const BetheProblem& p,
                      const std::vector<Complex>& roots) {
  double eps = collision_guard(p);
  for (size_t j = 0; j < roots.size(); ++j) {
    for (const auto& s : p.sites)
      if (std::abs(roots[j] - s.z) < eps)
        throw CollisionError("root collides with an evaluation point",
                             roots[j], s.z);
    for (size_t k = j + 1; k < roots.size(); ++k)
      if (std::abs(roots[j] - roots[k]) < eps)
        throw CollisionError("two roots collide", roots[j], roots[k]);
  }
}

namespace {

void check_arity(const BetheProblem& p, const std::vector<Complex>& roots) {
  if (roots.size() != p.colors.size())
    throw InputError("root count does not match the color list");
}

}  // namespace

Eigen::VectorXcd residual(const BetheProblem& p,
                          const std::vector<Complex>& roots) {
  check_arity(p, roots);
  int m = int(roots.size());
  Eigen::VectorXcd r(m);
  for (int j = 0; j < m; ++j) {
    int cj = p.colors[j];
    Complex acc = 0.0;
    for (const auto& s : p.sites)
      acc += s.coweight[cj - 1] / (roots[j] - s.z);
    for (int k = 0; k < m; ++k) {
      if (k == j) continue;
      acc -= double(p.cartan.entry(p.colors[k], cj)) / (roots[j] - roots[k]);
    }
    r(j) = acc;
  }
  return r;
}

double residual_norm(const BetheProblem& p, const std::vector<Complex>& roots) {
  Eigen::VectorXcd r = residual(p, roots);
  return r.size() == 0 ? 0.0 : r.cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd jacobian(const BetheProblem& p,
                          const std::vector<Complex>& roots) {
  check_arity(p, roots);
  int m = int(roots.size());
  Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    int cj = p.colors[j];
    Complex diag = 0.0;
    for (const auto& s : p.sites) {
      Complex d = roots[j] - s.z;
      diag -= s.coweight[cj - 1] / (d * d);
    }
    for (int k = 0; k < m; ++k) {
      if (k == j) continue;
      Complex d = roots[j] - roots[k];
      double a = double(p.cartan.entry(p.colors[k], cj));
      diag += a / (d * d);
      J(j, k) = -a / (d * d);
    }
    J(j, j) = diag;
  }
  return J;
}

namespace {

int numerical_rank(const Eigen::MatrixXcd& J) {
  if (J.rows() == 0) return 0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(J);
  qr.setThreshold(1e-8);
  return int(qr.rank());
}

}  // namespace

BetheSolution newton_solve(const BetheProblem& p,
                           const std::vector<Complex>& start,
                           const NewtonOptions& opts) {
  check_arity(p, start);
  int m = int(start.size());
  if (m == 0) return {{}, 0.0, 0, 0, true};
  check_collisions(p, start);

  // Residuals decay like 1/w along escaping trajectories, so a plain
  // residual test would accept iterates wandering off to infinity.
  double zscale = 1.0;
  for (const BetheSite& s : p.sites) zscale = std::max(zscale, std::abs(s.z));
  const double escape = 1e4 * zscale;
  auto escaped = [&](const std::vector<Complex>& v) {
    for (Complex x : v)
      if (std::abs(x) > escape) return true;
    return false;
  };
  if (escaped(start))
    throw DivergenceError("start lies outside the admissible disc",
                          std::vector<Complex>(start), 0.0);

  std::vector<Complex> w = start;
  Eigen::VectorXcd r = residual(p, w);
  double rn = r.cwiseAbs().maxCoeff();
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    if (rn < opts.tol) {
      Eigen::MatrixXcd J = jacobian(p, w);
      int rank = numerical_rank(J);
      return {w, rn, iter, rank, rank == m};
    }
    Eigen::MatrixXcd J = jacobian(p, w);
    if (!J.allFinite())
      throw LinearSolveError("non-finite Jacobian entries");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(J);
    qr.setThreshold(1e-12);
    if (qr.rank() == 0)
      throw LinearSolveError("Jacobian is numerically zero");
    Eigen::VectorXcd step = qr.solve(-r);
    double alpha = opts.damping;
    bool accepted = false;
    for (; alpha > 1.0 / 1024.0; alpha *= 0.5) {
      std::vector<Complex> wn = w;
      for (int i = 0; i < m; ++i) wn[i] += alpha * step(i);
      if (collides(p, wn) || escaped(wn)) continue;
      Eigen::VectorXcd rnew = residual(p, wn);
      double nn = rnew.cwiseAbs().maxCoeff();
      if (nn < rn || nn < opts.tol) {
        w = std::move(wn);
        r = std::move(rnew);
        rn = nn;
        accepted = true;
        break;
      }
    }
    if (!accepted)
      throw DivergenceError("step damping failed to reduce the residual", w,
                            rn);
  }
  if (rn < opts.tol) {
    Eigen::MatrixXcd J = jacobian(p, w);
    int rank = numerical_rank(J);
    return {w, rn, opts.max_iter, rank, rank == m};
  }
  throw DivergenceError("iteration cap reached before convergence", w, rn);
}

// Matches two root lists color class by color class; the roots inside one
// class are unordered.
bool same_solution(const BetheProblem& p, const std::vector<Complex>& a,
                   const std::vector<Complex>& b, double tol) {
  std::map<int, std::vector<Complex>> ga, gb;
  for (size_t i = 0; i < a.size(); ++i) {
    ga[p.colors[i]].push_back(a[i]);
    gb[p.colors[i]].push_back(b[i]);
  }
  for (auto& [color, va] : ga) {
    std::vector<Complex>& vb = gb[color];
    std::vector<bool> used(vb.size(), false);
    for (Complex x : va) {
      bool found = false;
      for (size_t k = 0; k < vb.size(); ++k) {
        if (!used[k] && std::abs(x - vb[k]) < tol) {
          used[k] = true;
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
  }
  return true;
}

MultiStartResult multi_start_solve(const BetheProblem& p,
                                   const MultiStartOptions& opts) {
  MultiStartResult out;
  int m = int(p.colors.size());
  if (m == 0) {
    out.solutions.push_back({{}, 0.0, 0, 0, true});
    return out;
  }
  Complex centroid = 0.0;
  for (const auto& s : p.sites) centroid += s.z;
  if (!p.sites.empty()) centroid /= double(p.sites.size());
  double diam = 0.0;
  for (size_t i = 0; i < p.sites.size(); ++i)
    for (size_t j = i + 1; j < p.sites.size(); ++j)
      diam = std::max(diam, std::abs(p.sites[i].z - p.sites[j].z));
  double radius = opts.radius > 0.0 ? opts.radius : 1.5 * std::max(diam, 1.0);

  // Far iterates repel (the step doubles outward where the residual decays
  // like 1/w), so most starts are drawn near the sites and along segments
  // between them; a minority still samples the enclosing disc.
  const int nsites = int(p.sites.size());
  double local = 0.2 * std::max(diam, 1.0);
  Rng rng(opts.seed);
  for (int s = 0; s < opts.starts; ++s) {
    std::vector<Complex> start(m);
    bool ok = false;
    for (int attempt = 0; attempt < 64 && !ok; ++attempt) {
      for (int i = 0; i < m; ++i) {
        if (nsites == 0 || s % 4 == 3) {
          start[i] = rng.in_disc(centroid, radius);
        } else {
          Complex za = p.sites[size_t(rng.uniform() * nsites) % nsites].z;
          Complex zb = p.sites[size_t(rng.uniform() * nsites) % nsites].z;
          double t = rng.uniform();
          start[i] = za + t * (zb - za) + rng.in_disc(0.0, local);
        }
      }
      ok = !collides(p, start);
    }
    if (!ok) {
      ++out.failed_starts;
      continue;
    }
    try {
      BetheSolution sol = newton_solve(p, start, opts.newton);
      bool dup = false;
      for (const auto& seen : out.solutions)
        if (same_solution(p, sol.roots, seen.roots, opts.dedup_tol)) {
          dup = true;
          break;
        }
      if (!dup) out.solutions.push_back(std::move(sol));
    } catch (const Error&) {
      ++out.failed_starts;
    }
  }
  std::sort(out.solutions.begin(), out.solutions.end(),
            [](const BetheSolution& a, const BetheSolution& b) {
              for (size_t i = 0; i < a.roots.size(); ++i) {
                if (a.roots[i].real() != b.roots[i].real())
                  return a.roots[i].real() < b.roots[i].real();
                if (a.roots[i].imag() != b.roots[i].imag())
                  return a.roots[i].imag() < b.roots[i].imag();
              }
              return false;
            });
  return out;
}

Coweight residue_at_infinity(const BetheProblem& p) {
  Coweight mu = zero_coweight(p.cartan);
  for (const auto& s : p.sites) mu += s.coweight;
  for (int c : p.colors) mu -= simple_coroot(p.cartan, c);
  return mu;
}

CellClassification classify_cell(const BetheProblem& p, int cap) {
  Coweight mu = residue_at_infinity(p);
  for (int i = 0; i < mu.size(); ++i) {
    double r = std::round(mu[i]);
    if (std::abs(mu[i] - r) > 1e-9)
      throw InconsistentResidueError("pairing at infinity is not integral");
    if (r == -1.0)
      throw InconsistentResidueError(
          "pairing at infinity equals -1; no Schubert cell fits");
  }
  Coweight rho = rho_coweight(p.cartan);
  DominantResult dom = to_dominant(p.cartan, mu + rho, cap);
  Coweight lambda_inf = dom.dominant - rho;
  if (!is_dominant_integral(lambda_inf))
    throw InconsistentResidueError(
        "shifted orbit is degenerate; no dominant weight at infinity");
  return {mu, lambda_inf, dom.word};
}

}  // namespace gop
