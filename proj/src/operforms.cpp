#include "gaudinopers/operforms.hpp"

#include <cmath>

namespace gop {

RatMat RatMat::identity(int size) {
  RatMat g(size);
  for (int i = 0; i < size; ++i) g.at(i, i) = RatFun::constant(1.0);
  return g;
}

static void check_same_size(const RatMat& a, const RatMat& b) {
  if (a.n != b.n) throw InputError("matrix size mismatch");
}

RatMat operator+(const RatMat& a, const RatMat& b) {
  check_same_size(a, b);
  RatMat r(a.n);
  for (size_t k = 0; k < r.e.size(); ++k) r.e[k] = a.e[k] + b.e[k];
  return r;
}

RatMat operator-(const RatMat& a, const RatMat& b) {
  check_same_size(a, b);
  RatMat r(a.n);
  for (size_t k = 0; k < r.e.size(); ++k) r.e[k] = a.e[k] - b.e[k];
  return r;
}

RatMat operator*(const RatMat& a, const RatMat& b) {
  check_same_size(a, b);
  RatMat r(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) {
      RatFun acc;
      for (int k = 0; k < a.n; ++k) acc = acc + a.at(i, k) * b.at(k, j);
      r.at(i, j) = acc;
    }
  return r;
}

RatMat mat_derivative(const RatMat& a) {
  RatMat r(a.n);
  for (size_t k = 0; k < r.e.size(); ++k) r.e[k] = derivative(a.e[k]);
  return r;
}

Eigen::MatrixXcd eval(const RatMat& a, Complex x) {
  Eigen::MatrixXcd m(a.n, a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) m(i, j) = eval(a.at(i, j), x);
  return m;
}

static RatMat mat_normalize(const RatMat& a, double tol = 1e-7) {
  RatMat r(a.n);
  for (size_t k = 0; k < r.e.size(); ++k) r.e[k] = rat_normalize(a.e[k], tol);
  return r;
}

static bool rat_is_one(const RatFun& f) {
  Poly d = trim(f.num - f.den);
  double scale = f.num.c.cwiseAbs().maxCoeff() + f.den.c.cwiseAbs().maxCoeff();
  return d.is_zero() || d.c.cwiseAbs().maxCoeff() < 1e-12 * scale;
}

RatMat unipotent_inverse(const RatMat& g) {
  const int n = g.n;
  for (int i = 0; i < n; ++i) {
    if (!rat_is_one(g.at(i, i)))
      throw InputError("matrix is not unipotent upper-triangular");
    for (int j = 0; j < i; ++j)
      if (!g.at(i, j).is_zero())
        throw InputError("matrix is not unipotent upper-triangular");
  }
  RatMat x(n);  // strictly upper part
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) x.at(i, j) = g.at(i, j);
  RatMat inv = RatMat::identity(n);
  RatMat pw = RatMat::identity(n);
  for (int k = 1; k < n; ++k) {
    pw = pw * x;
    Complex sign = (k % 2 == 0) ? 1.0 : -1.0;
    for (size_t t = 0; t < pw.e.size(); ++t)
      inv.e[t] = inv.e[t] + sign * pw.e[t];
  }
  return inv;
}

MatrixOper gauge_transform(const MatrixOper& M, const RatMat& g) {
  check_same_size(M, g);
  RatMat ginv = unipotent_inverse(g);
  RatMat out = g * M * ginv - mat_derivative(g) * ginv;
  return mat_normalize(out);
}

static void check_oper_shape(const MatrixOper& M) {
  for (int i = 0; i < M.n; ++i)
    for (int j = 0; j < i; ++j) {
      const RatFun& f = M.at(i, j);
      if (j == i - 1) {
        Poly s = trim(f.num + f.den);
        if (!(s.is_zero() ||
              s.c.cwiseAbs().maxCoeff() < 1e-9 * f.den.c.cwiseAbs().maxCoeff()))
          throw InputError("subdiagonal entries must equal -1");
      } else if (!f.is_zero()) {
        throw InputError("entries below the subdiagonal must vanish");
      }
    }
}

namespace {

// During the reduction every entry is kept as n / D^k over one shared
// denominator D.  Multiplying raw RatFun denominators instead compounds
// them geometrically with each gauge step, and the repeated-root piles
// that creates can neither be evaluated nor re-reduced reliably.
struct ShEnt {
  Poly n;
  int k = 0;
};

struct PoleCluster {
  Complex z;
  int mult = 0;
};

std::vector<PoleCluster> cluster_points(const std::vector<Complex>& pts,
                                        double tol) {
  std::vector<PoleCluster> out;
  for (Complex p : pts) {
    bool hit = false;
    for (PoleCluster& c : out)
      if (std::abs(c.z - p) <= tol) {
        ++c.mult;
        hit = true;
        break;
      }
    if (!hit) out.push_back({p, 1});
  }
  return out;
}

struct SharedDen {
  Poly D, Dp;
  int n = 0;
  std::vector<ShEnt> e;

  ShEnt& at(int i, int j) { return e[i * n + j]; }
  const ShEnt& at(int i, int j) const { return e[i * n + j]; }

  Poly lifted(const ShEnt& a, int k) const {
    Poly p = a.n;
    for (int i = a.k; i < k; ++i) p = p * D;
    return p;
  }
  ShEnt add(const ShEnt& a, const ShEnt& b) const {
    int k = std::max(a.k, b.k);
    Poly s = trim(lifted(a, k) + lifted(b, k), 1e-14);
    return s.is_zero() ? ShEnt{} : ShEnt{std::move(s), k};
  }
  ShEnt sub(const ShEnt& a, const ShEnt& b) const {
    return add(a, {Complex(-1.0) * b.n, b.k});
  }
  static ShEnt mul(const ShEnt& a, const ShEnt& b) {
    if (a.n.is_zero() || b.n.is_zero()) return {};
    return {a.n * b.n, a.k + b.k};
  }
  ShEnt deriv(const ShEnt& a) const {
    if (a.n.is_zero()) return {};
    Poly p = derivative(a.n) * D - Complex(double(a.k)) * (a.n * Dp);
    return {trim(p, 1e-14), a.k + 1};
  }
  RatFun to_rat(const ShEnt& a) const {
    if (a.n.is_zero()) return RatFun();
    return RatFun(a.n, poly_pow(D, a.k));
  }

  std::vector<ShEnt> matmul(const std::vector<ShEnt>& a,
                            const std::vector<ShEnt>& b) const {
    std::vector<ShEnt> r(n * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        ShEnt acc;
        for (int k = 0; k < n; ++k)
          acc = add(acc, mul(a[i * n + k], b[k * n + j]));
        r[i * n + j] = acc;
      }
    return r;
  }
  std::vector<ShEnt> ident() const {
    std::vector<ShEnt> r(n * n);
    for (int i = 0; i < n; ++i) r[i * n + i] = {Poly::constant(1.0), 0};
    return r;
  }
};

}  // namespace

CanonicalOper canonical_form(const MatrixOper& M) {
  check_oper_shape(M);
  const int n = M.n;
  const double pole_tol = 1e-8;

  // Collect the poles of all entries (expected simple and separated) and
  // set up the shared-denominator view.
  SharedDen sd;
  sd.n = n;
  sd.e.resize(n * n);
  std::vector<RatFun> nf(M.e.size());
  std::vector<std::vector<PoleCluster>> entry_poles(M.e.size());
  std::vector<PoleCluster> master;
  for (size_t t = 0; t < M.e.size(); ++t) {
    if (M.e[t].is_zero()) continue;
    nf[t] = rat_normalize(M.e[t]);
    entry_poles[t] = cluster_points(poly_roots(nf[t].den), pole_tol);
    for (const PoleCluster& c : entry_poles[t]) {
      bool hit = false;
      for (PoleCluster& m : master)
        if (std::abs(m.z - c.z) <= pole_tol) {
          m.mult = std::max(m.mult, c.mult);
          hit = true;
          break;
        }
      if (!hit) master.push_back(c);
    }
  }
  std::vector<Complex> droots;
  for (const PoleCluster& m : master)
    for (int i = 0; i < m.mult; ++i) droots.push_back(m.z);
  sd.D = poly_from_roots(1.0, droots);
  sd.Dp = derivative(sd.D);
  const int kin = droots.empty() ? 0 : 1;
  for (size_t t = 0; t < M.e.size(); ++t) {
    if (M.e[t].is_zero()) continue;
    std::vector<Complex> extra;
    for (const PoleCluster& m : master) {
      int have = 0;
      for (const PoleCluster& c : entry_poles[t])
        if (std::abs(m.z - c.z) <= pole_tol) have = c.mult;
      for (int i = have; i < m.mult; ++i) extra.push_back(m.z);
    }
    sd.e[t] = {nf[t].num * poly_from_roots(1.0, extra), kin};
  }

  // Project out the scalar part so the result is trace-free.
  ShEnt tr;
  for (int i = 0; i < n; ++i) tr = sd.add(tr, sd.at(i, i));
  ShEnt center{Complex(1.0 / n) * tr.n, tr.k};
  for (int i = 0; i < n; ++i) sd.at(i, i) = sd.sub(sd.at(i, i), center);

  std::vector<ShEnt> cur = sd.e;
  std::vector<ShEnt> gauge = sd.ident();
  for (int d = 0; d <= n - 2; ++d) {
    const int len = n - d;
    if (len - 1 == 0) continue;
    std::vector<ShEnt> y(len);
    ShEnt cd;
    for (int i = 0; i < len; ++i) {
      y[i] = cur[i * n + i + d];
      cd = sd.add(cd, y[i]);
    }
    // Bracketing x against the subdiagonal changes the d-th diagonal by
    // (x_{i-1} - x_i); steer it to (c_d, 0, ..., 0).
    std::vector<ShEnt> x(len - 1);
    ShEnt prev;
    for (int i = 0; i < len - 1; ++i) {
      ShEnt r = (i == 0) ? sd.sub(cd, y[i]) : ShEnt{Complex(-1.0) * y[i].n, y[i].k};
      x[i] = sd.sub(prev, r);
      prev = x[i];
    }
    std::vector<ShEnt> step = sd.ident();
    for (int i = 0; i < len - 1; ++i) step[i * n + i + d + 1] = x[i];
    // Neumann series for the unipotent inverse.
    std::vector<ShEnt> strict(n * n);
    for (int i = 0; i < len - 1; ++i) strict[i * n + i + d + 1] = x[i];
    std::vector<ShEnt> inv = sd.ident();
    std::vector<ShEnt> pw = sd.ident();
    for (int k = 1; k < n; ++k) {
      pw = sd.matmul(pw, strict);
      Complex sign = (k % 2 == 0) ? 1.0 : -1.0;
      for (size_t t = 0; t < pw.size(); ++t)
        inv[t] = sd.add(inv[t], {sign * pw[t].n, pw[t].k});
    }
    std::vector<ShEnt> stepd(n * n);
    for (size_t t = 0; t < step.size(); ++t) stepd[t] = sd.deriv(step[t]);
    std::vector<ShEnt> next = sd.matmul(sd.matmul(step, cur), inv);
    std::vector<ShEnt> drift = sd.matmul(stepd, inv);
    for (size_t t = 0; t < next.size(); ++t) next[t] = sd.sub(next[t], drift[t]);
    cur = std::move(next);
    gauge = sd.matmul(step, gauge);
  }

  CanonicalOper out;
  out.v.resize(n - 1);
  for (int k = 1; k < n; ++k) out.v[k - 1] = sd.to_rat(cur[k]);
  out.gauge = RatMat(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.gauge.at(i, j) = sd.to_rat(gauge[i * n + j]);
  return out;
}

MatrixOper companion_oper(const std::vector<RatFun>& v) {
  const int n = static_cast<int>(v.size()) + 1;
  MatrixOper M(n);
  for (int k = 1; k < n; ++k) M.at(0, k) = v[k - 1];
  for (int i = 1; i < n; ++i) M.at(i, i - 1) = RatFun::constant(-1.0);
  return M;
}

LocalJet schwarzian(const LocalJet& phi) {
  LocalJet d1 = jet_derivative(phi);
  LocalJet d2 = jet_derivative(d1);
  LocalJet d3 = jet_derivative(d2);
  LocalJet inv1 = jet_inverse(d1);
  LocalJet ratio = d2 * inv1;
  return d3 * inv1 - Complex(1.5) * (ratio * ratio);
}

std::vector<LocalJet> oper_coordinate_change(const CanonicalOper& oper,
                                             const LocalJet& phi) {
  LocalJet phip = jet_derivative(phi);
  std::vector<LocalJet> out;
  out.reserve(oper.v.size());
  for (size_t k = 0; k < oper.v.size(); ++k) {
    LocalJet pulled = compose_ratfun_jet(oper.v[k], phi);
    LocalJet weight = jet_pow(phip, static_cast<int>(k) + 2);
    LocalJet vk = pulled * weight;
    if (k == 0) vk = vk - Complex(0.5) * schwarzian(phi);
    out.push_back(jet_trim(vk, 1e-13));
  }
  return out;
}

Eigen::VectorXcd rs_residue(const std::vector<Complex>& c) {
  Eigen::VectorXcd out(static_cast<int>(c.size()));
  for (size_t k = 0; k < c.size(); ++k) out[static_cast<int>(k)] = c[k];
  if (out.size() > 0) out[0] += 0.25;
  return out;
}

}  // namespace gop
