#include "gaudinopers/ratfun.hpp"

#include <algorithm>
#include <cmath>

namespace gop {

namespace {

double max_abs(const Eigen::VectorXcd& v) {
  double m = 0.0;
  for (int i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v[i]));
  return m;
}

}  // namespace

// ----------------------------------------------------------------- Poly ----

Poly::Poly(Eigen::VectorXcd coeffs) {
  if (coeffs.size() == 0)
    c = Eigen::VectorXcd::Zero(1);
  else
    c = std::move(coeffs);
}

Poly Poly::constant(Complex v) {
  Poly p;
  p.c(0) = v;
  return p;
}

Poly Poly::x() {
  Poly p;
  p.c = Eigen::VectorXcd::Zero(2);
  p.c(1) = 1.0;
  return p;
}

int Poly::degree() const {
  for (int i = int(c.size()) - 1; i >= 0; --i)
    if (c(i) != 0.0) return i;
  return -1;
}

Complex Poly::lead() const {
  int d = degree();
  return d < 0 ? Complex(0.0) : c(d);
}

bool Poly::is_zero() const { return degree() < 0; }

Poly operator+(const Poly& a, const Poly& b) {
  int n = int(std::max(a.c.size(), b.c.size()));
  Eigen::VectorXcd r = Eigen::VectorXcd::Zero(n);
  r.head(a.c.size()) = a.c;
  r.head(b.c.size()) += b.c;
  return Poly(std::move(r));
}

Poly operator-(const Poly& a) { return Complex(-1.0) * a; }

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  Eigen::VectorXcd r = Eigen::VectorXcd::Zero(a.c.size() + b.c.size() - 1);
  for (int i = 0; i < a.c.size(); ++i)
    for (int j = 0; j < b.c.size(); ++j) r(i + j) += a.c(i) * b.c(j);
  return Poly(std::move(r));
}

Poly operator*(Complex s, const Poly& a) { return Poly(s * a.c); }

bool poly_equal(const Poly& a, const Poly& b) {
  const Poly d = a - b;
  return d.is_zero();
}

Complex eval(const Poly& p, Complex x) {
  Complex r = 0.0;
  for (int i = int(p.c.size()) - 1; i >= 0; --i) r = r * x + p.c(i);
  return r;
}

Poly derivative(const Poly& p) {
  if (p.c.size() <= 1) return Poly();
  Eigen::VectorXcd r(p.c.size() - 1);
  for (int i = 1; i < p.c.size(); ++i) r(i - 1) = double(i) * p.c(i);
  return Poly(std::move(r));
}

Poly antiderivative(const Poly& p) {
  Eigen::VectorXcd r = Eigen::VectorXcd::Zero(p.c.size() + 1);
  for (int i = 0; i < p.c.size(); ++i) r(i + 1) = p.c(i) / double(i + 1);
  return Poly(std::move(r));
}

Poly trim(const Poly& p, double rel_tol) {
  double m = max_abs(p.c);
  if (m == 0.0) return Poly();
  int last = 0;
  for (int i = 0; i < p.c.size(); ++i)
    if (std::abs(p.c(i)) > rel_tol * m) last = i;
  Eigen::VectorXcd r = p.c.head(last + 1);
  for (int i = 0; i <= last; ++i)
    if (std::abs(r(i)) <= rel_tol * m) r(i) = 0.0;
  return Poly(std::move(r));
}

Poly monic(const Poly& p) {
  Poly t = trim(p);
  if (t.is_zero()) throw InputError("cannot normalize the zero polynomial");
  return (1.0 / t.lead()) * t;
}

Poly poly_from_roots(Complex lead, const std::vector<Complex>& roots) {
  Poly p = Poly::constant(lead);
  for (Complex r : roots) p = p * (Poly::x() - Poly::constant(r));
  return p;
}

Poly poly_pow(const Poly& p, int k) {
  if (k < 0) throw InputError("poly_pow wants a nonnegative exponent");
  Poly r = Poly::constant(1.0);
  for (int i = 0; i < k; ++i) r = r * p;
  return r;
}

PolyDivMod divmod(const Poly& p, const Poly& q) {
  int dq = q.degree();
  if (dq < 0) throw InputError("division by the zero polynomial");
  Eigen::VectorXcd rem = p.c;
  int dp = p.degree();
  if (dp < dq) return {Poly(), p};
  Eigen::VectorXcd quot = Eigen::VectorXcd::Zero(dp - dq + 1);
  for (int k = dp; k >= dq; --k) {
    Complex f = rem(k) / q.c(dq);
    quot(k - dq) = f;
    for (int j = 0; j <= dq; ++j) rem(k - dq + j) -= f * q.c(j);
    rem(k) = 0.0;
  }
  return {Poly(std::move(quot)), trim(Poly(std::move(rem)), 1e-14)};
}

Poly deflate(const Poly& p, Complex r) {
  int d = p.degree();
  if (d < 1) throw InputError("cannot deflate a constant polynomial");
  Eigen::VectorXcd q(d);
  Complex carry = p.c(d);
  for (int i = d - 1; i >= 0; --i) {
    q(i) = carry;
    carry = p.c(i) + carry * r;
  }
  return Poly(std::move(q));
}

Poly taylor_shift(const Poly& p, Complex center) {
  Eigen::VectorXcd a = p.c;
  int n = int(a.size());
  for (int i = 0; i < n; ++i)
    for (int j = n - 2; j >= i; --j) a(j) += center * a(j + 1);
  return Poly(std::move(a));
}

std::vector<Complex> poly_roots(const Poly& p, double rel_tol) {
  Poly t = trim(p, rel_tol);
  int d = t.degree();
  if (d <= 0) return {};
  if (d == 1) return {-t.c(0) / t.c(1)};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -t.c(i) / t.c(d);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  if (es.info() != Eigen::Success)
    throw LinearSolveError("companion eigenvalue iteration failed");
  std::vector<Complex> roots(es.eigenvalues().data(),
                             es.eigenvalues().data() + d);
  Poly dp = derivative(t);
  for (Complex& r : roots) {
    for (int it = 0; it < 3; ++it) {
      Complex fv = eval(t, r), dv = eval(dp, r);
      if (std::abs(dv) < 1e-14 * (1.0 + std::abs(fv))) break;
      Complex step = fv / dv;
      if (!std::isfinite(std::abs(step)) || std::abs(step) > 0.5) break;
      r -= step;
    }
  }
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

std::vector<std::pair<Complex, int>> cluster_roots(
    const Poly& p, const std::vector<Complex>& roots, double radius) {
  std::vector<Complex> centers;
  std::vector<int> mults;
  for (Complex r : roots) {
    bool placed = false;
    for (size_t k = 0; k < centers.size(); ++k) {
      if (std::abs(r - centers[k]) <= radius) {
        centers[k] = (centers[k] * double(mults[k]) + r) / double(mults[k] + 1);
        ++mults[k];
        placed = true;
        break;
      }
    }
    if (!placed) {
      centers.push_back(r);
      mults.push_back(1);
    }
  }
  // A cluster of k eigenvalue approximations surrounds a k-fold root; the
  // center is polished as a simple root of the (k-1)-th derivative.
  for (size_t k = 0; k < centers.size(); ++k) {
    if (mults[k] < 2) continue;
    Poly dk = p;
    for (int j = 1; j < mults[k]; ++j) dk = derivative(dk);
    Poly ddk = derivative(dk);
    Complex c = centers[k];
    for (int it = 0; it < 8; ++it) {
      Complex dv = eval(ddk, c);
      if (std::abs(dv) == 0.0) break;
      Complex step = eval(dk, c) / dv;
      if (std::abs(step) > 2.0 * radius) break;
      c -= step;
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(c))) break;
    }
    if (std::abs(c - centers[k]) <= 2.0 * radius) centers[k] = c;
  }
  std::vector<std::pair<Complex, int>> out;
  for (size_t k = 0; k < centers.size(); ++k)
    out.emplace_back(centers[k], mults[k]);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.real() != b.first.real()) return a.first.real() < b.first.real();
    return a.first.imag() < b.first.imag();
  });
  return out;
}

// --------------------------------------------------------------- RatFun ----

RatFun::RatFun(Poly n, Poly d) : num(std::move(n)), den(std::move(d)) {
  if (den.is_zero()) throw InputError("rational function with zero denominator");
}

RatFun RatFun::constant(Complex v) {
  return RatFun(Poly::constant(v), Poly::constant(1.0));
}

RatFun RatFun::from_poly(const Poly& p) {
  return RatFun(p, Poly::constant(1.0));
}

RatFun operator+(const RatFun& a, const RatFun& b) {
  if (poly_equal(a.den, b.den)) return RatFun(a.num + b.num, a.den);
  return RatFun(a.num * b.den + b.num * a.den, a.den * b.den);
}

RatFun operator-(const RatFun& a) { return RatFun(-a.num, a.den); }

RatFun operator-(const RatFun& a, const RatFun& b) { return a + (-b); }

RatFun operator*(const RatFun& a, const RatFun& b) {
  return RatFun(a.num * b.num, a.den * b.den);
}

RatFun operator*(Complex s, const RatFun& a) {
  return RatFun(s * a.num, a.den);
}

RatFun operator/(const RatFun& a, const RatFun& b) {
  if (b.num.is_zero()) throw InputError("division by the zero rational function");
  return RatFun(a.num * b.den, a.den * b.num);
}

Complex eval(const RatFun& f, Complex x) {
  return eval(f.num, x) / eval(f.den, x);
}

RatFun derivative(const RatFun& f) {
  return RatFun(derivative(f.num) * f.den - f.num * derivative(f.den),
                f.den * f.den);
}

RatFun rat_from_poles(const std::vector<std::pair<Complex, Complex>>& terms) {
  Poly den = Poly::constant(1.0);
  for (const auto& t : terms) den = den * (Poly::x() - Poly::constant(t.first));
  Poly num;
  for (size_t i = 0; i < terms.size(); ++i) {
    Poly part = Poly::constant(terms[i].second);
    for (size_t j = 0; j < terms.size(); ++j)
      if (j != i) part = part * (Poly::x() - Poly::constant(terms[j].first));
    num = num + part;
  }
  return RatFun(num, den);
}

RatFun rat_normalize(const RatFun& f, double tol) {
  Poly num = trim(f.num), den = trim(f.den);
  if (num.is_zero()) return RatFun();
  std::vector<Complex> nr = poly_roots(num);
  std::vector<Complex> dr = poly_roots(den);
  // Pair up matching roots, then divide the matched factors out of the
  // original coefficients.  Rebuilding whole polynomials from computed
  // roots would wreck clustered (multiple) roots, whose positions are
  // only accurate to a fractional power of machine epsilon.
  for (auto it = dr.begin(); it != dr.end();) {
    auto best = nr.end();
    double bd = tol;
    for (auto jt = nr.begin(); jt != nr.end(); ++jt) {
      double d = std::abs(*jt - *it);
      if (d <= bd) {
        bd = d;
        best = jt;
      }
    }
    if (best != nr.end()) {
      num = deflate(num, *best);
      den = deflate(den, *it);
      nr.erase(best);
      it = dr.erase(it);
    } else {
      ++it;
    }
  }
  Complex scale = den.lead();
  return RatFun(Poly(num.c / scale), Poly(den.c / scale));
}

// ------------------------------------------------------------- LocalJet ----

Complex LocalJet::coeff(int order) const {
  if (order < lo || order > hi()) return 0.0;
  return c(order - lo);
}

LocalJet LocalJet::constant(Complex center, Complex v, int K) {
  LocalJet j;
  j.center = center;
  j.lo = 0;
  j.c = Eigen::VectorXcd::Zero(K + 1);
  j.c(0) = v;
  return j;
}

namespace {

void check_centers(const LocalJet& a, const LocalJet& b) {
  if (a.center != b.center)
    throw InputError("jet arithmetic requires a common center");
}

LocalJet make_jet(Complex center, int lo, Eigen::VectorXcd c) {
  if (c.size() < 1) throw IllConditionedError("jet truncation exhausted");
  LocalJet j;
  j.center = center;
  j.lo = lo;
  j.c = std::move(c);
  return j;
}

}  // namespace

LocalJet operator+(const LocalJet& a, const LocalJet& b) {
  check_centers(a, b);
  int lo = std::min(a.lo, b.lo);
  int hi = std::min(a.hi(), b.hi());
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(hi - lo + 1);
  for (int k = lo; k <= hi; ++k) c(k - lo) = a.coeff(k) + b.coeff(k);
  return make_jet(a.center, lo, std::move(c));
}

LocalJet operator-(const LocalJet& a, const LocalJet& b) {
  return a + Complex(-1.0) * b;
}

LocalJet operator*(const LocalJet& a, const LocalJet& b) {
  check_centers(a, b);
  int lo = a.lo + b.lo;
  int hi = std::min(a.hi() + b.lo, b.hi() + a.lo);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(hi - lo + 1);
  for (int i = 0; i < a.c.size(); ++i) {
    for (int j = 0; j < b.c.size(); ++j) {
      int k = a.lo + i + b.lo + j;
      if (k > hi) break;
      c(k - lo) += a.c(i) * b.c(j);
    }
  }
  return make_jet(a.center, lo, std::move(c));
}

LocalJet operator*(Complex s, const LocalJet& a) {
  return make_jet(a.center, a.lo, s * a.c);
}

LocalJet jet_derivative(const LocalJet& a) {
  Eigen::VectorXcd c(a.c.size());
  for (int i = 0; i < a.c.size(); ++i) c(i) = double(a.lo + i) * a.c(i);
  return make_jet(a.center, a.lo - 1, std::move(c));
}

LocalJet jet_trim(const LocalJet& a, double rel_tol) {
  double m = max_abs(a.c);
  int i = 0;
  while (i < a.c.size() - 1 && std::abs(a.c(i)) <= rel_tol * m) ++i;
  return make_jet(a.center, a.lo + i, a.c.tail(a.c.size() - i).eval());
}

LocalJet jet_inverse(const LocalJet& a, double rel_tol) {
  LocalJet t = jet_trim(a, rel_tol);
  if (max_abs(t.c) == 0.0) throw InputError("cannot invert the zero jet");
  int L = int(t.c.size());
  Eigen::VectorXcd q(L);
  q(0) = 1.0 / t.c(0);
  for (int j = 1; j < L; ++j) {
    Complex s = 0.0;
    for (int r = 1; r <= j; ++r) s += t.c(r) * q(j - r);
    q(j) = -s / t.c(0);
  }
  return make_jet(a.center, -t.lo, std::move(q));
}

LocalJet jet_pow(const LocalJet& a, int k, double rel_tol) {
  if (k < 0) return jet_pow(jet_inverse(a, rel_tol), -k, rel_tol);
  int K = a.hi() - a.lo;
  LocalJet r = make_jet(a.center, 0, Eigen::VectorXcd::Zero(K + 1));
  r.c(0) = 1.0;
  for (int i = 0; i < k; ++i) r = r * a;
  return r;
}

LocalJet local_jet(const RatFun& f, Complex center, int K, double tol) {
  Poly ns = taylor_shift(f.num, center);
  Poly ds = taylor_shift(f.den, center);
  double nm = max_abs(ns.c), dm = max_abs(ds.c);
  if (dm == 0.0) throw InputError("zero denominator in local expansion");
  if (nm == 0.0) return make_jet(center, 0, Eigen::VectorXcd::Zero(K + 1));
  int vn = 0, vd = 0;
  while (vn < ns.c.size() && std::abs(ns.c(vn)) <= tol * nm) ++vn;
  while (vd < ds.c.size() && std::abs(ds.c(vd)) <= tol * dm) ++vd;
  if (vn >= ns.c.size()) return make_jet(center, 0, Eigen::VectorXcd::Zero(K + 1));
  if (vd >= ds.c.size())
    throw InputError("zero denominator in local expansion");
  int lo = vn - vd;
  int count = K - lo + 1;
  if (count < 1) count = 1;
  auto acoef = [&](int j) -> Complex {
    int i = vn + j;
    return i < ns.c.size() ? ns.c(i) : Complex(0.0);
  };
  auto bcoef = [&](int j) -> Complex {
    int i = vd + j;
    return i < ds.c.size() ? ds.c(i) : Complex(0.0);
  };
  Eigen::VectorXcd q(count);
  for (int j = 0; j < count; ++j) {
    Complex s = acoef(j);
    for (int r = 0; r < j; ++r) s -= q(r) * bcoef(j - r);
    q(j) = s / bcoef(0);
  }
  return make_jet(center, lo, std::move(q));
}

LocalJet compose_ratfun_jet(const RatFun& f, const LocalJet& phi,
                            double rel_tol) {
  if (phi.lo != 0) throw InputError("composition wants a Taylor jet");
  int K = phi.hi();
  auto horner = [&](const Poly& p) {
    LocalJet acc = LocalJet::constant(phi.center, 0.0, K);
    for (int i = int(p.c.size()) - 1; i >= 0; --i) {
      acc = acc * phi;
      acc.c(0) += p.c(i);
    }
    return acc;
  };
  LocalJet jn = horner(f.num);
  LocalJet jd = horner(f.den);
  return jn * jet_inverse(jd, rel_tol);
}

// ---------------------------------------------- partial fractions ----------

PartialFractions partial_fractions_known(
    const RatFun& f, const std::vector<std::pair<Complex, int>>& poles) {
  PartialFractions out;
  Poly num = trim(f.num, 1e-14), den = trim(f.den, 1e-14);
  out.polynomial = divmod(num, den).quot;
  for (const auto& [pole, m] : poles) {
    Poly ns = taylor_shift(num, pole);
    Poly ds = taylor_shift(den, pole);
    // den = s^m * dtilde with dtilde(0) != 0; the leading m coefficients of
    // the shifted denominator are cancellation residue and are dropped.
    if (int(ds.c.size()) <= m)
      throw InputError("declared pole multiplicity exceeds denominator degree");
    Eigen::VectorXcd dt = ds.c.tail(ds.c.size() - m);
    if (dt(0) == 0.0)
      throw IllConditionedError("denominator vanishes to higher order than declared");
    Eigen::VectorXcd q(m);
    for (int j = 0; j < m; ++j) {
      Complex s = j < ns.c.size() ? ns.c(j) : Complex(0.0);
      for (int r = 0; r < j; ++r)
        s -= q(r) * (j - r < dt.size() ? dt(j - r) : Complex(0.0));
      q(j) = s / dt(0);
    }
    for (int j = 0; j < m; ++j)
      out.terms.push_back({pole, m - j, q(j)});
  }
  return out;
}

PartialFractions partial_fractions(const RatFun& f, double tol) {
  Poly den = trim(f.den, 1e-14);
  if (den.degree() <= 0) {
    PartialFractions out;
    out.polynomial = (1.0 / den.lead()) * trim(f.num, 1e-14);
    return out;
  }
  std::vector<Complex> rts = poly_roots(den);
  double scale = 1.0;
  for (Complex r : rts) scale = std::max(scale, std::abs(r));
  double radius = std::max(tol, 1e-7 * scale);
  auto clusters = cluster_roots(den, rts, radius);
  for (size_t i = 0; i < clusters.size(); ++i)
    for (size_t j = i + 1; j < clusters.size(); ++j)
      if (std::abs(clusters[i].first - clusters[j].first) < 10.0 * radius)
        throw IllConditionedError("pole clusters are not well separated");
  return partial_fractions_known(f, clusters);
}

// -------------------------------------------------- rational integration ---

namespace {

HermiteResult hermite_from_pf(const PartialFractions& pf) {
  HermiteResult out;
  out.polynomial_part = pf.polynomial;
  // Group the order>=2 terms per pole and integrate them in the local
  // variable, then recombine over the common denominator.
  std::vector<Complex> poles;
  for (const auto& t : pf.terms)
    if (std::find(poles.begin(), poles.end(), t.pole) == poles.end())
      poles.push_back(t.pole);
  RatFun rational;
  for (Complex p : poles) {
    int maxr = 1;
    Complex res = 0.0;
    for (const auto& t : pf.terms)
      if (t.pole == p) {
        maxr = std::max(maxr, t.order);
        if (t.order == 1) res = t.coeff;
      }
    out.residues.emplace_back(p, res);
    if (maxr < 2) continue;
    Poly local;  // numerator over (x-p)^(maxr-1), in the variable s = x-p
    for (const auto& t : pf.terms) {
      if (t.pole != p || t.order < 2) continue;
      Complex c = t.coeff / double(1 - t.order);
      Poly mono = Poly::constant(c) * poly_pow(Poly::x(), maxr - t.order);
      local = local + mono;
    }
    Poly num_x = taylor_shift(local, -p);
    Poly den_x = poly_pow(Poly::x() - Poly::constant(p), maxr - 1);
    rational = rational + RatFun(num_x, den_x);
  }
  out.rational_part = rational;
  return out;
}

}  // namespace

HermiteResult hermite_integrate(const RatFun& f, double tol) {
  return hermite_from_pf(partial_fractions(f, tol));
}

HermiteResult hermite_integrate_known(
    const RatFun& f, const std::vector<std::pair<Complex, int>>& poles) {
  return hermite_from_pf(partial_fractions_known(f, poles));
}

}  // namespace gop
