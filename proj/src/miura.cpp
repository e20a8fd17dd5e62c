#include "gaudinopers/miura.hpp"

#include <algorithm>
#include <cmath>

namespace gop {

CartanConnection connection_from_roots(const BetheProblem& p,
                                       const std::vector<Complex>& roots) {
  if (roots.size() != p.colors.size())
    throw InputError("root count does not match the color list");
  check_collisions(p, roots);
  CartanConnection conn{p.cartan, {}};
  for (const auto& s : p.sites) conn.terms.push_back({s.z, -s.coweight});
  for (size_t j = 0; j < roots.size(); ++j)
    conn.terms.push_back({roots[j], simple_coroot(p.cartan, p.colors[j])});
  return conn;
}

CartanConnection connection_from_solution(const BetheProblem& p,
                                          const BetheSolution& sol) {
  return connection_from_roots(p, sol.roots);
}

RatFun component(const CartanConnection& conn, int a) {
  if (a < 1 || a > conn.cartan.rank())
    throw InputError("component index out of range");
  std::vector<std::pair<Complex, Complex>> terms;
  for (const auto& t : conn.terms)
    terms.emplace_back(t.pole, Complex(t.residue[a - 1]));
  if (terms.empty()) return RatFun();
  return rat_from_poles(terms);
}

Coweight residue_at_infinity_connection(const CartanConnection& conn) {
  Coweight r = 2.0 * rho_coweight(conn.cartan);
  for (const auto& t : conn.terms) r -= t.residue;
  return r;
}

namespace {

// Numerators of the components over the shared denominator prod (t - pole).
struct ComponentData {
  Poly D;
  std::vector<Poly> num;  // one per simple root
};

ComponentData component_numerators(const CartanConnection& conn) {
  ComponentData cd;
  cd.D = Poly::constant(1.0);
  for (const auto& t : conn.terms)
    cd.D = cd.D * (Poly::x() - Poly::constant(t.pole));
  int rank = conn.cartan.rank();
  cd.num.assign(rank, Poly());
  for (size_t i = 0; i < conn.terms.size(); ++i) {
    Poly others = Poly::constant(1.0);
    for (size_t j = 0; j < conn.terms.size(); ++j)
      if (j != i)
        others = others * (Poly::x() - Poly::constant(conn.terms[j].pole));
    for (int a = 0; a < rank; ++a)
      cd.num[a] = cd.num[a] + Complex(conn.terms[i].residue[a]) * others;
  }
  return cd;
}

// Solves the diagonal coordinates from the component pairings for one of the
// classical factorization types; works over any linear space V with the
// operations provided (polynomial numerators and local jets both qualify).
template <typename V, typename Add, typename Scale>
std::vector<V> solve_epsilon(char type, const std::vector<V>& d, const V& zero,
                             Add add, Scale scale) {
  int rank = int(d.size());
  if (type == 'A') {
    int n = rank + 1;
    std::vector<V> S(n + 1, zero);
    for (int k = rank; k >= 1; --k) S[k] = add(S[k + 1], d[k - 1]);
    V C = zero;
    for (int a = 1; a <= rank; ++a) C = add(C, scale(double(a), d[a - 1]));
    C = scale(-1.0 / double(n), C);
    std::vector<V> u(n);
    for (int k = 1; k <= n; ++k) u[k - 1] = add(S[k], C);
    return u;
  }
  std::vector<V> u(rank);
  u[rank - 1] = type == 'C' ? scale(0.5, d[rank - 1]) : d[rank - 1];
  for (int k = rank - 1; k >= 1; --k) u[k - 1] = add(d[k - 1], u[k]);
  return u;
}

// Signed factor plan: (0, _) stands for a bare d/dt factor.
std::vector<std::pair<int, int>> factor_plan(char type, int n) {
  std::vector<std::pair<int, int>> plan;
  for (int k = 1; k <= n; ++k) plan.emplace_back(+1, k);
  if (type == 'B') plan.emplace_back(0, 0);
  if (type == 'B' || type == 'C')
    for (int k = n; k >= 1; --k) plan.emplace_back(-1, k);
  return plan;
}

std::vector<std::vector<double>> pascal(int n) {
  std::vector<std::vector<double>> C(n + 1);
  for (int i = 0; i <= n; ++i) {
    C[i].assign(i + 1, 1.0);
    for (int j = 1; j < i; ++j) C[i][j] = C[i - 1][j - 1] + C[i - 1][j];
  }
  return C;
}

// ---- expansion over polynomial numerators with a shared denominator -------

struct PD {
  Poly num;
  int pow = 0;  // value is num / D^pow
};

struct PDCtx {
  Poly D, dD;
  PD add(const PD& a, const PD& b) const {
    if (a.num.is_zero()) return b;
    if (b.num.is_zero()) return a;
    int p = std::max(a.pow, b.pow);
    Poly an = a.num, bn = b.num;
    for (int i = a.pow; i < p; ++i) an = an * D;
    for (int i = b.pow; i < p; ++i) bn = bn * D;
    return {an + bn, p};
  }
  PD mul(const PD& a, const PD& b) const {
    if (a.num.is_zero() || b.num.is_zero()) return {Poly(), 0};
    return {a.num * b.num, a.pow + b.pow};
  }
  PD deriv(const PD& a) const {
    if (a.num.is_zero()) return {Poly(), 0};
    return {derivative(a.num) * D - Complex(double(a.pow)) * a.num * dD,
            a.pow + 1};
  }
};

using DiffOp = std::vector<PD>;  // coefficient of d^k at index k

DiffOp op_mul(const PDCtx& ctx, const DiffOp& A, const DiffOp& B) {
  int da = int(A.size()) - 1, db = int(B.size()) - 1;
  auto C = pascal(da);
  std::vector<std::vector<PD>> bder(db + 1);
  for (int j = 0; j <= db; ++j) {
    bder[j].resize(da + 1);
    bder[j][0] = B[j];
    for (int r = 1; r <= da; ++r) bder[j][r] = ctx.deriv(bder[j][r - 1]);
  }
  DiffOp res(da + db + 1, PD{Poly(), 0});
  for (int i = 0; i <= da; ++i) {
    if (A[i].num.is_zero()) continue;
    for (int j = 0; j <= db; ++j) {
      for (int r = 0; r <= i; ++r) {
        PD term = ctx.mul(A[i], bder[j][r]);
        term.num = Complex(C[i][r]) * term.num;
        res[i - r + j] = ctx.add(res[i - r + j], term);
      }
    }
  }
  return res;
}

// ---- the same expansion in local-jet coefficients --------------------------

LocalJet wide_zero(Complex center, int lo, int hi) {
  LocalJet j;
  j.center = center;
  j.lo = lo;
  j.c = Eigen::VectorXcd::Zero(hi - lo + 1);
  return j;
}

LocalJet linear_pole_jet(Complex pole, Complex x0, int lo, int K) {
  // Expansion of 1/(t - pole) around x0.
  if (std::abs(x0 - pole) <= 1e-12 * (1.0 + std::abs(pole))) {
    LocalJet j = wide_zero(x0, -1, K);
    j.c(0) = 1.0;
    return j;
  }
  LocalJet j = wide_zero(x0, lo, K);
  Complex d = x0 - pole;
  Complex g = 1.0 / d;
  for (int k = 0; k <= K; ++k) {
    j.c(k - lo) = g;
    g *= -1.0 / d;
  }
  return j;
}

using JetOp = std::vector<LocalJet>;

// The jets here are exact below their truncation order, so stored leading
// zeros must not count against the product's validity window.  Trim operands
// to their true support and drop vanishing terms before multiplying.
JetOp jet_op_mul(const JetOp& A, const JetOp& B, Complex center, int lo_floor,
                 int K) {
  auto vanishes = [](const LocalJet& j) {
    return j.c.size() == 0 || j.c.cwiseAbs().maxCoeff() == 0.0;
  };
  int da = int(A.size()) - 1, db = int(B.size()) - 1;
  auto C = pascal(da);
  std::vector<std::vector<LocalJet>> bder(db + 1);
  for (int j = 0; j <= db; ++j) {
    bder[j].push_back(jet_trim(B[j], 0.0));
    for (int r = 1; r <= da; ++r)
      bder[j].push_back(jet_trim(jet_derivative(bder[j][r - 1]), 0.0));
  }
  JetOp res(da + db + 1, wide_zero(center, lo_floor, K));
  for (int i = 0; i <= da; ++i) {
    LocalJet ai = jet_trim(A[i], 0.0);
    if (vanishes(ai)) continue;
    for (int j = 0; j <= db; ++j)
      for (int r = 0; r <= i; ++r) {
        if (vanishes(bder[j][r])) continue;
        res[i - r + j] = res[i - r + j] + Complex(C[i][r]) * (ai * bder[j][r]);
      }
  }
  return res;
}

char resolve_type(const CartanConnection& conn, char type) {
  if (type == 'D')
    throw InputError("type D needs a pseudo-differential operator; unsupported");
  if (type != 'A' && type != 'B' && type != 'C')
    throw InputError("factorization type must be A, B or C");
  const std::string& kind = conn.cartan.kind;
  if (kind != "general" && kind != std::string(1, type))
    throw InputError("factorization type disagrees with the Cartan kind");
  return type;
}

std::vector<Complex> probe_points(const CartanConnection& conn, int count) {
  Complex centroid = 0.0;
  for (const auto& t : conn.terms) centroid += t.pole;
  if (!conn.terms.empty()) centroid /= double(conn.terms.size());
  double R = 1.0;
  for (const auto& t : conn.terms)
    R = std::max(R, std::abs(t.pole - centroid));
  std::vector<Complex> pts;
  for (int i = 0; i < count; ++i) {
    double th = 2.39996 * double(i + 1);
    pts.push_back(centroid + (2.0 * R + 3.0) * Complex(std::cos(th), std::sin(th)));
  }
  return pts;
}

}  // namespace

std::vector<RatFun> epsilon_coordinates(const CartanConnection& conn) {
  if (conn.cartan.kind != "A" && conn.cartan.kind != "general")
    throw InputError("diagonal coordinates with zero sum are a type A form");
  ComponentData cd = component_numerators(conn);
  auto nums = solve_epsilon<Poly>(
      'A', cd.num, Poly(), [](const Poly& a, const Poly& b) { return a + b; },
      [](double s, const Poly& a) { return Complex(s) * a; });
  std::vector<RatFun> out;
  for (const Poly& n : nums) out.emplace_back(n, cd.D);
  return out;
}

ScalarOper miura_scalar_oper(const CartanConnection& conn, char type) {
  type = resolve_type(conn, type);
  int rank = conn.cartan.rank();
  int n = type == 'A' ? rank + 1 : rank;
  int order = type == 'A' ? n : (type == 'C' ? 2 * n : 2 * n + 1);

  ComponentData cd = component_numerators(conn);
  auto nums = solve_epsilon<Poly>(
      type, cd.num, Poly(), [](const Poly& a, const Poly& b) { return a + b; },
      [](double s, const Poly& a) { return Complex(s) * a; });

  PDCtx ctx{cd.D, derivative(cd.D)};
  DiffOp L{PD{Poly::constant(1.0), 0}};
  for (auto [sign, k] : factor_plan(type, n)) {
    DiffOp factor(2);
    factor[1] = PD{Poly::constant(1.0), 0};
    factor[0] = sign == 0 ? PD{Poly(), 0}
                          : PD{Complex(double(sign)) * nums[k - 1], 1};
    L = op_mul(ctx, L, factor);
  }

  ScalarOper oper;
  oper.type = type;
  oper.order = order;
  oper.source = conn;
  if (int(L.size()) != order + 1)
    throw Error("factor expansion produced the wrong order");
  RatFun lead(L[order].num, poly_pow(cd.D, L[order].pow));
  RatFun sub(L[order - 1].num, poly_pow(cd.D, L[order - 1].pow));
  for (Complex x : probe_points(conn, 4)) {
    if (std::abs(eval(lead, x) - 1.0) > 1e-8)
      throw IllConditionedError("leading coefficient drifted from 1");
    if (std::abs(eval(sub, x)) > 1e-8)
      throw IllConditionedError("subleading coefficient failed to cancel");
  }
  for (int k = 1; k <= order - 1; ++k) {
    const PD& pd = L[order - 1 - k];
    oper.v.emplace_back(pd.num, poly_pow(cd.D, pd.pow));
  }
  return oper;
}

namespace {

std::vector<LocalJet> jet_coefficients(const CartanConnection& conn, char type,
                                       int order, Complex x0, int K) {
  int rank = conn.cartan.rank();
  int lo_floor = -(order + 2);
  std::vector<LocalJet> d(rank, wide_zero(x0, lo_floor, K));
  for (const auto& t : conn.terms) {
    LocalJet pj = linear_pole_jet(t.pole, x0, lo_floor, K);
    for (int a = 0; a < rank; ++a)
      d[a] = d[a] + Complex(t.residue[a]) * pj;
  }
  LocalJet zero = wide_zero(x0, lo_floor, K);
  auto u = solve_epsilon<LocalJet>(
      type, d, zero,
      [](const LocalJet& a, const LocalJet& b) { return a + b; },
      [](double s, const LocalJet& a) { return Complex(s) * a; });

  int n = int(u.size());
  JetOp L{LocalJet::constant(x0, 1.0, K)};
  L[0] = L[0] + wide_zero(x0, lo_floor, K);  // widen the stored range
  for (auto [sign, k] : factor_plan(type, n)) {
    JetOp factor(2);
    factor[1] = LocalJet::constant(x0, 1.0, K);
    factor[0] = sign == 0 ? zero : Complex(double(sign)) * u[k - 1];
    L = jet_op_mul(L, factor, x0, lo_floor, K);
  }
  std::vector<LocalJet> vk;
  for (int k = 1; k <= order - 1; ++k) vk.push_back(L[order - 1 - k]);
  return vk;
}

}  // namespace

std::vector<PointRegularity> regularity_report(const ScalarOper& oper,
                                               const std::vector<Complex>& points,
                                               double tol) {
  std::vector<PointRegularity> out;
  for (Complex x0 : points) {
    PointRegularity rep;
    rep.point = x0;
    std::vector<LocalJet> vk;
    if (oper.source) {
      vk = jet_coefficients(*oper.source, oper.type, oper.order, x0,
                            oper.order + 8);
    } else {
      for (const RatFun& f : oper.v) vk.push_back(local_jet(f, x0, 0, 0.0));
    }
    for (int k = 1; k <= int(vk.size()); ++k) {
      CoefficientTail tail;
      tail.k = k;
      const LocalJet& j = vk[k - 1];
      if (j.hi() < -1)
        throw IllConditionedError("local expansion window collapsed");
      for (int ord = j.lo; ord < 0; ++ord) {
        Complex c = j.coeff(ord);
        tail.coeffs.emplace_back(ord, c);
        rep.max_tail = std::max(rep.max_tail, std::abs(c));
      }
      rep.tails.push_back(std::move(tail));
    }
    rep.erased = rep.max_tail < tol;
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace gop
