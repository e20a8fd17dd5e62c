#include "gaudinopers/repro.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

namespace gop {

static std::vector<int> synced_colors(const GeneralizedCartanMatrix& A,
                                      const std::vector<Poly>& y) {
  std::vector<int> colors;
  for (int i = 1; i <= A.rank(); ++i) {
    int d = std::max(y[i - 1].degree(), 0);
    for (int k = 0; k < d; ++k) colors.push_back(i);
  }
  return colors;
}

PolyTuple tuple_from_solution(const BetheProblem& p,
                              const std::vector<Complex>& roots) {
  if (roots.size() != p.colors.size())
    throw InputError("root list does not match the color list");
  PolyTuple t;
  t.base = p;
  t.y.resize(p.cartan.rank());
  for (int i = 1; i <= p.cartan.rank(); ++i) {
    std::vector<Complex> mine;
    for (size_t k = 0; k < roots.size(); ++k)
      if (p.colors[k] == i) mine.push_back(roots[k]);
    t.y[i - 1] = poly_from_roots(1.0, mine);
  }
  t.base.colors = synced_colors(p.cartan, t.y);
  return t;
}

PolyTuple empty_tuple(const BetheProblem& p) {
  PolyTuple t;
  t.base = p;
  t.base.colors.clear();
  t.y.assign(p.cartan.rank(), Poly::constant(1.0));
  return t;
}

TupleRoots tuple_roots(const PolyTuple& t) {
  TupleRoots out;
  for (int i = 1; i <= t.base.cartan.rank(); ++i) {
    std::vector<Complex> r = poly_roots(t.y[i - 1]);
    std::sort(r.begin(), r.end(), [](Complex a, Complex b) {
      if (a.real() != b.real()) return a.real() < b.real();
      return a.imag() < b.imag();
    });
    for (Complex w : r) {
      out.colors.push_back(i);
      out.roots.push_back(w);
    }
  }
  return out;
}

Eigen::VectorXi tuple_degrees(const PolyTuple& t) {
  Eigen::VectorXi d(static_cast<int>(t.y.size()));
  for (size_t i = 0; i < t.y.size(); ++i)
    d[static_cast<int>(i)] = std::max(t.y[i].degree(), 0);
  return d;
}

bool tuple_degenerate(const PolyTuple& t) {
  return collides(t.base, tuple_roots(t).roots);
}

PolyTuple polish_tuple(const PolyTuple& t, const NewtonOptions& opts) {
  TupleRoots tr = tuple_roots(t);
  BetheSolution sol = newton_solve(t.base, tr.roots, opts);
  return tuple_from_solution(t.base, sol.roots);
}

RatFun master_integrand(const PolyTuple& t, int i) {
  const GeneralizedCartanMatrix& A = t.base.cartan;
  if (i < 1 || i > A.rank()) throw InputError("color out of range");
  Poly num = Poly::constant(1.0);
  for (const BetheSite& s : t.base.sites) {
    int pk = static_cast<int>(std::lround(s.coweight[i - 1]));
    if (pk > 0) {
      Poly lin = poly_from_roots(1.0, {s.z});
      num = num * poly_pow(lin, pk);
    }
  }
  for (int j = 1; j <= A.rank(); ++j) {
    if (j == i) continue;
    int e = -A.entry(j, i);
    if (e > 0) num = num * poly_pow(t.y[j - 1], e);
  }
  Poly den = t.y[i - 1] * t.y[i - 1];
  return RatFun(num, den);
}

static std::vector<std::pair<Complex, int>> double_poles(const Poly& y) {
  std::vector<std::pair<Complex, int>> poles;
  for (Complex r : poly_roots(y)) poles.emplace_back(r, 2);
  return poles;
}

Fertility fertility(const PolyTuple& t, int i, double tol) {
  RatFun G = master_integrand(t, i);
  HermiteResult h = hermite_integrate_known(G, double_poles(t.y[i - 1]));
  Fertility f;
  f.residues = h.residues;
  for (const auto& pr : h.residues)
    f.max_residue = std::max(f.max_residue, std::abs(pr.second));
  double scale = G.num.c.cwiseAbs().maxCoeff();
  f.fertile = f.max_residue <= tol * std::max(1.0, scale);
  f.drop_available = h.polynomial_part.is_zero();
  return f;
}

ReproduceResult reproduce(const PolyTuple& t, int i, Complex c, double tol) {
  RatFun G = master_integrand(t, i);
  HermiteResult h = hermite_integrate_known(G, double_poles(t.y[i - 1]));

  double maxres = 0.0;
  for (const auto& pr : h.residues)
    maxres = std::max(maxres, std::abs(pr.second));
  double scale = G.num.c.cwiseAbs().maxCoeff();
  if (maxres > tol * std::max(1.0, scale))
    throw InfertileError("integrand has nonvanishing simple-pole residues",
                         h.residues);

  const Poly& yi = t.y[i - 1];
  Poly intP = antiderivative(h.polynomial_part);
  Poly raw = yi * (intP + Poly::constant(c));
  if (!h.rational_part.is_zero()) {
    PolyDivMod dm = divmod(yi * h.rational_part.num, h.rational_part.den);
    double top = dm.quot.is_zero() ? 1.0 : dm.quot.c.cwiseAbs().maxCoeff();
    if (!dm.rem.is_zero() && dm.rem.c.cwiseAbs().maxCoeff() > 1e-6 * top)
      throw IllConditionedError(
          "integrated rational part is not a polynomial multiple of y");
    raw = raw + dm.quot;
  }
  raw = trim(raw, 1e-11);
  if (raw.is_zero())
    throw IllConditionedError("regenerated polynomial vanished");

  int generic = std::max(yi.degree(), 0) +
                (h.polynomial_part.is_zero() ? 0 : intP.degree());

  ReproduceResult out;
  out.degree_dropped = raw.degree() < generic;
  out.tuple = t;
  out.tuple.y[i - 1] = monic(raw);
  out.tuple.base.colors = synced_colors(t.base.cartan, out.tuple.y);
  out.degenerate = tuple_degenerate(out.tuple);
  return out;
}

std::pair<BetheProblem, PolyTuple> connection_to_tuple(
    const CartanConnection& conn, double tol) {
  const GeneralizedCartanMatrix& A = conn.cartan;
  std::vector<BetheSite> sites;
  std::vector<std::vector<Complex>> byColor(A.rank());
  for (const ConnectionTerm& term : conn.terms) {
    int color = 0;
    for (int c = 1; c <= A.rank() && color == 0; ++c) {
      Coweight diff = term.residue - simple_coroot(A, c);
      if (diff.lpNorm<Eigen::Infinity>() < tol) color = c;
    }
    if (color > 0) {
      byColor[color - 1].push_back(term.pole);
      continue;
    }
    Coweight cw = -term.residue;
    if (!is_dominant_integral(cw, tol))
      throw InputError(
          "connection residue is neither a simple coroot nor a negated "
          "dominant integral coweight");
    sites.push_back({term.pole, cw.array().round().matrix()});
  }
  std::vector<int> colors;
  std::vector<Complex> roots;
  for (int c = 1; c <= A.rank(); ++c)
    for (Complex w : byColor[c - 1]) {
      colors.push_back(c);
      roots.push_back(w);
    }
  BetheProblem p = make_problem(A, sites, colors);
  check_collisions(p, roots);
  return {p, tuple_from_solution(p, roots)};
}

CartanConnection riccati_gauge(const CartanConnection& conn, int i, Complex a,
                               const RiccatiOptions& opts) {
  if (a == Complex(0.0)) return conn;
  auto [p, t] = connection_to_tuple(conn);
  RatFun G = master_integrand(t, i);
  double denScale = G.den.c.cwiseAbs().maxCoeff();
  if (std::abs(eval(G.den, opts.anchor)) < 1e-12 * std::max(1.0, denScale))
    throw InputError("anchor sits on a pole of the generating integrand");
  HermiteResult h = hermite_integrate_known(G, double_poles(t.y[i - 1]));
  Complex Fa = eval(antiderivative(h.polynomial_part), opts.anchor);
  if (!h.rational_part.is_zero())
    Fa += eval(h.rational_part, opts.anchor);
  Complex Ga = eval(G, opts.anchor);
  if (std::abs(Ga) == 0.0)
    throw InputError("anchor is a zero of the generating integrand");
  Complex c = Ga / a - Fa;
  ReproduceResult r = reproduce(t, i, c, opts.tol);
  TupleRoots tr = tuple_roots(r.tuple);
  return connection_from_roots(r.tuple.base, tr.roots);
}

static std::vector<int> degree_key(const PolyTuple& t) {
  std::vector<int> k;
  for (const Poly& y : t.y) k.push_back(std::max(y.degree(), 0));
  return k;
}

static bool same_tuple(const TupleRoots& a, const TupleRoots& b, double tol) {
  if (a.colors != b.colors) return false;
  std::vector<bool> used(b.roots.size(), false);
  for (size_t i = 0; i < a.roots.size(); ++i) {
    bool found = false;
    for (size_t j = 0; j < b.roots.size(); ++j) {
      if (used[j] || a.colors[i] != b.colors[j]) continue;
      if (std::abs(a.roots[i] - b.roots[j]) <= tol) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

PopulationGraph explore_population(const PolyTuple& seed,
                                   const PopulationOptions& opts) {
  PopulationGraph g;
  std::map<std::vector<int>, int> nodeIndex;
  std::vector<TupleRoots> seen;
  std::set<std::tuple<int, int, int>> edgeKeys;

  auto findOrAddNode = [&](const PolyTuple& t) {
    std::vector<int> key = degree_key(t);
    auto it = nodeIndex.find(key);
    if (it != nodeIndex.end()) return it->second;
    if (static_cast<int>(g.nodes.size()) >= opts.node_cap)
      throw CapExceededError("population node cap exceeded");
    PopulationNode node;
    node.degrees = tuple_degrees(t);
    node.mu_infinity = residue_at_infinity(t.base);
    try {
      CellClassification cl = classify_cell(t.base);
      node.lambda_infinity = cl.lambda_infinity;
      node.word = cl.word;
    } catch (const InconsistentResidueError&) {
      node.consistent = false;
    } catch (const NonTerminationError&) {
      node.consistent = false;
    }
    node.representative = tuple_roots(t);
    node.degenerate = tuple_degenerate(t);
    int idx = static_cast<int>(g.nodes.size());
    g.nodes.push_back(std::move(node));
    nodeIndex[key] = idx;
    return idx;
  };

  auto registerTuple = [&](const TupleRoots& tr) {
    for (const TupleRoots& s : seen)
      if (same_tuple(tr, s, opts.dedup_tol)) return false;
    if (static_cast<int>(seen.size()) >= opts.tuple_cap)
      throw CapExceededError("population tuple cap exceeded");
    seen.push_back(tr);
    return true;
  };

  std::vector<std::pair<PolyTuple, int>> queue;
  g.seed_node = findOrAddNode(seed);
  g.nodes[g.seed_node].tuples = 1;
  registerTuple(tuple_roots(seed));
  queue.emplace_back(seed, 0);

  for (size_t qhead = 0; qhead < queue.size(); ++qhead) {
    PolyTuple t = queue[qhead].first;
    int gen = queue[qhead].second;
    if (gen >= opts.depth) continue;
    int from = nodeIndex[degree_key(t)];

    for (int i = 1; i <= t.base.cartan.rank(); ++i) {
      Fertility fert;
      try {
        fert = fertility(t, i, opts.tol);
      } catch (const Error&) {
        continue;
      }
      if (!fert.fertile) continue;
      std::vector<Complex> cs = opts.c_samples;
      if (fert.drop_available) {
        bool hasZero = false;
        for (Complex c : cs) hasZero = hasZero || c == Complex(0.0);
        if (!hasZero) cs.push_back(0.0);
      }
      for (Complex c : cs) {
        ReproduceResult r;
        try {
          r = reproduce(t, i, c, opts.tol);
        } catch (const Error&) {
          continue;
        }
        int to = findOrAddNode(r.tuple);
        if (registerTuple(tuple_roots(r.tuple))) {
          g.nodes[to].tuples += 1;
          if (r.degenerate) g.nodes[to].degenerate = true;
          if (!r.degenerate && gen + 1 < opts.depth)
            queue.emplace_back(r.tuple, gen + 1);
        }
        auto ek = std::make_tuple(from, to, i);
        if (edgeKeys.insert(ek).second)
          g.edges.push_back({from, to, i, c, r.degree_dropped});
      }
    }
  }
  return g;
}

}  // namespace gop
