#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include <gaudinopers/bethe.hpp>
#include <gaudinopers/repro.hpp>

using namespace gop;

namespace {

Eigen::VectorXd cw(double a) {
  Eigen::VectorXd v(1);
  v << a;
  return v;
}

BetheProblem one_site() {
  return make_problem(load_cartan("A1"), {{0.0, cw(1)}}, {});
}

BetheProblem two_site() {
  return make_problem(load_cartan("A1"), {{0.0, cw(1)}, {2.0, cw(1)}}, {1});
}

}  // namespace

TEST_CASE("tuple round trips") {
  BetheProblem p = two_site();
  PolyTuple t = tuple_from_solution(p, {1.0});
  REQUIRE(t.y.size() == 1);
  CHECK(t.y[0].degree() == 1);
  CHECK(std::abs(eval(t.y[0], Complex(1.0))) < 1e-14);

  TupleRoots tr = tuple_roots(t);
  REQUIRE(tr.roots.size() == 1);
  CHECK(tr.colors == std::vector<int>{1});
  CHECK(std::abs(tr.roots[0] - Complex(1.0)) < 1e-14);

  Eigen::VectorXi deg = tuple_degrees(t);
  CHECK(deg(0) == 1);
  CHECK_FALSE(tuple_degenerate(t));

  PolyTuple e = empty_tuple(p);
  CHECK(tuple_degrees(e)(0) == 0);
  CHECK(tuple_roots(e).roots.empty());
}

TEST_CASE("degenerate tuples are flagged") {
  BetheProblem p = two_site();
  PolyTuple t = empty_tuple(p);
  Eigen::VectorXcd dbl(3);
  dbl << 0.25, -1.0, 1.0;  // (x - 0.5)^2
  t.y[0] = Poly(dbl);
  CHECK(tuple_degenerate(t));
  Eigen::VectorXcd onsite(2);
  onsite << -2.0, 1.0;  // root on the site at 2
  t.y[0] = Poly(onsite);
  CHECK(tuple_degenerate(t));
}

TEST_CASE("master integrand of the empty one-site tuple") {
  PolyTuple t = empty_tuple(one_site());
  RatFun f = master_integrand(t, 1);
  // (x - 0)^1 with y_1 = 1: plain x
  for (Complex x : {Complex(0.7, 0.0), Complex(-2.0, 1.0)})
    CHECK(std::abs(eval(f, x) - x) < 1e-14);

  Fertility fert = fertility(t, 1);
  CHECK(fert.fertile);
  CHECK(fert.max_residue < 1e-12);
  CHECK_FALSE(fert.drop_available);  // pure polynomial part
}

TEST_CASE("one generation step from the empty tuple") {
  PolyTuple seed = empty_tuple(one_site());
  Complex c(0.3, 0.2);
  ReproduceResult r = reproduce(seed, 1, c);
  CHECK_FALSE(r.degree_dropped);
  CHECK_FALSE(r.degenerate);
  REQUIRE(r.tuple.y[0].degree() == 2);
  // antiderivative of x is x^2/2, so the new factor is x^2 + 2c
  CHECK(std::abs(r.tuple.y[0].c(0) - 2.0 * c) < 1e-12);
  CHECK(std::abs(r.tuple.y[0].c(1)) < 1e-12);
  CHECK(std::abs(r.tuple.y[0].c(2) - 1.0) < 1e-12);

  // the two new roots solve the equations with both colors present
  TupleRoots tr = tuple_roots(r.tuple);
  BetheProblem p2 = make_problem(load_cartan("A1"), {{0.0, cw(1)}}, {1, 1});
  CHECK(residual(p2, tr.roots).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(r.tuple.base.colors == std::vector<int>{1, 1});
}

TEST_CASE("the degree-drop constant undoes the step") {
  PolyTuple seed = empty_tuple(one_site());
  ReproduceResult up = reproduce(seed, 1, Complex(0.3, 0.2));
  Fertility fert = fertility(up.tuple, 1);
  CHECK(fert.fertile);
  CHECK(fert.drop_available);  // proper rational integrand
  ReproduceResult down = reproduce(up.tuple, 1, 0.0);
  CHECK(down.degree_dropped);
  CHECK(down.tuple.y[0].degree() == 0);
  CHECK(tuple_roots(down.tuple).roots.empty());
}

TEST_CASE("unresolved simple poles block the move") {
  BetheProblem p = make_problem(load_cartan("A1"), {{0.0, cw(1)}}, {1});
  PolyTuple t = empty_tuple(p);
  Eigen::VectorXcd lin_c(2);
  lin_c << -0.3, 1.0;  // x - 0.3 is not a solution factor
  t.y[0] = Poly(lin_c);
  t.base.colors = {1};

  Fertility fert = fertility(t, 1);
  CHECK_FALSE(fert.fertile);
  REQUIRE(fert.residues.size() == 1);
  CHECK(std::abs(fert.residues[0].first - Complex(0.3)) < 1e-12);
  CHECK(std::abs(fert.residues[0].second - Complex(1.0)) < 1e-10);
  CHECK(fert.max_residue > 0.5);
  CHECK_THROWS_AS(reproduce(t, 1, Complex(1.0)), InfertileError);
}

TEST_CASE("connection to tuple and back") {
  BetheProblem p = two_site();
  CartanConnection conn = connection_from_roots(p, {1.0});
  auto [q, t] = connection_to_tuple(conn);
  CHECK(q.sites.size() == 2);
  TupleRoots tr = tuple_roots(t);
  REQUIRE(tr.roots.size() == 1);
  CHECK(std::abs(tr.roots[0] - Complex(1.0)) < 1e-10);
  CHECK(tr.colors == std::vector<int>{1});

  CartanConnection back = connection_from_roots(p, tr.roots);
  for (Complex x : {Complex(0.5, 0.5), Complex(-1.0, 0.25)})
    CHECK(std::abs(eval(component(back, 1), x) - eval(component(conn, 1), x)) <
          1e-10);
}

TEST_CASE("first-order generation move") {
  BetheProblem p = two_site();
  CartanConnection conn = connection_from_roots(p, {1.0});

  CartanConnection same = riccati_gauge(conn, 1, 0.0);
  for (Complex x : {Complex(0.5, 0.5), Complex(3.0, -1.0)})
    CHECK(std::abs(eval(component(same, 1), x) - eval(component(conn, 1), x)) <
          1e-12);

  RiccatiOptions opts;
  opts.anchor = Complex(0.5, 0.5);
  CartanConnection moved = riccati_gauge(conn, 1, Complex(0.4, -0.7), opts);
  auto [q, t] = connection_to_tuple(moved);
  CHECK(tuple_degrees(t)(0) == 2);
  CHECK(residual(t.base, tuple_roots(t).roots).cwiseAbs().maxCoeff() <
        1e-8);
}

TEST_CASE("population of the one-site seed") {
  PolyTuple seed = empty_tuple(one_site());

  PopulationOptions shallow;
  shallow.depth = 0;
  PopulationGraph g0 = explore_population(seed, shallow);
  CHECK(g0.nodes.size() == 1);
  CHECK(g0.edges.empty());

  PopulationOptions one;
  one.depth = 1;
  PopulationGraph g = explore_population(seed, one);
  REQUIRE(g.nodes.size() == 2);
  REQUIRE(g.edges.size() == 1);
  const PopulationNode& s = g.nodes[g.seed_node];
  CHECK(s.degrees(0) == 0);
  CHECK(s.mu_infinity(0) == doctest::Approx(1.0));
  CHECK(s.word.empty());

  const PopulationEdge& e = g.edges[0];
  CHECK(e.from == g.seed_node);
  CHECK(e.direction == 1);
  const PopulationNode& other = g.nodes[e.to];
  CHECK(other.degrees(0) == 2);
  CHECK(other.mu_infinity(0) == doctest::Approx(-3.0));
  CHECK(other.consistent);
  CHECK(other.lambda_infinity(0) == doctest::Approx(1.0));
  CHECK(other.word == WeylWord{1});
  CHECK(s.lambda_infinity(0) == doctest::Approx(other.lambda_infinity(0)));
}

TEST_CASE("population of the two-site seed") {
  BetheProblem p = two_site();
  PolyTuple seed = tuple_from_solution(p, {1.0});
  PopulationGraph g = explore_population(seed);
  CHECK(g.nodes.size() == 2);
  for (const auto& n : g.nodes) {
    CHECK(n.consistent);
    CHECK(n.lambda_infinity(0) == doctest::Approx(0.0));
    CHECK_FALSE(n.degenerate);
    CHECK(n.tuples >= 1);
  }
  for (const auto& e : g.edges) {
    if (e.from == e.to) continue;  // move stayed inside one cell
    double from = g.nodes[e.from].mu_infinity(0);
    double to = g.nodes[e.to].mu_infinity(0);
    CHECK(to == doctest::Approx(-from - 2.0));  // reflection about -1
  }
}
