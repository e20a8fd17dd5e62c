#include <doctest.h>

#include <algorithm>
#include <complex>
#include <vector>

#include <gaudinopers/ratfun.hpp>

using namespace gop;

namespace {

bool close(Complex a, Complex b, double tol = 1e-12) {
  return std::abs(a - b) <= tol;
}

Poly make_poly(std::initializer_list<Complex> ascending) {
  Eigen::VectorXcd c(ascending.size());
  int i = 0;
  for (Complex v : ascending) c(i++) = v;
  return Poly(c);
}

double coeff_dist(const Poly& a, const Poly& b) {
  Poly d = a - b;
  return d.c.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("polynomial basics") {
  Poly zero;
  CHECK(zero.degree() == -1);
  CHECK(zero.is_zero());

  Poly p = make_poly({4.0, -10.0, 3.0});  // 3x^2 - 10x + 4
  CHECK(p.degree() == 2);
  CHECK(close(eval(p, 2.0), 12.0 - 20.0 + 4.0));
  CHECK(close(p.lead(), 3.0));

  Poly d = derivative(p);
  CHECK(close(eval(d, 1.0), -10.0 + 6.0));
  Poly a = antiderivative(d);
  CHECK(close(eval(a, 3.0), eval(p, 3.0) - eval(p, 0.0)));
}

TEST_CASE("product and divmod are inverse") {
  Poly q = make_poly({1.0, 2.0});            // 2x + 1
  Poly d = make_poly({-1.0, 0.0, 1.0});      // x^2 - 1
  Poly r = make_poly({0.5});
  Poly p = q * d + r;
  PolyDivMod dm = divmod(p, d);
  CHECK(coeff_dist(dm.quot, q) < 1e-12);
  CHECK(coeff_dist(dm.rem, r) < 1e-12);
  CHECK_THROWS_AS(divmod(p, Poly()), InputError);
}

TEST_CASE("roots round trip through poly_from_roots") {
  std::vector<Complex> roots{1.0, -2.0, Complex(0.0, 3.0)};
  Poly p = poly_from_roots(2.0, roots);
  CHECK(p.degree() == 3);
  auto found = poly_roots(p);
  REQUIRE(found.size() == 3);
  for (Complex r : roots) {
    double best = 1e9;
    for (Complex f : found) best = std::min(best, std::abs(f - r));
    CHECK(best < 1e-9);
  }
}

TEST_CASE("derivative of a three-point product") {
  // d/dx [x(x-1)(x-4)] = 3x^2 - 10x + 4, whose roots are (10 +- sqrt(52))/6
  Poly prod = poly_from_roots(1.0, {0.0, 1.0, 4.0});
  Poly d = derivative(prod);
  CHECK(coeff_dist(d, make_poly({4.0, -10.0, 3.0})) < 1e-12);
  auto roots = poly_roots(d);
  std::sort(roots.begin(), roots.end(),
            [](Complex a, Complex b) { return a.real() < b.real(); });
  CHECK(close(roots[0], (10.0 - std::sqrt(52.0)) / 6.0, 1e-10));
  CHECK(close(roots[1], (10.0 + std::sqrt(52.0)) / 6.0, 1e-10));
}

TEST_CASE("taylor shift and deflation") {
  Poly p = make_poly({0.0, 0.0, 1.0});  // x^2
  Poly sh = taylor_shift(p, 1.0);       // (s+1)^2
  CHECK(coeff_dist(sh, make_poly({1.0, 2.0, 1.0})) < 1e-12);

  Poly q = poly_from_roots(1.0, {2.0, -3.0});
  Poly de = deflate(q, 2.0);
  CHECK(coeff_dist(de, make_poly({3.0, 1.0})) < 1e-12);
}

TEST_CASE("cluster_roots merges numerical multiplicities") {
  Poly p = poly_from_roots(1.0, {1.0, 1.0, 5.0});
  auto clusters = cluster_roots(p, poly_roots(p), 1e-4);
  REQUIRE(clusters.size() == 2);
  std::sort(clusters.begin(), clusters.end(),
            [](auto a, auto b) { return a.first.real() < b.first.real(); });
  CHECK(clusters[0].second == 2);
  CHECK(close(clusters[0].first, 1.0, 1e-7));
  CHECK(clusters[1].second == 1);
  CHECK(close(clusters[1].first, 5.0, 1e-9));
}

TEST_CASE("rational arithmetic and normalization") {
  RatFun f(make_poly({1.0, 0.0, 1.0}), make_poly({-1.0, 1.0}));  // (x^2+1)/(x-1)
  CHECK(close(eval(f, 2.0), 5.0));

  RatFun g = RatFun::constant(2.0);
  CHECK(close(eval(f + g, 2.0), 7.0));
  CHECK(close(eval(f * g, 2.0), 10.0));
  CHECK(close(eval(f / g, 2.0), 2.5));
  CHECK(close(eval(-f, 2.0), -5.0));

  // (x-1)(x-2)/((x-1)(x-3)) reduces to (x-2)/(x-3)
  RatFun r(poly_from_roots(1.0, {1.0, 2.0}), poly_from_roots(1.0, {1.0, 3.0}));
  RatFun n = rat_normalize(r);
  CHECK(n.num.degree() == 1);
  CHECK(n.den.degree() == 1);
  CHECK(close(eval(n, 0.0), eval(r, 0.0)));
  CHECK_THROWS_AS(RatFun(make_poly({1.0}), Poly()), InputError);
}

TEST_CASE("derivative of a rational function") {
  // d/dx 1/(x-1) = -1/(x-1)^2
  RatFun f(make_poly({1.0}), make_poly({-1.0, 1.0}));
  RatFun d = derivative(f);
  for (Complex x : {Complex(2.5, 0.0), Complex(0.0, 1.0)})
    CHECK(close(eval(d, x), -1.0 / ((x - 1.0) * (x - 1.0)), 1e-12));
}

TEST_CASE("rat_from_poles assembles residue sums") {
  RatFun f = rat_from_poles({{0.0, 1.0}, {1.0, 2.0}});
  Complex x(0.3, 0.4);
  CHECK(close(eval(f, x), 1.0 / x + 2.0 / (x - 1.0), 1e-13));
}

TEST_CASE("local jets at regular and singular centers") {
  // x/(x-1)^2 = 1/(x-1)^2 + 1/(x-1) around x = 1
  RatFun f(make_poly({0.0, 1.0}),
           poly_from_roots(1.0, {1.0, 1.0}));
  LocalJet j = local_jet(f, 1.0, 2);
  CHECK(j.lo <= -2);
  CHECK(close(j.coeff(-2), 1.0, 1e-12));
  CHECK(close(j.coeff(-1), 1.0, 1e-12));
  CHECK(close(j.coeff(0), 0.0, 1e-12));

  // regular center: plain Taylor coefficients
  LocalJet t = local_jet(f, 0.0, 3);
  CHECK(close(t.coeff(0), 0.0, 1e-12));
  CHECK(close(t.coeff(1), 1.0, 1e-12));  // f ~ x + 2x^2 + ...
  CHECK(close(t.coeff(2), 2.0, 1e-12));
}

TEST_CASE("jet arithmetic") {
  // geometric series 1/(1-x) at 0
  RatFun g(make_poly({1.0}), make_poly({1.0, -1.0}));
  LocalJet j = local_jet(g, 0.0, 5);
  for (int k = 0; k <= 5; ++k) CHECK(close(j.coeff(k), 1.0, 1e-12));

  LocalJet inv = jet_inverse(j);
  LocalJet one = j * inv;
  CHECK(close(one.coeff(0), 1.0, 1e-12));
  for (int k = 1; k <= one.hi(); ++k) CHECK(close(one.coeff(k), 0.0, 1e-12));

  LocalJet d = jet_derivative(j);  // 1/(1-x)^2
  CHECK(close(d.coeff(0), 1.0, 1e-12));
  CHECK(close(d.coeff(1), 2.0, 1e-12));
  CHECK(close(d.coeff(2), 3.0, 1e-12));

  LocalJet sq = jet_pow(j, 2);
  CHECK(close(sq.coeff(3), 4.0, 1e-12));
}

TEST_CASE("jet composition with a rational outer function") {
  // 1/x composed with phi(s) = 2 + s at s-center 0: 1/2 - s/4 + s^2/8 - ...
  RatFun f(make_poly({1.0}), make_poly({0.0, 1.0}));
  LocalJet phi;
  phi.center = 0.0;
  phi.lo = 0;
  phi.c = Eigen::VectorXcd::Zero(4);
  phi.c(0) = 2.0;
  phi.c(1) = 1.0;
  LocalJet comp = compose_ratfun_jet(f, phi);
  CHECK(close(comp.coeff(0), 0.5, 1e-12));
  CHECK(close(comp.coeff(1), -0.25, 1e-12));
  CHECK(close(comp.coeff(2), 0.125, 1e-12));
}

TEST_CASE("partial fractions") {
  // x/(x-1)^2 = 1/(x-1) + 1/(x-1)^2
  RatFun f(make_poly({0.0, 1.0}), poly_from_roots(1.0, {1.0, 1.0}));
  PartialFractions pf = partial_fractions(f);
  CHECK(pf.polynomial.is_zero());
  REQUIRE(pf.terms.size() == 2);
  for (const PFTerm& t : pf.terms) {
    CHECK(close(t.pole, 1.0, 1e-9));
    CHECK(close(t.coeff, 1.0, 1e-9));
  }

  // improper: x^3/(x-1) = x^2 + x + 1 + 1/(x-1)
  RatFun g(make_poly({0.0, 0.0, 0.0, 1.0}), make_poly({-1.0, 1.0}));
  PartialFractions pg = partial_fractions(g);
  CHECK(coeff_dist(pg.polynomial, make_poly({1.0, 1.0, 1.0})) < 1e-9);
  REQUIRE(pg.terms.size() == 1);
  CHECK(close(pg.terms[0].coeff, 1.0, 1e-9));
}

TEST_CASE("hermite reduction splits off exact derivatives") {
  // x/(x-1)^2: derivative part -1/(x-1), residue 1 at pole 1
  RatFun f(make_poly({0.0, 1.0}), poly_from_roots(1.0, {1.0, 1.0}));
  HermiteResult h = hermite_integrate(f);
  REQUIRE(h.residues.size() == 1);
  CHECK(close(h.residues[0].first, 1.0, 1e-9));
  CHECK(close(h.residues[0].second, 1.0, 1e-9));
  CHECK(h.polynomial_part.is_zero());

  // the decomposition reassembles to f pointwise
  RatFun dr = derivative(h.rational_part);
  for (Complex x : {Complex(2.2, 0.1), Complex(-0.7, 0.9)}) {
    Complex rhs = eval(dr, x) + eval(h.polynomial_part, x);
    for (auto [pole, res] : h.residues) rhs += res / (x - pole);
    CHECK(close(rhs, eval(f, x), 1e-9));
  }
}

TEST_CASE("hermite reduction with no simple residues") {
  RatFun f(make_poly({1.0}), poly_from_roots(1.0, {2.0, 2.0}));
  HermiteResult h = hermite_integrate(f);
  double worst = 0.0;
  for (auto [pole, res] : h.residues) worst = std::max(worst, std::abs(res));
  CHECK(worst < 1e-9);
  // antiderivative is -1/(x-2)
  for (Complex x : {Complex(3.0, 0.5)})
    CHECK(close(eval(h.rational_part, x) - eval(h.rational_part, Complex(10.0, 0.0)),
                -1.0 / (x - 2.0) + 1.0 / (10.0 - 2.0), 1e-9));
}

TEST_CASE("hermite with caller-supplied pole structure") {
  RatFun f(make_poly({0.0, 1.0}), poly_from_roots(1.0, {1.0, 1.0}));
  HermiteResult h = hermite_integrate_known(f, {{1.0, 2}});
  REQUIRE(h.residues.size() == 1);
  CHECK(close(h.residues[0].second, 1.0, 1e-12));
}
