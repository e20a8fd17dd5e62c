#include <doctest.h>

#include <complex>
#include <vector>

#include <gaudinopers/gaudin.hpp>

using namespace gop;

namespace {

Eigen::VectorXd cw(double a) {
  Eigen::VectorXd v(1);
  v << a;
  return v;
}

Eigen::VectorXd cw2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

// spin-1/2 chain on two points, one lowering step
BetheProblem singlet_problem() {
  return make_problem(load_cartan("A1"), {{0.0, cw(1)}, {2.0, cw(1)}}, {1});
}

}  // namespace

TEST_CASE("weight space dimensions") {
  WeightBasis b2 = weight_basis(singlet_problem());
  CHECK(b2.n == 2);
  CHECK(b2.dim() == 2);

  BetheProblem p3 = make_problem(load_cartan("A2"), {{0.0, cw2(1, 1)}}, {1, 2});
  WeightBasis b3 = weight_basis(p3);
  CHECK(b3.n == 3);
  CHECK(b3.dim() == 2);  // E31 and the ordered product E21 E32

  BetheProblem pdeep = make_problem(load_cartan("A1"), {{0.0, cw(2)}}, {1, 1});
  CHECK(weight_basis(pdeep).dim() == 1);
}

TEST_CASE("raising against a single lowering step") {
  WeightBasis basis = weight_basis(singlet_problem());
  TensorKey lowered{GlMonomial{{2, 1}}, GlMonomial{}};
  REQUIRE(basis.index.count(lowered) == 1);
  // E12 E21 |0> = h |0> on the first factor, and the weight there is 1
  auto out = act(basis, 1, 2, 0, lowered);
  TensorKey vac{GlMonomial{}, GlMonomial{}};
  REQUIRE(out.size() == 1);
  CHECK(out.begin()->first == vac);
  CHECK(out.begin()->second == doctest::Approx(1.0));
  // on the untouched factor it annihilates
  CHECK(act(basis, 1, 2, 1, lowered).empty());
}

TEST_CASE("quadratic hamiltonians on the two-point chain") {
  WeightBasis basis = weight_basis(singlet_problem());
  auto H0 = gaudin_hamiltonian(basis, 0);
  auto H1 = gaudin_hamiltonian(basis, 1);

  // the pairwise sum telescopes away
  Eigen::MatrixXcd sum = Eigen::MatrixXcd(H0) + Eigen::MatrixXcd(H1);
  CHECK(sum.norm() < 1e-13);

  TensorKey e0{GlMonomial{{2, 1}}, GlMonomial{}};
  TensorKey e1{GlMonomial{}, GlMonomial{{2, 1}}};
  int i0 = basis.index.at(e0), i1 = basis.index.at(e1);
  Eigen::MatrixXcd M(H0);
  // exchange part 1/(z0-z1) = -1/2, diagonal h-h part +1/4
  CHECK(std::abs(M(i0, i0) - Complex(0.25)) < 1e-13);
  CHECK(std::abs(M(i1, i1) - Complex(0.25)) < 1e-13);
  CHECK(std::abs(M(i0, i1) - Complex(-0.5)) < 1e-13);
  CHECK(std::abs(M(i1, i0) - Complex(-0.5)) < 1e-13);
}

TEST_CASE("the root at the midpoint builds the singlet") {
  WeightBasis basis = weight_basis(singlet_problem());
  Eigen::VectorXcd v = bethe_vector(basis, {1.0});
  TensorKey e0{GlMonomial{{2, 1}}, GlMonomial{}};
  TensorKey e1{GlMonomial{}, GlMonomial{{2, 1}}};
  CHECK(std::abs(v(basis.index.at(e0)) - Complex(1.0)) < 1e-14);
  CHECK(std::abs(v(basis.index.at(e1)) - Complex(-1.0)) < 1e-14);

  auto H0 = gaudin_hamiltonian(basis, 0);
  EigenCheck ec = eigencheck(H0, v);
  CHECK(std::abs(ec.value - Complex(0.75)) < 1e-13);
  CHECK(ec.residual < 1e-13);

  // a coordinate vector is visibly not an eigenvector
  Eigen::VectorXcd bad = Eigen::VectorXcd::Zero(basis.dim());
  bad(0) = 1.0;
  CHECK(eigencheck(H0, bad).residual > 0.1);
}

TEST_CASE("hamiltonians commute on a three-point chain") {
  BetheProblem p = make_problem(
      load_cartan("A1"), {{0.0, cw(1)}, {1.0, cw(1)}, {3.5, cw(1)}}, {1});
  WeightBasis basis = weight_basis(p);
  CHECK(basis.dim() == 3);
  auto H0 = gaudin_hamiltonian(basis, 0);
  auto H1 = gaudin_hamiltonian(basis, 1);
  auto H2 = gaudin_hamiltonian(basis, 2);
  CHECK(commutator_norm(H0, H1) < 1e-10);
  CHECK(commutator_norm(H0, H2) < 1e-10);
  CHECK(commutator_norm(H1, H2) < 1e-10);
}

TEST_CASE("quadratic casimir values") {
  CHECK(casimir_scalar(2, cw(1)) == doctest::Approx(0.75));
  CHECK(casimir_scalar(3, cw2(1, 0)) == doctest::Approx(4.0 / 3.0));
  CHECK(casimir_scalar(3, cw2(1, 1)) == doctest::Approx(3.0));
  CHECK(casimir_scalar(2, cw(0)) == doctest::Approx(0.0));
}

TEST_CASE("eigenvalues match the scalar operator") {
  BetheProblem p = singlet_problem();
  OperMatch m = eigenvalue_vs_oper(p, {1.0});
  CHECK(std::abs(m.kappa - Complex(-1.0)) < 1e-10);
  CHECK(m.max_dev < 1e-12);
  REQUIRE(m.casimirs.size() == 2);
  CHECK(m.casimirs[0] == doctest::Approx(0.75));
  CHECK(m.casimirs[1] == doctest::Approx(0.75));
  REQUIRE(m.hamiltonians.size() == 2);
  CHECK(std::abs(m.hamiltonians[0].value - Complex(0.75)) < 1e-12);
  CHECK(std::abs(m.hamiltonians[1].value + Complex(0.75)) < 1e-12);
  for (const auto& h : m.hamiltonians) CHECK(h.residual < 1e-12);
  CHECK(m.samples.size() == 7);
}
