#pragma once

#include <utility>
#include <vector>

#include "gaudinopers/bethe.hpp"
#include "gaudinopers/common.hpp"
#include "gaudinopers/miura.hpp"
#include "gaudinopers/ratfun.hpp"

namespace gop {

// Monic polynomial per simple root; y[i-1] collects the roots of color i.
// base carries the sites and Cartan data, with base.colors kept in sync with
// the degrees (ascending color order).
struct PolyTuple {
  BetheProblem base;
  std::vector<Poly> y;
};

// Groups the roots of a solved problem by color.
PolyTuple tuple_from_solution(const BetheProblem& p,
                              const std::vector<Complex>& roots);
// All y_i = 1 (no roots); keeps the sites and Cartan matrix of p.
PolyTuple empty_tuple(const BetheProblem& p);

struct TupleRoots {
  std::vector<int> colors;      // ascending
  std::vector<Complex> roots;   // sorted by (re, im) within each color
};
TupleRoots tuple_roots(const PolyTuple& t);

Eigen::VectorXi tuple_degrees(const PolyTuple& t);
// Roots collide with each other (same color) or with a site.
bool tuple_degenerate(const PolyTuple& t);
// Re-runs Newton from the tuple's roots to squeeze out accumulated error.
PolyTuple polish_tuple(const PolyTuple& t, const NewtonOptions& opts = {});

// prod_k (x - z_k)^{<alpha_i, coweight_k>} * prod_{j!=i} y_j^{-a(j,i)} / y_i^2.
// Its simple-pole residues at the roots of y_i vanish exactly at solutions.
RatFun master_integrand(const PolyTuple& t, int i);

struct Fertility {
  bool fertile = false;
  double max_residue = 0.0;
  std::vector<std::pair<Complex, Complex>> residues;  // (pole, residue)
  bool drop_available = false;  // integrand has no polynomial part
};
Fertility fertility(const PolyTuple& t, int i, double tol = 1e-8);

struct ReproduceResult {
  PolyTuple tuple;
  bool degree_dropped = false;  // new degree below the generic value
  bool degenerate = false;      // new tuple has root collisions
};

// Replaces y_i by the monic multiple of y_i*(F + c) where F is an
// antiderivative of the master integrand; throws InfertileError when the
// integrand has simple poles with residues above tol.
ReproduceResult reproduce(const PolyTuple& t, int i, Complex c,
                          double tol = 1e-8);

struct RiccatiOptions {
  Complex anchor = 0.0;  // where the new component's gauge datum is read off
  double tol = 1e-8;
};

// Splits the terms of a connection back into sites (residue = -coweight,
// dominant) and colored roots (residue = a simple coroot).
std::pair<BetheProblem, PolyTuple> connection_to_tuple(
    const CartanConnection& conn, double tol = 1e-6);

// The generation move in first-order form: picks the integration constant so
// that the logarithmic derivative of the replaced factor takes value a at the
// anchor, and returns the regenerated connection.  a = 0 returns conn as is.
CartanConnection riccati_gauge(const CartanConnection& conn, int i, Complex a,
                               const RiccatiOptions& opts = {});

struct PopulationNode {
  Eigen::VectorXi degrees;
  Coweight mu_infinity;
  bool consistent = true;    // classification succeeded
  Coweight lambda_infinity;  // valid when consistent
  WeylWord word;             // valid when consistent
  TupleRoots representative;
  bool degenerate = false;
  int tuples = 0;  // distinct tuples seen with this degree vector
};

struct PopulationEdge {
  int from = 0, to = 0;
  int direction = 0;  // color used
  Complex c;          // first integration constant that produced the edge
  bool dropped = false;
};

struct PopulationGraph {
  std::vector<PopulationNode> nodes;
  std::vector<PopulationEdge> edges;
  int seed_node = 0;
};

struct PopulationOptions {
  int depth = 2;
  std::vector<Complex> c_samples = {{0.9, 0.4}};  // off-axis: dodges real-symmetric degenerations
  double tol = 1e-8;        // fertility threshold
  double dedup_tol = 1e-7;  // tuple identification
  int node_cap = 512;
  int tuple_cap = 4096;
};

// Breadth-first closure of the generation moves from a seed tuple.  Nodes are
// degree vectors; a degree-drop constant (c = 0 when available) is always
// tried alongside the samples.  Degenerate tuples are recorded but not
// expanded further.
PopulationGraph explore_population(const PolyTuple& seed,
                                   const PopulationOptions& opts = {});

}  // namespace gop
