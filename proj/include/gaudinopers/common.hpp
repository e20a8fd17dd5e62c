#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gop {

using Complex = std::complex<double>;

inline constexpr double kDefaultTol = 1e-9;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputError : Error {
  using Error::Error;
};

// Two points of a configuration came closer than the collision guard allows.
struct CollisionError : Error {
  Complex a, b;
  CollisionError(const std::string& what, Complex a_, Complex b_)
      : Error(what), a(a_), b(b_) {}
};

struct DivergenceError : Error {
  std::vector<Complex> last_iterate;
  double last_residual;
  DivergenceError(const std::string& what, std::vector<Complex> it, double res)
      : Error(what), last_iterate(std::move(it)), last_residual(res) {}
};

struct LinearSolveError : Error {
  using Error::Error;
};

struct IllConditionedError : Error {
  using Error::Error;
};

// Raised when an integrand keeps simple-pole residues: the direction is not
// fertile (equivalently, the underlying root tuple is not a solution).
struct InfertileError : Error {
  std::vector<std::pair<Complex, Complex>> residues;  // (pole, residue)
  InfertileError(const std::string& what,
                 std::vector<std::pair<Complex, Complex>> r)
      : Error(what), residues(std::move(r)) {}
};

struct InconsistentResidueError : Error {
  using Error::Error;
};

struct NonTerminationError : Error {
  using Error::Error;
};

struct CapExceededError : Error {
  using Error::Error;
};

// Deterministic across platforms: raw generator words are mapped to doubles
// directly instead of going through distribution objects.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return double(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  Complex in_disc(Complex center, double radius) {
    for (;;) {
      double x = uniform(-1.0, 1.0), y = uniform(-1.0, 1.0);
      if (x * x + y * y <= 1.0) return center + radius * Complex(x, y);
    }
  }

  std::uint64_t word() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace gop
