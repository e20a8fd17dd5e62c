#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaudinopers/bethe.hpp"
#include "gaudinopers/common.hpp"

namespace gop {

struct CliOptions {
  double tol = 1e-12;       // Newton convergence threshold
  double coll_tol = 0.0;    // 0 derives the guard from the site geometry
  double reg_tol = 1e-9;    // singular-part threshold for erasure verdicts
  double dedup_tol = 1e-8;  // solution identification
  double radius = 0.0;      // 0 derives the start disc from the sites
  int starts = 64;
  int max_iter = 60;
  std::uint64_t seed = 1;
  int depth = 2;
  int cap = 512;
  std::vector<Complex> c_samples = {{0.9, 0.4}};  // off-axis: dodges real-symmetric degenerations
};

struct ProblemDocument {
  BetheProblem problem;
  std::optional<std::vector<Complex>> roots;
  CliOptions options;
};

// Strict ingestion: documents must carry schema "gaudin-opers/1"; unknown
// fields are rejected at every level; complex numbers are [re, im] pairs.
ProblemDocument parse_problem_document(const nlohmann::json& j);

// Root lists of a previously emitted solutions document, usable as starts.
std::vector<std::vector<Complex>> starts_from_solutions_document(
    const nlohmann::json& j);

// When `starts` is nonempty it replaces the random multi-start phase.
nlohmann::json run_solve(const ProblemDocument& doc,
                         const std::vector<std::vector<Complex>>& starts = {});
nlohmann::json run_verify(const ProblemDocument& doc);
nlohmann::json run_miura(const ProblemDocument& doc);
nlohmann::json run_reproduce(const ProblemDocument& doc, int direction,
                             Complex c);
nlohmann::json run_population(const ProblemDocument& doc);
nlohmann::json run_gaudin_check(const ProblemDocument& doc);

// Flat table form of any emitted document, dispatched on its "kind".
std::string to_csv(const nlohmann::json& doc);

// Full command-line entry point; returns the process exit code.  0 means the
// computation ran (regardless of reported residuals), 2 an input problem,
// 3 a numeric failure.
int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

}  // namespace gop
