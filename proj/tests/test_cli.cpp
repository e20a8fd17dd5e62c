#include <doctest.h>

#include <complex>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gaudinopers/cli.hpp>

using namespace gop;
using nlohmann::json;

namespace {

json base_doc() {
  return R"({
    "schema": "gaudin-opers/1",
    "cartan": "A1",
    "sites": [{"z": [0.0, 0.0], "coweight": [1.0]},
              {"z": [2.0, 0.0], "coweight": [1.0]}],
    "colors": [1],
    "roots": [[1.0, 0.0]]
  })"_json;
}

std::filesystem::path write_temp(const std::string& name,
                                 const std::string& body) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream f(p);
  f << body;
  return p;
}

int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
  std::vector<const char*> argv;
  argv.push_back("gaudin-opers");
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

}  // namespace

TEST_CASE("document ingestion is strict") {
  ProblemDocument doc = parse_problem_document(base_doc());
  CHECK(doc.problem.sites.size() == 2);
  CHECK(doc.problem.colors == std::vector<int>{1});
  REQUIRE(doc.roots.has_value());
  CHECK(std::abs((*doc.roots)[0] - Complex(1.0)) < 1e-15);

  json bad = base_doc();
  bad["schema"] = "gaudin-opers/2";
  CHECK_THROWS_AS(parse_problem_document(bad), InputError);

  bad = base_doc();
  bad["extra"] = 1;
  CHECK_THROWS_AS(parse_problem_document(bad), InputError);

  bad = base_doc();
  bad["sites"][0]["label"] = "left";
  CHECK_THROWS_AS(parse_problem_document(bad), InputError);

  bad = base_doc();
  bad["options"] = {{"tol", 1e-10}, {"mystery", 3}};
  CHECK_THROWS_AS(parse_problem_document(bad), InputError);

  bad = base_doc();
  bad["options"] = {{"tol", 1e-10}, {"starts", 16}};
  CHECK(parse_problem_document(bad).options.starts == 16);

  // complex values must be [re, im] pairs
  bad = base_doc();
  bad["roots"][0] = 1.0;
  CHECK_THROWS_AS(parse_problem_document(bad), InputError);
  bad = base_doc();
  bad["sites"][0]["z"] = json::array({0.0});
  CHECK_THROWS_AS(parse_problem_document(bad), InputError);

  bad = base_doc();
  bad["colors"][0] = 1.5;
  CHECK_THROWS_AS(parse_problem_document(bad), InputError);

  bad = base_doc();
  bad["cartan"] = json::array({json::array({2, -1})});
  CHECK_THROWS_AS(parse_problem_document(bad), InputError);
}

TEST_CASE("solving emits and re-ingests solution documents") {
  ProblemDocument doc = parse_problem_document(base_doc());
  json out = run_solve(doc);
  CHECK(out["kind"] == "solutions");
  CHECK(out["schema"] == "gaudin-opers/1");
  REQUIRE(out["solutions"].size() == 1);
  const json& sol = out["solutions"][0];
  CHECK(std::abs(sol["roots"][0][0].get<double>() - 1.0) < 1e-10);
  CHECK(std::abs(sol["roots"][0][1].get<double>()) < 1e-10);
  CHECK(sol["residual"].get<double>() < 1e-12);
  CHECK(sol["isolated"].get<bool>());
  CHECK(sol["jacobian_rank"].get<int>() == 1);
  CHECK(out["classification"]["consistent"].get<bool>());

  auto starts = starts_from_solutions_document(out);
  REQUIRE(starts.size() == 1);
  CHECK(std::abs(starts[0][0] - Complex(1.0)) < 1e-10);
  json again = run_solve(doc, starts);
  CHECK(again["solutions"].size() == 1);
  CHECK(again["failed_starts"].get<int>() == 0);

  CHECK_THROWS_AS(starts_from_solutions_document(base_doc()), InputError);
}

TEST_CASE("verification reports erasure both ways") {
  ProblemDocument doc = parse_problem_document(base_doc());
  json good = run_verify(doc);
  CHECK(good["kind"] == "verification");
  CHECK(good["residual"].get<double>() < 1e-12);
  REQUIRE(good["regularity"].is_array());
  for (const auto& pt : good["regularity"]) CHECK(pt["erased"].get<bool>());

  json moved = base_doc();
  moved["roots"][0][0] = 1.05;
  json badrep = run_verify(parse_problem_document(moved));
  CHECK(badrep["residual"].get<double>() > 1e-3);
  bool all_erased = true;
  for (const auto& pt : badrep["regularity"])
    all_erased = all_erased && pt["erased"].get<bool>();
  CHECK_FALSE(all_erased);
}

TEST_CASE("factored operator document") {
  ProblemDocument doc = parse_problem_document(base_doc());
  json out = run_miura(doc);
  CHECK(out["kind"] == "miura-oper");
  CHECK(out["type"] == "A");
  CHECK(out["order"].get<int>() == 2);
  REQUIRE(out["coefficients"].size() == 1);
  CHECK(out["coefficients"][0]["k"].get<int>() == 1);
  CHECK(out["coefficients"][0].contains("num"));
  CHECK(out["coefficients"][0].contains("den"));
  for (const auto& pt : out["regularity"]) CHECK(pt["erased"].get<bool>());
}

TEST_CASE("reproduction and population documents") {
  ProblemDocument doc = parse_problem_document(base_doc());
  json rep = run_reproduce(doc, 1, Complex(0.9, 0.4));
  CHECK(rep["kind"] == "reproduction");
  CHECK(rep["direction"].get<int>() == 1);
  CHECK(rep["degrees"][0].get<int>() == 2);
  CHECK_FALSE(rep["degree_dropped"].get<bool>());
  CHECK(rep["residual"].get<double>() < 1e-8);

  json pop = run_population(doc);
  CHECK(pop["kind"] == "population");
  CHECK(pop["nodes"].size() == 2);
  CHECK(pop["edges"].size() >= 1);

  json gc = run_gaudin_check(doc);
  CHECK(gc["kind"] == "gaudin-report");
  CHECK(std::abs(gc["kappa"][0].get<double>() + 1.0) < 1e-10);
  CHECK(gc["max_deviation"].get<double>() < 1e-12);
}

TEST_CASE("table form of emitted documents") {
  ProblemDocument doc = parse_problem_document(base_doc());
  std::string csv = to_csv(run_solve(doc));
  CHECK(csv.find(',') != std::string::npos);
  CHECK(csv.find('\n') != std::string::npos);
  CHECK(csv.find("residual") != std::string::npos);
}

TEST_CASE("process entry point and exit codes") {
  auto good = write_temp("gopcli_good.json", base_doc().dump());
  std::string out, err;

  CHECK(run_cli({"solve", good.string()}, &out) == 0);
  json parsed = json::parse(out);
  CHECK(parsed["kind"] == "solutions");

  CHECK(run_cli({"solve", good.string(), "--out", "csv"}, &out) == 0);
  CHECK(out.find(',') != std::string::npos);

  // a reported failure is still a completed computation
  json moved = base_doc();
  moved["roots"][0][0] = 1.05;
  auto movedp = write_temp("gopcli_moved.json", moved.dump());
  CHECK(run_cli({"verify", movedp.string()}, &out) == 0);

  auto garbage = write_temp("gopcli_garbage.json", "{not json");
  CHECK(run_cli({"solve", garbage.string()}, &out, &err) == 2);
  CHECK(err.find("input error") != std::string::npos);

  json badschema = base_doc();
  badschema["schema"] = "other/9";
  auto badp = write_temp("gopcli_schema.json", badschema.dump());
  CHECK(run_cli({"solve", badp.string()}, &out, &err) == 2);

  json onsite = base_doc();
  onsite["roots"][0] = json::array({0.0, 0.0});
  auto collp = write_temp("gopcli_collide.json", onsite.dump());
  CHECK(run_cli({"verify", collp.string()}, &out, &err) == 2);

  // reproduction in an infertile direction is a numeric failure
  CHECK(run_cli({"reproduce", movedp.string(), "--direction", "1"}, &out,
                &err) == 3);
  CHECK(err.find("computation failed") != std::string::npos);
}
