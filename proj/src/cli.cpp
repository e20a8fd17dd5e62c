#include "gaudinopers/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gaudinopers/gaudin.hpp"
#include "gaudinopers/miura.hpp"
#include "gaudinopers/repro.hpp"

namespace gop {

using nlohmann::json;

namespace {

json cpx(Complex z) { return json::array({z.real(), z.imag()}); }

json vecd(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json veci(const Eigen::VectorXi& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json poly_json(const Poly& p) {
  json a = json::array();
  for (int i = 0; i < p.c.size(); ++i) a.push_back(cpx(p.c[i]));
  return a;
}

void require_object(const json& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  if (!j.is_object())
    throw InputError(where + " must be a JSON object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || item.key() == k;
    if (!ok)
      throw InputError("unknown field '" + item.key() + "' in " + where);
  }
}

Complex parse_complex(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw InputError(where + " must be a [re, im] pair");
  return {v[0].get<double>(), v[1].get<double>()};
}

std::vector<Complex> parse_complex_list(const json& v,
                                        const std::string& where) {
  if (!v.is_array()) throw InputError(where + " must be an array");
  std::vector<Complex> out;
  for (size_t k = 0; k < v.size(); ++k)
    out.push_back(parse_complex(v[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

GeneralizedCartanMatrix parse_cartan(const json& v) {
  if (v.is_string()) return load_cartan(v.get<std::string>());
  if (v.is_array()) {
    const int n = static_cast<int>(v.size());
    Eigen::MatrixXi a(n, n);
    for (int i = 0; i < n; ++i) {
      if (!v[i].is_array() || static_cast<int>(v[i].size()) != n)
        throw InputError("cartan matrix rows must all have the full length");
      for (int j = 0; j < n; ++j) {
        if (!v[i][j].is_number_integer())
          throw InputError("cartan matrix entries must be integers");
        a(i, j) = v[i][j].get<int>();
      }
    }
    return make_cartan(a);
  }
  throw InputError("cartan must be a type label or an integer matrix");
}

json cartan_echo(const GeneralizedCartanMatrix& A) {
  if (A.kind != "general") return A.kind + std::to_string(A.rank());
  json rows = json::array();
  for (int i = 0; i < A.rank(); ++i) {
    json row = json::array();
    for (int j = 0; j < A.rank(); ++j) row.push_back(A.a(i, j));
    rows.push_back(row);
  }
  return rows;
}

CliOptions parse_options(const json& j) {
  CliOptions o;
  require_object(j,
                 {"tol", "coll_tol", "reg_tol", "dedup_tol", "radius",
                  "starts", "max_iter", "seed", "depth", "cap", "c_samples"},
                 "options");
  if (j.contains("tol")) o.tol = j["tol"].get<double>();
  if (j.contains("coll_tol")) o.coll_tol = j["coll_tol"].get<double>();
  if (j.contains("reg_tol")) o.reg_tol = j["reg_tol"].get<double>();
  if (j.contains("dedup_tol")) o.dedup_tol = j["dedup_tol"].get<double>();
  if (j.contains("radius")) o.radius = j["radius"].get<double>();
  if (j.contains("starts")) o.starts = j["starts"].get<int>();
  if (j.contains("max_iter")) o.max_iter = j["max_iter"].get<int>();
  if (j.contains("seed")) o.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("depth")) o.depth = j["depth"].get<int>();
  if (j.contains("cap")) o.cap = j["cap"].get<int>();
  if (j.contains("c_samples"))
    o.c_samples = parse_complex_list(j["c_samples"], "options.c_samples");
  return o;
}

json options_echo(const CliOptions& o) {
  json s = json::array();
  for (Complex c : o.c_samples) s.push_back(cpx(c));
  return json{{"tol", o.tol},           {"coll_tol", o.coll_tol},
              {"reg_tol", o.reg_tol},   {"dedup_tol", o.dedup_tol},
              {"radius", o.radius},     {"starts", o.starts},
              {"max_iter", o.max_iter}, {"seed", o.seed},
              {"depth", o.depth},       {"cap", o.cap},
              {"c_samples", s}};
}

json problem_echo(const ProblemDocument& doc) {
  json sites = json::array();
  for (const BetheSite& s : doc.problem.sites)
    sites.push_back(json{{"z", cpx(s.z)}, {"coweight", vecd(s.coweight)}});
  return json{{"cartan", cartan_echo(doc.problem.cartan)},
              {"sites", sites},
              {"colors", doc.problem.colors}};
}

json classification_json(const BetheProblem& p) {
  json c;
  c["mu_infinity"] = vecd(residue_at_infinity(p));
  try {
    CellClassification cl = classify_cell(p);
    c["consistent"] = true;
    c["lambda_infinity"] = vecd(cl.lambda_infinity);
    c["word"] = cl.word;
  } catch (const InconsistentResidueError& e) {
    c["consistent"] = false;
    c["reason"] = e.what();
  }
  return c;
}

json regularity_json(const std::vector<PointRegularity>& reports) {
  json arr = json::array();
  for (const PointRegularity& r : reports) {
    json tails = json::array();
    for (const CoefficientTail& t : r.tails) {
      json cs = json::array();
      for (const auto& [order, value] : t.coeffs)
        cs.push_back(json{{"order", order}, {"value", cpx(value)}});
      tails.push_back(json{{"k", t.k}, {"coeffs", cs}});
    }
    arr.push_back(json{{"point", cpx(r.point)},
                       {"erased", r.erased},
                       {"max_tail", r.max_tail},
                       {"tails", tails}});
  }
  return arr;
}

bool classical_kind(const BetheProblem& p) {
  return p.cartan.kind == "A" || p.cartan.kind == "B" || p.cartan.kind == "C";
}

std::vector<PointRegularity> regularity_at(const BetheProblem& p,
                                           const std::vector<Complex>& roots,
                                           double reg_tol) {
  CartanConnection conn = connection_from_roots(p, roots);
  ScalarOper oper = miura_scalar_oper(conn, p.cartan.kind[0]);
  return regularity_report(oper, roots, reg_tol);
}

const std::vector<Complex>& require_roots(const ProblemDocument& doc) {
  if (!doc.roots)
    throw InputError("this subcommand needs a document with roots");
  if (doc.roots->size() != doc.problem.colors.size())
    throw InputError("roots do not match the color list");
  return *doc.roots;
}

std::string fmt(double x) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", x);
  return b;
}

}  // namespace

ProblemDocument parse_problem_document(const json& j) {
  require_object(j, {"schema", "cartan", "sites", "colors", "roots", "options"},
                 "document");
  if (!j.contains("schema") || j["schema"] != "gaudin-opers/1")
    throw InputError("document schema must be \"gaudin-opers/1\"");
  if (!j.contains("cartan") || !j.contains("sites") || !j.contains("colors"))
    throw InputError("document needs cartan, sites, and colors");

  GeneralizedCartanMatrix A = parse_cartan(j["cartan"]);

  std::vector<BetheSite> sites;
  if (!j["sites"].is_array()) throw InputError("sites must be an array");
  for (size_t k = 0; k < j["sites"].size(); ++k) {
    const json& s = j["sites"][k];
    std::string where = "sites[" + std::to_string(k) + "]";
    require_object(s, {"z", "coweight"}, where);
    if (!s.contains("z") || !s.contains("coweight"))
      throw InputError(where + " needs z and coweight");
    BetheSite site;
    site.z = parse_complex(s["z"], where + ".z");
    const json& cw = s["coweight"];
    if (!cw.is_array() || static_cast<int>(cw.size()) != A.rank())
      throw InputError(where + ".coweight must have one entry per simple root");
    site.coweight = Coweight(A.rank());
    for (int i = 0; i < A.rank(); ++i) {
      if (!cw[i].is_number())
        throw InputError(where + ".coweight entries must be numbers");
      site.coweight[i] = cw[i].get<double>();
    }
    sites.push_back(site);
  }

  if (!j["colors"].is_array()) throw InputError("colors must be an array");
  std::vector<int> colors;
  for (const json& c : j["colors"]) {
    if (!c.is_number_integer())
      throw InputError("colors must be integers");
    colors.push_back(c.get<int>());
  }

  ProblemDocument doc;
  doc.options = j.contains("options") ? parse_options(j["options"])
                                      : CliOptions{};
  doc.problem =
      make_problem(A, sites, colors, doc.options.coll_tol);
  if (j.contains("roots"))
    doc.roots = parse_complex_list(j["roots"], "roots");
  return doc;
}

std::vector<std::vector<Complex>> starts_from_solutions_document(
    const json& j) {
  if (!j.is_object() || !j.contains("schema") || j["schema"] != "gaudin-opers/1")
    throw InputError("starts document schema must be \"gaudin-opers/1\"");
  if (!j.contains("solutions") || !j["solutions"].is_array())
    throw InputError("starts document has no solutions array");
  std::vector<std::vector<Complex>> out;
  for (const json& s : j["solutions"]) {
    if (!s.is_object() || !s.contains("roots"))
      throw InputError("solution entries must carry roots");
    out.push_back(parse_complex_list(s["roots"], "solutions.roots"));
  }
  return out;
}

json run_solve(const ProblemDocument& doc,
               const std::vector<std::vector<Complex>>& starts) {
  const BetheProblem& p = doc.problem;
  NewtonOptions nopts;
  nopts.tol = doc.options.tol;
  nopts.max_iter = doc.options.max_iter;

  MultiStartResult res;
  if (!starts.empty()) {
    for (const std::vector<Complex>& s : starts) {
      try {
        BetheSolution sol = newton_solve(p, s, nopts);
        bool dup = false;
        for (const BetheSolution& seen : res.solutions)
          dup = dup ||
                same_solution(p, sol.roots, seen.roots, doc.options.dedup_tol);
        if (!dup) res.solutions.push_back(std::move(sol));
      } catch (const Error&) {
        res.failed_starts += 1;
      }
    }
  } else {
    MultiStartOptions mopts;
    mopts.starts = doc.options.starts;
    mopts.seed = doc.options.seed;
    mopts.dedup_tol = doc.options.dedup_tol;
    mopts.radius = doc.options.radius;
    mopts.newton = nopts;
    res = multi_start_solve(p, mopts);
  }

  json classification = classification_json(p);
  json sols = json::array();
  for (const BetheSolution& sol : res.solutions) {
    json roots = json::array();
    for (Complex w : sol.roots) roots.push_back(cpx(w));
    json entry{{"roots", roots},
               {"residual", sol.residual},
               {"iterations", sol.iterations},
               {"jacobian_rank", sol.jacobian_rank},
               {"isolated", sol.isolated}};
    if (classical_kind(p) && !sol.roots.empty())
      entry["regularity"] =
          regularity_json(regularity_at(p, sol.roots, doc.options.reg_tol));
    sols.push_back(entry);
  }

  json out{{"schema", "gaudin-opers/1"},
           {"kind", "solutions"},
           {"problem", problem_echo(doc)},
           {"options", options_echo(doc.options)},
           {"classification", classification},
           {"failed_starts", res.failed_starts},
           {"solutions", sols}};
  return out;
}

json run_verify(const ProblemDocument& doc) {
  const std::vector<Complex>& roots = require_roots(doc);
  const BetheProblem& p = doc.problem;
  check_collisions(p, roots);
  Eigen::VectorXcd r = residual(p, roots);
  json rv = json::array();
  for (int i = 0; i < r.size(); ++i) rv.push_back(cpx(r[i]));
  json out{{"schema", "gaudin-opers/1"},
           {"kind", "verification"},
           {"problem", problem_echo(doc)},
           {"residual", residual_norm(p, roots)},
           {"residual_vector", rv},
           {"classification", classification_json(p)}};
  if (classical_kind(p) && !roots.empty())
    out["regularity"] =
        regularity_json(regularity_at(p, roots, doc.options.reg_tol));
  return out;
}

json run_miura(const ProblemDocument& doc) {
  const std::vector<Complex>& roots = require_roots(doc);
  const BetheProblem& p = doc.problem;
  if (!classical_kind(p))
    throw InputError("scalar operators need classical type A, B, or C");
  CartanConnection conn = connection_from_roots(p, roots);
  ScalarOper oper = miura_scalar_oper(conn, p.cartan.kind[0]);
  json coeffs = json::array();
  for (size_t k = 0; k < oper.v.size(); ++k) {
    RatFun f = rat_normalize(oper.v[k]);
    coeffs.push_back(json{{"k", k + 1},
                          {"num", poly_json(f.num)},
                          {"den", poly_json(f.den)}});
  }
  json out{{"schema", "gaudin-opers/1"},
           {"kind", "miura-oper"},
           {"problem", problem_echo(doc)},
           {"type", std::string(1, oper.type)},
           {"order", oper.order},
           {"coefficients", coeffs},
           {"residue_at_infinity",
            vecd(residue_at_infinity_connection(conn))}};
  if (!roots.empty())
    out["regularity"] =
        regularity_json(regularity_report(oper, roots, doc.options.reg_tol));
  return out;
}

json run_reproduce(const ProblemDocument& doc, int direction, Complex c) {
  const std::vector<Complex>& roots = require_roots(doc);
  PolyTuple t = tuple_from_solution(doc.problem, roots);
  ReproduceResult r = reproduce(t, direction, c);
  TupleRoots tr = tuple_roots(r.tuple);
  json rts = json::array();
  for (Complex w : tr.roots) rts.push_back(cpx(w));
  return json{{"schema", "gaudin-opers/1"},
              {"kind", "reproduction"},
              {"problem", problem_echo(doc)},
              {"direction", direction},
              {"c", cpx(c)},
              {"degree_dropped", r.degree_dropped},
              {"degenerate", r.degenerate},
              {"degrees", veci(tuple_degrees(r.tuple))},
              {"colors", tr.colors},
              {"roots", rts},
              {"residual", residual_norm(r.tuple.base, tr.roots)}};
}

json run_population(const ProblemDocument& doc) {
  const BetheProblem& p = doc.problem;
  PolyTuple seed;
  if (doc.roots) {
    seed = tuple_from_solution(p, require_roots(doc));
  } else if (p.colors.empty()) {
    seed = empty_tuple(p);
  } else {
    throw InputError("population seeds with colors need roots");
  }
  PopulationOptions popts;
  popts.depth = doc.options.depth;
  popts.c_samples = doc.options.c_samples;
  popts.dedup_tol = std::max(doc.options.dedup_tol, 1e-7);
  popts.node_cap = doc.options.cap;
  popts.tuple_cap = 8 * doc.options.cap;
  PopulationGraph g = explore_population(seed, popts);

  json nodes = json::array();
  for (size_t k = 0; k < g.nodes.size(); ++k) {
    const PopulationNode& n = g.nodes[k];
    json reps = json::array();
    for (Complex w : n.representative.roots) reps.push_back(cpx(w));
    json node{{"id", k},
              {"degrees", veci(n.degrees)},
              {"mu_infinity", vecd(n.mu_infinity)},
              {"consistent", n.consistent},
              {"degenerate", n.degenerate},
              {"tuples", n.tuples},
              {"representative",
               json{{"colors", n.representative.colors}, {"roots", reps}}}};
    if (n.consistent) {
      node["lambda_infinity"] = vecd(n.lambda_infinity);
      node["word"] = n.word;
    }
    nodes.push_back(node);
  }
  json edges = json::array();
  for (const PopulationEdge& e : g.edges)
    edges.push_back(json{{"from", e.from},
                         {"to", e.to},
                         {"direction", e.direction},
                         {"c", cpx(e.c)},
                         {"dropped", e.dropped}});
  return json{{"schema", "gaudin-opers/1"},
              {"kind", "population"},
              {"problem", problem_echo(doc)},
              {"seed_node", g.seed_node},
              {"nodes", nodes},
              {"edges", edges}};
}

json run_gaudin_check(const ProblemDocument& doc) {
  const std::vector<Complex>& roots = require_roots(doc);
  const BetheProblem& p = doc.problem;
  OperMatch m = eigenvalue_vs_oper(p, roots, 10, doc.options.cap);
  json sites = json::array();
  for (size_t i = 0; i < p.sites.size(); ++i)
    sites.push_back(json{{"z", cpx(p.sites[i].z)},
                         {"eigenvalue", cpx(m.hamiltonians[i].value)},
                         {"residual", m.hamiltonians[i].residual},
                         {"casimir", m.casimirs[i]}});
  json samples = json::array();
  for (const OperSample& s : m.samples)
    samples.push_back(json{{"u", cpx(s.u)},
                           {"quadratic", cpx(s.quadratic)},
                           {"oper", cpx(s.oper)}});
  WeightBasis basis = weight_basis(p, doc.options.cap);
  return json{{"schema", "gaudin-opers/1"},
              {"kind", "gaudin-report"},
              {"problem", problem_echo(doc)},
              {"dimension", basis.dim()},
              {"kappa", cpx(m.kappa)},
              {"max_deviation", m.max_dev},
              {"sites", sites},
              {"samples", samples}};
}

std::string to_csv(const json& doc) {
  std::ostringstream out;
  const std::string kind = doc.at("kind").get<std::string>();
  auto c2 = [&](const json& v) {
    return fmt(v[0].get<double>()) + "," + fmt(v[1].get<double>());
  };
  if (kind == "solutions") {
    out << "solution,root,color,re,im,residual\n";
    const json& colors = doc["problem"]["colors"];
    for (size_t s = 0; s < doc["solutions"].size(); ++s) {
      const json& sol = doc["solutions"][s];
      for (size_t r = 0; r < sol["roots"].size(); ++r)
        out << s << "," << r << "," << colors[r].get<int>() << ","
            << c2(sol["roots"][r]) << "," << fmt(sol["residual"].get<double>())
            << "\n";
    }
  } else if (kind == "verification" || kind == "miura-oper") {
    out << "point_re,point_im,k,order,re,im\n";
    if (doc.contains("regularity"))
      for (const json& r : doc["regularity"])
        for (const json& t : r["tails"])
          for (const json& cc : t["coeffs"])
            out << c2(r["point"]) << "," << t["k"].get<int>() << ","
                << cc["order"].get<int>() << "," << c2(cc["value"]) << "\n";
  } else if (kind == "reproduction") {
    out << "color,re,im\n";
    for (size_t r = 0; r < doc["roots"].size(); ++r)
      out << doc["colors"][r].get<int>() << "," << c2(doc["roots"][r]) << "\n";
  } else if (kind == "population") {
    out << "from,to,direction,c_re,c_im,dropped\n";
    for (const json& e : doc["edges"])
      out << e["from"].get<int>() << "," << e["to"].get<int>() << ","
          << e["direction"].get<int>() << "," << c2(e["c"]) << ","
          << (e["dropped"].get<bool>() ? 1 : 0) << "\n";
  } else if (kind == "gaudin-report") {
    out << "site,z_re,z_im,eig_re,eig_im,residual,casimir\n";
    for (size_t i = 0; i < doc["sites"].size(); ++i) {
      const json& s = doc["sites"][i];
      out << i << "," << c2(s["z"]) << "," << c2(s["eigenvalue"]) << ","
          << fmt(s["residual"].get<double>()) << ","
          << fmt(s["casimir"].get<double>()) << "\n";
    }
  } else {
    throw InputError("no CSV form for kind '" + kind + "'");
  }
  return out.str();
}

namespace {

json load_document(const std::string& path) {
  std::string text;
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return json::parse(text);
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Bethe ansatz solver and oper toolkit"};
  app.require_subcommand(1);

  std::string input;
  std::string format = "json";
  std::string starts_from;
  std::optional<double> tol, coll_tol, reg_tol;
  std::optional<int> starts, depth, cap;
  std::optional<std::uint64_t> seed;
  int direction = 1;
  double c_re = 0.0, c_im = 0.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("input", input, "problem document (JSON), - for stdin")
        ->required();
    sub->add_option("--out", format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--tol", tol, "Newton convergence tolerance");
    sub->add_option("--coll-tol", coll_tol, "collision guard distance");
    sub->add_option("--reg-tol", reg_tol, "singular-tail threshold");
    return sub;
  };

  CLI::App* solve = add_common(app.add_subcommand(
      "solve", "find Bethe roots by damped multi-start Newton"));
  solve->add_option("--starts", starts, "number of random starts");
  solve->add_option("--seed", seed, "random seed");
  solve->add_option("--starts-from", starts_from,
                    "reuse the roots of a previous solutions document");

  CLI::App* verify = add_common(app.add_subcommand(
      "verify", "residuals and classification for supplied roots"));
  CLI::App* miura = add_common(app.add_subcommand(
      "miura", "scalar operator attached to the supplied roots"));

  CLI::App* repro = add_common(app.add_subcommand(
      "reproduce", "one generation step in a chosen direction"));
  repro->add_option("--direction", direction, "simple-root direction (1-based)")
      ->required();
  repro->add_option("--c-re", c_re, "integration constant, real part");
  repro->add_option("--c-im", c_im, "integration constant, imaginary part");

  CLI::App* population = add_common(app.add_subcommand(
      "population", "breadth-first closure of the generation moves"));
  population->add_option("--depth", depth, "generation depth");
  population->add_option("--cap", cap, "node cap");

  CLI::App* gaudin = add_common(app.add_subcommand(
      "gaudin-check", "eigenvector residuals against the operator picture"));
  gaudin->add_option("--cap", cap, "weight-space content cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    ProblemDocument doc = parse_problem_document(load_document(input));
    if (tol) doc.options.tol = *tol;
    if (coll_tol) {
      doc.options.coll_tol = *coll_tol;
      doc.problem.coll_tol = *coll_tol;
    }
    if (reg_tol) doc.options.reg_tol = *reg_tol;
    if (starts) doc.options.starts = *starts;
    if (seed) doc.options.seed = *seed;
    if (depth) doc.options.depth = *depth;
    if (cap) doc.options.cap = *cap;

    json result;
    if (solve->parsed()) {
      std::vector<std::vector<Complex>> start_list;
      if (!starts_from.empty())
        start_list = starts_from_solutions_document(load_document(starts_from));
      result = run_solve(doc, start_list);
    } else if (verify->parsed()) {
      result = run_verify(doc);
    } else if (miura->parsed()) {
      result = run_miura(doc);
    } else if (repro->parsed()) {
      result = run_reproduce(doc, direction, Complex(c_re, c_im));
    } else if (population->parsed()) {
      result = run_population(doc);
    } else if (gaudin->parsed()) {
      if (!cap) doc.options.cap = 8;
      result = run_gaudin_check(doc);
    }

    if (format == "csv")
      out << to_csv(result);
    else
      out << result.dump(2) << "\n";
    return 0;
  } catch (const json::exception& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const CollisionError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "computation failed: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "computation failed: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace gop
