#pragma once

// Command line front end. run_cli is the whole program; tools/massey_cli.cpp
// only forwards argv. Exit codes: 0 success (including Undecided and
// NotDefined verdicts), 1 failed check or internal verification, 2 bad input.

#include <massey/io.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

namespace massey::cli {

struct RunConfig {
  std::string algebra = "m0";  // preset name (m0, L1, grm0) or file path
  int cutoff = 0;              // 0: MASSEY_CUTOFF, then 12 (presets) or the file's own
  std::string format = "table";
  std::uint64_t seed = 1;
  long budget = 4096;
};

struct Range {
  int lo = 1, hi = 0;
};

inline Range parse_range(const std::string& s) {
  auto num = [&](const std::string& t) {
    std::string u = detail::trim(t);
    if (u.empty() || u.find_first_not_of("0123456789") != std::string::npos)
      throw Error(ErrorKind::SyntaxError, "bad range '" + s + "'");
    return std::stoi(u);
  };
  std::size_t dots = s.find("..");
  if (dots == std::string::npos) return {num(s), num(s)};
  return {num(s.substr(0, dots)), num(s.substr(dots + 2))};
}

inline int default_cutoff() {
  if (const char* env = std::getenv("MASSEY_CUTOFF")) {
    std::string v = env;
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
      throw Error(ErrorKind::InvalidCutoff, "MASSEY_CUTOFF must be a positive integer");
    return std::stoi(v);
  }
  return 12;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::SyntaxError, "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline GradedLieAlgebra truncate(const GradedLieAlgebra& g, int cutoff) {
  std::vector<Generator> gens;
  for (const auto& x : g.generators())
    if (x.weight <= cutoff) gens.push_back(x);
  BracketTable br;
  for (const auto& [key, terms] : g.brackets())
    if (g.weight(key.first) + g.weight(key.second) <= cutoff) br[key] = terms;
  return GradedLieAlgebra(std::move(gens), std::move(br), cutoff, false);
}

inline GradedLieAlgebra load_algebra(const RunConfig& cfg) {
  if (cfg.cutoff != 0 && cfg.cutoff < 2) throw Error(ErrorKind::InvalidCutoff, "cutoff must be >= 2");
  if (cfg.budget < 0) throw Error(ErrorKind::SyntaxError, "budget must be >= 0");
  const std::string& a = cfg.algebra;
  if (a == "m0" || a == "M0" || a == "L1" || a == "l1")
    return load_preset(parse_preset(a), cfg.cutoff ? cfg.cutoff : default_cutoff());
  if (a == "grm0" || a == "gr-m0") return gr_m0(cfg.cutoff ? cfg.cutoff : default_cutoff());
  GradedLieAlgebra g = parse_algebra(read_file(a));
  if (cfg.cutoff == 0 || cfg.cutoff == g.cutoff()) return g;
  if (cfg.cutoff > g.cutoff()) throw Error(ErrorKind::CutoffTooSmall, "file algebra is only given up to weight " + std::to_string(g.cutoff()));
  return truncate(g, cfg.cutoff);
}

inline SolveOptions solve_options(const RunConfig& cfg) {
  SolveOptions o;
  o.budget = static_cast<std::size_t>(cfg.budget);
  return o;
}

// ---------------------------------------------------------------------------

inline void print_check(std::ostream& out, const std::string& format, const CheckReport& r) {
  if (format == "json") {
    out << to_json(r).dump(2) << "\n";
  } else if (format == "csv") {
    out << "item,passed,detail\n";
    for (const auto& i : r.items) out << '"' << i.name << "\"," << (i.passed ? "true" : "false") << ",\"" << i.detail << "\"\n";
  } else {
    for (const auto& i : r.items) out << (i.passed ? "PASS " : "FAIL ") << r.name << ": " << i.name << (i.detail.empty() ? "" : "  [" + i.detail + "]") << "\n";
  }
}

inline void print_dimensions(std::ostream& out, const std::string& format, const DimensionReport& r) {
  if (format == "json") {
    out << to_json(r).dump(2) << "\n";
  } else if (format == "csv") {
    out << to_csv(r);
  } else {
    out << std::setw(3) << "q" << std::setw(5) << "k" << std::setw(10) << "computed" << std::setw(10) << "expected" << "  match\n";
    for (const auto& row : r.rows)
      out << std::setw(3) << row.q << std::setw(5) << row.k << std::setw(10) << row.computed << std::setw(10) << row.expected
          << "  " << (row.match() ? "yes" : "NO") << "\n";
  }
}

/// Expected dim H^q_k where a closed formula applies.
inline std::optional<std::int64_t> expected_betti(const GradedLieAlgebra& g, int q, int k) {
  auto p = detect_preset(g);
  if (p == Preset::L1) return is_pentagonal_weight(q, k) ? 1 : 0;
  if (p == Preset::M0 && q >= 1) {
    const int j = k - q * (q + 1) / 2;
    if (j >= 1)
      return static_cast<std::int64_t>(partition_count(q, j)) - static_cast<std::int64_t>(partition_count(q, j - 1));
  }
  return std::nullopt;
}

inline int cmd_betti(const RunConfig& cfg, const std::string& qs, const std::string& ks, std::ostream& out) {
  GradedLieAlgebra g = load_algebra(cfg);
  Range qr = parse_range(qs), kr = parse_range(ks);
  if (kr.hi > g.cutoff())
    throw Error(ErrorKind::CutoffTooSmall, "weight " + std::to_string(kr.hi) + " exceeds the cutoff " + std::to_string(g.cutoff()));
  CochainComplex cx(g);
  json rows = json::array();
  std::ostringstream table, csv;
  csv << "q,k,computed,expected,match\n";
  table << std::setw(3) << "q" << std::setw(5) << "k" << std::setw(6) << "dim" << std::setw(10) << "expected" << "\n";
  for (int q = qr.lo; q <= qr.hi; ++q)
    for (int k = std::max(kr.lo, 1); k <= kr.hi; ++k) {
      auto dim = static_cast<std::int64_t>(cx.betti(q, k));
      auto exp = expected_betti(g, q, k);
      std::string e = exp ? std::to_string(*exp) : "", m = exp ? (*exp == dim ? "true" : "false") : "";
      csv << q << "," << k << "," << dim << "," << e << "," << m << "\n";
      table << std::setw(3) << q << std::setw(5) << k << std::setw(6) << dim << std::setw(10) << (exp ? e : "-") << "\n";
      rows.push_back({{"q", q}, {"k", k}, {"computed", dim}, {"expected", exp ? json(*exp) : json(nullptr)}});
    }
  if (cfg.format == "json") out << json{{"algebra", cfg.algebra}, {"cutoff", g.cutoff()}, {"rows", rows}}.dump(2) << "\n";
  else if (cfg.format == "csv") out << csv.str();
  else out << table.str();
  return 0;
}

inline int cmd_check(const RunConfig& cfg, const std::string& which, int count, int max_q, std::ostream& out) {
  const int cutoff = cfg.cutoff ? cfg.cutoff : default_cutoff();
  if (cutoff < 2) throw Error(ErrorKind::InvalidCutoff, "cutoff must be >= 2");
  if (which == "goncharova") {
    if (max_q == 0)
      while (3 * (max_q + 1) * (max_q + 1) + max_q + 1 <= 2 * cutoff) ++max_q;
    DimensionReport r = check_goncharova(std::max(max_q, 1), cutoff);
    print_dimensions(out, cfg.format, r);
    return r.all_match() ? 0 : 1;
  }
  if (which == "m0dims") {
    DimensionReport r = check_m0_dimensions(max_q ? max_q : 4, cutoff);
    print_dimensions(out, cfg.format, r);
    return r.all_match() ? 0 : 1;
  }
  std::vector<CheckReport> reports;
  if (which == "identities") {
    if (cutoff < 8) throw Error(ErrorKind::CutoffTooSmall, "identities need cutoff >= 8");
    reports.push_back(check_d_operators(count, std::min(cutoff, 20), cfg.seed));
    reports.push_back(check_maurer_cartan(std::max(count / 2, 1), cfg.seed));
  } else if (which == "gr") {
    if (cutoff < 3) throw Error(ErrorKind::CutoffTooSmall, "gr check needs cutoff >= 3");
    reports.push_back(check_gr(cutoff));
  } else {
    throw Error(ErrorKind::SyntaxError, "unknown check '" + which + "'");
  }
  bool ok = true;
  if (cfg.format == "json") {
    json all = json::array();
    for (const auto& r : reports) all.push_back(to_json(r));
    out << all.dump(2) << "\n";
  } else {
    for (const auto& r : reports) print_check(out, cfg.format, r);
  }
  for (const auto& r : reports) ok = ok && r.all_passed();
  return ok ? 0 : 1;
}

inline void print_result_table(std::ostream& out, const CochainComplex& cx, const MasseyResult& r) {
  out << "status: " << to_string(r.status) << "\n";
  for (std::size_t b = 0; b < r.values.size(); ++b) {
    const auto& s = r.values[b];
    out << "value set " << b + 1 << ": class of " << to_string(value_form(cx, s)) << " (degree " << s.degree << ", weights";
    for (int w : s.weights) out << " " << w;
    out << "), indeterminacy rank " << s.indeterminacy_rank() << ", contains 0: " << (s.contains_zero() ? "yes" : "no") << "\n";
  }
  if (r.witness) out << "witness:\n" << to_string(*r.witness);
  if (r.obstruction) out << "obstruction at a(" << r.obstruction->i << "," << r.obstruction->j << ")\n";
  if (r.certificate) {
    out << "certificate: " << r.certificate->method << (r.certificate->passed ? " passed" : " failed");
    if (r.certificate->samples) out << ", seed " << r.certificate->seed << ", " << r.certificate->samples << " samples";
    if (r.certificate->coefficient) out << ", coefficient " << to_string(*r.certificate->coefficient);
    out << "\n";
  }
  for (const auto& n : r.notes) out << "note: " << n << "\n";
}

inline int cmd_eval(const RunConfig& cfg, const std::string& product, std::ostream& out) {
  GradedLieAlgebra g = load_algebra(cfg);
  std::vector<Form> classes = parse_product(product);
  CochainComplex cx(g);
  EvalOptions eo;
  eo.solve = solve_options(cfg);
  eo.seed = cfg.seed;
  MasseyResult r = evaluate_product(cx, classes, eo);
  if (cfg.format == "json") out << to_json(cx, r).dump(2) << "\n";
  else print_result_table(out, cx, r);
  return 0;
}

inline int cmd_verify(const RunConfig& cfg, const std::string& path, std::ostream& out) {
  GradedLieAlgebra g = load_algebra(cfg);
  ConnectionMatrix a = parse_connection(read_file(path));
  CochainComplex cx(g);
  FormalCheck check = is_formal_connection(g, a);
  json j;
  j["formal"] = check.formal;
  j["tau"] = to_string(check.tau);
  if (check.violation) j["violation"] = {check.violation->first + 1, check.violation->second};
  else j["violation"] = nullptr;
  auto problem = defining_system_problem(g, a);
  j["defining_system"] = !problem;
  j["problem"] = problem ? json(*problem) : json(nullptr);
  if (!problem) {
    Form c = related_cocycle(g, a);
    j["related_cocycle"] = to_string(c);
    j["cocycle_exact"] = cx.is_exact(c);
    json coords = json::object();
    for (const auto& [w, cc] : cx.class_coordinates_by_weight(c)) coords[std::to_string(w)] = rational_list(cc.coords);
    j["class_coordinates"] = coords;
  }
  if (cfg.format == "json") {
    out << j.dump(2) << "\n";
  } else {
    out << "formal connection: " << (check.formal ? "yes" : "no") << "\n";
    if (check.violation) out << "Maurer-Cartan fails at a(" << check.violation->first + 1 << "," << check.violation->second << ")\n";
    out << "tau: " << to_string(check.tau) << "\n";
    if (problem) out << "not a defining system: " << *problem << "\n";
    else out << "related cocycle: " << j["related_cocycle"].get<std::string>() << " (" << (j["cocycle_exact"].get<bool>() ? "exact" : "nonzero class") << ")\n";
  }
  return 0;
}

inline int cmd_classify(const RunConfig& cfg, const std::string& product, std::ostream& out) {
  std::vector<OneClass> classes;
  for (const auto& f : parse_product(product)) classes.push_back(one_class_of(f));
  EvalOptions eo;
  eo.solve = solve_options(cfg);
  eo.seed = cfg.seed;
  ClassificationTag t = classify_trivial_ones(classes, eo);
  if (cfg.format == "json") out << to_json(t).dump(2) << "\n";
  else out << to_string(t) << "\n";
  return 0;
}

inline int cmd_rep(const RunConfig& cfg, const std::string& path, std::ostream& out) {
  GradedLieAlgebra g = load_algebra(cfg);
  UpperTriangularRep rho = parse_rep(read_file(path));
  HomomorphismCheck check = check_homomorphism(g, rho);
  json j;
  j["homomorphism"] = check.ok;
  j["failing_pair"] = check.failing ? json{check.failing->first, check.failing->second} : json(nullptr);
  if (check.ok) {
    j["connection"] = to_json(connection_of(g, rho));
    j["associated_graded"] = write_rep(associated_graded_rep(g, rho));
    if (is_m0_like(g)) {
      try {
        ThreadVerdict v = thread_tag(thread_view(g, rho), EvalOptions{solve_options(cfg), cfg.seed, 100});
        j["thread"] = {{"indecomposable", v.indecomposable}, {"tag", v.tag ? to_json(*v.tag) : json(nullptr)}};
      } catch (const Error& e) {
        j["thread"] = {{"error", e.what()}};
      }
    }
  }
  if (cfg.format == "json") {
    out << j.dump(2) << "\n";
  } else {
    out << "homomorphism: " << (check.ok ? "yes" : "no") << "\n";
    if (check.failing) out << "bracket fails on (e" << check.failing->first << ", e" << check.failing->second << ")\n";
    if (check.ok) {
      out << "connection:\n" << to_string(connection_of(g, rho));
      out << "associated graded:\n" << write_rep(associated_graded_rep(g, rho));
      if (j.contains("thread")) {
        if (j["thread"].contains("error")) out << "thread module: " << j["thread"]["error"].get<std::string>() << "\n";
        else if (!j["thread"]["indecomposable"].get<bool>()) out << "thread module: decomposable\n";
        else if (!j["thread"]["tag"].is_null()) out << "thread module: " << j["thread"]["tag"]["tag"].get<std::string>() << "\n";
        else out << "thread module: indecomposable\n";
      }
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Weight-graded Lie algebra cohomology and Massey products"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  app.add_option("--algebra", cfg.algebra, "preset (m0, L1, grm0) or algebra file");
  app.add_option("--cutoff", cfg.cutoff, "truncation weight (default: $MASSEY_CUTOFF or 12)");
  app.add_option("--format", cfg.format, "table, csv or json")->check(CLI::IsMember({"table", "csv", "json"}));
  app.add_option("--seed", cfg.seed, "seed for sampled certificates");
  app.add_option("--budget", cfg.budget, "grid search budget");

  std::string qs = "1..3", ks, payload, which;
  int count = 500, max_q = 0;
  auto* betti = app.add_subcommand("betti", "dimensions of H^q_k");
  betti->add_option("--q", qs, "degree range a..b");
  betti->add_option("--k", ks, "weight range a..b (default 1..cutoff)");
  auto* check = app.add_subcommand("check", "verification suites");
  check->add_option("which", which, "goncharova, m0dims, identities or gr")->required();
  check->add_option("--count", count, "random samples for identities");
  check->add_option("--max-q", max_q, "largest degree for dimension checks (default: as far as the cutoff allows)");
  auto* eval = app.add_subcommand("eval", "evaluate a Massey product");
  eval->add_option("product", payload, "classes separated by ';'")->required();
  auto* verify = app.add_subcommand("verify", "check a connection matrix file");
  verify->add_option("file", payload, "matrix file")->required();
  auto* classify = app.add_subcommand("classify", "classify a product of classes a*e1 + b*e2 over m0");
  classify->add_option("product", payload, "classes separated by ';'")->required();
  auto* rep = app.add_subcommand("rep", "check a representation file");
  rep->add_option("file", payload, "representation file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  try {
    if (betti->parsed()) {
      if (ks.empty()) ks = "1.." + std::to_string(load_algebra(cfg).cutoff());
      return cmd_betti(cfg, qs, ks, out);
    }
    if (check->parsed()) return cmd_check(cfg, which, count, max_q, out);
    if (eval->parsed()) return cmd_eval(cfg, payload, out);
    if (verify->parsed()) return cmd_verify(cfg, payload, out);
    if (classify->parsed()) return cmd_classify(cfg, payload, out);
    if (rep->parsed()) return cmd_rep(cfg, payload, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::Unverified ? 1 : 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace massey::cli
