#pragma once

// JSON reports (schema in docs/result.schema.json) and the connection matrix
// text format.

#include <massey/checks.hpp>
#include <massey/repr.hpp>

#include <json.hpp>

#include <sstream>
#include <string>
#include <vector>

namespace massey {

using json = nlohmann::ordered_json;

inline json rational_list(const DenseVector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

inline DenseVector parse_rational_list(const json& j) {
  DenseVector v;
  for (const auto& x : j) v.push_back(parse_rational(x.get<std::string>()));
  return v;
}

inline MasseyStatus parse_status(const std::string& s) {
  for (auto st : {MasseyStatus::TrivialWitness, MasseyStatus::NonTrivialCertified, MasseyStatus::ValueSet,
                  MasseyStatus::Undecided, MasseyStatus::NotDefined})
    if (s == to_string(st)) return st;
  throw Error(ErrorKind::SyntaxError, "unknown status '" + s + "'");
}

/// Parses the output of to_string(Poly): "2*t0*t1 - t3 + 1/2".
inline Poly parse_poly(const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  Poly out;
  int sign = 1;
  bool expect_term = true;
  while (in >> tok) {
    if (!expect_term) {
      if (tok != "+" && tok != "-") throw Error(ErrorKind::SyntaxError, "bad polynomial '" + text + "'");
      sign = tok == "+" ? 1 : -1;
      expect_term = true;
      continue;
    }
    Poly term{Rational(sign)};
    if (tok[0] == '-' && tok.size() > 1 && tok[1] == 't') {
      term = Poly(Rational(-sign));
      tok = tok.substr(1);
    }
    std::size_t start = 0;
    for (;;) {
      std::size_t star = tok.find('*', start);
      std::string f = tok.substr(start, star == std::string::npos ? std::string::npos : star - start);
      if (!f.empty() && f[0] == 't') term = term * Poly::var(std::stoi(f.substr(1)));
      else term = term * Poly(parse_rational(f));
      if (star == std::string::npos) break;
      start = star + 1;
    }
    out = out + term;
    expect_term = false;
  }
  if (expect_term && !text.empty() && text != "0") throw Error(ErrorKind::SyntaxError, "bad polynomial '" + text + "'");
  return out;
}

/// value · representatives, i.e. one cocycle of the class.
inline Form value_form(const CochainComplex& cx, const AffineClassSet& s) {
  Form f;
  std::size_t off = 0;
  for (std::size_t k = 0; k < s.weights.size(); ++k) {
    const auto& reps = cx.cohomology(s.degree, s.weights[k]).representatives;
    for (std::size_t i = 0; i < s.dims[k]; ++i) f += s.value[off + i] * reps[i];
    off += s.dims[k];
  }
  return f;
}

inline json to_json(const CochainComplex& cx, const AffineClassSet& s) {
  json j;
  j["degree"] = s.degree;
  j["weights"] = s.weights;
  j["dims"] = s.dims;
  j["value"] = rational_list(s.value);
  j["value_form"] = to_string(value_form(cx, s));
  j["indeterminacy"] = json::array();
  for (const auto& d : s.directions) j["indeterminacy"].push_back(rational_list(d));
  j["parameters"] = s.direction_parameters;
  j["indeterminacy_rank"] = s.indeterminacy_rank();
  j["contains_zero"] = s.contains_zero();
  return j;
}

inline AffineClassSet affine_set_from_json(const json& j) {
  AffineClassSet s;
  s.degree = j.at("degree").get<int>();
  s.weights = j.at("weights").get<std::vector<int>>();
  s.dims = j.at("dims").get<std::vector<std::size_t>>();
  s.value = parse_rational_list(j.at("value"));
  for (const auto& d : j.at("indeterminacy")) s.directions.push_back(parse_rational_list(d));
  s.direction_parameters = j.at("parameters").get<std::vector<int>>();
  return s;
}

inline json to_json(const ConnectionMatrix& a) {
  json rows = json::array();
  for (std::size_t r = 0; r < a.size(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < a.size(); ++c) row.push_back(to_string(a.at(r, c)));
    rows.push_back(row);
  }
  return rows;
}

inline ConnectionMatrix connection_from_json(const json& j) {
  if (j.empty()) throw Error(ErrorKind::SyntaxError, "empty matrix");
  ConnectionMatrix a(j.size() - 1);
  for (std::size_t r = 0; r < a.size(); ++r) {
    if (j[r].size() != a.size()) throw Error(ErrorKind::ArityMismatch, "matrix is not square");
    for (std::size_t c = 0; c < a.size(); ++c) a.at(r, c) = parse_form(j[r][c].get<std::string>());
  }
  return a;
}

inline json to_json(const Certificate& c) {
  json j;
  j["method"] = c.method;
  j["seed"] = c.seed;
  j["samples"] = c.samples;
  j["coefficient"] = c.coefficient ? json(to_string(*c.coefficient)) : json(nullptr);
  j["omega_indices"] = c.omega_indices;
  j["passed"] = c.passed;
  j["sample_values"] = c.sample_values;
  j["notes"] = c.notes;
  return j;
}

inline Certificate certificate_from_json(const json& j) {
  Certificate c;
  c.method = j.at("method").get<std::string>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.samples = j.at("samples").get<std::size_t>();
  if (!j.at("coefficient").is_null()) c.coefficient = parse_rational(j.at("coefficient").get<std::string>());
  c.omega_indices = j.at("omega_indices").get<std::vector<int>>();
  c.passed = j.at("passed").get<bool>();
  c.sample_values = j.at("sample_values").get<std::vector<std::string>>();
  c.notes = j.at("notes").get<std::vector<std::string>>();
  return c;
}

inline json to_json(const Obstruction& o) {
  json j;
  j["i"] = o.i;
  j["j"] = o.j;
  j["degree"] = o.degree;
  json classes = json::object();
  for (const auto& [w, polys] : o.classes) {
    json list = json::array();
    for (const auto& p : polys) list.push_back(to_string(p));
    classes[std::to_string(w)] = list;
  }
  j["classes"] = classes;
  return j;
}

inline Obstruction obstruction_from_json(const json& j) {
  Obstruction o;
  o.i = j.at("i").get<std::size_t>();
  o.j = j.at("j").get<std::size_t>();
  o.degree = j.at("degree").get<int>();
  for (const auto& [w, list] : j.at("classes").items())
    for (const auto& p : list) o.classes[std::stoi(w)].push_back(parse_poly(p.get<std::string>()));
  return o;
}

inline json to_json(const CochainComplex& cx, const MasseyResult& r) {
  json j;
  j["status"] = to_string(r.status);
  j["witness"] = r.witness ? to_json(*r.witness) : json(nullptr);
  j["values"] = json::array();
  for (const auto& s : r.values) j["values"].push_back(to_json(cx, s));
  j["obstruction"] = r.obstruction ? to_json(*r.obstruction) : json(nullptr);
  j["certificate"] = r.certificate ? to_json(*r.certificate) : json(nullptr);
  j["notes"] = r.notes;
  return j;
}

inline MasseyResult massey_result_from_json(const json& j) {
  MasseyResult r;
  r.status = parse_status(j.at("status").get<std::string>());
  if (!j.at("witness").is_null()) r.witness = connection_from_json(j.at("witness"));
  for (const auto& s : j.at("values")) r.values.push_back(affine_set_from_json(s));
  if (!j.at("obstruction").is_null()) r.obstruction = obstruction_from_json(j.at("obstruction"));
  if (!j.at("certificate").is_null()) r.certificate = certificate_from_json(j.at("certificate"));
  r.notes = j.at("notes").get<std::vector<std::string>>();
  return r;
}

inline json to_json(const ClassificationTag& t) {
  static const char* kinds[] = {"A", "B", "C", "D", "NotTrivial", "NotDefined", "Unclassified", "Undecided"};
  json j;
  j["tag"] = to_string(t);
  j["kind"] = kinds[static_cast<int>(t.kind)];
  j["n"] = t.n;
  j["x"] = to_string(t.x);
  j["y"] = to_string(t.y);
  j["l"] = t.l;
  j["trivial"] = t.trivial();
  return j;
}

inline json to_json(const DimensionReport& r) {
  json j;
  j["name"] = r.name;
  j["rows"] = json::array();
  for (const auto& row : r.rows)
    j["rows"].push_back({{"q", row.q}, {"k", row.k}, {"computed", row.computed}, {"expected", row.expected}, {"match", row.match()}});
  j["passed"] = r.all_match();
  return j;
}

inline json to_json(const CheckReport& r) {
  json j;
  j["name"] = r.name;
  j["items"] = json::array();
  for (const auto& i : r.items) j["items"].push_back({{"name", i.name}, {"passed", i.passed}, {"detail", i.detail}});
  j["passed"] = r.all_passed();
  return j;
}

// ---------------------------------------------------------------------------
// Connection matrix text format: "matrix n=<n>", then "a(i,j) = <form>" lines
// (1 <= i <= j <= n; unspecified entries are zero).
// ---------------------------------------------------------------------------

inline ConnectionMatrix parse_connection(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  std::optional<ConnectionMatrix> a;
  auto fail = [&](ErrorKind k, const std::string& why) { throw Error(k, "line " + std::to_string(line) + ": " + why); };
  while (std::getline(in, raw)) {
    ++line;
    std::string s = detail::trim(raw.substr(0, raw.find('#')));
    if (s.empty()) continue;
    if (!a) {
      if (s.rfind("matrix", 0) != 0) fail(ErrorKind::SyntaxError, "expected 'matrix n=<n>'");
      std::string rest = detail::trim(s.substr(6));
      if (rest.rfind("n=", 0) != 0) fail(ErrorKind::SyntaxError, "expected n=<n>");
      int n = detail::parse_int(rest.substr(2), line);
      if (n < 1) fail(ErrorKind::SyntaxError, "n must be positive");
      a.emplace(static_cast<std::size_t>(n));
      continue;
    }
    std::size_t open = s.find('('), comma = s.find(','), close = s.find(')'), eq = s.find('=');
    if (s.rfind("a(", 0) != 0 || comma == std::string::npos || close == std::string::npos || eq == std::string::npos ||
        !(open < comma && comma < close && close < eq))
      fail(ErrorKind::SyntaxError, "expected a(i,j) = <form>");
    int i = detail::parse_int(s.substr(open + 1, comma - open - 1), line);
    int j = detail::parse_int(s.substr(comma + 1, close - comma - 1), line);
    if (i < 1 || j < i || static_cast<std::size_t>(j) > a->arity()) fail(ErrorKind::InvalidIndex, "entry outside 1 <= i <= j <= n");
    try {
      a->a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = parse_form(s.substr(eq + 1));
    } catch (const Error& e) {
      fail(e.kind(), e.what());
    }
  }
  if (!a) throw Error(ErrorKind::SyntaxError, "missing 'matrix n=<n>' header");
  return *a;
}

inline std::string write_connection(const ConnectionMatrix& a) {
  std::string s = "matrix n=" + std::to_string(a.arity()) + "\n";
  for (std::size_t i = 1; i <= a.arity(); ++i)
    for (std::size_t j = i; j <= a.arity(); ++j)
      if (!a.a(i, j).is_zero()) s += "a(" + std::to_string(i) + "," + std::to_string(j) + ") = " + to_string(a.a(i, j)) + "\n";
  return s;
}

}  // namespace massey
