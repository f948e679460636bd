#pragma once

// Truncated N-graded Lie algebras given by sparse structure constants.

#include <massey/core.hpp>
#include <massey/linalg.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace massey {

/// Element of an algebra as a sparse combination of generator indices.
using Element = std::map<int, Rational>;

struct Generator {
  int index = 0;
  int weight = 0;
  bool operator==(const Generator&) const = default;
};

struct BracketTerm {
  Rational coeff;
  int target = 0;
  bool operator==(const BracketTerm& o) const { return coeff == o.coeff && target == o.target; }
};

using BracketTable = std::map<std::pair<int, int>, std::vector<BracketTerm>>;

class GradedLieAlgebra {
 public:
  GradedLieAlgebra() = default;

  /// Validates indices, weights and weight additivity; checks Jacobi when
  /// `check_jacobi` is set. Zero coefficients are dropped, terms are sorted by
  /// target index.
  GradedLieAlgebra(std::vector<Generator> gens, BracketTable brackets, int cutoff,
                   bool check_jacobi = true)
      : gens_(std::move(gens)), cutoff_(cutoff) {
    if (cutoff_ < 1) throw Error(ErrorKind::InvalidCutoff, "cutoff must be positive");
    std::sort(gens_.begin(), gens_.end(),
              [](const Generator& a, const Generator& b) { return a.index < b.index; });
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      const auto& g = gens_[i];
      if (g.index < 1) throw Error(ErrorKind::InvalidIndex, "generator index must be positive");
      if (i > 0 && gens_[i - 1].index == g.index)
        throw Error(ErrorKind::InvalidIndex, "duplicate generator e" + std::to_string(g.index));
      if (g.weight < 1) throw Error(ErrorKind::WeightViolation, "generator weight must be >= 1");
      if (g.weight > cutoff_)
        throw Error(ErrorKind::WeightViolation,
                    "generator e" + std::to_string(g.index) + " has weight above the cutoff");
      weight_of_.emplace(g.index, g.weight);
    }
    for (auto& [key, terms] : brackets) {
      auto [i, j] = key;
      if (i == j) throw Error(ErrorKind::InvalidIndex, "bracket of a generator with itself");
      if (!has(i) || !has(j)) throw Error(ErrorKind::InvalidIndex, "bracket references unknown generator");
      int sign = 1;
      if (i > j) {
        std::swap(i, j);
        sign = -1;
      }
      std::map<int, Rational> acc;
      for (const auto& t : terms) {
        if (!has(t.target))
          throw Error(ErrorKind::InvalidIndex, "bracket target e" + std::to_string(t.target) + " unknown");
        if (weight(t.target) != weight(i) + weight(j))
          throw Error(ErrorKind::WeightViolation,
                      "[" + std::to_string(i) + "," + std::to_string(j) + "] -> e" +
                          std::to_string(t.target) + ": weights do not add up");
        acc[t.target] += sign * t.coeff;
      }
      auto& out = brackets_[{i, j}];
      for (auto& [k, c] : acc)
        if (c != 0) out.push_back({c, k});
      if (out.empty()) brackets_.erase({i, j});
    }
    for (const auto& [key, terms] : brackets_)
      for (const auto& t : terms) dual_[t.target].push_back({key.first, key.second, t.coeff});
    if (check_jacobi) {
      if (auto bad = jacobi_failure())
        throw Error(ErrorKind::JacobiViolation,
                    "Jacobi fails on (e" + std::to_string(std::get<0>(*bad)) + ", e" +
                        std::to_string(std::get<1>(*bad)) + ", e" + std::to_string(std::get<2>(*bad)) + ")");
    }
  }

  const std::vector<Generator>& generators() const { return gens_; }
  const BracketTable& brackets() const { return brackets_; }
  int cutoff() const { return cutoff_; }
  std::size_t dimension() const { return gens_.size(); }
  bool has(int index) const { return weight_of_.count(index) != 0; }

  int weight(int index) const {
    auto it = weight_of_.find(index);
    if (it == weight_of_.end()) throw Error(ErrorKind::InvalidIndex, "unknown generator e" + std::to_string(index));
    return it->second;
  }

  /// Structure constants of [e_i, e_j] (antisymmetry applied).
  Element bracket_basis(int i, int j) const {
    Element out;
    if (i == j) return out;
    int sign = 1;
    if (i > j) {
      std::swap(i, j);
      sign = -1;
    }
    auto it = brackets_.find({i, j});
    if (it == brackets_.end()) return out;
    for (const auto& t : it->second) out[t.target] = sign * t.coeff;
    return out;
  }

  struct DualTerm {
    int i, j;
    Rational coeff;
  };
  /// Pairs (i<j) with [e_i, e_j] containing e_k, i.e. the terms of d e^k.
  const std::vector<DualTerm>& dual_terms(int k) const {
    static const std::vector<DualTerm> none;
    auto it = dual_.find(k);
    return it == dual_.end() ? none : it->second;
  }

  /// First basis triple (i<j<k) where the Jacobi identity fails.
  std::optional<std::tuple<int, int, int>> jacobi_failure() const {
    for (std::size_t a = 0; a < gens_.size(); ++a)
      for (std::size_t b = a + 1; b < gens_.size(); ++b)
        for (std::size_t c = b + 1; c < gens_.size(); ++c) {
          int i = gens_[a].index, j = gens_[b].index, k = gens_[c].index;
          if (weight(i) + weight(j) + weight(k) > cutoff_) continue;
          Element sum;
          auto accumulate = [&](int x, int y, int z) {
            for (const auto& [t, cxy] : bracket_basis(x, y))
              for (const auto& [u, ctz] : bracket_basis(t, z)) sum[u] += cxy * ctz;
          };
          accumulate(i, j, k);
          accumulate(j, k, i);
          accumulate(k, i, j);
          for (const auto& [u, v] : sum)
            if (v != 0) return std::make_tuple(i, j, k);
        }
    return std::nullopt;
  }

  bool operator==(const GradedLieAlgebra& o) const {
    return cutoff_ == o.cutoff_ && gens_ == o.gens_ && brackets_ == o.brackets_;
  }

 private:
  std::vector<Generator> gens_;
  BracketTable brackets_;
  int cutoff_ = 0;
  std::map<int, int> weight_of_;
  std::map<int, std::vector<DualTerm>> dual_;
};

inline Element bracket(const GradedLieAlgebra& g, const Element& x, const Element& y) {
  Element out;
  for (const auto& [i, a] : x)
    for (const auto& [j, b] : y)
      for (const auto& [k, c] : g.bracket_basis(i, j)) out[k] += a * b * c;
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

enum class Preset { M0, L1 };

/// m0: [e1, e_i] = e_{i+1} (i >= 2). L1: [e_i, e_j] = (j - i) e_{i+j}.
/// Canonical grading weight(e_i) = i, truncated at weight <= cutoff.
inline GradedLieAlgebra load_preset(Preset p, int cutoff) {
  if (cutoff < 2) throw Error(ErrorKind::InvalidCutoff, "preset cutoff must be >= 2");
  std::vector<Generator> gens;
  for (int i = 1; i <= cutoff; ++i) gens.push_back({i, i});
  BracketTable br;
  if (p == Preset::M0) {
    for (int i = 2; i + 1 <= cutoff; ++i) br[{1, i}] = {{Rational(1), i + 1}};
  } else {
    for (int i = 1; i <= cutoff; ++i)
      for (int j = i + 1; i + j <= cutoff; ++j) br[{i, j}] = {{Rational(j - i), i + j}};
  }
  return GradedLieAlgebra(std::move(gens), std::move(br), cutoff, false);
}

inline Preset parse_preset(const std::string& name) {
  if (name == "m0" || name == "M0") return Preset::M0;
  if (name == "L1" || name == "l1") return Preset::L1;
  throw Error(ErrorKind::SyntaxError, "unknown preset '" + name + "'");
}

/// Recognizes a preset structurally (same generators, weights and brackets).
inline std::optional<Preset> detect_preset(const GradedLieAlgebra& g) {
  if (g.cutoff() < 2) return std::nullopt;
  for (Preset p : {Preset::M0, Preset::L1})
    if (load_preset(p, g.cutoff()) == g) return p;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Text format
//
//   # comment
//   generators: (1:1), (2:2), (3:3)
//   cutoff: 5                      (optional; defaults to the largest weight)
//   [1,2] = 1*3
//   [1,3] = 2*4 + -1/2*5
// ---------------------------------------------------------------------------

namespace detail {

inline std::string trim(std::string s) {
  auto issp = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && issp(s.back())) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && issp(s[b])) ++b;
  return s.substr(b);
}

inline int parse_int(const std::string& s, int line) {
  std::string t = trim(s);
  if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
    throw Error(ErrorKind::SyntaxError, "line " + std::to_string(line) + ": expected integer, got '" + t + "'");
  return std::stoi(t);
}

/// Splits "a + b + -c" style sums at top-level '+' / '-' signs (a leading
/// sign stays attached to its term).
inline std::vector<std::string> split_terms(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if ((c == '+' || c == '-') && !trim(cur).empty()) {
      // a sign directly after '*' or '/' belongs to the current term
      std::string t = trim(cur);
      if (t.back() != '*' && t.back() != '/') {
        out.push_back(t);
        cur.clear();
        if (c == '-') cur = "-";
        continue;
      }
    }
    if (c == '+' && trim(cur).empty()) continue;
    cur += c;
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

}  // namespace detail

inline GradedLieAlgebra parse_algebra(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  std::vector<Generator> gens;
  bool have_gens = false;
  std::optional<int> cutoff;
  BracketTable br;
  while (std::getline(in, raw)) {
    ++line_no;
    auto hash = raw.find('#');
    std::string line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    auto err = [&](const std::string& m) {
      return Error(ErrorKind::SyntaxError, "line " + std::to_string(line_no) + ": " + m);
    };
    if (line.rfind("generators:", 0) == 0) {
      if (have_gens) throw err("duplicate generators header");
      have_gens = true;
      std::string rest = line.substr(11);
      std::size_t pos = 0;
      while (true) {
        auto open = rest.find('(', pos);
        if (open == std::string::npos) break;
        auto close = rest.find(')', open);
        if (close == std::string::npos) throw err("unterminated generator");
        std::string body = rest.substr(open + 1, close - open - 1);
        auto colon = body.find(':');
        if (colon == std::string::npos) throw err("generator needs index:weight");
        gens.push_back({detail::parse_int(body.substr(0, colon), line_no),
                        detail::parse_int(body.substr(colon + 1), line_no)});
        std::string between = detail::trim(rest.substr(pos, open - pos));
        if (!between.empty() && between != ",") throw err("unexpected '" + between + "'");
        pos = close + 1;
      }
      if (!detail::trim(rest.substr(pos)).empty()) throw err("trailing text after generators");
      if (gens.empty()) throw err("no generators");
    } else if (line.rfind("cutoff:", 0) == 0) {
      cutoff = detail::parse_int(line.substr(7), line_no);
    } else if (line[0] == '[') {
      if (!have_gens) throw err("bracket before generators header");
      auto close = line.find(']');
      auto eq = line.find('=', close == std::string::npos ? 0 : close);
      if (close == std::string::npos || eq == std::string::npos) throw err("expected [i,j] = ...");
      std::string pair = line.substr(1, close - 1);
      auto comma = pair.find(',');
      if (comma == std::string::npos) throw err("expected [i,j]");
      int i = detail::parse_int(pair.substr(0, comma), line_no);
      int j = detail::parse_int(pair.substr(comma + 1), line_no);
      if (!detail::trim(line.substr(close + 1, eq - close - 1)).empty()) throw err("junk before '='");
      if (br.count({i, j}) || br.count({j, i})) throw err("duplicate bracket");
      std::vector<BracketTerm> terms;
      for (const auto& t : detail::split_terms(line.substr(eq + 1))) {
        auto star = t.rfind('*');
        if (star == std::string::npos) throw err("term '" + t + "' needs coeff*index");
        Rational c;
        try {
          c = parse_rational(t.substr(0, star));
        } catch (const Error&) {
          throw err("bad coefficient in '" + t + "'");
        }
        terms.push_back({c, detail::parse_int(t.substr(star + 1), line_no)});
      }
      if (terms.empty()) throw err("empty bracket right-hand side");
      br[{i, j}] = std::move(terms);
    } else {
      throw err("unrecognized line '" + line + "'");
    }
  }
  if (!have_gens) throw Error(ErrorKind::SyntaxError, "missing generators header");
  int maxw = 0;
  for (const auto& g : gens) maxw = std::max(maxw, g.weight);
  return GradedLieAlgebra(std::move(gens), std::move(br), cutoff.value_or(maxw));
}

inline std::string write_algebra(const GradedLieAlgebra& g) {
  std::ostringstream out;
  out << "generators:";
  int maxw = 0;
  for (std::size_t i = 0; i < g.generators().size(); ++i) {
    const auto& x = g.generators()[i];
    out << (i ? ", " : " ") << '(' << x.index << ':' << x.weight << ')';
    maxw = std::max(maxw, x.weight);
  }
  out << '\n';
  if (g.cutoff() != maxw) out << "cutoff: " << g.cutoff() << '\n';
  for (const auto& [key, terms] : g.brackets()) {
    out << '[' << key.first << ',' << key.second << "] =";
    for (std::size_t t = 0; t < terms.size(); ++t)
      out << (t ? " + " : " ") << to_string(terms[t].coeff) << '*' << terms[t].target;
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Descending central series and the associated graded algebra
// ---------------------------------------------------------------------------

inline SparseVector to_sparse(const Element& x) {
  SparseVector v;
  for (const auto& [i, c] : x) v.emplace(static_cast<std::size_t>(i), c);
  return v;
}

inline Element to_element(const SparseVector& v) {
  Element x;
  for (const auto& [i, c] : v) x.emplace(static_cast<int>(i), c);
  return x;
}

/// C^1 ⊇ C^2 ⊇ ... ; each term is a reduced echelon basis (pivot = smallest
/// generator index). The chain ends with the first term equal to its
/// predecessor or to zero.
struct Filtration {
  std::vector<std::vector<Element>> terms;

  /// Pivot generator indices of C^k (k is 1-based). For the presets every term
  /// is a coordinate subspace and this is exactly its index set.
  std::vector<int> indices(std::size_t k) const {
    std::vector<int> out;
    for (const auto& e : terms.at(k - 1)) out.push_back(e.begin()->first);
    return out;
  }
  bool nilpotent() const { return !terms.empty() && terms.back().empty(); }
};

inline Filtration central_series(const GradedLieAlgebra& g) {
  Filtration f;
  RowReducer c1;
  for (const auto& x : g.generators()) c1.insert(SparseVector{{static_cast<std::size_t>(x.index), Rational(1)}});
  auto as_elements = [](const RowReducer& r) {
    std::vector<Element> out;
    for (const auto& v : r.basis()) out.push_back(to_element(v));
    return out;
  };
  f.terms.push_back(as_elements(c1));
  while (!f.terms.back().empty()) {
    RowReducer next;
    for (const auto& x : g.generators())
      for (const auto& v : f.terms.back()) next.insert(to_sparse(bracket(g, Element{{x.index, 1}}, v)));
    auto term = as_elements(next);
    bool stable = term.size() == f.terms.back().size();
    f.terms.push_back(std::move(term));
    if (stable) break;
  }
  return f;
}

struct GradedBasis {
  GradedLieAlgebra algebra;
  /// Original-algebra representative of each gr generator, keyed by gr index.
  std::map<int, Element> representatives;
};

inline GradedBasis associated_graded_with_basis(const GradedLieAlgebra& g) {
  Filtration f = central_series(g);
  if (!f.nilpotent()) throw Error(ErrorKind::NotApplicable, "central series does not reach zero");
  const std::size_t levels = f.terms.size() - 1;  // last term is zero
  std::vector<RowReducer> span(f.terms.size());
  for (std::size_t k = 0; k < f.terms.size(); ++k)
    for (const auto& e : f.terms[k]) span[k].insert(to_sparse(e));

  // reps[k] : representatives of C^{k+1}/C^{k+2}, lexicographically smallest first.
  std::vector<std::vector<Element>> reps(levels);
  for (std::size_t k = 0; k < levels; ++k) {
    RowReducer modulo = span[k + 1];
    for (const auto& e : f.terms[k])
      if (modulo.insert(to_sparse(e))) reps[k].push_back(e);
  }
  std::vector<std::pair<int, Element>> labelled;  // (index, rep)
  std::map<int, int> level_of;
  bool collision = false;
  for (std::size_t k = 0; k < levels; ++k)
    for (const auto& e : reps[k]) {
      int idx = e.begin()->first;
      if (level_of.count(idx)) collision = true;
      level_of[idx] = static_cast<int>(k + 1);
      labelled.emplace_back(idx, e);
    }
  if (collision) {
    level_of.clear();
    for (std::size_t n = 0, k = 0; k < levels; ++k)
      for (std::size_t m = 0; m < reps[k].size(); ++m, ++n) {
        labelled[n].first = static_cast<int>(n + 1);
        level_of[static_cast<int>(n + 1)] = static_cast<int>(k + 1);
      }
  }
  std::vector<Generator> gens;
  for (const auto& [idx, e] : labelled) gens.push_back({idx, level_of[idx]});

  // Coordinates of v in C^L modulo C^{L+1} with respect to the level-L reps.
  auto coordinates = [&](const Element& v, std::size_t L) {
    Element out;
    if (L > levels) return out;
    std::vector<std::pair<int, Element>> cols;
    for (const auto& [idx, e] : labelled)
      if (static_cast<std::size_t>(level_of[idx]) == L) cols.emplace_back(idx, e);
    std::vector<Element> extra = f.terms[L];
    std::map<int, std::size_t> row_of;
    for (const auto& x : g.generators()) row_of.emplace(x.index, row_of.size());
    SliceMatrix m(row_of.size(), cols.size() + extra.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
      for (const auto& [i, a] : cols[c].second) m.add(row_of[i], c, a);
    for (std::size_t c = 0; c < extra.size(); ++c)
      for (const auto& [i, a] : extra[c]) m.add(row_of[i], cols.size() + c, a);
    DenseVector rhs(row_of.size(), Rational(0));
    for (const auto& [i, a] : v) rhs[row_of[i]] = a;
    auto sol = solve(m, rhs);
    if (!sol) throw Error(ErrorKind::NotApplicable, "bracket leaves the filtration level");
    for (std::size_t c = 0; c < cols.size(); ++c)
      if (sol->particular[c] != 0) out[cols[c].first] = sol->particular[c];
    return out;
  };

  BracketTable br;
  for (std::size_t a = 0; a < labelled.size(); ++a)
    for (std::size_t b = a + 1; b < labelled.size(); ++b) {
      int ia = labelled[a].first, ib = labelled[b].first;
      std::size_t L = static_cast<std::size_t>(level_of[ia] + level_of[ib]);
      if (L > levels) continue;
      Element coords = coordinates(bracket(g, labelled[a].second, labelled[b].second), L);
      std::vector<BracketTerm> terms;
      for (const auto& [k, c] : coords) terms.push_back({c, k});
      if (!terms.empty()) br[{std::min(ia, ib), std::max(ia, ib)}] = std::move(terms);
    }
  GradedBasis out{GradedLieAlgebra(std::move(gens), std::move(br), static_cast<int>(std::max<std::size_t>(levels, 1))),
                  {}};
  for (const auto& [idx, e] : labelled) out.representatives.emplace(idx, e);
  return out;
}

inline GradedLieAlgebra associated_graded(const GradedLieAlgebra& g) {
  return associated_graded_with_basis(g).algebra;
}

// ---------------------------------------------------------------------------
// Recognition of m0 among gr-graded algebras of dimension pattern (2,1,1,...)
// ---------------------------------------------------------------------------

struct NormalFormResult {
  bool success = false;
  /// f_i expressed in the generators of the input, i = 1..dim.
  std::map<int, Element> basis;
  int failed_level = 0;
  std::string reason;
};

inline NormalFormResult m0_normal_form(const GradedLieAlgebra& g) {
  std::map<int, std::vector<int>> by_weight;
  for (const auto& x : g.generators()) by_weight[x.weight].push_back(x.index);
  int top = by_weight.empty() ? 0 : by_weight.rbegin()->first;
  bool pattern = top >= 2 && by_weight.count(1) && by_weight[1].size() == 2;
  for (int w = 2; pattern && w <= top; ++w) pattern = by_weight.count(w) && by_weight[w].size() == 1;
  if (!pattern) throw Error(ErrorKind::NotApplicable, "dimension pattern is not (2,1,1,...)");

  const int u1 = by_weight[1][0], u2 = by_weight[1][1];
  auto level_gen = [&](int w) { return by_weight[w][0]; };
  NormalFormResult res;

  // K = { y in level 1 : [y, v_w] = 0 for every higher level w }.
  SliceMatrix constraints(static_cast<std::size_t>(std::max(top - 2, 0)), 2);
  for (int w = 2; w < top; ++w) {
    Element b1 = bracket(g, {{u1, 1}}, {{level_gen(w), 1}});
    Element b2 = bracket(g, {{u2, 1}}, {{level_gen(w), 1}});
    auto coef = [&](const Element& e) {
      auto it = e.find(level_gen(w + 1));
      return it == e.end() ? Rational(0) : it->second;
    };
    constraints.add(static_cast<std::size_t>(w - 2), 0, coef(b1));
    constraints.add(static_cast<std::size_t>(w - 2), 1, coef(b2));
  }
  auto kernel = kernel_basis(constraints);
  Element x, y;
  if (kernel.empty()) {
    res.failed_level = 1;
    res.reason = "no degree-1 element commutes with all higher levels";
    return res;
  }
  if (kernel.size() == 2) {
    y = {{u2, 1}};
    x = {{u1, 1}};
  } else {
    for (int c = 0; c < 2; ++c)
      if (kernel[0][static_cast<std::size_t>(c)] != 0) y[c == 0 ? u1 : u2] = kernel[0][static_cast<std::size_t>(c)];
    // any level-1 element off the line of y
    x = kernel[0][0] != 0 && kernel[0][1] == 0 ? Element{{u2, 1}} : Element{{u1, 1}};
  }
  std::map<int, Element> f;
  f[1] = x;
  f[2] = y;
  for (int i = 2; i <= top; ++i) {
    Element next = bracket(g, f[1], f[i]);
    if (next.empty()) {
      res.failed_level = i == 2 ? 1 : i - 1;
      res.reason = "adjoint action of the degree-1 element is not surjective onto level " + std::to_string(i);
      return res;
    }
    f[i + 1] = next;
  }
  // verify every bracket against [f1, f_i] = f_{i+1}
  const int dim = top + 1;
  std::map<int, int> gr_level;
  gr_level[1] = gr_level[2] = 1;
  for (int i = 3; i <= dim; ++i) gr_level[i] = i - 1;
  for (int i = 1; i <= dim; ++i)
    for (int j = i + 1; j <= dim; ++j) {
      Element got = bracket(g, f[i], f[j]);
      Element want;
      if (i == 1 && j >= 2 && j + 1 <= dim) want = f[j + 1];
      if (got != want) {
        res.failed_level = gr_level[i] + gr_level[j];
        res.reason = "bracket [f" + std::to_string(i) + ", f" + std::to_string(j) + "] differs from m0";
        return res;
      }
    }
  res.success = true;
  res.basis = std::move(f);
  return res;
}

}  // namespace massey
