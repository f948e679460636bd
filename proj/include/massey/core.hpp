#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace massey {

using Rational = mpq_class;

enum class ErrorKind {
  InvalidCutoff,
  CutoffTooSmall,
  SyntaxError,
  JacobiViolation,
  WeightViolation,
  NotACocycle,
  ArityMismatch,
  InvalidIndex,
  SingularMatrix,
  Unverified,
  NotApplicable,
  ZeroClass,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidCutoff: return "invalid-cutoff";
    case ErrorKind::CutoffTooSmall: return "cutoff-too-small";
    case ErrorKind::SyntaxError: return "syntax-error";
    case ErrorKind::JacobiViolation: return "jacobi-violation";
    case ErrorKind::WeightViolation: return "weight-violation";
    case ErrorKind::NotACocycle: return "not-a-cocycle";
    case ErrorKind::ArityMismatch: return "arity-mismatch";
    case ErrorKind::InvalidIndex: return "invalid-index";
    case ErrorKind::SingularMatrix: return "singular-matrix";
    case ErrorKind::Unverified: return "unverified";
    case ErrorKind::NotApplicable: return "not-applicable";
    case ErrorKind::ZeroClass: return "zero-class";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Canonical text of a rational: "p" or "p/q" with q > 0, lowest terms.
inline std::string to_string(const Rational& r) {
  Rational c(r);
  c.canonicalize();
  return c.get_str();
}

/// Parses "p" or "p/q" (optional sign). Throws SyntaxError on anything else.
inline Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  auto valid_int = [](std::string_view s, bool allow_sign) {
    if (s.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  auto slash = text.find('/');
  std::string num(text.substr(0, slash));
  std::string den = slash == std::string_view::npos ? "1" : std::string(trim(text.substr(slash + 1)));
  num = std::string(trim(num));
  if (!valid_int(num, true) || !valid_int(den, false))
    throw Error(ErrorKind::SyntaxError, "bad rational '" + std::string(text) + "'");
  if (num[0] == '+') num.erase(0, 1);
  mpz_class n(num), d(den);
  if (d == 0) throw Error(ErrorKind::SyntaxError, "zero denominator in '" + std::string(text) + "'");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

}  // namespace massey
