#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace qstat {

using Complex = std::complex<double>;

inline constexpr double default_tolerance = 1e-9;

/// Error categories surfaced to callers. The numeric values double as CLI
/// exit codes (offset by 10) so every failure class is distinguishable.
enum class ErrorCode : int {
  domain = 1,
  parse = 2,
  missing_section = 3,
  shape_mismatch = 4,
  zero_bicharacter = 5,
  non_normalized = 6,
  torsion = 7,
  unknown_key = 8,
  unknown_command = 9,
  expression = 10,
  precondition = 11,
  io = 12,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::domain: return "domain";
    case ErrorCode::parse: return "parse";
    case ErrorCode::missing_section: return "missing-section";
    case ErrorCode::shape_mismatch: return "shape-mismatch";
    case ErrorCode::zero_bicharacter: return "zero-bicharacter";
    case ErrorCode::non_normalized: return "non-normalized";
    case ErrorCode::torsion: return "torsion";
    case ErrorCode::unknown_key: return "unknown-key";
    case ErrorCode::unknown_command: return "unknown-command";
    case ErrorCode::expression: return "expression";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Integer power by repeated squaring; exact for roots of unity like -1 and i.
inline Complex ipow(Complex base, long long exp) {
  if (exp < 0) return Complex(1.0) / ipow(base, -exp);
  Complex result(1.0);
  while (exp > 0) {
    if (exp & 1) result *= base;
    base *= base;
    exp >>= 1;
  }
  return result;
}

inline bool near(Complex a, Complex b, double tol) {
  return std::abs(a - b) <= tol;
}

namespace detail {

inline std::string format_real(double x) {
  if (x == 0.0) x = 0.0;  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace detail

/// Canonical `re+imj` rendering used by CSV export and config round-trips.
inline std::string format_complex_csv(Complex z) {
  double im = z.imag() == 0.0 ? 0.0 : z.imag();
  std::string s = detail::format_real(z.real());
  s += (im < 0 ? "-" : "+");
  s += detail::format_real(std::abs(im));
  s += "j";
  return s;
}

/// Coefficient rendering for polynomial text: plain real when the imaginary
/// part vanishes, otherwise a parenthesised sum that the expression parser
/// reads back.
inline std::string format_coefficient(Complex z) {
  if (z.imag() == 0.0) return detail::format_real(z.real());
  if (z.real() == 0.0) return detail::format_real(z.imag()) + "j";
  std::string s = "(" + detail::format_real(z.real());
  s += (z.imag() < 0 ? " - " : " + ");
  s += detail::format_real(std::abs(z.imag())) + "j)";
  return s;
}

inline std::string format_residual(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", r);
  return buf;
}

}  // namespace qstat
