#ifndef LIECLASS_SCALAR_HPP
#define LIECLASS_SCALAR_HPP

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace lieclass {

/// Exact rational scalar used by the exact half of the pipeline.
using Rat = mpq_class;

/// Absolute/relative tolerance pair used by all floating-point comparisons.
struct Tolerance {
  double abs = 1e-9;
  double rel = 1e-9;

  bool close(double a, double b) const {
    double diff = std::fabs(a - b);
    double scale = std::max(std::fabs(a), std::fabs(b));
    return diff <= abs || diff <= rel * scale;
  }
  bool is_zero(double v, double scale = 1.0) const {
    return std::fabs(v) <= std::max(abs, rel * std::fabs(scale));
  }
};

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rat> {
  static constexpr bool is_exact = true;
  static Rat zero() { return Rat(0); }
  static Rat one() { return Rat(1); }
  static Rat from_long(long v) { return Rat(v); }
  static double to_double(const Rat& v) { return v.get_d(); }
  static bool is_zero(const Rat& v) { return sgn(v) == 0; }
};

template <>
struct scalar_traits<double> {
  static constexpr bool is_exact = false;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double from_long(long v) { return static_cast<double>(v); }
  static double to_double(double v) { return v; }
  static bool is_zero(double v) { return v == 0.0; }
};

/// Parses "p", "p/q" or a decimal integer string into an exact rational.
Rat rat_parse(const std::string& text);

/// Canonical rendering: "p" when the denominator is one, otherwise "p/q".
std::string rat_str(const Rat& v);

/// Square root of a rational if it is a perfect square of a rational.
std::optional<Rat> rat_sqrt_exact(const Rat& v);

/// Writes n = s^2 * d with d squarefree, returning (s, d). May fail for
/// composite n with large prime-square factors beyond the trial bound.
std::optional<std::pair<mpz_class, mpz_class>> squarefree_split(const mpz_class& n);

}  // namespace lieclass

#endif
