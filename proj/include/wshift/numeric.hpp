#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace wshift {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using HighPrecision = boost::multiprecision::mpfr_float;

/// Mantissa width used for floating evaluation when the caller does not ask for one.
inline constexpr unsigned kDefaultPrecisionBits = 80;

// Error vocabulary shared by all modules.
struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct SequenceExhausted : std::out_of_range {
  using std::out_of_range::out_of_range;
};
struct OutsideBall : std::domain_error {
  using std::domain_error::domain_error;
};
struct UnreliableTail : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// n! from a process-wide cache. References stay valid for the process lifetime.
const Integer& factorial(unsigned n);

/// Binomial coefficient with an integer (possibly negative) upper argument.
Integer binomial(long long n, unsigned k);

/// Parses "p/q", "p" or "-p/q". Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" rendering (just "p" when the denominator is 1).
std::string to_string(const Rational& r);

/// Sets the MPFR working precision for the lifetime of the scope and restores it after.
/// The MPFR default precision is process-global, so scopes must not overlap across threads.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_digits10_;
};

/// Converts an exact rational into the working floating type.
template <typename Real>
Real to_real(const Rational& r) {
  if constexpr (std::is_floating_point_v<Real>) {
    return r.template convert_to<Real>();
  } else {
    Real num{boost::multiprecision::numerator(r)};
    Real den{boost::multiprecision::denominator(r)};
    return num / den;
  }
}

template <typename Real>
Real to_real(const Integer& z) {
  if constexpr (std::is_floating_point_v<Real>) {
    return z.template convert_to<Real>();
  } else {
    return Real{z};
  }
}

/// 17 significant digits, the round-trip width of a double.
std::string format_sig17(double value);

}  // namespace wshift
