#pragma once

#include <gmpxx.h>

#include <boost/multiprecision/mpfr.hpp>
#include <string>

namespace mub {

using Real = boost::multiprecision::mpfr_float;

/// Binary precision sufficient to hold `digits` decimal digits, plus guard bits.
inline unsigned bits_for_digits(unsigned digits) {
  return static_cast<unsigned>(digits * 3.3219280948873623) + 16;
}

/// Sets the default precision of newly created `Real`s for the lifetime of the
/// guard. The default precision is process-global in this Boost version, so
/// guards must not be used concurrently.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned digits) : saved_(Real::default_precision()) {
    Real::default_precision(digits);
  }
  ~PrecisionGuard() { Real::default_precision(saved_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_;
};

Real make_real(const mpq_class& q, unsigned digits);
Real make_real(const std::string& decimal, unsigned digits);
Real pi_real(unsigned digits);
Real sqrt3_real(unsigned digits);

/// Decimal string with `digits` significant digits in scientific notation.
std::string to_decimal(const Real& x, unsigned digits);

/// Exact rational value of a binary floating point number.
mpq_class to_rational(const Real& x);

/// Nearest rational with `digits` significant decimal digits (m * 10^e).
mpq_class round_significant(const Real& x, unsigned digits);
mpq_class round_significant(const mpq_class& x, unsigned digits);

/// Parses "p/q", "p", or a decimal ("-1.25e-3") into an exact rational.
mpq_class parse_rational(const std::string& s);
std::string rational_to_string(const mpq_class& q);

}  // namespace mub
