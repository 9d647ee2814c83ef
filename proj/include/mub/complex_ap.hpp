#pragma once

#include <algorithm>
#include <complex>

#include "mub/real.hpp"

namespace mub {

/// Complex number with arbitrary-precision parts. Results of binary operations
/// carry the smaller precision of the two operands.
struct ComplexAP {
  Real re;
  Real im;
  unsigned digits = 40;

  ComplexAP() : re(0), im(0) {}
  explicit ComplexAP(unsigned d) : re(Real(0, d)), im(Real(0, d)), digits(d) {}
  ComplexAP(Real r, Real i, unsigned d) : re(Real(r, d)), im(Real(i, d)), digits(d) {}

  static ComplexAP from_int(long r, long i, unsigned d) { return {Real(r, d), Real(i, d), d}; }
  /// e^{i phase}
  static ComplexAP polar(const Real& phase, unsigned d);
  /// e^{2 pi i turns}
  static ComplexAP unit_turns(const Real& turns, unsigned d);

  ComplexAP conj() const { return {re, -im, digits}; }
  Real norm() const { return Real(re * re + im * im, digits); }
  Real abs() const { return Real(sqrt(re * re + im * im), digits); }
  Real arg() const { return Real(atan2(im, re), digits); }
  std::complex<double> to_complex() const { return {re.convert_to<double>(), im.convert_to<double>()}; }

  ComplexAP& operator+=(const ComplexAP& o);
  ComplexAP& operator-=(const ComplexAP& o);
  ComplexAP& operator*=(const ComplexAP& o);
  ComplexAP& operator/=(const ComplexAP& o);
  ComplexAP& operator*=(const Real& s);

  friend ComplexAP operator+(ComplexAP a, const ComplexAP& b) { return a += b; }
  friend ComplexAP operator-(ComplexAP a, const ComplexAP& b) { return a -= b; }
  friend ComplexAP operator*(ComplexAP a, const ComplexAP& b) { return a *= b; }
  friend ComplexAP operator/(ComplexAP a, const ComplexAP& b) { return a /= b; }
  friend ComplexAP operator*(ComplexAP a, const Real& s) { return a *= s; }
  ComplexAP operator-() const { return {-re, -im, digits}; }
};

/// Principal square root.
ComplexAP sqrt(const ComplexAP& z);

inline Real abs_diff(const ComplexAP& a, const ComplexAP& b) { return (a - b).abs(); }

}  // namespace mub
