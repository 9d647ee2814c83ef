#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mub/real.hpp"

namespace mub {

/// a + b sqrt(3) with rational a, b.
struct QSqrt3 {
  mpq_class a;
  mpq_class b;

  QSqrt3() : a(0), b(0) {}
  QSqrt3(long v) : a(v), b(0) {}  // NOLINT(google-explicit-constructor)
  QSqrt3(mpq_class av) : a(std::move(av)), b(0) {}  // NOLINT(google-explicit-constructor)
  QSqrt3(mpq_class av, mpq_class bv) : a(std::move(av)), b(std::move(bv)) {}

  static QSqrt3 sqrt3() { return {0, 1}; }

  bool is_zero() const { return sgn(a) == 0 && sgn(b) == 0; }
  bool is_rational() const { return sgn(b) == 0; }
  /// Exact sign of a + b sqrt 3.
  int sign() const;
  QSqrt3 conj() const { return {a, -b}; }
  /// a^2 - 3 b^2
  mpq_class norm() const { return a * a - 3 * b * b; }
  QSqrt3 inverse() const;

  QSqrt3& operator+=(const QSqrt3& o) {
    a += o.a;
    b += o.b;
    return *this;
  }
  QSqrt3& operator-=(const QSqrt3& o) {
    a -= o.a;
    b -= o.b;
    return *this;
  }
  QSqrt3& operator*=(const QSqrt3& o);
  QSqrt3& operator/=(const QSqrt3& o) { return *this *= o.inverse(); }

  friend QSqrt3 operator+(QSqrt3 x, const QSqrt3& y) { return x += y; }
  friend QSqrt3 operator-(QSqrt3 x, const QSqrt3& y) { return x -= y; }
  friend QSqrt3 operator*(QSqrt3 x, const QSqrt3& y) { return x *= y; }
  friend QSqrt3 operator/(QSqrt3 x, const QSqrt3& y) { return x /= y; }
  QSqrt3 operator-() const { return {-a, -b}; }
  friend bool operator==(const QSqrt3& x, const QSqrt3& y) { return x.a == y.a && x.b == y.b; }
  friend bool operator!=(const QSqrt3& x, const QSqrt3& y) { return !(x == y); }

  Real to_real(unsigned digits) const;
  std::string to_string() const;
};

constexpr int kMaxVars = 16;

/// Exponent vector over at most kMaxVars variables, in the canonical variable
/// layout of the owning system.
class Monomial {
 public:
  Monomial() { e_.fill(0); }
  static Monomial var(int i, int power = 1) {
    Monomial m;
    m.e_[i] = static_cast<uint8_t>(power);
    return m;
  }

  int operator[](int i) const { return e_[i]; }
  void set(int i, int v) { e_[i] = static_cast<uint8_t>(v); }
  int degree() const;
  bool is_one() const { return degree() == 0; }
  bool divides(const Monomial& o) const;
  Monomial operator*(const Monomial& o) const;
  /// Requires divides(o, *this).
  Monomial operator/(const Monomial& o) const;
  static Monomial lcm(const Monomial& a, const Monomial& b);
  static bool coprime(const Monomial& a, const Monomial& b);

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.e_ == b.e_; }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return a.e_ != b.e_; }
  /// Lexicographic in the canonical layout (variable 0 largest).
  friend bool operator<(const Monomial& a, const Monomial& b) { return a.e_ < b.e_; }

  const std::array<uint8_t, kMaxVars>& exps() const { return e_; }

 private:
  std::array<uint8_t, kMaxVars> e_;
};

struct Term {
  Monomial mono;
  QSqrt3 coeff;
};

/// Sparse polynomial over Q(sqrt 3). Terms are kept sorted by decreasing
/// canonical lex order with no zero coefficients.
class MultiPoly {
 public:
  MultiPoly() = default;
  explicit MultiPoly(int nvars) : nvars_(nvars) {}
  MultiPoly(int nvars, std::vector<Term> terms);

  static MultiPoly constant(int nvars, const QSqrt3& c);
  static MultiPoly variable(int nvars, int i);
  /// Parses e.g. "x1^2 + 3*y1*x2 - 1/2 + s3*y2" where s3 denotes sqrt 3.
  static MultiPoly parse(const std::string& text, const std::vector<std::string>& vars);

  int nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }
  int degree() const;
  bool is_rational() const;
  /// Coefficient of `m`, zero if absent.
  QSqrt3 coeff(const Monomial& m) const;

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const QSqrt3& c);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(MultiPoly a, const QSqrt3& c) { return a *= c; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  MultiPoly operator-() const { return *this * QSqrt3(-1); }
  MultiPoly mul_term(const Monomial& m, const QSqrt3& c) const;
  MultiPoly derivative(int var) const;
  friend bool operator==(const MultiPoly& a, const MultiPoly& b);

  /// Divides by a common rational factor so that coefficients are integral
  /// with gcd 1 and the leading term (canonical order) is positive. A common
  /// factor sqrt 3 is removed as well.
  MultiPoly primitive() const;

  Real evaluate(const std::vector<Real>& point, unsigned digits) const;
  double evaluate(const std::vector<double>& point) const;
  std::string to_string(const std::vector<std::string>& vars) const;

 private:
  void normalize();
  int nvars_ = 0;
  std::vector<Term> terms_;
};

}  // namespace mub
