#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mub/catalog.hpp"
#include "mub/polynomial.hpp"

namespace mub::polysys {

enum class CoeffMode { ExactQSqrt3, RationalApprox };

struct Mode {
  CoeffMode kind = CoeffMode::ExactQSqrt3;
  unsigned digits = 0;  // significant digits kept in RationalApprox

  static Mode exact() { return {CoeffMode::ExactQSqrt3, 0}; }
  static Mode approx(unsigned digits) { return {CoeffMode::RationalApprox, digits}; }
  bool is_exact() const { return kind == CoeffMode::ExactQSqrt3; }
  std::string to_string() const;
  static Mode parse(const std::string& s);
  friend bool operator==(const Mode& a, const Mode& b) { return a.kind == b.kind && a.digits == b.digits; }
};

/// The MU system for {I, H}: d-1 modulus constraints followed by d-1
/// unbiasedness constraints for columns 0..d-2. Variables x1..x_{d-1},
/// y1..y_{d-1} in that canonical layout.
struct PolynomialSystem {
  int dim = 0;
  Mode mode;
  std::vector<MultiPoly> polys;
  /// Unbiasedness polynomial for the omitted last column (equals minus the sum
  /// of the retained ones modulo the modulus constraints).
  MultiPoly dropped_column;
  catalog::Family source_family = catalog::Family::Custom;
  std::vector<std::string> source_params;
  bool simplified = false;

  int nvars() const { return 2 * (dim - 1); }
  std::vector<std::string> vars() const;
};

std::vector<std::string> variable_names(int dim);

/// Recognizes v = a + b sqrt 3 with small rationals a, b via an integer
/// relation search on (v, 1, sqrt 3). `digits` is the accuracy of v.
std::optional<QSqrt3> detect_qsqrt3(const Real& v, unsigned digits);

PolynomialSystem mu_system(const catalog::HadamardMatrix& h, Mode mode);

/// True if the system is the exact, unsimplified MU system of the 6x6 Fourier
/// matrix (recognized by its polynomials, not by the family tag).
bool is_fourier6_system(const PolynomialSystem& p);

/// Replaces the five unbiasedness polynomials of the F6 system by the sparse
/// integer combinations; the modulus constraints are kept.
PolynomialSystem simplify_fourier6(const PolynomialSystem& p);

PolynomialSystem round_coefficients(const PolynomialSystem& p, unsigned digits);

/// max_n |p_n(point)| in arbitrary precision.
Real evaluate_residual(const PolynomialSystem& p, const std::vector<Real>& point, unsigned digits = 60);
/// Residual of the omitted column constraint at `point`.
Real dropped_column_residual(const PolynomialSystem& p, const std::vector<Real>& point, unsigned digits = 60);

}  // namespace mub::polysys
