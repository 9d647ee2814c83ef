#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mub/complex_ap.hpp"

namespace mub::catalog {

enum class Family {
  Fourier,
  FourierT,
  Dita,
  Hermitean,
  Symmetric,
  Szollosi,
  SzollosiT,
  Circulant,
  Spectral,
  Custom,
};

std::string to_string(Family f);
Family family_from_string(const std::string& name);

/// Sign selector of the square root in the Hermitean family.
enum class Branch { Plus, Minus };

/// Dense d x d complex Hadamard matrix, row-major, entries normalised to
/// modulus 1/sqrt(d). Values are immutable after construction.
class HadamardMatrix {
 public:
  HadamardMatrix() = default;
  HadamardMatrix(int dim, std::vector<ComplexAP> entries, Family family, std::vector<Real> params,
                 std::optional<Branch> branch, unsigned digits);

  int dim() const { return dim_; }
  Family family() const { return family_; }
  const std::vector<Real>& params() const { return params_; }
  std::optional<Branch> branch() const { return branch_; }
  unsigned digits() const { return digits_; }

  const ComplexAP& operator()(int row, int col) const { return entries_[row * dim_ + col]; }
  const std::vector<ComplexAP>& entries() const { return entries_; }

  HadamardMatrix transposed() const;
  HadamardMatrix conjugated() const;
  /// Applies row permutation `rows` (new row i = old row rows[i]) and column
  /// permutation `cols`.
  HadamardMatrix permuted(const std::vector<int>& rows, const std::vector<int>& cols) const;
  HadamardMatrix with_family(Family f, std::vector<Real> params) const;

 private:
  int dim_ = 0;
  std::vector<ComplexAP> entries_;
  Family family_ = Family::Custom;
  std::vector<Real> params_;
  std::optional<Branch> branch_;
  unsigned digits_ = 40;
};

/// theta_0 with 2 pi theta_0 = arccos(1 - sqrt 3): lower end of the Hermitean
/// fundamental interval.
Real hermitean_theta0(unsigned digits);

/// D(alpha) = |alpha|^4 + 18 |alpha|^2 - 8 Re(alpha^3) - 27.
Real deltoid(const Real& a, const Real& b);

struct FundamentalRegion {
  Family family;
  std::string description;
  bool contains(const std::vector<Real>& params, int dim = 6) const;
};

FundamentalRegion fundamental_region(Family f);

struct BuildOptions {
  int dim = 6;  // only consulted for the Fourier family
  std::optional<Branch> branch;
  unsigned digits = 40;
  bool override_region = false;
};

HadamardMatrix build(Family family, const std::vector<Real>& params, const BuildOptions& opts = {});
HadamardMatrix build(Family family, std::initializer_list<double> params, const BuildOptions& opts = {});

/// Fourier matrix F_d (omega = e^{2 pi i / d}).
HadamardMatrix fourier(int d, unsigned digits = 40);

/// Unimodular entries of the symmetric family M(t) (before the 1/sqrt 6 factor).
struct SymmetricEntries {
  ComplexAP x, a, b, c, d, p, q;
};
SymmetricEntries solve_symmetric_entries(const Real& t, unsigned digits = 40);
/// Max residual of the four linear conditions on the symmetric-family entries.
Real symmetric_entry_residual(const SymmetricEntries& e);

struct SzollosiEntries {
  ComplexAP x, y, u, v;
};
/// Roots of f_alpha(z) = z^3 - alpha z^2 + conj(alpha) z - 1, sorted by argument.
std::vector<ComplexAP> szollosi_cubic_roots(const Real& a, const Real& b, unsigned digits);
SzollosiEntries solve_szollosi_entries(const Real& a, const Real& b, unsigned digits = 40);

struct Validation {
  bool pass = false;
  /// induced infinity norm of H^dagger H - I (an upper bound on its spectral norm)
  Real unitarity_defect;
  /// max_ij | |H_ij| - 1/sqrt(d) |
  Real modulus_defect;
};

Validation validate_hadamard(const HadamardMatrix& h, const Real& tol);
/// Validation at the default tolerance 10^(2 - digits).
Validation validate_hadamard(const HadamardMatrix& h);

HadamardMatrix dephase(const HadamardMatrix& h);

/// Equivalence under row/column permutations and phases (monomial matrices).
bool equivalent(const HadamardMatrix& h1, const HadamardMatrix& h2, double tol = 1e-12);

/// Row permutation p such that b(i, j) = conj(a(p[i], q[j])) for some column
/// permutation q, if any (brute force, d <= 7). Vectors MU to a map to
/// vectors MU to b under v -> (conj v_{p[i]})_i.
std::optional<std::vector<int>> conjugating_permutation(const HadamardMatrix& a, const HadamardMatrix& b,
                                                        double tol = 1e-12);

/// A random rephasing and permutation of `h` (used by tests and the CLI).
HadamardMatrix scramble(const HadamardMatrix& h, unsigned long long seed);

}  // namespace mub::catalog
