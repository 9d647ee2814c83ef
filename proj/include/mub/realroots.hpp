#pragma once

#include <gmpxx.h>

#include <vector>

#include "mub/groebner.hpp"
#include "mub/polynomial.hpp"
#include "mub/polysys.hpp"
#include "mub/real.hpp"

namespace mub::realroots {

/// Univariate polynomial over Q(sqrt 3); coefficient k multiplies t^k.
using UniPoly = std::vector<QSqrt3>;

UniPoly univariate(const MultiPoly& f, int var);
/// Reads a univariate polynomial in t, e.g. "3*t - 4*t^3".
UniPoly parse_univariate(const std::string& text);
int degree(const UniPoly& p);
UniPoly derivative(const UniPoly& p);
/// p / gcd(p, p'), made monic.
UniPoly square_free(const UniPoly& p);
/// Exact sign of p at a rational point.
int sign_at(const UniPoly& p, const mpq_class& t);
Real evaluate(const UniPoly& p, const Real& t, unsigned digits);

std::vector<UniPoly> sturm_sequence(const UniPoly& p);
/// Sign variations of the sequence at t; `inf_sign` of +1 / -1 evaluates at
/// +infinity / -infinity instead.
int sign_variations(const std::vector<UniPoly>& seq, const mpq_class& t);
int sign_variations_at_infinity(const std::vector<UniPoly>& seq, int inf_sign);

/// The root lies in (lo, hi], or equals lo == hi when `exact`.
struct IsolatingInterval {
  mpq_class lo;
  mpq_class hi;
  bool exact = false;
  bool squarefree = true;

  mpq_class width() const { return hi - lo; }
  Real midpoint(unsigned digits) const;
};

/// One interval per distinct real root, in increasing order.
std::vector<IsolatingInterval> sturm_isolate(const UniPoly& p);
/// Shrinks the interval to width <= 10^-digits * max(1, |root|).
IsolatingInterval refine(const IsolatingInterval& iv, const UniPoly& p, unsigned digits);
/// Isolated and refined real roots as high-precision values.
std::vector<Real> real_roots(const UniPoly& p, unsigned digits);

struct SolveStats {
  size_t explored = 0;
  size_t accepted = 0;
  size_t rejected = 0;
  unsigned working_digits = 0;
};

struct SolutionSet {
  int dim = 0;
  std::vector<std::vector<Real>> points;  // canonical variable layout
  Real error_bound;                       // per coordinate
  unsigned refinement_digits = 0;
  polysys::Mode mode;
  SolveStats stats;
  bool certified = true;  // false for numerical (multistart) solutions
};

/// Newton iteration on a square system at `wd` working digits. Returns the
/// last step size, or a negative value (leaving x unchanged) when the Jacobian
/// is numerically singular. With `singular_ok`, iteration toward a singular
/// root (linear convergence) stops at the singularity threshold instead and
/// keeps the last iterate.
Real newton_polish(const polysys::PolynomialSystem& sys, std::vector<Real>& x, unsigned wd, int max_iter = 30,
                   bool singular_ok = false);

/// All real solutions of a zero-dimensional lex basis, back-substituted level
/// by level and polished on the original system.
SolutionSet solve_triangular(const groebner::GroebnerBasis& g, const polysys::PolynomialSystem& original,
                             unsigned digits = 20);

}  // namespace mub::realroots
