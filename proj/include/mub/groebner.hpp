#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mub/polynomial.hpp"
#include "mub/polysys.hpp"

namespace mub::groebner {

enum class OrderKind { Lex, GrevLex };

/// Monomial order with an explicit variable ranking: `vars[0]` is the largest
/// variable, given as an index into the canonical layout.
struct MonomialOrder {
  OrderKind kind = OrderKind::Lex;
  std::vector<int> vars;

  /// x1 > y1 > x2 > y2 > ... > x_{d-1} > y_{d-1}, eliminating toward y_{d-1}.
  static MonomialOrder mu_default(int dim, OrderKind kind = OrderKind::Lex);
  /// Canonical layout order: variable 0 largest.
  static MonomialOrder canonical(int nvars, OrderKind kind = OrderKind::Lex);
  int nvars() const { return static_cast<int>(vars.size()); }
  /// Index of the smallest variable (canonical layout).
  int last_var() const { return vars.back(); }
  std::string to_string(const std::vector<std::string>& names) const;
};

/// <0, 0, >0 as a is smaller, equal, larger than b.
int compare(const Monomial& a, const Monomial& b, const MonomialOrder& order);
Monomial leading_monomial(const MultiPoly& f, const MonomialOrder& order);
QSqrt3 leading_coeff(const MultiPoly& f, const MonomialOrder& order);
/// f scaled so that its leading coefficient is 1.
MultiPoly monic(const MultiPoly& f, const MonomialOrder& order);

struct BasisStats {
  uint64_t pairs_created = 0;
  uint64_t pairs_reduced = 0;
  uint64_t pruned_coprime = 0;
  uint64_t pruned_chain = 0;
  uint64_t zero_reductions = 0;
  uint64_t max_terms = 0;
  uint64_t peak_rss_bytes = 0;
  double seconds = 0;
};

struct GroebnerBasis {
  std::vector<MultiPoly> polys;  // sorted by increasing leading monomial
  MonomialOrder order;
  bool reduced = false;
  polysys::Mode mode;
  int dim = 0;  // 0 when not built from an MU system
  BasisStats stats;
};

struct Budget {
  uint64_t max_pairs = 10'000'000;
  uint64_t max_terms = 5'000'000;
  uint64_t max_memory_bytes = 8ull << 30;
  double max_seconds = 0;  // 0: unlimited

  /// Default budget with the memory guard taken from MUB_BUDGET_MEM if set.
  static Budget from_env();
};

/// Parses sizes such as "8G", "512M", "1024".
uint64_t parse_bytes(const std::string& s);

struct Options {
  bool use_criteria = true;  // coprime and chain criteria
  Budget budget;
  /// Lex bases of zero-dimensional ideals are obtained from a grevlex basis
  /// by FGLM change of order; positive-dimensional inputs fall back to a
  /// direct lex run.
  bool lex_via_fglm = true;
};

/// Full reduction of f modulo G (field arithmetic).
MultiPoly reduce(const MultiPoly& f, const std::vector<MultiPoly>& g, const MonomialOrder& order);
/// As above, checking that f and the basis share variable space and mode.
MultiPoly reduce(const MultiPoly& f, const polysys::Mode& f_mode, const GroebnerBasis& g);

MultiPoly s_polynomial(const MultiPoly& f, const MultiPoly& g, const MonomialOrder& order);

GroebnerBasis buchberger(const std::vector<MultiPoly>& polys, const MonomialOrder& order, const Options& opts = {});
GroebnerBasis buchberger(const polysys::PolynomialSystem& p, const MonomialOrder& order, const Options& opts = {});

/// Monomials outside the initial ideal, increasing in the basis order.
/// Throws NotZeroDimensional when there are more than `limit`.
std::vector<Monomial> standard_monomials(const GroebnerBasis& g, size_t limit = 200000);

/// Change of order for a zero-dimensional reduced basis.
GroebnerBasis fglm(const GroebnerBasis& g, const MonomialOrder& target);

/// Every S-polynomial of the basis reduces to zero.
bool satisfies_buchberger_criterion(const GroebnerBasis& g);

/// For every variable some leading monomial is a pure power of it.
bool is_zero_dimensional(const GroebnerBasis& g);

/// Resident set size of this process.
uint64_t current_rss_bytes();

}  // namespace mub::groebner
