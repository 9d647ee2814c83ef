#pragma once

#include <cstdint>
#include <vector>

#include "mub/exec.hpp"
#include "mub/polysys.hpp"
#include "mub/realroots.hpp"

namespace mub::numcheck {

struct SearchConfig {
  long starts = 1000;
  uint64_t seed = 42;
  double step_tol = 1e-14;
  double residual_target = 1e-12;  // >= 1e-14
  double dedupe_radius = 1e-8;     // > 10 * residual_target
  int max_iterations = 80;
  unsigned polish_digits = 40;  // 0 skips the high-precision polish

  /// Throws InvalidArgument when the invariants above do not hold.
  void validate() const;
};

struct StartOutcome {
  bool converged = false;
  int iterations = 0;
  double residual = 0;
  std::vector<double> point;
};

/// One damped Newton run from the phase seed of start `index`.
StartOutcome run_start(const polysys::PolynomialSystem& p, const SearchConfig& cfg, long index);

/// Uniform phases phi_j for start `index`, from a counter-based generator.
std::vector<double> start_phases(uint64_t seed, long index, int count);

/// Distinct approximate solutions, sorted lexicographically; throws
/// NoConvergence if no start converged. `stats.explored` counts starts and
/// `stats.accepted` converged ones.
realroots::SolutionSet multistart_solve(const polysys::PolynomialSystem& p, const SearchConfig& cfg,
                                        Exec exec = Exec::Parallel);

struct CrossCheck {
  std::vector<std::pair<int, int>> matched;  // (exact index, approx index)
  std::vector<int> unmatched_exact;
  std::vector<int> unmatched_approx;
  double max_distance = 0;
  bool bijective() const { return unmatched_exact.empty() && unmatched_approx.empty(); }
};

CrossCheck crosscheck(const realroots::SolutionSet& exact, const realroots::SolutionSet& approx, double radius);

}  // namespace mub::numcheck
