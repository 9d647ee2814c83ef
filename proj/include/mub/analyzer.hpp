#pragma once

#include <string>
#include <vector>

#include "mub/catalog.hpp"
#include "mub/complex_ap.hpp"
#include "mub/exec.hpp"
#include "mub/polysys.hpp"
#include "mub/realroots.hpp"

namespace mub::analyzer {

struct MUVector {
  int dim = 0;
  std::vector<ComplexAP> comps;  // comps[0] == 1/sqrt(d)
  double error = 0;              // per component
  int source = -1;               // index of the originating solution point
};

/// Vector (1, x1 + i y1, ..., xn + i yn) / sqrt(d) from a canonical-layout point.
MUVector vector_from_point(const std::vector<Real>& point, int dim, double coord_error, int source = -1);
std::vector<MUVector> vectors_from_solutions(const realroots::SolutionSet& s);

enum class PairKind { Orthogonal, Unbiased, Neither };
std::string to_string(PairKind k);

/// Classification thresholds: a pair is Orthogonal when |<v|w>| is certified
/// below `tau`, Unbiased when ||<v|w>|^2 - 1/d| is, and Neither when both are
/// certified above `tau`; in each case with at least `gap` to spare.
struct Margins {
  double tau = 1e-10;
  double gap = 1e-15;

  /// Exact-mode defaults, or thresholds loose enough to absorb the coefficient
  /// rounding of an approx(k) system.
  static Margins for_mode(const polysys::Mode& mode);
};

struct PairClass {
  PairKind kind = PairKind::Neither;
  double value = 0;   // |<v|w>|
  double margin = 0;  // certified distance from the decision threshold
};

/// Throws UndecidablePair if no class is certified.
PairClass pair_type(const MUVector& v, const MUVector& w, const Margins& m = {});

struct MarginSummary {
  double tau = 0;
  double gap = 0;
  double min_orthogonal = 0;  // smallest certified margin per class (0 if none)
  double min_unbiased = 0;
  double min_neither = 0;
  double max_vector_error = 0;
};

struct AnalysisReport {
  int dim = 0;
  int N_v = 0;
  int N_t = 0;
  long N_p = 0;
  std::vector<std::vector<int>> bases;  // sorted index lists, in lexicographic order
  bool four_bases_found = false;
  /// Largest number of pairwise mutually unbiased bases among `bases`; the
  /// constellation {I, H, bases...} then has 2 + max_mu_bases members.
  int max_mu_bases = 0;
  std::vector<int> best_constellation;  // indices into `bases`
  MarginSummary margins;
  polysys::Mode mode;
  bool counts_are_bounds = false;  // approx-mode provenance
  /// Upper triangle of the classification matrix, row by row: 'O', 'U', 'N'.
  std::string classification;
};

AnalysisReport analyze(const std::vector<MUVector>& vectors, int dim, const Margins& m = {},
                       Exec exec = Exec::Parallel);
AnalysisReport analyze(const realroots::SolutionSet& s, Exec exec = Exec::Parallel);

/// Matrix whose columns are the given vectors.
catalog::HadamardMatrix base_matrix(const std::vector<MUVector>& vectors, const std::vector<int>& base);

/// w_j = conj(v_{perm[j]}), rephased so that w_0 = 1/sqrt(d).
MUVector conjugate_permute(const MUVector& v, const std::vector<int>& perm);

/// Bijection between two vector sets at distance `tol` (max component
/// difference); unmatched indices are reported on both sides.
struct SetMatch {
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> unmatched_a;
  std::vector<int> unmatched_b;
  bool bijective() const { return unmatched_a.empty() && unmatched_b.empty(); }
};
SetMatch match_vectors(const std::vector<MUVector>& a, const std::vector<MUVector>& b, double tol);

}  // namespace mub::analyzer
