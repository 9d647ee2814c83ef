#include "mub/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>

#include "mub/error.hpp"

namespace mub::analyzer {

namespace {

using cd = std::complex<double>;

struct DenseVec {
  std::vector<cd> c;
  double err = 0;
};

std::vector<DenseVec> to_dense(const std::vector<MUVector>& vs) {
  std::vector<DenseVec> out;
  out.reserve(vs.size());
  for (const auto& v : vs) {
    DenseVec dv;
    for (const auto& z : v.comps) dv.c.push_back(z.to_complex());
    dv.err = v.error + 1e-16;
    out.push_back(std::move(dv));
  }
  return out;
}

struct Classified {
  PairClass cls;
  bool decided = true;
};

Classified classify(const DenseVec& v, const DenseVec& w, int d, const Margins& m) {
  cd ip = 0;
  for (int j = 0; j < d; ++j) ip += std::conj(v.c[j]) * w.c[j];
  const double value = std::abs(ip);
  const double eps = 2.0 * d * (v.err + w.err + 1e-16);
  const double to_orth = value + eps;                            // certified upper bound on |<v|w>|
  const double to_unb = std::abs(value * value - 1.0 / d) + 2 * eps;  // on ||<v|w>|^2 - 1/d|
  Classified r;
  r.cls.value = value;
  if (to_orth <= m.tau - m.gap) {
    r.cls = {PairKind::Orthogonal, value, m.tau - to_orth};
  } else if (to_unb <= m.tau - m.gap) {
    r.cls = {PairKind::Unbiased, value, m.tau - to_unb};
  } else {
    const double sep = std::min(value - eps, std::abs(value * value - 1.0 / d) - 2 * eps);
    if (sep >= m.tau + m.gap) r.cls = {PairKind::Neither, value, sep - m.tau};
    else r.decided = false;
  }
  return r;
}

char kind_char(PairKind k) {
  switch (k) {
    case PairKind::Orthogonal: return 'O';
    case PairKind::Unbiased: return 'U';
    default: return 'N';
  }
}

// Bitset adjacency for clique enumeration.
class Graph {
 public:
  explicit Graph(int n) : n_(n), words_((n + 63) / 64), adj_(static_cast<size_t>(n) * words_, 0) {}
  void add_edge(int a, int b) {
    adj_[a * words_ + b / 64] |= 1ull << (b % 64);
    adj_[b * words_ + a / 64] |= 1ull << (a % 64);
  }
  int size() const { return n_; }
  int words() const { return words_; }
  const uint64_t* row(int v) const { return &adj_[static_cast<size_t>(v) * words_]; }

 private:
  int n_;
  int words_;
  std::vector<uint64_t> adj_;
};

using Bits = std::vector<uint64_t>;

int popcount(const Bits& b) {
  int c = 0;
  for (auto w : b) c += __builtin_popcountll(w);
  return c;
}

// Pivoting Bron-Kerbosch over maximal cliques; branches that cannot reach
// `min_size` are pruned.
void bron_kerbosch(const Graph& g, std::vector<int>& r, Bits p, Bits x, size_t min_size,
                   std::vector<std::vector<int>>& out) {
  const int pc = popcount(p);
  if (pc == 0) {
    if (popcount(x) == 0 && r.size() >= min_size) out.push_back(r);
    return;
  }
  if (r.size() + pc < min_size) return;
  const int W = g.words();
  int pivot = -1, best = -1;
  for (int w = 0; w < W; ++w) {
    uint64_t cand = p[w] | x[w];
    while (cand) {
      int u = w * 64 + __builtin_ctzll(cand);
      cand &= cand - 1;
      int cnt = 0;
      for (int k = 0; k < W; ++k) cnt += __builtin_popcountll(p[k] & g.row(u)[k]);
      if (cnt > best) best = cnt, pivot = u;
    }
  }
  Bits todo(W);
  for (int w = 0; w < W; ++w) todo[w] = p[w] & ~g.row(pivot)[w];
  for (int w = 0; w < W; ++w) {
    while (todo[w]) {
      int v = w * 64 + __builtin_ctzll(todo[w]);
      todo[w] &= todo[w] - 1;
      Bits np(W), nx(W);
      for (int k = 0; k < W; ++k) np[k] = p[k] & g.row(v)[k], nx[k] = x[k] & g.row(v)[k];
      r.push_back(v);
      bron_kerbosch(g, r, std::move(np), std::move(nx), min_size, out);
      r.pop_back();
      p[v / 64] &= ~(1ull << (v % 64));
      x[v / 64] |= 1ull << (v % 64);
    }
  }
}

std::vector<std::vector<int>> maximal_cliques(const Graph& g, size_t min_size) {
  const int W = g.words();
  Bits p(W, 0), x(W, 0);
  for (int v = 0; v < g.size(); ++v) p[v / 64] |= 1ull << (v % 64);
  std::vector<int> r;
  std::vector<std::vector<int>> out;
  bron_kerbosch(g, r, std::move(p), std::move(x), min_size, out);
  for (auto& c : out) std::sort(c.begin(), c.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string to_string(PairKind k) {
  switch (k) {
    case PairKind::Orthogonal: return "orthogonal";
    case PairKind::Unbiased: return "unbiased";
    default: return "neither";
  }
}

Margins Margins::for_mode(const polysys::Mode& mode) {
  if (mode.is_exact()) return {};
  return {std::pow(10.0, 2.0 - static_cast<double>(mode.digits)), 1e-15};
}

MUVector vector_from_point(const std::vector<Real>& point, int dim, double coord_error, int source) {
  const int n = dim - 1;
  if (static_cast<int>(point.size()) != 2 * n)
    throw Error(ErrorKind::DimensionMismatch, "point of length " + std::to_string(point.size()) +
                                                  " for dimension " + std::to_string(dim));
  unsigned digits = 30;
  for (const auto& c : point) digits = std::max(digits, static_cast<unsigned>(c.precision()));
  PrecisionGuard guard(digits);
  const Real scale = 1 / sqrt(Real(dim, digits));
  MUVector v;
  v.dim = dim;
  v.source = source;
  v.error = std::sqrt(2.0) * coord_error / std::sqrt(static_cast<double>(dim));
  v.comps.emplace_back(scale, Real(0, digits), digits);
  for (int j = 0; j < n; ++j) v.comps.emplace_back(Real(point[j] * scale), Real(point[n + j] * scale), digits);
  return v;
}

std::vector<MUVector> vectors_from_solutions(const realroots::SolutionSet& s) {
  const double err = s.error_bound.convert_to<double>();
  std::vector<MUVector> out;
  out.reserve(s.points.size());
  for (size_t i = 0; i < s.points.size(); ++i)
    out.push_back(vector_from_point(s.points[i], s.dim, err, static_cast<int>(i)));
  return out;
}

PairClass pair_type(const MUVector& v, const MUVector& w, const Margins& m) {
  if (v.dim != w.dim) throw Error(ErrorKind::DimensionMismatch, "vectors of different dimension");
  auto dv = to_dense({v, w});
  auto r = classify(dv[0], dv[1], v.dim, m);
  if (!r.decided)
    throw Error(ErrorKind::UndecidablePair, "|<v|w>| = " + std::to_string(r.cls.value) + " within margin of a threshold");
  return r.cls;
}

AnalysisReport analyze(const std::vector<MUVector>& vectors, int dim, const Margins& m, Exec exec) {
  const int n = static_cast<int>(vectors.size());
  for (const auto& v : vectors)
    if (v.dim != dim || static_cast<int>(v.comps.size()) != dim)
      throw Error(ErrorKind::DimensionMismatch, "vector does not have dimension " + std::to_string(dim));
  const auto dense = to_dense(vectors);

  std::vector<Classified> cls(static_cast<size_t>(n) * n);
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) cls[static_cast<size_t>(i) * n + j] = classify(dense[i], dense[j], dim, m);
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) cls[static_cast<size_t>(i) * n + j] = classify(dense[i], dense[j], dim, m);
  }

  AnalysisReport rep;
  rep.dim = dim;
  rep.N_v = n;
  rep.margins.tau = m.tau;
  rep.margins.gap = m.gap;
  for (const auto& v : dense) rep.margins.max_vector_error = std::max(rep.margins.max_vector_error, v.err);
  rep.classification.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  Graph orth(n);
  std::vector<char> unbiased(static_cast<size_t>(n) * n, 0);
  auto track = [](double& slot, double margin) { slot = slot == 0 ? margin : std::min(slot, margin); };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const auto& c = cls[static_cast<size_t>(i) * n + j];
      if (!c.decided)
        throw Error(ErrorKind::UndecidablePair, "pair (" + std::to_string(i) + ", " + std::to_string(j) +
                                                    ") with |<v|w>| = " + std::to_string(c.cls.value));
      rep.classification.push_back(kind_char(c.cls.kind));
      switch (c.cls.kind) {
        case PairKind::Orthogonal:
          orth.add_edge(i, j);
          track(rep.margins.min_orthogonal, c.cls.margin);
          break;
        case PairKind::Unbiased:
          ++rep.N_p;
          unbiased[static_cast<size_t>(i) * n + j] = unbiased[static_cast<size_t>(j) * n + i] = 1;
          track(rep.margins.min_unbiased, c.cls.margin);
          break;
        case PairKind::Neither: track(rep.margins.min_neither, c.cls.margin); break;
      }
    }
  }

  for (auto& c : maximal_cliques(orth, dim)) {
    if (static_cast<int>(c.size()) > dim)
      throw Error(ErrorKind::UndecidablePair, "more than d mutually orthogonal vectors; margins are inconsistent");
    rep.bases.push_back(std::move(c));
  }
  rep.N_t = static_cast<int>(rep.bases.size());

  Graph compat(rep.N_t);
  for (int a = 0; a < rep.N_t; ++a)
    for (int b = a + 1; b < rep.N_t; ++b) {
      bool all = true;
      for (int u : rep.bases[a])
        for (int v : rep.bases[b]) all = all && unbiased[static_cast<size_t>(u) * n + v];
      if (all) compat.add_edge(a, b);
    }
  if (rep.N_t > 0) {
    for (auto& c : maximal_cliques(compat, 1))
      if (static_cast<int>(c.size()) > rep.max_mu_bases) {
        rep.max_mu_bases = static_cast<int>(c.size());
        rep.best_constellation = c;
      }
  }
  rep.four_bases_found = rep.max_mu_bases >= 2;
  return rep;
}

AnalysisReport analyze(const realroots::SolutionSet& s, Exec exec) {
  Margins m = Margins::for_mode(s.mode);
  if (!s.certified) m.tau = std::max(m.tau, 1e-8);
  auto rep = analyze(vectors_from_solutions(s), s.dim, m, exec);
  rep.mode = s.mode;
  rep.counts_are_bounds = !s.mode.is_exact() || !s.certified;
  return rep;
}

catalog::HadamardMatrix base_matrix(const std::vector<MUVector>& vectors, const std::vector<int>& base) {
  const int d = static_cast<int>(base.size());
  std::vector<ComplexAP> entries(static_cast<size_t>(d) * d);
  unsigned digits = std::numeric_limits<unsigned>::max();
  for (int c = 0; c < d; ++c) {
    const auto& v = vectors.at(base[c]);
    if (v.dim != d) throw Error(ErrorKind::DimensionMismatch, "base size differs from vector dimension");
    for (int r = 0; r < d; ++r) {
      entries[r * d + c] = v.comps[r];
      digits = std::min(digits, v.comps[r].digits);
    }
  }
  return catalog::HadamardMatrix(d, std::move(entries), catalog::Family::Custom, {}, std::nullopt, digits);
}

MUVector conjugate_permute(const MUVector& v, const std::vector<int>& perm) {
  const int d = v.dim;
  std::vector<int> check = perm;
  std::sort(check.begin(), check.end());
  for (int i = 0; i < static_cast<int>(check.size()); ++i)
    if (check[i] != i || static_cast<int>(check.size()) != d)
      throw Error(ErrorKind::InvalidArgument, "not a permutation of " + std::to_string(d) + " indices");
  const unsigned digits = v.comps.front().digits;
  PrecisionGuard guard(digits);
  MUVector w = v;
  for (int j = 0; j < d; ++j) w.comps[j] = v.comps[perm[j]].conj();
  // multiply by phase conj(w0)/|w0| so that w0 becomes real positive
  ComplexAP phase = w.comps[0].conj();
  phase *= Real(1 / phase.abs());
  for (auto& z : w.comps) z *= phase;
  w.comps[0].im = Real(0, digits);
  w.error = 2 * v.error;
  return w;
}

SetMatch match_vectors(const std::vector<MUVector>& a, const std::vector<MUVector>& b, double tol) {
  auto da = to_dense(a), db = to_dense(b);
  SetMatch out;
  std::vector<char> used(b.size(), 0);
  for (size_t i = 0; i < a.size(); ++i) {
    int best = -1;
    double best_dist = tol;
    for (size_t j = 0; j < b.size(); ++j) {
      if (used[j] || da[i].c.size() != db[j].c.size()) continue;
      double dist = 0;
      for (size_t k = 0; k < da[i].c.size(); ++k) dist = std::max(dist, std::abs(da[i].c[k] - db[j].c[k]));
      if (dist <= best_dist) best_dist = dist, best = static_cast<int>(j);
    }
    if (best < 0) {
      out.unmatched_a.push_back(static_cast<int>(i));
    } else {
      used[best] = 1;
      out.pairs.emplace_back(static_cast<int>(i), best);
    }
  }
  for (size_t j = 0; j < b.size(); ++j)
    if (!used[j]) out.unmatched_b.push_back(static_cast<int>(j));
  return out;
}

}  // namespace mub::analyzer
