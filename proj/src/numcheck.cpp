#include "mub/numcheck.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "mub/error.hpp"
#include "mub/rng.hpp"

namespace mub::numcheck {

namespace {

// Polynomial flattened to doubles so that evaluation inside parallel regions
// never touches GMP or MPFR.
struct DensePoly {
  std::vector<double> coef;
  std::vector<std::vector<std::pair<int, int>>> powers;  // (var, exponent)

  explicit DensePoly(const MultiPoly& f) {
    for (const auto& t : f.terms()) {
      coef.push_back(t.coeff.a.get_d() + t.coeff.b.get_d() * std::numbers::sqrt3);
      std::vector<std::pair<int, int>> pw;
      for (int v = 0; v < f.nvars(); ++v)
        if (t.mono[v] > 0) pw.emplace_back(v, t.mono[v]);
      powers.push_back(std::move(pw));
    }
  }

  double operator()(const Eigen::VectorXd& x) const {
    double s = 0;
    for (size_t k = 0; k < coef.size(); ++k) {
      double m = coef[k];
      for (auto [v, e] : powers[k])
        for (int i = 0; i < e; ++i) m *= x[v];
      s += m;
    }
    return s;
  }
};

struct DenseSystem {
  int n = 0;
  std::vector<DensePoly> f;
  std::vector<std::vector<DensePoly>> jac;

  explicit DenseSystem(const polysys::PolynomialSystem& p) : n(p.nvars()) {
    if (static_cast<int>(p.polys.size()) != n)
      throw Error(ErrorKind::DimensionMismatch, "numcheck needs a square system");
    for (const auto& g : p.polys) {
      f.emplace_back(g);
      std::vector<DensePoly> row;
      for (int v = 0; v < n; ++v) row.emplace_back(g.derivative(v));
      jac.push_back(std::move(row));
    }
  }

  Eigen::VectorXd value(const Eigen::VectorXd& x) const {
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) r[i] = f[i](x);
    return r;
  }
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd j(n, n);
    for (int i = 0; i < n; ++i)
      for (int v = 0; v < n; ++v) j(i, v) = jac[i][v](x);
    return j;
  }
};

StartOutcome newton(const DenseSystem& sys, const SearchConfig& cfg, Eigen::VectorXd x) {
  StartOutcome out;
  Eigen::VectorXd fx = sys.value(x);
  double res = fx.lpNorm<Eigen::Infinity>();
  for (int it = 0; it < cfg.max_iterations; ++it) {
    out.iterations = it + 1;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sys.jacobian(x));
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) return out;  // singular: abandon this start
    Eigen::VectorXd dx = lu.solve(-fx);
    double lambda = 1;
    Eigen::VectorXd xn = x + dx, fn = sys.value(xn);
    while (fn.lpNorm<Eigen::Infinity>() > (1 - lambda / 4) * res && lambda > 1.0 / 1024) {
      lambda /= 2;
      xn = x + lambda * dx;
      fn = sys.value(xn);
    }
    const double step = (lambda * dx).lpNorm<Eigen::Infinity>();
    x = xn;
    fx = fn;
    res = fx.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(res) || x.lpNorm<Eigen::Infinity>() > 1e6) return out;
    if (step <= cfg.step_tol * std::max(1.0, x.lpNorm<Eigen::Infinity>()) || (res < 1e-3 * cfg.residual_target && step < 1e-9))
      break;
  }
  out.residual = res;
  out.converged = res < cfg.residual_target;
  out.point.assign(x.data(), x.data() + x.size());
  return out;
}

Eigen::VectorXd seed_point(uint64_t seed, long index, int dim) {
  auto phases = start_phases(seed, index, dim - 1);
  Eigen::VectorXd x(2 * (dim - 1));
  for (int j = 0; j < dim - 1; ++j) {
    x[j] = std::cos(phases[j]);
    x[dim - 1 + j] = std::sin(phases[j]);
  }
  return x;
}

double max_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0;
  for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

std::vector<double> to_doubles(const std::vector<Real>& p) {
  std::vector<double> out;
  for (const auto& v : p) out.push_back(v.convert_to<double>());
  return out;
}

}  // namespace

void SearchConfig::validate() const {
  if (starts < 1) throw Error(ErrorKind::InvalidArgument, "starts must be positive");
  if (residual_target < 1e-14) throw Error(ErrorKind::InvalidArgument, "residual target below 1e-14");
  if (!(dedupe_radius > 10 * residual_target))
    throw Error(ErrorKind::InvalidArgument, "dedupe radius must exceed 10x the residual target");
  if (max_iterations < 1) throw Error(ErrorKind::InvalidArgument, "max_iterations must be positive");
}

std::vector<double> start_phases(uint64_t seed, long index, int count) {
  uint64_t state = stream_state(seed, 0, static_cast<uint64_t>(index));
  std::vector<double> out(count);
  for (auto& ph : out) ph = 2 * std::numbers::pi * uniform01(state);
  return out;
}

StartOutcome run_start(const polysys::PolynomialSystem& p, const SearchConfig& cfg, long index) {
  DenseSystem sys(p);
  return newton(sys, cfg, seed_point(cfg.seed, index, p.dim));
}

realroots::SolutionSet multistart_solve(const polysys::PolynomialSystem& p, const SearchConfig& cfg, Exec exec) {
  cfg.validate();
  const DenseSystem sys(p);
  std::vector<StartOutcome> runs(cfg.starts);
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (long i = 0; i < cfg.starts; ++i) runs[i] = newton(sys, cfg, seed_point(cfg.seed, i, p.dim));
  } else {
    for (long i = 0; i < cfg.starts; ++i) runs[i] = newton(sys, cfg, seed_point(cfg.seed, i, p.dim));
  }

  realroots::SolutionSet out;
  out.dim = p.dim;
  out.mode = p.mode;
  out.certified = false;
  out.stats.explored = cfg.starts;
  std::vector<std::vector<double>> reps;
  double worst = 0;
  for (const auto& r : runs) {
    if (!r.converged) continue;
    ++out.stats.accepted;
    worst = std::max(worst, r.residual);
    bool seen = false;
    for (const auto& q : reps) seen = seen || max_distance(q, r.point) < cfg.dedupe_radius;
    if (!seen) reps.push_back(r.point);
  }
  out.stats.rejected = out.stats.explored - out.stats.accepted;
  if (reps.empty())
    throw Error(ErrorKind::NoConvergence, "none of " + std::to_string(cfg.starts) + " starts converged");
  std::sort(reps.begin(), reps.end());

  const unsigned wd = std::max(cfg.polish_digits, 17u);
  out.stats.working_digits = wd;
  PrecisionGuard guard(wd);
  Real bound(0, wd);
  std::vector<std::vector<Real>> polished_points;
  for (const auto& r : reps) {
    std::vector<Real> x;
    for (double v : r) x.emplace_back(v, wd);
    // uncertified estimate; near a singular root the distance scales like sqrt(residual)
    Real err(10 * std::sqrt(std::max(worst, 1e-32)), wd);
    if (cfg.polish_digits > 0) {
      std::vector<Real> y = x;
      Real step = realroots::newton_polish(p, y, wd);
      if (step >= 0 && max_distance(to_doubles(y), r) < cfg.dedupe_radius / 2) {
        x = std::move(y);
        err = max(Real(10 * step), pow(Real(10, wd), 5 - static_cast<int>(cfg.polish_digits)));
      } else {
        // singular root: Newton converges linearly, so run longer at higher precision
        const unsigned swd = 4 * wd;
        PrecisionGuard sguard(swd);
        std::vector<Real> z;
        for (double v : r) z.emplace_back(v, swd);
        Real sstep = realroots::newton_polish(p, z, swd, 400, true);
        if (sstep >= 0 && max_distance(to_doubles(z), r) < 1e-3 &&
            polysys::evaluate_residual(p, z, swd) < cfg.residual_target) {
          for (int i = 0; i < static_cast<int>(z.size()); ++i) x[i] = Real(z[i], wd);
          err = Real(10 * sstep, wd);
        }
      }
    }
    bound = max(bound, err);
    polished_points.push_back(std::move(x));
  }
  // clusters around singular roots collapse after polishing
  std::vector<std::vector<double>> seen;
  std::vector<std::pair<std::vector<double>, size_t>> order;
  for (size_t i = 0; i < polished_points.size(); ++i) {
    auto key = to_doubles(polished_points[i]);
    bool dup = false;
    for (const auto& q : seen) dup = dup || max_distance(q, key) < cfg.dedupe_radius;
    if (dup) continue;
    seen.push_back(key);
    order.emplace_back(std::move(key), i);
  }
  std::sort(order.begin(), order.end());
  for (const auto& [key, i] : order) out.points.push_back(std::move(polished_points[i]));
  out.error_bound = bound;
  out.refinement_digits = static_cast<unsigned>(std::max(0.0, std::floor(-log10(bound).convert_to<double>())));
  return out;
}

CrossCheck crosscheck(const realroots::SolutionSet& exact, const realroots::SolutionSet& approx, double radius) {
  if (exact.dim != approx.dim && !exact.points.empty() && !approx.points.empty())
    throw Error(ErrorKind::DimensionMismatch, "solution sets of different dimension");
  std::vector<std::vector<double>> a, b;
  for (const auto& p : exact.points) a.push_back(to_doubles(p));
  for (const auto& p : approx.points) b.push_back(to_doubles(p));
  CrossCheck out;
  std::vector<char> used(b.size(), 0);
  for (size_t i = 0; i < a.size(); ++i) {
    int best = -1;
    double best_d = radius;
    for (size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      double d = max_distance(a[i], b[j]);
      if (d <= best_d) best_d = d, best = static_cast<int>(j);
    }
    if (best < 0) {
      out.unmatched_exact.push_back(static_cast<int>(i));
    } else {
      used[best] = 1;
      out.matched.emplace_back(static_cast<int>(i), best);
      out.max_distance = std::max(out.max_distance, best_d);
    }
  }
  for (size_t j = 0; j < b.size(); ++j)
    if (!used[j]) out.unmatched_approx.push_back(static_cast<int>(j));
  return out;
}

}  // namespace mub::numcheck
