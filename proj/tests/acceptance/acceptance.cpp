// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when a
// criterion fails that is not in the documented known-failure set.
#include <CLI11.hpp>
#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "mub/analyzer.hpp"
#include "mub/error.hpp"
#include "mub/groebner.hpp"
#include "mub/harness.hpp"
#include "mub/numcheck.hpp"
#include "mub/realroots.hpp"

using namespace mub;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Options {
  long starts = 100000;
  long sweep_starts = 20000;
  bool full_sweep = false;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

std::string census(const analyzer::AnalysisReport& r) {
  return std::to_string(r.N_v) + "/" + std::to_string(r.N_t) + "/" + std::to_string(r.N_p);
}

polysys::PolynomialSystem exact_system(const catalog::HadamardMatrix& h) {
  return polysys::mu_system(h, polysys::Mode::exact());
}

analyzer::AnalysisReport exact_pipeline(const polysys::PolynomialSystem& sys, realroots::SolutionSet* out = nullptr) {
  auto g = groebner::buchberger(sys, groebner::MonomialOrder::mu_default(sys.dim));
  auto sol = realroots::solve_triangular(g, sys, 20);
  if (out) *out = sol;
  return analyzer::analyze(sol);
}

// (1, w^a, w^b, ...)/sqrt d with w = e^{2 pi i / n}
analyzer::MUVector root_vector(const std::vector<int>& k, int n) {
  const unsigned digits = 40;
  PrecisionGuard g(digits);
  const int d = static_cast<int>(k.size()) + 1;
  Real s = 1 / sqrt(Real(d, digits));
  analyzer::MUVector v;
  v.dim = d;
  v.comps.emplace_back(s, Real(0, digits), digits);
  for (int e : k) {
    auto z = ComplexAP::unit_turns(Real(e, digits) / n, digits);
    z *= s;
    v.comps.push_back(z);
  }
  return v;
}

Outcome c1_fourier3() {
  realroots::SolutionSet sol;
  auto rep = exact_pipeline(exact_system(catalog::fourier(3)), &sol);
  auto vs = analyzer::vectors_from_solutions(sol);
  std::vector<analyzer::MUVector> expected;
  for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 1}, {2, 0}, {0, 2}, {2, 2}, {0, 1}, {1, 0}})
    expected.push_back(root_vector({a, b}, 3));
  const bool match = analyzer::match_vectors(vs, expected, 1e-15).bijective();
  const int total_bases = 2 + rep.max_mu_bases;
  return {rep.N_v == 6 && match && rep.N_t == 2 && total_bases == 4,
          "N_v=" + std::to_string(rep.N_v) + ", match at 1e-15: " + (match ? "yes" : "no") + ", bases " +
              std::to_string(rep.N_t) + ", complete set of " + std::to_string(total_bases)};
}

Outcome c2_fourier2() {
  realroots::SolutionSet sol;
  auto rep = exact_pipeline(exact_system(catalog::fourier(2)), &sol);
  auto vs = analyzer::vectors_from_solutions(sol);
  const bool match = analyzer::match_vectors(vs, {root_vector({1}, 4), root_vector({3}, 4)}, 1e-15).bijective();
  const int total = 2 + rep.max_mu_bases;
  return {rep.N_v == 2 && match && rep.N_t == 1 && total == 3,
          "N_v=" + std::to_string(rep.N_v) + " (1,+-i)/sqrt2: " + (match ? "yes" : "no") + ", " + std::to_string(total) +
              " MU bases"};
}

// [DERIVED] F5: 20 vectors forming 4 bases, mutually unbiased (numcheck and
// an independent Python oracle agree).
Outcome c3_fourier5(const Options& opt) {
  auto h = catalog::fourier(5);
  auto sys = polysys::mu_system(h, polysys::Mode::approx(5));
  auto g = groebner::buchberger(sys, groebner::MonomialOrder::mu_default(5));
  auto sol = realroots::solve_triangular(g, sys, 20);
  auto rep = analyzer::analyze(sol);

  numcheck::SearchConfig cfg;
  cfg.starts = std::min(opt.starts, 20000L);
  auto oracle_sys = polysys::mu_system(h, polysys::Mode::approx(40));
  auto num = numcheck::multistart_solve(oracle_sys, cfg, Exec::Parallel);
  auto cc = numcheck::crosscheck(sol, num, 1e-3);
  const int total = 2 + rep.max_mu_bases;
  return {rep.N_v == 20 && rep.N_t == 4 && total == 6 && cc.bijective(),
          "approx(5) pipeline " + census(rep) + ", " + std::to_string(total) + " MU bases; numcheck oracle " +
              std::to_string(num.points.size()) + " points, bijective within 1e-3: " + (cc.bijective() ? "yes" : "no") +
              " (max distance " + fmt(cc.max_distance) + ")"};
}

struct F6Basis {
  polysys::PolynomialSystem sys;
  groebner::GroebnerBasis g;
};

F6Basis& f6_basis() {
  static F6Basis b = [] {
    F6Basis out;
    out.sys = polysys::simplify_fourier6(exact_system(catalog::fourier(6)));
    groebner::Options o;
    o.budget = groebner::Budget::from_env();
    out.g = groebner::buchberger(out.sys, groebner::MonomialOrder::mu_default(6), o);
    return out;
  }();
  return b;
}

Outcome c4_f6_elimination() {
  auto& b = f6_basis();
  const int y5 = b.sys.nvars() - 1;
  const auto& f = b.g.polys.front();
  for (const auto& t : f.terms())
    for (int v = 0; v < b.sys.nvars(); ++v)
      if (v != y5 && t.mono[v] != 0) return {false, "first basis element is not univariate in y5"};
  auto u = realroots::univariate(f, y5);
  auto roots = realroots::real_roots(u, 20);
  std::vector<double> expected = {0, 1, -1, 0.5, -0.5, std::sqrt(3.0) / 2, -std::sqrt(3.0) / 2,
                                  (1 + std::sqrt(3.0)) / 2, -(1 + std::sqrt(3.0)) / 2, (1 - std::sqrt(3.0)) / 2,
                                  -(1 - std::sqrt(3.0)) / 2, 0.988940, -0.988940, 0.622915, -0.622915};
  int matched = 0;
  for (double e : expected)
    for (const auto& r : roots)
      if (std::abs(r.convert_to<double>() - e) < 1e-6) {
        ++matched;
        break;
      }
  const int deg = realroots::degree(u);
  return {deg == 25 && roots.size() == 15 && matched == 15,
          "degree " + std::to_string(deg) + ", " + std::to_string(roots.size()) + " real roots, " +
              std::to_string(matched) + "/15 match the reference root set at 1e-6; basis in " + fmt(b.g.stats.seconds) +
              " s, peak RSS " + std::to_string(b.g.stats.peak_rss_bytes >> 20) + " MB"};
}

struct Fallback {
  realroots::SolutionSet sol;
  analyzer::AnalysisReport rep;
  double max_residual = 0;
};

// Exact coefficients when they lie in Q(sqrt 3), 40 digits otherwise.
Fallback numcheck_census(const catalog::HadamardMatrix& h, long starts) {
  polysys::PolynomialSystem sys;
  try {
    sys = exact_system(h);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotRepresentable) throw;
    sys = polysys::mu_system(h, polysys::Mode::approx(40));
  }
  numcheck::SearchConfig cfg;
  cfg.starts = starts;
  Fallback f;
  f.sol = numcheck::multistart_solve(sys, cfg, Exec::Parallel);
  for (const auto& p : f.sol.points)
    f.max_residual = std::max(f.max_residual, polysys::evaluate_residual(sys, p).convert_to<double>());
  f.rep = analyzer::analyze(f.sol, Exec::Parallel);
  return f;
}

Outcome c5_f6_census(const Options& opt) {
  auto& b = f6_basis();
  auto sol = realroots::solve_triangular(b.g, b.sys, 20);
  auto exact = analyzer::analyze(sol);
  const bool exact_ok = exact.N_v == 48 && exact.N_t == 16 && exact.N_p == 144 && !exact.four_bases_found;

  auto fb = numcheck_census(catalog::fourier(6), opt.starts);
  const bool fb_ok = fb.rep.N_v == 48 && fb.max_residual < 1e-12 && fb.rep.N_t == 16 && fb.rep.N_p == 144 &&
                     !fb.rep.four_bases_found && fb.rep.margins.tau >= 1e-8;
  return {exact_ok && fb_ok, "exact " + census(exact) + (exact.four_bases_found ? " four bases" : " no four bases") +
                                 "; numcheck fallback " + census(fb.rep) + ", max residual " + fmt(fb.max_residual) +
                                 ", tau " + fmt(fb.rep.margins.tau)};
}

Outcome c6_d0_census(const Options& opt) {
  auto fb = numcheck_census(catalog::build(catalog::Family::Dita, {0.0}), opt.starts);
  std::vector<double> phases = {std::atan(2.0), -std::atan(2.0)};
  for (int k = -11; k <= 12; ++k) phases.push_back(k * std::numbers::pi / 12);
  // diagnostic only: the set closed under quarter turns of alpha
  auto closed = phases;
  for (int k = 1; k < 4; ++k)
    for (double a : {std::atan(2.0), -std::atan(2.0)}) closed.push_back(a + k * std::numbers::pi / 2);
  auto outside = [](const std::vector<double>& set, double arg) {
    double best = 10;
    for (double p : set) best = std::min(best, std::abs(std::remainder(arg - p, 2 * std::numbers::pi)));
    return best > 1e-8;
  };
  int off = 0, off_closed = 0;
  for (const auto& v : analyzer::vectors_from_solutions(fb.sol)) {
    for (const auto& z : v.comps) {
      const double arg = std::arg(z.to_complex());
      off += outside(phases, arg);
      off_closed += outside(closed, arg);
    }
  }
  return {fb.rep.N_v == 120 && fb.rep.N_t == 10 && fb.rep.N_p == 0 && off == 0 && fb.max_residual < 1e-12,
          "numcheck fallback " + census(fb.rep) + ", max residual " + fmt(fb.max_residual) + "; components outside phi_D: " +
              std::to_string(off) + " of " + std::to_string(6 * fb.rep.N_v) + " (outside phi_D with alpha + k pi/2: " +
              std::to_string(off_closed) + "); exact grevlex basis exceeded its time budget"};
}

Outcome c7_circulant_spectral(const Options& opt) {
  auto c = numcheck_census(catalog::build(catalog::Family::Circulant, std::initializer_list<double>{}), opt.starts);
  auto s = numcheck_census(catalog::build(catalog::Family::Spectral, std::initializer_list<double>{}), opt.starts);
  const bool c_ok = c.rep.N_v == 38 && c.rep.N_t == 0 && c.rep.N_p == 0;
  const bool s_ok = s.rep.N_v == 90 && s.rep.N_t == 0 && s.rep.N_p == 1115;
  return {c_ok && s_ok, "C " + census(c.rep) + " (expected 38/0/0), S " + census(s.rep) + " (expected 90/0/1115)"};
}

// Dense-grid Newton oracle in double, independent of the Groebner route.
std::vector<std::vector<double>> grid_newton(const std::vector<MultiPoly>& f, double box, int per_axis) {
  const int n = f.front().nvars();
  std::vector<std::vector<MultiPoly>> jac(f.size());
  for (size_t i = 0; i < f.size(); ++i)
    for (int j = 0; j < n; ++j) jac[i].push_back(f[i].derivative(j));
  std::vector<std::vector<double>> found;
  long total = 1;
  for (int i = 0; i < n; ++i) total *= per_axis;
  for (long idx = 0; idx < total; ++idx) {
    std::vector<double> x(n);
    long r = idx;
    for (int i = 0; i < n; ++i) {
      x[i] = -box + 2 * box * (r % per_axis + 0.37) / per_axis;
      r /= per_axis;
    }
    bool ok = false;
    for (int it = 0; it < 60; ++it) {
      Eigen::VectorXd fx(n);
      Eigen::MatrixXd J(n, n);
      for (int i = 0; i < n; ++i) {
        fx[i] = f[i].evaluate(x);
        for (int j = 0; j < n; ++j) J(i, j) = jac[i][j].evaluate(x);
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
      if (!lu.isInvertible()) break;
      Eigen::VectorXd dx = lu.solve(fx);
      for (int i = 0; i < n; ++i) x[i] -= dx[i];
      if (dx.norm() < 1e-14 * (1 + Eigen::Map<Eigen::VectorXd>(x.data(), n).norm())) {
        ok = true;
        break;
      }
      if (!std::isfinite(dx.norm()) || Eigen::Map<Eigen::VectorXd>(x.data(), n).norm() > 1e6) break;
    }
    if (!ok) continue;
    bool dup = false;
    for (const auto& p : found) {
      double dist = 0;
      for (int i = 0; i < n; ++i) dist = std::max(dist, std::abs(p[i] - x[i]));
      dup |= dist < 1e-6;
    }
    if (!dup) found.push_back(x);
  }
  return found;
}

Outcome c8_groebner_properties() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> coef(-3, 3);
  int systems = 0, skipped = 0, criterion_ok = 0, oracle_ok = 0, oracle_points = 0;
  while (systems < 50) {
    const int nvars = systems % 2 ? 4 : 2;
    std::vector<MultiPoly> polys;
    for (int k = 0; k < nvars; ++k) {
      std::vector<Term> t;
      t.push_back({Monomial(), QSqrt3(coef(rng))});
      for (int i = 0; i < nvars; ++i) {
        t.push_back({Monomial::var(i), QSqrt3(coef(rng))});
        for (int j = i; j < nvars; ++j) t.push_back({Monomial::var(i) * Monomial::var(j), QSqrt3(coef(rng))});
      }
      polys.emplace_back(nvars, std::move(t));
    }
    polysys::PolynomialSystem sys;
    sys.dim = nvars / 2 + 1;
    sys.polys = polys;
    groebner::GroebnerBasis g;
    try {
      g = groebner::buchberger(sys, groebner::MonomialOrder::mu_default(sys.dim));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotZeroDimensional) throw;
    }
    if (g.polys.empty() || !groebner::is_zero_dimensional(g) || g.polys.front().degree() == 0) {
      ++skipped;
      continue;
    }
    ++systems;
    criterion_ok += groebner::satisfies_buchberger_criterion(g);
    std::vector<std::vector<double>> pts;
    try {
      for (const auto& p : realroots::solve_triangular(g, sys, 20).points) {
        std::vector<double> d;
        for (const auto& v : p) d.push_back(v.convert_to<double>());
        pts.push_back(d);
      }
    } catch (const Error&) {
      continue;
    }
    const double box = 2.5;
    auto oracle = grid_newton(polys, box + 0.5, nvars == 2 ? 40 : 10);
    oracle_points += static_cast<int>(oracle.size());
    auto near = [](const std::vector<double>& a, const std::vector<double>& b) {
      double dist = 0;
      for (size_t i = 0; i < a.size(); ++i) dist = std::max(dist, std::abs(a[i] - b[i]));
      return dist < 1e-8;
    };
    bool ok = true;
    for (const auto& o : oracle)
      ok &= std::any_of(pts.begin(), pts.end(), [&](const auto& p) { return near(o, p); });
    for (const auto& p : pts) {
      if (std::any_of(p.begin(), p.end(), [&](double v) { return std::abs(v) > box; })) continue;
      ok &= std::any_of(oracle.begin(), oracle.end(), [&](const auto& o) { return near(o, p); });
    }
    oracle_ok += ok;
  }
  return {criterion_ok == 50 && oracle_ok == 50,
          "50 systems (" + std::to_string(skipped) + " positive-dimensional or inconsistent draws skipped): criterion " +
              std::to_string(criterion_ok) + "/50, grid-Newton oracle agreement " + std::to_string(oracle_ok) +
              "/50 over " + std::to_string(oracle_points) + " oracle roots"};
}

Outcome c9_sturm() {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> num(-60, 60), den(1, 12), kind(0, 2), nonsq(2, 30);
  const Real tol = make_real(std::string("1e-20"), 60);
  int count_ok = 0, refine_ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    realroots::UniPoly p = {QSqrt3(1)};
    std::vector<Real> expected;
    std::set<mpq_class> rat;
    std::set<int> irr;
    for (int f = 0; f < 1 + trial % 6; ++f) {
      realroots::UniPoly factor;
      switch (kind(rng)) {
        case 0: {
          mpq_class r(num(rng), den(rng));
          r.canonicalize();
          factor = {QSqrt3(-r), QSqrt3(1)};
          rat.insert(r);
          break;
        }
        case 1: {
          int q = nonsq(rng);
          if (int s = static_cast<int>(std::lround(std::sqrt(q))); s * s == q) ++q;
          factor = {QSqrt3(-q), QSqrt3(0), QSqrt3(1)};
          irr.insert(q);
          break;
        }
        default: factor = {QSqrt3(nonsq(rng)), QSqrt3(0), QSqrt3(1)};
      }
      realroots::UniPoly prod(p.size() + factor.size() - 1);
      for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = 0; j < factor.size(); ++j) prod[i + j] += p[i] * factor[j];
      p = prod;
    }
    {
      PrecisionGuard g(60);
      for (const auto& r : rat) expected.push_back(make_real(r, 60));
      for (int q : irr) {
        expected.push_back(sqrt(Real(q, 60)));
        expected.push_back(-sqrt(Real(q, 60)));
      }
    }
    std::sort(expected.begin(), expected.end());
    auto ivs = realroots::sturm_isolate(p);
    if (ivs.size() != expected.size()) continue;
    ++count_ok;
    bool ok = true;
    for (size_t k = 0; k < ivs.size(); ++k) {
      auto r = realroots::refine(ivs[k], p, 20);
      ok &= abs(r.midpoint(60) - expected[k]) <= tol * max(Real(1), abs(expected[k]));
    }
    refine_ok += ok;
  }
  return {count_ok == 100 && refine_ok == 100, "exact counts " + std::to_string(count_ok) +
                                                   "/100, 20-digit refinement " + std::to_string(refine_ok) + "/100"};
}

Outcome c10_dita_sweep(const Options& opt) {
  harness::GridSpec spec = harness::GridSpec::standard(harness::GridKind::GammaD);
  if (!opt.full_sweep) {
    spec.kind = harness::GridKind::Explicit;
    spec.explicit_points = {{"-3/144"}, {"-1/144"}, {"1/144"}, {"2/144"}, {"7/144"}, {"15/144"}};
  }
  harness::RunConfig cfg;
  cfg.engine = harness::Engine::Numcheck;
  cfg.mode = polysys::Mode::approx(5);
  cfg.starts = opt.sweep_starts;
  auto recs = harness::run_grid(spec, cfg);
  int checked = 0, ok = 0;
  std::string seen;
  for (const auto& r : recs) {
    const double x = std::abs(parse_rational(r.params[0]).get_d());
    int want = 0;
    if (x < 0.017) want = 120;
    else if (x > 0.018 && x < 0.124) want = 72;
    if (!want) continue;
    ++checked;
    ok += r.ok() && r.N_v == want && r.N_t == 4;
    seen += " " + r.params[0] + ":" + std::to_string(r.N_v) + "/" + std::to_string(r.N_t);
  }
  return {checked > 0 && ok == checked, std::to_string(ok) + "/" + std::to_string(checked) +
                                            " points on the plateaus (N_v/N_t):" + seen};
}

Outcome c11_symmetries(const Options& opt) {
  catalog::BuildOptions wide;
  wide.override_region = true;
  numcheck::SearchConfig cfg;
  cfg.starts = opt.sweep_starts;
  int bij = 0;
  std::string seen;
  for (double t : {0.05, 0.1, 0.2}) {
    auto a = catalog::build(catalog::Family::Symmetric, {t}, wide);
    auto b = catalog::build(catalog::Family::Symmetric, {-t}, wide);
    auto perm = catalog::conjugating_permutation(a, b, 1e-10);
    if (!perm) continue;
    auto va = analyzer::vectors_from_solutions(
        numcheck::multistart_solve(polysys::mu_system(a, polysys::Mode::approx(30)), cfg, Exec::Parallel));
    auto vb = analyzer::vectors_from_solutions(
        numcheck::multistart_solve(polysys::mu_system(b, polysys::Mode::approx(30)), cfg, Exec::Parallel));
    std::vector<analyzer::MUVector> mapped;
    for (const auto& v : va) mapped.push_back(analyzer::conjugate_permute(v, *perm));
    const bool m = analyzer::match_vectors(mapped, vb, 1e-10).bijective();
    bij += m;
    seen += " t=" + fmt(t) + ":" + std::to_string(va.size()) + (m ? "<->" : "!=") + std::to_string(vb.size());
  }

  std::mt19937_64 rng(5);
  const double t0 = catalog::hermitean_theta0(20).convert_to<double>();
  std::uniform_real_distribution<double> theta(t0, 0.5);
  int herm = 0;
  for (int k = 0; k < 100; ++k) {
    const double th = theta(rng);
    auto b1 = catalog::build(catalog::Family::Hermitean, {th}, wide);
    auto b2 = catalog::build(catalog::Family::Hermitean, {1 - th}, wide);
    double worst = 0;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) worst = std::max(worst, std::abs(b2(i, j).to_complex() - std::conj(b1(i, j).to_complex())));
    herm += worst < 1e-14;
  }
  return {bij == 3 && herm == 100, "M(t)/M(-t) bijections " + std::to_string(bij) + "/3 (" + seen.substr(1) +
                                       "), B(1-theta) = B*(theta) on " + std::to_string(herm) + "/100"};
}

Outcome c12_scope() {
  const size_t d = harness::grid_points(harness::GridSpec::standard(harness::GridKind::GammaD)).size();
  const size_t f = harness::grid_points(harness::GridSpec::standard(harness::GridKind::GammaF)).size();
  const size_t m = harness::grid_points(harness::GridSpec::standard(harness::GridKind::GammaM)).size();
  const size_t b = harness::grid_points(harness::GridSpec::standard(harness::GridKind::GammaB)).size();
  return {d == 36 && f == 168 && m == 70 && b == 34,
          "full campaign out of scope; grids enumerate " + std::to_string(d) + "/" + std::to_string(f) + "/" +
              std::to_string(m) + "/" + std::to_string(b) + " points, criteria 10 and 11 run subsamples"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  Options opt;
  std::vector<int> only;
  app.add_option("--only", only, "criteria to run (default: all)")->delimiter(',');
  app.add_option("--starts", opt.starts, "numcheck starts for the census fallbacks");
  app.add_option("--sweep-starts", opt.sweep_starts, "numcheck starts per sweep point");
  app.add_flag("--full-sweep", opt.full_sweep, "criterion 10 on all of gamma_D instead of the subsample");
  CLI11_PARSE(app, argc, argv);

  // Expected values that the independent oracles contradict (C and S
  // censuses, D0 phase set); these stay failing.
  const std::set<int> known_failures = {6, 7};

  std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, c1_fourier3},
      {2, c2_fourier2},
      {3, [&] { return c3_fourier5(opt); }},
      {4, c4_f6_elimination},
      {5, [&] { return c5_f6_census(opt); }},
      {6, [&] { return c6_d0_census(opt); }},
      {7, [&] { return c7_circulant_spectral(opt); }},
      {8, c8_groebner_properties},
      {9, c9_sturm},
      {10, [&] { return c10_dita_sweep(opt); }},
      {11, [&] { return c11_symmetries(opt); }},
      {12, c12_scope},
  };

  int unexpected = 0;
  for (auto& [id, run] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool known = known_failures.count(id) > 0;
    std::cout << "criterion " << (id < 10 ? " " : "") << id << ": " << (o.pass ? "PASS" : "FAIL")
              << (!o.pass && known ? " (known)" : "") << "  [" << fmt(secs) << " s] " << o.detail << std::endl;
    if (!o.pass && !known) ++unexpected;
  }
  std::cout << (unexpected ? "unexpected failures: " + std::to_string(unexpected) : "no unexpected failures") << "\n";
  return unexpected ? 1 : 0;
}
