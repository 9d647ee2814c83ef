#include "doctest.h"
#include "mub/analyzer.hpp"
#include "mub/error.hpp"
#include "mub/numcheck.hpp"

using namespace mub;
using namespace mub::numcheck;

namespace {

polysys::PolynomialSystem fourier_system(int d) { return polysys::mu_system(catalog::fourier(d), polysys::Mode::exact()); }

}  // namespace

TEST_CASE("config invariants") {
  SearchConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.residual_target = 1e-15;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.dedupe_radius = 5e-12;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.starts = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("phase seeding is counter based") {
  auto a = start_phases(42, 17, 5);
  CHECK(a == start_phases(42, 17, 5));
  CHECK(a != start_phases(42, 18, 5));
  CHECK(a != start_phases(43, 17, 5));
  for (double p : a) {
    CHECK(p >= 0);
    CHECK(p < 2 * M_PI);
  }
}

TEST_CASE("F2 and F3 multistart") {
  SearchConfig cfg;
  cfg.starts = 10;
  auto s2 = multistart_solve(fourier_system(2), cfg);
  REQUIRE(s2.points.size() == 2);
  CHECK(abs(s2.points[0][0]) < 1e-30);
  CHECK(abs(s2.points[0][1] + 1) < 1e-30);
  CHECK(abs(s2.points[1][1] - 1) < 1e-30);
  CHECK_FALSE(s2.certified);

  cfg.starts = 1000;
  auto sys = fourier_system(3);
  auto approx = multistart_solve(sys, cfg);
  REQUIRE(approx.points.size() == 6);
  auto g = groebner::buchberger(sys, groebner::MonomialOrder::mu_default(3));
  auto exact = realroots::solve_triangular(g, sys, 20);
  auto cc = crosscheck(exact, approx, 1e-10);
  CHECK(cc.bijective());
  CHECK(cc.matched.size() == 6);
  CHECK(cc.max_distance < 1e-20);
  for (const auto& p : approx.points) CHECK(polysys::evaluate_residual(sys, p) < 1e-11);

  auto truncated = exact;
  truncated.points.pop_back();
  auto bad = crosscheck(truncated, approx, 1e-10);
  CHECK(bad.unmatched_approx.size() == 1);
  CHECK(bad.unmatched_exact.empty());
  realroots::SolutionSet empty;
  CHECK(crosscheck(empty, empty, 1e-10).bijective());
}

TEST_CASE("serial and parallel agree; more starts never lose points") {
  auto sys = fourier_system(4);
  SearchConfig cfg;
  cfg.starts = 300;
  cfg.polish_digits = 0;
  auto ser = multistart_solve(sys, cfg, Exec::Serial);
  auto par = multistart_solve(sys, cfg, Exec::Parallel);
  REQUIRE(ser.points.size() == par.points.size());
  for (size_t i = 0; i < ser.points.size(); ++i)
    for (size_t k = 0; k < ser.points[i].size(); ++k) CHECK(ser.points[i][k] == par.points[i][k]);
  CHECK(ser.stats.accepted == par.stats.accepted);
  size_t prev = 0;
  for (long starts : {20L, 80L, 300L}) {
    cfg.starts = starts;
    auto s = multistart_solve(sys, cfg, Exec::Serial);
    CHECK(s.points.size() >= prev);
    prev = s.points.size();
  }
}

TEST_CASE("no convergence is reported") {
  // x1^2 + y1^2 + 1 has no real zeros
  polysys::PolynomialSystem p;
  p.dim = 2;
  p.polys = {MultiPoly::parse("x1^2 + y1^2 + 1", {"x1", "y1"}), MultiPoly::parse("x1 - y1", {"x1", "y1"})};
  SearchConfig cfg;
  cfg.starts = 20;
  try {
    multistart_solve(p, cfg);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoConvergence);
  }
}

TEST_CASE("analysis of multistart F3 points") {
  SearchConfig cfg;
  cfg.starts = 500;
  auto rep = analyzer::analyze(multistart_solve(fourier_system(3), cfg));
  CHECK(rep.N_v == 6);
  CHECK(rep.N_t == 2);
  CHECK(rep.four_bases_found);
  CHECK(rep.counts_are_bounds);
}
