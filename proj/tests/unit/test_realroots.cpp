#include <random>

#include "doctest.h"
#include "mub/error.hpp"
#include "mub/realroots.hpp"

using namespace mub;
using namespace mub::realroots;

namespace {

Real R(const char* s) { return make_real(std::string(s), 60); }

bool close(const Real& a, const Real& b, const char* tol) { return abs(a - b) < R(tol); }

}  // namespace

TEST_CASE("Sturm isolation basics") {
  auto p = parse_univariate("3*t - 4*t^3");
  auto ivs = sturm_isolate(p);
  REQUIRE(ivs.size() == 3);
  auto mid = sturm_isolate(p)[1];
  CHECK(mid.exact);
  CHECK(mid.lo == 0);
  auto top = refine(ivs[2], p, 20);
  CHECK(top.width() <= mpq_class("1/100000000000000000000"));
  CHECK(close(top.midpoint(60), sqrt(R("3")) / 2, "1e-20"));
  CHECK(sturm_isolate(parse_univariate("t^2 + 1")).empty());
  CHECK(sturm_isolate(parse_univariate("(t - 1)^3*(t + 2)")).size() == 2);
  auto seq = sturm_sequence(square_free(p));
  CHECK(sign_variations_at_infinity(seq, -1) - sign_variations_at_infinity(seq, 1) == 3);
  CHECK_THROWS_AS(sturm_isolate(UniPoly{}), Error);
}

TEST_CASE("Sturm isolation over Q(sqrt 3)") {
  // (t - s3/2)(t + s3/2)(t - 1/2) = t^3 - t^2/2 - 3t/4 + 3/8
  auto p = parse_univariate("(t - s3/2)*(t - 1/2)*(t - 1 - s3)");
  auto roots = real_roots(p, 25);
  REQUIRE(roots.size() == 3);
  CHECK(close(roots[0], R("0.5"), "1e-25"));
  CHECK(close(roots[1], sqrt(R("3")) / 2, "1e-25"));
  CHECK(close(roots[2], 1 + sqrt(R("3")), "1e-24"));
  CHECK(sign_at(parse_univariate("t - s3"), mpq_class(17, 10)) < 0);
  CHECK(sign_at(parse_univariate("t - s3"), mpq_class(174, 100)) > 0);
}

TEST_CASE("random products of known factors") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> num(-40, 40), den(1, 9), kind(0, 2);
  for (int trial = 0; trial < 20; ++trial) {
    UniPoly p = {QSqrt3(1)};
    std::vector<mpq_class> expected;
    const int factors = 1 + trial % 5;
    for (int f = 0; f < factors; ++f) {
      mpq_class r(num(rng), den(rng));
      r.canonicalize();
      UniPoly factor;
      if (kind(rng) == 0) {
        factor = {QSqrt3(r * r + 1), QSqrt3(0), QSqrt3(1)};  // no real roots
      } else {
        factor = {QSqrt3(-r), QSqrt3(1)};
        expected.push_back(r);
      }
      UniPoly prod(p.size() + factor.size() - 1);
      for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = 0; j < factor.size(); ++j) prod[i + j] += p[i] * factor[j];
      p = prod;
    }
    std::sort(expected.begin(), expected.end());
    expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
    auto ivs = sturm_isolate(p);
    REQUIRE(ivs.size() == expected.size());
    for (size_t k = 0; k < ivs.size(); ++k) {
      auto r = refine(ivs[k], p, 20);
      CHECK(abs(r.midpoint(60) - make_real(expected[k], 60)) <= R("1e-20") * max(Real(1), abs(make_real(expected[k], 60))));
    }
  }
}

TEST_CASE("solve F2 and F3") {
  using namespace mub::groebner;
  auto s2 = polysys::mu_system(catalog::fourier(2), polysys::Mode::exact());
  auto g2 = buchberger(s2, MonomialOrder::mu_default(2));
  auto sol2 = solve_triangular(g2, s2);
  REQUIRE(sol2.points.size() == 2);
  CHECK(abs(sol2.points[0][0]) < R("1e-20"));
  CHECK(close(sol2.points[0][1], R("-1"), "1e-20"));
  CHECK(close(sol2.points[1][1], R("1"), "1e-20"));

  auto s3 = polysys::mu_system(catalog::fourier(3), polysys::Mode::exact());
  auto g3 = buchberger(s3, MonomialOrder::mu_default(3));
  auto sol = solve_triangular(g3, s3, 20);
  REQUIRE(sol.points.size() == 6);
  CHECK(sol.error_bound <= R("1e-20"));
  const Real h = R("0.5"), r3 = sqrt(R("3")) / 2;
  // (x1, x2, y1, y2)
  std::vector<std::vector<Real>> expected = {
      {-h, -h, r3, r3}, {-h, Real(1), -r3, Real(0)}, {Real(1), -h, Real(0), -r3},
      {-h, -h, -r3, -r3}, {Real(1), -h, Real(0), r3}, {-h, Real(1), r3, Real(0)},
  };
  for (const auto& e : expected) {
    int hits = 0;
    for (const auto& p : sol.points) {
      bool same = true;
      for (int i = 0; i < 4; ++i) same = same && close(p[i], e[i], "1e-20");
      hits += same;
    }
    CHECK(hits == 1);
  }
  for (const auto& p : sol.points) CHECK(polysys::dropped_column_residual(s3, p) < R("1e-18"));
  CHECK(sol.stats.accepted + sol.stats.rejected <= sol.stats.explored);

  auto line = buchberger({MultiPoly::parse("x - y", {"x", "y"})}, MonomialOrder::canonical(2));
  CHECK_THROWS_AS(solve_triangular(line, s2), Error);
}
