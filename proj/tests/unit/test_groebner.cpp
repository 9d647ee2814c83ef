#include <random>

#include "doctest.h"
#include "mub/error.hpp"
#include "mub/groebner.hpp"

using namespace mub;
using namespace mub::groebner;

namespace {

const std::vector<std::string> kXY = {"x", "y"};
MultiPoly P2(const std::string& s) { return MultiPoly::parse(s, kXY); }

bool ideal_contains_inputs(const GroebnerBasis& g, const std::vector<MultiPoly>& in) {
  for (const auto& f : in)
    if (!reduce(f, g.polys, g.order).is_zero()) return false;
  return true;
}

std::vector<MultiPoly> random_quadratic_system(std::mt19937_64& rng, int nvars, int npolys) {
  std::uniform_int_distribution<int> coef(-2, 2);
  std::vector<MultiPoly> out;
  for (int k = 0; k < npolys; ++k) {
    std::vector<Term> t;
    t.push_back({Monomial(), QSqrt3(coef(rng))});
    for (int i = 0; i < nvars; ++i) {
      t.push_back({Monomial::var(i), QSqrt3(coef(rng))});
      for (int j = i; j < nvars; ++j) t.push_back({Monomial::var(i) * Monomial::var(j), QSqrt3(coef(rng))});
    }
    MultiPoly f(nvars, std::move(t));
    if (f.is_zero()) f = MultiPoly::variable(nvars, 0);
    out.push_back(f);
  }
  return out;
}

}  // namespace

TEST_CASE("monomial orders") {
  auto lex = MonomialOrder::canonical(2);
  auto grevlex = MonomialOrder::canonical(2, OrderKind::GrevLex);
  Monomial x = Monomial::var(0), y = Monomial::var(1);
  CHECK(compare(x, y * y, lex) > 0);
  CHECK(compare(x, y * y, grevlex) < 0);
  CHECK(compare(x * y, x * y, lex) == 0);
  MonomialOrder swapped{OrderKind::Lex, {1, 0}};
  CHECK(compare(x, y, swapped) < 0);
  CHECK(MonomialOrder::mu_default(3).vars == std::vector<int>{0, 2, 1, 3});
  CHECK(MonomialOrder::mu_default(3).to_string(polysys::variable_names(3)) == "lex(x1 > y1 > x2 > y2)");
}

TEST_CASE("reduction examples") {
  auto lex = MonomialOrder::canonical(2);
  CHECK(reduce(P2("x^2"), {P2("x")}, lex).is_zero());
  CHECK(reduce(P2("x^2*y - x"), {P2("x^2 - y")}, lex) == P2("y^2 - x"));
  CHECK(s_polynomial(P2("x^2 - y"), P2("x*y - 1"), lex) == P2("x - y^2"));
  CHECK(reduce(s_polynomial(P2("x"), P2("y"), lex), {P2("x"), P2("y")}, lex).is_zero());
  CHECK(s_polynomial(P2("x^2 + y"), P2("x^2 + y"), lex).is_zero());
  CHECK_THROWS_AS(reduce(P2("x"), {MultiPoly::variable(3, 0)}, lex), Error);
}

TEST_CASE("buchberger small cases") {
  auto lex = MonomialOrder::canonical(2);
  auto g = buchberger({P2("x - 1"), P2("y - 2")}, lex);
  REQUIRE(g.polys.size() == 2);
  CHECK(g.polys[0] == P2("y - 2"));
  CHECK(g.polys[1] == P2("x - 1"));
  CHECK(g.reduced);
  CHECK(is_zero_dimensional(g));

  auto line = buchberger({P2("x - y")}, lex);
  CHECK_FALSE(is_zero_dimensional(line));

  auto unit = buchberger({P2("x"), P2("x - 1")}, lex);
  REQUIRE(unit.polys.size() == 1);
  CHECK(unit.polys[0] == P2("1"));

  auto c = buchberger({P2("x^2 - y"), P2("x*y - 1")}, lex);
  CHECK(satisfies_buchberger_criterion(c));
  CHECK(c.polys[0] == P2("y^3 - 1"));
  CHECK(c.polys[1] == P2("x - y^2"));
}

TEST_CASE("F3 system basis") {
  auto sys = polysys::mu_system(catalog::fourier(3), polysys::Mode::exact());
  auto order = MonomialOrder::mu_default(3);
  auto g = buchberger(sys, order);
  CHECK(g.reduced);
  CHECK(g.dim == 3);
  CHECK(satisfies_buchberger_criterion(g));
  CHECK(ideal_contains_inputs(g, sys.polys));
  CHECK(is_zero_dimensional(g));
  for (const auto& f : g.polys) CHECK(leading_coeff(f, order) == QSqrt3(1));

  auto plain = buchberger(sys, order, Options{false, Budget{}});
  REQUIRE(plain.polys.size() == g.polys.size());
  for (size_t i = 0; i < g.polys.size(); ++i) CHECK(plain.polys[i] == g.polys[i]);
  CHECK(plain.stats.pairs_reduced >= g.stats.pairs_reduced);

  auto again = buchberger(sys, order);
  for (size_t i = 0; i < g.polys.size(); ++i) CHECK(again.polys[i].to_string(sys.vars()) == g.polys[i].to_string(sys.vars()));

  auto gr = buchberger(sys, MonomialOrder::mu_default(3, OrderKind::GrevLex));
  CHECK(satisfies_buchberger_criterion(gr));
  for (const auto& f : gr.polys) CHECK(reduce(f, g.polys, g.order).is_zero());
  for (const auto& f : g.polys) CHECK(reduce(f, gr.polys, gr.order).is_zero());

  CHECK_THROWS_AS(reduce(sys.polys[0], polysys::Mode::approx(5), g), Error);
  CHECK(reduce(sys.polys[2], polysys::Mode::exact(), g).is_zero());
}

TEST_CASE("budget guard") {
  auto sys = polysys::mu_system(catalog::fourier(3), polysys::Mode::exact());
  Options opts;
  opts.budget.max_pairs = 1;
  try {
    buchberger(sys, MonomialOrder::mu_default(3), opts);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ResourceBudgetExceeded);
  }
  CHECK(parse_bytes("8G") == (8ull << 30));
  CHECK(parse_bytes("512M") == (512ull << 20));
  CHECK_THROWS_AS(parse_bytes("12Q"), Error);
  CHECK(current_rss_bytes() > 0);
}

TEST_CASE("random quadratic systems satisfy the Buchberger criterion") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 12; ++trial) {
    int nvars = 2 + trial % 2;
    auto sys = random_quadratic_system(rng, nvars, nvars);
    for (auto kind : {OrderKind::Lex, OrderKind::GrevLex}) {
      auto order = MonomialOrder::canonical(nvars, kind);
      auto g = buchberger(sys, order);
      CHECK(satisfies_buchberger_criterion(g));
      CHECK(ideal_contains_inputs(g, sys));
      auto plain = buchberger(sys, order, Options{false, Budget{}});
      REQUIRE(plain.polys.size() == g.polys.size());
      for (size_t i = 0; i < g.polys.size(); ++i) CHECK(plain.polys[i] == g.polys[i]);
    }
  }
}

TEST_CASE("direct lex and FGLM lex give the same reduced basis") {
  Options direct;
  direct.lex_via_fglm = false;
  auto check = [&](const std::vector<MultiPoly>& sys, const MonomialOrder& order) {
    auto a = buchberger(sys, order);
    auto b = buchberger(sys, order, direct);
    REQUIRE(a.polys.size() == b.polys.size());
    for (size_t i = 0; i < a.polys.size(); ++i) CHECK(a.polys[i] == b.polys[i]);
  };
  check(polysys::mu_system(catalog::fourier(3), polysys::Mode::exact()).polys, MonomialOrder::mu_default(3));
  check(polysys::mu_system(catalog::fourier(4), polysys::Mode::exact()).polys, MonomialOrder::mu_default(4));
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 6; ++trial) {
    const int nvars = 2 + trial % 2;
    check(random_quadratic_system(rng, nvars, nvars), MonomialOrder::canonical(nvars));
  }
}
