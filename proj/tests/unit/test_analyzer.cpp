#include <algorithm>
#include <random>

#include "doctest.h"
#include "mub/analyzer.hpp"
#include "mub/error.hpp"

using namespace mub;
using namespace mub::analyzer;

namespace {

// (1, e^{2 pi i a/3}, e^{2 pi i b/3}) / sqrt 3
MUVector omega_vector(int a, int b) {
  const unsigned digits = 40;
  PrecisionGuard g(digits);
  Real s = 1 / sqrt(Real(3, digits));
  MUVector v;
  v.dim = 3;
  v.comps.emplace_back(s, Real(0, digits), digits);
  for (int k : {a, b}) {
    auto z = ComplexAP::unit_turns(Real(k, digits) / 3, digits);
    z *= s;
    v.comps.push_back(z);
  }
  return v;
}

std::vector<MUVector> f3_vectors() {
  auto sys = polysys::mu_system(catalog::fourier(3), polysys::Mode::exact());
  auto g = groebner::buchberger(sys, groebner::MonomialOrder::mu_default(3));
  return vectors_from_solutions(realroots::solve_triangular(g, sys, 20));
}

}  // namespace

TEST_CASE("pair classification examples") {
  auto va = omega_vector(1, 1), vb = omega_vector(2, 0), vd = omega_vector(2, 2);
  auto ab = pair_type(va, vb);
  CHECK(ab.kind == PairKind::Orthogonal);
  CHECK(ab.value < 1e-15);
  auto ad = pair_type(va, vd);
  CHECK(ad.kind == PairKind::Unbiased);
  CHECK(ad.value == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(pair_type(va, va).kind == PairKind::Neither);
  CHECK(pair_type(va, va).value == doctest::Approx(1.0));
  CHECK(pair_type(vd, va).kind == PairKind::Unbiased);

  auto near = va;
  near.error = 1e-11;  // eps spans the tau threshold
  auto fuzzy = vb;
  fuzzy.comps[1].re += Real("9.99e-11");
  CHECK_THROWS_AS(pair_type(near, fuzzy), Error);
  CHECK_THROWS_AS(pair_type(va, MUVector{2, {va.comps[0], va.comps[1]}, 0, -1}), Error);
}

TEST_CASE("vectors from solution points") {
  const int d = 4;
  std::vector<Real> ones(2 * (d - 1), Real(0));
  for (int j = 0; j < d - 1; ++j) ones[j] = 1;
  auto v = vector_from_point(ones, d, 0);
  for (const auto& z : v.comps) {
    CHECK(z.re.convert_to<double>() == doctest::Approx(0.5));
    CHECK(z.im == 0);
  }
  CHECK_THROWS_AS(vector_from_point(ones, 5, 0), Error);
}

TEST_CASE("F3 census: two mutually unbiased bases") {
  auto vs = f3_vectors();
  REQUIRE(vs.size() == 6);
  for (const auto& v : vs)
    for (const auto& z : v.comps) CHECK(std::abs(std::abs(z.to_complex()) - 1 / std::sqrt(3.0)) < 1e-15);
  auto rep = analyze(vs, 3);
  CHECK(rep.N_v == 6);
  CHECK(rep.N_t == 2);
  CHECK(rep.N_p == 9);
  CHECK(rep.four_bases_found);
  CHECK(rep.max_mu_bases == 2);
  REQUIRE(rep.bases.size() == 2);
  std::vector<int> all;
  for (const auto& b : rep.bases) {
    all.insert(all.end(), b.begin(), b.end());
    CHECK(catalog::validate_hadamard(base_matrix(vs, b), Real("1e-18")).pass);
  }
  std::sort(all.begin(), all.end());
  CHECK(all == std::vector<int>{0, 1, 2, 3, 4, 5});
  // orthogonality graph = two triangles, unbiasedness graph = K33
  int orth = 0;
  for (char c : rep.classification) orth += c == 'O';
  CHECK(orth == 6);
  CHECK(rep.classification.size() == 15);
  CHECK(std::count(rep.classification.begin(), rep.classification.end(), 'N') == 0);
  CHECK(rep.margins.min_orthogonal > 9e-11);

  // the expected six vectors of F3
  std::vector<MUVector> expected;
  for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 1}, {2, 0}, {0, 2}, {2, 2}, {0, 1}, {1, 0}})
    expected.push_back(omega_vector(a, b));
  CHECK(match_vectors(vs, expected, 1e-15).bijective());
}

TEST_CASE("census is symmetric and independent of ordering") {
  auto vs = f3_vectors();
  auto base = analyze(vs, 3, {}, Exec::Serial);
  std::mt19937 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    auto shuffled = vs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    auto rep = analyze(shuffled, 3, {}, Exec::Parallel);
    CHECK(rep.N_t == base.N_t);
    CHECK(rep.N_p == base.N_p);
    CHECK(rep.four_bases_found == base.four_bases_found);
  }
  for (size_t i = 0; i < vs.size(); ++i)
    for (size_t j = 0; j < vs.size(); ++j) CHECK(pair_type(vs[i], vs[j]).kind == pair_type(vs[j], vs[i]).kind);
  auto par = analyze(vs, 3, {}, Exec::Parallel);
  CHECK(par.classification == base.classification);
  CHECK(par.bases == base.bases);
}

TEST_CASE("conjugate_permute") {
  auto va = omega_vector(1, 2);
  auto same = conjugate_permute(omega_vector(0, 0), {0, 1, 2});
  CHECK(match_vectors({same}, {omega_vector(0, 0)}, 1e-30).bijective());
  std::vector<int> swap = {0, 2, 1};
  auto twice = conjugate_permute(conjugate_permute(va, swap), swap);
  CHECK(match_vectors({twice}, {va}, 1e-30).bijective());
  // (1, w, w^2)* permuted by (0 2 1) is (1, w, w^2) again
  CHECK(match_vectors({conjugate_permute(va, swap)}, {va}, 1e-30).bijective());
  auto rot = conjugate_permute(va, {1, 2, 0});
  CHECK(rot.comps[0].im == 0);
  CHECK(rot.comps[0].re > 0);
  CHECK_THROWS_AS(conjugate_permute(va, {0, 0, 1}), Error);
}

TEST_CASE("set matching reports unmatched points") {
  auto vs = f3_vectors();
  auto truncated = vs;
  truncated.pop_back();
  auto m = match_vectors(truncated, vs, 1e-12);
  CHECK(m.pairs.size() == 5);
  CHECK(m.unmatched_a.empty());
  CHECK(m.unmatched_b.size() == 1);
  CHECK(match_vectors({}, {}, 1e-12).bijective());
}
