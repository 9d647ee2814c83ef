#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "mub/error.hpp"
#include "mub/io.hpp"

using namespace mub;
namespace fs = std::filesystem;

namespace {

std::string temp_path(const std::string& name) {
  auto dir = fs::temp_directory_path() / "mub_io_test";
  fs::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST_CASE("matrix json round trip") {
  auto h = catalog::build(catalog::Family::Dita, {0.0625});
  auto j = io::to_json(h);
  auto back = io::matrix_from_json(j);
  REQUIRE(back.dim() == 6);
  CHECK(back.family() == catalog::Family::Dita);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) {
      CHECK(abs(back(r, c).re - h(r, c).re) < 1e-35);
      CHECK(abs(back(r, c).im - h(r, c).im) < 1e-35);
    }
  auto bad = j;
  bad["entries"].erase(0);
  CHECK_THROWS_AS(io::matrix_from_json(bad), Error);
}

TEST_CASE("system and basis json round trip") {
  auto sys = polysys::mu_system(catalog::fourier(3), polysys::Mode::exact());
  auto sys2 = io::system_from_json(io::to_json(sys));
  REQUIRE(sys2.polys.size() == sys.polys.size());
  for (size_t i = 0; i < sys.polys.size(); ++i) CHECK(sys2.polys[i] == sys.polys[i]);
  CHECK(sys2.mode == sys.mode);

  auto g = groebner::buchberger(sys, groebner::MonomialOrder::mu_default(3));
  auto g2 = io::basis_from_json(io::to_json(g));
  REQUIRE(g2.polys.size() == g.polys.size());
  for (size_t i = 0; i < g.polys.size(); ++i) CHECK(g2.polys[i] == g.polys[i]);
  CHECK(g2.reduced == g.reduced);
  CHECK(groebner::satisfies_buchberger_criterion(g2));

  auto approx = polysys::mu_system(catalog::build(catalog::Family::Dita, {0.01}), polysys::Mode::approx(8));
  auto a2 = io::system_from_json(io::to_json(approx));
  for (size_t i = 0; i < approx.polys.size(); ++i) CHECK(a2.polys[i] == approx.polys[i]);
}

TEST_CASE("solution json round trip and file io") {
  auto sys = polysys::mu_system(catalog::fourier(3), polysys::Mode::exact());
  auto g = groebner::buchberger(sys, groebner::MonomialOrder::mu_default(3));
  auto s = realroots::solve_triangular(g, sys, 25);
  auto j = io::to_json(s, &sys);
  CHECK(j["points"][0].contains("residual"));
  const auto path = temp_path("sol.json");
  io::write_json(path, j);
  auto s2 = io::solution_from_json(io::read_json(path));
  REQUIRE(s2.points.size() == s.points.size());
  for (size_t i = 0; i < s.points.size(); ++i)
    for (size_t k = 0; k < s.points[i].size(); ++k) CHECK(abs(s2.points[i][k] - s.points[i][k]) < 1e-24);
  CHECK(s2.certified == s.certified);

  std::ofstream(temp_path("broken.json")) << "{\"dim\": ";
  CHECK_THROWS_AS(io::read_json(temp_path("broken.json")), Error);
  CHECK_THROWS_AS(io::read_json(temp_path("missing.json")), Error);
}

TEST_CASE("run-length classification encoding") {
  CHECK(io::rle_encode("OOUNN") == "2O1U2N");
  CHECK(io::rle_encode("") == "");
  for (std::string s : {"O", "NNNNNNNNNNNNU", "UONUONUUU"}) CHECK(io::rle_decode(io::rle_encode(s)) == s);
  CHECK_THROWS_AS(io::rle_decode("3"), Error);
  CHECK_THROWS_AS(io::rle_decode("O"), Error);
}
