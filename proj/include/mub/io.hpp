#pragma once

#include <json.hpp>
#include <string>

#include "mub/analyzer.hpp"
#include "mub/catalog.hpp"
#include "mub/groebner.hpp"
#include "mub/polysys.hpp"
#include "mub/realroots.hpp"

namespace mub::io {

using nlohmann::json;

json read_json(const std::string& path);
/// Writes atomically (temporary file + rename).
void write_json(const std::string& path, const json& j);
void write_text(const std::string& path, const std::string& text);

json to_json(const catalog::HadamardMatrix& h);
catalog::HadamardMatrix matrix_from_json(const json& j);

json poly_to_json(const MultiPoly& f);
MultiPoly poly_from_json(const json& j, int nvars);

json to_json(const polysys::PolynomialSystem& p);
polysys::PolynomialSystem system_from_json(const json& j);

json to_json(const groebner::GroebnerBasis& g);
groebner::GroebnerBasis basis_from_json(const json& j);

/// Residuals are included when `system` is given.
json to_json(const realroots::SolutionSet& s, const polysys::PolynomialSystem* system = nullptr);
realroots::SolutionSet solution_from_json(const json& j);

json to_json(const analyzer::AnalysisReport& r);

/// Run-length form of a classification string, e.g. "OOUNN" -> "2O1U2N".
std::string rle_encode(const std::string& s);
std::string rle_decode(const std::string& s);

}  // namespace mub::io
