#include "mub/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mub/error.hpp"

namespace mub::io {

namespace {

std::string qstr(const mpq_class& q) { return rational_to_string(q); }

std::vector<std::string> string_list(const json& j, const char* key) {
  std::vector<std::string> out;
  if (j.contains(key))
    for (const auto& s : j.at(key)) out.push_back(s.get<std::string>());
  return out;
}

int var_index(const std::vector<std::string>& names, const std::string& name) {
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  throw Error(ErrorKind::InvalidArgument, "unknown variable " + name);
}

template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::IOFailure, std::string("malformed ") + what + " JSON: " + e.what());
  }
}

}  // namespace

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IOFailure, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::IOFailure, path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error(ErrorKind::IOFailure, "cannot write " + tmp);
    out << text;
    if (!out) throw Error(ErrorKind::IOFailure, "write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::IOFailure, "cannot rename " + tmp + ": " + ec.message());
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json to_json(const catalog::HadamardMatrix& h) {
  json j;
  j["dim"] = h.dim();
  j["family"] = catalog::to_string(h.family());
  j["digits"] = h.digits();
  j["params"] = json::array();
  for (const auto& p : h.params()) j["params"].push_back(to_decimal(p, h.digits()));
  if (h.branch()) j["branch"] = *h.branch() == catalog::Branch::Plus ? "+" : "-";
  j["entries"] = json::array();
  for (int r = 0; r < h.dim(); ++r) {
    json row = json::array();
    for (int c = 0; c < h.dim(); ++c)
      row.push_back({to_decimal(h(r, c).re, h.digits()), to_decimal(h(r, c).im, h.digits())});
    j["entries"].push_back(row);
  }
  return j;
}

catalog::HadamardMatrix matrix_from_json(const json& j) {
  return guarded("matrix", [&] {
    const int d = j.at("dim").get<int>();
    const unsigned digits = j.value("digits", 40u);
    std::vector<ComplexAP> entries;
    const auto& rows = j.at("entries");
    if (static_cast<int>(rows.size()) != d) throw Error(ErrorKind::DimensionMismatch, "entries do not match dim");
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != d) throw Error(ErrorKind::DimensionMismatch, "ragged entries");
      for (const auto& z : row)
        entries.emplace_back(make_real(z.at(0).get<std::string>(), digits), make_real(z.at(1).get<std::string>(), digits),
                             digits);
    }
    std::vector<Real> params;
    for (const auto& p : string_list(j, "params")) params.push_back(make_real(p, digits));
    std::optional<catalog::Branch> branch;
    if (j.contains("branch")) branch = j["branch"] == "-" ? catalog::Branch::Minus : catalog::Branch::Plus;
    auto family = catalog::family_from_string(j.value("family", std::string("Custom")));
    return catalog::HadamardMatrix(d, std::move(entries), family, std::move(params), branch, digits);
  });
}

json poly_to_json(const MultiPoly& f) {
  json terms = json::array();
  for (const auto& t : f.terms()) {
    json mono = json::array();
    for (int v = 0; v < f.nvars(); ++v) mono.push_back(t.mono[v]);
    terms.push_back({{"coeff", {{"a", qstr(t.coeff.a)}, {"b", qstr(t.coeff.b)}}}, {"mono", mono}});
  }
  return terms;
}

MultiPoly poly_from_json(const json& j, int nvars) {
  return guarded("polynomial", [&] {
    std::vector<Term> terms;
    for (const auto& t : j) {
      Monomial m;
      const auto& mono = t.at("mono");
      if (static_cast<int>(mono.size()) != nvars) throw Error(ErrorKind::DimensionMismatch, "monomial length");
      for (int v = 0; v < nvars; ++v) m.set(v, mono[v].get<int>());
      const auto& c = t.at("coeff");
      terms.push_back({m, QSqrt3(parse_rational(c.at("a").get<std::string>()),
                                 parse_rational(c.value("b", std::string("0"))))});
    }
    return MultiPoly(nvars, std::move(terms));
  });
}

json to_json(const polysys::PolynomialSystem& p) {
  json j;
  j["dim"] = p.dim;
  j["mode"] = p.mode.to_string();
  j["vars"] = p.vars();
  j["polys"] = json::array();
  for (const auto& f : p.polys) j["polys"].push_back(poly_to_json(f));
  j["dropped_column"] = poly_to_json(p.dropped_column);
  j["source_family"] = catalog::to_string(p.source_family);
  j["source_params"] = p.source_params;
  j["simplified"] = p.simplified;
  return j;
}

polysys::PolynomialSystem system_from_json(const json& j) {
  return guarded("system", [&] {
    polysys::PolynomialSystem p;
    p.dim = j.at("dim").get<int>();
    p.mode = polysys::Mode::parse(j.at("mode").get<std::string>());
    auto vars = string_list(j, "vars");
    if (!vars.empty() && vars != polysys::variable_names(p.dim))
      throw Error(ErrorKind::InvalidArgument, "system variables must be x1..x{d-1}, y1..y{d-1}");
    for (const auto& f : j.at("polys")) p.polys.push_back(poly_from_json(f, p.nvars()));
    p.dropped_column = j.contains("dropped_column") ? poly_from_json(j["dropped_column"], p.nvars()) : MultiPoly(p.nvars());
    p.source_family = catalog::family_from_string(j.value("source_family", std::string("Custom")));
    p.source_params = string_list(j, "source_params");
    p.simplified = j.value("simplified", false);
    return p;
  });
}

json to_json(const groebner::GroebnerBasis& g) {
  const auto names = polysys::variable_names(g.dim);
  json j;
  j["dim"] = g.dim;
  j["mode"] = g.mode.to_string();
  j["vars"] = names;
  j["order"] = g.order.kind == groebner::OrderKind::Lex ? "lex" : "grevlex";
  j["var_order"] = json::array();
  for (int v : g.order.vars) j["var_order"].push_back(names.at(v));
  j["reduced"] = g.reduced;
  j["polys"] = json::array();
  for (const auto& f : g.polys) j["polys"].push_back(poly_to_json(f));
  j["stats"] = {{"pairs_created", g.stats.pairs_created},
                {"pairs_reduced", g.stats.pairs_reduced},
                {"zero_reductions", g.stats.zero_reductions},
                {"peak_rss_bytes", g.stats.peak_rss_bytes},
                {"seconds", g.stats.seconds}};
  return j;
}

groebner::GroebnerBasis basis_from_json(const json& j) {
  return guarded("basis", [&] {
    groebner::GroebnerBasis g;
    g.dim = j.at("dim").get<int>();
    g.mode = polysys::Mode::parse(j.at("mode").get<std::string>());
    const auto names = polysys::variable_names(g.dim);
    const std::string kind = j.at("order").get<std::string>();
    if (kind != "lex" && kind != "grevlex") throw Error(ErrorKind::InvalidArgument, "unknown order " + kind);
    g.order.kind = kind == "lex" ? groebner::OrderKind::Lex : groebner::OrderKind::GrevLex;
    for (const auto& v : j.at("var_order")) g.order.vars.push_back(var_index(names, v.get<std::string>()));
    g.reduced = j.value("reduced", true);
    for (const auto& f : j.at("polys")) g.polys.push_back(poly_from_json(f, 2 * (g.dim - 1)));
    return g;
  });
}

json to_json(const realroots::SolutionSet& s, const polysys::PolynomialSystem* system) {
  json j;
  j["dim"] = s.dim;
  j["digits"] = s.refinement_digits;
  j["mode"] = s.mode.to_string();
  j["certified"] = s.certified;
  j["error_bound"] = to_decimal(s.error_bound, 3);
  const unsigned out_digits = std::max(20u, s.refinement_digits + 5);
  j["points"] = json::array();
  for (const auto& p : s.points) {
    json pt;
    pt["coords"] = json::array();
    for (const auto& c : p) pt["coords"].push_back(to_decimal(c, out_digits));
    pt["err"] = to_decimal(s.error_bound, 3);
    if (system) pt["residual"] = to_decimal(polysys::evaluate_residual(*system, p, out_digits + 10), 3);
    j["points"].push_back(pt);
  }
  j["stats"] = {{"explored", s.stats.explored},
                {"accepted", s.stats.accepted},
                {"rejected", s.stats.rejected},
                {"working_digits", s.stats.working_digits}};
  return j;
}

realroots::SolutionSet solution_from_json(const json& j) {
  return guarded("solution", [&] {
    realroots::SolutionSet s;
    s.dim = j.at("dim").get<int>();
    s.refinement_digits = j.value("digits", 20u);
    s.mode = polysys::Mode::parse(j.value("mode", std::string("exact")));
    s.certified = j.value("certified", true);
    const unsigned wd = std::max(40u, s.refinement_digits + 20);
    s.error_bound = make_real(j.value("error_bound", std::string("0")), wd);
    for (const auto& pt : j.at("points")) {
      std::vector<Real> p;
      for (const auto& c : pt.at("coords")) p.push_back(make_real(c.get<std::string>(), wd));
      if (static_cast<int>(p.size()) != 2 * (s.dim - 1)) throw Error(ErrorKind::DimensionMismatch, "point length");
      if (pt.contains("err")) s.error_bound = max(s.error_bound, make_real(pt["err"].get<std::string>(), wd));
      s.points.push_back(std::move(p));
    }
    if (j.contains("stats")) {
      const auto& st = j["stats"];
      s.stats.explored = st.value("explored", size_t{0});
      s.stats.accepted = st.value("accepted", size_t{0});
      s.stats.rejected = st.value("rejected", size_t{0});
      s.stats.working_digits = st.value("working_digits", 0u);
    }
    return s;
  });
}

json to_json(const analyzer::AnalysisReport& r) {
  json j;
  j["dim"] = r.dim;
  j["N_v"] = r.N_v;
  j["N_t"] = r.N_t;
  j["N_p"] = r.N_p;
  j["bases"] = r.bases;
  j["four_bases_found"] = r.four_bases_found;
  j["max_mu_bases"] = r.max_mu_bases;
  j["best_constellation"] = r.best_constellation;
  j["mode"] = r.mode.to_string();
  j["counts_are_bounds"] = r.counts_are_bounds;
  j["margins"] = {{"tau", r.margins.tau},
                  {"gap", r.margins.gap},
                  {"min_orthogonal", r.margins.min_orthogonal},
                  {"min_unbiased", r.margins.min_unbiased},
                  {"min_neither", r.margins.min_neither},
                  {"max_vector_error", r.margins.max_vector_error}};
  j["classification"] = {{"encoding", "rle-upper-triangle"}, {"data", rle_encode(r.classification)}};
  return j;
}

std::string rle_encode(const std::string& s) {
  std::string out;
  for (size_t i = 0; i < s.size();) {
    size_t k = i;
    while (k < s.size() && s[k] == s[i]) ++k;
    out += std::to_string(k - i) + s[i];
    i = k;
  }
  return out;
}

std::string rle_decode(const std::string& s) {
  std::string out;
  size_t count = 0;
  bool have = false;
  for (char c : s) {
    if (c >= '0' && c <= '9') {
      count = count * 10 + (c - '0');
      have = true;
    } else {
      if (!have) throw Error(ErrorKind::IOFailure, "malformed run-length data");
      out.append(count, c);
      count = 0;
      have = false;
    }
  }
  if (have) throw Error(ErrorKind::IOFailure, "truncated run-length data");
  return out;
}

}  // namespace mub::io
