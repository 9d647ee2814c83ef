#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "mub/analyzer.hpp"
#include "mub/error.hpp"
#include "mub/groebner.hpp"
#include "mub/harness.hpp"
#include "mub/io.hpp"
#include "mub/numcheck.hpp"
#include "mub/polysys.hpp"
#include "mub/realroots.hpp"

using namespace mub;
using io::json;

namespace {

void emit(const json& j, const std::string& out) {
  if (out.empty()) std::cout << j.dump(2) << "\n";
  else io::write_json(out, j);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

polysys::Mode parse_mode(const std::string& mode, unsigned digits) {
  if (mode == "exact") return polysys::Mode::exact();
  if (mode == "approx") return polysys::Mode::approx(digits);
  return polysys::Mode::parse(mode);
}

// Expands `--config file.json` into flags placed right after the subcommand,
// so explicit command-line flags (parsed later) take precedence.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  for (size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] != "--config") continue;
    const json cfg = io::read_json(args[i + 1]);
    if (!cfg.is_object()) throw Error(ErrorKind::IOFailure, "config must be a JSON object");
    std::vector<std::string> flags;
    for (const auto& [key, v] : cfg.items()) {
      std::string name = "--" + key;
      std::replace(name.begin(), name.end(), '_', '-');
      if (v.is_boolean()) {
        if (v.get<bool>()) flags.push_back(name);
        continue;
      }
      std::string value;
      if (v.is_array()) {
        for (const auto& e : v) value += (value.empty() ? "" : ",") + (e.is_string() ? e.get<std::string>() : e.dump());
      } else {
        value = v.is_string() ? v.get<std::string>() : v.dump();
      }
      flags.push_back(name);
      flags.push_back(value);
    }
    args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
    args.insert(args.begin() + 1, flags.begin(), flags.end());
    break;
  }
  return args;
}

struct RunFlags {
  std::string family;
  std::string params;
  std::string mode = "exact";
  unsigned digits = 5;
  std::string engine = "auto";
  unsigned solve_digits = 20;
  long starts = 20000;
  uint64_t seed = 42;
  int jobs = 1;
  std::string store;
  std::string budget_mem;
  double budget_time = 0;

  void add(CLI::App* app) {
    app->add_option("--family", family, "matrix family (F, FT, D, B, M, X, XT, C, S)")->required();
    app->add_option("--mode", mode, "exact | approx | approx(k)");
    app->add_option("--digits", digits, "significant digits kept by --mode approx");
    app->add_option("--engine", engine, "auto | groebner | numcheck");
    app->add_option("--solve-digits", solve_digits, "digits of the back-substituted solutions");
    app->add_option("--starts", starts, "numcheck start count");
    app->add_option("--seed", seed, "numcheck seed");
    app->add_option("--store", store, "append records to this JSONL store");
    app->add_option("--budget-mem", budget_mem, "Groebner memory guard, e.g. 8G");
    app->add_option("--budget-time", budget_time, "Groebner time limit in seconds (auto engine: 300 when unset)");
    app->add_option("--config", "JSON file with the same keys as the flags");
  }

  harness::RunConfig config() const {
    harness::RunConfig c;
    c.engine = harness::engine_from_string(engine);
    c.mode = parse_mode(mode, digits);
    c.digits = solve_digits;
    c.starts = starts;
    c.seed = seed;
    c.jobs = jobs;
    c.store = store;
    if (!budget_mem.empty()) c.budget.max_memory_bytes = groebner::parse_bytes(budget_mem);
    if (budget_time > 0) c.budget.max_seconds = budget_time;
    return c;
  }
};

void print_record(const harness::ResultRecord& r) {
  std::cout << r.to_json().dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vectors mutually unbiased to {I, H} for complex Hadamard H"};
  app.set_version_flag("--version", harness::kVersion);
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  // catalog
  auto* cat = app.add_subcommand("catalog", "build and inspect Hadamard matrices");
  cat->require_subcommand(1);
  std::string family, params, branch = "+", out;
  unsigned mdigits = 40;
  bool override_region = false;
  auto* cbuild = cat->add_subcommand("build", "construct a family member");
  cbuild->add_option("--family", family)->required();
  cbuild->add_option("--params", params, "comma-separated decimals or p/q");
  cbuild->add_option("--branch", branch, "+ or - (Hermitean family)");
  cbuild->add_option("--digits", mdigits, "entry precision");
  cbuild->add_flag("--override-region", override_region, "allow parameters outside the fundamental region");
  cbuild->add_option("--out", out);
  std::string h1, h2;
  auto* ccheck = cat->add_subcommand("check", "validate a matrix file");
  ccheck->add_option("matrix", h1)->required();
  auto* cequiv = cat->add_subcommand("equiv", "test Hadamard equivalence");
  cequiv->add_option("first", h1)->required();
  cequiv->add_option("second", h2)->required();

  // polysys
  auto* ps = app.add_subcommand("polysys", "MU polynomial systems");
  ps->require_subcommand(1);
  auto* psbuild = ps->add_subcommand("build", "MU system for {I, H}");
  std::string mode = "exact";
  unsigned cdigits = 5;
  bool simplify = false;
  psbuild->add_option("matrix", h1)->required();
  psbuild->add_option("--mode", mode, "exact | approx | approx(k)");
  psbuild->add_option("--digits", cdigits, "significant digits kept by --mode approx");
  psbuild->add_flag("--simplify", simplify, "apply the Fourier-6 reduction");
  psbuild->add_option("--out", out);

  // groebner
  auto* gb = app.add_subcommand("groebner", "reduced Groebner basis");
  std::string sys_path, order = "lex", var_order = "auto", budget_mem;
  gb->add_option("system", sys_path)->required();
  gb->add_option("--order", order, "lex | grevlex");
  gb->add_option("--var-order", var_order, "auto or a comma-separated ranking such as x1,y1,x2,...");
  gb->add_option("--budget-mem", budget_mem, "memory guard, e.g. 8G");
  gb->add_option("--out", out);

  // solve
  auto* solve = app.add_subcommand("solve", "real solutions by back-substitution");
  std::string gb_path;
  unsigned sdigits = 20;
  solve->add_option("basis", gb_path)->required();
  solve->add_option("system", sys_path)->required();
  solve->add_option("--digits", sdigits);
  solve->add_option("--out", out);

  // analyze
  auto* an = app.add_subcommand("analyze", "pair classification and triple counts");
  std::string sol_path;
  an->add_option("solutions", sol_path)->required();
  an->add_option("--out", out);

  // numcheck
  auto* nc = app.add_subcommand("numcheck", "multistart Newton cross-check");
  long starts = 100000;
  uint64_t seed = 42;
  std::string compare;
  nc->add_option("system", sys_path)->required();
  nc->add_option("--starts", starts);
  nc->add_option("--seed", seed);
  nc->add_option("--compare", compare, "exact solution file to cross-check against");
  nc->add_option("--out", out);

  // run / sweep
  auto* run = app.add_subcommand("run", "one parameter point, full pipeline");
  RunFlags rf;
  rf.add(run);
  run->add_option("--params", rf.params, "comma-separated decimals or p/q");

  auto* sweep = app.add_subcommand("sweep", "grid campaign with a resumable store");
  RunFlags sf;
  std::string grid = "gamma_D", points;
  long count = 50;
  uint64_t grid_seed = 1;
  sf.add(sweep);
  sweep->add_option("--grid", grid, "gamma_D | gamma_F | gamma_M | gamma_B | lambda | lambda_prime | random | explicit");
  sweep->add_option("--count", count, "points for random and line grids");
  sweep->add_option("--grid-seed", grid_seed, "seed for random and line grids");
  sweep->add_option("--points", points, "explicit points, ';'-separated, parameters ','-separated");
  sweep->add_option("--jobs", sf.jobs, "concurrent points");

  // export
  auto* ex = app.add_subcommand("export", "records to CSV or JSONL");
  std::string store_path, format = "csv", filter_family;
  ex->add_option("store", store_path)->required();
  ex->add_option("--format", format, "csv | jsonl");
  ex->add_option("--family", filter_family, "keep only this family");
  ex->add_option("--out", out);

  try {
    auto args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (*cbuild) {
      catalog::BuildOptions opts;
      opts.digits = mdigits;
      opts.override_region = override_region;
      if (branch == "-") opts.branch = catalog::Branch::Minus;
      else if (branch == "+") opts.branch = catalog::Branch::Plus;
      else throw Error(ErrorKind::InvalidArgument, "branch must be + or -");
      std::vector<Real> p;
      for (const auto& s : split(params, ',')) p.push_back(make_real(parse_rational(s), mdigits + 10));
      auto fam = catalog::family_from_string(family);
      if (fam != catalog::Family::Hermitean) opts.branch.reset();
      emit(io::to_json(catalog::build(fam, p, opts)), out);
    } else if (*ccheck) {
      auto h = io::matrix_from_json(io::read_json(h1));
      auto v = catalog::validate_hadamard(h);
      std::cout << json{{"pass", v.pass},
                        {"unitarity_defect", to_decimal(v.unitarity_defect, 6)},
                        {"modulus_defect", to_decimal(v.modulus_defect, 6)}}
                       .dump(2)
                << "\n";
      return v.pass ? 0 : 3;
    } else if (*cequiv) {
      bool eq = catalog::equivalent(io::matrix_from_json(io::read_json(h1)), io::matrix_from_json(io::read_json(h2)));
      std::cout << json{{"equivalent", eq}}.dump() << "\n";
      return eq ? 0 : 3;
    } else if (*psbuild) {
      auto sys = polysys::mu_system(io::matrix_from_json(io::read_json(h1)), parse_mode(mode, cdigits));
      if (simplify) sys = polysys::simplify_fourier6(sys);
      emit(io::to_json(sys), out);
    } else if (*gb) {
      auto sys = io::system_from_json(io::read_json(sys_path));
      const auto kind = order == "lex"       ? groebner::OrderKind::Lex
                        : order == "grevlex" ? groebner::OrderKind::GrevLex
                                             : throw Error(ErrorKind::InvalidArgument, "unknown order " + order);
      groebner::MonomialOrder mo = groebner::MonomialOrder::mu_default(sys.dim, kind);
      if (var_order != "auto") {
        const auto names = polysys::variable_names(sys.dim);
        mo.vars.clear();
        for (const auto& v : split(var_order, ',')) {
          auto it = std::find(names.begin(), names.end(), v);
          if (it == names.end()) throw Error(ErrorKind::InvalidArgument, "unknown variable " + v);
          mo.vars.push_back(static_cast<int>(it - names.begin()));
        }
        if (mo.vars.size() != names.size()) throw Error(ErrorKind::InvalidArgument, "--var-order must rank every variable");
      }
      groebner::Options opts;
      if (!budget_mem.empty()) opts.budget.max_memory_bytes = groebner::parse_bytes(budget_mem);
      emit(io::to_json(groebner::buchberger(sys, mo, opts)), out);
    } else if (*solve) {
      auto g = io::basis_from_json(io::read_json(gb_path));
      auto sys = io::system_from_json(io::read_json(sys_path));
      if (g.order.kind != groebner::OrderKind::Lex) g = groebner::fglm(g, groebner::MonomialOrder::mu_default(sys.dim));
      auto sol = realroots::solve_triangular(g, sys, sdigits);
      emit(io::to_json(sol, &sys), out);
    } else if (*an) {
      emit(io::to_json(analyzer::analyze(io::solution_from_json(io::read_json(sol_path)))), out);
    } else if (*nc) {
      auto sys = io::system_from_json(io::read_json(sys_path));
      numcheck::SearchConfig cfg;
      cfg.starts = starts;
      cfg.seed = seed;
      auto sol = numcheck::multistart_solve(sys, cfg, Exec::Parallel);
      emit(io::to_json(sol, &sys), out);
      if (!compare.empty()) {
        auto cc = numcheck::crosscheck(io::solution_from_json(io::read_json(compare)), sol, 1e-8);
        std::cerr << "crosscheck: matched " << cc.matched.size() << ", only exact " << cc.unmatched_exact.size()
                  << ", only numeric " << cc.unmatched_approx.size() << ", max distance " << cc.max_distance << "\n";
        if (!cc.bijective()) return 3;
      }
    } else if (*run) {
      auto rec = harness::run_point(catalog::family_from_string(rf.family), split(rf.params, ','), rf.config());
      print_record(rec);
      return rec.ok() ? 0 : 3;
    } else if (*sweep) {
      harness::GridSpec spec;
      spec.kind = harness::grid_kind_from_string(grid);
      spec.family = catalog::family_from_string(sf.family);
      spec.count = count;
      spec.seed = grid_seed;
      if (!points.empty())
        for (const auto& pt : split(points, ';')) spec.explicit_points.push_back(split(pt, ','));
      auto recs = harness::run_grid(spec, sf.config(), sf.jobs > 1 ? Exec::Parallel : Exec::Serial);
      int failed = 0;
      for (const auto& r : recs) {
        print_record(r);
        failed += !r.ok();
      }
      std::cerr << recs.size() << " points, " << failed << " failed\n";
    } else if (*ex) {
      if (!std::ifstream(store_path)) throw Error(ErrorKind::IOFailure, "cannot open " + store_path);
      auto recs = harness::ResultStore(store_path).records();
      if (!filter_family.empty()) {
        auto fam = catalog::family_from_string(filter_family);
        std::erase_if(recs, [&](const harness::ResultRecord& r) { return r.family != fam; });
      }
      auto fmt = harness::export_format_from_string(format);
      if (out.empty()) std::cout << harness::export_records(recs, fmt);
      else harness::export_records(recs, fmt, out);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
