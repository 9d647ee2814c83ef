#include "mub/harness.hpp"

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "mub/analyzer.hpp"
#include "mub/error.hpp"
#include "mub/numcheck.hpp"
#include "mub/realroots.hpp"
#include "mub/rng.hpp"

namespace mub::harness {

namespace {

constexpr double kAutoGroebnerSeconds = 300;

std::string frac(long num, long den) {
  mpq_class q(num, den);
  q.canonicalize();
  return rational_to_string(q);
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string decimal12(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string normalize_param(const std::string& p) { return rational_to_string(parse_rational(p)); }

std::string join(const Params& p, char sep) {
  std::string out;
  for (size_t i = 0; i < p.size(); ++i) out += (i ? std::string(1, sep) : "") + p[i];
  return out;
}

std::string family_code(catalog::Family f) {
  using catalog::Family;
  switch (f) {
    case Family::Fourier: return "F";
    case Family::FourierT: return "FT";
    case Family::Dita: return "D";
    case Family::Hermitean: return "B";
    case Family::Symmetric: return "M";
    case Family::Szollosi: return "X";
    case Family::SzollosiT: return "XT";
    case Family::Circulant: return "C";
    case Family::Spectral: return "S";
    case Family::Custom: return "custom";
  }
  return "custom";
}

double deltoid_d(std::complex<double> a) {
  const double m = std::norm(a);
  return m * m + 18 * m - 8 * std::real(a * a * a) - 27;
}

Params random_params(catalog::Family f, uint64_t seed, long index) {
  using catalog::Family;
  uint64_t state = stream_state(seed, fnv1a(catalog::to_string(f)), static_cast<uint64_t>(index));
  auto u = [&] { return uniform01(state); };
  switch (f) {
    case Family::Dita: return {decimal12((2 * u() - 1) / 8)};
    case Family::Symmetric: return {decimal12(u() / 2)};
    case Family::Hermitean: {
      const double t0 = std::acos(1 - std::numbers::sqrt3) / (2 * std::numbers::pi);
      return {decimal12(t0 + (1 - 2 * t0) * (1e-9 + u() * (1 - 2e-9)))};
    }
    case Family::Fourier:
    case Family::FourierT:
      for (;;) {
        double a = u() / 6, b = u() / 12;
        if (2 * b <= a) return {decimal12(a), decimal12(b)};
      }
    case Family::Szollosi:
    case Family::SzollosiT: {
      // uniform in the sector 0 <= arg <= pi/3 of the deltoid region
      for (;;) {
        double phi = u() * std::numbers::pi / 3;
        double r = deltoid_radius(phi) * std::sqrt(u()) * (1 - 1e-9);
        double a = r * std::cos(phi), b = r * std::sin(phi);
        Params p = {decimal12(a), decimal12(b)};
        std::complex<double> al(std::stod(p[0]), std::stod(p[1]));
        if (deltoid_d(al) <= 0 && deltoid_d(-al) <= 0) return p;
      }
    }
    default:
      throw Error(ErrorKind::InvalidArgument, catalog::to_string(f) + " has no parameter space to sample");
  }
}

Params line_params(double phi, uint64_t seed, long index) {
  uint64_t state = stream_state(seed, fnv1a("line") ^ static_cast<uint64_t>(phi * 1e6), static_cast<uint64_t>(index));
  double r = deltoid_radius(phi) * uniform01(state) * (1 - 1e-9);
  return {decimal12(r * std::cos(phi)), decimal12(r * std::sin(phi))};
}

std::string command_line(catalog::Family family, const Params& params, const RunConfig& cfg) {
  std::string c = "mub run --family " + family_code(family);
  if (!params.empty()) c += " --params " + join(params, ',');
  c += cfg.mode.is_exact() ? " --mode exact" : " --mode approx --digits " + std::to_string(cfg.mode.digits);
  c += " --engine " + to_string(cfg.engine) + " --solve-digits " + std::to_string(cfg.digits) + " --starts " +
       std::to_string(cfg.starts) + " --seed " + std::to_string(cfg.seed);
  if (cfg.budget.max_seconds > 0) c += " --budget-time " + decimal12(cfg.budget.max_seconds);
  return c;
}

struct Census {
  analyzer::AnalysisReport report;
  std::string engine;
  std::string note;
};

Census run_groebner(const catalog::HadamardMatrix& h, const RunConfig& cfg, Exec inner) {
  auto sys = polysys::mu_system(h, cfg.mode);
  std::string note;
  if (polysys::is_fourier6_system(sys)) {
    sys = polysys::simplify_fourier6(sys);
    note = "simplified F6 system";
  }
  groebner::Options opts;
  opts.budget = cfg.budget;
  auto g = groebner::buchberger(sys, groebner::MonomialOrder::mu_default(h.dim()), opts);
  auto sol = realroots::solve_triangular(g, sys, cfg.digits);
  return {analyzer::analyze(sol, inner), "groebner", note};
}

Census run_numcheck(const catalog::HadamardMatrix& h, const RunConfig& cfg, Exec inner) {
  polysys::PolynomialSystem sys;
  std::string note;
  try {
    sys = polysys::mu_system(h, cfg.mode);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotRepresentable) throw;
    sys = polysys::mu_system(h, polysys::Mode::approx(40));
    note = "coefficients outside Q(sqrt 3); numcheck on 40-digit coefficients";
  }
  numcheck::SearchConfig sc;
  sc.starts = cfg.starts;
  sc.seed = cfg.seed;
  auto sol = numcheck::multistart_solve(sys, sc, inner);
  auto rep = analyzer::analyze(sol, inner);
  return {rep, "numcheck", note};
}

ResultRecord run_point_impl(catalog::Family family, const Params& params, const RunConfig& cfg, Exec inner) {
  ResultRecord rec;
  rec.family = family;
  for (const auto& p : params) rec.params.push_back(normalize_param(p));
  rec.key = content_key(family, rec.params, cfg);
  rec.mode = cfg.mode.to_string();
  rec.engine = to_string(cfg.engine);
  rec.seed = cfg.seed;
  rec.starts = cfg.starts;
  rec.command = command_line(family, rec.params, cfg);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    auto h = build_matrix(family, rec.params);
    Census c;
    switch (cfg.engine) {
      case Engine::Groebner: c = run_groebner(h, cfg, inner); break;
      case Engine::Numcheck: c = run_numcheck(h, cfg, inner); break;
      case Engine::Auto:
        try {
          RunConfig capped = cfg;
          if (capped.budget.max_seconds <= 0) capped.budget.max_seconds = kAutoGroebnerSeconds;
          c = run_groebner(h, capped, inner);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::ResourceBudgetExceeded && e.kind() != ErrorKind::NotRepresentable) throw;
          c = run_numcheck(h, cfg, inner);
          c.note = "groebner: " + std::string(to_string(e.kind())) + "; numcheck fallback" +
                   (c.note.empty() ? "" : "; " + c.note);
        }
        break;
    }
    rec.engine = c.engine;
    rec.note = c.note;
    rec.N_v = c.report.N_v;
    rec.N_t = c.report.N_t;
    rec.N_p = c.report.N_p;
    rec.four_bases_found = c.report.four_bases_found;
    rec.max_mu_bases = c.report.max_mu_bases;
    rec.counts_are_bounds = c.report.counts_are_bounds;
  } catch (const Error& e) {
    rec.error_kind = std::string(to_string(e.kind()));
    rec.error = e.what();
  } catch (const std::exception& e) {
    rec.error_kind = "InternalError";
    rec.error = e.what();
  }
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

// Runs one point in a forked child; the record comes back as JSON over a pipe.
// Only the calling thread exists in the child, so the child stays serial.
ResultRecord run_point_forked(catalog::Family family, const Params& params, const RunConfig& cfg) {
  int fds[2];
  if (pipe(fds) != 0) throw Error(ErrorKind::IOFailure, "pipe failed");
  pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    throw Error(ErrorKind::IOFailure, "fork failed");
  }
  if (pid == 0) {
    close(fds[0]);
    if (fds[1] != 3) {
      dup2(fds[1], 3);
      close(fds[1]);
    }
    close_range(4, ~0U, 0);
    std::string out = run_point_impl(family, params, cfg, Exec::Serial).to_json().dump();
    const char* p = out.data();
    size_t left = out.size();
    while (left > 0) {
      ssize_t w = write(3, p, left);
      if (w <= 0) _exit(2);
      p += w;
      left -= static_cast<size_t>(w);
    }
    _exit(0);
  }
  close(fds[1]);
  std::string buf;
  char chunk[4096];
  for (;;) {
    ssize_t r = read(fds[0], chunk, sizeof chunk);
    if (r > 0) buf.append(chunk, static_cast<size_t>(r));
    else if (r == 0 || errno != EINTR) break;
  }
  close(fds[0]);
  int status = 0;
  waitpid(pid, &status, 0);
  if (WIFEXITED(status) && WEXITSTATUS(status) == 0) {
    try {
      return ResultRecord::from_json(io::json::parse(buf));
    } catch (const std::exception&) {
    }
  }
  ResultRecord rec;
  rec.family = family;
  for (const auto& p : params) rec.params.push_back(normalize_param(p));
  rec.key = content_key(family, rec.params, cfg);
  rec.mode = cfg.mode.to_string();
  rec.engine = to_string(cfg.engine);
  rec.seed = cfg.seed;
  rec.starts = cfg.starts;
  rec.command = command_line(family, rec.params, cfg);
  rec.error_kind = "ChildFailure";
  rec.error = WIFSIGNALED(status) ? "worker killed by signal " + std::to_string(WTERMSIG(status))
                                  : "worker exited with status " + std::to_string(WEXITSTATUS(status));
  return rec;
}

std::vector<mpq_class> numeric_params(const Params& p) {
  std::vector<mpq_class> out;
  for (const auto& s : p) out.push_back(parse_rational(s));
  return out;
}

}  // namespace

std::string to_string(GridKind k) {
  switch (k) {
    case GridKind::GammaD: return "gamma_D";
    case GridKind::GammaF: return "gamma_F";
    case GridKind::GammaM: return "gamma_M";
    case GridKind::GammaB: return "gamma_B";
    case GridKind::LambdaLine: return "lambda";
    case GridKind::LambdaPrimeLine: return "lambda_prime";
    case GridKind::Random: return "random";
    case GridKind::Explicit: return "explicit";
  }
  return "explicit";
}

GridKind grid_kind_from_string(const std::string& s) {
  for (auto k : {GridKind::GammaD, GridKind::GammaF, GridKind::GammaM, GridKind::GammaB, GridKind::LambdaLine,
                 GridKind::LambdaPrimeLine, GridKind::Random, GridKind::Explicit})
    if (to_string(k) == s) return k;
  throw Error(ErrorKind::InvalidArgument, "unknown grid: " + s);
}

GridSpec GridSpec::standard(GridKind kind) {
  using catalog::Family;
  GridSpec g;
  g.kind = kind;
  switch (kind) {
    case GridKind::GammaD: g.family = Family::Dita; break;
    case GridKind::GammaF: g.family = Family::Fourier; break;
    case GridKind::GammaM: g.family = Family::Symmetric; break;
    case GridKind::GammaB: g.family = Family::Hermitean; break;
    case GridKind::LambdaLine:
    case GridKind::LambdaPrimeLine: g.family = Family::Szollosi; break;
    default: break;
  }
  return g;
}

double deltoid_radius(double phi) {
  const std::complex<double> dir = std::polar(1.0, phi);
  auto inside = [&](double r) { return deltoid_d(r * dir) <= 0 && deltoid_d(-r * dir) <= 0; };
  double lo = 0, hi = 4;
  for (int i = 0; i < 100; ++i) {
    double mid = (lo + hi) / 2;
    (inside(mid) ? lo : hi) = mid;
  }
  return lo;
}

std::vector<Params> grid_points(const GridSpec& spec) {
  std::vector<Params> out;
  switch (spec.kind) {
    case GridKind::GammaD:
      for (int a = -18; a <= 18; ++a)
        if (a != 0) out.push_back({frac(a, 144)});
      break;
    case GridKind::GammaF:
      for (int b = 0; b <= 12; ++b)
        for (int a = std::max(1, 2 * b); a <= 24; ++a) out.push_back({frac(a, 144), frac(b, 144)});
      break;
    case GridKind::GammaM:
      for (int a = 1; a <= 71; ++a)
        if (a != 36) out.push_back({frac(a, 144)});
      break;
    case GridKind::GammaB:
      for (int a = 55; a <= 89; ++a)
        if (a != 72) out.push_back({frac(a, 144)});
      break;
    case GridKind::LambdaLine:
      for (long i = 0; i < spec.count; ++i) out.push_back(line_params(std::numbers::pi / 6, spec.seed, i));
      break;
    case GridKind::LambdaPrimeLine:
      for (long i = 0; i < spec.count; ++i) out.push_back(line_params(0.3510, spec.seed, i));
      break;
    case GridKind::Random:
      for (long i = 0; i < spec.count; ++i) out.push_back(random_params(spec.family, spec.seed, i));
      break;
    case GridKind::Explicit: out = spec.explicit_points; break;
  }
  return out;
}

std::string to_string(Engine e) {
  switch (e) {
    case Engine::Auto: return "auto";
    case Engine::Groebner: return "groebner";
    case Engine::Numcheck: return "numcheck";
  }
  return "auto";
}

Engine engine_from_string(const std::string& s) {
  if (s == "auto") return Engine::Auto;
  if (s == "groebner") return Engine::Groebner;
  if (s == "numcheck") return Engine::Numcheck;
  throw Error(ErrorKind::InvalidArgument, "unknown engine: " + s);
}

io::json RunConfig::to_json() const {
  return {{"engine", to_string(engine)},
          {"mode", mode.to_string()},
          {"digits", digits},
          {"starts", starts},
          {"seed", seed},
          {"jobs", jobs},
          {"store", store},
          {"budget",
           {{"max_pairs", budget.max_pairs},
            {"max_terms", budget.max_terms},
            {"max_memory_bytes", budget.max_memory_bytes},
            {"max_seconds", budget.max_seconds}}}};
}

RunConfig RunConfig::from_json(const io::json& j) {
  RunConfig c;
  try {
    if (j.contains("engine")) c.engine = engine_from_string(j["engine"].get<std::string>());
    if (j.contains("mode")) c.mode = polysys::Mode::parse(j["mode"].get<std::string>());
    c.digits = j.value("digits", c.digits);
    c.starts = j.value("starts", c.starts);
    c.seed = j.value("seed", c.seed);
    c.jobs = j.value("jobs", c.jobs);
    c.store = j.value("store", c.store);
    if (j.contains("budget")) {
      const auto& b = j["budget"];
      c.budget.max_pairs = b.value("max_pairs", c.budget.max_pairs);
      c.budget.max_terms = b.value("max_terms", c.budget.max_terms);
      if (b.contains("max_memory_bytes")) {
        const auto& m = b["max_memory_bytes"];
        c.budget.max_memory_bytes = m.is_string() ? groebner::parse_bytes(m.get<std::string>()) : m.get<uint64_t>();
      }
      c.budget.max_seconds = b.value("max_seconds", c.budget.max_seconds);
    }
  } catch (const io::json::exception& e) {
    throw Error(ErrorKind::IOFailure, std::string("malformed config: ") + e.what());
  }
  return c;
}

io::json ResultRecord::to_json() const {
  return {{"key", key},
          {"family", catalog::to_string(family)},
          {"params", params},
          {"mode", mode},
          {"engine", engine},
          {"N_v", N_v},
          {"N_t", N_t},
          {"N_p", N_p},
          {"four_bases_found", four_bases_found},
          {"max_mu_bases", max_mu_bases},
          {"counts_are_bounds", counts_are_bounds},
          {"wall_seconds", wall_seconds},
          {"version", version},
          {"seed", seed},
          {"starts", starts},
          {"error_kind", error_kind},
          {"error", error},
          {"note", note},
          {"command", command}};
}

ResultRecord ResultRecord::from_json(const io::json& j) {
  ResultRecord r;
  try {
    r.key = j.at("key").get<std::string>();
    r.family = catalog::family_from_string(j.at("family").get<std::string>());
    r.params = j.at("params").get<Params>();
    r.mode = j.at("mode").get<std::string>();
    r.engine = j.at("engine").get<std::string>();
    r.N_v = j.at("N_v").get<int>();
    r.N_t = j.at("N_t").get<int>();
    r.N_p = j.at("N_p").get<long>();
    r.four_bases_found = j.at("four_bases_found").get<bool>();
    r.max_mu_bases = j.value("max_mu_bases", 0);
    r.counts_are_bounds = j.value("counts_are_bounds", false);
    r.wall_seconds = j.value("wall_seconds", 0.0);
    r.version = j.value("version", std::string());
    r.seed = j.value("seed", uint64_t{0});
    r.starts = j.value("starts", 0L);
    r.error_kind = j.value("error_kind", std::string());
    r.error = j.value("error", std::string());
    r.note = j.value("note", std::string());
    r.command = j.value("command", std::string());
  } catch (const io::json::exception& e) {
    throw Error(ErrorKind::IOFailure, std::string("malformed record: ") + e.what());
  }
  return r;
}

std::string content_key(catalog::Family family, const Params& params, const RunConfig& cfg) {
  std::string s = catalog::to_string(family) + "|";
  for (const auto& p : params) s += normalize_param(p) + ",";
  s += "|" + cfg.mode.to_string() + "|" + to_string(cfg.engine) + "|" + std::to_string(cfg.digits) + "|" +
       std::to_string(cfg.starts) + "|" + std::to_string(cfg.seed);
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << fnv1a(s);
  return os.str();
}

ResultStore::ResultStore(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      records_.push_back(ResultRecord::from_json(io::json::parse(line)));
    } catch (const std::exception&) {
      // a torn final line from an interrupted append; the point reruns
    }
  }
}

bool ResultStore::contains(const std::string& key) const { return find(key).has_value(); }

std::optional<ResultRecord> ResultStore::find(const std::string& key) const {
  for (auto it = records_.rbegin(); it != records_.rend(); ++it)
    if (it->key == key) return *it;
  return std::nullopt;
}

void ResultStore::append(const ResultRecord& r) {
  int fd = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0) throw Error(ErrorKind::IOFailure, "cannot open store " + path_);
  std::string line = r.to_json().dump() + "\n";
  // start on a fresh line if a previous append was torn
  if (lseek(fd, 0, SEEK_END) > 0) {
    char last = '\n';
    int rfd = ::open(path_.c_str(), O_RDONLY);
    if (rfd >= 0) {
      if (pread(rfd, &last, 1, lseek(fd, 0, SEEK_END) - 1) != 1) last = '\n';
      ::close(rfd);
    }
    if (last != '\n') line = "\n" + line;
  }
  const bool ok = ::write(fd, line.data(), line.size()) == static_cast<ssize_t>(line.size()) && fsync(fd) == 0;
  ::close(fd);
  if (!ok) throw Error(ErrorKind::IOFailure, "append to " + path_ + " failed");
  records_.push_back(r);
}

catalog::HadamardMatrix build_matrix(catalog::Family family, const Params& params) {
  std::vector<Real> p;
  for (const auto& s : params) p.push_back(make_real(parse_rational(s), 40));
  return catalog::build(family, p);
}

ResultRecord run_point(catalog::Family family, const Params& params, const RunConfig& cfg) {
  auto rec = run_point_impl(family, params, cfg, Exec::Parallel);
  if (!cfg.store.empty()) ResultStore(cfg.store).append(rec);
  return rec;
}

std::vector<ResultRecord> run_grid(const GridSpec& spec, const RunConfig& cfg, Exec exec, long limit) {
  const auto points = grid_points(spec);
  std::optional<ResultStore> store;
  if (!cfg.store.empty()) store.emplace(cfg.store);
  std::vector<std::optional<ResultRecord>> out(points.size());
  std::vector<size_t> todo;
  std::vector<std::pair<size_t, size_t>> repeats;  // (point, earlier point with the same key)
  std::map<std::string, size_t> first;
  for (size_t i = 0; i < points.size(); ++i) {
    const auto key = content_key(spec.family, points[i], cfg);
    if (store) {
      if (auto r = store->find(key)) {
        out[i] = *r;
        continue;
      }
    }
    if (auto it = first.find(key); it != first.end()) {
      repeats.emplace_back(i, it->second);
      continue;
    }
    if (limit <= 0 || static_cast<long>(todo.size()) < limit) {
      first.emplace(key, i);
      todo.push_back(i);
    }
  }

  auto finish = [&](size_t i, ResultRecord r) {
    if (store) store->append(r);
    out[i] = std::move(r);
  };
  if (exec == Exec::Parallel) {
    const long n = static_cast<long>(todo.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, cfg.jobs))
    for (long k = 0; k < n; ++k) {
      const size_t i = todo[k];
      ResultRecord r = run_point_forked(spec.family, points[i], cfg);
#pragma omp critical(mub_store)
      finish(i, std::move(r));
    }
  } else {
    for (size_t i : todo) finish(i, run_point_impl(spec.family, points[i], cfg, Exec::Serial));
  }

  for (auto [i, j] : repeats) out[i] = out[j];

  std::vector<ResultRecord> done;
  for (auto& r : out)
    if (r) done.push_back(std::move(*r));
  return done;
}

ExportFormat export_format_from_string(const std::string& s) {
  if (s == "csv") return ExportFormat::CSV;
  if (s == "jsonl") return ExportFormat::JSONL;
  throw Error(ErrorKind::InvalidArgument, "unknown export format: " + s);
}

std::string export_records(std::vector<ResultRecord> records, ExportFormat format) {
  if (records.empty()) throw Error(ErrorKind::IOFailure, "no records to export (empty store or filter)");
  std::stable_sort(records.begin(), records.end(), [](const ResultRecord& a, const ResultRecord& b) {
    auto ka = std::make_tuple(catalog::to_string(a.family), numeric_params(a.params), a.mode, a.engine);
    auto kb = std::make_tuple(catalog::to_string(b.family), numeric_params(b.params), b.mode, b.engine);
    return ka < kb;
  });
  std::ostringstream os;
  if (format == ExportFormat::JSONL) {
    for (const auto& r : records) os << r.to_json().dump() << "\n";
    return os.str();
  }
  os << "family,params,mode,engine,N_v,N_t,N_p,four_bases_found,max_mu_bases,counts_are_bounds,error_kind\n";
  for (const auto& r : records) {
    os << catalog::to_string(r.family) << "," << join(r.params, ';') << "," << r.mode << "," << r.engine << ","
       << r.N_v << "," << r.N_t << "," << r.N_p << "," << (r.four_bases_found ? "true" : "false") << ","
       << r.max_mu_bases << "," << (r.counts_are_bounds ? "true" : "false") << "," << r.error_kind << "\n";
  }
  return os.str();
}

void export_records(const std::vector<ResultRecord>& records, ExportFormat format, const std::string& path) {
  io::write_text(path, export_records(records, format));
}

std::vector<ResultRecord> import_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IOFailure, "cannot open " + path);
  std::vector<ResultRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      out.push_back(ResultRecord::from_json(io::json::parse(line)));
    } catch (const io::json::exception& e) {
      throw Error(ErrorKind::IOFailure, path + ": " + e.what());
    }
  }
  return out;
}

}  // namespace mub::harness
