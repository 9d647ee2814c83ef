#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mub/catalog.hpp"
#include "mub/exec.hpp"
#include "mub/groebner.hpp"
#include "mub/io.hpp"
#include "mub/polysys.hpp"

namespace mub::harness {

inline constexpr const char* kVersion = "mub 1.0.0";

enum class GridKind { GammaD, GammaF, GammaM, GammaB, LambdaLine, LambdaPrimeLine, Random, Explicit };
std::string to_string(GridKind k);
GridKind grid_kind_from_string(const std::string& s);

/// Parameters are exact decimal or p/q strings so that records stay reproducible.
using Params = std::vector<std::string>;

struct GridSpec {
  catalog::Family family = catalog::Family::Dita;
  GridKind kind = GridKind::GammaD;
  long count = 50;    // Random and line kinds
  uint64_t seed = 1;  // Random and line kinds
  std::vector<Params> explicit_points;

  /// The family the grid is defined for (GammaD -> Dita, ...); Random and
  /// Explicit accept any family.
  static GridSpec standard(GridKind kind);
};

std::vector<Params> grid_points(const GridSpec& spec);

/// Largest r with r e^{i phi} inside the Szollosi region (both deltoid
/// conditions).
double deltoid_radius(double phi);

enum class Engine { Auto, Groebner, Numcheck };
std::string to_string(Engine e);
Engine engine_from_string(const std::string& s);

struct RunConfig {
  Engine engine = Engine::Auto;
  polysys::Mode mode = polysys::Mode::exact();
  unsigned digits = 20;  // solve_triangular refinement
  long starts = 20000;   // numcheck
  uint64_t seed = 42;    // numcheck
  groebner::Budget budget = groebner::Budget::from_env();
  int jobs = 1;
  std::string store;  // empty: no persistence

  io::json to_json() const;
  static RunConfig from_json(const io::json& j);
};

struct ResultRecord {
  std::string key;
  catalog::Family family = catalog::Family::Custom;
  Params params;
  std::string mode;
  std::string engine;  // engine that produced the counts
  int N_v = -1;
  int N_t = -1;
  long N_p = -1;
  bool four_bases_found = false;
  int max_mu_bases = 0;
  bool counts_are_bounds = false;
  double wall_seconds = 0;
  std::string version = kVersion;
  uint64_t seed = 0;
  long starts = 0;
  std::string error_kind;  // empty on success
  std::string error;
  std::string note;
  std::string command;

  bool ok() const { return error_kind.empty(); }
  io::json to_json() const;
  static ResultRecord from_json(const io::json& j);
  friend bool operator==(const ResultRecord& a, const ResultRecord& b) { return a.to_json() == b.to_json(); }
};

/// FNV-1a hash over the inputs that determine a record.
std::string content_key(catalog::Family family, const Params& params, const RunConfig& cfg);

/// Append-only JSONL store with a key index.
class ResultStore {
 public:
  explicit ResultStore(std::string path);
  bool contains(const std::string& key) const;
  std::optional<ResultRecord> find(const std::string& key) const;
  void append(const ResultRecord& r);
  const std::vector<ResultRecord>& records() const { return records_; }

 private:
  std::string path_;
  std::vector<ResultRecord> records_;
};

catalog::HadamardMatrix build_matrix(catalog::Family family, const Params& params);

/// Runs one point; engine errors are recorded in the result, never raised.
/// The record is appended to `cfg.store` (when set) before returning.
ResultRecord run_point(catalog::Family family, const Params& params, const RunConfig& cfg);

/// One record per grid point, in grid order. Points whose key is already in
/// the store are not recomputed. With Exec::Parallel up to `cfg.jobs` points
/// run concurrently, each in a forked child process. `limit` > 0 stops after
/// that many new points (used to emulate interrupted runs).
std::vector<ResultRecord> run_grid(const GridSpec& spec, const RunConfig& cfg, Exec exec = Exec::Serial,
                                   long limit = 0);

enum class ExportFormat { CSV, JSONL };
ExportFormat export_format_from_string(const std::string& s);

/// Records sorted by (family, numeric params, mode, engine); throws IOFailure
/// on an empty record set.
std::string export_records(std::vector<ResultRecord> records, ExportFormat format);
void export_records(const std::vector<ResultRecord>& records, ExportFormat format, const std::string& path);
std::vector<ResultRecord> import_jsonl(const std::string& path);

}  // namespace mub::harness
