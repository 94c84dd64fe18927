#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flowtrap/baselines.hpp"
#include "flowtrap/report.hpp"

namespace flowtrap {

enum class Algorithm { Gft, Cf, Vavasis, Grid };

const char* to_string(Algorithm a);
std::optional<Algorithm> algorithm_from_string(const std::string& s);

struct RunOptions {
  /// Warm-start level for vavasis; default eps^{4/(d+2)}.
  std::optional<double> vavasis_delta;
  bool record_audit = false;
  std::uint64_t grid_cap = kDefaultGridCap;
};

RunReport run_algorithm(Algorithm algo, Oracle& oracle, double eps, const RunOptions& options = {});

/// Builds the catalog function and a fresh oracle, runs, and verifies the
/// claim outside the ledger.
RunReport run_once(Algorithm algo, const std::string& function, std::size_t d, double eps, std::uint64_t seed,
                   const RunOptions& options = {});

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares of log(queries) against log(1/eps).
LineFit fit_loglog(std::span<const double> eps, std::span<const double> queries);

enum class OutputFormat { Csv, Json };

struct SweepPlan {
  std::vector<Algorithm> algorithms;
  std::vector<double> eps;  // strictly decreasing
  std::vector<std::size_t> dims;
  std::vector<std::string> functions;
  std::uint64_t seed = 0;
  std::string out_path;  // empty: stdout
  OutputFormat format = OutputFormat::Csv;
};

/// Throws InvalidArgument on empty lists, non-decreasing eps, or unknown names.
void validate(const SweepPlan& plan);

struct RunRow {
  Algorithm algorithm = Algorithm::Gft;
  std::string function;
  std::size_t d = 0;
  double eps = 0.0;
  std::optional<RunReport> report;  // empty when the run raised
  std::string error;

  bool verified() const { return report && report->verified; }
};

struct SeriesFit {
  Algorithm algorithm = Algorithm::Gft;
  std::string function;
  std::size_t d = 0;
  double exponent = 0.0;  // NaN when fewer than two usable runs
  std::size_t points = 0;
  bool flagged = false;
  std::string note;
};

struct SweepResult {
  std::vector<RunRow> rows;
  std::vector<SeriesFit> fits;

  bool all_verified() const;
};

SweepResult sweep_and_fit(const SweepPlan& plan, const RunOptions& options = {});

/// Fixed columns: algo,fn,d,eps,queries_value,queries_grad,depth,steps,proj_grad_norm,wall_ms.
/// Fits follow as comment rows starting with '#'.
std::string to_csv(const SweepResult& result);
/// {"schema_version": 1, "runs": [...], "fits": [...]}.
std::string to_json(const SweepResult& result);

inline constexpr int kJsonSchemaVersion = 1;

}  // namespace flowtrap
