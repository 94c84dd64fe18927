#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flowtrap/certificates.hpp"
#include "flowtrap/geometry.hpp"
#include "flowtrap/oracle.hpp"

namespace flowtrap {

/// One algorithm step as written to the audit log.
struct StepRecord {
  std::size_t step = 0;
  std::string subroutine;
  Domain domain;
  double delta = 0.0;  // net parameter used by this step (0 if none)
  std::size_t k = 0;   // faces fixed to P0 since the last shrink
  LedgerSnapshot ledger;
};

struct RunReport {
  std::string algorithm;
  std::string function;
  std::size_t d = 0;
  double eps = 0.0;

  Point point;
  /// ||g(point)|| recomputed outside the ledger at exit.
  double proj_grad_norm = 0.0;
  /// Stationarity level the algorithm claims (4 eps for GFT, eps otherwise).
  double claim_level = 0.0;
  bool verified = false;

  std::uint64_t value_queries = 0;
  std::uint64_t gradient_queries = 0;
  std::uint64_t depth = 0;
  std::size_t steps = 0;
  std::int64_t wall_time_ms = 0;

  /// Final trapping domain for the domain-shrinking algorithms, and the
  /// certified level c of its P_c property.
  std::optional<HyperRect> final_rect;
  double trap_level = 0.0;
  /// True when CF stopped early on an eps-stationary descent iterate.
  bool early_exit = false;

  std::vector<StepRecord> audit;

  std::uint64_t total_queries() const { return value_queries + gradient_queries; }
};

/// Copies the ledger into the report and verifies the claim independently.
void finalize_report(RunReport& report, const Oracle& oracle);

}  // namespace flowtrap
