#pragma once

#include <string>

#include "flowtrap/report.hpp"

namespace flowtrap {

/// One JSON object per step (no trailing newline). Doubles are written with
/// round-trip precision so replay sees the same bits.
std::string audit_line(const StepRecord& rec);

StepRecord parse_audit_line(const std::string& line);

struct ReplayResult {
  bool ok = false;
  std::size_t faces_checked = 0;
  std::string message;
};

/// Recomputes face geometry and distances from the recorded rectangle and
/// pivot, then re-evaluates every certificate inequality from the stored
/// numbers. Also checks that the pivot is off every interior face.
ReplayResult replay_audit_line(const std::string& line);
ReplayResult replay_record(const StepRecord& rec);

}  // namespace flowtrap
