#pragma once

#include <cstddef>
#include <optional>

#include "flowtrap/certificates.hpp"
#include "flowtrap/oracle.hpp"
#include "flowtrap/report.hpp"

namespace flowtrap {

/// Constant C in the high-dimensional step budget T_max = ceil(C d^2 ln(d/eps)).
/// Calibrated on the quadratic (see tests) and frozen.
inline constexpr double kGftStepConstant = 4.0;

/// Per-run constants of the trapping algorithm.
struct GftParams {
  double eps = 0.0;
  std::size_t d = 0;
  /// epsilon_t grows by the factor (1 + growth) on every edge-fixing shrink.
  double growth = 0.0;
  /// Steps after which the run is declared broken.
  std::size_t step_budget = 0;
};

/// d = 2: growth 1/(500 ln(1/eps)) and budget 10*ceil(200 ln(1/eps)).
/// d >= 3: growth 1/(2 T_max) and budget T_max.
GftParams gft_params(double eps, std::size_t d);

struct GftState {
  Domain domain;
  std::size_t k = 0;
  std::size_t step_index = 0;
};

/// All faces on the cube boundary, pivot at the centre (one value query).
GftState initial_gft_state(Oracle& oracle);

enum class TrapCase { KeepPivot, MoveIntoFarSection, MoveIntoNearSection };

struct TrapInfo {
  TrapCase which = TrapCase::KeepPivot;
  double delta = 0.0;
  std::size_t net_points = 0;
  /// Second-longest edge, the length that positions the two sections.
  double rho = 0.0;
};

/// Shrinks an all-P0 domain by probing two parallel sections of the longest
/// axis. The output carries P_eps on every face and epsilon_t = eps.
Domain parallel_trap(Oracle& oracle, const Domain& dom, double eps, TrapInfo* info = nullptr);

struct EdgeFixInfo {
  bool shrunk = false;
  std::size_t fixed_face = 0;  // index of the closest non-P0 face
  std::size_t violator = 0;    // 1..3 when shrunk
  double r = 0.0;
  double delta = 0.0;
};

/// Either upgrades the closest non-P0 face to P0 (same rectangle) or shrinks
/// to a sub-box around an earlier pivot at tolerance epsilon_t (1 + growth).
GftState edge_fixing(Oracle& oracle, const GftState& state, const GftParams& params, EdgeFixInfo* info = nullptr);

struct GftOptions {
  bool record_audit = true;
};

RunReport run_gft(Oracle& oracle, double eps, const GftOptions& options = {});

}  // namespace flowtrap
