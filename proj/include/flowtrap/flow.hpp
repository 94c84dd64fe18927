#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flowtrap/geometry.hpp"
#include "flowtrap/oracle.hpp"

namespace flowtrap {

struct FlowSample {
  double t = 0.0;
  Point x;
  double grad_norm = 0.0;
};

enum class FlowExit { ReachedStationary, ExitedRect, TimeCap, Stalled };

const char* to_string(FlowExit e);

struct FlowTrace {
  std::vector<FlowSample> samples;
  FlowExit exit = FlowExit::TimeCap;
  /// ||g|| at the last sample (the level reached for ReachedStationary).
  double level = 0.0;
  /// Face index (2*axis + side) crossed for ExitedRect.
  std::optional<std::size_t> exit_face;
};

/// min(1e-3, eps/10).
double default_flow_step(double eps);

/// RK4 on dx/dt = -g(x)/||g(x)||, clamping every stage to the cube. The step
/// halves when ||g|| changes by more than 10% across a step and grows back
/// (up to `step`) when it changes by less than 2%. Uses the function directly;
/// nothing is counted.
FlowTrace integrate_flow(const SmoothFunction& f, const Point& start, const HyperRect& rect, double c, double step,
                         double time_cap);

/// t,x0,...,x{d-1},grad_norm with a header row.
std::string trace_to_csv(const FlowTrace& trace);

}  // namespace flowtrap
