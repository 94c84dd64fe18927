#pragma once

#include <cstddef>
#include <variant>

#include "flowtrap/certificates.hpp"
#include "flowtrap/oracle.hpp"
#include "flowtrap/report.hpp"

namespace flowtrap {

/// delta = 2d eps^{2/(d+1)}.
double cf_delta(double eps, std::size_t d);
/// ceil(delta^2 / eps^2).
std::size_t cf_descent_steps(double delta, double eps);
/// ceil(d log2(sqrt(d)/eps)).
std::size_t cf_outer_steps(double eps, std::size_t d);

struct CfState {
  Domain domain;  // P0 on every face; epsilon_t unused (0)
  double delta = 0.0;
  std::size_t descent_steps = 0;
};

CfState initial_cf_state(Oracle& oracle, double eps);

/// Edge lengths pairwise in ratio 1/2, 1 or 2.
bool edge_ratios_ok(const HyperRect& r);

struct Bisection {
  std::size_t axis = 0;
  HyperRect lower;  // the half with the smaller coordinates on `axis`
  HyperRect upper;
  Face shared;
  ProbeResult probe;
  double delta = 0.0;  // net parameter actually used (clamped to the face diameter)
  Point pivot_bar;
  double pivot_bar_value = 0.0;
};

/// Midpoint split of a longest axis (ties: lowest index) plus a net probe of
/// the shared face. pivot_bar is the better of the pivot and the net argmin.
Bisection bisection_step(Oracle& oracle, const CfState& s);

struct FoundStationary {
  Point point;
  double grad_norm = 0.0;
};

struct DescentStats {
  std::size_t iterations = 0;
  double certified_decrease = 0.0;
};

/// Projected gradient descent from pivot_bar (unit step, clamped to the cube).
/// Returns the next state, or an eps-stationary iterate found on the way.
std::variant<CfState, FoundStationary> descent_step(Oracle& oracle, const Bisection& b, const CfState& s, double eps,
                                                    DescentStats* stats = nullptr);

struct CfOptions {
  bool record_audit = true;
};

RunReport run_cf(Oracle& oracle, double eps, const CfOptions& options = {});

}  // namespace flowtrap
