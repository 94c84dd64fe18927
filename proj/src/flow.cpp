#include "flowtrap/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "flowtrap/error.hpp"

namespace flowtrap {

namespace {

constexpr double kGrowBelow = 0.02;
constexpr double kShrinkAbove = 0.10;
constexpr std::size_t kStallLimit = 1000;

struct FieldValue {
  Point dir;
  double grad_norm;
};

FieldValue field(const SmoothFunction& f, const Point& x) {
  Point raw = f.has_gradient() ? f.gradient(x) : finite_difference_gradient(f, x);
  Point g = project_gradient(x, std::move(raw));
  double n = 0.0;
  for (double v : g) n += v * v;
  n = std::sqrt(n);
  if (n > 0.0) {
    for (double& v : g) v = -v / n;
  }
  return {std::move(g), n};
}

Point clamped_step(const Point& x, const Point& dir, double h) {
  Point y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::clamp(x[i] + h * dir[i], 0.0, 1.0);
  return y;
}

Point rk4(const SmoothFunction& f, const Point& x, const Point& k1, double h) {
  const Point k2 = field(f, clamped_step(x, k1, h / 2)).dir;
  const Point k3 = field(f, clamped_step(x, k2, h / 2)).dir;
  const Point k4 = field(f, clamped_step(x, k3, h)).dir;
  Point dir(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) dir[i] = (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]) / 6.0;
  return clamped_step(x, dir, h);
}

std::size_t crossed_face(const HyperRect& r, const Point& x) {
  std::size_t face = 0;
  double worst = -1.0;
  for (std::size_t a = 0; a < r.dim(); ++a) {
    if (r.lo(a) - x[a] > worst) {
      worst = r.lo(a) - x[a];
      face = 2 * a;
    }
    if (x[a] - r.hi(a) > worst) {
      worst = x[a] - r.hi(a);
      face = 2 * a + 1;
    }
  }
  return face;
}

}  // namespace

const char* to_string(FlowExit e) {
  switch (e) {
    case FlowExit::ReachedStationary:
      return "ReachedStationary";
    case FlowExit::ExitedRect:
      return "ExitedRect";
    case FlowExit::TimeCap:
      return "TimeCap";
    case FlowExit::Stalled:
      return "Stalled";
  }
  return "?";
}

double default_flow_step(double eps) { return std::min(1e-3, eps / 10.0); }

FlowTrace integrate_flow(const SmoothFunction& f, const Point& start, const HyperRect& rect, double c, double step,
                         double time_cap) {
  if (!(step > 0.0)) fail(ErrorCode::InvalidArgument, "integrate_flow: step must be positive");
  if (!rect.contains(start)) fail(ErrorCode::InvalidArgument, "integrate_flow: start outside the rectangle");

  const double h_min = std::ldexp(step, -40);
  double h = step;
  FlowTrace trace;
  Point x = start;
  double t = 0.0;
  FieldValue here = field(f, x);
  trace.samples.push_back({t, x, here.grad_norm});
  std::size_t stalled = 0;

  for (;;) {
    trace.level = here.grad_norm;
    if (here.grad_norm <= c) {
      trace.exit = FlowExit::ReachedStationary;
      return trace;
    }
    if (t >= time_cap) {
      trace.exit = FlowExit::TimeCap;
      return trace;
    }

    Point next = rk4(f, x, here.dir, h);
    FieldValue there = field(f, next);
    const double change = std::abs(there.grad_norm - here.grad_norm) / here.grad_norm;
    if (change > kShrinkAbove && h > h_min) {
      h /= 2;
      continue;
    }

    double moved2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) moved2 += (next[i] - x[i]) * (next[i] - x[i]);
    t += h;
    x = std::move(next);
    here = std::move(there);
    trace.samples.push_back({t, x, here.grad_norm});

    if (!rect.contains(x)) {
      trace.level = here.grad_norm;
      trace.exit = FlowExit::ExitedRect;
      trace.exit_face = crossed_face(rect, x);
      return trace;
    }
    stalled = std::sqrt(moved2) < 0.5 * h ? stalled + 1 : 0;
    if (stalled >= kStallLimit) {
      trace.level = here.grad_norm;
      trace.exit = FlowExit::Stalled;
      return trace;
    }
    if (change < kGrowBelow && h < step) h = std::min(step, 2 * h);
  }
}

std::string trace_to_csv(const FlowTrace& trace) {
  std::ostringstream os;
  os.precision(17);
  const std::size_t d = trace.samples.empty() ? 0 : trace.samples.front().x.size();
  os << "t";
  for (std::size_t i = 0; i < d; ++i) os << ",x" << i;
  os << ",grad_norm\n";
  for (const auto& s : trace.samples) {
    os << s.t;
    for (double v : s.x) os << ',' << v;
    os << ',' << s.grad_norm << '\n';
  }
  return os.str();
}

}  // namespace flowtrap
