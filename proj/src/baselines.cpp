#include "flowtrap/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "flowtrap/error.hpp"

namespace flowtrap {

namespace {

double norm(const Point& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::int64_t elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
}

void check_cap(double radius, std::size_t d, std::uint64_t cap, const char* who) {
  const std::uint64_t n = grid_size(radius, d);
  if (n > cap) {
    std::ostringstream os;
    os << who << ": grid of " << n << " points exceeds the cap of " << cap;
    fail(ErrorCode::Budget, os.str());
  }
}

}  // namespace

std::size_t grid_points_per_axis(double radius, std::size_t d) {
  if (!(radius > 0.0) || d == 0) fail(ErrorCode::InvalidArgument, "grid: radius and dimension must be positive");
  // Spacing h gives covering radius sqrt(d) h / 2.
  const double h_max = 2.0 * radius / std::sqrt(static_cast<double>(d));
  return static_cast<std::size_t>(std::max(1.0, std::ceil(1.0 / h_max))) + 1;
}

std::uint64_t grid_size(double radius, std::size_t d) {
  const double n = static_cast<double>(grid_points_per_axis(radius, d));
  const double total = std::pow(n, static_cast<double>(d));
  if (total >= static_cast<double>(std::numeric_limits<std::uint64_t>::max())) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(std::llround(total));
}

void cube_grid_point(std::size_t per_axis, std::size_t index, std::span<double> out) {
  for (double& v : out) {
    const std::size_t i = index % per_axis;
    index /= per_axis;
    v = i + 1 == per_axis ? 1.0 : static_cast<double>(i) / static_cast<double>(per_axis - 1);
  }
}

std::vector<Point> cube_grid(double radius, std::size_t d) {
  const std::size_t n = grid_points_per_axis(radius, d);
  const auto total = static_cast<std::size_t>(grid_size(radius, d));
  std::vector<Point> pts(total, Point(d));
  for (std::size_t k = 0; k < total; ++k) cube_grid_point(n, k, pts[k]);
  return pts;
}

RunReport grid_search(Oracle& oracle, double eps, std::uint64_t cap) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t d = oracle.dim();
  if (!(eps > 0.0)) fail(ErrorCode::InvalidArgument, "grid_search: eps must be positive");
  check_cap(eps, d, cap, "grid_search");

  const std::size_t per_axis = grid_points_per_axis(eps, d);
  std::size_t best = 0;
  double best_norm = INFINITY;
  oracle.batch_projected_gradient_streamed(
      static_cast<std::size_t>(grid_size(eps, d)),
      [&](std::size_t k, std::span<double> x) { cube_grid_point(per_axis, k, x); },
      [&](std::size_t k, const Point& g) {
        const double n = norm(g);
        if (n < best_norm) {
          best = k;
          best_norm = n;
        }
      });

  RunReport report;
  report.algorithm = "grid";
  report.function = oracle.function().name();
  report.d = d;
  report.eps = eps;
  report.claim_level = eps;
  report.point.resize(d);
  cube_grid_point(per_axis, best, report.point);
  report.steps = 1;
  finalize_report(report, oracle);
  report.wall_time_ms = elapsed_ms(t0);
  return report;
}

WarmStartConfig WarmStartConfig::with_default_delta(double eps, std::size_t d) {
  return {std::pow(eps, 4.0 / (static_cast<double>(d) + 2.0)), eps};
}

RunReport vavasis_warm_start(Oracle& oracle, const WarmStartConfig& cfg, std::uint64_t cap) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t d = oracle.dim();
  if (!(cfg.delta > 0.0 && cfg.delta <= 1.0)) fail(ErrorCode::InvalidArgument, "vavasis: Delta must lie in (0, 1]");
  if (!(cfg.eps > 0.0)) fail(ErrorCode::InvalidArgument, "vavasis: eps must be positive");

  const double radius = std::sqrt(cfg.delta);
  check_cap(radius, d, cap, "vavasis_warm_start");
  const std::size_t per_axis = grid_points_per_axis(radius, d);
  std::size_t best = 0;
  double best_value = INFINITY;
  oracle.batch_query_streamed(
      static_cast<std::size_t>(grid_size(radius, d)),
      [&](std::size_t k, std::span<double> x) { cube_grid_point(per_axis, k, x); },
      [&](std::size_t k, double v) {
        if (v < best_value) {
          best = k;
          best_value = v;
        }
      });

  const auto cap_iters = static_cast<std::size_t>(std::ceil(10.0 * cfg.delta / (cfg.eps * cfg.eps)));
  Point x(d);
  cube_grid_point(per_axis, best, x);
  std::size_t it = 0;
  for (;;) {
    const Point g = oracle.projected_gradient(x);
    if (norm(g) <= cfg.eps) break;
    if (it >= cap_iters) fail(ErrorCode::Invariant, "vavasis: descent iteration cap exceeded");
    for (std::size_t i = 0; i < d; ++i) x[i] = std::clamp(x[i] - g[i], 0.0, 1.0);
    ++it;
  }

  RunReport report;
  report.algorithm = "vavasis";
  report.function = oracle.function().name();
  report.d = d;
  report.eps = cfg.eps;
  report.claim_level = cfg.eps;
  report.point = std::move(x);
  report.steps = it;
  finalize_report(report, oracle);
  report.wall_time_ms = elapsed_ms(t0);
  return report;
}

}  // namespace flowtrap
