#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "flowtrap/oracle.hpp"
#include "flowtrap/report.hpp"

namespace flowtrap {

inline constexpr std::uint64_t kDefaultGridCap = 50'000'000;

/// Points per axis of a regular grid on [0,1]^d (endpoints included) whose
/// covering radius is at most `radius`.
std::size_t grid_points_per_axis(double radius, std::size_t d);
/// Total size of that grid, saturating at UINT64_MAX.
std::uint64_t grid_size(double radius, std::size_t d);
std::vector<Point> cube_grid(double radius, std::size_t d);
/// Point `index` of cube_grid(radius, d) (axis 0 varies fastest).
void cube_grid_point(std::size_t per_axis, std::size_t index, std::span<double> out);

/// Projected gradients at every point of an eps-covering grid, one batch.
/// Refuses grids larger than `cap`.
RunReport grid_search(Oracle& oracle, double eps, std::uint64_t cap = kDefaultGridCap);

struct WarmStartConfig {
  double delta = 0.0;  // warm-start level Delta in (0, 1]
  double eps = 0.0;

  /// Delta = eps^{4/(d+2)}.
  static WarmStartConfig with_default_delta(double eps, std::size_t d);
};

/// Best value on a sqrt(Delta)-covering grid, then unit-step projected
/// gradient descent until ||g|| <= eps.
RunReport vavasis_warm_start(Oracle& oracle, const WarmStartConfig& cfg, std::uint64_t cap = kDefaultGridCap);

}  // namespace flowtrap
