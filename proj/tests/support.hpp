#pragma once

#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "flowtrap/geometry.hpp"
#include "flowtrap/oracle.hpp"

namespace flowtrap::testing {

inline double norm2(const Point& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline Point random_point(std::mt19937_64& rng, std::size_t d) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Point p(d);
  for (double& v : p) v = u(rng);
  return p;
}

/// f(x) = a . x + b, gradient a everywhere.
inline FunctionPtr linear(Point a, double b = 0.0) {
  const std::size_t d = a.size();
  return std::make_shared<CallableFunction>(
      "linear", d, 1.0,
      [a, b](std::span<const double> x) {
        double s = b;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
        return s;
      },
      [a](std::span<const double>) { return a; });
}

inline FunctionPtr constant(std::size_t d, double v) {
  return std::make_shared<CallableFunction>(
      "constant", d, 1.0, [v](std::span<const double>) { return v; },
      [d](std::span<const double>) { return Point(d, 0.0); });
}

/// Uniform random point of a face.
inline Point random_face_point(std::mt19937_64& rng, const Face& e) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Point p(e.dim());
  for (std::size_t i = 0; i < e.dim(); ++i) p[i] = e.lo[i] + u(rng) * (e.hi[i] - e.lo[i]);
  p[e.axis] = e.fixed_value;
  return p;
}

inline double nearest_distance(const Point& x, const std::vector<Point>& pts) {
  double best = INFINITY;
  for (const auto& p : pts) best = std::min(best, distance(x, p));
  return best;
}

}  // namespace flowtrap::testing
