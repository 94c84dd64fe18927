#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "flowtrap/geometry.hpp"

namespace flowtrap {

/// Objective on [0,1]^d with a certified Lipschitz constant for its gradient.
class SmoothFunction {
 public:
  virtual ~SmoothFunction() = default;

  virtual std::size_t dimension() const = 0;
  virtual double value(std::span<const double> x) const = 0;
  virtual bool has_gradient() const { return false; }
  /// Analytic gradient; only valid when has_gradient().
  virtual Point gradient(std::span<const double> x) const;
  virtual double smoothness_bound() const = 0;
  virtual std::string name() const = 0;
};

using FunctionPtr = std::shared_ptr<const SmoothFunction>;

/// Adapter for ad-hoc objectives (tests, callers of the C API).
class CallableFunction final : public SmoothFunction {
 public:
  using ValueFn = std::function<double(std::span<const double>)>;
  using GradFn = std::function<Point(std::span<const double>)>;

  CallableFunction(std::string name, std::size_t d, double smoothness, ValueFn value, GradFn grad = {})
      : name_(std::move(name)), d_(d), l_(smoothness), value_(std::move(value)), grad_(std::move(grad)) {}

  std::size_t dimension() const override { return d_; }
  double value(std::span<const double> x) const override { return value_(x); }
  bool has_gradient() const override { return static_cast<bool>(grad_); }
  Point gradient(std::span<const double> x) const override;
  double smoothness_bound() const override { return l_; }
  std::string name() const override { return name_; }

 private:
  std::string name_;
  std::size_t d_;
  double l_;
  ValueFn value_;
  GradFn grad_;
};

/// Scales values (and gradients) by 1/L so the result is 1-smooth.
/// An eps-stationary point of the result is (L*eps)-stationary for f.
FunctionPtr normalize(FunctionPtr f);

/// 0.5*||x - c||^2.
FunctionPtr make_quadratic(Point center);
/// Normalised sum of cosines with small integer frequency vectors.
FunctionPtr make_trig_mix(std::size_t d, std::uint64_t seed);
/// Normalised sum over coordinates of the double well (u^2 - 1/16)^2, u = t - 1/2.
FunctionPtr make_separable_wells(std::size_t d);

/// Catalog lookup: "quadratic", "trig_mix", "separable_wells".
FunctionPtr catalog(const std::string& name, std::size_t d, std::uint64_t seed);
const std::vector<std::string>& catalog_names();

/// Box-constrained projection of a raw gradient at x:
///   x^i = 0      -> min(0, df/dx^i)
///   x^i in (0,1) -> df/dx^i
///   x^i = 1      -> max(0, df/dx^i)
/// A component survives only if moving against it stays in the cube, so
/// ||g(x)|| is the steepest feasible descent rate.
Point project_gradient(std::span<const double> x, Point grad);

/// Central finite differences with step h; the stencil centre is pulled
/// inward so that every evaluation stays inside the cube.
Point finite_difference_gradient(const SmoothFunction& f, std::span<const double> x, double h = 1e-6);

/// Uncounted ||g(x)||, used to verify claims independently of any ledger.
double projected_gradient_norm(const SmoothFunction& f, std::span<const double> x);

struct LedgerSnapshot {
  std::uint64_t value_queries = 0;
  std::uint64_t gradient_queries = 0;
  std::uint64_t depth_rounds = 0;

  std::uint64_t total() const { return value_queries + gradient_queries; }
  bool operator==(const LedgerSnapshot&) const = default;
};

class QueryLedger {
 public:
  void add_values(std::uint64_t n) { values_.fetch_add(n, std::memory_order_relaxed); }
  void add_gradients(std::uint64_t n) { gradients_.fetch_add(n, std::memory_order_relaxed); }
  void add_round() { rounds_.fetch_add(1, std::memory_order_relaxed); }
  LedgerSnapshot snapshot() const;

 private:
  std::atomic<std::uint64_t> values_{0};
  std::atomic<std::uint64_t> gradients_{0};
  std::atomic<std::uint64_t> rounds_{0};
};

/// Counted black-box access. Every evaluation goes through the ledger; a
/// batch of k points costs k queries and one round of depth.
class Oracle {
 public:
  explicit Oracle(FunctionPtr f);
  Oracle(const Oracle&) = delete;
  Oracle& operator=(const Oracle&) = delete;

  std::size_t dim() const { return f_->dimension(); }
  const SmoothFunction& function() const { return *f_; }
  const FunctionPtr& function_ptr() const { return f_; }
  LedgerSnapshot ledger() const { return ledger_.snapshot(); }

  double query(std::span<const double> x);
  std::vector<double> batch_query(std::span<const Point> xs);

  /// One batch of n points generated on the fly: n queries, one round.
  /// fill(i, x) writes point i; use(i, value) receives results in index order.
  /// Points are materialised in chunks only.
  void batch_query_streamed(std::size_t n, const std::function<void(std::size_t, std::span<double>)>& fill,
                            const std::function<void(std::size_t, double)>& use);

  /// One gradient query if analytic, otherwise 2d value queries; one round.
  Point projected_gradient(std::span<const double> x);
  std::vector<Point> batch_projected_gradient(std::span<const Point> xs);
  /// Projected gradients at n generated points, one round; same chunking as
  /// batch_query_streamed.
  void batch_projected_gradient_streamed(std::size_t n,
                                         const std::function<void(std::size_t, std::span<double>)>& fill,
                                         const std::function<void(std::size_t, const Point&)>& use);

 private:
  void check_in_cube(std::span<const double> x) const;
  Point raw_gradient_uncounted(std::span<const double> x) const;
  void count_gradients(std::uint64_t n);

  FunctionPtr f_;
  QueryLedger ledger_;
};

}  // namespace flowtrap
