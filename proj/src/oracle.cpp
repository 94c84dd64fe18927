#include "flowtrap/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "flowtrap/error.hpp"

namespace flowtrap {

Point SmoothFunction::gradient(std::span<const double>) const {
  fail(ErrorCode::InvalidArgument, "function '" + name() + "' has no analytic gradient");
}

Point CallableFunction::gradient(std::span<const double> x) const {
  if (!grad_) return SmoothFunction::gradient(x);
  return grad_(x);
}

namespace {

class ScaledFunction final : public SmoothFunction {
 public:
  ScaledFunction(FunctionPtr inner, double scale) : inner_(std::move(inner)), scale_(scale) {}

  std::size_t dimension() const override { return inner_->dimension(); }
  double value(std::span<const double> x) const override { return scale_ * inner_->value(x); }
  bool has_gradient() const override { return inner_->has_gradient(); }
  Point gradient(std::span<const double> x) const override {
    Point g = inner_->gradient(x);
    for (double& v : g) v *= scale_;
    return g;
  }
  double smoothness_bound() const override { return 1.0; }
  std::string name() const override { return inner_->name(); }

 private:
  FunctionPtr inner_;
  double scale_;
};

// Sequential below this size; the work per point is tiny.
constexpr std::size_t kParallelThreshold = 4096;

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const unsigned hw = std::thread::hardware_concurrency();
  if (n < kParallelThreshold || hw <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(hw, 16);
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
}

}  // namespace

FunctionPtr normalize(FunctionPtr f) {
  const double l = f->smoothness_bound();
  if (!std::isfinite(l) || !(l > 0.0)) {
    fail(ErrorCode::InvalidArgument, "normalize: smoothness bound must be positive and finite");
  }
  if (l == 1.0) return f;
  return std::make_shared<ScaledFunction>(std::move(f), 1.0 / l);
}

Point project_gradient(std::span<const double> x, Point grad) {
  for (std::size_t i = 0; i < grad.size(); ++i) {
    if (x[i] <= 0.0) {
      grad[i] = std::min(0.0, grad[i]);
    } else if (x[i] >= 1.0) {
      grad[i] = std::max(0.0, grad[i]);
    }
  }
  return grad;
}

Point finite_difference_gradient(const SmoothFunction& f, std::span<const double> x, double h) {
  Point g(x.size());
  Point probe(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double c = std::clamp(x[i], h, 1.0 - h);
    probe[i] = c + h;
    const double up = f.value(probe);
    probe[i] = c - h;
    const double down = f.value(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

double projected_gradient_norm(const SmoothFunction& f, std::span<const double> x) {
  Point raw = f.has_gradient() ? f.gradient(x) : finite_difference_gradient(f, x);
  const Point g = project_gradient(x, std::move(raw));
  double s = 0.0;
  for (double v : g) s += v * v;
  return std::sqrt(s);
}

LedgerSnapshot QueryLedger::snapshot() const {
  return {values_.load(std::memory_order_relaxed), gradients_.load(std::memory_order_relaxed),
          rounds_.load(std::memory_order_relaxed)};
}

Oracle::Oracle(FunctionPtr f) : f_(std::move(f)) {
  if (!f_) fail(ErrorCode::InvalidArgument, "Oracle: null function");
}

void Oracle::check_in_cube(std::span<const double> x) const {
  if (x.size() != dim()) fail(ErrorCode::InvalidArgument, "query: dimension mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= 0.0 && x[i] <= 1.0)) {
      std::ostringstream os;
      os << "query: coordinate " << i << " = " << x[i] << " outside [0,1]";
      fail(ErrorCode::Domain, os.str());
    }
  }
}

double Oracle::query(std::span<const double> x) {
  check_in_cube(x);
  ledger_.add_values(1);
  ledger_.add_round();
  return f_->value(x);
}

std::vector<double> Oracle::batch_query(std::span<const Point> xs) {
  if (xs.empty()) fail(ErrorCode::InvalidArgument, "batch_query: empty batch");
  for (const Point& x : xs) check_in_cube(x);
  std::vector<double> out(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) { out[i] = f_->value(xs[i]); });
  ledger_.add_values(xs.size());
  ledger_.add_round();
  return out;
}

void Oracle::batch_query_streamed(std::size_t n, const std::function<void(std::size_t, std::span<double>)>& fill,
                                  const std::function<void(std::size_t, double)>& use) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "batch_query_streamed: empty batch");
  constexpr std::size_t kChunk = 1 << 16;
  const std::size_t d = dim();
  std::vector<double> buf(std::min(n, kChunk) * d);
  std::vector<double> vals(std::min(n, kChunk));
  for (std::size_t begin = 0; begin < n; begin += kChunk) {
    const std::size_t m = std::min(kChunk, n - begin);
    for (std::size_t i = 0; i < m; ++i) {
      std::span<double> x(buf.data() + i * d, d);
      fill(begin + i, x);
      check_in_cube(x);
    }
    parallel_for(m, [&](std::size_t i) { vals[i] = f_->value(std::span<const double>(buf.data() + i * d, d)); });
    for (std::size_t i = 0; i < m; ++i) use(begin + i, vals[i]);
  }
  ledger_.add_values(n);
  ledger_.add_round();
}

Point Oracle::raw_gradient_uncounted(std::span<const double> x) const {
  return f_->has_gradient() ? f_->gradient(x) : finite_difference_gradient(*f_, x);
}

void Oracle::count_gradients(std::uint64_t n) {
  if (f_->has_gradient()) {
    ledger_.add_gradients(n);
  } else {
    ledger_.add_values(2 * dim() * n);
  }
}

Point Oracle::projected_gradient(std::span<const double> x) {
  check_in_cube(x);
  count_gradients(1);
  ledger_.add_round();
  return project_gradient(x, raw_gradient_uncounted(x));
}

std::vector<Point> Oracle::batch_projected_gradient(std::span<const Point> xs) {
  if (xs.empty()) fail(ErrorCode::InvalidArgument, "batch_projected_gradient: empty batch");
  for (const Point& x : xs) check_in_cube(x);
  std::vector<Point> out(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) { out[i] = project_gradient(xs[i], raw_gradient_uncounted(xs[i])); });
  count_gradients(xs.size());
  ledger_.add_round();
  return out;
}

void Oracle::batch_projected_gradient_streamed(std::size_t n,
                                               const std::function<void(std::size_t, std::span<double>)>& fill,
                                               const std::function<void(std::size_t, const Point&)>& use) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "batch_projected_gradient_streamed: empty batch");
  constexpr std::size_t kChunk = 1 << 16;
  const std::size_t d = dim();
  std::vector<double> buf(std::min(n, kChunk) * d);
  std::vector<Point> grads(std::min(n, kChunk));
  for (std::size_t begin = 0; begin < n; begin += kChunk) {
    const std::size_t m = std::min(kChunk, n - begin);
    for (std::size_t i = 0; i < m; ++i) {
      std::span<double> x(buf.data() + i * d, d);
      fill(begin + i, x);
      check_in_cube(x);
    }
    parallel_for(m, [&](std::size_t i) {
      const std::span<const double> x(buf.data() + i * d, d);
      grads[i] = project_gradient(x, raw_gradient_uncounted(x));
    });
    for (std::size_t i = 0; i < m; ++i) use(begin + i, grads[i]);
  }
  count_gradients(n);
  ledger_.add_round();
}

}  // namespace flowtrap
