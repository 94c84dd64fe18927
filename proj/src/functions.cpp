#include <cmath>
#include <numbers>
#include <random>

#include "flowtrap/error.hpp"
#include "flowtrap/oracle.hpp"

namespace flowtrap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

class Quadratic final : public SmoothFunction {
 public:
  explicit Quadratic(Point c) : c_(std::move(c)) {}

  std::size_t dimension() const override { return c_.size(); }
  double value(std::span<const double> x) const override {
    double s = 0.0;
    for (std::size_t i = 0; i < c_.size(); ++i) s += (x[i] - c_[i]) * (x[i] - c_[i]);
    return 0.5 * s;
  }
  bool has_gradient() const override { return true; }
  Point gradient(std::span<const double> x) const override {
    Point g(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) g[i] = x[i] - c_[i];
    return g;
  }
  double smoothness_bound() const override { return 1.0; }
  std::string name() const override { return "quadratic"; }

 private:
  Point c_;
};

struct CosineTerm {
  double amplitude;
  std::vector<double> freq;
  double phase;
};

// sum_j a_j cos(2 pi k_j.x + phi_j); Hessian norm <= sum_j a_j (2 pi)^2 |k_j|^2.
class TrigMix final : public SmoothFunction {
 public:
  TrigMix(std::size_t d, std::vector<CosineTerm> terms) : d_(d), terms_(std::move(terms)) {
    for (const auto& t : terms_) {
      double k2 = 0.0;
      for (double k : t.freq) k2 += k * k;
      bound_ += std::abs(t.amplitude) * kTwoPi * kTwoPi * k2;
    }
  }

  std::size_t dimension() const override { return d_; }
  double value(std::span<const double> x) const override {
    double s = 0.0;
    for (const auto& t : terms_) s += t.amplitude * std::cos(kTwoPi * dot(t.freq, x) + t.phase);
    return s;
  }
  bool has_gradient() const override { return true; }
  Point gradient(std::span<const double> x) const override {
    Point g(d_, 0.0);
    for (const auto& t : terms_) {
      const double w = -t.amplitude * kTwoPi * std::sin(kTwoPi * dot(t.freq, x) + t.phase);
      for (std::size_t i = 0; i < d_; ++i) g[i] += w * t.freq[i];
    }
    return g;
  }
  double smoothness_bound() const override { return bound_; }
  std::string name() const override { return "trig_mix"; }

 private:
  static double dot(const std::vector<double>& k, std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) s += k[i] * x[i];
    return s;
  }

  std::size_t d_;
  std::vector<CosineTerm> terms_;
  double bound_ = 0.0;
};

// w(t) = (u^2 - 1/16)^2 with u = t - 1/2: minima at t = 1/4, 3/4, maximum at
// t = 1/2. w''(t) = 12u^2 - 1/4 ranges over [-1/4, 11/4] on [0,1].
class SeparableWells final : public SmoothFunction {
 public:
  explicit SeparableWells(std::size_t d) : d_(d) {}

  std::size_t dimension() const override { return d_; }
  double value(std::span<const double> x) const override {
    double s = 0.0;
    for (std::size_t i = 0; i < d_; ++i) {
      const double u = x[i] - 0.5;
      const double q = u * u - 1.0 / 16.0;
      s += q * q;
    }
    return s;
  }
  bool has_gradient() const override { return true; }
  Point gradient(std::span<const double> x) const override {
    Point g(d_);
    for (std::size_t i = 0; i < d_; ++i) {
      const double u = x[i] - 0.5;
      g[i] = 4.0 * u * (u * u - 1.0 / 16.0);
    }
    return g;
  }
  double smoothness_bound() const override { return 2.75; }
  std::string name() const override { return "separable_wells"; }

 private:
  std::size_t d_;
};

void check_dim(std::size_t d) {
  if (d == 0) fail(ErrorCode::InvalidArgument, "dimension must be at least 1");
}

}  // namespace

FunctionPtr make_quadratic(Point center) {
  check_dim(center.size());
  return std::make_shared<Quadratic>(std::move(center));
}

FunctionPtr make_trig_mix(std::size_t d, std::uint64_t seed) {
  check_dim(d);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> freq(-1, 1);
  std::uniform_real_distribution<double> amp(0.5, 1.5);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);

  std::vector<CosineTerm> terms;
  const std::size_t m = d + 3;
  while (terms.size() < m) {
    CosineTerm t{amp(rng), std::vector<double>(d), phase(rng)};
    bool nonzero = false;
    for (double& k : t.freq) {
      k = freq(rng);
      nonzero = nonzero || k != 0.0;
    }
    if (nonzero) terms.push_back(std::move(t));
  }
  return normalize(std::make_shared<TrigMix>(d, std::move(terms)));
}

FunctionPtr make_separable_wells(std::size_t d) {
  check_dim(d);
  return normalize(std::make_shared<SeparableWells>(d));
}

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{"quadratic", "trig_mix", "separable_wells"};
  return names;
}

FunctionPtr catalog(const std::string& name, std::size_t d, std::uint64_t seed) {
  check_dim(d);
  if (name == "quadratic") {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.2, 0.8);
    Point c(d);
    for (double& v : c) v = u(rng);
    return make_quadratic(std::move(c));
  }
  if (name == "trig_mix") return make_trig_mix(d, seed);
  if (name == "separable_wells") return make_separable_wells(d);
  fail(ErrorCode::UnknownName, "unknown catalog function '" + name + "'");
}

}  // namespace flowtrap
