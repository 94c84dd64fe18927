#include "flowtrap/cf.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "flowtrap/error.hpp"

namespace flowtrap {

namespace {

[[noreturn]] void invariant(const std::string& msg) { fail(ErrorCode::Invariant, msg); }

double norm(const Point& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Ceiling that ignores rounding noise in an exact-integer ratio.
std::size_t ceil_count(double x) { return static_cast<std::size_t>(std::ceil(x * (1.0 - 1e-12))); }

void check_eps(double eps) {
  if (!(eps > 0.0 && eps <= 0.1)) fail(ErrorCode::InvalidArgument, "cf: eps must lie in (0, 0.1]");
}

}  // namespace

double cf_delta(double eps, std::size_t d) {
  const double dd = static_cast<double>(d);
  return 2.0 * dd * std::pow(eps, 2.0 / (dd + 1.0));
}

std::size_t cf_descent_steps(double delta, double eps) {
  return ceil_count(delta * delta / (eps * eps));
}

std::size_t cf_outer_steps(double eps, std::size_t d) {
  const double dd = static_cast<double>(d);
  return ceil_count(dd * std::log2(std::sqrt(dd) / eps));
}

bool edge_ratios_ok(const HyperRect& r) {
  constexpr double tol = 1e-9;
  for (std::size_t i = 0; i < r.dim(); ++i) {
    for (std::size_t j = 0; j < r.dim(); ++j) {
      const double q = r.edge(i) / r.edge(j);
      const bool ok = std::abs(q - 1.0) <= tol || std::abs(q - 2.0) <= 2 * tol || std::abs(q - 0.5) <= tol;
      if (!ok) return false;
    }
  }
  return true;
}

CfState initial_cf_state(Oracle& oracle, double eps) {
  check_eps(eps);
  const std::size_t d = oracle.dim();
  HyperRect unit = HyperRect::unit(d);
  Point c = unit.center();
  const double v = oracle.query(c);
  std::vector<FaceCertificate> certs;
  for (const Face& f : faces(unit)) certs.push_back(boundary_certificate(dist_point_face(c, f), v));
  const double delta = cf_delta(eps, d);
  return CfState{Domain{unit, c, v, std::move(certs), 0.0}, delta, cf_descent_steps(delta, eps)};
}

Bisection bisection_step(Oracle& oracle, const CfState& s) {
  const HyperRect& H = s.domain.rect;
  const std::size_t axis = H.longest_axis();
  const double mid = 0.5 * (H.lo(axis) + H.hi(axis));
  HyperRect lower = H.with_axis(axis, H.lo(axis), mid);
  HyperRect upper = H.with_axis(axis, mid, H.hi(axis));
  Face shared = face_of(lower, axis, Side::Hi);
  const double delta = std::min(s.delta, shared.diam());
  ProbeResult probe = probe_face(oracle, shared, delta);

  const bool keep = s.domain.pivot_value <= probe.net_min;
  Point bar = keep ? s.domain.pivot : probe.argmin;
  const double bar_value = keep ? s.domain.pivot_value : probe.net_min;
  return Bisection{axis, std::move(lower), std::move(upper), std::move(shared), std::move(probe), delta,
                   std::move(bar), bar_value};
}

std::variant<CfState, FoundStationary> descent_step(Oracle& oracle, const Bisection& b, const CfState& s, double eps,
                                                    DescentStats* stats) {
  const std::size_t steps = cf_descent_steps(b.delta, eps);
  // Clamped steps can certify less than eps^2/2 each; keep going until the
  // certified decrease matches what `steps` unclamped steps would give.
  const double needed = static_cast<double>(steps) * eps * eps / 2.0;
  const std::size_t cap = 10 * steps + 10;

  Point x = b.pivot_bar;
  double decrease = 0.0;
  std::size_t it = 0;
  while (it < steps || decrease < needed) {
    if (it >= cap) invariant("cf: descent iteration cap exceeded");
    const Point g = oracle.projected_gradient(x);
    const double gn = norm(g);
    if (gn <= eps) {
      if (stats) *stats = {it, decrease};
      return FoundStationary{std::move(x), gn};
    }
    double moved2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double nx = std::clamp(x[i] - g[i], 0.0, 1.0);
      moved2 += (nx - x[i]) * (nx - x[i]);
      x[i] = nx;
    }
    decrease += 0.5 * moved2;
    ++it;
  }
  if (stats) *stats = {it, decrease};

  const double fx = oracle.query(x);
  const double mid = b.lower.hi(b.axis);
  const bool to_lower = x[b.axis] <= mid;
  const HyperRect& next = to_lower ? b.lower : b.upper;
  if (!s.domain.rect.contains(x, 0.0)) invariant("cf: descent left the current box");

  const auto fs = faces(next);
  const std::size_t shared_index = 2 * b.axis + (to_lower ? 1 : 0);
  std::vector<FaceCertificate> certs;
  certs.reserve(fs.size());
  for (std::size_t j = 0; j < fs.size(); ++j) {
    const double dist = dist_point_face(x, fs[j]);
    std::optional<FaceCertificate> c;
    if (j == shared_index) {
      c = certify(fs[j], x, fx, 0.0, b.probe, b.delta);
    } else {
      c = carry(s.domain.certs[j], fx, dist);
    }
    if (!c) invariant("cf: face " + std::to_string(j) + " lost P0 after descent");
    certs.push_back(std::move(*c));
  }
  return CfState{Domain{next, std::move(x), fx, std::move(certs), 0.0}, s.delta, steps};
}

RunReport run_cf(Oracle& oracle, double eps, const CfOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t d = oracle.dim();

  RunReport report;
  report.algorithm = "cf";
  report.function = oracle.function().name();
  report.d = d;
  report.eps = eps;
  report.claim_level = eps;

  CfState state = initial_cf_state(oracle, eps);
  if (options.record_audit) report.audit.push_back({0, "init", state.domain, 0.0, 0, oracle.ledger()});

  // Bisections needed for diam <= eps can exceed the outer-step formula by up to d.
  const std::size_t budget = cf_outer_steps(eps, d) + d;
  std::size_t t = 0;
  bool done = false;
  while (!done && state.domain.rect.diam() > eps) {
    if (t >= budget) invariant("cf: outer step budget exceeded");
    const Bisection b = bisection_step(oracle, state);
    auto out = descent_step(oracle, b, state, eps);
    ++t;
    if (auto* found = std::get_if<FoundStationary>(&out)) {
      report.point = found->point;
      report.early_exit = true;
      done = true;
      break;
    }
    state = std::move(std::get<CfState>(out));
    std::string why;
    if (!domain_certified(state.domain, &why)) invariant("cf: step " + std::to_string(t) + ": " + why);
    if (!edge_ratios_ok(state.domain.rect)) invariant("cf: edge ratio invariant broken");
    if (options.record_audit) {
      report.audit.push_back({t, "bisection_descent", state.domain, b.delta, 0, oracle.ledger()});
    }
  }
  if (!done) report.point = state.domain.pivot;
  report.steps = t;
  report.final_rect = state.domain.rect;
  report.trap_level = 0.0;
  finalize_report(report, oracle);
  report.wall_time_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace flowtrap
