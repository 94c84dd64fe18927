#include "flowtrap/gft.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "flowtrap/audit.hpp"
#include "flowtrap/error.hpp"

namespace flowtrap {

namespace {

[[noreturn]] void invariant(const std::string& msg) { fail(ErrorCode::Invariant, msg); }

double second_longest_edge(const HyperRect& r) {
  std::vector<double> e(r.dim());
  for (std::size_t i = 0; i < r.dim(); ++i) e[i] = r.edge(i);
  std::sort(e.begin(), e.end(), std::greater<>());
  return e.size() > 1 ? e[1] : e[0];
}

}  // namespace

GftParams gft_params(double eps, std::size_t d) {
  if (!(eps > 0.0 && eps <= 0.1)) fail(ErrorCode::InvalidArgument, "gft: eps must lie in (0, 0.1]");
  if (d == 0) fail(ErrorCode::InvalidArgument, "gft: dimension must be at least 1");
  GftParams p;
  p.eps = eps;
  p.d = d;
  const double log_inv = std::log(1.0 / eps);
  if (d <= 2) {
    p.growth = 1.0 / (500.0 * log_inv);
    p.step_budget = 10 * static_cast<std::size_t>(std::ceil(200.0 * log_inv));
  } else {
    const double dd = static_cast<double>(d);
    const auto t_max = static_cast<std::size_t>(std::ceil(kGftStepConstant * dd * dd * std::log(dd / eps)));
    p.growth = 1.0 / (2.0 * static_cast<double>(t_max));
    p.step_budget = t_max;
  }
  return p;
}

GftState initial_gft_state(Oracle& oracle) {
  const std::size_t d = oracle.dim();
  HyperRect unit = HyperRect::unit(d);
  Point c = unit.center();
  const double v = oracle.query(c);
  std::vector<FaceCertificate> certs;
  for (const Face& f : faces(unit)) certs.push_back(boundary_certificate(dist_point_face(c, f), v));
  GftState s{Domain{unit, c, v, std::move(certs), 0.0}, 2 * d, 0};
  return s;
}

Domain parallel_trap(Oracle& oracle, const Domain& dom, double eps, TrapInfo* info) {
  const HyperRect& R = dom.rect;
  if (!dom.all_p0()) invariant("parallel_trap: some face lacks P0");
  if (R.aspect_ratio() > 3.0 + kGeomTol) invariant("parallel_trap: aspect ratio above 3");

  const double rho = second_longest_edge(R);
  const Canonicalized cz = canonicalize(R, dom.pivot, 0.5 * rho);
  const CanonicalFrame& frame = cz.frame;
  const std::size_t lead = frame.original_axis(0);
  const bool reflected = frame.reflected();

  const double near_cut = frame.coord_to_original(0, rho / 6.0);
  const double far_cut = frame.coord_to_original(0, rho / 3.0);
  const std::vector<Face> sections{section(R, lead, near_cut), section(R, lead, far_cut)};
  const double delta = std::sqrt(rho * eps);
  const auto probes = probe_faces(oracle, sections, delta);

  // Ties go to the near section.
  const bool best_in_far = probes[1].net_min < probes[0].net_min;
  const ProbeResult& best = best_in_far ? probes[1] : probes[0];

  TrapCase which;
  Point pivot;
  double value;
  double cut;
  bool keep_far_part;  // canonical [cut, s] rather than [0, cut]
  std::size_t probe_index;
  if (dom.pivot_value <= best.net_min) {
    which = TrapCase::KeepPivot;
    pivot = dom.pivot;
    value = dom.pivot_value;
    cut = far_cut;
    keep_far_part = true;
    probe_index = 1;
  } else if (best_in_far) {
    which = TrapCase::MoveIntoFarSection;
    pivot = best.argmin;
    value = best.net_min;
    cut = near_cut;
    keep_far_part = true;
    probe_index = 0;
  } else {
    which = TrapCase::MoveIntoNearSection;
    pivot = best.argmin;
    value = best.net_min;
    cut = far_cut;
    keep_far_part = false;
    probe_index = 1;
  }

  // Canonical [cut, s] is the original side away from the canonical origin.
  const bool keep_hi_side = keep_far_part != reflected;
  const HyperRect out_rect = keep_hi_side ? R.with_axis(lead, cut, R.hi(lead)) : R.with_axis(lead, R.lo(lead), cut);
  const std::size_t new_face = 2 * lead + (keep_hi_side ? 0 : 1);

  const auto fs = faces(out_rect);
  std::vector<FaceCertificate> certs;
  certs.reserve(fs.size());
  for (std::size_t j = 0; j < fs.size(); ++j) {
    const double dist = dist_point_face(pivot, fs[j]);
    std::optional<FaceCertificate> c;
    if (j == new_face) {
      c = certify(fs[j], pivot, value, eps, probes[probe_index], delta);
    } else {
      c = carry(dom.certs[j], value, dist);
    }
    if (!c) {
      std::ostringstream os;
      os << "parallel_trap: face " << j << " could not be certified";
      invariant(os.str());
    }
    certs.push_back(std::move(*c));
  }

  if (info) {
    info->which = which;
    info->delta = delta;
    info->net_points = probes[0].count + probes[1].count;
    info->rho = rho;
  }
  return Domain{out_rect, std::move(pivot), value, std::move(certs), eps};
}

GftState edge_fixing(Oracle& oracle, const GftState& state, const GftParams& params, EdgeFixInfo* info) {
  const Domain& dom = state.domain;
  const HyperRect& R = dom.rect;
  if (dom.all_p0()) fail(ErrorCode::InvalidArgument, "edge_fixing: every face already has P0");

  std::size_t target = dom.certs.size();
  for (std::size_t j = 0; j < dom.certs.size(); ++j) {
    if (dom.certs[j].status != CertStatus::Pc) continue;
    if (target == dom.certs.size() || dom.certs[j].distance < dom.certs[target].distance) target = j;
  }
  const double r = dom.certs[target].distance;
  if (!(r > 0.0)) invariant("edge_fixing: pivot lies on a face lacking P0");

  const double eps_t = dom.epsilon_t;
  const double delta = std::sqrt(eps_t * r * params.growth);
  if (info) {
    info->fixed_face = target;
    info->r = r;
    info->delta = delta;
    info->shrunk = false;
  }

  Point x_prev = dom.pivot;
  double f_prev = dom.pivot_value;
  for (std::size_t i = 1; i <= 3; ++i) {
    const HyperRect Ri = R.intersect_box(x_prev, r / 3.0);
    const auto fi = faces(Ri);
    const auto probes = probe_faces(oracle, fi, delta);
    std::size_t best = 0;
    for (std::size_t j = 1; j < probes.size(); ++j) {
      if (probes[j].net_min < probes[best].net_min) best = j;
    }

    if (probes[best].net_min <= f_prev - eps_t * r / 3.0) {
      x_prev = probes[best].argmin;
      f_prev = probes[best].net_min;
      continue;
    }

    // Shrink to (R_i, x_{i-1}) at the slightly weaker level.
    const double c_new = eps_t * (1.0 + params.growth);
    std::vector<FaceCertificate> certs;
    certs.reserve(fi.size());
    for (std::size_t j = 0; j < fi.size(); ++j) {
      const double dist = dist_point_face(x_prev, fi[j]);
      if (fi[j].on_unit_cube_boundary) {
        certs.push_back(boundary_certificate(dist, f_prev));
        continue;
      }
      const auto fresh = certify(fi[j], x_prev, f_prev, c_new, probes[j], delta);
      std::optional<FaceCertificate> parent;
      const bool shared_with_parent = fi[j].fixed_value == (j % 2 == 0 ? R.lo(j / 2) : R.hi(j / 2));
      if (shared_with_parent) parent = carry(dom.certs[j], f_prev, dist);

      auto is_p0 = [](const std::optional<FaceCertificate>& c) {
        return c && c->status != CertStatus::Pc;
      };
      if (is_p0(fresh)) {
        certs.push_back(*fresh);
      } else if (is_p0(parent)) {
        certs.push_back(*parent);
      } else if (fresh) {
        certs.push_back(*fresh);
      } else if (parent) {
        certs.push_back(*parent);
      } else {
        std::ostringstream os;
        os << "edge_fixing: face " << j << " of the shrunk box could not be certified (i = " << i << ")";
        invariant(os.str());
      }
    }
    if (info) {
      info->shrunk = true;
      info->violator = i;
    }
    return GftState{Domain{Ri, std::move(x_prev), f_prev, std::move(certs), c_new}, 0, state.step_index + 1};
  }

  // All three improvements held: the target face becomes P0, the rest carry over.
  const auto fs = faces(R);
  std::vector<FaceCertificate> certs;
  certs.reserve(fs.size());
  for (std::size_t j = 0; j < fs.size(); ++j) {
    const double dist = dist_point_face(x_prev, fs[j]);
    auto c = j == target ? promote_to_p0(dom.certs[j], f_prev, dist) : carry(dom.certs[j], f_prev, dist);
    if (!c) {
      std::ostringstream os;
      os << "edge_fixing: face " << j << " lost its certificate after three improvements";
      invariant(os.str());
    }
    certs.push_back(std::move(*c));
  }
  return GftState{Domain{R, std::move(x_prev), f_prev, std::move(certs), eps_t}, state.k + 1,
                  state.step_index + 1};
}

RunReport run_gft(Oracle& oracle, double eps, const GftOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t d = oracle.dim();
  const GftParams params = gft_params(eps, d);

  RunReport report;
  report.algorithm = "gft";
  report.function = oracle.function().name();
  report.d = d;
  report.eps = eps;
  report.claim_level = 4.0 * eps;

  GftState state = initial_gft_state(oracle);
  state.domain.epsilon_t = eps;
  StepRecord last{0, "init", state.domain, 0.0, state.k, oracle.ledger()};
  if (options.record_audit) report.audit.push_back(last);

  while (state.domain.rect.diam() > 2.0 * eps) {
    if (state.step_index >= params.step_budget) {
      invariant("gft: step budget " + std::to_string(params.step_budget) + " exceeded; last record: " +
                audit_line(last));
    }
    std::string sub;
    double delta = 0.0;
    if (state.domain.all_p0()) {
      TrapInfo info;
      Domain next = parallel_trap(oracle, state.domain, eps, &info);
      // The new face is certified at eps; the running level only ever grows.
      next.epsilon_t = state.domain.epsilon_t;
      state = GftState{std::move(next), 0, state.step_index + 1};
      sub = "parallel_trap";
      delta = info.delta;
    } else {
      EdgeFixInfo info;
      state = edge_fixing(oracle, state, params, &info);
      sub = info.shrunk ? "edge_fixing_shrink" : "edge_fixing_fix";
      delta = info.delta;
    }

    last = StepRecord{state.step_index, sub, state.domain, delta, state.k, oracle.ledger()};
    std::string why;
    if (!domain_certified(state.domain, &why)) invariant("gft: step " + std::to_string(state.step_index) + ": " + why);
    if (!pivot_not_on_new_boundary(state.domain)) {
      invariant("gft: pivot on an interior face; record: " + audit_line(last));
    }
    if (state.domain.epsilon_t > 2.0 * eps) invariant("gft: tolerance level exceeded 2 eps");
    if (options.record_audit) report.audit.push_back(last);
  }

  report.point = state.domain.pivot;
  report.steps = state.step_index;
  report.final_rect = state.domain.rect;
  report.trap_level = state.domain.epsilon_t;
  finalize_report(report, oracle);
  report.wall_time_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace flowtrap
