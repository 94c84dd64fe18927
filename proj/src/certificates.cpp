#include "flowtrap/certificates.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "flowtrap/error.hpp"

namespace flowtrap {

const char* to_string(CertStatus s) {
  switch (s) {
    case CertStatus::P0:
      return "P0";
    case CertStatus::Pc:
      return "Pc";
    case CertStatus::BoundaryFace:
      return "BoundaryFace";
  }
  return "?";
}

std::optional<CertStatus> cert_status_from_string(const std::string& s) {
  if (s == "P0") return CertStatus::P0;
  if (s == "Pc") return CertStatus::Pc;
  if (s == "BoundaryFace") return CertStatus::BoundaryFace;
  return std::nullopt;
}

bool pc_inequality(double pivot_value, double net_min, double delta, double c, double distance) {
  return pivot_value < net_min - delta * delta / 8.0 + c * distance;
}

bool FaceCertificate::holds() const {
  switch (status) {
    case CertStatus::BoundaryFace:
      return true;
    case CertStatus::P0:
      return pc_inequality(pivot_value, net_min, delta, 0.0, distance);
    case CertStatus::Pc:
      return pc_inequality(pivot_value, net_min, delta, level_c, distance);
  }
  return false;
}

FaceCertificate boundary_certificate(double distance, double pivot_value) {
  FaceCertificate c;
  c.status = CertStatus::BoundaryFace;
  c.distance = distance;
  c.pivot_value = pivot_value;
  return c;
}

std::vector<ProbeResult> probe_faces(Oracle& oracle, std::span<const Face> es, double delta) {
  if (es.empty()) fail(ErrorCode::InvalidArgument, "probe_faces: no faces");
  std::vector<std::vector<std::size_t>> divs;
  std::vector<std::size_t> offsets{0};
  for (const Face& e : es) {
    divs.push_back(net_divisions(e, delta));
    const std::size_t n = net_size(e, delta);
    if (n > kMaxProbePoints || offsets.back() > kMaxProbePoints - n) {
      fail(ErrorCode::Budget, "probe_faces: net larger than " + std::to_string(kMaxProbePoints) + " points");
    }
    offsets.push_back(offsets.back() + n);
  }

  auto face_of_index = [&](std::size_t i) {
    return static_cast<std::size_t>(std::upper_bound(offsets.begin(), offsets.end(), i) - offsets.begin()) - 1;
  };
  std::vector<double> best(es.size(), std::numeric_limits<double>::infinity());
  std::vector<std::size_t> best_at(es.size(), 0);
  oracle.batch_query_streamed(
      offsets.back(),
      [&](std::size_t i, std::span<double> x) {
        const std::size_t f = face_of_index(i);
        net_point(es[f], divs[f], i - offsets[f], x);
      },
      [&](std::size_t i, double v) {
        const std::size_t f = face_of_index(i);
        // Strict comparison: the first net point attaining the minimum wins.
        if (i == offsets[f] || v < best[f]) {
          best[f] = v;
          best_at[f] = i - offsets[f];
        }
      });

  std::vector<ProbeResult> out(es.size());
  for (std::size_t f = 0; f < es.size(); ++f) {
    out[f].net_min = best[f];
    out[f].argmin.assign(es[f].dim(), 0.0);
    net_point(es[f], divs[f], best_at[f], out[f].argmin);
    out[f].count = offsets[f + 1] - offsets[f];
  }
  return out;
}

ProbeResult probe_face(Oracle& oracle, const Face& e, double delta) {
  return probe_faces(oracle, std::span<const Face>(&e, 1), delta).front();
}

std::optional<FaceCertificate> certify(const Face& e, std::span<const double> pivot, double pivot_value, double c,
                                       const ProbeResult& probe, double delta) {
  const double dist = dist_point_face(pivot, e);
  if (e.on_unit_cube_boundary) return boundary_certificate(dist, pivot_value);

  FaceCertificate cert;
  cert.delta = delta;
  cert.net_min = probe.net_min;
  cert.net_argmin = probe.argmin;
  cert.distance = dist;
  cert.pivot_value = pivot_value;
  if (pc_inequality(pivot_value, probe.net_min, delta, 0.0, dist)) {
    cert.status = CertStatus::P0;
    return cert;
  }
  if (pc_inequality(pivot_value, probe.net_min, delta, c, dist)) {
    cert.status = CertStatus::Pc;
    cert.level_c = c;
    return cert;
  }
  return std::nullopt;
}

std::optional<FaceCertificate> inherit(const FaceCertificate& cert, double new_pivot_value, double new_distance) {
  FaceCertificate out = cert;
  out.pivot_value = new_pivot_value;
  out.distance = new_distance;
  switch (cert.status) {
    case CertStatus::BoundaryFace:
      return out;
    case CertStatus::P0:
      if (!(new_pivot_value <= cert.pivot_value)) return std::nullopt;
      break;
    case CertStatus::Pc:
      if (!(new_pivot_value + cert.level_c * (cert.distance - new_distance) <= cert.pivot_value)) return std::nullopt;
      break;
  }
  if (!out.holds()) return std::nullopt;
  return out;
}

std::optional<FaceCertificate> recheck(const FaceCertificate& cert, double new_pivot_value, double new_distance) {
  FaceCertificate out = cert;
  out.pivot_value = new_pivot_value;
  out.distance = new_distance;
  if (!out.holds()) return std::nullopt;
  return out;
}

std::optional<FaceCertificate> carry(const FaceCertificate& cert, double new_pivot_value, double new_distance) {
  if (auto c = inherit(cert, new_pivot_value, new_distance)) return c;
  return recheck(cert, new_pivot_value, new_distance);
}

std::optional<FaceCertificate> promote_to_p0(const FaceCertificate& cert, double new_pivot_value,
                                             double new_distance) {
  if (cert.status == CertStatus::BoundaryFace) return inherit(cert, new_pivot_value, new_distance);
  FaceCertificate out = cert;
  out.status = CertStatus::P0;
  out.level_c = 0.0;
  out.pivot_value = new_pivot_value;
  out.distance = new_distance;
  if (!out.holds()) return std::nullopt;
  return out;
}

std::size_t Domain::p0_count() const {
  return static_cast<std::size_t>(std::count_if(certs.begin(), certs.end(), [](const FaceCertificate& c) {
    return c.status == CertStatus::P0 || c.status == CertStatus::BoundaryFace;
  }));
}

double Domain::max_level() const {
  double m = 0.0;
  for (const auto& c : certs) {
    if (c.status == CertStatus::Pc) m = std::max(m, c.level_c);
  }
  return m;
}

bool domain_certified(const Domain& dom, std::string* why) {
  auto reject = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  const auto fs = faces(dom.rect);
  if (dom.certs.size() != fs.size()) return reject("certificate count differs from face count");
  if (!dom.rect.contains(dom.pivot)) return reject("pivot outside rectangle");
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const FaceCertificate& c = dom.certs[i];
    std::ostringstream os;
    os << "face " << i << " (" << to_string(c.status) << "): ";
    if (c.pivot_value != dom.pivot_value) return reject(os.str() + "pivot value mismatch");
    if (c.distance != dist_point_face(dom.pivot, fs[i])) return reject(os.str() + "distance mismatch");
    if (c.status == CertStatus::BoundaryFace && !fs[i].on_unit_cube_boundary) {
      return reject(os.str() + "boundary status on an interior face");
    }
    if (c.status == CertStatus::Pc && c.level_c > dom.epsilon_t) return reject(os.str() + "level above epsilon_t");
    if (!c.holds()) return reject(os.str() + "inequality fails");
  }
  return true;
}

bool pivot_not_on_new_boundary(const Domain& dom) {
  for (const Face& f : faces(dom.rect)) {
    if (!f.on_unit_cube_boundary && !(dist_point_face(dom.pivot, f) > 0.0)) return false;
  }
  return true;
}

}  // namespace flowtrap
