#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flowtrap/geometry.hpp"
#include "flowtrap/oracle.hpp"

namespace flowtrap {

enum class CertStatus { P0, Pc, BoundaryFace };

const char* to_string(CertStatus s);
std::optional<CertStatus> cert_status_from_string(const std::string& s);

/// Evidence that a face satisfies P_c relative to a pivot.
///
/// net_min is the minimum of f over a delta-net of a face containing this
/// one, so net_min - delta^2/8 lower-bounds min f over the face. The recorded
/// inequality is
///   P0: pivot_value < net_min - delta^2/8
///   Pc: pivot_value < net_min - delta^2/8 + level_c * distance
/// BoundaryFace needs no evidence.
struct FaceCertificate {
  CertStatus status = CertStatus::BoundaryFace;
  double level_c = 0.0;
  double delta = 0.0;
  double net_min = 0.0;
  Point net_argmin;
  double distance = 0.0;     // pivot-to-face distance for the certified pivot
  double pivot_value = 0.0;  // value at the certified pivot

  /// Replays the defining strict inequality from the stored numbers only.
  bool holds() const;
};

FaceCertificate boundary_certificate(double distance, double pivot_value);

/// Strict inequality pivot_value < net_min - delta^2/8 + c*distance, evaluated
/// exactly as the algorithms and the audit replay evaluate it.
bool pc_inequality(double pivot_value, double net_min, double delta, double c, double distance);

struct ProbeResult {
  double net_min = 0.0;
  Point argmin;
  std::size_t count = 0;
};

/// Largest total net a single probe may query before refusing with a budget error.
inline constexpr std::size_t kMaxProbePoints = 400'000'000;

/// Queries the delta-net of e in a single round.
ProbeResult probe_face(Oracle& oracle, const Face& e, double delta);
/// Queries the delta-nets of all faces together in a single round.
std::vector<ProbeResult> probe_faces(Oracle& oracle, std::span<const Face> es, double delta);

/// P0 if the inequality holds with c = 0, else Pc at level c if it holds
/// there, else nullopt. Faces on the cube boundary always certify.
std::optional<FaceCertificate> certify(const Face& e, std::span<const double> pivot, double pivot_value, double c,
                                       const ProbeResult& probe, double delta);

/// Transfers a certificate to a new pivot (or a sub-face of the original face).
/// P0 needs new_pivot_value <= old value; Pc needs
/// new_pivot_value + c*(old distance - new distance) <= old value. In both cases
/// the defining inequality must also hold at the new numbers.
std::optional<FaceCertificate> inherit(const FaceCertificate& cert, double new_pivot_value, double new_distance);

/// The certificate with its pivot fields replaced, if its inequality still
/// holds. The witness lower-bounds f on the face and on every sub-face, so
/// this is sound whenever the face is the same or smaller.
std::optional<FaceCertificate> recheck(const FaceCertificate& cert, double new_pivot_value, double new_distance);

/// inherit() if the transfer rule applies, else recheck().
std::optional<FaceCertificate> carry(const FaceCertificate& cert, double new_pivot_value, double new_distance);

/// P0 for the same witness at a new pivot, if its inequality holds there.
std::optional<FaceCertificate> promote_to_p0(const FaceCertificate& cert, double new_pivot_value, double new_distance);

/// (rectangle, pivot) pair with one certificate per face (indexed as faces()).
struct Domain {
  HyperRect rect;
  Point pivot;
  double pivot_value = 0.0;
  std::vector<FaceCertificate> certs;
  double epsilon_t = 0.0;

  std::size_t p0_count() const;
  bool all_p0() const { return p0_count() == certs.size(); }
  double max_level() const;
};

/// Every certificate holds and agrees with the domain's pivot and geometry.
bool domain_certified(const Domain& dom, std::string* why = nullptr);

/// The pivot has positive distance to every face not on the cube boundary.
bool pivot_not_on_new_boundary(const Domain& dom);

}  // namespace flowtrap
