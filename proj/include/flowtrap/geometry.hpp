#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace flowtrap {

/// Coordinates in unit-cube units.
using Point = std::vector<double>;

/// Absolute tolerance for geometric predicates.
inline constexpr double kGeomTol = 1e-12;

/// Axis-aligned box [lo_0,hi_0] x ... x [lo_{d-1},hi_{d-1}] inside [0,1]^d.
/// Construction rejects zero-width edges and boxes leaving the cube.
class HyperRect {
 public:
  HyperRect(Point lo, Point hi);
  static HyperRect unit(std::size_t d);

  std::size_t dim() const { return lo_.size(); }
  const Point& lo() const { return lo_; }
  const Point& hi() const { return hi_; }
  double lo(std::size_t i) const { return lo_[i]; }
  double hi(std::size_t i) const { return hi_[i]; }
  double edge(std::size_t i) const { return hi_[i] - lo_[i]; }

  double diam() const;
  double vol() const;
  double aspect_ratio() const;
  std::size_t longest_axis() const;  // ties -> lowest index

  bool contains(std::span<const double> x, double tol = kGeomTol) const;
  Point center() const;

  /// Copy with axis `axis` restricted to [new_lo, new_hi].
  HyperRect with_axis(std::size_t axis, double new_lo, double new_hi) const;
  /// Intersection with the sup-norm ball of radius `radius` around `c`.
  HyperRect intersect_box(std::span<const double> c, double radius) const;

  bool operator==(const HyperRect&) const = default;

 private:
  Point lo_, hi_;
};

enum class Side { Lo = 0, Hi = 1 };

/// A face {x^axis = fixed_value} of a parent box. `lo`/`hi` hold the full
/// d-dimensional extent with lo[axis] == hi[axis] == fixed_value.
struct Face {
  std::size_t axis = 0;
  Side side = Side::Lo;
  double fixed_value = 0.0;
  Point lo, hi;
  bool on_unit_cube_boundary = false;

  std::size_t dim() const { return lo.size(); }
  /// Position of this face in faces(): 2*axis + side.
  std::size_t index() const { return 2 * axis + static_cast<std::size_t>(side); }
  double diam() const;
  bool contains(std::span<const double> x, double tol = kGeomTol) const;
};

/// The 2d faces of r in index order 2*axis + side.
std::vector<Face> faces(const HyperRect& r);
/// A single face of r.
Face face_of(const HyperRect& r, std::size_t axis, Side side);
/// Axis-normal section {x^axis = value} of r (value strictly inside the edge).
Face section(const HyperRect& r, std::size_t axis, double value);

double dist_point_face(std::span<const double> x, const Face& e);
double distance(std::span<const double> a, std::span<const double> b);

struct FaceNet {
  Face face;
  double delta = 0.0;
  std::vector<Point> points;
};

/// Regular grid on `e` containing every vertex of the face. Steps along each
/// free axis are at most delta/sqrt(d-1), so the covering radius is at most
/// delta/2 (and in particular at most delta). The same holds for the grid
/// restricted to every sub-face, which is what the delta^2/8 discretisation
/// bound needs.
FaceNet build_net(const Face& e, double delta);
/// Number of points build_net would produce, without materialising them.
std::size_t net_size(const Face& e, double delta);
/// Grid points per free axis used by build_net (1 for the fixed axis).
std::vector<std::size_t> net_divisions(const Face& e, double delta);
/// Point `index` of the net with the given divisions, in build_net order
/// (axis 0 varies fastest).
void net_point(const Face& e, const std::vector<std::size_t>& div, std::size_t index, std::span<double> out);

/// Axis permutation + reflection of the first canonical axis + translation
/// taking a box onto [0,l_0] x ... x [0,l_{d-1}], with the longest edge first.
class CanonicalFrame {
 public:
  CanonicalFrame(const HyperRect& r, std::vector<std::size_t> perm, bool reflect_first);

  std::size_t dim() const { return perm_.size(); }
  /// Original axis that canonical axis j comes from.
  std::size_t original_axis(std::size_t j) const { return perm_[j]; }
  const std::vector<std::size_t>& permutation() const { return perm_; }
  bool reflected() const { return reflect_first_; }

  Point to_canonical(std::span<const double> x) const;
  Point to_original(std::span<const double> y) const;
  /// Original coordinate along original_axis(j) for canonical value v.
  double coord_to_original(std::size_t j, double v) const;

  const HyperRect& canonical_rect() const { return canonical_; }
  const HyperRect& original_rect() const { return original_; }

 private:
  HyperRect original_;
  HyperRect canonical_;
  std::vector<std::size_t> perm_;
  bool reflect_first_;
};

struct Canonicalized {
  CanonicalFrame frame;
  HyperRect rect;  // canonical image of the input box
  Point point;     // canonical image of the input point
};

/// Longest axis first (ties: lowest index, others keep their order). The first
/// axis is reflected only if the pivot's first canonical coordinate would be
/// below `min_first_coord`; by default that threshold is half the shortest
/// edge. Throws if the aspect ratio exceeds 3.
Canonicalized canonicalize(const HyperRect& r, std::span<const double> x);
Canonicalized canonicalize(const HyperRect& r, std::span<const double> x, double min_first_coord);

}  // namespace flowtrap
