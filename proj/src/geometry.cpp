#include "flowtrap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "flowtrap/error.hpp"

namespace flowtrap {

HyperRect::HyperRect(Point lo, Point hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.empty() || lo_.size() != hi_.size()) {
    fail(ErrorCode::InvalidArgument, "HyperRect: lo/hi must be non-empty and of equal length");
  }
  for (std::size_t i = 0; i < lo_.size(); ++i) {
    if (!(lo_[i] < hi_[i]) || lo_[i] < -kGeomTol || hi_[i] > 1.0 + kGeomTol) {
      std::ostringstream os;
      os << "HyperRect: invalid edge " << i << " [" << lo_[i] << ", " << hi_[i] << "]";
      fail(ErrorCode::InvalidArgument, os.str());
    }
    lo_[i] = std::max(lo_[i], 0.0);
    hi_[i] = std::min(hi_[i], 1.0);
  }
}

HyperRect HyperRect::unit(std::size_t d) { return HyperRect(Point(d, 0.0), Point(d, 1.0)); }

double HyperRect::diam() const {
  double s = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) s += edge(i) * edge(i);
  return std::sqrt(s);
}

double HyperRect::vol() const {
  double v = 1.0;
  for (std::size_t i = 0; i < dim(); ++i) v *= edge(i);
  return v;
}

double HyperRect::aspect_ratio() const {
  double mx = edge(0), mn = edge(0);
  for (std::size_t i = 1; i < dim(); ++i) {
    mx = std::max(mx, edge(i));
    mn = std::min(mn, edge(i));
  }
  return mx / mn;
}

std::size_t HyperRect::longest_axis() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < dim(); ++i) {
    if (edge(i) > edge(best)) best = i;
  }
  return best;
}

bool HyperRect::contains(std::span<const double> x, double tol) const {
  if (x.size() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (x[i] < lo_[i] - tol || x[i] > hi_[i] + tol) return false;
  }
  return true;
}

Point HyperRect::center() const {
  Point c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = 0.5 * (lo_[i] + hi_[i]);
  return c;
}

HyperRect HyperRect::with_axis(std::size_t axis, double new_lo, double new_hi) const {
  Point lo = lo_, hi = hi_;
  lo[axis] = new_lo;
  hi[axis] = new_hi;
  return HyperRect(std::move(lo), std::move(hi));
}

HyperRect HyperRect::intersect_box(std::span<const double> c, double radius) const {
  Point lo(dim()), hi(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    lo[i] = std::max(lo_[i], c[i] - radius);
    hi[i] = std::min(hi_[i], c[i] + radius);
  }
  return HyperRect(std::move(lo), std::move(hi));
}

double Face::diam() const {
  double s = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) s += (hi[i] - lo[i]) * (hi[i] - lo[i]);
  return std::sqrt(s);
}

bool Face::contains(std::span<const double> x, double tol) const {
  if (x.size() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
  }
  return true;
}

namespace {

bool on_cube_boundary(double v) { return std::abs(v) <= kGeomTol || std::abs(v - 1.0) <= kGeomTol; }

Face make_face(const HyperRect& r, std::size_t axis, Side side, double value) {
  Face f;
  f.axis = axis;
  f.side = side;
  f.fixed_value = value;
  f.lo = r.lo();
  f.hi = r.hi();
  f.lo[axis] = value;
  f.hi[axis] = value;
  f.on_unit_cube_boundary = on_cube_boundary(value);
  return f;
}

}  // namespace

std::vector<Face> faces(const HyperRect& r) {
  std::vector<Face> out;
  out.reserve(2 * r.dim());
  for (std::size_t a = 0; a < r.dim(); ++a) {
    out.push_back(make_face(r, a, Side::Lo, r.lo(a)));
    out.push_back(make_face(r, a, Side::Hi, r.hi(a)));
  }
  return out;
}

Face face_of(const HyperRect& r, std::size_t axis, Side side) {
  return make_face(r, axis, side, side == Side::Lo ? r.lo(axis) : r.hi(axis));
}

Face section(const HyperRect& r, std::size_t axis, double value) {
  if (!(value > r.lo(axis) && value < r.hi(axis))) {
    fail(ErrorCode::InvalidArgument, "section: value must lie strictly inside the edge");
  }
  // A section is not a face of r; the side tag is irrelevant but Lo keeps it stable.
  return make_face(r, axis, Side::Lo, value);
}

double dist_point_face(std::span<const double> x, const Face& e) {
  double s = 0.0;
  for (std::size_t i = 0; i < e.dim(); ++i) {
    const double c = std::clamp(x[i], e.lo[i], e.hi[i]);
    s += (x[i] - c) * (x[i] - c);
  }
  return std::sqrt(s);
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

std::vector<std::size_t> net_divisions(const Face& e, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    fail(ErrorCode::InvalidArgument, "build_net: delta must be positive and finite");
  }
  const std::size_t d = e.dim();
  std::vector<std::size_t> pts(d, 1);
  if (d == 1) return pts;
  const double h_max = delta / std::sqrt(static_cast<double>(d - 1));
  for (std::size_t i = 0; i < d; ++i) {
    if (i == e.axis) continue;
    const double len = e.hi[i] - e.lo[i];
    const auto intervals = static_cast<std::size_t>(std::max(1.0, std::ceil(len / h_max)));
    pts[i] = intervals + 1;
  }
  return pts;
}

std::size_t net_size(const Face& e, double delta) {
  const auto div = net_divisions(e, delta);
  return std::accumulate(div.begin(), div.end(), std::size_t{1}, std::multiplies<>());
}

static double net_coordinate(const Face& e, std::size_t axis, std::size_t count, std::size_t i) {
  if (count == 1) return e.lo[axis];  // fixed axis (lo == hi)
  if (i + 1 == count) return e.hi[axis];  // land exactly on the far vertex
  const double t = static_cast<double>(i) / static_cast<double>(count - 1);
  return e.lo[axis] + t * (e.hi[axis] - e.lo[axis]);
}

void net_point(const Face& e, const std::vector<std::size_t>& div, std::size_t index, std::span<double> out) {
  for (std::size_t i = 0; i < div.size(); ++i) {
    out[i] = net_coordinate(e, i, div[i], index % div[i]);
    index /= div[i];
  }
}

FaceNet build_net(const Face& e, double delta) {
  const auto div = net_divisions(e, delta);
  const std::size_t n = std::accumulate(div.begin(), div.end(), std::size_t{1}, std::multiplies<>());
  FaceNet net{e, delta, {}};
  net.points.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    Point p(e.dim());
    net_point(e, div, k, p);
    net.points.push_back(std::move(p));
  }
  return net;
}

CanonicalFrame::CanonicalFrame(const HyperRect& r, std::vector<std::size_t> perm, bool reflect_first)
    : original_(r), canonical_(HyperRect::unit(r.dim())), perm_(std::move(perm)), reflect_first_(reflect_first) {
  Point hi(dim());
  for (std::size_t j = 0; j < dim(); ++j) hi[j] = r.edge(perm_[j]);
  canonical_ = HyperRect(Point(dim(), 0.0), std::move(hi));
}

Point CanonicalFrame::to_canonical(std::span<const double> x) const {
  Point y(dim());
  for (std::size_t j = 0; j < dim(); ++j) {
    const std::size_t a = perm_[j];
    y[j] = (j == 0 && reflect_first_) ? original_.hi(a) - x[a] : x[a] - original_.lo(a);
  }
  return y;
}

double CanonicalFrame::coord_to_original(std::size_t j, double v) const {
  const std::size_t a = perm_[j];
  return (j == 0 && reflect_first_) ? original_.hi(a) - v : original_.lo(a) + v;
}

Point CanonicalFrame::to_original(std::span<const double> y) const {
  Point x(dim());
  for (std::size_t j = 0; j < dim(); ++j) x[perm_[j]] = coord_to_original(j, y[j]);
  return x;
}

Canonicalized canonicalize(const HyperRect& r, std::span<const double> x) {
  double shortest = r.edge(0);
  for (std::size_t i = 1; i < r.dim(); ++i) shortest = std::min(shortest, r.edge(i));
  return canonicalize(r, x, 0.5 * shortest);
}

Canonicalized canonicalize(const HyperRect& r, std::span<const double> x, double min_first_coord) {
  if (r.aspect_ratio() > 3.0 + kGeomTol) {
    fail(ErrorCode::Invariant, "canonicalize: aspect ratio exceeds 3");
  }
  if (x.size() != r.dim()) fail(ErrorCode::InvalidArgument, "canonicalize: dimension mismatch");

  const std::size_t lead = r.longest_axis();
  std::vector<std::size_t> perm{lead};
  for (std::size_t i = 0; i < r.dim(); ++i) {
    if (i != lead) perm.push_back(i);
  }
  const bool reflect = (x[lead] - r.lo(lead)) < min_first_coord;
  CanonicalFrame frame(r, std::move(perm), reflect);
  Point y = frame.to_canonical(x);
  HyperRect rect = frame.canonical_rect();
  return {std::move(frame), std::move(rect), std::move(y)};
}

}  // namespace flowtrap
