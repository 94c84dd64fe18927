#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "flowtrap/error.hpp"
#include "flowtrap/geometry.hpp"
#include "support.hpp"

namespace flowtrap {
namespace {

using testing::nearest_distance;
using testing::random_face_point;

TEST(HyperRect, RejectsDegenerateAndOutsideBoxes) {
  EXPECT_THROW(HyperRect({0.2, 0.0}, {0.2, 1.0}), Error);
  EXPECT_THROW(HyperRect({-0.1, 0.0}, {0.5, 1.0}), Error);
  EXPECT_THROW(HyperRect({0.0, 0.0}, {0.5, 1.1}), Error);
  EXPECT_THROW(HyperRect({0.0}, {0.5, 1.0}), Error);
}

TEST(Faces, UnitSquareAllOnCubeBoundary) {
  const auto fs = faces(HyperRect::unit(2));
  ASSERT_EQ(fs.size(), 4u);
  for (std::size_t j = 0; j < fs.size(); ++j) {
    EXPECT_TRUE(fs[j].on_unit_cube_boundary);
    EXPECT_EQ(fs[j].index(), j);
  }
}

TEST(Faces, ThreeSidesOnCubeBoundary) {
  const auto fs = faces(HyperRect({0.0, 0.0}, {1.0 / 3.0, 1.0}));
  EXPECT_TRUE(fs[0].on_unit_cube_boundary);   // x0 = 0
  EXPECT_FALSE(fs[1].on_unit_cube_boundary);  // x0 = 1/3
  EXPECT_TRUE(fs[2].on_unit_cube_boundary);   // x1 = 0
  EXPECT_TRUE(fs[3].on_unit_cube_boundary);   // x1 = 1
  EXPECT_DOUBLE_EQ(fs[1].fixed_value, 1.0 / 3.0);
}

TEST(Faces, InteriorBoxHasNoBoundaryFaces) {
  const auto fs = faces(HyperRect({0.25, 0.25, 0.25}, {0.5, 0.5, 0.5}));
  ASSERT_EQ(fs.size(), 6u);
  for (const auto& f : fs) EXPECT_FALSE(f.on_unit_cube_boundary);
}

TEST(Faces, EveryVertexLiesOnExactlyDFaces) {
  const HyperRect r({0.1, 0.2, 0.3}, {0.4, 0.9, 0.5});
  const auto fs = faces(r);
  for (unsigned mask = 0; mask < 8; ++mask) {
    Point v(3);
    for (std::size_t i = 0; i < 3; ++i) v[i] = (mask >> i) & 1 ? r.hi(i) : r.lo(i);
    const auto n = std::count_if(fs.begin(), fs.end(), [&](const Face& f) { return f.contains(v); });
    EXPECT_EQ(n, 3);
  }
}

TEST(Faces, CoverTheBoundary) {
  std::mt19937_64 rng(7);
  const HyperRect r({0.1, 0.2, 0.3}, {0.4, 0.9, 0.5});
  const auto fs = faces(r);
  for (const auto& f : fs) {
    for (int i = 0; i < 50; ++i) {
      const Point p = random_face_point(rng, f);
      EXPECT_TRUE(r.contains(p));
      // A generic boundary point lies on exactly one face.
      const auto n = std::count_if(fs.begin(), fs.end(), [&](const Face& g) { return g.contains(p); });
      EXPECT_EQ(n, 1);
    }
  }
}

TEST(Measures, UnitSquare) {
  const auto r = HyperRect::unit(2);
  EXPECT_DOUBLE_EQ(r.diam(), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(r.vol(), 1.0);
  EXPECT_DOUBLE_EQ(r.aspect_ratio(), 1.0);
}

TEST(Measures, UnitCubeDiameterIsSqrtD) {
  for (std::size_t d = 1; d <= 6; ++d) EXPECT_NEAR(HyperRect::unit(d).diam(), std::sqrt(double(d)), 1e-15);
}

TEST(Measures, ThinBox) {
  const HyperRect r({1.0 / 3.0, 0.0}, {1.0, 1.0});
  EXPECT_NEAR(r.vol(), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.aspect_ratio(), 1.5, 1e-15);
}

TEST(Distance, AxisOffset) {
  const HyperRect r({1.0 / 6.0, 0.0}, {1.0, 1.0});
  const Face e = face_of(r, 0, Side::Lo);
  EXPECT_NEAR(dist_point_face(Point{0.5, 0.5}, e), 1.0 / 3.0, 1e-15);
}

TEST(Distance, PointOnFaceIsZero) {
  const Face e = face_of(HyperRect::unit(2), 1, Side::Hi);
  EXPECT_EQ(dist_point_face(Point{0.3, 1.0}, e), 0.0);
}

TEST(Distance, ClampThenNorm) {
  const HyperRect r({0.5, 0.6}, {0.9, 1.0});
  const Face e = face_of(r, 0, Side::Lo);
  EXPECT_NEAR(dist_point_face(Point{0.0, 0.0}, e), std::sqrt(0.25 + 0.36), 1e-15);
}

TEST(Net, UnitSegmentCountWithinTrapBudget) {
  const double eps = 1e-4, r = 1.0;
  const Face e = face_of(HyperRect::unit(2), 0, Side::Lo);
  const auto net = build_net(e, std::sqrt(r * eps));
  EXPECT_EQ(net.points.size(), 101u);
  EXPECT_EQ(net_size(e, std::sqrt(r * eps)), 101u);
  EXPECT_LE(double(net.points.size()), 2.0 * std::sqrt(r / eps));
}

// With steps of delta/sqrt(d-1), the vertices alone suffice once delta
// reaches sqrt(d-1) times the longest edge of the face.
TEST(Net, LargeDeltaGivesExactlyTheVertices) {
  const HyperRect r({0.1, 0.2, 0.3}, {0.4, 0.9, 0.5});
  for (const auto& f : faces(r)) {
    double longest = 0.0;
    for (std::size_t i = 0; i < 3; ++i) longest = std::max(longest, f.hi[i] - f.lo[i]);
    const auto net = build_net(f, std::sqrt(2.0) * longest);
    ASSERT_EQ(net.points.size(), 4u);
    std::set<std::vector<double>> got(net.points.begin(), net.points.end());
    for (unsigned mask = 0; mask < 4; ++mask) {
      Point v(3);
      unsigned bit = 0;
      for (std::size_t i = 0; i < 3; ++i) {
        if (i == f.axis) {
          v[i] = f.fixed_value;
        } else {
          v[i] = (mask >> bit++) & 1 ? f.hi[i] : f.lo[i];
        }
      }
      EXPECT_TRUE(got.count(v)) << "missing vertex";
    }
  }
}

TEST(Net, SquareFaceInThreeDimensions) {
  const HyperRect r({0.4, 0.4, 0.4}, {0.6, 0.6, 0.6});
  const Face e = face_of(r, 2, Side::Lo);
  const auto net = build_net(e, 0.1);
  EXPECT_EQ(net.points.size(), 16u);
  // Brute-force covering radius at resolution 1e-3.
  double worst = 0.0;
  for (int i = 0; i <= 200; ++i) {
    for (int j = 0; j <= 200; ++j) {
      const Point p{0.4 + 0.2 * i / 200.0, 0.4 + 0.2 * j / 200.0, 0.4};
      worst = std::max(worst, nearest_distance(p, net.points));
    }
  }
  EXPECT_LE(worst, 0.05 + 1e-12);
  EXPECT_LE(worst, 0.1);
}

TEST(Net, StreamedPointsMatchMaterialisedNet) {
  const HyperRect r({0.1, 0.2, 0.3}, {0.4, 0.9, 0.5});
  for (const auto& f : faces(r)) {
    const auto net = build_net(f, 0.07);
    const auto div = net_divisions(f, 0.07);
    Point p(3);
    for (std::size_t i = 0; i < net.points.size(); ++i) {
      net_point(f, div, i, p);
      EXPECT_EQ(p, net.points[i]);
    }
  }
}

// Random faces and deltas: covering radius <= delta/2 on the face and on each
// of its edges, all points on the face.
TEST(NetProperty, CoveringRadiusOnFacesAndSubFaces) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = 2 + trial % 3;
    Point lo(d), hi(d);
    for (std::size_t i = 0; i < d; ++i) {
      const double a = u(rng), b = u(rng);
      lo[i] = std::min(a, b);
      hi[i] = std::max(a, b) + 1e-3 > 1.0 ? 1.0 : std::max(a, b) + 1e-3;
    }
    const HyperRect r(lo, hi);
    const double delta = 0.02 + 0.2 * u(rng);
    const Face f = faces(r)[trial % (2 * d)];
    const auto net = build_net(f, delta);
    for (const auto& p : net.points) EXPECT_TRUE(f.contains(p));
    double worst = 0.0;
    for (int s = 0; s < 2000; ++s) worst = std::max(worst, nearest_distance(random_face_point(rng, f), net.points));
    EXPECT_LE(worst, delta / 2 + 1e-12);
    // A sub-face: pin one free axis to its lower end.
    std::size_t free_axis = f.axis == 0 ? 1 : 0;
    Face sub = f;
    sub.hi[free_axis] = sub.lo[free_axis];
    std::vector<Point> sub_pts;
    for (const auto& p : net.points) {
      if (p[free_axis] == f.lo[free_axis]) sub_pts.push_back(p);
    }
    ASSERT_FALSE(sub_pts.empty());
    double sub_worst = 0.0;
    for (int s = 0; s < 500; ++s) sub_worst = std::max(sub_worst, nearest_distance(random_face_point(rng, sub), sub_pts));
    EXPECT_LE(sub_worst, delta / 2 + 1e-12);
  }
}

TEST(Net, RejectsNonPositiveDelta) {
  const Face e = face_of(HyperRect::unit(2), 0, Side::Lo);
  EXPECT_THROW(build_net(e, 0.0), Error);
  EXPECT_THROW(build_net(e, -1.0), Error);
}

TEST(Canonicalize, UnitSquareCentreIsIdentity) {
  const auto c = canonicalize(HyperRect::unit(2), Point{0.5, 0.5});
  EXPECT_FALSE(c.frame.reflected());
  EXPECT_EQ(c.frame.permutation(), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(c.point, (Point{0.5, 0.5}));
}

TEST(Canonicalize, ReflectsWhenPivotIsNearTheOrigin) {
  const HyperRect r({0.0, 0.0}, {1.0, 1.0 / 3.0});
  const auto c = canonicalize(r, Point{0.1, 0.2});
  EXPECT_TRUE(c.frame.reflected());
  EXPECT_NEAR(c.point[0], 0.9, 1e-15);
  EXPECT_GE(c.point[0], 1.0 / 6.0);
}

TEST(Canonicalize, LongestAxisFirst) {
  const HyperRect r({0.0, 0.1, 0.2}, {0.3, 0.7, 0.5});
  const auto c = canonicalize(r, Point{0.15, 0.4, 0.35});
  EXPECT_EQ(c.frame.original_axis(0), 1u);
  EXPECT_NEAR(c.rect.edge(0), 0.6, 1e-15);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(c.rect.lo(i), 0.0);
}

TEST(Canonicalize, RejectsAspectAboveThree) {
  EXPECT_THROW(canonicalize(HyperRect({0.0, 0.0}, {1.0, 0.2}), Point{0.5, 0.1}), Error);
}

TEST(CanonicalizeProperty, IsometryAndRoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 2 + trial % 3;
    Point lo(d), hi(d);
    for (std::size_t i = 0; i < d; ++i) {
      const double e = 0.1 + 0.2 * u(rng);
      lo[i] = u(rng) * (1.0 - e);
      hi[i] = lo[i] + e;
    }
    const HyperRect r(lo, hi);
    Point x(d);
    for (std::size_t i = 0; i < d; ++i) x[i] = lo[i] + u(rng) * r.edge(i);
    const auto c = canonicalize(r, x);
    EXPECT_TRUE(c.rect.contains(c.point));
    Point a(d), b(d);
    for (std::size_t i = 0; i < d; ++i) {
      a[i] = lo[i] + u(rng) * r.edge(i);
      b[i] = lo[i] + u(rng) * r.edge(i);
    }
    const Point ca = c.frame.to_canonical(a), cb = c.frame.to_canonical(b);
    EXPECT_NEAR(distance(ca, cb), distance(a, b), 1e-12);
    const Point back = c.frame.to_original(ca);
    for (std::size_t i = 0; i < d; ++i) EXPECT_NEAR(back[i], a[i], 1e-12);
    // Faces map to faces: the image of each face's centre is on a canonical face.
    const auto cf = faces(c.rect);
    std::set<std::size_t> hit;
    for (const auto& f : faces(r)) {
      Point m(d);
      for (std::size_t i = 0; i < d; ++i) m[i] = 0.5 * (f.lo[i] + f.hi[i]);
      const Point cm = c.frame.to_canonical(m);
      for (std::size_t j = 0; j < cf.size(); ++j) {
        if (cf[j].contains(cm, 1e-12)) hit.insert(j);
      }
    }
    EXPECT_EQ(hit.size(), 2 * d);
  }
}

}  // namespace
}  // namespace flowtrap
