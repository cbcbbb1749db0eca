#include <gtest/gtest.h>

#include "conesq/geometry.hpp"

using namespace conesq;

namespace {

double brute_min(const std::vector<Point>& atoms, const Point& x) {
  double best = kInf;
  for (const Point& a : atoms) best = std::min(best, dist(a, x));
  return best;
}

}  // namespace

TEST(Geometry, CloudDistanceMatchesExhaustiveMin) {
  Rng rng(17);
  std::vector<Point> atoms;
  for (int i = 0; i < 100; ++i) atoms.push_back(Point{rng.uniform(), rng.uniform()});
  const ClosedSet E = ClosedSet::point_cloud(atoms);
  for (int k = 0; k < 200; ++k) {
    const Point x{rng.uniform(-1.0, 2.0), rng.uniform(-1.0, 2.0)};
    EXPECT_EQ(E.distance(x), brute_min(atoms, x));
  }
  for (const Point& a : atoms) EXPECT_EQ(E.distance(a), 0.0);
}

TEST(Geometry, IndexQueriesMatchScan) {
  Rng rng(5);
  std::vector<Point> pts;
  for (int i = 0; i < 300; ++i) pts.push_back(Point{rng.uniform(), rng.uniform(), rng.uniform()});
  const PointIndex idx(pts);
  for (int k = 0; k < 50; ++k) {
    const Point x{rng.uniform(), rng.uniform(), rng.uniform()};
    const double r = rng.uniform(0.05, 0.4);
    for (bool closed : {true, false}) {
      std::vector<std::size_t> want;
      for (std::size_t i = 0; i < pts.size(); ++i)
        if (closed ? dist(pts[i], x) <= r : dist(pts[i], x) < r) want.push_back(i);
      auto got = idx.within(x, r, closed);
      std::sort(got.begin(), got.end());
      EXPECT_EQ(got, want);
    }
    EXPECT_EQ(idx.nearest(x).first, brute_min(pts, x));
  }
}

TEST(Geometry, AnalyticShapesAgreeWithDiscretisation) {
  Rng rng(3);
  const std::vector<ClosedSet> shapes{ClosedSet::segment(Point{0.0, 0.0}, Point{1.0, 0.0}),
                                      ClosedSet::circle(2, 0.0, 0.0, 0.5), ClosedSet::hyperplane(2, 1.0)};
  const double mesh = 1e-3;
  for (const ClosedSet& E : shapes) {
    const std::vector<Point> grid = E.discretize(mesh, 2.0);
    ASSERT_FALSE(grid.empty());
    for (int k = 0; k < 100; ++k) {
      const Point x{rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)};
      const double exact = E.distance(x);
      EXPECT_LE(exact, brute_min(grid, x) + 1e-12) << E.describe();
      EXPECT_GE(exact + mesh, brute_min(grid, x)) << E.describe();
    }
  }
}

TEST(Geometry, ClosedFormDistances) {
  const ClosedSet line = ClosedSet::hyperplane(2);
  EXPECT_DOUBLE_EQ(line.distance(Point{0.3, -0.7}), 0.7);
  const ClosedSet circ = ClosedSet::circle(2, 1.0, 1.0, 0.5);
  EXPECT_DOUBLE_EQ(circ.distance(Point{1.0, 1.0}), 0.5);
  EXPECT_DOUBLE_EQ(circ.distance(Point{3.0, 1.0}), 1.5);
  const ClosedSet seg = ClosedSet::segment(Point{0.0, 0.0}, Point{1.0, 0.0});
  EXPECT_DOUBLE_EQ(seg.distance(Point{2.0, 0.0}), 1.0);
  EXPECT_DOUBLE_EQ(seg.distance(Point{0.5, 0.25}), 0.25);
}

TEST(Geometry, CantorPointsLieOnTheSet) {
  const ClosedSet C = ClosedSet::cantor(2, 3);
  const auto pts = C.discretize(1e-3);
  EXPECT_GE(pts.size(), 64u);  // at least one point per level-3 square
  for (const Point& p : pts) EXPECT_EQ(C.distance(p), 0.0);
}

TEST(Geometry, ConeMembership) {
  const ClosedSet E = ClosedSet::hyperplane(2);
  const Point y{0.0, 0.0};
  EXPECT_TRUE(cone_contains(ConeSpec{y}, Point{0.5, 1.0}, E));
  EXPECT_FALSE(cone_contains(ConeSpec{y}, Point{2.5, 1.0}, E));
  EXPECT_FALSE(cone_contains(ConeSpec{y}, Point{0.5, 0.0}, E));  // on E
  EXPECT_FALSE(cone_contains(ConeSpec{y, 1.0, 2.0}, Point{0.5, 1.0}, E));
  EXPECT_TRUE(cone_contains(ConeSpec{y, 0.5, 1.0}, Point{0.5, 1.0}, E));
}

TEST(Geometry, ComparableDistanceRatioHandExample) {
  const ClosedSet E = ClosedSet::point_cloud({Point{0.0, 0.0}, Point{10.0, 0.0}});
  const Point y{0.0, 0.0}, z{10.0, 0.0}, x{0.5, 1.0};
  const double want = std::sqrt(9.5 * 9.5 + 1.0) / (std::sqrt(1.25) + 10.0);
  EXPECT_NEAR(comparable_distance_ratio(y, z, x, E), want, 1e-15);
}

TEST(Geometry, ComparableDistanceRatioBoundedBelow) {
  const ClosedSet E = ClosedSet::segment(Point{0.0, 0.0}, Point{1.0, 0.0});
  Rng rng(9);
  double lo = kInf;
  for (int k = 0; k < 1000; ++k) {
    const Point y{rng.uniform(), 0.0}, z{rng.uniform(), 0.0};
    const double d = rng.uniform(0.01, 0.5);
    const Point x{y[0] + rng.uniform(-1.9, 1.9) * d, d};
    if (!cone_contains(ConeSpec{y}, x, E)) continue;
    lo = std::min(lo, comparable_distance_ratio(y, z, x, E));
  }
  EXPECT_GT(lo, 0.25);
}

TEST(Geometry, RejectsBadInput) {
  EXPECT_THROW(ClosedSet::point_cloud({Point{0.0, 0.0}, Point{0.0, 0.0}}), Error);
  EXPECT_THROW(Point(7), Error);
  const ClosedSet E = ClosedSet::hyperplane(2);
  EXPECT_THROW(E.distance(Point{0.0, 0.0, 0.0}), Error);
}
