#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "conesq/common.hpp"

namespace conesq {

inline constexpr int kMaxDim = 4;

// A point of R^n, 1 <= n <= 4.
struct Point {
  std::array<double, kMaxDim> c{};
  int n = 0;

  Point() = default;
  explicit Point(int dim) : n(dim) { require(dim >= 1 && dim <= kMaxDim, "dimension must be in [1, 4]"); }
  Point(std::initializer_list<double> xs);
  static Point from_vector(const std::vector<double>& xs);
  std::vector<double> to_vector() const { return {c.begin(), c.begin() + n}; }

  double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  bool operator==(const Point& o) const;
  bool operator!=(const Point& o) const { return !(*this == o); }
};

Point operator+(const Point& a, const Point& b);
Point operator-(const Point& a, const Point& b);
Point operator*(double s, const Point& a);

inline double dist2(const Point& a, const Point& b) {
  double s = 0.0;
  for (int i = 0; i < a.n; ++i) {
    const double d = a.c[i] - b.c[i];
    s += d * d;
  }
  return s;
}
inline double dist(const Point& a, const Point& b) { return std::sqrt(dist2(a, b)); }
inline double norm(const Point& a) {
  double s = 0.0;
  for (int i = 0; i < a.n; ++i) s += a.c[i] * a.c[i];
  return std::sqrt(s);
}

// Static kd-tree over a fixed point list; nearest ties broken by index.
class PointIndex {
 public:
  PointIndex() = default;
  explicit PointIndex(std::vector<Point> pts);
  std::size_t size() const { return pts_.size(); }
  const std::vector<Point>& points() const { return pts_; }
  // (distance, index) of the nearest point.
  std::pair<double, std::size_t> nearest(const Point& x) const;
  // Indices with |p - x| < r (or <= r when closed), sorted ascending.
  std::vector<std::size_t> within(const Point& x, double r, bool closed) const;

 private:
  struct Node {
    int axis = -1;  // -1 for leaf
    double split = 0.0;
    std::size_t begin = 0, end = 0;  // range in perm_
    int left = -1, right = -1;
    std::array<double, kMaxDim> lo{}, hi{};
  };
  int build(std::size_t begin, std::size_t end);
  void nearest_rec(int node, const Point& x, double& best2, std::size_t& best) const;
  void within_rec(int node, const Point& x, double r2, bool closed, std::vector<std::size_t>& out) const;
  static double box_dist2(const Node& nd, const Point& x);

  std::vector<Point> pts_;
  std::vector<std::size_t> perm_;
  std::vector<Node> nodes_;
  int dim_ = 0;
};

enum class ShapeKind { PointCloud, Hyperplane, Segment, Circle, Cantor };

// The closed set E: a finite cloud of distinct points or one of four
// analytic shapes with an exact distance function.
class ClosedSet {
 public:
  static ClosedSet point_cloud(std::vector<Point> atoms);
  // {x : x_n = 0}, optionally clipped to |x_i| <= half_width for i < n.
  static ClosedSet hyperplane(int dim, double half_width = kInf);
  static ClosedSet segment(const Point& a, const Point& b);
  // Circle of the given radius in the plane of the first two coordinates.
  static ClosedSet circle(int dim, double cx, double cy, double radius);
  // Level-k four-corner Cantor set in [0,1]^2 (union of 4^k squares of side 4^-k).
  static ClosedSet cantor(int dim, int level);

  ShapeKind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool is_cloud() const { return kind_ == ShapeKind::PointCloud; }
  const std::vector<Point>& atoms() const;
  std::string describe() const;

  double distance(const Point& x) const;
  // A finite subset of E whose covering radius is at most `mesh`
  // (hyperplanes are cut to the box |x_i| <= window).
  std::vector<Point> discretize(double mesh, double window = 1.0) const;
  // Points of E drawn from its natural length/area measure.
  std::vector<Point> sample(std::size_t count, Rng& rng, double window = 1.0) const;

  // Shape parameters, exposed for serialization.
  const std::vector<double>& params() const { return params_; }
  int level() const { return level_; }

 private:
  double cantor_distance2d(double x, double y) const;

  ShapeKind kind_ = ShapeKind::PointCloud;
  int dim_ = 0;
  int level_ = 0;
  std::vector<double> params_;
  Point a_, b_;
  std::shared_ptr<const PointIndex> index_;
};

struct BallSpec {
  Point center;
  double radius = 1.0;
  bool closed = false;
  bool restricted = true;

  bool contains(const Point& x) const {
    const double d = dist(x, center);
    return closed ? d <= radius : d < radius;
  }
  BallSpec dilate(double s) const { return {center, s * radius, closed, restricted}; }
};

struct ConeSpec {
  Point apex;
  double lower = 0.0;
  double upper = kInf;
};

// Cone membership given a precomputed d = d(x, E).
inline bool in_cone(const Point& apex, const Point& x, double d, double lower = 0.0, double upper = kInf) {
  return d > 0.0 && dist(x, apex) < 2.0 * d && lower < d && d <= upper;
}

bool cone_contains(const ConeSpec& cone, const Point& x, const ClosedSet& E);

// |x - z| / (|x - y| + |y - z|) for x in the cone at y.
double comparable_distance_ratio(const Point& y, const Point& z, const Point& x, const ClosedSet& E);

}  // namespace conesq
