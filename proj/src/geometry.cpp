#include "conesq/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace conesq {

Point::Point(std::initializer_list<double> xs) {
  require(xs.size() >= 1 && xs.size() <= static_cast<std::size_t>(kMaxDim), "dimension must be in [1, 4]");
  n = static_cast<int>(xs.size());
  std::copy(xs.begin(), xs.end(), c.begin());
}

Point Point::from_vector(const std::vector<double>& xs) {
  require(!xs.empty() && xs.size() <= static_cast<std::size_t>(kMaxDim), "dimension must be in [1, 4]");
  Point p(static_cast<int>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    require(std::isfinite(xs[i]), "point coordinates must be finite");
    p.c[i] = xs[i];
  }
  return p;
}

bool Point::operator==(const Point& o) const {
  if (n != o.n) return false;
  for (int i = 0; i < n; ++i)
    if (c[i] != o.c[i]) return false;
  return true;
}

Point operator+(const Point& a, const Point& b) {
  Point r = a;
  for (int i = 0; i < a.n; ++i) r.c[i] += b.c[i];
  return r;
}
Point operator-(const Point& a, const Point& b) {
  Point r = a;
  for (int i = 0; i < a.n; ++i) r.c[i] -= b.c[i];
  return r;
}
Point operator*(double s, const Point& a) {
  Point r = a;
  for (int i = 0; i < a.n; ++i) r.c[i] *= s;
  return r;
}

// ---------------------------------------------------------------- PointIndex

PointIndex::PointIndex(std::vector<Point> pts) : pts_(std::move(pts)) {
  if (pts_.empty()) return;
  dim_ = pts_.front().n;
  perm_.resize(pts_.size());
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  nodes_.reserve(2 * pts_.size() / 4 + 2);
  build(0, pts_.size());
}

int PointIndex::build(std::size_t begin, std::size_t end) {
  Node nd;
  nd.begin = begin;
  nd.end = end;
  for (int a = 0; a < dim_; ++a) {
    nd.lo[a] = kInf;
    nd.hi[a] = -kInf;
  }
  for (std::size_t i = begin; i < end; ++i)
    for (int a = 0; a < dim_; ++a) {
      nd.lo[a] = std::min(nd.lo[a], pts_[perm_[i]][a]);
      nd.hi[a] = std::max(nd.hi[a], pts_[perm_[i]][a]);
    }
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(nd);
  if (end - begin <= 8) return id;
  int axis = 0;
  double spread = -1.0;
  for (int a = 0; a < dim_; ++a)
    if (nd.hi[a] - nd.lo[a] > spread) {
      spread = nd.hi[a] - nd.lo[a];
      axis = a;
    }
  if (spread <= 0.0) return id;
  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(perm_.begin() + static_cast<std::ptrdiff_t>(begin), perm_.begin() + static_cast<std::ptrdiff_t>(mid),
                   perm_.begin() + static_cast<std::ptrdiff_t>(end),
                   [&](std::size_t i, std::size_t j) { return pts_[i][axis] < pts_[j][axis]; });
  const int l = build(begin, mid);
  const int r = build(mid, end);
  nodes_[id].axis = axis;
  nodes_[id].split = pts_[perm_[mid]][axis];
  nodes_[id].left = l;
  nodes_[id].right = r;
  return id;
}

double PointIndex::box_dist2(const Node& nd, const Point& x) {
  double s = 0.0;
  for (int a = 0; a < x.n; ++a) {
    double d = 0.0;
    if (x[a] < nd.lo[a]) d = nd.lo[a] - x[a];
    else if (x[a] > nd.hi[a]) d = x[a] - nd.hi[a];
    s += d * d;
  }
  return s;
}

void PointIndex::nearest_rec(int node, const Point& x, double& best2, std::size_t& best) const {
  const Node& nd = nodes_[node];
  if (box_dist2(nd, x) > best2) return;
  if (nd.axis < 0) {
    for (std::size_t i = nd.begin; i < nd.end; ++i) {
      const std::size_t idx = perm_[i];
      const double d2 = dist2(x, pts_[idx]);
      if (d2 < best2 || (d2 == best2 && idx < best)) {
        best2 = d2;
        best = idx;
      }
    }
    return;
  }
  const bool go_left = x[nd.axis] < nd.split;
  nearest_rec(go_left ? nd.left : nd.right, x, best2, best);
  nearest_rec(go_left ? nd.right : nd.left, x, best2, best);
}

std::pair<double, std::size_t> PointIndex::nearest(const Point& x) const {
  require(!pts_.empty(), "nearest query on empty index");
  require(x.n == dim_, "dimension mismatch");
  double best2 = kInf;
  std::size_t best = pts_.size();
  nearest_rec(0, x, best2, best);
  return {std::sqrt(best2), best};
}

void PointIndex::within_rec(int node, const Point& x, double r2, bool closed, std::vector<std::size_t>& out) const {
  const Node& nd = nodes_[node];
  const double bd = box_dist2(nd, x);
  if (bd > r2) return;
  if (nd.axis < 0) {
    for (std::size_t i = nd.begin; i < nd.end; ++i) {
      const double d2 = dist2(x, pts_[perm_[i]]);
      if (closed ? d2 <= r2 : d2 < r2) out.push_back(perm_[i]);
    }
    return;
  }
  within_rec(nd.left, x, r2, closed, out);
  within_rec(nd.right, x, r2, closed, out);
}

std::vector<std::size_t> PointIndex::within(const Point& x, double r, bool closed) const {
  std::vector<std::size_t> out;
  if (pts_.empty()) return out;
  require(x.n == dim_, "dimension mismatch");
  // Widen the squared radius by one ulp-scale margin, then filter exactly.
  within_rec(0, x, r * r * (1.0 + 1e-12) + 1e-300, true, out);
  std::vector<std::size_t> exact;
  exact.reserve(out.size());
  for (std::size_t i : out) {
    const double d = dist(x, pts_[i]);
    if (closed ? d <= r : d < r) exact.push_back(i);
  }
  std::sort(exact.begin(), exact.end());
  return exact;
}

// ---------------------------------------------------------------- ClosedSet

ClosedSet ClosedSet::point_cloud(std::vector<Point> atoms) {
  require(!atoms.empty(), "point cloud must be nonempty");
  const int n = atoms.front().n;
  for (const auto& p : atoms) require(p.n == n && n >= 1 && n <= kMaxDim, "point cloud dimension mismatch");
  std::vector<std::size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::lexicographical_compare(atoms[i].c.begin(), atoms[i].c.begin() + n, atoms[j].c.begin(), atoms[j].c.begin() + n);
  });
  for (std::size_t k = 1; k < order.size(); ++k)
    require(atoms[order[k]] != atoms[order[k - 1]], "point cloud atoms must be pairwise distinct");
  ClosedSet E;
  E.kind_ = ShapeKind::PointCloud;
  E.dim_ = n;
  E.index_ = std::make_shared<PointIndex>(std::move(atoms));
  return E;
}

ClosedSet ClosedSet::hyperplane(int dim, double half_width) {
  require(dim >= 1 && dim <= kMaxDim, "dimension must be in [1, 4]");
  require(half_width > 0.0, "half width must be positive");
  ClosedSet E;
  E.kind_ = ShapeKind::Hyperplane;
  E.dim_ = dim;
  E.params_ = {half_width};
  return E;
}

ClosedSet ClosedSet::segment(const Point& a, const Point& b) {
  require(a.n == b.n && a.n >= 1, "segment endpoints dimension mismatch");
  require(a != b, "segment endpoints must differ");
  ClosedSet E;
  E.kind_ = ShapeKind::Segment;
  E.dim_ = a.n;
  E.a_ = a;
  E.b_ = b;
  E.params_ = a.to_vector();
  for (double v : b.to_vector()) E.params_.push_back(v);
  return E;
}

ClosedSet ClosedSet::circle(int dim, double cx, double cy, double radius) {
  require(dim >= 2 && dim <= kMaxDim, "circle needs dimension in [2, 4]");
  require(radius > 0.0, "circle radius must be positive");
  ClosedSet E;
  E.kind_ = ShapeKind::Circle;
  E.dim_ = dim;
  E.params_ = {cx, cy, radius};
  return E;
}

ClosedSet ClosedSet::cantor(int dim, int level) {
  require(dim >= 2 && dim <= kMaxDim, "Cantor set needs dimension in [2, 4]");
  require(level >= 0 && level <= 8, "Cantor level must be in [0, 8]");
  ClosedSet E;
  E.kind_ = ShapeKind::Cantor;
  E.dim_ = dim;
  E.level_ = level;
  return E;
}

const std::vector<Point>& ClosedSet::atoms() const {
  require(is_cloud(), "atoms() requires a point cloud");
  return index_->points();
}

std::string ClosedSet::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case ShapeKind::PointCloud: os << "cloud(" << index_->size() << " atoms, n=" << dim_ << ")"; break;
    case ShapeKind::Hyperplane: os << "hyperplane(n=" << dim_ << ", half_width=" << params_[0] << ")"; break;
    case ShapeKind::Segment: os << "segment(n=" << dim_ << ")"; break;
    case ShapeKind::Circle: os << "circle(n=" << dim_ << ", r=" << params_[2] << ")"; break;
    case ShapeKind::Cantor: os << "cantor(n=" << dim_ << ", level=" << level_ << ")"; break;
  }
  return os.str();
}

namespace {

double square_dist2(double x, double y, double x0, double y0, double side) {
  const double dx = x < x0 ? x0 - x : (x > x0 + side ? x - x0 - side : 0.0);
  const double dy = y < y0 ? y0 - y : (y > y0 + side ? y - y0 - side : 0.0);
  return dx * dx + dy * dy;
}

void cantor_rec(double x, double y, double x0, double y0, double side, int depth, double& best2) {
  const double d2 = square_dist2(x, y, x0, y0, side);
  if (d2 >= best2) return;
  if (depth == 0) {
    best2 = d2;
    return;
  }
  const double s = side / 4.0;
  const double offs[2] = {0.0, 3.0 * s};
  // Visit the nearer children first for better pruning.
  std::array<std::pair<double, int>, 4> kids;
  for (int k = 0; k < 4; ++k)
    kids[k] = {square_dist2(x, y, x0 + offs[k & 1], y0 + offs[k >> 1], s), k};
  std::sort(kids.begin(), kids.end());
  for (const auto& [dk, k] : kids) cantor_rec(x, y, x0 + offs[k & 1], y0 + offs[k >> 1], s, depth - 1, best2);
}

}  // namespace

double ClosedSet::cantor_distance2d(double x, double y) const {
  double best2 = kInf;
  cantor_rec(x, y, 0.0, 0.0, 1.0, level_, best2);
  return best2;
}

double ClosedSet::distance(const Point& x) const {
  require(x.n == dim_, "dimension mismatch between point and set");
  switch (kind_) {
    case ShapeKind::PointCloud: return index_->nearest(x).first;
    case ShapeKind::Hyperplane: {
      const double w = params_[0];
      double s = x[dim_ - 1] * x[dim_ - 1];
      for (int i = 0; i + 1 < dim_; ++i) {
        const double e = std::max(std::abs(x[i]) - w, 0.0);
        s += e * e;
      }
      return std::sqrt(s);
    }
    case ShapeKind::Segment: {
      const Point ab = b_ - a_;
      const Point ax = x - a_;
      double num = 0.0, den = 0.0;
      for (int i = 0; i < dim_; ++i) {
        num += ab[i] * ax[i];
        den += ab[i] * ab[i];
      }
      const double t = std::clamp(num / den, 0.0, 1.0);
      return dist(x, a_ + t * ab);
    }
    case ShapeKind::Circle: {
      const double rho = std::hypot(x[0] - params_[0], x[1] - params_[1]);
      double s = (rho - params_[2]) * (rho - params_[2]);
      for (int i = 2; i < dim_; ++i) s += x[i] * x[i];
      return std::sqrt(s);
    }
    case ShapeKind::Cantor: {
      double s = cantor_distance2d(x[0], x[1]);
      for (int i = 2; i < dim_; ++i) s += x[i] * x[i];
      return std::sqrt(s);
    }
  }
  return kInf;
}

std::vector<Point> ClosedSet::discretize(double mesh, double window) const {
  require(mesh > 0.0, "mesh must be positive");
  std::vector<Point> out;
  switch (kind_) {
    case ShapeKind::PointCloud: return atoms();
    case ShapeKind::Segment: {
      const double len = dist(a_, b_);
      const auto k = static_cast<std::size_t>(std::ceil(len / mesh));
      for (std::size_t i = 0; i <= k; ++i) out.push_back(a_ + (static_cast<double>(i) / static_cast<double>(k)) * (b_ - a_));
      return out;
    }
    case ShapeKind::Circle: {
      const double R = params_[2];
      const auto k = std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil(2.0 * M_PI * R / mesh)));
      for (std::size_t i = 0; i < k; ++i) {
        const double th = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(k);
        Point p(dim_);
        p[0] = params_[0] + R * std::cos(th);
        p[1] = params_[1] + R * std::sin(th);
        out.push_back(p);
      }
      return out;
    }
    case ShapeKind::Hyperplane: {
      const double w = std::min(window, params_[0]);
      const int free = dim_ - 1;
      const double h = free > 0 ? mesh * 2.0 / std::sqrt(static_cast<double>(free)) : mesh;
      const auto k = static_cast<std::size_t>(std::ceil(2.0 * w / h));
      std::size_t total = 1;
      for (int i = 0; i < free; ++i) total *= (k + 1);
      require(total <= 4'000'000, "hyperplane discretization too large");
      for (std::size_t id = 0; id < total; ++id) {
        Point p(dim_);
        std::size_t rest = id;
        for (int i = 0; i < free; ++i) {
          p[i] = -w + 2.0 * w * static_cast<double>(rest % (k + 1)) / static_cast<double>(k);
          rest /= (k + 1);
        }
        out.push_back(p);
      }
      return out;
    }
    case ShapeKind::Cantor: {
      const double side = std::pow(4.0, -level_);
      const auto k = static_cast<std::size_t>(std::ceil(side * std::sqrt(2.0) / mesh));
      const std::size_t squares = std::size_t{1} << (2 * level_);
      for (std::size_t sq = 0; sq < squares; ++sq) {
        double x0 = 0.0, y0 = 0.0, s = 1.0;
        for (int l = 0; l < level_; ++l) {
          s /= 4.0;
          const std::size_t digit = (sq >> (2 * (level_ - 1 - l))) & 3u;
          x0 += (digit & 1u) ? 3.0 * s : 0.0;
          y0 += (digit & 2u) ? 3.0 * s : 0.0;
        }
        for (std::size_t i = 0; i <= k; ++i)
          for (std::size_t j = 0; j <= k; ++j) {
            Point p(dim_);
            p[0] = x0 + side * static_cast<double>(i) / static_cast<double>(k);
            p[1] = y0 + side * static_cast<double>(j) / static_cast<double>(k);
            out.push_back(p);
          }
      }
      return out;
    }
  }
  return out;
}

std::vector<Point> ClosedSet::sample(std::size_t count, Rng& rng, double window) const {
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    switch (kind_) {
      case ShapeKind::PointCloud: out.push_back(atoms()[rng.below(atoms().size())]); break;
      case ShapeKind::Segment: out.push_back(a_ + rng.uniform() * (b_ - a_)); break;
      case ShapeKind::Circle: {
        const double th = rng.uniform(0.0, 2.0 * M_PI);
        Point p(dim_);
        p[0] = params_[0] + params_[2] * std::cos(th);
        p[1] = params_[1] + params_[2] * std::sin(th);
        out.push_back(p);
        break;
      }
      case ShapeKind::Hyperplane: {
        const double w = std::min(window, params_[0]);
        Point p(dim_);
        for (int i = 0; i + 1 < dim_; ++i) p[i] = rng.uniform(-w, w);
        out.push_back(p);
        break;
      }
      case ShapeKind::Cantor: {
        double x0 = 0.0, y0 = 0.0, sd = 1.0;
        for (int l = 0; l < level_; ++l) {
          sd /= 4.0;
          const auto digit = rng.below(4);
          x0 += (digit & 1u) ? 3.0 * sd : 0.0;
          y0 += (digit & 2u) ? 3.0 * sd : 0.0;
        }
        Point p(dim_);
        p[0] = x0 + sd * rng.uniform();
        p[1] = y0 + sd * rng.uniform();
        out.push_back(p);
        break;
      }
    }
  }
  return out;
}

bool cone_contains(const ConeSpec& cone, const Point& x, const ClosedSet& E) {
  return in_cone(cone.apex, x, E.distance(x), cone.lower, cone.upper);
}

double comparable_distance_ratio(const Point& y, const Point& z, const Point& x, const ClosedSet& E) {
  require(cone_contains(ConeSpec{y}, x, E), "x is not in the cone at y");
  return dist(x, z) / (dist(x, y) + dist(y, z));
}

}  // namespace conesq
