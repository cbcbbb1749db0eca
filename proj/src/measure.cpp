#include "conesq/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace conesq {

AtomicMeasure::AtomicMeasure(std::vector<Point> points, std::vector<double> weights)
    : pts_(std::move(points)), w_(std::move(weights)) {
  require(pts_.size() == w_.size(), "atom and weight counts differ");
  for (std::size_t i = 0; i < pts_.size(); ++i) {
    require(pts_[i].n == pts_.front().n, "atom dimension mismatch");
    require(std::isfinite(w_[i]) && w_[i] >= 0.0, "weights must be finite and nonnegative");
    total_ += w_[i];
  }
}

AtomicMeasure AtomicMeasure::uniform(std::vector<Point> points, double total) {
  const double w = points.empty() ? 0.0 : total / static_cast<double>(points.size());
  std::vector<double> ws(points.size(), w);
  return AtomicMeasure(std::move(points), std::move(ws));
}

AtomicMeasure AtomicMeasure::restricted(const std::vector<char>& mask) const {
  require(mask.size() == size(), "mask size mismatch");
  std::vector<double> w(w_.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = mask[i] ? w_[i] : 0.0;
  return AtomicMeasure(pts_, std::move(w));
}

void AtomicMeasure::check_on(const ClosedSet& E) const {
  for (const auto& p : pts_) require(E.distance(p) == 0.0, "measure atom does not lie on E");
}

ComplexAtomicMeasure::ComplexAtomicMeasure(std::vector<Point> points, std::vector<cplx> weights)
    : pts_(std::move(points)), w_(std::move(weights)) {
  require(pts_.size() == w_.size(), "atom and weight counts differ");
  for (std::size_t i = 0; i < pts_.size(); ++i) {
    require(pts_[i].n == pts_.front().n, "atom dimension mismatch");
    require(std::isfinite(w_[i].real()) && std::isfinite(w_[i].imag()), "weights must be finite");
  }
}

ComplexAtomicMeasure ComplexAtomicMeasure::density(const AtomicMeasure& mu, const std::vector<cplx>& f) {
  require(f.size() == mu.size(), "density size mismatch");
  std::vector<cplx> w(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) w[i] = f[i] * mu.weight(i);
  return ComplexAtomicMeasure(mu.points(), std::move(w));
}

AtomicMeasure ComplexAtomicMeasure::variation() const {
  std::vector<double> a(w_.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(w_[i]);
  return AtomicMeasure(pts_, std::move(a));
}

double ComplexAtomicMeasure::total_variation() const {
  double s = 0.0;
  for (const auto& w : w_) s += std::abs(w);
  return s;
}

std::vector<cplx> ComplexAtomicMeasure::polar() const {
  std::vector<cplx> b(w_.size(), cplx(1.0, 0.0));
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double a = std::abs(w_[i]);
    if (a > 0.0) b[i] = w_[i] / a;
  }
  return b;
}

RadialProfile::RadialProfile(const AtomicMeasure& mu, const Point& center) {
  std::vector<std::size_t> order(mu.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> d(mu.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = dist(center, mu.point(i));
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });
  d_.resize(d.size());
  cum_.assign(d.size() + 1, 0.0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    d_[k] = d[order[k]];
    cum_[k + 1] = cum_[k] + mu.weight(order[k]);
  }
}

double RadialProfile::open_mass(double r) const {
  const auto k = static_cast<std::size_t>(std::lower_bound(d_.begin(), d_.end(), r) - d_.begin());
  return cum_[k];
}

double RadialProfile::closed_mass(double r) const {
  const auto k = static_cast<std::size_t>(std::upper_bound(d_.begin(), d_.end(), r) - d_.begin());
  return cum_[k];
}

double ball_mass(const AtomicMeasure& mu, const BallSpec& B) {
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (B.contains(mu.point(i))) s += mu.weight(i);
  return s;
}

namespace {

// Distinct-distance groups around y: for each distinct distance D, the
// masses of the closed ball of radius D, accumulated in sorted order.
struct Shells {
  std::vector<double> radius;
  std::vector<double> mu_mass;
  std::vector<double> nu_mass;
};

Shells shells_around(const Point& y, const AtomicMeasure* mu, const AtomicMeasure& nu) {
  struct Item {
    double d;
    double mw;
    double nw;
  };
  std::vector<Item> items;
  items.reserve(nu.size() + (mu ? mu->size() : 0));
  if (mu)
    for (std::size_t i = 0; i < mu->size(); ++i) items.push_back({dist(y, mu->point(i)), mu->weight(i), 0.0});
  for (std::size_t i = 0; i < nu.size(); ++i) items.push_back({dist(y, nu.point(i)), 0.0, nu.weight(i)});
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.d < b.d; });
  Shells sh;
  double mcum = 0.0, ncum = 0.0;
  for (std::size_t k = 0; k < items.size(); ++k) {
    mcum += items[k].mw;
    ncum += items[k].nw;
    if (k + 1 == items.size() || items[k + 1].d != items[k].d) {
      sh.radius.push_back(items[k].d);
      sh.mu_mass.push_back(mcum);
      sh.nu_mass.push_back(ncum);
    }
  }
  return sh;
}

}  // namespace

double maximal_radial(const AtomicMeasure& nu, const Point& y, double m, double r_min) {
  require(m > 0.0, "m must be positive");
  const Shells sh = shells_around(y, nullptr, nu);
  double best = 0.0;
  // On r in (D_k, D_{k+1}] the open ball holds the atoms with d <= D_k.
  for (std::size_t k = 0; k < sh.radius.size(); ++k) {
    const double upper = k + 1 < sh.radius.size() ? sh.radius[k + 1] : kInf;
    const double lower = std::max(sh.radius[k], r_min);
    if (lower >= upper || sh.nu_mass[k] <= 0.0) continue;
    if (lower <= 0.0) return kInf;
    best = std::max(best, sh.nu_mass[k] / std::pow(lower, m));
  }
  return best;
}

double maximal_radial(const ComplexAtomicMeasure& nu, const Point& y, double m, double r_min) {
  return maximal_radial(nu.variation(), y, m, r_min);
}

double maximal_centred(const AtomicMeasure& mu, const AtomicMeasure& nu, const Point& y) {
  const Shells sh = shells_around(y, &mu, nu);
  double best = 0.0;
  for (std::size_t k = 0; k < sh.radius.size(); ++k)
    if (sh.mu_mass[k] > 0.0) best = std::max(best, sh.nu_mass[k] / sh.mu_mass[k]);
  return best;
}

double maximal_centred(const AtomicMeasure& mu, const ComplexAtomicMeasure& nu, const Point& y) {
  return maximal_centred(mu, nu.variation(), y);
}

OrderConstant order_m_constant(const AtomicMeasure& mu, double m, double r_min) {
  require(m > 0.0, "m must be positive");
  OrderConstant out;
  out.smallest_radius = kInf;
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t j = i + 1; j < mu.size(); ++j) {
      const double d = dist(mu.point(i), mu.point(j));
      if (d > 0.0) out.smallest_radius = std::min(out.smallest_radius, d);
    }
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu.weight(i) <= 0.0) continue;
    const Shells sh = shells_around(mu.point(i), nullptr, mu);
    for (std::size_t k = 0; k < sh.radius.size(); ++k) {
      const double upper = k + 1 < sh.radius.size() ? sh.radius[k + 1] : kInf;
      const double lower = std::max(sh.radius[k], r_min);
      if (lower >= upper || sh.nu_mass[k] <= 0.0) continue;
      const double v = lower <= 0.0 ? kInf : sh.nu_mass[k] / std::pow(lower, m);
      if (v > out.value) {
        out.value = v;
        out.center = i;
        out.radius = lower;
      }
    }
  }
  return out;
}

double order_m_constant_at(const AtomicMeasure& mu, double m, const std::vector<Point>& centers, double r_min) {
  double best = 0.0;
  for (const auto& c : centers) best = std::max(best, maximal_radial(mu, c, m, r_min));
  return best;
}

double doubling_ratio(const AtomicMeasure& mu, const BallSpec& B, double a) {
  const double inner = ball_mass(mu, B);
  const double outer = ball_mass(mu, B.dilate(a));
  if (inner == 0.0) return outer == 0.0 ? 0.0 : kInf;
  return outer / inner;
}

bool is_doubling(const AtomicMeasure& mu, const BallSpec& B, double a, double b) {
  require(a >= 1.0, "doubling needs a >= 1");
  return ball_mass(mu, B.dilate(a)) <= b * ball_mass(mu, B);
}

namespace {

// Jump points c_i = |d_i - r| / r below 1, with L(c^+) = mass of atoms
// with c <= c_j, ascending in c.
struct BoundaryJumps {
  std::vector<double> c;
  std::vector<double> mass;
  double mass3 = 0.0;
};

BoundaryJumps boundary_jumps(const AtomicMeasure& mu, const BallSpec& B) {
  const double r = B.radius;
  std::vector<std::pair<double, double>> items;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double ci = std::abs(dist(B.center, mu.point(i)) - r) / r;
    if (ci < 1.0 && mu.weight(i) > 0.0) items.emplace_back(ci, mu.weight(i));
  }
  std::stable_sort(items.begin(), items.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  BoundaryJumps out;
  double cum = 0.0;
  for (std::size_t k = 0; k < items.size(); ++k) {
    cum += items[k].second;
    if (k + 1 == items.size() || items[k + 1].first != items[k].first) {
      out.c.push_back(items[k].first);
      out.mass.push_back(cum);
    }
  }
  out.mass3 = ball_mass(mu, B.dilate(3.0));
  return out;
}

}  // namespace

double small_boundary_constant(const AtomicMeasure& mu, const BallSpec& B) {
  require(B.radius > 0.0, "radius must be positive");
  const BoundaryJumps j = boundary_jumps(mu, B);
  double worst = 0.0;
  for (std::size_t k = 0; k < j.c.size(); ++k) {
    if (j.c[k] == 0.0) return kInf;
    worst = std::max(worst, j.mass[k] / (j.c[k] * j.mass3));
  }
  return worst;
}

bool has_small_boundary(const AtomicMeasure& mu, const BallSpec& B, double kappa) {
  require(B.radius > 0.0, "radius must be positive");
  const BoundaryJumps j = boundary_jumps(mu, B);
  for (std::size_t k = 0; k < j.c.size(); ++k)
    if (!(j.mass[k] <= kappa * j.c[k] * j.mass3)) return false;
  // s = 1: the whole punctured annulus 0 < |x - x0| < 2r.
  const double total = j.mass.empty() ? 0.0 : j.mass.back();
  return total <= kappa * j.mass3;
}

std::optional<double> find_small_boundary_radius(const AtomicMeasure& mu, const Point& x0, double r, double kappa,
                                                 bool closed, int grid) {
  require(r > 0.0, "radius must be positive");
  require(grid >= 1, "grid must be positive");
  std::vector<double> cand;
  cand.reserve(static_cast<std::size_t>(grid) + mu.size() + 1);
  for (int i = 0; i <= grid; ++i) cand.push_back(r * (1.0 + 0.2 * static_cast<double>(i) / grid));
  // Midpoints between consecutive atom distances are the radii farthest
  // from every atom locally, so they are the natural refinement.
  std::vector<double> d;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double di = dist(x0, mu.point(i));
    if (di >= r && di <= 1.2 * r && mu.weight(i) > 0.0) d.push_back(di);
  }
  d.push_back(r);
  d.push_back(1.2 * r);
  std::sort(d.begin(), d.end());
  for (std::size_t k = 0; k + 1 < d.size(); ++k)
    if (d[k + 1] > d[k]) cand.push_back(0.5 * (d[k] + d[k + 1]));
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  for (double R : cand)
    if (R >= r && R <= 1.2 * r && has_small_boundary(mu, BallSpec{x0, R, closed, true}, kappa)) return R;
  return std::nullopt;
}

}  // namespace conesq
