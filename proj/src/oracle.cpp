#include "conesq/oracle.hpp"

#include <algorithm>

namespace conesq::oracle {

double ball_mass(const AtomicMeasure& mu, const Point& c, double r, bool closed) {
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double d = dist(c, mu.point(i));
    if (closed ? d <= r : d < r) s += mu.weight(i);
  }
  return s;
}

bool is_doubling(const AtomicMeasure& mu, const BallSpec& B, double a, double b) {
  return ball_mass(mu, B.center, a * B.radius, B.closed) <= b * ball_mass(mu, B.center, B.radius, B.closed);
}

bool has_small_boundary(const AtomicMeasure& mu, const BallSpec& B, double kappa) {
  const double r = B.radius;
  const double m3 = ball_mass(mu, B.center, 3.0 * r, B.closed);
  // The annulus mass is a step function of s; its worst ratio is reached
  // just above each atom's own offset, plus the full annulus at s = 1.
  std::vector<double> cands{1.0};
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double c = std::abs(dist(B.center, mu.point(i)) - r) / r;
    if (c < 1.0 && mu.weight(i) > 0.0) cands.push_back(c);
  }
  for (double s : cands) {
    double ann = 0.0;
    for (std::size_t j = 0; j < mu.size(); ++j) {
      if (!(mu.weight(j) > 0.0)) continue;
      const double c = std::abs(dist(B.center, mu.point(j)) - r) / r;
      if (s < 1.0 ? c <= s : c < 1.0) ann += mu.weight(j);
    }
    if (!(ann <= kappa * s * m3)) return false;
  }
  return true;
}

double maximal_centred(const AtomicMeasure& mu, const AtomicMeasure& nu, const Point& y) {
  std::vector<double> radii;
  for (const Point& p : mu.points()) radii.push_back(dist(y, p));
  for (const Point& p : nu.points()) radii.push_back(dist(y, p));
  double best = 0.0;
  for (double r : radii) {
    const double m = ball_mass(mu, y, r, true);
    if (m > 0.0) best = std::max(best, ball_mass(nu, y, r, true) / m);
  }
  return best;
}

double maximal_radial(const AtomicMeasure& nu, const Point& y, double m, double r_min) {
  std::vector<double> radii{r_min};
  for (const Point& p : nu.points()) radii.push_back(dist(y, p));
  double best = 0.0;
  for (double r : radii) {
    if (r < r_min) continue;
    const double mass = ball_mass(nu, y, r, true);  // open ball of radius r + 0
    if (!(mass > 0.0)) continue;
    if (r <= 0.0) return kInf;
    best = std::max(best, mass / std::pow(r, m));
  }
  return best;
}

bool lattice_partition(const DyadicLattice& lat) {
  const std::size_t N = lat.num_atoms();
  for (int k = lat.kmin(); k <= lat.kmax(); ++k) {
    std::vector<int> hits(N, 0);
    const LatticeLevel& L = lat.level(k);
    for (std::size_t q = 0; q < L.members.size(); ++q) {
      if (L.members[q].empty()) return false;
      for (std::size_t a : L.members[q]) {
        if (a >= N || L.label[a] != static_cast<int>(q)) return false;
        ++hits[a];
      }
    }
    if (std::any_of(hits.begin(), hits.end(), [](int h) { return h != 1; })) return false;
  }
  return true;
}

bool lattice_nesting(const DyadicLattice& lat) {
  for (int k = lat.kmin() + 1; k <= lat.kmax(); ++k) {
    const LatticeLevel& L = lat.level(k);
    const LatticeLevel& P = lat.level(k - 1);
    for (std::size_t q = 0; q < L.members.size(); ++q) {
      const int p = L.parent[q];
      if (p < 0) return false;
      const auto& pm = P.members[static_cast<std::size_t>(p)];
      for (std::size_t a : L.members[q])
        if (!std::binary_search(pm.begin(), pm.end(), a)) return false;
    }
  }
  return true;
}

}  // namespace conesq::oracle
