#pragma once

#include <optional>
#include <vector>

#include "conesq/common.hpp"
#include "conesq/geometry.hpp"

namespace conesq {

class AtomicMeasure {
 public:
  AtomicMeasure() = default;
  AtomicMeasure(std::vector<Point> points, std::vector<double> weights);
  static AtomicMeasure uniform(std::vector<Point> points, double total = 1.0);

  std::size_t size() const { return pts_.size(); }
  bool empty() const { return pts_.empty(); }
  int dim() const { return pts_.empty() ? 0 : pts_.front().n; }
  const Point& point(std::size_t i) const { return pts_[i]; }
  double weight(std::size_t i) const { return w_[i]; }
  const std::vector<Point>& points() const { return pts_; }
  const std::vector<double>& weights() const { return w_; }
  double total_mass() const { return total_; }
  // Same atoms, weights multiplied by the mask (restriction to a subset).
  AtomicMeasure restricted(const std::vector<char>& mask) const;
  // Throws unless every atom lies on E.
  void check_on(const ClosedSet& E) const;

 private:
  std::vector<Point> pts_;
  std::vector<double> w_;
  double total_ = 0.0;
};

class ComplexAtomicMeasure {
 public:
  ComplexAtomicMeasure() = default;
  ComplexAtomicMeasure(std::vector<Point> points, std::vector<cplx> weights);
  // The measure f d(mu).
  static ComplexAtomicMeasure density(const AtomicMeasure& mu, const std::vector<cplx>& f);

  std::size_t size() const { return pts_.size(); }
  int dim() const { return pts_.empty() ? 0 : pts_.front().n; }
  const Point& point(std::size_t i) const { return pts_[i]; }
  cplx weight(std::size_t i) const { return w_[i]; }
  const std::vector<Point>& points() const { return pts_; }
  const std::vector<cplx>& weights() const { return w_; }
  AtomicMeasure variation() const;
  double total_variation() const;
  // b with nu = b |nu|; b = 1 on zero-weight atoms.
  std::vector<cplx> polar() const;

 private:
  std::vector<Point> pts_;
  std::vector<cplx> w_;
};

// Masses of balls around one center, by sorted distance.
class RadialProfile {
 public:
  RadialProfile(const AtomicMeasure& mu, const Point& center);
  double open_mass(double r) const;    // mass of |x - c| < r
  double closed_mass(double r) const;  // mass of |x - c| <= r
  double mass(double r, bool closed) const { return closed ? closed_mass(r) : open_mass(r); }
  const std::vector<double>& distances() const { return d_; }
  const std::vector<double>& cumulative() const { return cum_; }

 private:
  std::vector<double> d_;
  std::vector<double> cum_;  // cum_[i] = mass of the first i sorted atoms
};

double ball_mass(const AtomicMeasure& mu, const BallSpec& B);

struct OrderConstant {
  double value = 0.0;            // sup of mu(B(y,r)) / r^m
  std::size_t center = 0;        // maximizing atom
  double radius = 0.0;           // maximizing radius (approached from above)
  double smallest_radius = 0.0;  // min positive inter-atom distance
};

// Exact sup over atom centers and radii r > r_min. With r_min = 0 any atom
// of positive weight makes the value infinite.
OrderConstant order_m_constant(const AtomicMeasure& mu, double m, double r_min = 0.0);
// Same sup restricted to the given (possibly off-support) centers.
double order_m_constant_at(const AtomicMeasure& mu, double m, const std::vector<Point>& centers, double r_min = 0.0);

double doubling_ratio(const AtomicMeasure& mu, const BallSpec& B, double a);
bool is_doubling(const AtomicMeasure& mu, const BallSpec& B, double a, double b);

// Least kappa for which B has kappa-small boundary.
double small_boundary_constant(const AtomicMeasure& mu, const BallSpec& B);
bool has_small_boundary(const AtomicMeasure& mu, const BallSpec& B, double kappa);

// Smallest R in a scan of [r, 1.2 r] with kappa-small boundary; nullopt if none.
std::optional<double> find_small_boundary_radius(const AtomicMeasure& mu, const Point& x0, double r, double kappa,
                                                 bool closed = true, int grid = 256);

// sup_r nu(B(y,r)) / mu(B(y,r)) over r with mu(B(y,r)) > 0 (open balls).
double maximal_centred(const AtomicMeasure& mu, const AtomicMeasure& nu, const Point& y);
double maximal_centred(const AtomicMeasure& mu, const ComplexAtomicMeasure& nu, const Point& y);
// sup_{r > r_min} nu(B(y,r)) / r^m (open balls).
double maximal_radial(const AtomicMeasure& nu, const Point& y, double m, double r_min = 0.0);
double maximal_radial(const ComplexAtomicMeasure& nu, const Point& y, double m, double r_min = 0.0);

}  // namespace conesq
