#pragma once

#include <climits>
#include <cstdint>
#include <memory>
#include <vector>

#include "conesq/common.hpp"
#include "conesq/geometry.hpp"

namespace conesq {

// Nested maximal delta^k-separated nets X_kmin ⊂ ... ⊂ X_kmax of a point
// cloud, all containing the fixed point.
struct NetHierarchy {
  double delta = 0.125;
  int kmin = 0;
  int kmax = 0;
  std::size_t fixed = 0;
  std::shared_ptr<const std::vector<Point>> cloud;
  std::vector<std::vector<std::size_t>> nets;  // nets[k - kmin] = atom indices

  const std::vector<std::size_t>& level(int k) const { return nets.at(static_cast<std::size_t>(k - kmin)); }
  double scale(int k) const { return std::pow(delta, k); }
  std::size_t num_atoms() const { return cloud->size(); }
};

NetHierarchy build_nets(std::vector<Point> cloud, double delta, std::size_t fixed_point, int kmin, int kmax);
NetHierarchy build_nets(const ClosedSet& E, double delta, std::size_t fixed_point, int kmin, int kmax);
// Separation and maximality of every level by pairwise scan.
bool verify_nets(const NetHierarchy& nets);

// omega restricted to [k0, k1]: each coordinate uniform over
// {0..L} x {1..M}, frozen to the reference value outside the range.
struct RandomConfig {
  std::uint64_t seed = 0;
  int L = 1;
  int M = 2;
  int k0 = 0;
  int k1 = -1;

  std::uint64_t alphabet() const { return static_cast<std::uint64_t>(M) * static_cast<std::uint64_t>(L + 1); }
  // Coordinate omega(k) encoded as l * M + (j - 1); the reference value is 0.
  std::uint64_t code(int k) const;
  std::pair<int, int> omega(int k) const {
    const auto c = code(k);
    return {static_cast<int>(c / static_cast<std::uint64_t>(M)), static_cast<int>(c % static_cast<std::uint64_t>(M)) + 1};
  }
  static RandomConfig reference(int L = 1, int M = 2) { return RandomConfig{0, L, M, 0, -1}; }
};

// omega-independent neighbor data shared by every lattice on one hierarchy.
struct LatticeSkeleton {
  std::shared_ptr<const NetHierarchy> nets;
  double shift = 0.25;  // centers move at most shift * delta^k
  // [k - kmin][alpha] -> positions in level k+1 eligible as shifted centers
  std::vector<std::vector<std::vector<int>>> center_candidates;
  // [k - kmin][beta] -> positions in level k that may parent level-(k+1) point beta
  std::vector<std::vector<std::vector<int>>> parent_candidates;
  // [k - kmin][atom] -> position in level k, or -1
  std::vector<std::vector<int>> position;
  // atom -> position of its nearest finest-level net point
  std::vector<int> base_label;
};

double default_shift(double delta);
std::shared_ptr<const LatticeSkeleton> prepare_lattice(std::shared_ptr<const NetHierarchy> nets, double shift = -1.0);

struct CubeRef {
  int k = 0;
  int idx = 0;
  bool operator==(const CubeRef& o) const { return k == o.k && idx == o.idx; }
  bool operator<(const CubeRef& o) const { return k != o.k ? k < o.k : idx < o.idx; }
};

struct LatticeLevel {
  int k = 0;
  std::vector<std::size_t> ref;     // x^k_alpha (atom index)
  std::vector<std::size_t> center;  // z^k_alpha(omega) (atom index)
  std::vector<int> parent;          // cube at level k-1, -1 on the top level
  std::vector<std::vector<int>> children;
  std::vector<int> label;                         // atom -> cube
  std::vector<std::vector<std::size_t>> members;  // cube -> atoms, ascending
};

class DyadicLattice {
 public:
  DyadicLattice(std::shared_ptr<const LatticeSkeleton> skeleton, const RandomConfig& omega);

  int kmin() const { return nets().kmin; }
  int kmax() const { return nets().kmax; }
  double delta() const { return nets().delta; }
  double ell(int k) const { return std::pow(delta(), k); }
  const NetHierarchy& nets() const { return *skeleton_->nets; }
  const std::vector<Point>& cloud() const { return *nets().cloud; }
  std::size_t num_atoms() const { return cloud().size(); }
  const RandomConfig& config() const { return omega_; }
  const std::shared_ptr<const LatticeSkeleton>& skeleton() const { return skeleton_; }

  const LatticeLevel& level(int k) const { return levels_.at(static_cast<std::size_t>(k - kmin())); }
  std::size_t num_cubes(int k) const { return level(k).ref.size(); }
  const std::vector<std::size_t>& members(CubeRef q) const { return level(q.k).members[static_cast<std::size_t>(q.idx)]; }
  const Point& center(CubeRef q) const { return cloud()[level(q.k).center[static_cast<std::size_t>(q.idx)]]; }
  // Cube of level k containing the atom.
  CubeRef cube_of(std::size_t atom, int k) const { return {k, level(k).label[atom]}; }

 private:
  std::shared_ptr<const LatticeSkeleton> skeleton_;
  RandomConfig omega_;
  std::vector<LatticeLevel> levels_;
};

std::shared_ptr<const DyadicLattice> build_lattice(const NetHierarchy& nets, const RandomConfig& omega,
                                                   double shift = -1.0);

struct LatticeCheck {
  bool partition = true;
  bool nesting = true;
  double c_small = kInf;  // min over cubes of d(z, E \ Q) / delta^k
  double C_big = 0.0;     // max over cubes of max_{x in Q} |x - z| / delta^k
  std::string detail;
};
LatticeCheck check_lattice(const DyadicLattice& lat);
bool lattices_identical(const DyadicLattice& a, const DyadicLattice& b);

// k0 with r < delta^k0 / 8 <= r / delta.
int choose_k0(double delta, double r);

class RestrictedLattice {
 public:
  RestrictedLattice(std::shared_ptr<const DyadicLattice> lattice, const BallSpec& B);

  const DyadicLattice& lattice() const { return *lat_; }
  const std::shared_ptr<const DyadicLattice>& lattice_ptr() const { return lat_; }
  const BallSpec& ball() const { return ball_; }
  int k0() const { return k0_; }
  CubeRef top() const { return {k0_, top_}; }
  // Cubes of level k (k >= k0) inside Q_B.
  const std::vector<int>& cubes(int k) const { return cubes_.at(static_cast<std::size_t>(k - k0_)); }
  bool contains(CubeRef q) const;
  const std::vector<std::size_t>& top_atoms() const { return lat_->members(top()); }

 private:
  std::shared_ptr<const DyadicLattice> lat_;
  BallSpec ball_;
  int k0_ = 0;
  int top_ = 0;
  std::vector<std::vector<int>> cubes_;
};

RestrictedLattice restrict_to_ball(std::shared_ptr<const DyadicLattice> lattice, const BallSpec& B);

struct GoodnessParams {
  double gamma = 1.0 / 6.0;
  int r = 1;
};
double goodness_gamma(double alpha, double m);

// Distances from the atoms of R to every atom of E.
struct CubeDistanceField {
  CubeRef R;
  double ell = 1.0;
  std::vector<double> d;
};
CubeDistanceField distance_field(const DyadicLattice& D0, CubeRef R);

// Coarsest level of a cube Q in D_B(omega), coarser than R, that violates
// the goodness inequality; INT_MAX when there is none.
int coarsest_bad_level(const CubeDistanceField& field, const RestrictedLattice& DB, double gamma);
bool is_bad_for(int kR, int k0, int coarsest_bad, int r);
bool is_good(const DyadicLattice& D0, CubeRef R, const RestrictedLattice& DB, const GoodnessParams& params);

struct BadnessEstimate {
  std::vector<int> r;
  std::vector<std::size_t> bad_count;
  std::vector<double> p_hat;
  std::vector<double> lo;  // 95% Wilson interval
  std::vector<double> hi;
  std::size_t seeds = 0;
  double eta_hat = 0.0;  // fitted exponent in p ~ C delta^(gamma r eta); 0 if not fittable
  double C_hat = 0.0;
  double tau = 0.0;  // single-coordinate hit probability 1 / (M (L + 1))
};

struct BadnessRequest {
  CubeRef R;
  BallSpec B;
  int k1 = 0;  // omega is random on [k0(B), k1]
  double gamma = 1.0 / 6.0;
  std::vector<int> r{1, 2, 3, 4};
  std::size_t seeds = 10000;
  std::uint64_t master_seed = 1;
  int L = 1;
  int M = 2;
};

BadnessEstimate estimate_badness_probability(const DyadicLattice& D0, const BadnessRequest& req);

std::pair<double, double> wilson_interval(std::size_t hits, std::size_t n, double z = 1.959963984540054);

}  // namespace conesq
