#include <gtest/gtest.h>

#include <climits>

#include "conesq/lattice.hpp"
#include "conesq/oracle.hpp"

using namespace conesq;

namespace {

std::vector<Point> grid(std::size_t N) {
  std::vector<Point> pts;
  for (std::size_t i = 0; i < N; ++i) pts.push_back(Point{(static_cast<double>(i) + 0.5) / static_cast<double>(N), 0.0});
  return pts;
}

struct Fixture {
  std::shared_ptr<const LatticeSkeleton> skel;
  BallSpec W;
};

Fixture make(const std::vector<Point>& pts, std::size_t fixed, double delta, int levels) {
  double R = 0.0;
  for (const Point& p : pts) R = std::max(R, dist(p, pts[fixed]));
  const int kmin = choose_k0(delta, R);
  auto nets = std::make_shared<const NetHierarchy>(build_nets(pts, delta, fixed, kmin, kmin + levels - 1));
  return {prepare_lattice(nets), BallSpec{pts[fixed], R, true, true}};
}

double set_distance(const std::vector<Point>& pts, const std::vector<std::size_t>& A, const std::vector<char>& inB) {
  double d = kInf;
  for (std::size_t a : A)
    for (std::size_t b = 0; b < pts.size(); ++b)
      if (inB[b]) d = std::min(d, dist(pts[a], pts[b]));
  return d;
}

}  // namespace

TEST(Lattice, NetsSeparatedAndMaximalByPairwiseScan) {
  const auto pts = grid(1000);
  const NetHierarchy h = build_nets(pts, 0.125, 500, 0, 3);
  EXPECT_TRUE(verify_nets(h));
  for (int k = 0; k <= 3; ++k) {
    const auto& X = h.level(k);
    for (std::size_t i = 0; i < X.size(); ++i)
      for (std::size_t j = i + 1; j < X.size(); ++j) EXPECT_GE(dist(pts[X[i]], pts[X[j]]), h.scale(k));
    for (const Point& p : pts) {
      double best = kInf;
      for (std::size_t x : X) best = std::min(best, dist(p, pts[x]));
      EXPECT_LT(best, h.scale(k));
    }
  }
}

TEST(Lattice, TwoLevelHandExample) {
  const std::vector<Point> pts{Point{0.0}, Point{0.3}, Point{0.6}, Point{1.0}};
  auto nets = std::make_shared<const NetHierarchy>(build_nets(pts, 0.25, 1, 0, 1));
  const DyadicLattice lat(prepare_lattice(nets), RandomConfig::reference());
  EXPECT_EQ(lat.num_cubes(0), 1u);
  EXPECT_TRUE(oracle::lattice_partition(lat));
  EXPECT_TRUE(oracle::lattice_nesting(lat));
  std::vector<int> seen(pts.size(), 0);
  for (std::size_t q = 0; q < lat.num_cubes(1); ++q)
    for (std::size_t a : lat.members(CubeRef{1, static_cast<int>(q)})) ++seen[a];
  for (int s : seen) EXPECT_EQ(s, 1);
}

TEST(Lattice, PartitionNestingAndDeterminism) {
  Rng rng(4);
  std::vector<Point> pts;
  while (pts.size() < 400) {
    const Point p{static_cast<double>(rng.below(4096)) / 4096.0, static_cast<double>(rng.below(4096)) / 4096.0};
    if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
  }
  const Fixture f = make(pts, 0, 0.125, 4);
  for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
    const RandomConfig om{seed, 1, 2, f.skel->nets->kmin, f.skel->nets->kmax};
    const DyadicLattice a(f.skel, om), b(f.skel, om);
    EXPECT_TRUE(oracle::lattice_partition(a));
    EXPECT_TRUE(oracle::lattice_nesting(a));
    EXPECT_TRUE(lattices_identical(a, b));
    const LatticeCheck c = check_lattice(a);
    EXPECT_TRUE(c.partition && c.nesting) << c.detail;
    EXPECT_GT(c.c_small, 0.0);
    EXPECT_LT(c.C_big, 4.0);
  }
}

TEST(Lattice, RestrictedTopCubeContainsBall) {
  const auto pts = grid(512);
  const Fixture f = make(pts, 256, 0.125, 5);
  auto lat = std::make_shared<const DyadicLattice>(f.skel, RandomConfig{7, 1, 2, f.skel->nets->kmin, f.skel->nets->kmax});
  const BallSpec B{pts[256], 0.1, true, true};
  const RestrictedLattice DB(lat, B);
  std::vector<char> top(pts.size(), 0);
  for (std::size_t a : DB.top_atoms()) top[a] = 1;
  for (std::size_t a = 0; a < pts.size(); ++a)
    if (B.contains(pts[a])) EXPECT_TRUE(top[a]) << "atom " << a;
}

TEST(Lattice, GoodnessMatchesDirectDistanceComputation) {
  const auto pts = grid(256);
  const Fixture f = make(pts, 128, 0.25, 5);
  const DyadicLattice D0(f.skel, RandomConfig::reference());
  const int kR = D0.kmax();
  const double gamma = 0.2;
  std::size_t bad_seen = 0;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto lat = std::make_shared<const DyadicLattice>(f.skel, RandomConfig{seed, 1, 2, D0.kmin(), D0.kmax()});
    const RestrictedLattice DB(lat, f.W);
    for (int r : {1, 2}) {
      for (std::size_t q = 0; q < D0.num_cubes(kR); ++q) {
        const CubeRef R{kR, static_cast<int>(q)};
        bool bad = false;
        for (int l = DB.k0(); l <= kR - r && kR > DB.k0() + r; ++l) {
          const double thr = std::pow(D0.ell(kR), gamma) * std::pow(lat->ell(l), 1.0 - gamma);
          for (int Q : DB.cubes(l)) {
            std::vector<char> inQ(pts.size(), 0), outQ(pts.size(), 1);
            for (std::size_t a : lat->members(CubeRef{l, Q})) inQ[a] = 1, outQ[a] = 0;
            const double dQ = set_distance(pts, D0.members(R), inQ);
            const double dOut = set_distance(pts, D0.members(R), outQ);
            if (dQ < thr && dOut < thr) bad = true;
          }
        }
        bad_seen += bad;
        EXPECT_EQ(is_good(D0, R, DB, GoodnessParams{gamma, r}), !bad) << "seed " << seed << " cube " << q;
      }
    }
  }
  EXPECT_GT(bad_seen, 0u);  // the boundary-hugging case occurs
}

TEST(Lattice, BadnessEstimateIsReproducible) {
  const auto pts = grid(256);
  const Fixture f = make(pts, 128, 0.25, 6);
  const DyadicLattice D0(f.skel, RandomConfig::reference());
  BadnessRequest req;
  req.B = f.W;
  req.k1 = D0.kmax();
  req.R = D0.cube_of(100, req.k1);
  req.gamma = goodness_gamma(0.5, 1.0);
  req.seeds = 400;
  req.master_seed = 3;
  const BadnessEstimate a = estimate_badness_probability(D0, req);
  const BadnessEstimate b = estimate_badness_probability(D0, req);
  EXPECT_EQ(a.bad_count, b.bad_count);
  for (std::size_t i = 0; i < a.r.size(); ++i) {
    EXPECT_LE(a.lo[i], a.p_hat[i]);
    EXPECT_GE(a.hi[i], a.p_hat[i]);
  }
}

TEST(Lattice, RejectsBadDelta) {
  EXPECT_THROW(build_nets(grid(10), 0.75, 0, 0, 2), Error);
}
