#include <gtest/gtest.h>

#include "conesq/measure.hpp"
#include "conesq/oracle.hpp"
#include "conesq/whitney.hpp"

using namespace conesq;

namespace {

struct Cover {
  std::vector<Point> pts;
  AtomicMeasure mu;
  std::shared_ptr<const DyadicLattice> lat;
};

Cover segment(std::size_t N, int levels, std::uint64_t seed) {
  Cover s;
  for (std::size_t i = 0; i < N; ++i) s.pts.push_back(Point{(static_cast<double>(i) + 0.5) / static_cast<double>(N), 0.0});
  s.mu = AtomicMeasure::uniform(s.pts);
  const std::size_t fixed = N / 2;
  const int kmin = choose_k0(0.125, 0.5);
  auto nets = std::make_shared<const NetHierarchy>(build_nets(s.pts, 0.125, fixed, kmin, kmin + levels - 1));
  s.lat = std::make_shared<const DyadicLattice>(prepare_lattice(nets), RandomConfig{seed, 1, 2, kmin, kmin + levels - 1});
  return s;
}

}  // namespace

TEST(Whitney, MiddleThirdCoverVerifiedExhaustively) {
  const Cover s = segment(1024, 6, 3);
  std::vector<char> U(s.pts.size(), 0);
  for (std::size_t i = 0; i < s.pts.size(); ++i) U[i] = s.pts[i][0] > 1.0 / 3.0 && s.pts[i][0] < 2.0 / 3.0;
  const WhitneyParams p{3.0, 48.0, 100.0, 200.0};
  const WhitneyOutcome w = whitney_cover(*s.lat, s.mu, U, p);
  ASSERT_TRUE(w.ok) << w.failure;
  ASSERT_FALSE(w.balls.empty());

  // Independent re-derivation of each property from atoms.
  std::vector<int> hits(s.pts.size(), 0);
  double covered = 0.0, massU = 0.0;
  for (std::size_t i = 0; i < s.pts.size(); ++i) massU += U[i] ? s.mu.weight(i) : 0.0;
  for (const WhitneyBall& b : w.balls) {
    bool reaches = false;
    for (std::size_t i = 0; i < s.pts.size(); ++i) {
      const double d = dist(s.pts[i], b.ball.center);
      if (d <= b.ball.radius) ++hits[i];
      if (d <= w.C1 * b.ball.radius) EXPECT_TRUE(U[i]);
      if (d <= w.C2 * b.ball.radius && !U[i]) reaches = true;
    }
    EXPECT_TRUE(reaches);
    EXPECT_TRUE(oracle::is_doubling(s.mu, b.ball, p.a, p.b));
    EXPECT_TRUE(oracle::has_small_boundary(s.mu, b.ball, p.kappa));
  }
  for (std::size_t i = 0; i < s.pts.size(); ++i) {
    EXPECT_LE(hits[i], 1) << "atom " << i;
    if (hits[i]) covered += s.mu.weight(i);
  }
  EXPECT_GE(covered, massU / (2.0 * p.b));
  EXPECT_TRUE(verify_whitney(w.balls, s.mu, U, p, s.lat->delta()).all());
  EXPECT_TRUE(w.checks.all());
}

TEST(Whitney, ConstantsFollowParameters) {
  const WhitneyParams p{10.0, 160.0, 100.0, 200.0};
  EXPECT_DOUBLE_EQ(whitney_C1(p), 20.0);
  EXPECT_DOUBLE_EQ(whitney_C2(p, 0.125), 172.0 / 0.75);
  EXPECT_GE(whitney_C1(p), 2.0 * p.a);
}

TEST(Whitney, VerifierRejectsOverlappingBalls) {
  const Cover s = segment(1024, 6, 5);
  std::vector<char> U(s.pts.size(), 0);
  for (std::size_t i = 0; i < s.pts.size(); ++i) U[i] = s.pts[i][0] > 0.25 && s.pts[i][0] < 0.75;
  const WhitneyParams p{3.0, 48.0, 100.0, 200.0};
  WhitneyOutcome w = whitney_cover(*s.lat, s.mu, U, p);
  ASSERT_TRUE(w.ok) << w.failure;
  std::vector<WhitneyBall> dup = w.balls;
  dup.push_back(w.balls.front());
  EXPECT_FALSE(verify_whitney(dup, s.mu, U, p, s.lat->delta()).disjoint);
}

TEST(Whitney, RejectsWholeSet) {
  const Cover s = segment(256, 4, 1);
  const std::vector<char> U(s.pts.size(), 1);
  EXPECT_THROW(whitney_cover(*s.lat, s.mu, U, WhitneyParams{}), Error);
}
