#include <gtest/gtest.h>

#include "conesq/suppression.hpp"

using namespace conesq;

namespace {

struct Seg {
  ClosedSet E = ClosedSet::segment(Point{0.0, 0.0}, Point{1.0, 0.0});
  AtomicMeasure mu;
  std::vector<cplx> b;
  BallSpec B;
};

Seg make(std::size_t N) {
  Seg s;
  std::vector<Point> pts;
  for (std::size_t i = 0; i < N; ++i) pts.push_back(Point{(static_cast<double>(i) + 0.5) / static_cast<double>(N), 0.0});
  s.mu = AtomicMeasure::uniform(pts);
  s.b.assign(N, cplx(1.0, 0.0));
  for (std::size_t i = 0; i < N; ++i)
    if (pts[i][0] > 0.6 && pts[i][0] < 0.68) s.b[i] = (i % 2 ? 1.0 : -1.0);
  s.B = BallSpec{pts[N / 2], 0.5, true, true};
  return s;
}

SuppressionParams params(const Seg& s, double lambda0) {
  SuppressionParams p;
  p.lambda0 = lambda0;
  p.m = 1.0;
  p.s_min = 4.0 / static_cast<double>(s.mu.size());
  p.t_max = 1.0;
  p.cfg = QuadratureConfig{128, 9};
  return p;
}

}  // namespace

TEST(Suppression, BoundedByLambdaAndUnchangedOffS) {
  const Seg s = make(128);
  const Kernel K = power_kernel(1.0, 0.5);
  SuppressionParams p = params(s, 1.0);
  const SuppressionData probe = compute_suppression(K, s.E, s.mu, s.b, s.B, p);
  const double mx = *std::max_element(probe.C.begin(), probe.C.end());
  p.lambda0 = 0.9 * mx;
  const SuppressionData data = compute_suppression(K, s.E, s.mu, s.b, s.B, p);
  std::vector<std::vector<cplx>> col(1, s.b);
  for (std::size_t i = 0; i < s.b.size(); ++i) col[0][i] *= s.mu.weight(i);
  const auto pv = paired_square_field(K, s.E, SourceBlock::columns(s.mu.points(), col), s.mu.points(), p.s_min, p.t_max, data);
  std::size_t in_S = 0;
  for (std::size_t i = 0; i < s.b.size(); ++i) {
    if (!data.in_B[i]) continue;
    in_S += data.in_S[i];
    EXPECT_LE(pv[i][0].suppressed.value, p.lambda0 + 3.0 * pv[i][0].suppressed.stderr);
    EXPECT_LE(pv[i][0].suppressed.value, pv[i][0].plain.value + 1e-12);
    if (!data.in_S[i]) EXPECT_EQ(pv[i][0].suppressed.value, pv[i][0].plain.value);
  }
  EXPECT_GT(in_S, 0u);
  EXPECT_LT(in_S, s.b.size());
}

TEST(Suppression, SuppressedKernelKeepsEstimates) {
  const Seg s = make(64);
  const Kernel K = power_kernel(1.0, 0.5);
  SuppressionParams p = params(s, 1.0);
  const SuppressionData data = compute_suppression(K, s.E, s.mu, s.b, s.B, p);
  const Kernel KS = suppressed_kernel(K, data, s.E);
  EXPECT_EQ(KS.K1, K.K1);
  EXPECT_EQ(KS.K2, K.K2);
  EXPECT_TRUE(kernel_estimate_check(KS, s.E, 500, 4).pass);
}

TEST(Suppression, ConeThresholdMarksTheCrossingHeight) {
  const ClosedSet E = ClosedSet::hyperplane(2);
  const ConeSampleSet q(E, Point{0.0, 0.0}, 0.1, 1.0, QuadratureConfig{50, 1});
  const std::vector<double> one(q.samples().size(), 1.0);
  const std::vector<double> zero(q.samples().size(), 0.0);
  EXPECT_EQ(cone_threshold(q, zero, 1.0), 0.0);
  double total = 0.0;
  for (const ConeSample& c : q.samples()) total += c.w;
  const double lambda = std::sqrt(0.5 * total);
  const double t = cone_threshold(q, one, lambda);
  double above = 0.0, at_or_above = 0.0;
  for (const ConeSample& c : q.samples()) {
    if (c.d > t) above += c.w;
    if (c.d >= t) at_or_above += c.w;
  }
  EXPECT_LE(above, lambda * lambda);
  EXPECT_GT(at_or_above, lambda * lambda);
}

TEST(Suppression, BigPieceFromExceptionalSets) {
  const std::size_t N = 100;
  std::vector<Point> pts;
  for (std::size_t i = 0; i < N; ++i) pts.push_back(Point{static_cast<double>(i) / N, 0.0});
  const AtomicMeasure mu = AtomicMeasure::uniform(pts);
  const std::vector<char> in_B(N, 1), S(N, 0);
  std::vector<std::vector<char>> ex(4, std::vector<char>(N, 0));
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = 10 * j; i < 10 * j + 10; ++i) ex[j][i] = 1;
  const BigPieceSet G = build_big_piece(mu, in_B, ex, S, 0.5);
  EXPECT_TRUE(G.hypothesis);
  EXPECT_NEAR(G.worst_exceptional, 0.1, 1e-12);
  // p0 is the share of seeds for which the atom is neither exceptional nor in S.
  EXPECT_DOUBLE_EQ(G.p0[5], 0.75);
  EXPECT_DOUBLE_EQ(G.p0[60], 1.0);
  EXPECT_GE(G.mass_G, G.bound);
}
