#include <gtest/gtest.h>

#include <set>

#include "conesq/martingale.hpp"

using namespace conesq;

namespace {

struct Line {
  std::vector<Point> pts;
  AtomicMeasure mu;
  std::shared_ptr<const RestrictedLattice> DB;
};

Line make_line(std::size_t N, int levels, std::uint64_t seed) {
  Line l;
  Rng rng(seed);
  std::set<std::uint64_t> xs;
  while (xs.size() < N) xs.insert(rng.below(1 << 16));
  for (auto x : xs) l.pts.push_back(Point{static_cast<double>(x) / 65536.0, 0.0});
  l.mu = AtomicMeasure::uniform(l.pts);
  const std::size_t fixed = N / 2;
  double R = 0.0;
  for (const Point& p : l.pts) R = std::max(R, dist(p, l.pts[fixed]));
  const int kmin = choose_k0(0.125, R);
  auto nets = std::make_shared<const NetHierarchy>(build_nets(l.pts, 0.125, fixed, kmin, kmin + levels - 1));
  auto lat = std::make_shared<const DyadicLattice>(prepare_lattice(nets), RandomConfig{seed, 1, 2, kmin, kmin + levels - 1});
  l.DB = std::make_shared<const RestrictedLattice>(lat, BallSpec{l.pts[fixed], R, true, true});
  return l;
}

std::vector<cplx> random_f(std::size_t N, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<cplx> f(N);
  for (auto& v : f) v = cplx(rng.normal(), rng.normal());
  return f;
}

}  // namespace

TEST(Martingale, ConstantBGivesOrthogonalDecomposition) {
  const Line l = make_line(300, 4, 1);
  const std::vector<cplx> b(l.pts.size(), cplx(1.0, 0.0));
  const BAdaptedSystem sys = compute_stopping_and_transit(l.DB, l.mu, b, 0.5);
  EXPECT_TRUE(sys.stopping.empty());
  const auto f = random_f(l.pts.size(), 2);
  const MartingaleDecomposition dec = decompose(f, sys);
  const MartingaleChecks c = check_decomposition(f, sys, dec);
  EXPECT_LE(c.reconstruction, 1e-12);
  EXPECT_LE(c.zero_mean, 1e-12);
  EXPECT_NEAR(c.energy_ratio, 1.0, 1e-10);
}

TEST(Martingale, AccretiveBReconstructs) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Line l = make_line(256, 5, seed);
    Rng rng(seed + 100);
    std::vector<cplx> b(l.pts.size());
    for (auto& v : b) v = std::polar(1.0, rng.uniform(-M_PI / 4.0, M_PI / 4.0));
    const BAdaptedSystem sys = compute_stopping_and_transit(l.DB, l.mu, b, 0.5);
    const auto f = random_f(l.pts.size(), seed);
    const MartingaleDecomposition dec = decompose(f, sys);
    const MartingaleChecks c = check_decomposition(f, sys, dec);
    EXPECT_LE(c.reconstruction, 1e-10);
    EXPECT_LE(c.zero_mean, 1e-12);
    EXPECT_TRUE(c.supports_nested);
    const auto back = dec.reconstruct(l.pts.size());
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(std::abs(back[i] - f[i]), 0.0, 1e-10);
  }
}

TEST(Martingale, StoppingCubesAreExactlyTheMaximalSmallMeanCubes) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Line l = make_line(256, 5, seed);
    const DyadicLattice& L = l.DB->lattice();
    Rng rng(seed);
    std::vector<cplx> b(l.pts.size());
    for (std::size_t i = 0; i < b.size(); ++i)
      b[i] = (l.pts[i][0] > 0.6 && l.pts[i][0] < 0.7) ? std::polar(1.0, rng.uniform(0.0, 6.28)) : cplx(1.0, 0.0);
    const double c_acc = 0.5;
    const BAdaptedSystem sys = compute_stopping_and_transit(l.DB, l.mu, b, c_acc);
    auto small = [&](CubeRef q) {
      cplx s(0.0, 0.0);
      double m = 0.0;
      for (std::size_t a : L.members(q)) s += b[a] * l.mu.weight(a), m += l.mu.weight(a);
      return m > 0.0 && std::abs(s) < c_acc * m;
    };
    std::set<CubeRef> want;
    for (int k = l.DB->k0(); k <= L.kmax(); ++k)
      for (int q : l.DB->cubes(k)) {
        CubeRef Q{k, q};
        if (!small(Q)) continue;
        bool maximal = true;
        for (CubeRef P = Q; P.k > l.DB->k0();) {
          P = CubeRef{P.k - 1, L.level(P.k).parent[static_cast<std::size_t>(P.idx)]};
          if (small(P)) maximal = false;
        }
        if (maximal) want.insert(Q);
      }
    const std::set<CubeRef> got(sys.stopping.begin(), sys.stopping.end());
    EXPECT_EQ(got, want) << "seed " << seed;
  }
}

TEST(Martingale, CoefficientByHand) {
  // lQ = lR = 1, d = 2, mu = 4 and 9, m = 1, s = 1/2: D = 4.
  EXPECT_DOUBLE_EQ(coefficient(1.0, 1.0, 2.0, 4.0, 9.0, 1.0, 0.5), std::pow(4.0, -1.5) * 6.0);
}

TEST(Martingale, PowerIterationMatchesDenseNorm) {
  CoefficientMatrix A;
  A.rows = 2;
  A.cols = 2;
  A.a = {3.0, 1.0, 1.0, 3.0};
  const NormEstimate n = matrix_norm(A);
  EXPECT_TRUE(n.converged);
  EXPECT_NEAR(n.norm, 4.0, 1e-9);
}

TEST(Martingale, TopCubeMustBeTransit) {
  const Line l = make_line(64, 3, 1);
  const std::vector<cplx> b(l.pts.size(), cplx(1.0, 0.0));
  const std::vector<char> H(l.pts.size(), 1);
  EXPECT_THROW(compute_stopping_and_transit(l.DB, l.mu, b, 0.5, H), Error);
}
