#include <gtest/gtest.h>

#include "conesq/operator.hpp"

using namespace conesq;

TEST(Operator, PointConeVolumeClosedForm) {
  const ClosedSet E = ClosedSet::point_cloud({Point{0.0, 0.0}});
  const double s = 0.01, t = 1.0;
  const Estimate e = cone_sigma_integral(E, Point{0.0, 0.0}, s, t, [](const Point&, double) { return 1.0; },
                                         QuadratureConfig{20000, 11});
  const double exact = 2.0 * M_PI * std::log(t / s);
  EXPECT_NEAR(e.value, exact, 3.0 * e.stderr + 1e-12);
  EXPECT_LT(e.stderr, 0.02 * exact);
}

TEST(Operator, SingleAtomSquareFunctionHandIntegral) {
  // nu = delta_0, E = {0}: the integrand is |x|^-2m on every shell.
  const ClosedSet E = ClosedSet::point_cloud({Point{0.0, 0.0}});
  const ComplexAtomicMeasure nu({Point{0.0, 0.0}}, {cplx(1.0, 0.0)});
  const Kernel K = power_kernel(1.0, 0.5);
  const double s = 0.1, t = 1.0;
  const Estimate e = square_function(K, nu, Point{0.0, 0.0}, s, t, E, QuadratureConfig{20000, 5});
  const double exact = std::sqrt(M_PI * (1.0 / (s * s) - 1.0 / (t * t)));
  EXPECT_NEAR(e.value, exact, 3.0 * e.stderr + 1e-12);
}

TEST(Operator, ApplyMatchesReverseSummation) {
  Rng rng(1);
  std::vector<Point> pts;
  std::vector<cplx> w;
  for (int i = 0; i < 100; ++i) {
    pts.push_back(Point{rng.uniform(), 0.0});
    w.emplace_back(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  }
  const ClosedSet E = ClosedSet::point_cloud(pts);
  const ComplexAtomicMeasure nu(pts, w);
  for (const Kernel& K : {power_kernel(1.0, 0.5), signed_kernel(1.0, 0.5)}) {
    for (int k = 0; k < 20; ++k) {
      const Point x{rng.uniform(), rng.uniform(0.01, 0.3)};
      cplx ref(0.0, 0.0);
      for (int i = 99; i >= 0; --i) ref += K(x, pts[static_cast<std::size_t>(i)]) * w[static_cast<std::size_t>(i)];
      const cplx got = apply_T(K, nu, x, E);
      EXPECT_NEAR(std::abs(got - ref), 0.0, 1e-12 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST(Operator, KernelValuesByHand) {
  const Kernel P = power_kernel(1.0, 0.5);
  EXPECT_DOUBLE_EQ(std::real(P(Point{0.0, 0.0}, Point{4.0, 0.0})), std::pow(4.0, -1.5));
  const Kernel S = signed_kernel(1.0, 0.5);
  EXPECT_DOUBLE_EQ(std::real(S(Point{0.0, 0.0}, Point{4.0, 0.0})), -4.0 * std::pow(4.0, -2.5));
}

TEST(Operator, KernelEstimatesHold) {
  const ClosedSet E = ClosedSet::segment(Point{0.0, 0.0}, Point{1.0, 0.0});
  for (const Kernel& K : {power_kernel(1.0, 0.5), signed_kernel(1.0, 0.5)}) {
    const KernelCheck c = kernel_estimate_check(K, E, 2000, 3);
    EXPECT_TRUE(c.pass) << K.name << " size " << c.size_ratio << " holder " << c.holder_ratio;
    EXPECT_LE(c.size_ratio, 1.0 + 1e-12);
  }
}

TEST(Operator, ConeSampleReuseMatchesNarrowerTruncation) {
  const ClosedSet E = ClosedSet::hyperplane(2);
  const ConeSampleSet q(E, Point{0.0, 0.0}, 0.01, 1.0, QuadratureConfig{4000, 2});
  const std::vector<double> one(q.samples().size(), 1.0);
  const Estimate all = q.integrate(one);
  const Estimate lo = q.integrate(one, 0.0, 0.1);
  const Estimate hi = q.integrate(one, 0.1, kInf);
  EXPECT_NEAR(all.value, lo.value + hi.value, 1e-9 * all.value);
}

TEST(Operator, SymmetricDifferenceDecaysLikeInverseHeight) {
  // t * sigma should not depend on t; compare each rung with the
  // inverse-variance mean of the ladder.
  const ClosedSet E = ClosedSet::hyperplane(2);
  const double r = 1e-2;
  std::vector<double> v, e;
  for (double t : {10.0, 20.0, 40.0, 80.0}) {
    const SymmetricDifference sd =
        cone_symmetric_difference(E, Point{0.0, 0.0}, Point{r / 2.0, 0.0}, t, r, QuadratureConfig{100000, 8});
    v.push_back(t * sd.sigma.value);
    e.push_back(t * sd.sigma.stderr);
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) num += v[i] / (e[i] * e[i]), den += 1.0 / (e[i] * e[i]);
  const double mean = num / den;
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_LE(std::abs(v[i] - mean), 3.0 * e[i]) << "rung " << i;
}

TEST(Operator, QuadratureIsDeterministic) {
  const ClosedSet E = ClosedSet::circle(2, 0.0, 0.0, 0.5);
  auto run = [&] {
    return cone_sigma_integral(E, Point{0.5, 0.0}, 0.01, 0.5, [](const Point&, double d) { return d; },
                               QuadratureConfig{500, 42});
  };
  const Estimate a = run(), b = run();
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.stderr, b.stderr);
}
