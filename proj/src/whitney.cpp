#include "conesq/whitney.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace conesq {

double whitney_C1(const WhitneyParams& p) { return p.rho / 8.0; }
double whitney_C2(const WhitneyParams& p, double delta) { return (12.0 + p.rho) / (6.0 * delta); }

namespace {

std::vector<double> gaps_to_complement(const std::vector<Point>& pts, const std::vector<char>& in_U) {
  std::vector<Point> out_pts;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (!in_U[i]) out_pts.push_back(pts[i]);
  std::vector<double> g(pts.size(), 0.0);
  if (out_pts.empty()) {
    std::fill(g.begin(), g.end(), kInf);
    return g;
  }
  const PointIndex idx(std::move(out_pts));
  for (std::size_t i = 0; i < pts.size(); ++i) g[i] = in_U[i] ? idx.nearest(pts[i]).first : 0.0;
  return g;
}

double gap_of_point(const Point& x, const std::vector<Point>& pts, const std::vector<char>& in_U) {
  double g = kInf;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (!in_U[i]) g = std::min(g, dist(x, pts[i]));
  return g;
}

}  // namespace

WhitneyChecks verify_whitney(const std::vector<WhitneyBall>& balls, const AtomicMeasure& mu,
                             const std::vector<char>& in_U, const WhitneyParams& params, double delta) {
  WhitneyChecks c;
  const auto& pts = mu.points();
  const double C1 = whitney_C1(params), C2 = whitney_C2(params, delta);
  std::vector<int> owner(pts.size(), -1);
  std::vector<std::size_t> overlap(pts.size(), 0);
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (in_U[i]) c.mass_U += mu.weight(i);
  for (std::size_t b = 0; b < balls.size(); ++b) {
    const BallSpec& B = balls[b].ball;
    const double g = gap_of_point(B.center, pts, in_U);
    // Closed C1 B inside U means every excluded atom lies strictly outside.
    if (!(g > C1 * B.radius)) c.inside = false;
    if (!(g <= C2 * B.radius)) c.reaches = false;
    if (!is_doubling(mu, B, params.a, params.b) || !has_small_boundary(mu, B, params.kappa)) c.regular = false;
    const BallSpec half = B.dilate(0.5 * C1);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (B.contains(pts[i])) {
        if (owner[i] >= 0) c.disjoint = false;
        owner[i] = static_cast<int>(b);
      }
      if (half.contains(pts[i])) ++overlap[i];
    }
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (owner[i] >= 0) c.mass_cover += mu.weight(i);
    c.overlap = std::max(c.overlap, overlap[i]);
  }
  c.mass_fraction = c.mass_cover >= c.mass_U / (2.0 * params.b);
  return c;
}

WhitneyOutcome whitney_cover(const DyadicLattice& lat, const AtomicMeasure& mu, const std::vector<char>& in_U,
                             const WhitneyParams& params) {
  const auto& pts = lat.cloud();
  require(mu.size() == pts.size(), "mu must live on the lattice atoms");
  require(in_U.size() == pts.size(), "U mask size mismatch");
  require(params.a >= 3.0, "need a >= 3");
  require(params.rho >= 16.0 * params.a, "need rho >= 16 a");
  require(lat.num_cubes(lat.kmin()) == 1, "the coarsest level must be a single cube");
  const bool all_in = std::all_of(in_U.begin(), in_U.end(), [](char v) { return v != 0; });
  require(!all_in, "U must be a proper subset of E");

  WhitneyOutcome out;
  out.C1 = whitney_C1(params);
  out.C2 = whitney_C2(params, lat.delta());
  const std::vector<double> gap = gaps_to_complement(pts, in_U);

  // (i) maximal cubes with d(Q, E \ U) >= rho ell(Q), coarse to fine.
  std::vector<char> taken(pts.size(), 0);
  std::vector<CubeRef> cubes;
  for (int k = lat.kmin(); k <= lat.kmax(); ++k) {
    const LatticeLevel& lv = lat.level(k);
    for (std::size_t q = 0; q < lv.members.size(); ++q) {
      const auto& mem = lv.members[q];
      if (taken[mem.front()]) continue;
      double dq = kInf;
      for (std::size_t a : mem) dq = std::min(dq, gap[a]);
      if (dq >= params.rho * lat.ell(k)) {
        cubes.push_back({k, static_cast<int>(q)});
        for (std::size_t a : mem) taken[a] = 1;
      }
    }
  }
  out.whitney_cubes = cubes.size();

  std::vector<WhitneyBall> cand;
  std::ostringstream why;
  bool sandwich = true;
  for (const CubeRef& Q : cubes) {
    const double ell = lat.ell(Q.k);
    const std::size_t zc = lat.level(Q.k).center[static_cast<std::size_t>(Q.idx)];
    const Point& z = pts[zc];
    const double g = gap[zc];
    // (ii) sandwich; the upper side uses the parent's measured spread.
    if (!(g >= params.rho * ell)) sandwich = false;
    if (Q.k > lat.kmin()) {
      const int P = lat.level(Q.k).parent[static_cast<std::size_t>(Q.idx)];
      const CubeRef PR{Q.k - 1, P};
      const Point& zp = lat.center(PR);
      double spread = 0.0;
      for (std::size_t a : lat.members(PR)) spread = std::max(spread, dist(zp, pts[a]));
      const double Cbig = spread / lat.ell(Q.k - 1);
      if (!(g < (2.0 * Cbig + params.rho) * ell / lat.delta())) sandwich = false;
    }
    // (iii) small-boundary inflation.
    const auto R = find_small_boundary_radius(mu, z, 6.0 * ell, params.kappa, true);
    if (!R) {
      out.failure = "no small-boundary radius in [6l, 7.2l] for cube (" + std::to_string(Q.k) + "," +
                    std::to_string(Q.idx) + ")";
      return out;
    }
    WhitneyBall wb;
    wb.ball = BallSpec{z, *R, true, true};
    wb.cube = Q;
    wb.ell = ell;
    wb.gap = g;
    wb.doubling = doubling_ratio(mu, wb.ball, params.a);
    wb.boundary = small_boundary_constant(mu, wb.ball);
    // (iv) doubling filter.
    if (is_doubling(mu, wb.ball, params.a, params.b)) cand.push_back(wb);
  }
  out.regular_balls = cand.size();
  double mass_U = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (in_U[i]) mass_U += mu.weight(i);
  if (cand.empty() && mass_U > 0.0) {
    out.failure = "doubling filter removed every ball; uncovered mass " + std::to_string(mass_U);
    return out;
  }

  // (v)-(vi) all candidates are kept (finite); greedy Vitali selection.
  std::vector<std::size_t> order(cand.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return cand[x].ball.radius > cand[y].ball.radius; });
  const PointIndex index(pts);
  std::vector<char> used(pts.size(), 0);
  for (std::size_t i : order) {
    const auto atoms = index.within(cand[i].ball.center, cand[i].ball.radius, true);
    bool clash = false;
    for (std::size_t a : atoms) clash = clash || used[a];
    if (clash) continue;
    for (std::size_t a : atoms) used[a] = 1;
    out.balls.push_back(cand[i]);
  }

  out.checks = verify_whitney(out.balls, mu, in_U, params, lat.delta());
  out.checks.sandwich = sandwich;
  out.ok = out.checks.all();
  if (!out.ok) {
    why << "post-check failed:";
    if (!out.checks.disjoint) why << " disjoint";
    if (!out.checks.inside) why << " inside";
    if (!out.checks.reaches) why << " reaches";
    if (!out.checks.regular) why << " regular";
    if (!out.checks.mass_fraction) why << " mass";
    if (!out.checks.sandwich) why << " sandwich";
    out.failure = why.str();
  }
  return out;
}

}  // namespace conesq
