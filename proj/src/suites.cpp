#include "conesq/suites.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "conesq/oracle.hpp"

namespace conesq {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Record make_record(std::string check, std::string property, json measured, json tolerance, bool pass,
                   std::uint64_t seed, Clock::time_point t0) {
  Record r;
  r.check = std::move(check);
  r.property = std::move(property);
  r.measured = std::move(measured);
  r.tolerance = std::move(tolerance);
  r.pass = pass;
  r.seed = seed;
  r.runtime_ms = 1000.0 * seconds_since(t0);
  return r;
}

double dyadic(Rng& rng, std::uint64_t lo, std::uint64_t hi, double den) {
  return static_cast<double>(lo + rng.below(hi - lo + 1)) / den;
}

std::vector<Point> line_points(std::size_t N) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < N; ++i) out.push_back(Point{(static_cast<double>(i) + 0.5) / static_cast<double>(N), 0.0});
  return out;
}

std::vector<Point> circle_points(std::size_t N, double R) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < N; ++i) {
    const double th = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(N);
    out.push_back(Point{R * std::cos(th), R * std::sin(th)});
  }
  return out;
}

std::size_t nearest_to_centroid(const std::vector<Point>& pts) {
  Point c(pts.front().n);
  for (const Point& p : pts) c = c + p;
  c = (1.0 / static_cast<double>(pts.size())) * c;
  return PointIndex(pts).nearest(c).second;
}

BallSpec enclosing_ball(const std::vector<Point>& pts, std::size_t fixed) {
  double R = 0.0;
  for (const Point& p : pts) R = std::max(R, dist(p, pts[fixed]));
  return BallSpec{pts[fixed], R > 0.0 ? R : 1.0, true, true};
}

struct LatticeBundle {
  std::shared_ptr<const LatticeSkeleton> skel;
  BallSpec W;
  int kmin = 0, kmax = 0;
};

LatticeBundle lattice_bundle(const std::vector<Point>& pts, double delta, int levels) {
  LatticeBundle lb;
  const std::size_t fixed = nearest_to_centroid(pts);
  lb.W = enclosing_ball(pts, fixed);
  lb.kmin = choose_k0(delta, lb.W.radius);
  lb.kmax = lb.kmin + levels - 1;
  auto nets = std::make_shared<const NetHierarchy>(build_nets(pts, delta, fixed, lb.kmin, lb.kmax));
  lb.skel = prepare_lattice(nets);
  return lb;
}

std::shared_ptr<const DyadicLattice> lattice_for(const LatticeBundle& lb, std::uint64_t seed) {
  return std::make_shared<const DyadicLattice>(lb.skel, RandomConfig{seed, 1, 2, lb.kmin, lb.kmax});
}

// ---------------------------------------------------------------- 1

CriterionResult exact_measure(std::uint64_t seed) {
  CriterionResult res;
  std::size_t comparisons = 0, mismatches = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto t0 = Clock::now();
    Rng rng(derive_seed(seed, {1, s}));
    const int n = 1 + static_cast<int>(s % 3);
    const std::size_t N = 2 + rng.below(499);
    std::vector<Point> pts;
    std::vector<double> wm, wn;
    for (std::size_t i = 0; i < N; ++i) {
      Point p(n);
      for (int c = 0; c < n; ++c) p[c] = dyadic(rng, 0, 256, 256.0);
      pts.push_back(p);
      wm.push_back(dyadic(rng, 0, 16, 1024.0));
      wn.push_back(rng.below(3) == 0 ? dyadic(rng, 1, 64, 1024.0) : 0.0);
    }
    wm[0] = std::max(wm[0], 1.0 / 1024.0);
    const AtomicMeasure mu(pts, wm), nu(pts, wn);
    std::size_t cmp = 0, bad = 0;
    auto same = [&](auto x, auto y) {
      ++cmp;
      if (!(x == y)) ++bad;
    };
    for (int b = 0; b < 6; ++b) {
      Point c = pts[rng.below(N)];
      if (b % 2 == 1)
        for (int k = 0; k < n; ++k) c[k] = dyadic(rng, 0, 512, 512.0);
      double r = dist(c, pts[rng.below(N)]) * (b < 3 ? 1.0 : rng.uniform(0.25, 1.5));
      if (!(r > 0.0)) r = 0.5;
      const BallSpec B{c, r, b % 3 != 0, true};
      same(ball_mass(mu, B), oracle::ball_mass(mu, c, r, B.closed));
      for (auto [a, bb] : {std::pair{3.0, 2.0}, std::pair{3.0, 9.0}, std::pair{10.0, 100.0}})
        same(is_doubling(mu, B, a, bb), oracle::is_doubling(mu, B, a, bb));
      for (double kappa : {2.0, 20.0, 200.0}) same(has_small_boundary(mu, B, kappa), oracle::has_small_boundary(mu, B, kappa));
    }
    for (int q = 0; q < 4; ++q) {
      const Point& y = pts[rng.below(N)];
      same(maximal_centred(mu, nu, y), oracle::maximal_centred(mu, nu, y));
      const double m = q == 0 ? 0.5 : q == 1 ? 1.0 : static_cast<double>(n);
      const double r_min = q < 2 ? 0.0 : 1.0 / static_cast<double>(64 << q);
      same(maximal_radial(nu, y, m, r_min), oracle::maximal_radial(nu, y, m, r_min));
      same(maximal_radial(mu, y, m, r_min), oracle::maximal_radial(mu, y, m, r_min));
    }
    comparisons += cmp;
    mismatches += bad;
    res.records.push_back(make_record("measure.exact", "ball masses, doubling, small boundary, maximal functions",
                                      {{"atoms", N}, {"dim", n}, {"comparisons", cmp}, {"mismatches", bad}},
                                      {{"mismatches", 0}}, bad == 0, seed, t0));
  }
  res.pass = mismatches == 0;
  res.summary = {{"scenarios", 100}, {"comparisons", comparisons}, {"mismatches", mismatches}};
  return res;
}

// ---------------------------------------------------------------- 2

CriterionResult lattice_suite(std::uint64_t seed) {
  CriterionResult res;
  std::size_t failures = 0;
  double c_small = kInf, C_big = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto t0 = Clock::now();
    Rng rng(derive_seed(seed, {2, s}));
    const double delta = s % 2 == 0 ? 0.25 : 0.125;
    const int levels = 4 + static_cast<int>((s / 2) % 2);
    std::vector<Point> pts;
    std::string kind;
    switch (s % 4) {
      case 0: {
        kind = "cloud";
        const int n = 1 + static_cast<int>(rng.below(3));
        const std::size_t N = 100 + rng.below(301);
        for (std::size_t i = 0; i < N; ++i) {
          Point p(n);
          for (int c = 0; c < n; ++c) p[c] = rng.uniform();
          pts.push_back(p);
        }
        break;
      }
      case 1: kind = "segment"; pts = line_points(128 + rng.below(257)); break;
      case 2: kind = "circle"; pts = circle_points(128 + rng.below(257), 1.0); break;
      default: {
        kind = "clusters";
        for (int c = 0; c < 6; ++c) {
          const Point z{rng.uniform(), rng.uniform()};
          for (int i = 0; i < 40; ++i) pts.push_back(z + Point{0.02 * rng.normal(), 0.02 * rng.normal()});
        }
      }
    }
    const LatticeBundle lb = lattice_bundle(pts, delta, levels);
    const std::uint64_t ls = rng.next();
    const auto lat = lattice_for(lb, ls);
    const auto again = lattice_for(lb, ls);
    const LatticeBundle lb2 = lattice_bundle(pts, delta, levels);
    const auto fresh = lattice_for(lb2, ls);
    const bool nets_ok = verify_nets(*lb.skel->nets);
    const bool partition = oracle::lattice_partition(*lat);
    const bool nesting = oracle::lattice_nesting(*lat);
    const bool det = lattices_identical(*lat, *again) && lattices_identical(*lat, *fresh);
    const LatticeCheck chk = check_lattice(*lat);
    const bool ok = nets_ok && partition && nesting && det && chk.partition && chk.nesting;
    if (!ok) ++failures;
    c_small = std::min(c_small, chk.c_small);
    C_big = std::max(C_big, chk.C_big);
    res.records.push_back(make_record(
        "lattice.structure", "partition, nesting, determinism",
        {{"kind", kind}, {"atoms", pts.size()}, {"delta", delta}, {"levels", levels}, {"nets", nets_ok},
         {"partition", partition}, {"nesting", nesting}, {"deterministic", det}, {"c_small", chk.c_small},
         {"C_big", chk.C_big}},
        {{"exact", true}}, ok, seed, t0));
  }
  res.pass = failures == 0;
  res.summary = {{"triples", 50}, {"failures", failures}, {"c_small", c_small}, {"C_big", C_big}};
  return res;
}

// ---------------------------------------------------------------- 3

CriterionResult badness_decay(std::uint64_t seed) {
  CriterionResult res;
  res.pass = true;
  struct Case {
    std::string name;
    std::vector<Point> pts;
    std::size_t atom;
  };
  const std::vector<Case> cases{{"segment-centre", line_points(1024), 517},
                                {"segment-offset", line_points(1024), 161},
                                {"circle", circle_points(1024, 0.5), 300}};
  json per = json::array();
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const auto t0 = Clock::now();
    const LatticeBundle lb = lattice_bundle(cases[c].pts, 0.25, 8);
    const DyadicLattice D0(lb.skel, RandomConfig::reference());
    BadnessRequest req;
    req.R = D0.cube_of(cases[c].atom, lb.kmax);
    req.B = lb.W;
    req.k1 = lb.kmax;
    req.gamma = goodness_gamma(0.5, 1.0);
    req.seeds = 10000;
    req.master_seed = derive_seed(seed, {3, c});
    const BadnessEstimate est = estimate_badness_probability(D0, req);
    bool ok = true;
    for (std::size_t i = 0; i + 1 < est.r.size(); ++i) {
      if (est.p_hat[i + 1] > est.p_hat[i]) ok = false;
      if (est.lo[i + 1] > est.hi[i]) ok = false;
    }
    res.pass = res.pass && ok;
    json m = {{"scenario", cases[c].name}, {"r", est.r}, {"bad", est.bad_count}, {"p_hat", est.p_hat},
              {"lo", est.lo}, {"hi", est.hi}, {"eta_hat", est.eta_hat}};
    per.push_back(m);
    res.records.push_back(make_record("badness.decay", "bad-cube probability non-increasing in r", m,
                                      {{"confidence", 0.95}}, ok, seed, t0));
  }
  res.summary = {{"cases", per}};
  return res;
}

// ---------------------------------------------------------------- 4

CriterionResult cone_geometry(std::uint64_t seed) {
  CriterionResult res;
  bool ok_all = true;
  {
    const auto t0 = Clock::now();
    const ClosedSet E = ClosedSet::point_cloud({Point{0.0, 0.0}});
    const double s = 0.01, t = 1.0;
    const std::size_t shells = static_cast<std::size_t>(std::ceil(std::log2(t / s)));
    const QuadratureConfig cfg{100000 / shells, derive_seed(seed, {4, 0})};
    const Estimate e = cone_sigma_integral(E, Point{0.0, 0.0}, s, t, [](const Point&, double) { return 1.0; }, cfg);
    const double exact = 2.0 * M_PI * std::log(t / s);
    const bool ok = std::abs(e.value - exact) <= 3.0 * e.stderr;
    ok_all = ok_all && ok;
    res.records.push_back(make_record("cone.point_volume", "sigma of a truncated cone over a point",
                                      {{"estimate", e.value}, {"stderr", e.stderr}, {"exact", exact},
                                       {"samples", cfg.samples_per_shell * shells}},
                                      {{"stderr_multiple", 3}}, ok, seed, t0));
  }
  {
    const auto t0 = Clock::now();
    Rng rng(derive_seed(seed, {4, 1}));
    const ClosedSet seg = ClosedSet::segment(Point{0.0, 0.0}, Point{1.0, 0.0});
    const ClosedSet circ = ClosedSet::circle(2, 0.0, 0.0, 1.0);
    std::size_t holds = 0;
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const bool line = i % 2 == 0;
      Point y;
      if (line) {
        y = Point{rng.uniform(), 0.0};
      } else {
        const double th = rng.uniform(0.0, 2.0 * M_PI);
        y = Point{std::cos(th), std::sin(th)};
      }
      const double s = std::pow(10.0, rng.uniform(-3.0, -1.0));
      const double t = s * std::pow(2.0, rng.uniform(0.5, 5.0));
      const QuadratureConfig cfg{2000, derive_seed(seed, {4, 2, static_cast<std::uint64_t>(i)})};
      const Estimate e =
          cone_sigma_integral(line ? seg : circ, y, s, t, [](const Point&, double) { return 1.0; }, cfg);
      const double bound = ball_volume(2, 2.0) * std::pow(t / s, 2.0);
      worst = std::max(worst, e.value / std::pow(t / s, 2.0));
      if (e.value <= bound + 3.0 * e.stderr) ++holds;
    }
    const bool ok = holds == 50;
    ok_all = ok_all && ok;
    res.records.push_back(make_record("cone.volume_bound", "sigma of truncated cones at most C (t/s)^n",
                                      {{"cases", 50}, {"holds", holds}, {"C_measured", worst},
                                       {"C_bound", ball_volume(2, 2.0)}},
                                      {{"stderr_multiple", 3}}, ok, seed, t0));
  }
  json ladders = json::object();
  for (int which = 0; which < 2; ++which) {
    const auto t0 = Clock::now();
    const bool line = which == 0;
    const double r = line ? 1e-2 : 1e-3;
    const ClosedSet E = line ? ClosedSet::hyperplane(2) : ClosedSet::circle(2, 0.0, 0.0, 1.0);
    Point y, y2;
    if (line) {
      y = Point{0.0, 0.0};
      y2 = Point{r / 2.0, 0.0};
    } else {
      const double th = 2.0 * std::asin(r / 4.0);  // chord of length r / 2
      y = Point{1.0, 0.0};
      y2 = Point{std::cos(th), std::sin(th)};
    }
    std::vector<double> scaled, stderrs;
    for (int k = 0; k < 4; ++k) {
      const double t = 10.0 * std::pow(2.0, k);
      const QuadratureConfig cfg{400000, derive_seed(seed, {4, 3, static_cast<std::uint64_t>(which)})};
      const SymmetricDifference sd = cone_symmetric_difference(E, y, y2, t, r, cfg);
      scaled.push_back(sd.sigma.value * t);
      stderrs.push_back(sd.sigma.stderr * t);
    }
    const double mean = std::accumulate(scaled.begin(), scaled.end(), 0.0) / 4.0;
    double dev = 0.0;
    for (double v : scaled) dev = std::max(dev, std::abs(v / mean - 1.0));
    const bool ok = mean > 0.0 && dev <= 0.30;
    ok_all = ok_all && ok;
    ladders[line ? "line" : "circle"] = {{"sigma_times_t", scaled}, {"stderr_times_t", stderrs}, {"max_rel_dev", dev}};
    res.records.push_back(make_record("cone.symmetric_difference",
                                      "sigma of cone symmetric difference times t stays bounded",
                                      {{"scenario", line ? "line" : "circle"}, {"t", {10, 20, 40, 80}},
                                       {"sigma_times_t", scaled}, {"max_rel_dev", dev}},
                                      {{"max_rel_dev", 0.30}}, ok, seed, t0));
  }
  res.pass = ok_all;
  res.summary = {{"ladders", ladders}};
  return res;
}

// ---------------------------------------------------------------- 5

CriterionResult cz_suite(std::uint64_t seed) {
  CriterionResult res;
  std::vector<double> medians;
  std::vector<std::size_t> idx;
  bool exact_ok = true, finite_ok = true;
  double phi_sum = 0.0, phi_mass = 0.0;
  const Kernel K = power_kernel(1.0, 0.5);
  for (std::uint64_t j = 0; j < 20; ++j) {
    const auto t0 = Clock::now();
    Rng rng(derive_seed(seed, {5, j}));
    const std::size_t N = 128 + rng.below(129);
    std::vector<Point> pts;
    std::vector<double> w;
    std::vector<cplx> v;
    std::vector<char> used(4097, 0);
    for (std::size_t i = 0; i < N; ++i) {
      std::uint64_t k = rng.below(4097);
      while (used[k]) k = rng.below(4097);
      used[k] = 1;
      pts.push_back(Point{static_cast<double>(k) / 4096.0, 0.0});
      w.push_back(dyadic(rng, 1, 16, 1024.0));
      const bool heavy = rng.below(4) == 0;
      v.push_back(heavy ? std::polar(dyadic(rng, 1, 64, 1024.0), rng.uniform(0.0, 2.0 * M_PI)) : cplx(0.0, 0.0));
    }
    v[rng.below(N)] = cplx(0.25, 0.0);
    const AtomicMeasure mu(pts, w);
    const ComplexAtomicMeasure nu(pts, v);
    const double lambda = cz_threshold(mu, nu) * rng.uniform(1.5, 4.0);
    const CZDecomposition dec = cz_decompose(nu, mu, lambda, 1.0);
    const CZChecks chk = verify_cz(dec, nu, mu);
    exact_ok = exact_ok && chk.all();
    phi_sum = std::max(phi_sum, chk.phi_sum);
    phi_mass = std::max(phi_mass, chk.phi_mass);
    double gap = kInf;
    for (std::size_t a = 0; a < N; ++a)
      for (std::size_t b = a + 1; b < N; ++b)
        if (pts[a] != pts[b]) gap = std::min(gap, dist(pts[a], pts[b]));
    const ClosedSet E = ClosedSet::point_cloud(pts);
    const BallIntegralReport bi =
        cz_ball_integrals(K, E, dec, nu, mu, 4.0 * gap, 1.0, QuadratureConfig{256, derive_seed(seed, {5, 1, j})});
    const bool finite =
        std::all_of(bi.ratio.begin(), bi.ratio.end(), [](double x) { return std::isfinite(x) && x >= 0.0; });
    finite_ok = finite_ok && finite;
    if (!bi.ratio.empty()) {
      medians.push_back(bi.median);
      idx.push_back(res.records.size());
    }
    res.records.push_back(make_record("cz.postconditions", "decomposition postconditions and per-ball integral constants",
                                      {{"atoms", N}, {"lambda", lambda}, {"balls", dec.balls.size()},
                                       {"flags", chk.flags()},
                                       {"phi_sum", chk.phi_sum}, {"phi_mass", chk.phi_mass}, {"overlap", chk.overlap},
                                       {"ball_integral_median", bi.median}, {"detail", chk.detail}},
                                      {{"identities", "exact"}, {"float_rel", 1e-12}}, chk.all() && finite, seed, t0));
  }
  const double across = median(medians);
  bool stable = !medians.empty();
  for (std::size_t i = 0; i < medians.size(); ++i) {
    const bool in = medians[i] >= 0.5 * across && medians[i] <= 1.5 * across;
    stable = stable && in;
    if (!in) res.records[idx[i]].pass = false;
  }
  res.pass = exact_ok && finite_ok && stable;
  res.summary = {{"instances", 20}, {"exact", exact_ok}, {"phi_sum_max", phi_sum}, {"phi_mass_max", phi_mass},
                 {"ball_integral_medians", medians}, {"cross_median", across}, {"stable", stable}};
  return res;
}

// ---------------------------------------------------------------- 6

struct MartingaleInstance {
  std::vector<Point> pts;
  std::vector<double> w;
  std::vector<cplx> b, f;
  std::uint64_t lattice_seed = 0;
};

MartingaleInstance martingale_instance(std::uint64_t seed, std::uint64_t j) {
  Rng rng(derive_seed(seed, {6, j}));
  MartingaleInstance in;
  const std::size_t N = 384;
  const double lo = rng.uniform(0.1, 0.8);
  for (std::size_t i = 0; i < N; ++i) {
    const double x = rng.uniform();
    in.pts.push_back(Point{x, 0.0});
    in.w.push_back(dyadic(rng, 1, 8, 1024.0));
    const double th = rng.uniform(-M_PI / 4.0, M_PI / 4.0);
    const bool flip = j % 2 == 1 && x > lo && x < lo + 0.05;
    in.b.push_back(flip ? -std::polar(1.0, th) : std::polar(1.0, th));
    in.f.push_back(cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)));
  }
  in.lattice_seed = rng.next();
  return in;
}

CriterionResult martingale_suite(std::uint64_t seed) {
  CriterionResult res;
  bool exact_ok = true;
  double C_coarse = 0.0, C_fine = 0.0, worst_rec = 0.0, worst_zero = 0.0;
  for (std::uint64_t j = 0; j < 50; ++j) {
    const auto t0 = Clock::now();
    const MartingaleInstance in = martingale_instance(seed, j);
    const AtomicMeasure mu(in.pts, in.w);
    double ratio[2] = {0.0, 0.0};
    bool ok = true;
    std::size_t stopping = 0;
    for (int refine = 0; refine < 2; ++refine) {
      const LatticeBundle lb = lattice_bundle(in.pts, 0.125, 4 + refine);
      auto DB = std::make_shared<const RestrictedLattice>(lattice_for(lb, in.lattice_seed), lb.W);
      const BAdaptedSystem sys = compute_stopping_and_transit(DB, mu, in.b, 0.5);
      const MartingaleDecomposition dec = decompose(in.f, sys);
      const MartingaleChecks chk = check_decomposition(in.f, sys, dec);
      ok = ok && chk.reconstruction <= 1e-10 && chk.zero_mean <= 1e-12 && chk.supports_nested;
      worst_rec = std::max(worst_rec, chk.reconstruction);
      worst_zero = std::max(worst_zero, chk.zero_mean);
      ratio[refine] = chk.energy_ratio;
      if (refine == 0) stopping = sys.stopping.size();
    }
    exact_ok = exact_ok && ok;
    C_coarse = std::max({C_coarse, ratio[0], 1.0 / ratio[0]});
    C_fine = std::max({C_fine, ratio[1], 1.0 / ratio[1]});
    res.records.push_back(make_record("martingale.decomposition", "reconstruction and zero mean",
                                      {{"energy_ratio", ratio[0]}, {"energy_ratio_refined", ratio[1]},
                                       {"stopping_cubes", stopping}},
                                      {{"reconstruction", 1e-10}, {"zero_mean", 1e-12}}, ok, seed, t0));
  }
  const double change = std::abs(C_fine / C_coarse - 1.0);
  const bool equiv_ok = change <= 0.20;
  {
    Record r = make_record("martingale.norm_equivalence", "norm-equivalence constant under one refinement",
                           {{"C", C_coarse}, {"C_refined", C_fine}, {"rel_change", change}},
                           {{"rel_change", 0.20}}, equiv_ok, seed, Clock::now());
    res.records.push_back(r);
  }
  // Coefficient-matrix norm over a fixed set of levels while the atom count doubles.
  const auto t0 = Clock::now();
  std::vector<double> norms;
  std::vector<std::size_t> dims;
  for (std::size_t N = 256; N <= 4096; N *= 2) {
    const std::vector<Point> pts = line_points(N);
    const AtomicMeasure mu = AtomicMeasure::uniform(pts);
    const LatticeBundle lb = lattice_bundle(pts, 0.125, 4);
    const auto LQ = lattice_for(lb, derive_seed(seed, {6, 100}));
    const DyadicLattice LR(lb.skel, RandomConfig::reference());
    std::vector<CubeRef> Q, R;
    for (int k = lb.kmin; k <= lb.kmax; ++k) {
      for (std::size_t q = 0; q < LQ->num_cubes(k); ++q) Q.push_back({k, static_cast<int>(q)});
      for (std::size_t q = 0; q < LR.num_cubes(k); ++q) R.push_back({k, static_cast<int>(q)});
    }
    const CoefficientMatrix A = coefficient_matrix(*LQ, Q, LR, R, mu, 1.0, 0.5);
    norms.push_back(matrix_norm(A).norm);
    dims.push_back(A.rows);
  }
  double worst_growth = -kInf;
  for (std::size_t i = 0; i + 1 < norms.size(); ++i) worst_growth = std::max(worst_growth, norms[i + 1] / norms[i] - 1.0);
  const bool ladder_ok = worst_growth < 0.05;
  res.records.push_back(make_record("martingale.matrix_ladder", "coefficient-matrix norm under atom doubling",
                                    {{"atoms", {256, 512, 1024, 2048, 4096}}, {"rows", dims}, {"norm", norms},
                                     {"max_growth", worst_growth}},
                                    {{"max_growth", 0.05}}, ladder_ok, seed, t0));
  res.pass = exact_ok && equiv_ok && ladder_ok;
  res.summary = {{"instances", 50}, {"max_reconstruction", worst_rec}, {"max_zero_mean", worst_zero},
                 {"C", C_coarse}, {"C_refined", C_fine}, {"matrix_norms", norms}, {"max_growth", worst_growth}};
  return res;
}

// ---------------------------------------------------------------- 7

CriterionResult suppression_suite(std::uint64_t seed) {
  CriterionResult res;
  const Scenario sc = segment_scenario(256, derive_seed(seed, {7}));
  const AtomicMeasure& mu = sc.mu;
  const std::size_t N = mu.size();
  std::vector<cplx> b(N, cplx(1.0, 0.0));
  for (std::size_t i = 0; i < N; ++i) {
    const double x = mu.point(i)[0];
    if (x > 0.6 && x < 0.68) b[i] = i % 2 == 0 ? cplx(1.0, 0.0) : cplx(-1.0, 0.0);
  }
  const BallSpec W = whole_ball(sc);
  SuppressionParams sp;
  sp.m = 1.0;
  sp.C0 = 1.0;
  sp.s_min = sc.s_trunc();
  sp.t_max = sc.t_trunc();
  sp.cfg = sc.quadrature(7);
  std::vector<std::vector<cplx>> bw(1, b);
  for (std::size_t i = 0; i < N; ++i) bw[0][i] *= mu.weight(i);
  const SourceBlock src = SourceBlock::columns(mu.points(), bw);
  // lambda0 is the smallest tried level whose exceptional set keeps
  // mu(S) within (1 - delta0) / 2 of mu(B).
  double cmax = 0.0;
  for (const auto& row : square_function_field(sc.kernel, src, mu.points(), sp.s_min, sp.t_max, sc.E, sp.cfg))
    cmax = std::max(cmax, row[0].value);
  auto t0 = Clock::now();
  const double mass_B = ball_mass(mu, W);
  SuppressionData data;
  double mass_S = 0.0;
  json scan = json::array();
  for (double q : {0.90, 0.92, 0.94, 0.96, 0.98, 0.99}) {
    sp.lambda0 = q * cmax;
    data = compute_suppression(sc.kernel, sc.E, mu, b, W, sp);
    mass_S = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      if (data.in_S[i]) mass_S += mu.weight(i);
    scan.push_back({{"fraction_of_max", q}, {"mu_S", mass_S}});
    if (mass_S <= 0.5 * (1.0 - sc.params.delta0) * mass_B) break;
  }
  std::size_t n_S0 = 0, n_S = 0;
  for (std::size_t i = 0; i < N; ++i) {
    n_S0 += data.in_S0[i] != 0;
    n_S += data.in_S[i] != 0;
  }
  const std::vector<std::pair<double, double>> truncs{
      {sp.s_min, sp.t_max}, {2.0 * sp.s_min, sp.t_max}, {sp.s_min, sp.t_max / 2.0}, {4.0 * sp.s_min, sp.t_max / 4.0}};
  std::size_t bound_fail = 0, agree_fail = 0, dom_fail = 0;
  double worst_excess = -kInf;
  for (auto [s, t] : truncs) {
    const auto pv = paired_square_field(sc.kernel, sc.E, src, mu.points(), s, t, data);
    for (std::size_t i = 0; i < N; ++i) {
      if (!data.in_B[i]) continue;
      const Estimate& sup = pv[i][0].suppressed;
      const Estimate& pl = pv[i][0].plain;
      worst_excess = std::max(worst_excess, (sup.value - sp.lambda0) / std::max(sup.stderr, 1e-300));
      if (sup.value > sp.lambda0 + 3.0 * sup.stderr) ++bound_fail;
      if (sup.value > pl.value) ++dom_fail;
      if (!data.in_S[i] && sup.value != pl.value) ++agree_fail;
    }
  }
  res.records.push_back(make_record("suppression.uniform_bound", "suppressed square function of b at most lambda0",
                                    {{"lambda0", sp.lambda0}, {"S0", n_S0}, {"S", n_S}, {"failures", bound_fail},
                                     {"worst_excess_in_stderr", worst_excess}, {"truncations", truncs.size()}},
                                    {{"stderr_multiple", 3}}, bound_fail == 0, seed, t0));
  res.records.push_back(make_record("suppression.agreement", "suppressed equals plain off S, never larger",
                                    {{"mismatch_off_S", agree_fail}, {"domination_failures", dom_fail}},
                                    {{"exact", true}}, agree_fail == 0 && dom_fail == 0, seed, t0));
  t0 = Clock::now();
  const Kernel St = suppressed_kernel(sc.kernel, data, sc.E);
  const KernelCheck kc = kernel_estimate_check(St, sc.E, 2000, derive_seed(seed, {7, 1}));
  const bool kernel_ok = kc.pass && St.K1 == sc.kernel.K1 && St.K2 == sc.kernel.K2;
  res.records.push_back(make_record("suppression.kernel", "suppressed kernel keeps size and Hoelder constants",
                                    {{"size_ratio", kc.size_ratio}, {"holder_ratio", kc.holder_ratio},
                                     {"K1", St.K1}, {"K2", St.K2}, {"samples", kc.samples}},
                                    {{"ratio", 1.0}}, kernel_ok, seed, t0));
  t0 = Clock::now();
  const auto skel = scenario_skeleton(sc);
  std::vector<std::vector<char>> ex;
  for (std::uint64_t k = 0; k < 16; ++k) {
    RandomConfig om{derive_seed(seed, {7, 2, k}), 1, 2, skel->nets->kmin, skel->nets->kmax};
    auto DB = std::make_shared<const RestrictedLattice>(std::make_shared<const DyadicLattice>(skel, om), W);
    const BAdaptedSystem sys = compute_stopping_and_transit(DB, mu, b, sc.params.c_acc);
    ex.push_back(sys.T);
  }
  const BigPieceSet G = build_big_piece(mu, data.in_B, ex, data.in_S, sc.params.delta0);
  const bool g_ok = G.hypothesis && G.bound_holds;
  res.records.push_back(make_record("suppression.big_piece", "big piece carries a fixed fraction of the ball",
                                    {{"mass_G", G.mass_G}, {"bound", G.bound}, {"hypothesis", G.hypothesis},
                                     {"worst_exceptional", G.worst_exceptional}, {"tau", G.tau}},
                                    {{"delta0", sc.params.delta0}}, g_ok, seed, t0));
  res.pass = bound_fail == 0 && agree_fail == 0 && dom_fail == 0 && kernel_ok && g_ok;
  res.summary = {{"lambda0", sp.lambda0},      {"S0", n_S0},       {"S", n_S}, {"mu_S", mass_S}, {"lambda0_scan", scan},
                 {"lambda0_mass_condition", mass_S <= 0.5 * (1.0 - sc.params.delta0) * mass_B},
                 {"bound_failures", bound_fail}, {"agree_failures", agree_fail},
                 {"kernel_ok", kernel_ok},     {"mass_G", G.mass_G}, {"G_bound", G.bound},
                 {"hypothesis", G.hypothesis}};
  return res;
}

// ---------------------------------------------------------------- 8

CriterionResult good_lambda_suite(std::uint64_t seed) {
  CriterionResult res;
  const Scenario sc = segment_scenario(512, derive_seed(seed, {8}));
  auto t0 = Clock::now();
  const BallSpec W = whole_ball(sc);
  std::vector<cplx> ones(sc.mu.size(), cplx(1.0, 0.0));
  const ComplexAtomicMeasure nuB = ComplexAtomicMeasure::density(sc.mu, ones);
  const TbHypotheses h = check_tb_hypotheses(sc, W, nuB, {}, sc.quadrature(80));
  res.records.push_back(make_record("good_lambda.hypotheses", "testing hypotheses for nu_B = mu on B",
                                    {{"support", h.support}, {"normalised", h.normalised}, {"C1", h.C1_measured},
                                     {"continuity", h.worst_small}, {"exceptional", h.exceptional},
                                     {"weak_sup", h.weak_sup}},
                                    {{"C1", sc.params.C1}, {"C2", sc.params.C2}}, h.all(), seed, t0));
  t0 = Clock::now();
  const GoodLambdaReport g = good_lambda_experiment(sc, 20, 0.25, 0.5, 0.05);
  const bool ineq_ok = g.passes == g.checks && g.worst_factor <= g.factor_bound + 0.05;
  res.records.push_back(make_record("good_lambda.inequality", "distributional inequality at every grid lambda",
                                    {{"checks", g.checks}, {"passes", g.passes}, {"theta", g.theta},
                                     {"factor_bound", g.factor_bound}, {"worst_factor", g.worst_factor},
                                     {"whitney_runs", g.whitney_runs}, {"whitney_ok", g.whitney_ok}},
                                    {{"slack", 0.05}}, ineq_ok, seed, t0));
  const bool spread_ok = g.spread_2 < 2.0;
  res.records.push_back(make_record("good_lambda.lp_ratio", "L2 ratio spread across random f",
                                    {{"ratio_1.5", g.lp_ratio_15}, {"ratio_2", g.lp_ratio_2}, {"ratio_3", g.lp_ratio_3},
                                     {"spread_2", g.spread_2}},
                                    {{"spread", 2.0}}, spread_ok, seed, t0));
  res.pass = h.all() && ineq_ok && spread_ok;
  res.summary = {{"hypotheses", h.all()}, {"checks", g.checks}, {"passes", g.passes}, {"theta", g.theta},
                 {"worst_factor", g.worst_factor}, {"factor_bound", g.factor_bound}, {"spread_2", g.spread_2}};
  return res;
}

// ---------------------------------------------------------------- 9

CriterionResult weak11_suite(std::uint64_t seed) {
  CriterionResult res;
  const Scenario sc = segment_scenario(256, derive_seed(seed, {9}));
  const auto t0 = Clock::now();
  const Weak11ExperimentReport w = weak11_experiment(sc, 10, 32);
  res.records.push_back(make_record("weak11.stability", "weak (1,1) statistic across random measures",
                                    {{"sup", w.sup}, {"spread", w.spread}, {"spread_complex", w.spread_complex}, {"zero_measure", w.zero_measure_ok}},
                                    {{"spread", 2.0}}, w.pass, seed, t0));
  res.pass = w.pass;
  res.summary = {{"sup", w.sup}, {"spread", w.spread}, {"spread_complex", w.spread_complex}, {"zero_measure_ok", w.zero_measure_ok}};
  return res;
}

struct CriterionDef {
  const char* key;
  const char* title;
  double budget;
  CriterionResult (*fn)(std::uint64_t);
};

const CriterionDef kCriteria[] = {
    {"measure", "exact measure quantities match brute force", 30.0, exact_measure},
    {"lattice", "random dyadic lattices partition, nest and reproduce", 60.0, lattice_suite},
    {"badness", "bad-cube probability decays in r", 120.0, badness_decay},
    {"cone", "cone volumes and symmetric differences", 180.0, cone_geometry},
    {"cz", "Calderon-Zygmund decomposition postconditions", 120.0, cz_suite},
    {"martingale", "adapted martingale decomposition and coefficient matrix", 120.0, martingale_suite},
    {"suppression", "suppressed operator bounds and big piece", 120.0, suppression_suite},
    {"good-lambda", "end-to-end good-lambda inequality", 300.0, good_lambda_suite},
    {"weak11", "weak (1,1) statistic stability", 120.0, weak11_suite},
};

}  // namespace


// ------------------------------------------------------ scenario suites

namespace {

std::vector<cplx> random_density(std::size_t N, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<cplx> f(N);
  for (auto& v : f) v = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  return f;
}

void suite_measure(const Scenario& sc, Reporter& out) {
  const auto t0 = Clock::now();
  const AtomicMeasure& mu = sc.mu;
  Rng rng(derive_seed(sc.seed, {0x51}));
  std::size_t cmp = 0, bad = 0;
  const std::size_t N = mu.size();
  for (int k = 0; k < 20; ++k) {
    const Point& c = mu.point(rng.below(N));
    double r = dist(c, mu.point(rng.below(N)));
    if (!(r > 0.0)) r = sc.spacing();
    const BallSpec B{c, r, k % 2 == 0, true};
    cmp += 4;
    bad += ball_mass(mu, B) != oracle::ball_mass(mu, c, r, B.closed);
    bad += is_doubling(mu, B, sc.params.a, sc.b()) != oracle::is_doubling(mu, B, sc.params.a, sc.b());
    bad += has_small_boundary(mu, B, sc.kappa()) != oracle::has_small_boundary(mu, B, sc.kappa());
    bad += maximal_radial(mu, c, sc.params.m, sc.spacing()) != oracle::maximal_radial(mu, c, sc.params.m, sc.spacing());
  }
  const OrderConstant oc = order_m_constant(mu, sc.params.m, sc.spacing());
  out.add(make_record("measure.exact", "optimised measure routines agree with brute force",
                      {{"comparisons", cmp}, {"mismatches", bad}, {"order_constant", oc.value}},
                      {{"mismatches", 0}}, bad == 0, sc.seed, t0));
}

void suite_lattice(const Scenario& sc, Reporter& out) {
  const auto t0 = Clock::now();
  const auto skel = scenario_skeleton(sc);
  const RandomConfig om{sc.seed, 1, 2, skel->nets->kmin, skel->nets->kmax};
  const DyadicLattice a(skel, om), b(skel, om);
  const LatticeCheck chk = check_lattice(a);
  const bool ok = verify_nets(*skel->nets) && oracle::lattice_partition(a) && oracle::lattice_nesting(a) &&
                  lattices_identical(a, b) && chk.partition && chk.nesting;
  out.add(make_record("lattice.structure", "partition, nesting, determinism",
                      {{"levels", skel->nets->kmax - skel->nets->kmin + 1}, {"c_small", chk.c_small}, {"C_big", chk.C_big}},
                      {{"exact", true}}, ok, sc.seed, t0));
}

void suite_badness(const Scenario& sc, Reporter& out) {
  const auto t0 = Clock::now();
  const auto skel = scenario_skeleton(sc);
  const DyadicLattice D0(skel, RandomConfig::reference());
  BadnessRequest req;
  req.B = whole_ball(sc);
  req.k1 = skel->nets->kmax;
  req.R = D0.cube_of(sc.mu.size() / 3, req.k1);
  req.gamma = sc.gamma();
  req.seeds = 2000;
  req.master_seed = sc.seed;
  const BadnessEstimate est = estimate_badness_probability(D0, req);
  bool ok = true;
  for (std::size_t i = 0; i + 1 < est.r.size(); ++i) ok = ok && est.lo[i + 1] <= est.hi[i];
  out.add(make_record("badness.decay", "bad-cube probability non-increasing in r",
                      {{"r", est.r}, {"p_hat", est.p_hat}, {"lo", est.lo}, {"hi", est.hi}}, {{"confidence", 0.95}}, ok,
                      sc.seed, t0));
}

void suite_cone_volume(const Scenario& sc, Reporter& out) {
  Rng rng(derive_seed(sc.seed, {0x52}));
  const int n = sc.E.dim();
  const double C = ball_volume(n, 2.0);
  for (int i = 0; i < 50; ++i) {
    const auto t0 = Clock::now();
    const Point& y = sc.mu.point(rng.below(sc.mu.size()));
    const double s = sc.s_trunc() * std::pow(2.0, rng.uniform(0.0, 2.0));
    const double t = s * std::pow(2.0, rng.uniform(0.5, 4.0));
    const Estimate e = cone_sigma_integral(sc.E, y, s, t, [](const Point&, double) { return 1.0; },
                                           sc.quadrature(static_cast<std::uint64_t>(i)));
    const double bound = C * std::pow(t / s, n);
    out.add(make_record("cone.volume_bound", "sigma of a truncated cone at most C (t/s)^n",
                        {{"s", s}, {"t", t}, {"estimate", e.value}, {"stderr", e.stderr}, {"bound", bound}},
                        {{"stderr_multiple", 3}}, e.value <= bound + 3.0 * e.stderr, sc.seed, t0));
  }
}

void suite_whitney(const Scenario& sc, Reporter& out) {
  const auto t0 = Clock::now();
  const auto skel = scenario_skeleton(sc);
  const DyadicLattice lat(skel, RandomConfig{sc.seed, 1, 2, skel->nets->kmin, skel->nets->kmax});
  const BallSpec W = whole_ball(sc);
  std::vector<char> U(sc.mu.size(), 0);
  for (std::size_t i = 0; i < sc.mu.size(); ++i) U[i] = dist(sc.mu.point(i), W.center) < 0.5 * W.radius;
  const WhitneyParams wp{sc.params.a, sc.params.rho, sc.b(), sc.kappa()};
  const WhitneyOutcome w = whitney_cover(lat, sc.mu, U, wp);
  out.add(make_record("whitney.cover", "Whitney balls inside U, regular, carrying a fixed share of mu(U)",
                      {{"ok", w.ok}, {"failure", w.failure}, {"whitney_cubes", w.whitney_cubes},
                       {"regular_balls", w.regular_balls}, {"balls", w.balls.size()}, {"C1", w.C1}, {"C2", w.C2},
                       {"mass_U", w.checks.mass_U}, {"mass_cover", w.checks.mass_cover},
                       {"overlap", w.checks.overlap}},
                      {{"mass_fraction", 0.5 / sc.b()}}, w.ok && w.checks.all(), sc.seed, t0));
}

void suite_czd(const Scenario& sc, Reporter& out) {
  const auto t0 = Clock::now();
  Rng rng(derive_seed(sc.seed, {0x53}));
  std::vector<cplx> v(sc.mu.size(), cplx(0.0, 0.0));
  for (auto& x : v)
    if (rng.below(4) == 0) x = std::polar(rng.uniform(0.0, 0.1), rng.uniform(0.0, 2.0 * M_PI));
  v[0] = cplx(0.25, 0.0);
  const ComplexAtomicMeasure nu(sc.mu.points(), v);
  const double lambda = 2.0 * cz_threshold(sc.mu, nu);
  const CZDecomposition dec = cz_decompose(nu, sc.mu, lambda, sc.params.m);
  const CZChecks c = verify_cz(dec, nu, sc.mu);
  out.add(make_record("cz.postconditions", "decomposition postconditions",
                      {{"balls", dec.balls.size()}, {"flags", c.flags()},
                       {"phi_sum", c.phi_sum}, {"phi_mass", c.phi_mass}, {"detail", c.detail}},
                      {{"float_rel", 1e-12}}, c.all(), sc.seed, t0));
}

void suite_martingale(const Scenario& sc, Reporter& out) {
  const auto t0 = Clock::now();
  const auto skel = scenario_skeleton(sc);
  auto lat = std::make_shared<const DyadicLattice>(skel, RandomConfig{sc.seed, 1, 2, skel->nets->kmin, skel->nets->kmax});
  auto DB = std::make_shared<const RestrictedLattice>(lat, whole_ball(sc));
  const std::vector<cplx> b(sc.mu.size(), cplx(1.0, 0.0));
  const std::vector<cplx> f = random_density(sc.mu.size(), derive_seed(sc.seed, {0x54}));
  const BAdaptedSystem sys = compute_stopping_and_transit(DB, sc.mu, b, sc.params.c_acc);
  const MartingaleDecomposition dec = decompose(f, sys);
  const MartingaleChecks c = check_decomposition(f, sys, dec);
  const bool ok = c.reconstruction <= 1e-10 && c.zero_mean <= 1e-12 && c.supports_nested;
  out.add(make_record("martingale.decomposition", "reconstruction and zero mean",
                      {{"reconstruction", c.reconstruction}, {"zero_mean", c.zero_mean},
                       {"energy_ratio", c.energy_ratio}, {"terms", dec.terms.size()}},
                      {{"reconstruction", 1e-10}, {"zero_mean", 1e-12}}, ok, sc.seed, t0));
}

SuppressionData scenario_suppression(const Scenario& sc, const std::vector<cplx>& b, SuppressionParams& sp) {
  sp.m = sc.params.m;
  sp.C0 = sc.params.C0;
  sp.s_min = sc.s_trunc();
  sp.t_max = sc.t_trunc();
  sp.cfg = sc.quadrature(0x55);
  if (sc.params.lambda0 > 0.0) {
    sp.lambda0 = sc.params.lambda0;
  } else {
    std::vector<std::vector<cplx>> bw(1, b);
    for (std::size_t i = 0; i < b.size(); ++i) bw[0][i] *= sc.mu.weight(i);
    double mx = 0.0;
    for (const auto& row : square_function_field(sc.kernel, SourceBlock::columns(sc.mu.points(), bw), sc.mu.points(),
                                                 sp.s_min, sp.t_max, sc.E, sp.cfg))
      mx = std::max(mx, row[0].value);
    sp.lambda0 = 0.99 * mx;
  }
  return compute_suppression(sc.kernel, sc.E, sc.mu, b, whole_ball(sc), sp);
}

void suite_suppression(const Scenario& sc, Reporter& out) {
  const auto t0 = Clock::now();
  const std::vector<cplx> b(sc.mu.size(), cplx(1.0, 0.0));
  SuppressionParams sp;
  const SuppressionData data = scenario_suppression(sc, b, sp);
  std::vector<std::vector<cplx>> bw(1, b);
  for (std::size_t i = 0; i < b.size(); ++i) bw[0][i] *= sc.mu.weight(i);
  const auto pv = paired_square_field(sc.kernel, sc.E, SourceBlock::columns(sc.mu.points(), bw), sc.mu.points(),
                                      sp.s_min, sp.t_max, data);
  std::size_t bound_fail = 0, agree_fail = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!data.in_B[i]) continue;
    if (pv[i][0].suppressed.value > sp.lambda0 + 3.0 * pv[i][0].suppressed.stderr) ++bound_fail;
    if (!data.in_S[i] && pv[i][0].suppressed.value != pv[i][0].plain.value) ++agree_fail;
  }
  out.add(make_record("suppression.bounds", "suppressed operator bounded by lambda0, unchanged off S",
                      {{"lambda0", sp.lambda0}, {"bound_failures", bound_fail}, {"agree_failures", agree_fail}},
                      {{"stderr_multiple", 3}}, bound_fail == 0 && agree_fail == 0, sc.seed, t0));
}

void suite_tb_hypotheses(const Scenario& sc, Reporter& out) {
  auto balls = enumerate_regular_balls(sc.mu, 10.0, sc.b(), sc.kappa(), 4, 4, sc.seed);
  require(!balls.empty(), "no regular balls found at the configured (a, b, kappa)");
  for (const RegularBall& rb : balls) {
    const auto t0 = Clock::now();
    std::vector<cplx> w(sc.mu.size(), cplx(0.0, 0.0));
    for (std::size_t i = 0; i < sc.mu.size(); ++i)
      if (rb.B.contains(sc.mu.point(i))) w[i] = sc.mu.weight(i);
    const ComplexAtomicMeasure nuB(sc.mu.points(), w);
    const TbHypotheses h = check_tb_hypotheses(sc, rb.B, nuB, {}, sc.quadrature(0x56));
    out.add(make_record("tb.hypotheses", "testing hypotheses for nu_B = mu restricted to B",
                        {{"radius", rb.B.radius}, {"doubling", rb.doubling}, {"boundary", rb.boundary},
                         {"support", h.support}, {"normalised", h.normalised}, {"C1", h.C1_measured},
                         {"continuity", h.worst_small}, {"exceptional", h.exceptional}, {"weak_sup", h.weak_sup}},
                        {{"C1", sc.params.C1}, {"C2", sc.params.C2}, {"continuity", 1.0 / (16.0 * sc.params.C1)}},
                        h.all(), sc.seed, t0));
  }
}

void suite_stopping_sets(const Scenario& sc, Reporter& out) {
  const auto t0 = Clock::now();
  const auto skel = scenario_skeleton(sc);
  auto lat = std::make_shared<const DyadicLattice>(skel, RandomConfig{sc.seed, 1, 2, skel->nets->kmin, skel->nets->kmax});
  const RestrictedLattice DB(lat, whole_ball(sc));
  const ComplexAtomicMeasure nu = ComplexAtomicMeasure::density(sc.mu, std::vector<cplx>(sc.mu.size(), cplx(1.0, 0.0)));
  const StoppingSets st = stopping_sets_pipeline(sc, DB, nu, {}, sc.spacing());
  auto count = [](const std::vector<char>& v) { return std::count(v.begin(), v.end(), 1); };
  out.add(make_record("stopping.sets", "stopping sets leave a fixed share of |nu|(B), density comparable off H2",
                      {{"eta", st.eta}, {"p0", st.p0}, {"T", count(st.T)}, {"H0", count(st.H0)}, {"H1", count(st.H1)},
                       {"H2", count(st.H2)}, {"F1", st.F1}, {"F2", st.F2}, {"mass_TH", st.mass_TH},
                       {"bound_TH", st.bound_TH}, {"phi_min", st.phi_min}, {"phi_max", st.phi_max}},
                      {{"phi_range", {1.0 / (16.0 * sc.params.C1), sc.params.C1 / sc.params.eps0}}},
                      st.mass_ok && st.density_ok, sc.seed, t0));
}

void suite_good_lambda(const Scenario& sc, Reporter& out) {
  const auto t0 = Clock::now();
  const GoodLambdaReport g = good_lambda_experiment(sc, 20, 0.25, 0.5, 0.05);
  out.add(make_record("good_lambda.experiment", "good-lambda inequality and Lp ratios",
                      {{"checks", g.checks}, {"passes", g.passes}, {"theta", g.theta},
                       {"factor_bound", g.factor_bound}, {"worst_factor", g.worst_factor},
                       {"ratio_1.5", g.lp_ratio_15}, {"ratio_2", g.lp_ratio_2}, {"ratio_3", g.lp_ratio_3},
                       {"spread_2", g.spread_2}, {"whitney_runs", g.whitney_runs}, {"whitney_ok", g.whitney_ok}},
                      {{"slack", 0.05}, {"spread", 2.0}}, g.pass, sc.seed, t0));
}

void suite_weak11(const Scenario& sc, Reporter& out) {
  const auto t0 = Clock::now();
  const Weak11ExperimentReport w = weak11_experiment(sc, 10, std::min<std::size_t>(32, sc.mu.size()));
  out.add(make_record("weak11.stability", "weak (1,1) statistic across random measures",
                      {{"sup", w.sup}, {"spread", w.spread}, {"spread_complex", w.spread_complex}, {"zero_measure", w.zero_measure_ok}}, {{"spread", 2.0}},
                      w.pass, sc.seed, t0));
}

struct ScenarioSuite {
  const char* name;
  void (*fn)(const Scenario&, Reporter&);
};

const ScenarioSuite kScenarioSuites[] = {
    {"measure", suite_measure},         {"lattice", suite_lattice},
    {"badness", suite_badness},         {"cone-volume", suite_cone_volume},
    {"whitney", suite_whitney},         {"czd", suite_czd},
    {"martingale", suite_martingale},   {"suppression", suite_suppression},
    {"tb-hypotheses", suite_tb_hypotheses}, {"stopping-sets", suite_stopping_sets},
    {"good-lambda", suite_good_lambda}, {"weak11", suite_weak11},
};

}  // namespace

std::vector<std::string> scenario_suite_names() {
  std::vector<std::string> out;
  for (const auto& s : kScenarioSuites) out.emplace_back(s.name);
  return out;
}

bool run_scenario_suite(const std::string& name, const Scenario& sc, Reporter& out) {
  for (const auto& s : kScenarioSuites)
    if (name == s.name) {
      s.fn(sc, out);
      return true;
    }
  return false;
}

int criterion_count() { return static_cast<int>(std::size(kCriteria)); }

std::string criterion_key(int id) {
  require(id >= 1 && id <= criterion_count(), "criterion id out of range");
  return kCriteria[id - 1].key;
}

int criterion_by_key(const std::string& key) {
  for (int i = 0; i < criterion_count(); ++i)
    if (key == kCriteria[i].key) return i + 1;
  return 0;
}

CriterionResult run_criterion(int id, std::uint64_t seed) {
  require(id >= 1 && id <= criterion_count(), "criterion id out of range");
  const CriterionDef& d = kCriteria[id - 1];
  const auto t0 = Clock::now();
  CriterionResult r;
  try {
    r = d.fn(seed);
  } catch (const std::exception& e) {
    r.pass = false;
    r.summary = {{"error", e.what()}};
  }
  r.id = id;
  r.key = d.key;
  r.title = d.title;
  r.budget = d.budget;
  r.seconds = seconds_since(t0);
  if (r.seconds > r.budget) {
    r.pass = false;
    r.summary["over_budget"] = true;
  }
  return r;
}

}  // namespace conesq
