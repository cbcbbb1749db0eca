#include "conesq/czdecomp.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace conesq {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

double cz_threshold(const AtomicMeasure& mu, const ComplexAtomicMeasure& nu) {
  require(mu.total_mass() > 0.0, "mu must have positive mass");
  const int n = mu.dim();
  return std::ldexp(1.0, n + 1) * nu.total_variation() / mu.total_mass();
}

double CZDecomposition::weight(std::size_t ball, std::size_t atom, const AtomicMeasure& mu) const {
  return balls[ball].B.contains(mu.point(atom)) ? 1.0 / cover[atom] : 0.0;
}

std::vector<cplx> CZDecomposition::bad_part(std::size_t ball, const AtomicMeasure& mu,
                                            const ComplexAtomicMeasure& nu) const {
  std::vector<cplx> w(mu.size(), cplx(0.0, 0.0));
  const CZBall& cb = balls[ball];
  for (std::size_t p = 0; p < mu.size(); ++p) {
    if (cb.B.contains(mu.point(p))) w[p] += nu.weight(p) / static_cast<double>(cover[p]);
    if (cb.R.contains(mu.point(p))) w[p] -= cb.alpha * mu.weight(p);
  }
  return w;
}

namespace {

struct Radial {
  std::vector<double> d;   // sorted distances
  std::vector<double> nv;  // |nu| per sorted atom
  std::vector<double> mu;  // mu per sorted atom
};

Radial radial(const ComplexAtomicMeasure& nu, const AtomicMeasure& mu, const Point& p) {
  std::vector<std::size_t> ord(mu.size());
  std::iota(ord.begin(), ord.end(), 0);
  std::vector<double> dd(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) dd[i] = dist(p, mu.point(i));
  std::stable_sort(ord.begin(), ord.end(), [&](std::size_t x, std::size_t y) { return dd[x] < dd[y]; });
  Radial r;
  for (std::size_t i : ord) {
    r.d.push_back(dd[i]);
    r.nv.push_back(std::abs(nu.weight(i)));
    r.mu.push_back(mu.weight(i));
  }
  return r;
}

// |nu|(closed B(p, rho)) - c lambda mu(closed B(p, 2 rho)).
double excess(const Radial& r, double rho, double cl) {
  double a = 0.0, b = 0.0;
  for (std::size_t i = 0; i < r.d.size() && r.d[i] <= 2.0 * rho; ++i) {
    if (r.d[i] <= rho) a += r.nv[i];
    b += r.mu[i];
  }
  return a - cl * b;
}

std::vector<double> critical_radii(const Radial& r) {
  std::vector<double> c{0.0};
  for (double d : r.d) {
    c.push_back(d);
    c.push_back(0.5 * d);
  }
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

}  // namespace

BallSpec smallest_doubling_dilate(const AtomicMeasure& mu, const BallSpec& B, double a, double b, double m,
                                  bool positive_mass) {
  require(b > std::pow(a, m), "need b > a^m");
  require(a > 1.0 && B.radius > 0.0, "need a > 1 and a positive radius");
  const double r = B.radius;
  std::vector<double> s;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu.weight(i) <= 0.0) continue;
    const double d = dist(B.center, mu.point(i));
    // Ratios are tested after division: d barely above r can round to 1.
    if (d / r > 1.0) s.push_back(d / r);
    if (d / (a * r) > 1.0) s.push_back(d / (a * r));
  }
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  std::vector<double> cand;
  const double first = s.empty() ? 2.0 : 0.5 * (1.0 + s.front());
  if (first > 1.0) cand.push_back(first);
  cand.insert(cand.end(), s.begin(), s.end());
  for (double sc : cand) {
    const BallSpec D{B.center, sc * r, true, B.restricted};
    const double m1 = ball_mass(mu, D);
    if (positive_mass && !(m1 > 0.0)) continue;
    if (ball_mass(mu, D.dilate(a)) <= b * m1) return D;
  }
  throw Error("no doubling dilate found");
}

CZDecomposition cz_decompose(const ComplexAtomicMeasure& nu, const AtomicMeasure& mu, double lambda, double m) {
  require(nu.points() == mu.points(), "nu and mu must share their atoms");
  require(lambda > cz_threshold(mu, nu), "lambda must exceed 2^(n+1) |nu| / mu");
  CZDecomposition dec;
  dec.lambda = lambda;
  dec.c = std::ldexp(1.0, -(mu.dim() + 1));
  dec.a = 6.0;
  dec.b = std::pow(6.0, m + 1.0);
  const double cl = dec.c * lambda;
  const std::size_t N = mu.size();

  // Largest radius with positive excess for every atom of supp nu.
  std::vector<double> radius(N, 0.0);
  parallel_for(N, [&](std::size_t p) {
    if (std::abs(nu.weight(p)) == 0.0) return;
    const Radial rd = radial(nu, mu, mu.point(p));
    const auto c = critical_radii(rd);
    for (std::size_t i = c.size(); i-- > 0;) {
      if (excess(rd, c[i], cl) > 0.0) {
        require(i + 1 < c.size(), "excess positive at every radius");
        radius[p] = std::max(c[i], 0.5 * c[i + 1]);
        return;
      }
    }
  });

  std::vector<std::size_t> bad;
  for (std::size_t p = 0; p < N; ++p)
    if (radius[p] > 0.0) bad.push_back(p);
  std::stable_sort(bad.begin(), bad.end(), [&](std::size_t x, std::size_t y) { return radius[x] > radius[y]; });
  for (std::size_t p : bad) {
    bool covered = false;
    for (const CZBall& cb : dec.balls) covered = covered || cb.B.contains(mu.point(p));
    if (covered) continue;
    CZBall cb;
    cb.center = p;
    cb.B = BallSpec{mu.point(p), radius[p], true, true};
    dec.balls.push_back(cb);
  }

  dec.cover.assign(N, 0);
  for (const CZBall& cb : dec.balls)
    for (std::size_t p = 0; p < N; ++p)
      if (cb.B.contains(mu.point(p))) ++dec.cover[p];

  dec.f.assign(N, cplx(0.0, 0.0));
  for (std::size_t p = 0; p < N; ++p)
    if (dec.cover[p] == 0 && mu.weight(p) > 0.0) dec.f[p] = nu.weight(p) / mu.weight(p);

  for (CZBall& cb : dec.balls) {
    cb.nu_B = 0.0;
    cplx wsum(0.0, 0.0);
    for (std::size_t p = 0; p < N; ++p)
      if (cb.B.contains(mu.point(p))) {
        cb.nu_B += std::abs(nu.weight(p));
        wsum += nu.weight(p) / static_cast<double>(dec.cover[p]);
      }
    cb.mu_2B = ball_mass(mu, cb.B.dilate(2.0));
    cb.R = smallest_doubling_dilate(mu, cb.B.dilate(4.0), dec.a, dec.b, m, true);
    cb.alpha = wsum / ball_mass(mu, cb.R);
  }
  dec.checks = verify_cz(dec, nu, mu);
  return dec;
}

CZChecks verify_cz(const CZDecomposition& dec, const ComplexAtomicMeasure& nu, const AtomicMeasure& mu) {
  CZChecks ck;
  std::ostringstream why;
  const std::size_t N = mu.size();
  const double cl = dec.c * dec.lambda;
  constexpr double rel = 1e-12;
  std::vector<double> phi_abs(N, 0.0);
  std::vector<cplx> phi(N, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < dec.balls.size(); ++i) {
    const CZBall& cb = dec.balls[i];
    const Radial rd = radial(nu, mu, cb.B.center);
    // Positive excess at the chosen radius.
    if (!(excess(rd, cb.B.radius, cl) > 0.0)) {
      ck.heavy_ball = false;
      why << "heavy_ball ball " << i << "; ";
    }
    // No excess at 2r or any critical radius above it.
    if (excess(rd, 2.0 * cb.B.radius, cl) > 0.0) ck.maximal_radius = false;
    for (double c : critical_radii(rd))
      if (c > 2.0 * cb.B.radius && excess(rd, c, cl) > 0.0) {
        ck.maximal_radius = false;
        why << "maximal_radius ball " << i << " rho " << c << "; ";
        break;
      }
    // R strictly contains 4B and is concentric; phi lives on R by construction.
    if (!(cb.R.radius > 4.0 * cb.B.radius) || !(cb.R.center == cb.B.center)) ck.companion = false;
    // The correction carries the same integral as nu on B.
    double muR = 0.0, nuB = 0.0;
    cplx wsum(0.0, 0.0);
    for (std::size_t p = 0; p < N; ++p) {
      if (cb.R.contains(mu.point(p))) {
        muR += mu.weight(p);
        phi[p] += cb.alpha;
        phi_abs[p] += std::abs(cb.alpha);
      }
      if (cb.B.contains(mu.point(p))) {
        wsum += nu.weight(p) / static_cast<double>(dec.cover[p]);
        nuB += std::abs(nu.weight(p));
      }
    }
    if (!(std::abs(cb.alpha * muR - wsum) <= rel * std::max(nuB, 1e-300))) {
      ck.mean_preserved = false;
      why << "mean_preserved ball " << i << "; ";
    }
    if (!(muR > 0.0)) ck.companion = false;
    // Size of the correction against |nu|(B).
    if (nuB > 0.0) ck.phi_mass = std::max(ck.phi_mass, std::abs(cb.alpha) * muR / nuB);
  }
  if (!(ck.phi_mass <= 1.0 + rel)) ck.companion_size = false;
  // Off the balls nu = f mu with |f| <= lambda.
  for (std::size_t p = 0; p < N; ++p) {
    ck.overlap = std::max<std::size_t>(ck.overlap, static_cast<std::size_t>(dec.cover[p]));
    if (dec.cover[p] > 0) continue;
    const cplx fm = dec.f[p] * mu.weight(p);
    if (!(std::abs(fm - nu.weight(p)) <= rel * std::abs(nu.weight(p))) || std::abs(dec.f[p]) > dec.lambda) {
      ck.off_balls = false;
      why << "off_balls atom " << p << "; ";
    }
  }
  for (std::size_t p = 0; p < N; ++p) {
    ck.phi_sum = std::max(ck.phi_sum, phi_abs[p] / dec.lambda);
    ck.good_part = std::max(ck.good_part, std::abs(dec.f[p] + phi[p]) / dec.lambda);
  }
  ck.bounded_sum = std::isfinite(ck.phi_sum);
  ck.detail = why.str();
  return ck;
}

nlohmann::json CZChecks::flags() const {
  return {{"heavy_ball", heavy_ball},         {"maximal_radius", maximal_radius}, {"off_balls", off_balls},
          {"companion", companion},           {"mean_preserved", mean_preserved}, {"bounded_sum", bounded_sum},
          {"companion_size", companion_size}};
}

AnnulusReport nondoubling_annulus_bound_check(const AtomicMeasure& mu, const BallSpec& B1, const BallSpec& B2,
                                              double a, double b, double m) {
  require(B1.center == B2.center && B1.radius <= B2.radius, "need concentric B1 inside B2");
  AnnulusReport rep;
  for (double r = a * B1.radius; r <= B2.radius; r *= a) {
    const BallSpec D{B1.center, r, B1.closed, B1.restricted};
    if (is_doubling(mu, D, a, b)) {
      rep.skipped = true;
      rep.reason = "doubling dilate at radius " + std::to_string(r);
      return rep;
    }
  }
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const Point& x = mu.point(i);
    if (B2.contains(x) && !B1.contains(x)) rep.lhs += mu.weight(i) * std::pow(dist(x, B1.center), -m);
  }
  rep.rhs = ball_mass(mu, B2) * std::pow(B2.radius, -m);
  rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
  return rep;
}

BallIntegralReport cz_ball_integrals(const Kernel& S, const ClosedSet& E, const CZDecomposition& dec,
                                     const ComplexAtomicMeasure& nu, const AtomicMeasure& mu, double s, double t,
                                     const QuadratureConfig& cfg) {
  BallIntegralReport rep;
  if (dec.balls.empty()) return rep;
  std::vector<std::vector<cplx>> cols;
  for (std::size_t i = 0; i < dec.balls.size(); ++i) cols.push_back(dec.bad_part(i, mu, nu));
  // Only atoms carrying some b_i act as sources.
  std::vector<Point> src_pts;
  std::vector<std::vector<cplx>> src_cols(cols.size());
  for (std::size_t p = 0; p < mu.size(); ++p) {
    bool any = false;
    for (const auto& c : cols) any = any || c[p] != cplx(0.0, 0.0);
    if (!any) continue;
    src_pts.push_back(mu.point(p));
    for (std::size_t i = 0; i < cols.size(); ++i) src_cols[i].push_back(cols[i][p]);
  }
  const SourceBlock src = SourceBlock::columns(src_pts, src_cols);
  const auto field = square_function_field(S, src, mu.points(), s, t, E, cfg);
  for (std::size_t i = 0; i < dec.balls.size(); ++i) {
    const BallSpec twoB = dec.balls[i].B.dilate(2.0);
    double acc = 0.0;
    for (std::size_t p = 0; p < mu.size(); ++p)
      if (!twoB.contains(mu.point(p))) acc += field[p][i].value * mu.weight(p);
    rep.ratio.push_back(dec.balls[i].nu_B > 0.0 ? acc / dec.balls[i].nu_B : 0.0);
  }
  rep.median = median(rep.ratio);
  return rep;
}

std::vector<double> lambda_grid(std::vector<double> values, int points, double ratio) {
  double anchor = median(values);
  if (!(anchor > 0.0)) anchor = values.empty() ? 1.0 : *std::max_element(values.begin(), values.end());
  if (!(anchor > 0.0)) anchor = 1.0;
  std::vector<double> g;
  for (int j = 0; j < points; ++j) g.push_back(anchor * std::pow(ratio, j - points / 2));
  return g;
}

Weak11Report weak11_statistic(const std::vector<double>& C_values, const AtomicMeasure& mu, double total_variation) {
  require(C_values.size() == mu.size(), "one value per atom");
  Weak11Report rep;
  rep.lambda = lambda_grid(C_values, 48, std::pow(2.0, 0.25));
  for (double lam : rep.lambda) {
    double mass = 0.0;
    for (std::size_t p = 0; p < mu.size(); ++p)
      if (C_values[p] > lam) mass += mu.weight(p);
    const double v = total_variation > 0.0 ? lam * mass / total_variation : 0.0;
    rep.value.push_back(v);
    rep.sup = std::max(rep.sup, v);
  }
  return rep;
}

}  // namespace conesq
