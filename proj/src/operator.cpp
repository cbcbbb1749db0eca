#include "conesq/operator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace conesq {

namespace {

// r^-p from r^2 with fast paths for the common exponents.
inline double inv_power(double r2, double p) {
  if (p == 1.5) {
    const double r = std::sqrt(r2);
    return 1.0 / (r * std::sqrt(r));
  }
  if (p == 2.0) return 1.0 / r2;
  if (p == 2.5) {
    const double r = std::sqrt(r2);
    return 1.0 / (r2 * std::sqrt(r));
  }
  if (p == 1.0) return 1.0 / std::sqrt(r2);
  if (p == 3.0) return 1.0 / (r2 * std::sqrt(r2));
  return std::pow(r2, -0.5 * p);
}

}  // namespace

cplx Kernel::operator()(const Point& x, const Point& y) const {
  switch (kind) {
    case KernelKind::Power: return {inv_power(dist2(x, y), m + alpha), 0.0};
    case KernelKind::Signed: return {(x[0] - y[0]) * inv_power(dist2(x, y), m + alpha + 1.0), 0.0};
    case KernelKind::Custom: return custom(x, y);
  }
  return {0.0, 0.0};
}

Kernel power_kernel(double m, double alpha) {
  require(m > 0.0 && alpha > 0.0 && alpha <= 1.0, "kernel needs m > 0 and alpha in (0, 1]");
  Kernel k;
  k.kind = KernelKind::Power;
  k.name = "power";
  k.m = m;
  k.alpha = alpha;
  k.beta = 1.0;
  k.K1 = 1.0;
  const double p = m + alpha;
  // |grad_y| = p |x-y|^-(p+1) and |x-y'| >= |x-y|/2 on the segment [y, y'].
  k.K2 = p * std::pow(2.0, p + 1.0);
  return k;
}

Kernel signed_kernel(double m, double alpha) {
  require(m > 0.0 && alpha > 0.0 && alpha <= 1.0, "kernel needs m > 0 and alpha in (0, 1]");
  Kernel k;
  k.kind = KernelKind::Signed;
  k.name = "signed";
  k.m = m;
  k.alpha = alpha;
  k.beta = 1.0;
  k.K1 = 1.0;
  const double q = m + alpha;
  // |grad_y| <= (q + 2) |x-y|^-(q+1); same halving argument.
  k.K2 = (q + 2.0) * std::pow(2.0, q + 1.0);
  return k;
}

Kernel custom_kernel(std::string name, double m, double alpha, double beta, double K1, double K2,
                     std::function<cplx(const Point&, const Point&)> fn) {
  require(static_cast<bool>(fn), "custom kernel needs an evaluator");
  Kernel k;
  k.kind = KernelKind::Custom;
  k.name = std::move(name);
  k.m = m;
  k.alpha = alpha;
  k.beta = beta;
  k.K1 = K1;
  k.K2 = K2;
  k.custom = std::move(fn);
  return k;
}

Kernel suppressed_kernel(const Kernel& base, std::function<bool(const Point&)> in_A) {
  Kernel k = base;
  k.kind = KernelKind::Custom;
  k.name = base.name + "-suppressed";
  k.custom = [base, in_A = std::move(in_A)](const Point& x, const Point& y) -> cplx {
    return in_A(x) ? cplx(0.0, 0.0) : base(x, y);
  };
  return k;
}

SourceBlock SourceBlock::single(const ComplexAtomicMeasure& nu) {
  SourceBlock b;
  b.points = nu.points();
  b.rhs = 1;
  b.w = nu.weights();
  return b;
}

SourceBlock SourceBlock::columns(const std::vector<Point>& points, const std::vector<std::vector<cplx>>& cols) {
  require(!cols.empty(), "need at least one column");
  SourceBlock b;
  b.points = points;
  b.rhs = cols.size();
  b.w.assign(points.size() * b.rhs, cplx(0.0, 0.0));
  for (std::size_t r = 0; r < cols.size(); ++r) {
    require(cols[r].size() == points.size(), "column size mismatch");
    for (std::size_t i = 0; i < points.size(); ++i) b.w[i * b.rhs + r] = cols[r][i];
  }
  return b;
}

void apply_T_block(const Kernel& S, const SourceBlock& src, const Point& x, cplx* out) {
  const std::size_t R = src.rhs;
  for (std::size_t r = 0; r < R; ++r) out[r] = 0.0;
  if (S.kind == KernelKind::Custom) {
    for (std::size_t i = 0; i < src.points.size(); ++i) {
      const cplx s = S.custom(x, src.points[i]);
      const cplx* w = &src.w[i * R];
      for (std::size_t r = 0; r < R; ++r) out[r] += s * w[r];
    }
    return;
  }
  // Real-valued built-ins: accumulate real and imaginary parts separately.
  const double p = S.kind == KernelKind::Power ? S.m + S.alpha : S.m + S.alpha + 1.0;
  const bool sgn = S.kind == KernelKind::Signed;
  for (std::size_t i = 0; i < src.points.size(); ++i) {
    const Point& z = src.points[i];
    double s = inv_power(dist2(x, z), p);
    if (sgn) s *= (x[0] - z[0]);
    const cplx* w = &src.w[i * R];
    for (std::size_t r = 0; r < R; ++r) out[r] += s * w[r];
  }
}

cplx apply_T(const Kernel& S, const ComplexAtomicMeasure& nu, const Point& x, const ClosedSet& E) {
  require(E.distance(x) > 0.0, "T is evaluated off E only");
  cplx acc(0.0, 0.0);
  for (std::size_t i = 0; i < nu.size(); ++i) acc += S(x, nu.point(i)) * nu.weight(i);
  return acc;
}

cplx apply_T(const Kernel& S, const AtomicMeasure& mu, const std::vector<cplx>& f, const Point& x, const ClosedSet& E) {
  require(f.size() == mu.size(), "f must be indexed by the atoms of mu");
  require(E.distance(x) > 0.0, "T is evaluated off E only");
  cplx acc(0.0, 0.0);
  for (std::size_t i = 0; i < mu.size(); ++i) acc += S(x, mu.point(i)) * (f[i] * mu.weight(i));
  return acc;
}

Estimate root_estimate(const Estimate& I) {
  Estimate out;
  out.value = std::sqrt(std::max(I.value, 0.0));
  out.stderr = out.value > 0.0 ? I.stderr / (2.0 * out.value) : std::sqrt(std::max(I.stderr, 0.0));
  return out;
}

double ball_volume(int n, double r) {
  static const double unit[] = {1.0, 2.0, M_PI, 4.0 * M_PI / 3.0, M_PI * M_PI / 2.0};
  return unit[n] * std::pow(r, n);
}

Point uniform_in_ball(const Point& c, double r, Rng& rng) {
  Point p(c.n);
  for (;;) {
    double s = 0.0;
    for (int i = 0; i < c.n; ++i) {
      p[i] = rng.uniform(-1.0, 1.0);
      s += p[i] * p[i];
    }
    if (s < 1.0) break;
  }
  for (int i = 0; i < c.n; ++i) p[i] = c[i] + r * p[i];
  return p;
}

namespace {

std::uint64_t point_key(const Point& p) {
  std::uint64_t h = 0x51a3c0de5eedULL + static_cast<std::uint64_t>(p.n);
  for (int i = 0; i < p.n; ++i) h = splitmix64(h ^ std::bit_cast<std::uint64_t>(p[i]));
  return h;
}

}  // namespace

ConeSampleSet::ConeSampleSet(const ClosedSet& E, const Point& apex, double s, double t, const QuadratureConfig& cfg)
    : apex_(apex), s_(s), t_(t) {
  require(s > 0.0, "lower truncation must be positive");
  require(s < t && std::isfinite(t), "need s < t < infinity");
  require(cfg.samples_per_shell >= 2, "need at least two samples per shell");
  const int n = E.dim();
  const std::uint64_t key = point_key(apex);
  for (std::size_t j = 0;; ++j) {
    const double top = t * std::ldexp(1.0, -static_cast<int>(j));
    if (top <= s) break;
    const double bot = std::max(s, 0.5 * top);
    const double R = 2.0 * top;
    const double V = ball_volume(n, R);
    Rng rng(derive_seed(cfg.seed, {key, j}));
    const std::size_t N = cfg.samples_per_shell;
    for (std::size_t i = 0; i < N; ++i) {
      const Point x = uniform_in_ball(apex, R, rng);
      const double d = E.distance(x);
      if (!in_cone(apex, x, d, bot, top)) continue;
      samples_.push_back({x, d, V * std::pow(d, -n) / static_cast<double>(N), static_cast<int>(j)});
    }
    draws_.push_back(N);
  }
}

Estimate ConeSampleSet::integrate(const std::vector<double>& g, double lower, double upper,
                                  const std::vector<char>* keep) const {
  require(g.size() == samples_.size(), "integrand size mismatch");
  std::vector<double> sum(draws_.size(), 0.0), sum2(draws_.size(), 0.0);
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const ConeSample& c = samples_[i];
    if (!(c.d > lower && c.d <= upper)) continue;
    if (keep && !(*keep)[i]) continue;
    const double v = c.w * g[i];
    sum[static_cast<std::size_t>(c.shell)] += v;
    sum2[static_cast<std::size_t>(c.shell)] += v * v;
  }
  Estimate e;
  double var = 0.0;
  for (std::size_t j = 0; j < draws_.size(); ++j) {
    const double N = static_cast<double>(draws_[j]);
    e.value += sum[j];
    // Per-draw values are N * w * g; their sample variance over N draws.
    const double m2 = N * sum2[j];
    const double s2 = std::max(0.0, (m2 - sum[j] * sum[j]) * N / (N - 1.0));
    var += s2 / N;
  }
  e.stderr = std::sqrt(var);
  return e;
}

Estimate ConeSampleSet::integrate(const std::function<double(const ConeSample&)>& g) const {
  std::vector<double> v(samples_.size());
  for (std::size_t i = 0; i < samples_.size(); ++i) v[i] = g(samples_[i]);
  return integrate(v);
}

Estimate cone_sigma_integral(const ClosedSet& E, const Point& y, double s, double t,
                             const std::function<double(const Point&, double)>& g, const QuadratureConfig& cfg) {
  ConeSampleSet q(E, y, s, t, cfg);
  return q.integrate([&](const ConeSample& c) { return g(c.x, c.d); });
}

std::vector<std::vector<double>> square_integrands(const Kernel& S, const SourceBlock& src, const ConeSampleSet& q) {
  const std::size_t R = src.rhs;
  std::vector<std::vector<double>> out(R, std::vector<double>(q.samples().size()));
  std::vector<cplx> tv(R);
  for (std::size_t i = 0; i < q.samples().size(); ++i) {
    const ConeSample& c = q.samples()[i];
    apply_T_block(S, src, c.x, tv.data());
    const double h = std::pow(c.d, 2.0 * S.alpha);
    for (std::size_t r = 0; r < R; ++r) out[r][i] = std::norm(tv[r]) * h;
  }
  return out;
}

Estimate square_function(const Kernel& S, const ComplexAtomicMeasure& nu, const Point& y, double s, double t,
                         const ClosedSet& E, const QuadratureConfig& cfg) {
  ConeSampleSet q(E, y, s, t, cfg);
  const auto g = square_integrands(S, SourceBlock::single(nu), q);
  return root_estimate(q.integrate(g[0]));
}

Estimate square_function(const Kernel& S, const AtomicMeasure& mu, const std::vector<cplx>& f, const Point& y, double s,
                         double t, const ClosedSet& E, const QuadratureConfig& cfg) {
  return square_function(S, ComplexAtomicMeasure::density(mu, f), y, s, t, E, cfg);
}

std::vector<std::vector<Estimate>> square_function_field(const Kernel& S, const SourceBlock& src,
                                                         const std::vector<Point>& apexes, double s, double t,
                                                         const ClosedSet& E, const QuadratureConfig& cfg) {
  std::vector<std::vector<Estimate>> out(apexes.size());
  parallel_for(apexes.size(), [&](std::size_t a) {
    ConeSampleSet q(E, apexes[a], s, t, cfg);
    const auto g = square_integrands(S, src, q);
    out[a].resize(src.rhs);
    for (std::size_t r = 0; r < src.rhs; ++r) out[a][r] = root_estimate(q.integrate(g[r]));
  });
  return out;
}

SymmetricDifference cone_symmetric_difference(const ClosedSet& E, const Point& y, const Point& y2, double t, double r,
                                              const QuadratureConfig& cfg, int shells) {
  require(t >= 10.0, "symmetric difference needs t >= 10");
  require(dist(y, y2) < r, "need |y - y'| < r");
  require(shells >= 1, "need at least one shell");
  SymmetricDifference out;
  out.shells = static_cast<std::size_t>(shells);
  if (y == y2) return out;
  const int n = E.dim();
  const double h0 = t * r;
  const double gap = dist(y, y2);
  const std::uint64_t key = splitmix64(point_key(y) ^ splitmix64(point_key(y2)));
  double var = 0.0;
  for (int j = 0; j < shells; ++j) {
    const double bot = h0 * std::ldexp(1.0, j);
    const double top = 2.0 * bot;
    const double R = 2.0 * top + gap;
    const double V = ball_volume(n, R);
    Rng rng(derive_seed(cfg.seed, {key, static_cast<std::uint64_t>(j), 0x5d1ffULL}));
    const std::size_t N = cfg.samples_per_shell;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const Point x = uniform_in_ball(y, R, rng);
      const double d = E.distance(x);
      if (!(d > bot && d <= top)) continue;
      const bool a = dist(x, y) < 2.0 * d;
      const bool b = dist(x, y2) < 2.0 * d;
      if (a == b) continue;
      const double v = V * std::pow(d, -n);
      sum += v;
      sum2 += v * v;
    }
    const double Nd = static_cast<double>(N);
    const double mean = sum / Nd;
    out.sigma.value += mean;
    var += std::max(0.0, sum2 / Nd - mean * mean) / (Nd - 1.0);
  }
  out.sigma.stderr = std::sqrt(var);
  return out;
}

KernelCheck kernel_estimate_check(const Kernel& S, const ClosedSet& E, std::size_t n_samples, std::uint64_t seed) {
  KernelCheck rep;
  Rng rng(derive_seed(seed, {0xc4ec4ULL}));
  const std::vector<Point> cloud = E.is_cloud() ? E.atoms() : E.sample(512, rng);
  const int n = E.dim();
  const double p = S.m + S.alpha;
  for (std::size_t s = 0; s < n_samples; ++s) {
    const Point& y = cloud[rng.below(cloud.size())];
    // y' among the few nearest cloud points (possibly y itself).
    std::vector<std::pair<double, std::size_t>> near;
    near.reserve(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) near.emplace_back(dist(y, cloud[i]), i);
    const std::size_t keep = std::min<std::size_t>(8, near.size());
    std::partial_sort(near.begin(), near.begin() + static_cast<std::ptrdiff_t>(keep), near.end());
    const Point& y2 = cloud[near[rng.below(keep)].second];
    const double gap = dist(y, y2);
    const double rho = gap > 0.0 ? gap * std::exp(rng.uniform(std::log(2.0), std::log(40.0)))
                                 : std::exp(rng.uniform(std::log(1e-3), std::log(1.0)));
    Point dir(n);
    double nn = 0.0;
    while (nn == 0.0) {
      nn = 0.0;
      for (int i = 0; i < n; ++i) {
        dir[i] = rng.normal();
        nn += dir[i] * dir[i];
      }
    }
    const Point x = y + (rho / std::sqrt(nn)) * dir;
    if (E.distance(x) <= 0.0) continue;
    const double rxy = dist(x, y);
    ++rep.samples;
    rep.size_ratio = std::max(rep.size_ratio, std::abs(S(x, y)) * std::pow(rxy, p) / S.K1);
    if (gap > 0.0 && gap <= 0.5 * rxy) {
      ++rep.holder_samples;
      const double q = std::abs(S(x, y) - S(x, y2)) * std::pow(rxy, p + S.beta) / (std::pow(gap, S.beta) * S.K2);
      rep.holder_ratio = std::max(rep.holder_ratio, q);
    }
  }
  const double tol = 1.0 + 1e-12;
  rep.pass = rep.samples > 0 && rep.size_ratio <= tol && rep.holder_ratio <= tol;
  return rep;
}

}  // namespace conesq
