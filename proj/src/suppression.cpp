#include "conesq/suppression.hpp"

#include <algorithm>
#include <numeric>

namespace conesq {

bool SuppressionData::in_A(const Point& x, double d) const {
  for (std::size_t i = 0; i < S0.size(); ++i)
    if (d < height[i] && in_cone(S0[i], x, d)) return true;
  return false;
}

double density_radius(const AtomicMeasure& mu, const Point& y, double m, double C0) {
  require(m > 0.0 && C0 > 0.0, "need m > 0 and C0 > 0");
  const double K = std::pow(11.0, m) * C0;
  const RadialProfile prof(mu, y);
  const auto& d = prof.distances();
  const auto& cum = prof.cumulative();
  double best = 0.0;
  // On (d_i, d_{i+1}] the open-ball mass is the mass of atoms with d <= d_i.
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i + 1 < d.size() && d[i + 1] == d[i]) continue;
    const double M = cum[i + 1];
    const double reach = std::pow(M / K, 1.0 / m);
    const double hi = i + 1 < d.size() ? d[i + 1] : kInf;
    if (reach > d[i]) best = std::max(best, std::min(hi, reach));
  }
  return best;
}

double cone_threshold(const ConeSampleSet& q, const std::vector<double>& g, double lambda) {
  const auto& smp = q.samples();
  std::vector<std::size_t> ord(smp.size());
  std::iota(ord.begin(), ord.end(), 0);
  std::stable_sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return smp[a].d > smp[b].d; });
  const double L2 = lambda * lambda;
  double acc = 0.0;
  for (std::size_t i : ord) {
    acc += smp[i].w * g[i];
    if (acc > L2) return smp[i].d;
  }
  return 0.0;
}

SuppressionData compute_suppression(const Kernel& S, const ClosedSet& E, const AtomicMeasure& mu,
                                    const std::vector<cplx>& b, const BallSpec& B, const SuppressionParams& params) {
  require(params.lambda0 > 0.0, "lambda0 must be positive");
  require(params.s_min > 0.0 && params.s_min < params.t_max, "need 0 < s_min < t_max");
  require(b.size() == mu.size(), "b must be indexed by atoms");
  const std::size_t N = mu.size();
  SuppressionData D;
  D.params = params;
  D.B = B;
  D.in_B.assign(N, 0);
  D.C.assign(N, 0.0);
  D.t.assign(N, 0.0);
  D.r.assign(N, 0.0);
  D.in_S0.assign(N, 0);
  D.in_S.assign(N, 0);
  std::vector<std::size_t> atoms;
  for (std::size_t a = 0; a < N; ++a)
    if (B.contains(mu.point(a))) {
      D.in_B[a] = 1;
      atoms.push_back(a);
    }
  std::vector<cplx> bw(N);
  for (std::size_t a = 0; a < N; ++a) bw[a] = b[a] * mu.weight(a);
  const SourceBlock src = SourceBlock::columns(mu.points(), {bw});
  parallel_for(atoms.size(), [&](std::size_t i) {
    const std::size_t a = atoms[i];
    const ConeSampleSet q(E, mu.point(a), params.s_min, params.t_max, params.cfg);
    const auto g = square_integrands(S, src, q);
    D.C[a] = root_estimate(q.integrate(g[0])).value;
    D.t[a] = cone_threshold(q, g[0], params.lambda0);
    D.r[a] = density_radius(mu, mu.point(a), params.m, params.C0);
  });
  std::vector<double> reach;
  for (std::size_t a : atoms)
    if (D.C[a] > params.lambda0) {
      D.in_S0[a] = 1;
      D.S0.push_back(mu.point(a));
      D.height.push_back(D.t[a] >= D.r[a] ? 2.0 * D.t[a] : D.r[a]);
      reach.push_back(10.0 * std::max(D.t[a], D.r[a]));
    }
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t i = 0; i < D.S0.size(); ++i)
      if (dist(mu.point(a), D.S0[i]) < reach[i]) {
        D.in_S[a] = 1;
        break;
      }
  return D;
}

std::vector<std::vector<PairedValue>> paired_square_field(const Kernel& S, const ClosedSet& E, const SourceBlock& src,
                                                          const std::vector<Point>& apexes, double s, double t,
                                                          const SuppressionData& data) {
  const auto& P = data.params;
  require(P.s_min <= s && s < t && t <= P.t_max, "truncation must lie inside the sampled range");
  std::vector<std::vector<PairedValue>> out(apexes.size());
  parallel_for(apexes.size(), [&](std::size_t i) {
    const ConeSampleSet q(E, apexes[i], P.s_min, P.t_max, P.cfg);
    const auto g = square_integrands(S, src, q);
    std::vector<char> keep(q.samples().size());
    for (std::size_t j = 0; j < keep.size(); ++j) keep[j] = !data.in_A(q.samples()[j].x, q.samples()[j].d);
    out[i].resize(src.rhs);
    for (std::size_t c = 0; c < src.rhs; ++c) {
      out[i][c].plain = root_estimate(q.integrate(g[c], s, t));
      out[i][c].suppressed = root_estimate(q.integrate(g[c], s, t, &keep));
    }
  });
  return out;
}

Kernel suppressed_kernel(const Kernel& base, const SuppressionData& data, const ClosedSet& E) {
  return suppressed_kernel(base, [&data, &E](const Point& x) { return data.in_A(x, E.distance(x)); });
}

BigPieceSet build_big_piece(const AtomicMeasure& mu, const std::vector<char>& in_B,
                            const std::vector<std::vector<char>>& exceptional, const std::vector<char>& S,
                            double delta0) {
  require(!exceptional.empty(), "empty ensemble");
  require(delta0 >= 0.0 && delta0 < 1.0, "need delta0 in [0, 1)");
  const std::size_t N = mu.size();
  require(in_B.size() == N && S.size() == N, "mask size mismatch");
  BigPieceSet G;
  G.tau = (1.0 - delta0) / 6.0;
  G.p0.assign(N, 0.0);
  G.G.assign(N, 0);
  for (std::size_t a = 0; a < N; ++a)
    if (in_B[a]) G.mass_B += mu.weight(a);
  for (const auto& ex : exceptional) {
    require(ex.size() == N, "mask size mismatch");
    double m = 0.0;
    for (std::size_t a = 0; a < N; ++a)
      if (in_B[a] && ex[a]) m += mu.weight(a);
    const double frac = G.mass_B > 0.0 ? m / G.mass_B : 0.0;
    G.worst_exceptional = std::max(G.worst_exceptional, frac);
    if (frac > delta0) G.hypothesis = false;
  }
  const double n = static_cast<double>(exceptional.size());
  for (std::size_t a = 0; a < N; ++a) {
    if (!in_B[a]) continue;
    std::size_t hits = 0;
    for (const auto& ex : exceptional) hits += (!ex[a] && !S[a]);
    G.p0[a] = static_cast<double>(hits) / n;
    if (G.p0[a] > G.tau) {
      G.G[a] = 1;
      G.mass_G += mu.weight(a);
    }
  }
  G.bound = (1.0 - delta0) / 3.0 * G.mass_B;
  G.bound_holds = G.mass_G >= G.bound;
  return G;
}

}  // namespace conesq
