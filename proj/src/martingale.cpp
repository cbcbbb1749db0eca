#include "conesq/martingale.hpp"

#include <algorithm>
#include <set>

namespace conesq {

std::vector<CubeRef> BAdaptedSystem::transit_cubes() const {
  std::vector<CubeRef> out;
  for (int k = DB->k0(); k <= DB->lattice().kmax(); ++k)
    for (int q : DB->cubes(k))
      if (is_transit({k, q})) out.push_back({k, q});
  return out;
}

BAdaptedSystem compute_stopping_and_transit(std::shared_ptr<const RestrictedLattice> DB, const AtomicMeasure& mu,
                                            std::vector<cplx> b, double c_acc, std::vector<char> H) {
  const DyadicLattice& L = DB->lattice();
  const std::size_t N = L.num_atoms();
  require(mu.size() == N, "mu must live on the lattice atoms");
  require(b.size() == N, "b must be indexed by atoms");
  for (const cplx& v : b) require(std::isfinite(std::abs(v)), "b must be finite");
  if (H.empty()) H.assign(N, 0);
  require(H.size() == N, "H mask size mismatch");

  BAdaptedSystem sys;
  sys.DB = DB;
  sys.mu = mu;
  sys.b = std::move(b);
  sys.H = std::move(H);
  sys.c_acc = c_acc;
  sys.T.assign(N, 0);
  const int k0 = DB->k0();
  const int levels = L.kmax() - k0 + 1;
  sys.int_b.resize(static_cast<std::size_t>(levels));
  sys.mass.resize(static_cast<std::size_t>(levels));
  sys.transit.resize(static_cast<std::size_t>(levels));
  std::vector<std::vector<char>> under(static_cast<std::size_t>(levels));

  for (int k = k0; k <= L.kmax(); ++k) {
    const std::size_t li = static_cast<std::size_t>(k - k0);
    const auto& lv = L.level(k);
    sys.int_b[li].assign(lv.members.size(), cplx(0.0, 0.0));
    sys.mass[li].assign(lv.members.size(), 0.0);
    sys.transit[li].assign(lv.members.size(), 0);
    under[li].assign(lv.members.size(), 0);
    for (int q : DB->cubes(k)) {
      const std::size_t qi = static_cast<std::size_t>(q);
      for (std::size_t a : lv.members[qi]) {
        sys.int_b[li][qi] += sys.b[a] * mu.weight(a);
        sys.mass[li][qi] += mu.weight(a);
      }
      // A cube below a stopping cube is never maximal.
      if (k > k0) under[li][qi] = under[li - 1][static_cast<std::size_t>(lv.parent[qi])];
      if (!under[li][qi] && sys.mass[li][qi] > 0.0 && std::abs(sys.int_b[li][qi]) < c_acc * sys.mass[li][qi]) {
        sys.stopping.push_back({k, q});
        under[li][qi] = 1;
        for (std::size_t a : lv.members[qi]) sys.T[a] = 1;
      }
    }
  }
  for (int k = k0; k <= L.kmax(); ++k) {
    const std::size_t li = static_cast<std::size_t>(k - k0);
    for (int q : DB->cubes(k)) {
      bool tr = false;
      for (std::size_t a : L.level(k).members[static_cast<std::size_t>(q)]) tr = tr || (!sys.T[a] && !sys.H[a]);
      sys.transit[li][static_cast<std::size_t>(q)] = tr;
    }
  }
  require(sys.is_transit(DB->top()), "top cube is not transit");
  return sys;
}

namespace {

cplx ratio(const std::vector<cplx>& f, const BAdaptedSystem& sys, CubeRef Q) {
  const double m = sys.cube_mass(Q);
  if (!(m > 0.0)) return {0.0, 0.0};
  const cplx ib = sys.int_b[static_cast<std::size_t>(Q.k - sys.DB->k0())][static_cast<std::size_t>(Q.idx)];
  cplx iff(0.0, 0.0);
  for (std::size_t a : sys.DB->lattice().members(Q)) iff += f[a] * sys.mu.weight(a);
  if (ib == cplx(0.0, 0.0)) {
    require(!sys.is_transit(Q), "transit cube with vanishing <b>");
    return {0.0, 0.0};
  }
  return iff / ib;
}

}  // namespace

MartingaleDecomposition decompose(const std::vector<cplx>& f, const BAdaptedSystem& sys) {
  const DyadicLattice& L = sys.DB->lattice();
  require(f.size() == L.num_atoms(), "f must be indexed by atoms");
  MartingaleDecomposition dec;
  const CubeRef top = sys.DB->top();
  dec.top.assign(f.size(), cplx(0.0, 0.0));
  dec.top_ratio = ratio(f, sys, top);
  for (std::size_t a : L.members(top)) dec.top[a] = dec.top_ratio * sys.b[a];

  for (const CubeRef& Q : sys.transit_cubes()) {
    const cplx rQ = ratio(f, sys, Q);
    auto add = [&](CubeRef where, bool residual, const std::function<cplx(std::size_t)>& val) {
      DeltaTerm t;
      t.Q = Q;
      t.residual = residual;
      for (std::size_t a : L.members(where)) {
        t.atoms.push_back(a);
        t.values.push_back(val(a));
      }
      return t;
    };
    if (Q.k == L.kmax()) {
      DeltaTerm t = add(Q, true, [&](std::size_t a) { return f[a] - rQ * sys.b[a]; });
      for (std::size_t i = 0; i < t.atoms.size(); ++i) t.integral += t.values[i] * sys.mu.weight(t.atoms[i]);
      dec.terms.push_back(std::move(t));
      continue;
    }
    DeltaTerm t;
    t.Q = Q;
    for (int c : L.level(Q.k).children[static_cast<std::size_t>(Q.idx)]) {
      const CubeRef C{Q.k + 1, c};
      const bool tr = sys.is_transit(C);
      const cplx rc = tr ? ratio(f, sys, C) : cplx(0.0, 0.0);
      for (std::size_t a : L.members(C)) {
        t.atoms.push_back(a);
        t.values.push_back(tr ? (rc - rQ) * sys.b[a] : f[a] - rQ * sys.b[a]);
      }
    }
    for (std::size_t i = 0; i < t.atoms.size(); ++i) t.integral += t.values[i] * sys.mu.weight(t.atoms[i]);
    dec.terms.push_back(std::move(t));
  }
  return dec;
}

std::vector<cplx> MartingaleDecomposition::reconstruct(std::size_t atoms) const {
  std::vector<cplx> g = top;
  g.resize(atoms, cplx(0.0, 0.0));
  for (const DeltaTerm& t : terms)
    for (std::size_t i = 0; i < t.atoms.size(); ++i) g[t.atoms[i]] += t.values[i];
  return g;
}

double MartingaleDecomposition::energy(const AtomicMeasure& mu) const {
  double e = 0.0;
  for (std::size_t a = 0; a < top.size(); ++a) e += std::norm(top[a]) * mu.weight(a);
  for (const DeltaTerm& t : terms)
    for (std::size_t i = 0; i < t.atoms.size(); ++i) e += std::norm(t.values[i]) * mu.weight(t.atoms[i]);
  return e;
}

MartingaleChecks check_decomposition(const std::vector<cplx>& f, const BAdaptedSystem& sys,
                                     const MartingaleDecomposition& dec) {
  MartingaleChecks ck;
  const DyadicLattice& L = sys.DB->lattice();
  double finf = 0.0, f2 = 0.0;
  // Only atoms of the top cube are represented.
  const auto& topm = L.members(sys.DB->top());
  for (std::size_t a : topm) {
    finf = std::max(finf, std::abs(f[a]));
    f2 += std::norm(f[a]) * sys.mu.weight(a);
  }
  const auto g = dec.reconstruct(f.size());
  for (std::size_t a : topm) ck.reconstruction = std::max(ck.reconstruction, std::abs(f[a] - g[a]));
  if (finf > 0.0) ck.reconstruction /= finf;
  for (const DeltaTerm& t : dec.terms) {
    const double m = sys.cube_mass(t.Q);
    if (m > 0.0 && finf > 0.0) ck.zero_mean = std::max(ck.zero_mean, std::abs(t.integral) / (finf * m));
    for (std::size_t a : t.atoms)
      if (L.level(t.Q.k).label[a] != t.Q.idx) ck.supports_nested = false;
  }
  ck.energy_ratio = f2 > 0.0 ? dec.energy(sys.mu) / f2 : 1.0;
  return ck;
}

double coefficient(double lQ, double lR, double d, double muQ, double muR, double m, double s) {
  const double D = lQ + lR + d;
  return std::pow(lQ, 0.5 * s) * std::pow(lR, 0.5 * s) * std::pow(D, -(m + s)) * std::sqrt(muQ) * std::sqrt(muR);
}

namespace {

// Finest-level cubes under each listed cube.
std::vector<std::vector<int>> finest_descendants(const DyadicLattice& L, const std::vector<CubeRef>& cubes) {
  std::vector<std::vector<int>> out;
  const auto& fine = L.level(L.kmax()).label;
  for (const CubeRef& q : cubes) {
    std::set<int> s;
    for (std::size_t a : L.members(q)) s.insert(fine[a]);
    out.emplace_back(s.begin(), s.end());
  }
  return out;
}

}  // namespace

CoefficientMatrix coefficient_matrix(const DyadicLattice& LQ, const std::vector<CubeRef>& Q, const DyadicLattice& LR,
                                     const std::vector<CubeRef>& R, const AtomicMeasure& mu, double m, double s) {
  require(s > 0.0, "need s > 0");
  require(!Q.empty() && !R.empty(), "cube families must be nonempty");
  const auto& pts = LQ.cloud();
  require(LR.cloud().size() == pts.size() && mu.size() == pts.size(), "lattices must share the atoms of mu");
  const auto dQ = finest_descendants(LQ, Q);
  const auto dR = finest_descendants(LR, R);
  const auto& fq = LQ.level(LQ.kmax());
  const auto& fr = LR.level(LR.kmax());
  // Distances between finest cubes of the two lattices.
  const std::size_t nq = fq.members.size(), nr = fr.members.size();
  std::vector<double> F(nq * nr, kInf);
  parallel_for(nq, [&](std::size_t i) {
    for (std::size_t j = 0; j < nr; ++j) {
      double best = kInf;
      for (std::size_t a : fq.members[i])
        for (std::size_t b : fr.members[j]) best = std::min(best, dist2(pts[a], pts[b]));
      F[i * nr + j] = std::sqrt(best);
    }
  });
  auto cube_mass = [&](const DyadicLattice& L, CubeRef c) {
    double w = 0.0;
    for (std::size_t a : L.members(c)) w += mu.weight(a);
    return w;
  };
  CoefficientMatrix A;
  A.rows = Q.size();
  A.cols = R.size();
  A.a.assign(A.rows * A.cols, 0.0);
  std::vector<double> mq(Q.size()), mr(R.size());
  for (std::size_t i = 0; i < Q.size(); ++i) mq[i] = cube_mass(LQ, Q[i]);
  for (std::size_t j = 0; j < R.size(); ++j) mr[j] = cube_mass(LR, R[j]);
  parallel_for(Q.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j < R.size(); ++j) {
      double d = kInf;
      for (int x : dQ[i])
        for (int y : dR[j]) d = std::min(d, F[static_cast<std::size_t>(x) * nr + static_cast<std::size_t>(y)]);
      A.a[i * A.cols + j] = coefficient(LQ.ell(Q[i].k), LR.ell(R[j].k), d, mq[i], mr[j], m, s);
    }
  });
  return A;
}

NormEstimate matrix_norm(const CoefficientMatrix& A, int max_iter, double tol) {
  NormEstimate est;
  std::vector<double> v(A.cols, 1.0 / std::sqrt(static_cast<double>(A.cols)));
  std::vector<double> u(A.rows), w(A.cols);
  auto apply = [&](const std::vector<double>& x, std::vector<double>& out) {
    parallel_for(A.rows, [&](std::size_t i) {
      double s = 0.0;
      for (std::size_t j = 0; j < A.cols; ++j) s += A(i, j) * x[j];
      u[i] = s;
    });
    parallel_for(A.cols, [&](std::size_t j) {
      double s = 0.0;
      for (std::size_t i = 0; i < A.rows; ++i) s += A(i, j) * u[i];
      out[j] = s;
    });
  };
  double lam = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    apply(v, w);
    double nw = 0.0;
    for (double x : w) nw += x * x;
    nw = std::sqrt(nw);
    if (!(nw > 0.0)) break;
    for (std::size_t j = 0; j < w.size(); ++j) w[j] /= nw;
    const double prev = lam;
    lam = nw;
    v.swap(w);
    est.iterations = it;
    if (std::abs(lam - prev) <= tol * lam) {
      est.converged = true;
      break;
    }
  }
  apply(v, w);
  double res = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) res += (w[j] - lam * v[j]) * (w[j] - lam * v[j]);
  est.residual = lam > 0.0 ? std::sqrt(res) / lam : 0.0;
  est.norm = std::sqrt(lam);
  return est;
}

CarlesonReport carleson_check(const BAdaptedSystem& sys, const DyadicLattice& D0, const Kernel& S, const ClosedSet& E,
                              int r, const QuadratureConfig& cfg) {
  require(r >= 1, "need r >= 1");
  const RestrictedLattice& DB = *sys.DB;
  const DyadicLattice& L = DB.lattice();
  const std::size_t N = L.num_atoms();
  require(D0.num_atoms() == N, "lattices must share atoms");
  const int k0 = DB.k0(), kmax = L.kmax();
  CarlesonReport rep;
  const int kfirst = k0 + r;
  if (kfirst > kmax) return rep;

  std::vector<std::size_t> inB;
  std::vector<char> isB(N, 0);
  for (std::size_t a = 0; a < N; ++a)
    if (DB.ball().contains(L.cloud()[a])) {
      inB.push_back(a);
      isB[a] = 1;
    }
  const double s = L.ell(kmax + 1), t = L.ell(kfirst);
  std::vector<cplx> bw(N);
  for (std::size_t a = 0; a < N; ++a) bw[a] = sys.b[a] * sys.mu.weight(a);
  const SourceBlock src = SourceBlock::columns(L.cloud(), {bw});
  const int nlev = kmax - kfirst + 1;
  std::vector<std::vector<double>> band(inB.size(), std::vector<double>(static_cast<std::size_t>(nlev), 0.0));
  std::vector<double> full(N, 0.0);
  parallel_for(inB.size(), [&](std::size_t i) {
    const ConeSampleSet q(E, L.cloud()[inB[i]], s, t, cfg);
    const auto g = square_integrands(S, src, q);
    for (int k = kfirst; k <= kmax; ++k)
      band[i][static_cast<std::size_t>(k - kfirst)] = q.integrate(g[0], L.ell(k + 1), L.ell(k)).value;
    full[inB[i]] = q.integrate(g[0]).value;
  });
  std::vector<double> bandAt(N * static_cast<std::size_t>(nlev), 0.0);
  for (std::size_t i = 0; i < inB.size(); ++i)
    for (int l = 0; l < nlev; ++l) bandAt[inB[i] * static_cast<std::size_t>(nlev) + static_cast<std::size_t>(l)] = band[i][static_cast<std::size_t>(l)];

  // a_Q accumulated over cubes R of D0 inside B and inside Q(R, r).
  std::map<CubeRef, double> aQ;
  for (int k = kfirst; k <= kmax; ++k) {
    const auto& lv = D0.level(k);
    const auto& upl = L.level(k - r).label;
    for (std::size_t q = 0; q < lv.members.size(); ++q) {
      const auto& mem = lv.members[q];
      const int Qi = upl[mem.front()];
      bool ok = true;
      for (std::size_t a : mem) ok = ok && isB[a] && upl[a] == Qi;
      const CubeRef Q{k - r, Qi};
      if (!ok || !DB.contains(Q) || !sys.is_transit(Q)) continue;
      double v = 0.0;
      for (std::size_t a : mem) v += sys.mu.weight(a) * bandAt[a * static_cast<std::size_t>(nlev) + static_cast<std::size_t>(k - kfirst)];
      aQ[Q] += v;
    }
  }
  for (int k = k0; k <= kmax; ++k)
    for (int q0 : DB.cubes(k)) {
      const CubeRef Q0{k, q0};
      double sum = 0.0;
      for (const auto& [Q, v] : aQ)
        if (Q.k >= k && L.level(k).label[L.members(Q).front()] == q0) sum += v;
      double m0 = 0.0, c2 = 0.0;
      for (std::size_t a : L.members(Q0)) {
        m0 += sys.mu.weight(a);
        if (isB[a]) c2 += full[a] * sys.mu.weight(a);
      }
      const double ratio_v = m0 > 0.0 ? sum / m0 : 0.0;
      const double chain = c2 > 0.0 ? sum / c2 : 0.0;
      rep.Q0.push_back(Q0);
      rep.ratio.push_back(ratio_v);
      rep.chain_bound.push_back(chain);
      rep.C = std::max(rep.C, ratio_v);
      rep.chain_max = std::max(rep.chain_max, chain);
    }
  return rep;
}

}  // namespace conesq
