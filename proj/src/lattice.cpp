#include "conesq/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace conesq {

// ---------------------------------------------------------------- nets

NetHierarchy build_nets(std::vector<Point> cloud, double delta, std::size_t fixed_point, int kmin, int kmax) {
  require(delta > 0.0 && delta <= 0.25, "delta must lie in (0, 1/4]");
  require(!cloud.empty(), "empty point cloud");
  require(fixed_point < cloud.size(), "fixed point index out of range");
  require(kmin <= kmax, "empty level range");
  NetHierarchy h;
  h.delta = delta;
  h.kmin = kmin;
  h.kmax = kmax;
  h.fixed = fixed_point;
  h.cloud = std::make_shared<const std::vector<Point>>(std::move(cloud));
  const auto& pts = *h.cloud;
  const std::size_t n = pts.size();

  std::vector<double> mind(n);
  std::vector<char> in_net(n, 0);
  std::vector<std::size_t> net{fixed_point};
  in_net[fixed_point] = 1;
  for (std::size_t i = 0; i < n; ++i) mind[i] = dist(pts[i], pts[fixed_point]);

  for (int k = kmin; k <= kmax; ++k) {
    const double sep = std::pow(delta, k);
    // Farthest-point insertion; ties go to the smallest atom index.
    for (;;) {
      std::size_t far = n;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i)
        if (!in_net[i] && mind[i] > far_d) {
          far_d = mind[i];
          far = i;
        }
      if (far == n || far_d < sep) break;
      in_net[far] = 1;
      net.push_back(far);
      for (std::size_t i = 0; i < n; ++i) mind[i] = std::min(mind[i], dist(pts[i], pts[far]));
    }
    h.nets.push_back(net);
  }
  return h;
}

NetHierarchy build_nets(const ClosedSet& E, double delta, std::size_t fixed_point, int kmin, int kmax) {
  require(E.is_cloud(), "nets are built on point clouds; discretize analytic sets first");
  return build_nets(E.atoms(), delta, fixed_point, kmin, kmax);
}

bool verify_nets(const NetHierarchy& h) {
  const auto& pts = *h.cloud;
  for (int k = h.kmin; k <= h.kmax; ++k) {
    const auto& X = h.level(k);
    const double sep = h.scale(k);
    if (std::find(X.begin(), X.end(), h.fixed) == X.end()) return false;
    for (std::size_t i = 0; i < X.size(); ++i)
      for (std::size_t j = i + 1; j < X.size(); ++j)
        if (dist(pts[X[i]], pts[X[j]]) < sep) return false;
    for (const auto& p : pts) {
      double best = kInf;
      for (std::size_t x : X) best = std::min(best, dist(p, pts[x]));
      if (best >= sep) return false;
    }
    if (k > h.kmin) {
      const auto& prev = h.level(k - 1);
      for (std::size_t x : prev)
        if (std::find(X.begin(), X.end(), x) == X.end()) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- omega

std::uint64_t RandomConfig::code(int k) const {
  require(L >= 0 && M >= 1, "alphabet sizes must be positive");
  if (k < k0 || k > k1) return 0;
  Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(static_cast<std::int64_t>(k))}));
  return rng.below(alphabet());
}

// ---------------------------------------------------------------- skeleton

double default_shift(double delta) { return std::min(0.375, std::max(0.25, 1.5 * delta)); }

std::shared_ptr<const LatticeSkeleton> prepare_lattice(std::shared_ptr<const NetHierarchy> nets, double shift) {
  auto sk = std::make_shared<LatticeSkeleton>();
  sk->nets = nets;
  sk->shift = shift > 0.0 ? shift : default_shift(nets->delta);
  require(sk->shift < 0.5, "center shift must be below 1/2");
  const auto& pts = *nets->cloud;
  const int levels = nets->kmax - nets->kmin + 1;

  std::vector<PointIndex> index;
  sk->position.assign(static_cast<std::size_t>(levels), std::vector<int>(pts.size(), -1));
  for (int li = 0; li < levels; ++li) {
    const auto& X = nets->nets[static_cast<std::size_t>(li)];
    std::vector<Point> xs;
    xs.reserve(X.size());
    for (std::size_t p = 0; p < X.size(); ++p) {
      xs.push_back(pts[X[p]]);
      sk->position[static_cast<std::size_t>(li)][X[p]] = static_cast<int>(p);
    }
    index.emplace_back(std::move(xs));
  }

  sk->center_candidates.resize(static_cast<std::size_t>(levels));
  sk->parent_candidates.resize(static_cast<std::size_t>(levels));
  for (int li = 0; li + 1 < levels; ++li) {
    const double s = std::pow(nets->delta, nets->kmin + li);
    const auto& X = nets->nets[static_cast<std::size_t>(li)];
    const auto& Y = nets->nets[static_cast<std::size_t>(li + 1)];
    auto& cc = sk->center_candidates[static_cast<std::size_t>(li)];
    cc.resize(X.size());
    for (std::size_t a = 0; a < X.size(); ++a) {
      const Point& xa = pts[X[a]];
      auto near = index[static_cast<std::size_t>(li + 1)].within(xa, sk->shift * s, true);
      std::vector<int> c(near.begin(), near.end());
      std::sort(c.begin(), c.end(), [&](int u, int v) {
        const double du = dist(xa, pts[Y[static_cast<std::size_t>(u)]]);
        const double dv = dist(xa, pts[Y[static_cast<std::size_t>(v)]]);
        return du != dv ? du < dv : Y[static_cast<std::size_t>(u)] < Y[static_cast<std::size_t>(v)];
      });
      cc[a] = std::move(c);
    }
    auto& pc = sk->parent_candidates[static_cast<std::size_t>(li)];
    pc.resize(Y.size());
    const double reach = (1.0 + 2.0 * sk->shift) * s * (1.0 + 1e-9);
    for (std::size_t b = 0; b < Y.size(); ++b) {
      auto near = index[static_cast<std::size_t>(li)].within(pts[Y[b]], reach, true);
      pc[b].assign(near.begin(), near.end());
      require(!pc[b].empty(), "net point without admissible parent");
    }
  }

  sk->base_label.resize(pts.size());
  const auto& fin = index.back();
  for (std::size_t a = 0; a < pts.size(); ++a) {
    const int own = sk->position.back()[a];
    sk->base_label[a] = own >= 0 ? own : static_cast<int>(fin.nearest(pts[a]).second);
  }
  return sk;
}

// ---------------------------------------------------------------- lattice

DyadicLattice::DyadicLattice(std::shared_ptr<const LatticeSkeleton> skeleton, const RandomConfig& omega)
    : skeleton_(std::move(skeleton)), omega_(omega) {
  const NetHierarchy& h = *skeleton_->nets;
  const auto& pts = *h.cloud;
  const int levels = h.kmax - h.kmin + 1;
  levels_.resize(static_cast<std::size_t>(levels));

  for (int li = 0; li < levels; ++li) {
    LatticeLevel& lv = levels_[static_cast<std::size_t>(li)];
    lv.k = h.kmin + li;
    lv.ref = h.nets[static_cast<std::size_t>(li)];
    lv.center = lv.ref;
    lv.parent.assign(lv.ref.size(), -1);
    if (li + 1 < levels) {
      // Shifted centers of level k are chosen by omega(k + 1).
      const std::uint64_t code = omega_.code(lv.k + 1);
      const auto& Y = h.nets[static_cast<std::size_t>(li + 1)];
      const auto& cc = skeleton_->center_candidates[static_cast<std::size_t>(li)];
      for (std::size_t a = 0; a < lv.ref.size(); ++a) {
        if (lv.ref[a] == h.fixed || cc[a].size() <= 1) continue;
        const std::uint64_t pick = splitmix64(code * 0x9e3779b97f4a7c15ULL ^ splitmix64(lv.ref[a] + 1)) % cc[a].size();
        lv.center[a] = Y[static_cast<std::size_t>(cc[a][pick])];
      }
    }
  }

  for (int li = 1; li < levels; ++li) {
    LatticeLevel& lv = levels_[static_cast<std::size_t>(li)];
    const LatticeLevel& up = levels_[static_cast<std::size_t>(li - 1)];
    const auto& pos_up = skeleton_->position[static_cast<std::size_t>(li - 1)];
    const auto& pc = skeleton_->parent_candidates[static_cast<std::size_t>(li - 1)];
    for (std::size_t b = 0; b < lv.ref.size(); ++b) {
      const std::size_t atom = lv.ref[b];
      if (pos_up[atom] >= 0) {
        lv.parent[b] = pos_up[atom];
        continue;
      }
      int best = -1;
      double best_d = kInf;
      for (int a : pc[b]) {
        const double d = dist(pts[atom], pts[up.center[static_cast<std::size_t>(a)]]);
        if (d < best_d || (d == best_d && up.ref[static_cast<std::size_t>(a)] < up.ref[static_cast<std::size_t>(best)])) {
          best_d = d;
          best = a;
        }
      }
      lv.parent[b] = best;
    }
  }

  for (int li = levels - 1; li >= 0; --li) {
    LatticeLevel& lv = levels_[static_cast<std::size_t>(li)];
    lv.label.resize(pts.size());
    if (li == levels - 1) {
      lv.label = skeleton_->base_label;
    } else {
      const LatticeLevel& dn = levels_[static_cast<std::size_t>(li + 1)];
      for (std::size_t a = 0; a < pts.size(); ++a) lv.label[a] = dn.parent[static_cast<std::size_t>(dn.label[a])];
    }
    lv.members.assign(lv.ref.size(), {});
    for (std::size_t a = 0; a < pts.size(); ++a) lv.members[static_cast<std::size_t>(lv.label[a])].push_back(a);
    lv.children.assign(lv.ref.size(), {});
    if (li + 1 < levels) {
      const LatticeLevel& dn = levels_[static_cast<std::size_t>(li + 1)];
      for (std::size_t b = 0; b < dn.parent.size(); ++b) lv.children[static_cast<std::size_t>(dn.parent[b])].push_back(static_cast<int>(b));
    }
  }
}

std::shared_ptr<const DyadicLattice> build_lattice(const NetHierarchy& nets, const RandomConfig& omega, double shift) {
  auto sk = prepare_lattice(std::make_shared<const NetHierarchy>(nets), shift);
  return std::make_shared<const DyadicLattice>(sk, omega);
}

LatticeCheck check_lattice(const DyadicLattice& lat) {
  LatticeCheck out;
  std::ostringstream why;
  const auto& pts = lat.cloud();
  const std::size_t n = pts.size();
  for (int k = lat.kmin(); k <= lat.kmax(); ++k) {
    const LatticeLevel& lv = lat.level(k);
    // Partition: every atom listed exactly once among the members.
    std::vector<int> seen(n, 0);
    for (std::size_t q = 0; q < lv.members.size(); ++q) {
      if (lv.members[q].empty()) {
        out.partition = false;
        why << "empty cube (" << k << "," << q << "); ";
      }
      for (std::size_t a : lv.members[q]) ++seen[a];
    }
    for (std::size_t a = 0; a < n; ++a)
      if (seen[a] != 1) {
        out.partition = false;
        why << "atom " << a << " covered " << seen[a] << " times at level " << k << "; ";
        break;
      }
    // Nesting: members of each cube sit inside its parent.
    if (k > lat.kmin()) {
      const LatticeLevel& up = lat.level(k - 1);
      for (std::size_t q = 0; q < lv.members.size(); ++q)
        for (std::size_t a : lv.members[q])
          if (up.label[a] != lv.parent[q]) {
            out.nesting = false;
            why << "cube (" << k << "," << q << ") leaks out of its parent; ";
            break;
          }
    }
    const double ell = lat.ell(k);
    for (std::size_t q = 0; q < lv.members.size(); ++q) {
      const Point& z = pts[lv.center[q]];
      if (lv.label[lv.center[q]] != static_cast<int>(q)) {
        out.nesting = false;
        why << "center outside cube (" << k << "," << q << "); ";
      }
      double inside = 0.0;
      for (std::size_t a : lv.members[q]) inside = std::max(inside, dist(z, pts[a]));
      out.C_big = std::max(out.C_big, inside / ell);
      if (lv.members[q].size() < n) {
        double outside = kInf;
        for (std::size_t a = 0; a < n; ++a)
          if (lv.label[a] != static_cast<int>(q)) outside = std::min(outside, dist(z, pts[a]));
        out.c_small = std::min(out.c_small, outside / ell);
      }
    }
  }
  out.detail = why.str();
  return out;
}

bool lattices_identical(const DyadicLattice& a, const DyadicLattice& b) {
  if (a.kmin() != b.kmin() || a.kmax() != b.kmax() || a.num_atoms() != b.num_atoms()) return false;
  for (int k = a.kmin(); k <= a.kmax(); ++k) {
    const auto& x = a.level(k);
    const auto& y = b.level(k);
    if (x.ref != y.ref || x.center != y.center || x.parent != y.parent || x.label != y.label || x.members != y.members)
      return false;
  }
  return true;
}

// ---------------------------------------------------------------- restriction

int choose_k0(double delta, double r) {
  require(r > 0.0, "ball radius must be positive");
  int k = static_cast<int>(std::ceil(std::log(8.0 * r) / std::log(delta) - 1.0));
  for (int guard = 0; guard < 64; ++guard) {
    const double s = std::pow(delta, k) / 8.0;
    if (!(r < s)) {
      --k;
      continue;
    }
    if (!(s <= r / delta)) {
      ++k;
      continue;
    }
    return k;
  }
  throw Error("could not determine k0");
}

RestrictedLattice::RestrictedLattice(std::shared_ptr<const DyadicLattice> lattice, const BallSpec& B)
    : lat_(std::move(lattice)), ball_(B) {
  const DyadicLattice& L = *lat_;
  require(B.center == L.cloud()[L.nets().fixed], "ball must be centered at the fixed reference point");
  k0_ = choose_k0(L.delta(), B.radius);
  require(k0_ >= L.kmin() && k0_ <= L.kmax(), "lattice levels do not include k0 = " + std::to_string(k0_));
  top_ = L.level(k0_).label[L.nets().fixed];
  for (std::size_t a = 0; a < L.num_atoms(); ++a)
    if (B.contains(L.cloud()[a]) && L.level(k0_).label[a] != top_)
      throw Error("ball is not contained in its top cube Q_B");
  for (int k = k0_; k <= L.kmax(); ++k) {
    std::vector<int> inside;
    const auto& lv = L.level(k);
    const auto& top_label = L.level(k0_).label;
    for (std::size_t q = 0; q < lv.members.size(); ++q)
      if (top_label[lv.members[q].front()] == top_) inside.push_back(static_cast<int>(q));
    cubes_.push_back(std::move(inside));
  }
}

bool RestrictedLattice::contains(CubeRef q) const {
  if (q.k < k0_ || q.k > lat_->kmax()) return false;
  const auto& v = cubes(q.k);
  return std::binary_search(v.begin(), v.end(), q.idx);
}

RestrictedLattice restrict_to_ball(std::shared_ptr<const DyadicLattice> lattice, const BallSpec& B) {
  return RestrictedLattice(std::move(lattice), B);
}

// ---------------------------------------------------------------- goodness

double goodness_gamma(double alpha, double m) {
  require(alpha > 0.0 && m > 0.0, "alpha and m must be positive");
  return alpha / (2.0 * (m + alpha));
}

CubeDistanceField distance_field(const DyadicLattice& D0, CubeRef R) {
  CubeDistanceField f;
  f.R = R;
  f.ell = D0.ell(R.k);
  const auto& pts = D0.cloud();
  f.d.assign(pts.size(), kInf);
  for (std::size_t a : D0.members(R))
    for (std::size_t b = 0; b < pts.size(); ++b) f.d[b] = std::min(f.d[b], dist(pts[a], pts[b]));
  return f;
}

int coarsest_bad_level(const CubeDistanceField& field, const RestrictedLattice& DB, double gamma) {
  const DyadicLattice& L = DB.lattice();
  const std::size_t n = L.num_atoms();
  for (int l = DB.k0(); l < field.R.k && l <= L.kmax(); ++l) {
    const auto& lv = L.level(l);
    std::vector<double> cube_min(lv.members.size(), kInf);
    double best1 = kInf, best2 = kInf;
    int best1_label = -1;
    for (std::size_t a = 0; a < n; ++a) {
      const int q = lv.label[a];
      const double v = field.d[a];
      cube_min[static_cast<std::size_t>(q)] = std::min(cube_min[static_cast<std::size_t>(q)], v);
    }
    // Two smallest per-cube minima give d(R, E \ Q) for every Q.
    for (std::size_t q = 0; q < cube_min.size(); ++q) {
      const double v = cube_min[q];
      if (v < best1) {
        best2 = best1;
        best1 = v;
        best1_label = static_cast<int>(q);
      } else if (v < best2) {
        best2 = v;
      }
    }
    const double threshold = std::pow(field.ell, gamma) * std::pow(L.ell(l), 1.0 - gamma);
    for (int q : DB.cubes(l)) {
      const double dq = cube_min[static_cast<std::size_t>(q)];
      const double dout = q == best1_label ? best2 : best1;
      if (std::max(dq, dout) < threshold) return l;
    }
  }
  return INT_MAX;
}

bool is_bad_for(int kR, int k0, int coarsest_bad, int r) {
  if (kR <= k0 + r) return false;  // vacuously good
  return coarsest_bad != INT_MAX && coarsest_bad <= kR - r;
}

bool is_good(const DyadicLattice& D0, CubeRef R, const RestrictedLattice& DB, const GoodnessParams& params) {
  require(params.r >= 1, "goodness parameter r must be positive");
  if (R.k <= DB.k0() + params.r) return true;
  const CubeDistanceField f = distance_field(D0, R);
  return !is_bad_for(R.k, DB.k0(), coarsest_bad_level(f, DB, params.gamma), params.r);
}

std::pair<double, double> wilson_interval(std::size_t hits, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(hits) / nn;
  const double den = 1.0 + z * z / nn;
  const double mid = (p + z * z / (2.0 * nn)) / den;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / den;
  // The interval contains p in exact arithmetic; keep it so after rounding.
  return {std::min(p, std::max(0.0, mid - half)), std::max(p, std::min(1.0, mid + half))};
}

BadnessEstimate estimate_badness_probability(const DyadicLattice& D0, const BadnessRequest& req) {
  require(req.seeds >= 30, "too few seeds for a 95% binomial interval");
  require(!req.r.empty(), "no r values requested");
  const int k0 = choose_k0(D0.delta(), req.B.radius);
  require(req.R.k <= req.k1, "cube R is finer than delta^k1");
  const CubeDistanceField field = distance_field(D0, req.R);

  BadnessEstimate est;
  est.r = req.r;
  est.seeds = req.seeds;
  est.bad_count.assign(req.r.size(), 0);
  est.tau = 1.0 / (static_cast<double>(req.M) * static_cast<double>(req.L + 1));

  std::vector<int> coarsest(req.seeds);
  parallel_for(req.seeds, [&](std::size_t s) {
    RandomConfig cfg{derive_seed(req.master_seed, {s}), req.L, req.M, k0, req.k1};
    auto lat = std::make_shared<const DyadicLattice>(D0.skeleton(), cfg);
    RestrictedLattice DB(lat, req.B);
    coarsest[s] = coarsest_bad_level(field, DB, req.gamma);
  });
  for (std::size_t s = 0; s < req.seeds; ++s)
    for (std::size_t i = 0; i < req.r.size(); ++i)
      if (is_bad_for(req.R.k, k0, coarsest[s], req.r[i])) ++est.bad_count[i];

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < req.r.size(); ++i) {
    const double p = static_cast<double>(est.bad_count[i]) / static_cast<double>(req.seeds);
    est.p_hat.push_back(p);
    const auto [lo, hi] = wilson_interval(est.bad_count[i], req.seeds);
    est.lo.push_back(lo);
    est.hi.push_back(hi);
    if (p > 0.0) {
      xs.push_back(req.r[i]);
      ys.push_back(std::log(p));
    }
  }
  if (xs.size() >= 2) {
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx > 0.0) {
      const double slope = sxy / sxx;
      est.eta_hat = slope / (req.gamma * std::log(D0.delta()));
      est.C_hat = std::exp(my - slope * mx);
    }
  }
  return est;
}

}  // namespace conesq
