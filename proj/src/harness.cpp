#include "conesq/harness.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>

namespace conesq {

namespace {

Point point_from_json(const json& j, const std::string& field) {
  require(j.is_array() && !j.empty() && j.size() <= 4, field + ": expected an array of 1 to 4 numbers");
  std::vector<double> v;
  for (const auto& x : j) {
    require(x.is_number(), field + ": expected numbers");
    v.push_back(x.get<double>());
  }
  return Point::from_vector(v);
}

ClosedSet set_from_json(const json& j) {
  require(j.is_object(), "E: expected an object");
  const std::string kind = j.value("kind", "");
  if (kind == "points") {
    require(j.contains("points") && j["points"].is_array(), "E.points: expected an array of points");
    std::vector<Point> pts;
    for (const auto& p : j["points"]) pts.push_back(point_from_json(p, "E.points"));
    return ClosedSet::point_cloud(std::move(pts));
  }
  if (kind == "segment") {
    require(j.contains("a") && j.contains("b"), "E: segment needs a and b");
    return ClosedSet::segment(point_from_json(j["a"], "E.a"), point_from_json(j["b"], "E.b"));
  }
  if (kind == "circle") {
    const auto c = j.value("center", std::vector<double>{0.0, 0.0});
    require(c.size() == 2, "E.center: expected two numbers");
    return ClosedSet::circle(j.value("dim", 2), c[0], c[1], j.value("radius", 1.0));
  }
  if (kind == "hyperplane") return ClosedSet::hyperplane(j.value("dim", 2), j.value("half_width", 1.0));
  if (kind == "cantor") return ClosedSet::cantor(j.value("dim", 2), j.value("level", 2));
  throw Error("E.kind: expected one of points, segment, circle, hyperplane, cantor");
}

std::vector<Point> atoms_for(const ClosedSet& E, const json& mj) {
  const std::size_t N = mj.value("atoms", std::size_t{256});
  switch (E.kind()) {
    case ShapeKind::PointCloud: return E.atoms();
    case ShapeKind::Segment: {
      require(N >= 1, "mu.atoms: must be positive");
      const auto& pr = E.params();
      const std::size_t n = static_cast<std::size_t>(E.dim());
      const Point a = Point::from_vector({pr.begin(), pr.begin() + static_cast<std::ptrdiff_t>(n)});
      const Point b = Point::from_vector({pr.begin() + static_cast<std::ptrdiff_t>(n), pr.end()});
      std::vector<Point> out;
      for (std::size_t i = 0; i < N; ++i)
        out.push_back(a + ((static_cast<double>(i) + 0.5) / static_cast<double>(N)) * (b - a));
      return out;
    }
    case ShapeKind::Circle: {
      const auto& p = E.params();
      std::vector<Point> out;
      for (std::size_t i = 0; i < N; ++i) {
        const double th = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(N);
        Point x(E.dim());
        x[0] = p[0] + p[2] * std::cos(th);
        x[1] = p[1] + p[2] * std::sin(th);
        out.push_back(x);
      }
      return out;
    }
    default: return E.discretize(mj.value("mesh", 0.05), mj.value("window", 1.0));
  }
}

void read_params(const json& j, Params& p) {
  require(j.is_object(), "params: expected an object");
  static const std::set<std::string> known{"m",      "alpha", "beta",    "delta",  "gamma", "r",     "a",
                                           "b",      "kappa", "rho",     "lambda0", "C0",   "c_acc", "delta0",
                                           "eps0",   "s_exp", "C1",      "C2",     "levels", "s_trunc", "t_trunc"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    require(known.count(it.key()) > 0, "params." + it.key() + ": unknown field");
    require(it.value().is_number(), "params." + it.key() + ": expected a number");
  }
  auto rd = [&](const char* k, double& v) { v = j.value(k, v); };
  rd("m", p.m);
  rd("alpha", p.alpha);
  rd("beta", p.beta);
  rd("delta", p.delta);
  rd("gamma", p.gamma);
  p.r = j.value("r", p.r);
  rd("a", p.a);
  rd("b", p.b);
  rd("kappa", p.kappa);
  rd("rho", p.rho);
  rd("lambda0", p.lambda0);
  rd("C0", p.C0);
  rd("c_acc", p.c_acc);
  rd("delta0", p.delta0);
  rd("eps0", p.eps0);
  rd("s_exp", p.s_exp);
  rd("C1", p.C1);
  rd("C2", p.C2);
  p.levels = j.value("levels", p.levels);
  rd("s_trunc", p.s_trunc);
  rd("t_trunc", p.t_trunc);
}

void validate(const Scenario& sc) {
  const Params& p = sc.params;
  require(p.m > 0.0, "params.m: must be positive");
  require(p.alpha > 0.0 && p.alpha <= 1.0, "params.alpha: must lie in (0, 1]");
  require(p.beta > 0.0 && p.beta <= 1.0, "params.beta: must lie in (0, 1]");
  require(p.delta > 0.0 && p.delta < 0.5, "params.delta: must lie in (0, 1/2)");
  require(p.a >= 3.0, "params.a: must be at least 3");
  require(p.rho >= 16.0 * p.a, "params.rho: must be at least 16 a");
  require(sc.b() > std::pow(p.a, p.m) || p.b == 0.0, "params.b: must exceed a^m");
  require(p.r >= 1, "params.r: must be at least 1");
  require(p.levels >= 1 && p.levels <= 12, "params.levels: must lie in [1, 12]");
  require(p.c_acc > 0.0 && p.c_acc <= 1.0, "params.c_acc: must lie in (0, 1]");
  require(p.delta0 >= 0.0 && p.delta0 < 1.0, "params.delta0: must lie in [0, 1)");
  require(p.eps0 > 0.0 && p.eps0 < 1.0, "params.eps0: must lie in (0, 1)");
  require(p.C1 >= 1.0, "params.C1: must be at least 1");
  require(sc.budget >= 2, "budget: need at least 2 samples per shell");
  require(!sc.mu.empty(), "mu: no atoms");
}

}  // namespace

Scenario Scenario::from_json(const json& j) {
  require(j.is_object(), "scenario: expected a JSON object");
  static const std::set<std::string> known{"name", "E", "mu", "kernel", "params", "seed", "budget", "suites"};
  for (auto it = j.begin(); it != j.end(); ++it) require(known.count(it.key()) > 0, it.key() + ": unknown field");
  Scenario sc;
  sc.raw = j;
  sc.name = j.value("name", std::string("scenario"));
  require(j.contains("E"), "E: missing");
  sc.E = set_from_json(j["E"]);
  if (j.contains("params")) read_params(j["params"], sc.params);
  sc.seed = j.value("seed", std::uint64_t{1});
  sc.budget = j.value("budget", std::size_t{256});
  if (j.contains("suites")) {
    require(j["suites"].is_array(), "suites: expected an array of names");
    for (const auto& s : j["suites"]) sc.suites.push_back(s.get<std::string>());
  }
  const json mj = j.value("mu", json::object());
  require(mj.is_object(), "mu: expected an object");
  std::vector<Point> pts = atoms_for(sc.E, mj);
  const double total = mj.value("total", 1.0);
  std::vector<double> w(pts.size(), total / static_cast<double>(pts.size()));
  if (mj.contains("weights")) {
    const json& wj = mj["weights"];
    if (wj.is_array()) {
      require(wj.size() == pts.size(), "mu.weights: one weight per atom");
      for (std::size_t i = 0; i < pts.size(); ++i) w[i] = wj[i].get<double>();
    } else if (wj == "random") {
      Rng rng(derive_seed(sc.seed, {0x77ULL}));
      for (double& x : w) x = static_cast<double>(1 + rng.below(64)) / 1024.0;
    } else {
      require(wj == "uniform", "mu.weights: expected uniform, random or an array");
    }
  }
  for (double x : w) require(x >= 0.0 && std::isfinite(x), "mu.weights: must be finite and non-negative");
  sc.mu = AtomicMeasure(std::move(pts), std::move(w));
  const json kj = j.value("kernel", json::object());
  const std::string kk = kj.value("kind", std::string("power"));
  sc.params.m = kj.value("m", sc.params.m);
  sc.params.alpha = kj.value("alpha", sc.params.alpha);
  validate(sc);
  if (kk == "power")
    sc.kernel = power_kernel(sc.params.m, sc.params.alpha);
  else if (kk == "signed")
    sc.kernel = signed_kernel(sc.params.m, sc.params.alpha);
  else
    throw Error("kernel.kind: expected power or signed");
  return sc;
}

Scenario Scenario::load(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open scenario file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(std::string("scenario parse error: ") + e.what());
  }
  return from_json(j);
}

double Scenario::b() const { return params.b > 0.0 ? params.b : std::pow(10.0, params.m + 1.0); }
double Scenario::kappa() const { return params.kappa > 0.0 ? params.kappa : 100.0 * E.dim(); }
double Scenario::gamma() const { return params.gamma > 0.0 ? params.gamma : goodness_gamma(params.alpha, params.m); }

double Scenario::diameter() const {
  double d = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t k = i + 1; k < mu.size(); ++k) d = std::max(d, dist(mu.point(i), mu.point(k)));
  return d;
}

double Scenario::spacing() const {
  if (mu.size() < 2) return 1.0;
  const PointIndex idx(mu.points());
  double s = kInf;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const auto near = idx.within(mu.point(i), s, false);
    for (std::size_t k : near)
      if (k != i) s = std::min(s, dist(mu.point(i), mu.point(k)));
  }
  return std::isfinite(s) ? s : 1.0;
}

double Scenario::s_trunc() const { return params.s_trunc > 0.0 ? params.s_trunc : 4.0 * spacing(); }
double Scenario::t_trunc() const {
  if (params.t_trunc > 0.0) return params.t_trunc;
  const double d = diameter();
  return d > 0.0 ? d : 1.0;
}

QuadratureConfig Scenario::quadrature(std::uint64_t stream) const {
  return QuadratureConfig{budget, derive_seed(seed, {0xc0ffeeULL, stream})};
}

std::size_t Scenario::fixed_atom() const {
  Point c(mu.dim());
  for (const Point& p : mu.points()) c = c + p;
  c = (1.0 / static_cast<double>(mu.size())) * c;
  const PointIndex idx(mu.points());
  return idx.nearest(c).second;
}

Scenario segment_scenario(std::size_t atoms, std::uint64_t seed) {
  json j = {{"name", "uniform-segment"},
            {"E", {{"kind", "segment"}, {"a", {0.0, 0.0}}, {"b", {1.0, 0.0}}}},
            {"mu", {{"atoms", atoms}, {"total", 1.0}}},
            {"seed", seed}};
  return Scenario::from_json(j);
}

BallSpec whole_ball(const Scenario& sc) {
  const std::size_t f = sc.fixed_atom();
  double R = 0.0;
  for (const Point& p : sc.mu.points()) R = std::max(R, dist(p, sc.mu.point(f)));
  return BallSpec{sc.mu.point(f), R > 0.0 ? R : 1.0, true, true};
}

std::shared_ptr<const NetHierarchy> scenario_nets(const Scenario& sc) {
  const BallSpec W = whole_ball(sc);
  const int kmin = choose_k0(sc.params.delta, W.radius);
  return std::make_shared<const NetHierarchy>(
      build_nets(sc.mu.points(), sc.params.delta, sc.fixed_atom(), kmin, kmin + sc.params.levels));
}

std::shared_ptr<const LatticeSkeleton> scenario_skeleton(const Scenario& sc) {
  return prepare_lattice(scenario_nets(sc));
}

json Record::to_json(bool timing) const {
  json j = {{"check", check}, {"property", property}, {"measured", measured},
            {"tolerance", tolerance}, {"pass", pass}, {"seed", seed}};
  if (timing) j["runtime_ms"] = runtime_ms;
  return j;
}

bool Reporter::all_pass() const {
  return std::all_of(records_.begin(), records_.end(), [](const Record& r) { return r.pass; });
}

void Reporter::write(std::ostream& os, bool timing) const {
  for (const Record& r : records_) os << r.to_json(timing).dump() << '\n';
}

// ------------------------------------------------------------ experiments

std::vector<RegularBall> enumerate_regular_balls(const AtomicMeasure& mu, double a, double b, double kappa,
                                                 std::size_t max_centers, int radii, std::uint64_t seed) {
  std::vector<std::size_t> centers(mu.size());
  std::iota(centers.begin(), centers.end(), 0);
  if (centers.size() > max_centers) {
    Rng rng(derive_seed(seed, {0xba11ULL}));
    for (std::size_t i = 0; i < max_centers; ++i) std::swap(centers[i], centers[i + rng.below(centers.size() - i)]);
    centers.resize(max_centers);
    std::sort(centers.begin(), centers.end());
  }
  double diam = 0.0, gap = kInf;
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t k = i + 1; k < mu.size(); ++k) {
      const double d = dist(mu.point(i), mu.point(k));
      diam = std::max(diam, d);
      if (d > 0.0) gap = std::min(gap, d);
    }
  std::vector<RegularBall> out;
  if (!std::isfinite(gap)) gap = 1.0;
  for (std::size_t c : centers)
    for (int i = 0; i < radii; ++i) {
      const double r = 2.0 * gap * std::pow(diam / (2.0 * gap), radii > 1 ? static_cast<double>(i) / (radii - 1) : 0.0);
      const BallSpec B{mu.point(c), r, true, true};
      if (is_doubling(mu, B, a, b) && has_small_boundary(mu, B, kappa))
        out.push_back({B, doubling_ratio(mu, B, a), small_boundary_constant(mu, B)});
    }
  const BallSpec whole{mu.point(0), 2.0 * (diam > 0.0 ? diam : 1.0), true, true};
  out.push_back({whole, doubling_ratio(mu, whole, a), small_boundary_constant(mu, whole)});
  return out;
}

TbHypotheses check_tb_hypotheses(const Scenario& sc, const BallSpec& B, const ComplexAtomicMeasure& nu_B,
                                 const std::vector<char>& U, const QuadratureConfig& cfg) {
  const AtomicMeasure& mu = sc.mu;
  require(nu_B.points() == mu.points(), "nu_B must use the atoms of mu");
  const std::size_t N = mu.size();
  const std::vector<char> Um = U.empty() ? std::vector<char>(N, 0) : U;
  const Params& p = sc.params;
  TbHypotheses h;
  h.B = B;
  std::vector<char> inB(N, 0);
  double muB = 0.0, nvB = 0.0, nvU = 0.0;
  cplx nuB(0.0, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    inB[i] = B.contains(mu.point(i));
    const double av = std::abs(nu_B.weight(i));
    if (!inB[i] && av > 0.0) h.support = false;
    if (Um[i] && !inB[i]) h.support = false;
    if (!inB[i]) continue;
    muB += mu.weight(i);
    nvB += av;
    nuB += nu_B.weight(i);
    if (Um[i]) nvU += av;
  }
  h.normalised = std::abs(nuB - cplx(muB, 0.0)) <= 1e-12 * std::max(muB, 1e-300);
  h.C1_measured = muB > 0.0 ? nvB / muB : kInf;
  h.bounded = h.C1_measured <= p.C1 * (1.0 + 1e-12);
  // Fractional knapsack bound on |nu|(A) subject to mu(A) <= eps0 mu(B).
  std::vector<std::size_t> ord;
  for (std::size_t i = 0; i < N; ++i)
    if (inB[i]) ord.push_back(i);
  auto ratio = [&](std::size_t i) {
    return mu.weight(i) > 0.0 ? std::abs(nu_B.weight(i)) / mu.weight(i) : kInf;
  };
  std::stable_sort(ord.begin(), ord.end(), [&](std::size_t x, std::size_t y) { return ratio(x) > ratio(y); });
  double budget = p.eps0 * muB, got = 0.0;
  for (std::size_t i : ord) {
    const double w = mu.weight(i), v = std::abs(nu_B.weight(i));
    if (w <= budget) {
      got += v;
      budget -= w;
    } else {
      got += v * budget / w;
      break;
    }
  }
  h.worst_small = nvB > 0.0 ? got / nvB : 0.0;
  h.continuity = h.worst_small <= 1.0 / (16.0 * p.C1);
  h.exceptional = nvB > 0.0 ? nvU / nvB : 0.0;
  h.exceptional_ok = h.exceptional <= 1.0 / (16.0 * p.C1);
  // Weak-type testing with the truncation r(B).
  std::vector<Point> apex;
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < N; ++i)
    if (inB[i] && !Um[i]) {
      apex.push_back(mu.point(i));
      ids.push_back(i);
    }
  const double t = B.radius;
  const double s = std::min(sc.s_trunc(), t / 8.0);
  const auto field = square_function_field(sc.kernel, SourceBlock::single(nu_B), apex, s, t, sc.E, cfg);
  std::vector<std::pair<double, double>> vals;
  for (std::size_t k = 0; k < ids.size(); ++k) vals.emplace_back(field[k][0].value, mu.weight(ids[k]));
  std::sort(vals.begin(), vals.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  double mass = 0.0, best = 0.0;
  for (std::size_t k = 0; k < vals.size(); ++k) {
    mass += vals[k].second;
    if (k + 1 < vals.size() && vals[k + 1].first == vals[k].first) continue;
    best = std::max(best, std::pow(vals[k].first, p.s_exp) * mass);
  }
  h.weak_sup = nvB > 0.0 ? best / nvB : 0.0;
  h.weak_ok = h.weak_sup <= p.C2;
  return h;
}

namespace {

// sup{r > r_min : |nu|(B(y, r)) / r^m > p0} over open balls; 0 if none.
double heavy_radius(const AtomicMeasure& nv, const Point& y, double m, double p0, double r_min) {
  const RadialProfile prof(nv, y);
  const auto& d = prof.distances();
  const auto& cum = prof.cumulative();
  double best = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i + 1 < d.size() && d[i + 1] == d[i]) continue;
    const double M = cum[i + 1];
    if (!(M > 0.0)) continue;
    const double reach = std::pow(M / p0, 1.0 / m);
    const double lo = std::max(d[i], r_min);
    const double hi = i + 1 < d.size() ? d[i + 1] : kInf;
    if (reach > lo) best = std::max(best, std::min(hi, reach));
  }
  return best;
}

}  // namespace

StoppingSets stopping_sets_pipeline(const Scenario& sc, const RestrictedLattice& DB, const ComplexAtomicMeasure& nu,
                                    const std::vector<char>& U, double r_min) {
  const AtomicMeasure& mu = sc.mu;
  const DyadicLattice& L = DB.lattice();
  const std::size_t N = mu.size();
  require(L.num_atoms() == N && nu.points() == mu.points(), "nu, mu and the lattice must share atoms");
  const Params& p = sc.params;
  const double C1 = p.C1;
  StoppingSets st;
  st.eta = C1 > 1.0 ? 1.0 / (2.0 * C1 - 1.0) : 0.5;
  st.p0 = std::pow(2.0, p.m) * C1 / p.eps0;
  st.T.assign(N, 0);
  st.H0.assign(N, 0);
  st.H1.assign(N, 0);
  st.H2.assign(N, 0);
  st.H.assign(N, 0);
  const std::vector<cplx> b = nu.polar();
  std::vector<double> av(N);
  for (std::size_t i = 0; i < N; ++i) av[i] = std::abs(nu.weight(i));
  const AtomicMeasure var(mu.points(), av);

  // Maximal cubes per family, top-down.
  auto maximal = [&](const std::function<bool(double, double, cplx)>& stops, std::vector<char>& mark) {
    std::size_t count = 0;
    for (int k = DB.k0(); k <= L.kmax(); ++k)
      for (int q : DB.cubes(k)) {
        const auto& mem = L.level(k).members[static_cast<std::size_t>(q)];
        if (mark[mem.front()]) continue;
        double nvR = 0.0, muR = 0.0;
        cplx ib(0.0, 0.0);
        for (std::size_t a : mem) {
          nvR += av[a];
          muR += mu.weight(a);
          ib += b[a] * av[a];
        }
        if (stops(nvR, muR, ib)) {
          ++count;
          for (std::size_t a : mem) mark[a] = 1;
        }
      }
    return count;
  };
  maximal([&](double nvR, double, cplx ib) { return nvR > 0.0 && std::abs(ib) <= st.eta * nvR; }, st.T);
  std::vector<char> f1(N, 0), f2(N, 0);
  st.F1 = maximal([&](double nvR, double muR, cplx) { return nvR <= muR / (16.0 * C1); }, f1);
  st.F2 = maximal([&](double nvR, double muR, cplx) { return nvR >= (C1 / p.eps0) * muR && nvR > 0.0; }, f2);
  for (std::size_t i = 0; i < N; ++i) st.H2[i] = f1[i] || f2[i];

  for (std::size_t y = 0; y < N; ++y) {
    if (maximal_radial(var, mu.point(y), p.m, r_min) <= st.p0) continue;
    st.H0[y] = 1;
    const double ry = heavy_radius(var, mu.point(y), p.m, st.p0, r_min);
    for (std::size_t z = 0; z < N; ++z)
      if (dist(mu.point(z), mu.point(y)) < ry) st.H1[z] = 1;
  }
  double nvB = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    st.H[i] = st.H1[i] || st.H2[i] || (!U.empty() && U[i]);
    if (DB.ball().contains(mu.point(i))) nvB += av[i];
    if (st.T[i] || st.H[i]) st.mass_TH += av[i];
  }
  st.bound_TH = (1.0 - 1.0 / (4.0 * C1)) * nvB;
  st.mass_ok = st.mass_TH <= st.bound_TH;
  st.phi_min = kInf;
  st.phi_max = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    if (st.H2[i] || !DB.ball().contains(mu.point(i)) || !(mu.weight(i) > 0.0)) continue;
    const double phi = av[i] / mu.weight(i);
    st.phi_min = std::min(st.phi_min, phi);
    st.phi_max = std::max(st.phi_max, phi);
  }
  if (!std::isfinite(st.phi_min)) st.phi_min = 0.0;
  st.density_ok = st.phi_max == 0.0 || (st.phi_min >= 1.0 / (16.0 * C1) && st.phi_max <= C1 / p.eps0);
  return st;
}

namespace {

// Values of the square function at all atoms for each column.
std::vector<std::vector<double>> field_values(const Scenario& sc, const std::vector<std::vector<cplx>>& fcols,
                                              std::uint64_t stream) {
  std::vector<std::vector<cplx>> w = fcols;
  for (auto& col : w)
    for (std::size_t i = 0; i < col.size(); ++i) col[i] *= sc.mu.weight(i);
  const auto field = square_function_field(sc.kernel, SourceBlock::columns(sc.mu.points(), w), sc.mu.points(),
                                           sc.s_trunc(), sc.t_trunc(), sc.E, sc.quadrature(stream));
  std::vector<std::vector<double>> out(fcols.size(), std::vector<double>(sc.mu.size()));
  for (std::size_t a = 0; a < sc.mu.size(); ++a)
    for (std::size_t c = 0; c < fcols.size(); ++c) out[c][a] = field[a][c].value;
  return out;
}

double lp_norm(const std::vector<double>& v, const AtomicMeasure& mu, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]), p) * mu.weight(i);
  return std::pow(s, 1.0 / p);
}

}  // namespace

GoodLambdaReport good_lambda_experiment(const Scenario& sc, std::size_t functions, double eps, double delta_gl,
                                        double slack) {
  GoodLambdaReport rep;
  rep.functions = functions;
  const AtomicMeasure& mu = sc.mu;
  const std::size_t N = mu.size();

  // theta from the big piece of E as a single ball with b = 1.
  const BallSpec W = whole_ball(sc);
  const std::vector<cplx> one(N, cplx(1.0, 0.0));
  SuppressionParams sp;
  sp.m = sc.params.m;
  sp.C0 = sc.params.C0;
  sp.s_min = sc.s_trunc();
  sp.t_max = sc.t_trunc();
  sp.cfg = sc.quadrature(1);
  sp.lambda0 = sc.params.lambda0 > 0.0 ? sc.params.lambda0 : kInf;
  if (!std::isfinite(sp.lambda0)) {
    const auto cb = field_values(sc, {one}, 1);
    std::vector<double> v = cb[0];
    std::sort(v.begin(), v.end());
    sp.lambda0 = v[static_cast<std::size_t>(0.9 * static_cast<double>(v.size() - 1))];
  }
  const SuppressionData sup = compute_suppression(sc.kernel, sc.E, mu, one, W, sp);
  const auto skel = scenario_skeleton(sc);
  std::vector<std::vector<char>> ex;
  for (std::uint64_t k = 0; k < 8; ++k) {
    RandomConfig om{derive_seed(sc.seed, {0x6e0ULL, k}), 1, 2, skel->nets->kmin, skel->nets->kmax};
    auto lat = std::make_shared<const DyadicLattice>(skel, om);
    auto DB = std::make_shared<const RestrictedLattice>(lat, W);
    // Exceptional sets from the stopping-time pipeline with nu = mu.
    const ComplexAtomicMeasure nuB = ComplexAtomicMeasure::density(mu, one);
    const StoppingSets st = stopping_sets_pipeline(sc, *DB, nuB, {}, sc.spacing());
    std::vector<char> e(N, 1);
    try {
      const BAdaptedSystem sys = compute_stopping_and_transit(DB, mu, one, sc.params.c_acc, st.H);
      for (std::size_t i = 0; i < N; ++i) e[i] = sys.T[i] || st.H[i] || st.T[i];
    } catch (const Error&) {
      // Top cube not transit: the whole ball is exceptional for this seed.
    }
    ex.push_back(std::move(e));
  }
  const BigPieceSet G = build_big_piece(mu, sup.in_B, ex, sup.in_S, sc.params.delta0);
  rep.theta = G.mass_B > 0.0 ? G.mass_G / G.mass_B : 0.0;
  rep.factor_bound = 1.0 - rep.theta / (4.0 * sc.b());

  std::vector<std::vector<cplx>> fs;
  for (std::size_t j = 0; j < functions; ++j) {
    Rng rng(derive_seed(sc.seed, {0xf00ULL, j}));
    std::vector<cplx> f(N);
    for (auto& v : f) v = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    fs.push_back(std::move(f));
  }
  const auto C = field_values(sc, fs, 2);
  const auto lat0 = std::make_shared<const DyadicLattice>(skel, RandomConfig::reference());
  WhitneyParams wp{sc.params.a, sc.params.rho, sc.b(), sc.kappa()};
  for (std::size_t j = 0; j < functions; ++j) {
    std::vector<double> Mf(N);
    const auto fm = ComplexAtomicMeasure::density(mu, fs[j]);
    parallel_for(N, [&](std::size_t y) { Mf[y] = maximal_centred(mu, fm, mu.point(y)); });
    const auto grid = lambda_grid(C[j]);
    for (double lam : grid) {
      double right = 0.0, left = 0.0;
      for (std::size_t y = 0; y < N; ++y) {
        if (C[j][y] > lam) right += mu.weight(y);
        if (C[j][y] > (1.0 + eps) * lam && Mf[y] <= delta_gl * lam) left += mu.weight(y);
      }
      ++rep.checks;
      const double factor = right > 0.0 ? left / right : 0.0;
      rep.worst_factor = std::max(rep.worst_factor, factor);
      if (left <= (rep.factor_bound + slack) * right) ++rep.passes;
    }
    // Whitney cover of the level set at the anchor value, reported only.
    const double anchor = grid[grid.size() / 2];
    std::vector<char> omega(N, 0);
    std::size_t cnt = 0;
    for (std::size_t y = 0; y < N; ++y) cnt += (omega[y] = C[j][y] > anchor);
    if (cnt > 0 && cnt < N) {
      ++rep.whitney_runs;
      if (whitney_cover(*lat0, mu, omega, wp).ok) ++rep.whitney_ok;
    }
    std::vector<double> fa(N);
    for (std::size_t y = 0; y < N; ++y) fa[y] = std::abs(fs[j][y]);
    rep.lp_ratio_15.push_back(lp_norm(C[j], mu, 1.5) / lp_norm(fa, mu, 1.5));
    rep.lp_ratio_2.push_back(lp_norm(C[j], mu, 2.0) / lp_norm(fa, mu, 2.0));
    rep.lp_ratio_3.push_back(lp_norm(C[j], mu, 3.0) / lp_norm(fa, mu, 3.0));
  }
  const auto [mn, mx] = std::minmax_element(rep.lp_ratio_2.begin(), rep.lp_ratio_2.end());
  rep.spread_2 = functions > 0 ? *mx / *mn : 0.0;
  rep.pass = rep.passes == rep.checks && rep.spread_2 < 2.0;
  return rep;
}

Weak11ExperimentReport weak11_experiment(const Scenario& sc, std::size_t measures, std::size_t atoms_per_measure) {
  Weak11ExperimentReport rep;
  const AtomicMeasure& mu = sc.mu;
  const std::size_t N = mu.size();
  require(atoms_per_measure >= 1 && atoms_per_measure <= N, "atoms per measure out of range");
  // Columns [0, measures) are positive, [measures, 2 measures) carry the same
  // moduli with random phases, the last one is nu = 0.
  std::vector<std::vector<cplx>> cols(2 * measures, std::vector<cplx>(N, cplx(0.0, 0.0)));
  std::vector<double> tv(measures, 0.0);
  for (std::size_t j = 0; j < measures; ++j) {
    Rng rng(derive_seed(sc.seed, {0x11ULL, j}));
    for (std::size_t k = 0; k < atoms_per_measure;) {
      const std::size_t a = rng.below(N);
      if (cols[j][a] != cplx(0.0, 0.0)) continue;
      const double mag = rng.uniform(0.5, 1.5) / static_cast<double>(atoms_per_measure);
      cols[j][a] = mag;
      cols[measures + j][a] = std::polar(mag, rng.uniform(0.0, 2.0 * M_PI));
      tv[j] += mag;
      ++k;
    }
  }
  cols.emplace_back(N, cplx(0.0, 0.0));
  const auto field = square_function_field(sc.kernel, SourceBlock::columns(mu.points(), cols), mu.points(),
                                           sc.s_trunc(), sc.t_trunc(), sc.E, sc.quadrature(3));
  auto column = [&](std::size_t j) {
    std::vector<double> v(N);
    for (std::size_t a = 0; a < N; ++a) v[a] = field[a][j].value;
    return v;
  };
  for (std::size_t j = 0; j < measures; ++j) {
    rep.sup.push_back(weak11_statistic(column(j), mu, tv[j]).sup);
    rep.sup_complex.push_back(weak11_statistic(column(measures + j), mu, tv[j]).sup);
  }
  const std::vector<double> zero = column(2 * measures);
  rep.zero_measure_ok = weak11_statistic(zero, mu, 0.0).sup == 0.0 && *std::max_element(zero.begin(), zero.end()) == 0.0;
  auto spread = [](const std::vector<double>& v) {
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    return *mn > 0.0 ? *mx / *mn : kInf;
  };
  rep.spread = spread(rep.sup);
  rep.spread_complex = spread(rep.sup_complex);
  rep.pass = rep.zero_measure_ok && rep.spread <= 2.0;
  return rep;
}

}  // namespace conesq
