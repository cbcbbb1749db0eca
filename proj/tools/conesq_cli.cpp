// Command-line driver. Every subcommand prints JSON lines on stdout and,
// with --out, mirrors them to <out>/<command>.jsonl. Exit status is 0 iff
// every check record passes; configuration errors exit with status 2.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "conesq/suites.hpp"

using namespace conesq;

namespace {

struct Options {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> budget;
  std::string out;
  bool timing = false;
};

Scenario load_scenario(const Options& o) {
  Scenario sc = o.scenario.empty() ? segment_scenario(256, o.seed.value_or(1)) : Scenario::load(o.scenario);
  if (o.seed) sc.seed = *o.seed;
  if (o.budget) {
    require(*o.budget >= 2, "--budget must be at least 2");
    sc.budget = *o.budget;
  }
  return sc;
}

// Collects data lines and check records, then emits both.
class Output {
 public:
  explicit Output(const Options& o) : opt_(o) {}
  void data(json j) { lines_.push_back(std::move(j)); }
  Reporter& checks() { return rep_; }
  int finish(const std::string& command) {
    std::ostringstream ss;
    for (const json& j : lines_) ss << j.dump() << '\n';
    rep_.write(ss, opt_.timing);
    std::cout << ss.str();
    if (!opt_.out.empty()) {
      std::filesystem::create_directories(opt_.out);
      std::ofstream f(std::filesystem::path(opt_.out) / (command + ".jsonl"));
      require(static_cast<bool>(f), "cannot write to --out directory " + opt_.out);
      f << ss.str();
    }
    return rep_.all_pass() ? 0 : 1;
  }

 private:
  const Options& opt_;
  std::vector<json> lines_;
  Reporter rep_;
};

Record check(std::string name, std::string property, json measured, bool pass, std::uint64_t seed) {
  Record r;
  r.check = std::move(name);
  r.property = std::move(property);
  r.measured = std::move(measured);
  r.pass = pass;
  r.seed = seed;
  return r;
}

std::shared_ptr<const DyadicLattice> scenario_lattice(const Scenario& sc) {
  const auto skel = scenario_skeleton(sc);
  return std::make_shared<const DyadicLattice>(skel, RandomConfig{sc.seed, 1, 2, skel->nets->kmin, skel->nets->kmax});
}

int cmd_nets(const Options& o) {
  const Scenario sc = load_scenario(o);
  Output out(o);
  const auto nets = scenario_nets(sc);
  for (int k = nets->kmin; k <= nets->kmax; ++k)
    out.data({{"kind", "net"}, {"level", k}, {"scale", nets->scale(k)}, {"size", nets->level(k).size()},
              {"atoms", nets->level(k)}});
  out.checks().add(check("nets.valid", "nested maximal separated nets containing the fixed atom",
                         {{"levels", nets->kmax - nets->kmin + 1}}, verify_nets(*nets), sc.seed));
  return out.finish("nets");
}

int cmd_lattice(const Options& o) {
  const Scenario sc = load_scenario(o);
  Output out(o);
  const auto lat = scenario_lattice(sc);
  for (int k = lat->kmin(); k <= lat->kmax(); ++k) {
    const LatticeLevel& L = lat->level(k);
    out.data({{"kind", "level"}, {"level", k}, {"cubes", L.ref.size()}, {"centers", L.center}, {"parent", L.parent},
              {"label", L.label}});
  }
  const LatticeCheck c = check_lattice(*lat);
  out.checks().add(check("lattice.structure", "partition and nesting",
                         {{"c_small", c.c_small}, {"C_big", c.C_big}, {"detail", c.detail}}, c.partition && c.nesting,
                         sc.seed));
  return out.finish("lattice");
}

int cmd_whitney(const Options& o, double fraction) {
  const Scenario sc = load_scenario(o);
  require(fraction > 0.0 && fraction < 1.0, "--fraction must lie in (0, 1)");
  Output out(o);
  const auto lat = scenario_lattice(sc);
  const BallSpec W = whole_ball(sc);
  std::vector<char> U(sc.mu.size(), 0);
  for (std::size_t i = 0; i < sc.mu.size(); ++i) U[i] = dist(sc.mu.point(i), W.center) < fraction * W.radius;
  const WhitneyOutcome w = whitney_cover(*lat, sc.mu, U, WhitneyParams{sc.params.a, sc.params.rho, sc.b(), sc.kappa()});
  for (const WhitneyBall& b : w.balls)
    out.data({{"kind", "whitney_ball"}, {"center", b.ball.center.to_vector()}, {"radius", b.ball.radius},
              {"level", b.cube.k}, {"gap", b.gap}, {"doubling", b.doubling}, {"boundary", b.boundary}});
  out.checks().add(check("whitney.cover", "Whitney cover postconditions",
                         {{"ok", w.ok}, {"failure", w.failure}, {"balls", w.balls.size()},
                          {"mass_U", w.checks.mass_U}, {"mass_cover", w.checks.mass_cover}},
                         w.ok && w.checks.all(), sc.seed));
  return out.finish("whitney");
}

int cmd_czd(const Options& o, double factor) {
  const Scenario sc = load_scenario(o);
  require(factor > 1.0, "--factor must exceed 1");
  Output out(o);
  Rng rng(derive_seed(sc.seed, {0x53}));
  std::vector<cplx> v(sc.mu.size(), cplx(0.0, 0.0));
  for (auto& x : v)
    if (rng.below(4) == 0) x = std::polar(rng.uniform(0.0, 0.1), rng.uniform(0.0, 2.0 * M_PI));
  v[0] = cplx(0.25, 0.0);
  const ComplexAtomicMeasure nu(sc.mu.points(), v);
  const double lambda = factor * cz_threshold(sc.mu, nu);
  const CZDecomposition dec = cz_decompose(nu, sc.mu, lambda, sc.params.m);
  for (const CZBall& b : dec.balls)
    out.data({{"kind", "cz_ball"}, {"center", b.center}, {"radius", b.B.radius}, {"R_radius", b.R.radius},
              {"nu_B", b.nu_B}, {"alpha", {b.alpha.real(), b.alpha.imag()}}});
  const CZChecks c = verify_cz(dec, nu, sc.mu);
  out.checks().add(check("cz.postconditions", "CZ decomposition postconditions",
                         {{"lambda", lambda}, {"balls", dec.balls.size()}, {"phi_sum", c.phi_sum}, {"phi_mass", c.phi_mass},
                          {"detail", c.detail}},
                         c.all(), sc.seed));
  return out.finish("czd");
}

int cmd_sqfn(const Options& o) {
  const Scenario sc = load_scenario(o);
  Output out(o);
  std::vector<std::vector<cplx>> col(1, std::vector<cplx>(sc.mu.size()));
  for (std::size_t i = 0; i < sc.mu.size(); ++i) col[0][i] = sc.mu.weight(i);
  const auto field = square_function_field(sc.kernel, SourceBlock::columns(sc.mu.points(), col), sc.mu.points(),
                                           sc.s_trunc(), sc.t_trunc(), sc.E, sc.quadrature(0x57));
  bool finite = true;
  for (std::size_t i = 0; i < field.size(); ++i) {
    finite = finite && std::isfinite(field[i][0].value);
    out.data({{"kind", "square_function"}, {"atom", i}, {"value", field[i][0].value}, {"stderr", field[i][0].stderr}});
  }
  out.checks().add(check("sqfn.finite", "truncated square function of mu is finite at every atom",
                         {{"s", sc.s_trunc()}, {"t", sc.t_trunc()}, {"budget", sc.budget}}, finite, sc.seed));
  return out.finish("sqfn");
}

int cmd_suppress(const Options& o) {
  const Scenario sc = load_scenario(o);
  Output out(o);
  run_scenario_suite("suppression", sc, out.checks());
  return out.finish("suppress");
}

int cmd_verify(const Options& o, const std::string& suite) {
  Output out(o);
  auto run_criteria = [&](const std::vector<int>& ids, std::uint64_t seed) {
    for (int id : ids) {
      const CriterionResult r = run_criterion(id, seed);
      for (const Record& rec : r.records) out.checks().add(rec);
      Record s = check("criterion." + r.key, r.title, r.summary, r.pass, seed);
      s.tolerance = {{"budget_seconds", r.budget}};
      s.runtime_ms = 1000.0 * r.seconds;
      out.checks().add(s);
    }
  };
  const std::uint64_t seed = o.seed.value_or(20240601);
  if (suite == "acceptance") {
    std::vector<int> ids;
    for (int i = 1; i <= criterion_count(); ++i) ids.push_back(i);
    run_criteria(ids, seed);
  } else if (const int id = criterion_by_key(suite); id != 0 && o.scenario.empty()) {
    run_criteria({id}, seed);
  } else {
    const Scenario sc = load_scenario(o);
    const std::vector<std::string> names = suite == "all" ? sc.suites : std::vector<std::string>{suite};
    for (const std::string& n : names)
      require(run_scenario_suite(n, sc, out.checks()), "unknown suite '" + n + "'");
  }
  return out.finish("verify");
}

int cmd_experiment(const Options& o, const std::string& name) {
  static const std::vector<std::string> kNames{"good-lambda", "weak11", "tb-hypotheses", "stopping-sets", "badness"};
  require(std::find(kNames.begin(), kNames.end(), name) != kNames.end(), "unknown experiment '" + name + "'");
  const Scenario sc = load_scenario(o);
  Output out(o);
  run_scenario_suite(name, sc, out.checks());
  return out.finish("experiment-" + name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conesq: conical square functions on discrete measures"};
  app.require_subcommand(1);
  Options opt;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  app.add_option("--scenario", opt.scenario, "scenario JSON file")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "master seed (u64)");
  auto* budget_opt = app.add_option("--budget", budget, "cone samples per shell");
  app.add_option("--out", opt.out, "directory for JSON-lines reports");
  app.add_flag("--timing", opt.timing, "include runtime_ms in records");

  double fraction = 0.5, factor = 2.0;
  std::string suite = "all", experiment;
  auto* nets = app.add_subcommand("nets", "build the nested nets");
  auto* lattice = app.add_subcommand("lattice", "build a random dyadic lattice");
  auto* whitney = app.add_subcommand("whitney", "Whitney cover of a ball-shaped open set");
  whitney->add_option("--fraction", fraction, "U is the ball of this fraction of the enclosing radius");
  auto* czd = app.add_subcommand("czd", "Calderon-Zygmund decomposition of a random measure");
  czd->add_option("--factor", factor, "lambda as a multiple of the minimal threshold");
  auto* sqfn = app.add_subcommand("sqfn", "truncated square function of mu at every atom");
  auto* suppress = app.add_subcommand("suppress", "suppressed operator checks");
  auto* verify = app.add_subcommand("verify", "run a named suite, a criterion, or 'acceptance'");
  verify->add_option("suite", suite, "suite name; 'all' runs the scenario's suites");
  auto* exp = app.add_subcommand("experiment", "run an experiment on the scenario");
  exp->add_option("name", experiment, "good-lambda | weak11 | tb-hypotheses | stopping-sets | badness")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  if (seed_opt->count()) opt.seed = seed;
  if (budget_opt->count()) opt.budget = budget;

  try {
    if (*nets) return cmd_nets(opt);
    if (*lattice) return cmd_lattice(opt);
    if (*whitney) return cmd_whitney(opt, fraction);
    if (*czd) return cmd_czd(opt, factor);
    if (*sqfn) return cmd_sqfn(opt);
    if (*suppress) return cmd_suppress(opt);
    if (*verify) return cmd_verify(opt, suite);
    if (*exp) return cmd_experiment(opt, experiment);
  } catch (const std::exception& e) {
    std::cerr << "conesq: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
