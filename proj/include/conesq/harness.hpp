#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "conesq/czdecomp.hpp"
#include "conesq/lattice.hpp"
#include "conesq/martingale.hpp"
#include "conesq/measure.hpp"
#include "conesq/operator.hpp"
#include "conesq/suppression.hpp"
#include "conesq/whitney.hpp"

namespace conesq {

using json = nlohmann::json;

struct Params {
  double m = 1.0;
  double alpha = 0.5;
  double beta = 1.0;
  double delta = 0.125;
  double gamma = 0.0;  // 0 selects the default for (alpha, m)
  int r = 2;
  double a = 10.0;
  double b = 0.0;      // 0 selects 10^(m+1)
  double kappa = 0.0;  // 0 selects 100 n
  double rho = 160.0;
  double lambda0 = 0.0;  // 0 selects a quantile of C b
  double C0 = 1.0;
  double c_acc = 0.5;
  double delta0 = 0.5;
  double eps0 = 0.05;
  double s_exp = 1.0;
  double C1 = 1.0;
  double C2 = 100.0;
  int levels = 4;       // lattice levels below the single top cube
  double s_trunc = 0.0;  // 0 selects 4 times the atom spacing
  double t_trunc = 0.0;  // 0 selects diam(E)
};

// A validated experiment configuration.
struct Scenario {
  std::string name = "scenario";
  json raw;
  ClosedSet E;
  AtomicMeasure mu;
  Kernel kernel;
  Params params;
  std::uint64_t seed = 1;
  std::size_t budget = 256;  // cone samples per shell
  std::vector<std::string> suites;

  static Scenario from_json(const json& j);
  static Scenario load(const std::string& path);

  double b() const;
  double kappa() const;
  double gamma() const;
  double diameter() const;
  double spacing() const;  // smallest inter-atom distance
  double s_trunc() const;
  double t_trunc() const;
  QuadratureConfig quadrature(std::uint64_t stream = 0) const;
  std::size_t fixed_atom() const;
};

// Uniform segment scenario used by several experiments.
Scenario segment_scenario(std::size_t atoms, std::uint64_t seed);

std::shared_ptr<const NetHierarchy> scenario_nets(const Scenario& sc);
std::shared_ptr<const LatticeSkeleton> scenario_skeleton(const Scenario& sc);
// A ball around the fixed atom containing every atom.
BallSpec whole_ball(const Scenario& sc);

struct Record {
  std::string check;
  std::string property;
  json measured = json::object();
  json tolerance = json::object();
  bool pass = true;
  double runtime_ms = 0.0;
  std::uint64_t seed = 0;
  json to_json(bool timing) const;
};

class Reporter {
 public:
  void add(Record r) { records_.push_back(std::move(r)); }
  const std::vector<Record>& records() const { return records_; }
  bool all_pass() const;
  void write(std::ostream& os, bool timing = true) const;

 private:
  std::vector<Record> records_;
};

// ------------------------------------------------------------ experiments

struct RegularBall {
  BallSpec B;
  double doubling = 0.0;
  double boundary = 0.0;
};
// Closed balls centred at atoms on a geometric radius grid that are
// (a, b)-doubling with kappa-small boundary; finite-diameter E adds itself.
std::vector<RegularBall> enumerate_regular_balls(const AtomicMeasure& mu, double a, double b, double kappa,
                                                 std::size_t max_centers, int radii, std::uint64_t seed);

struct TbHypotheses {
  BallSpec B;
  bool support = true;        // nu_B lives on B
  bool normalised = true;     // nu_B(B) = mu(B)
  double C1_measured = 0.0;   // |nu|(B) / mu(B)
  bool bounded = true;
  double worst_small = 0.0;   // LP upper bound of |nu|(A) / |nu|(B) over small A
  bool continuity = true;
  double exceptional = 0.0;   // |nu|(U) / |nu|(B)
  bool exceptional_ok = true;
  double weak_sup = 0.0;      // sup_lambda lambda^s mu(C nu > lambda, off U) / |nu|(B)
  bool weak_ok = true;
  bool all() const { return support && normalised && bounded && continuity && exceptional_ok && weak_ok; }
};
TbHypotheses check_tb_hypotheses(const Scenario& sc, const BallSpec& B, const ComplexAtomicMeasure& nu_B,
                                 const std::vector<char>& U, const QuadratureConfig& cfg);

struct StoppingSets {
  double eta = 0.0;
  double p0 = 0.0;
  std::vector<char> T, H0, H1, H2, H;
  std::size_t F1 = 0, F2 = 0;
  double mass_TH = 0.0;    // |nu|(T u H)
  double bound_TH = 0.0;   // (1 - 1/(4 C1)) |nu|(B)
  bool mass_ok = true;
  double phi_min = 0.0, phi_max = 0.0;  // density range off H2
  bool density_ok = true;
};
// Sets built from nu on the restricted lattice; r_min cuts the radial
// maximal function below the atom resolution.
StoppingSets stopping_sets_pipeline(const Scenario& sc, const RestrictedLattice& DB, const ComplexAtomicMeasure& nu,
                                    const std::vector<char>& U, double r_min);

struct GoodLambdaReport {
  std::size_t functions = 0;
  double theta = 0.0;
  double factor_bound = 0.0;  // 1 - theta / (4 b)
  double worst_factor = 0.0;  // max over f, lambda of left / right
  std::size_t checks = 0;
  std::size_t passes = 0;
  std::vector<double> lp_ratio_15, lp_ratio_2, lp_ratio_3;
  double spread_2 = 0.0;
  std::size_t whitney_runs = 0;
  std::size_t whitney_ok = 0;
  bool pass = false;
};
GoodLambdaReport good_lambda_experiment(const Scenario& sc, std::size_t functions, double eps, double delta_gl,
                                        double slack);

struct Weak11ExperimentReport {
  std::vector<double> sup;  // per positive measure
  double spread = 0.0;      // max / min
  std::vector<double> sup_complex;  // same moduli, random phases; reported only
  double spread_complex = 0.0;
  bool zero_measure_ok = true;
  bool pass = false;
};
Weak11ExperimentReport weak11_experiment(const Scenario& sc, std::size_t measures, std::size_t atoms_per_measure);

}  // namespace conesq
