#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "conesq/measure.hpp"
#include "conesq/operator.hpp"

namespace conesq {

struct CZBall {
  std::size_t center = 0;  // atom index
  BallSpec B;              // closed
  BallSpec R;              // closed doubling companion, R ⊃ 4B
  double nu_B = 0.0;       // |nu|(B)
  double mu_2B = 0.0;
  cplx alpha{0.0, 0.0};    // phi = alpha 1_R
};

struct CZChecks {
  bool heavy_ball = true;      // positive excess at the chosen radius
  bool maximal_radius = true;  // no excess at 2r or beyond
  bool off_balls = true;       // nu = f mu off the balls, |f| <= lambda
  bool companion = true;       // R concentric, strictly larger than 4B, positive mass
  bool mean_preserved = true;  // phi_i carries the integral of nu on B_i
  bool bounded_sum = true;     // sum |phi_i| finite
  bool companion_size = true;  // ||phi_i|| mu(R_i) <= |nu|(B_i)
  double phi_sum = 0.0;   // max_x sum |phi_i(x)| / lambda
  double phi_mass = 0.0;  // max_i ||phi_i|| mu(R_i) / |nu|(B_i)
  std::size_t overlap = 0;
  double good_part = 0.0;  // ||f + sum phi||_inf / lambda
  std::string detail;
  bool all() const {
    return heavy_ball && maximal_radius && off_balls && companion && mean_preserved && bounded_sum && companion_size;
  }
  nlohmann::json flags() const;
};

struct CZDecomposition {
  double lambda = 0.0;
  double c = 0.0;  // 2^-(n+1)
  double a = 6.0;
  double b = 0.0;
  std::vector<CZBall> balls;
  std::vector<int> cover;  // atom -> number of balls containing it
  std::vector<cplx> f;     // good part density
  CZChecks checks;

  // w_i at an atom.
  double weight(std::size_t ball, std::size_t atom, const AtomicMeasure& mu) const;
  // b_i = w_i nu - phi_i mu as weights over the atoms.
  std::vector<cplx> bad_part(std::size_t ball, const AtomicMeasure& mu, const ComplexAtomicMeasure& nu) const;
};

double cz_threshold(const AtomicMeasure& mu, const ComplexAtomicMeasure& nu);

// nu and mu share their point list. m is the order exponent used for the
// (6, 6^(m+1)) doubling companions.
CZDecomposition cz_decompose(const ComplexAtomicMeasure& nu, const AtomicMeasure& mu, double lambda, double m);
CZChecks verify_cz(const CZDecomposition& dec, const ComplexAtomicMeasure& nu, const AtomicMeasure& mu);

// Smallest closed dilate sB, s > 1, that is (a, b)-doubling (and has
// positive mass when asked).
BallSpec smallest_doubling_dilate(const AtomicMeasure& mu, const BallSpec& B, double a, double b, double m,
                                  bool positive_mass = false);

struct AnnulusReport {
  bool skipped = false;
  std::string reason;
  double lhs = 0.0;  // sum over B2 \ B1 of mu(x) / |x - c|^m
  double rhs = 0.0;  // mu(B2) / r(B2)^m
  double ratio = 0.0;
};
AnnulusReport nondoubling_annulus_bound_check(const AtomicMeasure& mu, const BallSpec& B1, const BallSpec& B2,
                                              double a, double b, double m);

// Per-ball ratio of the integral of C b_i over E \ 2B_i against |nu|(B_i).
struct BallIntegralReport {
  std::vector<double> ratio;
  double median = 0.0;
};
BallIntegralReport cz_ball_integrals(const Kernel& S, const ClosedSet& E, const CZDecomposition& dec,
                                     const ComplexAtomicMeasure& nu, const AtomicMeasure& mu, double s, double t,
                                     const QuadratureConfig& cfg);

struct Weak11Report {
  std::vector<double> lambda;
  std::vector<double> value;  // lambda mu(C nu > lambda) / |nu|(E)
  double sup = 0.0;
};
// Values of C nu at the atoms of mu, then the distribution statistic on a
// geometric grid of 12 points (ratio 2) anchored at the median value.
Weak11Report weak11_statistic(const std::vector<double>& C_values, const AtomicMeasure& mu, double total_variation);
std::vector<double> lambda_grid(std::vector<double> values, int points = 12, double ratio = 2.0);

double median(std::vector<double> v);

}  // namespace conesq
