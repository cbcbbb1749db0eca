#pragma once

#include <functional>
#include <string>
#include <vector>

#include "conesq/common.hpp"
#include "conesq/geometry.hpp"
#include "conesq/measure.hpp"

namespace conesq {

enum class KernelKind { Power, Signed, Custom };

struct Kernel {
  KernelKind kind = KernelKind::Power;
  std::string name = "power";
  double m = 1.0;
  double alpha = 0.5;
  double beta = 1.0;
  double K1 = 1.0;
  double K2 = 1.0;
  std::function<cplx(const Point&, const Point&)> custom;

  cplx operator()(const Point& x, const Point& y) const;
};

// |x - y|^-(m + alpha); K1 = 1 and the mean-value Hoelder constant.
Kernel power_kernel(double m, double alpha);
// (x_1 - y_1) / |x - y|^(m + alpha + 1).
Kernel signed_kernel(double m, double alpha);
Kernel custom_kernel(std::string name, double m, double alpha, double beta, double K1, double K2,
                     std::function<cplx(const Point&, const Point&)> fn);
// S(x, y) 1_{x not in A}.
Kernel suppressed_kernel(const Kernel& base, std::function<bool(const Point&)> in_A);

// Point masses with several weight columns: w[i * rhs + r].
struct SourceBlock {
  std::vector<Point> points;
  std::size_t rhs = 1;
  std::vector<cplx> w;

  static SourceBlock single(const ComplexAtomicMeasure& nu);
  static SourceBlock columns(const std::vector<Point>& points, const std::vector<std::vector<cplx>>& cols);
};

cplx apply_T(const Kernel& S, const ComplexAtomicMeasure& nu, const Point& x, const ClosedSet& E);
cplx apply_T(const Kernel& S, const AtomicMeasure& mu, const std::vector<cplx>& f, const Point& x, const ClosedSet& E);
// out[r] = sum_i S(x, z_i) w[i, r]; no distance check.
void apply_T_block(const Kernel& S, const SourceBlock& src, const Point& x, cplx* out);

struct QuadratureConfig {
  std::size_t samples_per_shell = 2000;
  std::uint64_t seed = 1;
};

struct Estimate {
  double value = 0.0;
  double stderr = 0.0;
};

// sqrt of an integral estimate with first-order error propagation.
Estimate root_estimate(const Estimate& integral);

struct ConeSample {
  Point x;
  double d = 0.0;  // d(x, E)
  double w = 0.0;  // sigma weight: region volume * d^-n / draws
  int shell = 0;
};

// Stratified sample of the truncated cone at one apex: shells
// (t 2^-(j+1), t 2^-j] in the height d(x, E), the last one cut at s.
// Every narrower truncation or excluded region reuses these samples.
class ConeSampleSet {
 public:
  ConeSampleSet(const ClosedSet& E, const Point& apex, double s, double t, const QuadratureConfig& cfg);

  const Point& apex() const { return apex_; }
  double lower() const { return s_; }
  double upper() const { return t_; }
  const std::vector<ConeSample>& samples() const { return samples_; }
  std::size_t shells() const { return draws_.size(); }
  std::size_t draws(std::size_t shell) const { return draws_[shell]; }

  // sum of w g over samples with lower < d <= upper and keep != 0.
  Estimate integrate(const std::vector<double>& g, double lower = 0.0, double upper = kInf,
                     const std::vector<char>* keep = nullptr) const;
  Estimate integrate(const std::function<double(const ConeSample&)>& g) const;

 private:
  Point apex_;
  double s_ = 0.0, t_ = 0.0;
  std::vector<std::size_t> draws_;
  std::vector<ConeSample> samples_;
};

// Uniform point in the Euclidean ball B(c, r).
Point uniform_in_ball(const Point& c, double r, Rng& rng);
double ball_volume(int n, double r);

Estimate cone_sigma_integral(const ClosedSet& E, const Point& y, double s, double t,
                             const std::function<double(const Point&, double)>& g, const QuadratureConfig& cfg);

// |T nu(x)|^2 d(x,E)^(2 alpha) at every sample, per column: out[r][sample].
std::vector<std::vector<double>> square_integrands(const Kernel& S, const SourceBlock& src, const ConeSampleSet& q);

Estimate square_function(const Kernel& S, const ComplexAtomicMeasure& nu, const Point& y, double s, double t,
                         const ClosedSet& E, const QuadratureConfig& cfg);
Estimate square_function(const Kernel& S, const AtomicMeasure& mu, const std::vector<cplx>& f, const Point& y, double s,
                         double t, const ClosedSet& E, const QuadratureConfig& cfg);
// C^t_{s} for every apex and column: out[apex][column].
std::vector<std::vector<Estimate>> square_function_field(const Kernel& S, const SourceBlock& src,
                                                         const std::vector<Point>& apexes, double s, double t,
                                                         const ClosedSet& E, const QuadratureConfig& cfg);

struct SymmetricDifference {
  Estimate sigma;
  std::size_t shells = 0;
};
// sigma of the symmetric difference of the cones at y, y2 above height t r.
SymmetricDifference cone_symmetric_difference(const ClosedSet& E, const Point& y, const Point& y2, double t, double r,
                                              const QuadratureConfig& cfg, int shells = 14);

struct KernelCheck {
  double size_ratio = 0.0;    // max |S| |x-y|^(m+alpha) / K1
  double holder_ratio = 0.0;  // max Hoelder quotient / K2
  std::size_t samples = 0;
  std::size_t holder_samples = 0;
  bool pass = false;
};
KernelCheck kernel_estimate_check(const Kernel& S, const ClosedSet& E, std::size_t n_samples, std::uint64_t seed);

}  // namespace conesq
