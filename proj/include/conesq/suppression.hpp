#pragma once

#include <vector>

#include "conesq/measure.hpp"
#include "conesq/operator.hpp"

namespace conesq {

struct SuppressionParams {
  double lambda0 = 1.0;
  double C0 = 1.0;
  double m = 1.0;
  double s_min = 1e-3;  // quadrature floor
  double t_max = 1.0;   // quadrature ceiling
  QuadratureConfig cfg;
};

struct SuppressionData {
  SuppressionParams params;
  BallSpec B;
  std::vector<char> in_B;      // per atom of mu
  std::vector<double> C;       // C b at atoms of B over (s_min, t_max]
  std::vector<double> t;       // thresholds t(y)
  std::vector<double> r;       // thresholds r(y)
  std::vector<char> in_S0;
  std::vector<char> in_S;
  std::vector<Point> S0;       // points of S0
  std::vector<double> height;  // A_y = {x in cone(y) : d(x, E) < height}

  bool in_A(const Point& x, double d) const;
};

// r(y) exactly from the radial profile of mu (open balls).
double density_radius(const AtomicMeasure& mu, const Point& y, double m, double C0);

// Largest t with the upper part of the cone carrying more than lambda^2;
// 0 when even the whole sample set carries at most lambda^2.
double cone_threshold(const ConeSampleSet& q, const std::vector<double>& g, double lambda);

SuppressionData compute_suppression(const Kernel& S, const ClosedSet& E, const AtomicMeasure& mu,
                                    const std::vector<cplx>& b, const BallSpec& B, const SuppressionParams& params);

struct PairedValue {
  Estimate plain;
  Estimate suppressed;
};
// Unsuppressed and suppressed C^t_s at each apex, per column, from the same
// samples. Requires s_min <= s < t <= t_max.
std::vector<std::vector<PairedValue>> paired_square_field(const Kernel& S, const ClosedSet& E, const SourceBlock& src,
                                                          const std::vector<Point>& apexes, double s, double t,
                                                          const SuppressionData& data);

Kernel suppressed_kernel(const Kernel& base, const SuppressionData& data, const ClosedSet& E);

struct BigPieceSet {
  std::vector<double> p0;  // per atom of mu, 0 outside B
  std::vector<char> G;
  double tau = 0.0;
  double mass_G = 0.0;
  double mass_B = 0.0;
  double bound = 0.0;              // (1 - delta0) / 3 mu(B)
  bool hypothesis = true;          // mu(T u H) <= delta0 mu(B) for every seed
  double worst_exceptional = 0.0;  // max over seeds of mu(T u H) / mu(B)
  bool bound_holds = false;
};
// exceptional[seed][atom] marks H u T_omega for that seed.
BigPieceSet build_big_piece(const AtomicMeasure& mu, const std::vector<char>& in_B,
                            const std::vector<std::vector<char>>& exceptional, const std::vector<char>& S,
                            double delta0);

}  // namespace conesq
