#pragma once

#include <string>
#include <vector>

#include "conesq/lattice.hpp"
#include "conesq/measure.hpp"

namespace conesq {

struct WhitneyParams {
  double a = 10.0;
  double rho = 160.0;
  double b = 1000.0;
  double kappa = 200.0;
};

struct WhitneyBall {
  BallSpec ball;
  CubeRef cube;
  double ell = 0.0;
  double gap = 0.0;  // d(center, E \ U)
  double doubling = 0.0;
  double boundary = 0.0;  // least small-boundary constant
};

struct WhitneyChecks {
  bool disjoint = true;
  bool inside = true;          // C1 B within U
  bool reaches = true;         // C2 B meets E \ U
  bool regular = true;         // doubling and small boundary
  bool mass_fraction = true;   // mu(union) >= mu(U) / (2b)
  bool sandwich = true;        // rho ell <= d(c, E \ U) < (2 C_big + rho) ell / delta
  std::size_t overlap = 0;     // D0: max count of (C1/2)-dilates at an atom
  double mass_U = 0.0;
  double mass_cover = 0.0;
  bool all() const { return disjoint && inside && reaches && regular && mass_fraction && sandwich; }
};

struct WhitneyOutcome {
  bool ok = false;
  std::string failure;
  double C1 = 0.0;
  double C2 = 0.0;
  std::size_t whitney_cubes = 0;
  std::size_t regular_balls = 0;
  std::vector<WhitneyBall> balls;
  WhitneyChecks checks;
};

double whitney_C1(const WhitneyParams& p);
double whitney_C2(const WhitneyParams& p, double delta);

// Cover of U (a mask over the lattice atoms, which must carry mu) by
// disjoint regular closed balls. Throws when U is all of E.
WhitneyOutcome whitney_cover(const DyadicLattice& lat, const AtomicMeasure& mu, const std::vector<char>& in_U,
                             const WhitneyParams& params);

// Direct re-check of every output property.
WhitneyChecks verify_whitney(const std::vector<WhitneyBall>& balls, const AtomicMeasure& mu,
                             const std::vector<char>& in_U, const WhitneyParams& params, double delta);

}  // namespace conesq
