#pragma once

// Brute-force reference implementations. Quadratic or worse on purpose:
// each one re-derives a quantity straight from its definition so the
// optimised routines can be compared against it with zero tolerance.

#include <vector>

#include "conesq/lattice.hpp"
#include "conesq/measure.hpp"

namespace conesq::oracle {

double ball_mass(const AtomicMeasure& mu, const Point& c, double r, bool closed);
bool is_doubling(const AtomicMeasure& mu, const BallSpec& B, double a, double b);
bool has_small_boundary(const AtomicMeasure& mu, const BallSpec& B, double kappa);
double maximal_centred(const AtomicMeasure& mu, const AtomicMeasure& nu, const Point& y);
double maximal_radial(const AtomicMeasure& nu, const Point& y, double m, double r_min);

// Every atom in exactly one cube per level, labels agree with member lists.
bool lattice_partition(const DyadicLattice& lat);
// Every cube below the top sits inside its parent.
bool lattice_nesting(const DyadicLattice& lat);

}  // namespace conesq::oracle
