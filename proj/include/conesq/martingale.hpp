#pragma once

#include <map>
#include <string>
#include <vector>

#include "conesq/lattice.hpp"
#include "conesq/measure.hpp"
#include "conesq/operator.hpp"

namespace conesq {

// Stopping and transit data of b on a restricted lattice.
struct BAdaptedSystem {
  std::shared_ptr<const RestrictedLattice> DB;
  AtomicMeasure mu;
  std::vector<cplx> b;
  std::vector<char> H;
  double c_acc = 0.5;
  std::vector<CubeRef> stopping;            // maximal stopping cubes
  std::vector<char> T;                      // atoms of the stopping region
  std::vector<std::vector<char>> transit;   // [k - k0][cube index]
  std::vector<std::vector<cplx>> int_b;     // integral of b over each cube
  std::vector<std::vector<double>> mass;    // mu of each cube

  bool is_transit(CubeRef q) const { return transit[static_cast<std::size_t>(q.k - DB->k0())][static_cast<std::size_t>(q.idx)] != 0; }
  double cube_mass(CubeRef q) const { return mass[static_cast<std::size_t>(q.k - DB->k0())][static_cast<std::size_t>(q.idx)]; }
  std::vector<CubeRef> transit_cubes() const;
};

// Throws when the top cube is not transit.
BAdaptedSystem compute_stopping_and_transit(std::shared_ptr<const RestrictedLattice> DB, const AtomicMeasure& mu,
                                            std::vector<cplx> b, double c_acc, std::vector<char> H = {});

struct DeltaTerm {
  CubeRef Q;
  bool residual = false;  // finest-level remainder f - (<f>/<b>) b on Q
  std::vector<std::size_t> atoms;
  std::vector<cplx> values;
  cplx integral{0.0, 0.0};  // integral of the term over Q
};

struct MartingaleDecomposition {
  cplx top_ratio{0.0, 0.0};
  std::vector<cplx> top;  // E_top f per atom
  std::vector<DeltaTerm> terms;

  std::vector<cplx> reconstruct(std::size_t atoms) const;
  double energy(const AtomicMeasure& mu) const;  // ||E f||^2 + sum ||Delta_Q f||^2
};

// <g>_Q / <b>_Q with <.>_Q = 0 on zero-mass cubes.
MartingaleDecomposition decompose(const std::vector<cplx>& f, const BAdaptedSystem& sys);

struct MartingaleChecks {
  double reconstruction = 0.0;  // max |f - Ef - sum Delta f| / ||f||_inf
  double zero_mean = 0.0;       // max |int Delta_Q f| / (||f||_inf mu(Q)) over non-residual terms
  double energy_ratio = 0.0;    // energy / ||f||^2
  bool supports_nested = true;
};
MartingaleChecks check_decomposition(const std::vector<cplx>& f, const BAdaptedSystem& sys,
                                     const MartingaleDecomposition& dec);

// Coefficient matrix A^s between two cube families, with D(Q,R) measured
// on atom sets.
struct CoefficientMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> a;  // row-major
  double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};
CoefficientMatrix coefficient_matrix(const DyadicLattice& LQ, const std::vector<CubeRef>& Q, const DyadicLattice& LR,
                                     const std::vector<CubeRef>& R, const AtomicMeasure& mu, double m, double s);
double coefficient(double lQ, double lR, double d, double muQ, double muR, double m, double s);

struct NormEstimate {
  double norm = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};
NormEstimate matrix_norm(const CoefficientMatrix& A, int max_iter = 2000, double tol = 1e-12);

struct CarlesonReport {
  std::vector<CubeRef> Q0;
  std::vector<double> ratio;        // sum a_Q / mu(Q0)
  std::vector<double> chain_bound;  // sum a_Q / integral of C^2 over Q0 (at most 1)
  double C = 0.0;
  double chain_max = 0.0;
};
// a_Q over transit Q of the system with Q(R, r) = Q for cubes R of D0.
CarlesonReport carleson_check(const BAdaptedSystem& sys, const DyadicLattice& D0, const Kernel& S, const ClosedSet& E,
                              int r, const QuadratureConfig& cfg);

}  // namespace conesq
