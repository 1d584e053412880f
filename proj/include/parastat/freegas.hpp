#pragma once

#include <optional>
#include <string>
#include <vector>

#include "parastat/linalg.hpp"
#include "parastat/rmatrix.hpp"
#include "parastat/series.hpp"

namespace parastat {

// Single-mode grand-canonical partition function z_R(x) = Σ d_n x^n.
struct HilbertSeries {
  IntPoly coefficients;                    // d_0 .. d_K from the symmetrizer rank
  std::optional<RationalSeries> closed_form;

  // Generating function used for evaluation: the closed form when known,
  // otherwise the computed coefficients when they terminate.
  RationalSeries generating_function() const;
};

HilbertSeries hilbert_series(const RMatrix& r, int order);

struct ReciprocityReport {
  IntPoly product;             // coefficients of z_R(-x) z_{-R}(x) through x^K
  std::int64_t max_coeff_error = 0;
};

ReciprocityReport series_reciprocity_check(const RMatrix& r, int order);

struct FreeGasSpec {
  CMatrix h;   // Hermitian N x N
  double beta = 1.0;
};

struct ModeSolution {
  Eigen::VectorXd epsilons;  // ascending
  CMatrix u;                 // h = U^† diag(ε) U, row k of U is mode k
};

ModeSolution diagonalize(const CMatrix& h, double tol = 1e-12);

// Thermodynamics of one mode with Hilbert series z at activity x = e^{-βε}.
// Rational forms are summed as power series with a geometric tail bound.
class SingleModeStats {
 public:
  explicit SingleModeStats(RationalSeries z);

  const RationalSeries& series() const { return z_; }
  // z(x); throws DomainError outside the radius of convergence.
  double z(double x) const;
  // ln z(e^{-βε}) computed without overflow for large activities.
  double log_z(double beta_eps) const;
  // <n^l> = (x d/dx)^l z / z at x = e^{-βε}.
  double moment(double beta_eps, int l) const;

 private:
  // Weights d_n e^{-n βε} scaled by a common factor; returns log of the factor.
  double weighted_sum(double beta_eps, int l, double& out) const;

  RationalSeries z_;
};

SingleModeStats single_mode_stats(const RMatrix& r);

double partition_function(const RMatrix& r, const ModeSolution& sol, double beta);
double free_energy(const RMatrix& r, const ModeSolution& sol, double beta);
double mean_occupation_moment(const RMatrix& r, double x, int l);

struct StaticCorrelators {
  CMatrix e_mode;          // <ẽ_kp>
  CMatrix e_mode_pair;     // <ẽ_kp ẽ_pk>
  CMatrix e_position;      // <ê_ab>
  Eigen::VectorXd occupation;  // <ñ_k>
  std::vector<std::pair<int, int>> degenerate_pairs;
};

StaticCorrelators static_correlators(const RMatrix& r, const ModeSolution& sol, double beta);

// <[n̂_a(t), n̂_b(0)]> with n̂_a(t) = e^{iHt} n̂_a e^{-iHt}.
cplx unequal_time_commutator(const RMatrix& r, const ModeSolution& sol, double beta, int a,
                             int b, double t);

struct OccupationRow {
  double beta_eps = 0.0;
  double occupation = 0.0;
  double fermion = 0.0;
  std::optional<double> boson;  // empty where the Bose series diverges
};

std::vector<OccupationRow> occupation_curve(const RMatrix& r, const std::vector<double>& grid);

// CSV with header beta_eps,occupation_R,occupation_fermion,occupation_boson and
// 17 significant digits.
std::string occupation_csv(const std::vector<OccupationRow>& rows);

}  // namespace parastat
