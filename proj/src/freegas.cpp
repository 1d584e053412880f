#include "parastat/freegas.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "parastat/errors.hpp"
#include "parastat/fockspace.hpp"

namespace parastat {
namespace {

// Largest tensor dimension for which the reciprocity check recomputes the
// coefficients from the symmetric subspaces instead of the closed form.
constexpr std::size_t kSubspaceWorkLimit = 1024;
constexpr long kMaxSeriesTerms = 50'000'000;

bool subspaces_affordable(int m, int order) {
  double dim = 1.0;
  for (int k = 0; k < order; ++k) dim *= m;
  return dim <= static_cast<double>(kSubspaceWorkLimit);
}

IntPoly to_poly(const std::vector<int>& d) { return IntPoly(d.begin(), d.end()); }

IntPoly series_coefficients(const RMatrix& r, int order) {
  if (subspaces_affordable(r.m(), order) || !r.hilbert_closed_form())
    return to_poly(exclusion_statistics(r, order));
  return r.hilbert_closed_form()->coefficients(order + 1);
}

}  // namespace

RationalSeries HilbertSeries::generating_function() const {
  if (closed_form) return *closed_form;
  const auto zero = std::find(coefficients.begin(), coefficients.end(), 0);
  if (zero == coefficients.end())
    throw UnsupportedError("Hilbert series is not known to terminate; no closed form available");
  IntPoly num(coefficients.begin(), zero);
  return RationalSeries{num, {1}};
}

HilbertSeries hilbert_series(const RMatrix& r, int order) {
  if (order < 0) throw ShapeError("series order must be nonnegative");
  HilbertSeries hs;
  hs.coefficients = to_poly(exclusion_statistics(r, order));
  hs.closed_form = r.hilbert_closed_form();
  if (hs.closed_form && hs.closed_form->coefficients(order + 1) != hs.coefficients)
    throw ConstraintError("computed exclusion statistics disagree with the closed form " +
                          hs.closed_form->to_string());
  return hs;
}

ReciprocityReport series_reciprocity_check(const RMatrix& r, int order) {
  if (order < 1) throw ShapeError("reciprocity check needs order >= 1");
  const IntPoly plus = poly_reflect(series_coefficients(r, order));
  const IntPoly minus = series_coefficients(negate(r), order);
  ReciprocityReport rep;
  rep.product = series_product(plus, minus, order + 1);
  for (int n = 0; n <= order; ++n) {
    const std::int64_t expect = n == 0 ? 1 : 0;
    rep.max_coeff_error = std::max<std::int64_t>(rep.max_coeff_error,
                                                 std::llabs(rep.product[n] - expect));
  }
  return rep;
}

ModeSolution diagonalize(const CMatrix& h, double tol) {
  if (h.rows() != h.cols() || h.rows() == 0) throw ShapeError("h must be a nonempty square matrix");
  if (!is_hermitian(h, tol)) throw ConstraintError("h must be Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) throw ConstraintError("eigendecomposition of h failed");
  CMatrix v = es.eigenvectors();
  fix_column_phases(v);
  return {es.eigenvalues(), v.adjoint()};
}

SingleModeStats::SingleModeStats(RationalSeries z) : z_(std::move(z)) {
  if (z_.den.empty() || z_.den[0] != 1 || z_.num.empty())
    throw DomainError("generating function must satisfy den(0) = 1");
}

double SingleModeStats::weighted_sum(double beta_eps, int l, double& out) const {
  if (!std::isfinite(beta_eps)) throw DomainError("beta*epsilon must be finite");
  if (z_.is_polynomial()) {
    // Σ n^l d_n e^{-n b}, scaled by the largest exponent.
    double shift = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < z_.num.size(); ++n)
      if (z_.num[n] != 0) shift = std::max(shift, -static_cast<double>(n) * beta_eps);
    out = 0.0;
    for (std::size_t n = 0; n < z_.num.size(); ++n) {
      if (z_.num[n] == 0) continue;
      out += std::pow(static_cast<double>(n), l) * static_cast<double>(z_.num[n]) *
             std::exp(-static_cast<double>(n) * beta_eps - shift);
    }
    return shift;
  }
  const double x = std::exp(-beta_eps);
  const double radius = z_.radius();
  if (!(x < radius))
    throw DomainError("activity " + std::to_string(x) + " outside the radius of convergence " +
                      std::to_string(radius) + " of " + z_.to_string());
  // Terms t_n = c_n x^n from the recurrence den(x) z(x) = num(x), kept in
  // scaled form so that growing coefficients never overflow.
  std::vector<double> xp(std::max(z_.num.size(), z_.den.size()));
  for (std::size_t k = 0; k < xp.size(); ++k) xp[k] = std::pow(x, static_cast<double>(k));
  std::vector<double> t;
  t.reserve(1024);
  double sum = 0.0;
  const double q = x / radius;
  const long order = static_cast<long>(z_.den.size()) - 1;
  const long tail_start = static_cast<long>(std::max(z_.num.size(), z_.den.size()));
  double window = 0.0;  // largest |term| among the last `order` terms
  for (long n = 0; n < kMaxSeriesTerms; ++n) {
    double v = n < static_cast<long>(z_.num.size()) ? static_cast<double>(z_.num[n]) * xp[n] : 0.0;
    for (long k = 1; k <= order && k <= n; ++k)
      v -= static_cast<double>(z_.den[k]) * xp[k] * t[n - k];
    t.push_back(v);
    const double term = std::pow(static_cast<double>(n), l) * v;
    sum += term;
    window = std::abs(term);
    for (long k = 1; k < order && k <= n; ++k)
      window = std::max(window, std::abs(std::pow(static_cast<double>(n - k), l) * t[n - k]));
    if (n <= tail_start) continue;
    // Coefficients grow at most like n^(order-1) / radius^n, so successive
    // terms shrink by at most this ratio.
    const double rho = q * std::pow((n + 1.0) / n, l + order);
    if (rho < 1.0 && window * order * rho / (1.0 - rho) <= 1e-17 * std::abs(sum)) {
      out = sum;
      return 0.0;
    }
  }
  throw DomainError("series for " + z_.to_string() + " did not converge at activity " +
                    std::to_string(x));
}

double SingleModeStats::z(double x) const {
  if (z_.is_polynomial()) {
    double acc = 0.0;
    for (auto it = z_.num.rbegin(); it != z_.num.rend(); ++it) acc = acc * x + static_cast<double>(*it);
    return acc;
  }
  if (x <= 0.0) {
    if (x == 0.0) return static_cast<double>(z_.num[0]);
    if (!(std::abs(x) < z_.radius())) throw DomainError("activity outside radius of convergence");
    // Alternating activities only arise in identities; sum the closed form directly.
    double n = 0.0, d = 0.0;
    for (auto it = z_.num.rbegin(); it != z_.num.rend(); ++it) n = n * x + static_cast<double>(*it);
    for (auto it = z_.den.rbegin(); it != z_.den.rend(); ++it) d = d * x + static_cast<double>(*it);
    return n / d;
  }
  double s = 0.0;
  const double shift = weighted_sum(-std::log(x), 0, s);
  return s * std::exp(shift);
}

double SingleModeStats::log_z(double beta_eps) const {
  double s = 0.0;
  const double shift = weighted_sum(beta_eps, 0, s);
  if (!(s > 0.0)) throw DomainError("partition function is not positive");
  return shift + std::log(s);
}

double SingleModeStats::moment(double beta_eps, int l) const {
  if (l < 0) throw DomainError("moment order must be nonnegative");
  if (l == 0) return 1.0;
  double top = 0.0, bottom = 0.0;
  const double s1 = weighted_sum(beta_eps, l, top);
  const double s0 = weighted_sum(beta_eps, 0, bottom);
  return top / bottom * std::exp(s1 - s0);
}

SingleModeStats single_mode_stats(const RMatrix& r) {
  if (const auto& h = r.hilbert_closed_form()) return SingleModeStats(*h);
  const auto deg = natural_nmax(r, 1);
  if (!deg) throw UnsupportedError("R has no closed-form Hilbert series and it does not terminate within budget");
  return SingleModeStats(RationalSeries{to_poly(exclusion_statistics(r, *deg)), {1}});
}

double partition_function(const RMatrix& r, const ModeSolution& sol, double beta) {
  const SingleModeStats stats = single_mode_stats(r);
  double log_z = 0.0;
  for (Eigen::Index k = 0; k < sol.epsilons.size(); ++k) log_z += stats.log_z(beta * sol.epsilons(k));
  return std::exp(log_z);
}

double free_energy(const RMatrix& r, const ModeSolution& sol, double beta) {
  if (!(beta > 0.0)) throw DomainError("free energy needs beta > 0");
  const SingleModeStats stats = single_mode_stats(r);
  double log_z = 0.0;
  for (Eigen::Index k = 0; k < sol.epsilons.size(); ++k) log_z += stats.log_z(beta * sol.epsilons(k));
  return -log_z / beta;
}

double mean_occupation_moment(const RMatrix& r, double x, int l) {
  if (x < 0.0 || !std::isfinite(x)) throw DomainError("activity must be finite and nonnegative");
  if (x == 0.0) return l == 0 ? 1.0 : 0.0;
  return single_mode_stats(r).moment(-std::log(x), l);
}

StaticCorrelators static_correlators(const RMatrix& r, const ModeSolution& sol, double beta) {
  const SingleModeStats stats = single_mode_stats(r);
  const Eigen::Index n = sol.epsilons.size();
  StaticCorrelators out;
  out.occupation.resize(n);
  Eigen::VectorXd second(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.occupation(k) = stats.moment(beta * sol.epsilons(k), 1);
    second(k) = stats.moment(beta * sol.epsilons(k), 2);
  }
  out.e_mode = CMatrix::Zero(n, n);
  out.e_mode.diagonal() = out.occupation.cast<cplx>();
  out.e_mode_pair = CMatrix::Zero(n, n);
  const double scale = sol.epsilons.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index p = 0; p < n; ++p) {
      if (k == p) {
        out.e_mode_pair(k, p) = second(k);
        continue;
      }
      const double gap = sol.epsilons(k) - sol.epsilons(p);
      if (std::abs(gap) <= 1e-9 * scale || beta == 0.0) {
        // Equal energies: the limit of the ratio is the occupation variance.
        out.e_mode_pair(k, p) = second(k) - out.occupation(k) * out.occupation(k);
        if (k < p) out.degenerate_pairs.emplace_back(static_cast<int>(k), static_cast<int>(p));
      } else {
        out.e_mode_pair(k, p) =
            (out.occupation(k) - out.occupation(p)) / -std::expm1(beta * gap);
      }
    }
  out.e_position = sol.u.transpose() * out.occupation.cast<cplx>().asDiagonal() * sol.u.conjugate();
  return out;
}

cplx unequal_time_commutator(const RMatrix& r, const ModeSolution& sol, double beta, int a, int b,
                             double t) {
  const Eigen::Index n = sol.epsilons.size();
  if (a < 0 || b < 0 || a >= n || b >= n) throw ShapeError("mode index out of range");
  const SingleModeStats stats = single_mode_stats(r);
  Eigen::VectorXd occ(n);
  for (Eigen::Index k = 0; k < n; ++k) occ(k) = stats.moment(beta * sol.epsilons(k), 1);
  const CMatrix& u = sol.u;
  cplx acc = 0.0;
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index p = 0; p < n; ++p) {
      if (k == p) continue;
      const cplx phase = std::exp(cplx(0.0, t * (sol.epsilons(k) - sol.epsilons(p))));
      acc += u(k, a) * std::conj(u(p, a)) * std::conj(u(k, b)) * u(p, b) * (occ(k) - occ(p)) * phase;
    }
  return acc;
}

std::vector<OccupationRow> occupation_curve(const RMatrix& r, const std::vector<double>& grid) {
  const SingleModeStats stats = single_mode_stats(r);
  std::vector<OccupationRow> rows(grid.size());
  for (double b : grid)
    if (!std::isfinite(b)) throw DomainError("occupation grid must be finite");
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double b = grid[i];
    OccupationRow row;
    row.beta_eps = b;
    row.occupation = stats.moment(b, 1);
    row.fermion = 1.0 / (1.0 + std::exp(b));
    if (b > 0.0) row.boson = 1.0 / std::expm1(b);
    rows[i] = row;
  }
  return rows;
}

std::string occupation_csv(const std::vector<OccupationRow>& rows) {
  std::ostringstream os;
  os << "beta_eps,occupation_R,occupation_fermion,occupation_boson\n";
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& r : rows)
    os << num(r.beta_eps) << ',' << num(r.occupation) << ',' << num(r.fermion) << ','
       << (r.boson ? num(*r.boson) : std::string("divergent")) << '\n';
  return os.str();
}

}  // namespace parastat
