#ifndef CORNERFEM_ANALYSIS_ANALYSIS_HPP
#define CORNERFEM_ANALYSIS_ANALYSIS_HPP

#include <optional>
#include <string>
#include <vector>

#include "analysis/eigensolver.hpp"
#include "fem/manufactured.hpp"
#include "norms/weighted_norms.hpp"

namespace cornerfem {

// ------------------------------------------------------------- coercivity

struct CoercivityResult {
  double rho_h = 0;
  int iterations = 0;
};

/// Discrete coercivity constant: smallest eigenvalue of the pencil
/// ((A + A^H)/2, M) with M the H^1 Gram matrix on the free dofs.
CoercivityResult coercivity_constant(const SparseC& A, const SparseR& gram, double tol = 1e-8);

/// Assembles beta on each space and reports the rho_h sequence against
/// C_use. Monotonicity is only asserted for nested spaces.
struct RhoCuseReport {
  std::vector<double> rho;
  double cuse = 0;
  bool nested = true;
  bool monotone = true;     // meaningful only when nested
  bool passed = false;      // final rho_h <= slack * cuse
  std::string note;
};

RhoCuseReport rho_cuse_check(const CoefficientSet& beta,
                             const std::vector<std::shared_ptr<const FeSpace>>& spaces,
                             double slack = 1.05);

// ---------------------------------------------------------- Neumann series

struct SeriesResult {
  std::vector<double> errors;   // |u_n - u_direct|_{H^1}, n = 0..n_terms
  std::vector<double> ratios;   // errors[n+1] / errors[n]
  double fitted_ratio = 0;      // geometric decay rate from a log-linear fit
  double q_estimate = 0;        // delta |Q| / rho_h
  double u0_norm = 0;           // |P^{-1} F|_{H^1}
};

/// Truncated Neumann series for (P - delta Q)^{-1} F: n back-substitutions
/// against the direct solve. Throws NumericalError("perturbation too large")
/// when the estimated contraction ratio reaches 1.
SeriesResult neumann_series_solve(const SparseC& P, const SparseC& Q, const Eigen::VectorXcd& F,
                                  const SparseR& gram, double delta, int n_terms);

// ------------------------------------------------------- inverse-norm bound

long nm_recurrence(int m);   // N_0 = 0, N_m = 2 N_{m-1} + m + 1
long nm_closed_form(int m);  // 2^{m+2} - m - 3

struct SolveReport {
  std::string id;
  int n_dofs = 0;
  double rho_h = 0, cuse = 0, zm = 0;
  double u_norm = 0, f_norm = 0;
  double r_obs = 0, envelope = 0, c_obs = 0;
  long nm = 0, nm_alt = 0;
  bool skipped = false;
  std::string note;
};

struct BoundFamilyCase {
  std::string id;
  CoefficientSet beta;
};

struct BoundReport {
  int m = 0;
  double a = 0;
  std::vector<SolveReport> cases;
  double cobs_spread = 0;   // max/min of c_obs over non-skipped cases
  double rho_spread = 0;    // max/min of rho_h
  double slope = 0;         // log-log slope of r_obs against rho_h
  bool passed = false;      // cobs_spread below the cap
};

/// Runs the inverse-bound harness over a coefficient family: solves
/// P^{beta} u = F with the fixed load f, measures
/// R_obs = |u_h|_{K^{m+1}_{a+1}} / |F|, and compares with the envelope
/// rho^{-N_m - 1} |beta|_{Z_m}^{N_m}. For m = 0 the F-norm is the discrete
/// dual norm; for m >= 1 it is |f|_{K^{m-1}_{a-1}} plus weighted Neumann edge
/// terms (none for Dirichlet problems).
BoundReport verify_inverse_bound(const std::vector<BoundFamilyCase>& family, int m, double a,
                                 const Domain& domain, std::shared_ptr<const FeSpace> space,
                                 const FieldPtr& f, double cobs_cap = 1e3);

// --------------------------------------------------------- rate studies

struct ConvergenceRow {
  int level = 0;
  double h = 0;
  int ndof = 0;
  double errL2 = 0, errH1 = 0, errK11 = 0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  double rateL2 = 0, rateH1 = 0, rateK11 = 0;
};

/// Solves the manufactured problem on each mesh and fits log-log rates
/// against h. Region restriction (when given) applies to the error norms
/// only, e.g. to measure convergence away from a vertex singularity.
ConvergenceTable convergence_study(
    const CoefficientSet& beta, const ManufacturedProblem& problem,
    const std::vector<std::shared_ptr<const FeSpace>>& spaces,
    std::optional<WeightedNormSpec> l2_region = std::nullopt);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Discrete (H^1)' norm sqrt(F^H M^{-1} F).
double dual_norm(const Eigen::VectorXcd& F, const SparseR& gram);

/// H^1 (Gram) norm of a free-dof coefficient vector.
double gram_norm(const Eigen::VectorXcd& u, const SparseR& gram);

}  // namespace cornerfem

#endif
