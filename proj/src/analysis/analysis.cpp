#include "analysis/analysis.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

namespace cornerfem {

CoercivityResult coercivity_constant(const SparseC& A, const SparseR& gram, double tol) {
  SparseC H = Complex(0.5) * (SparseC(A) + SparseC(A.adjoint()));
  EigenResult er = smallest_pencil_eigenvalue(H, gram, tol);
  return {er.value, er.iterations};
}

RhoCuseReport rho_cuse_check(const CoefficientSet& beta,
                             const std::vector<std::shared_ptr<const FeSpace>>& spaces,
                             double slack) {
  if (spaces.empty()) throw ValidationError("rho_cuse_check needs at least one space");
  RhoCuseReport rep;
  rep.cuse = c_use(beta);
  for (std::size_t k = 0; k + 1 < spaces.size(); ++k)
    rep.nested = rep.nested && nodes_nested(spaces[k]->mesh(), spaces[k + 1]->mesh());
  for (const auto& space : spaces) {
    SparseC A = assemble_form(beta, *space);
    SparseC Af(space->n_free(), space->n_free());
    {
      std::vector<Eigen::Triplet<Complex>> trips;
      for (int col = 0; col < A.outerSize(); ++col)
        for (SparseC::InnerIterator it(A, col); it; ++it) {
          int fi = space->free_index(int(it.row()));
          int fj = space->free_index(int(it.col()));
          if (fi >= 0 && fj >= 0) trips.emplace_back(fi, fj, it.value());
        }
      Af.setFromTriplets(trips.begin(), trips.end());
    }
    SparseR M = h1_gram(*space);
    rep.rho.push_back(coercivity_constant(Af, M).rho_h);
  }
  if (rep.nested) {
    for (std::size_t k = 0; k + 1 < rep.rho.size(); ++k)
      if (rep.rho[k + 1] > rep.rho[k] + 1e-10) rep.monotone = false;
  } else {
    rep.note = "mesh sequence not nested; monotonicity check skipped";
  }
  rep.passed = rep.rho.back() <= slack * rep.cuse && (!rep.nested || rep.monotone);
  return rep;
}

double dual_norm(const Eigen::VectorXcd& F, const SparseR& gram) {
  Eigen::SimplicialLLT<SparseR> llt(gram);
  if (llt.info() != Eigen::Success) throw NumericalError("Gram matrix is not positive definite");
  Eigen::VectorXcd x = llt.solve(F.real()).cast<Complex>() +
                       Complex(0, 1) * llt.solve(F.imag()).cast<Complex>();
  return std::sqrt(std::abs(Complex(F.adjoint() * x).real()));
}

double gram_norm(const Eigen::VectorXcd& u, const SparseR& gram) {
  const SparseC Mc = gram.cast<Complex>();
  return std::sqrt(std::abs(Complex(u.adjoint() * (Mc * u)).real()));
}

SeriesResult neumann_series_solve(const SparseC& P, const SparseC& Q, const Eigen::VectorXcd& F,
                                  const SparseR& gram, double delta, int n_terms) {
  SeriesResult out;
  double rho = coercivity_constant(P, gram).rho_h;
  if (rho <= 0) throw NumericalError("base operator is not coercive");
  double qnorm = pencil_operator_norm(Q, gram);
  out.q_estimate = std::abs(delta) * qnorm / rho;
  if (out.q_estimate >= 1.0)
    throw NumericalError("perturbation too large: estimated ratio " +
                         format_double(out.q_estimate) + " >= 1");

  Eigen::SparseLU<SparseC> lu;
  lu.compute(P);
  if (lu.info() != Eigen::Success) throw NumericalError("base operator factorization failed");

  SparseC Pd = P - Complex(delta) * Q;
  Eigen::SparseLU<SparseC> lud;
  lud.compute(Pd);
  if (lud.info() != Eigen::Success) throw NumericalError("perturbed operator factorization failed");
  Eigen::VectorXcd u_direct = lud.solve(F);

  Eigen::VectorXcd w = lu.solve(F);
  out.u0_norm = gram_norm(w, gram);
  Eigen::VectorXcd u = w;
  out.errors.push_back(gram_norm(u - u_direct, gram));
  for (int k = 1; k <= n_terms; ++k) {
    w = lu.solve((Complex(delta) * (Q * w)).eval());
    u += w;
    out.errors.push_back(gram_norm(u - u_direct, gram));
  }
  for (std::size_t k = 0; k + 1 < out.errors.size(); ++k)
    out.ratios.push_back(out.errors[k + 1] / std::max(out.errors[k], 1e-300));

  // log-linear fit over the part above the round-off floor
  std::vector<double> xs, ys;
  double floor = out.errors.front() * 1e-12;
  for (std::size_t k = 0; k < out.errors.size(); ++k) {
    if (out.errors[k] <= floor) break;
    xs.push_back(double(k));
    ys.push_back(std::log(out.errors[k]));
  }
  if (xs.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      sx += xs[k];
      sy += ys[k];
      sxx += xs[k] * xs[k];
      sxy += xs[k] * ys[k];
    }
    double n = double(xs.size());
    out.fitted_ratio = std::exp((n * sxy - sx * sy) / (n * sxx - sx * sx));
  }
  return out;
}

long nm_recurrence(int m) {
  long n = 0;
  for (int k = 1; k <= m; ++k) n = 2 * n + k + 1;
  return n;
}

long nm_closed_form(int m) { return (1L << (m + 2)) - m - 3; }

BoundReport verify_inverse_bound(const std::vector<BoundFamilyCase>& family, int m, double a,
                                 const Domain& domain, std::shared_ptr<const FeSpace> space,
                                 const FieldPtr& f, double cobs_cap) {
  if (m < 0 || m > 3 || std::abs(a) > 2.0)
    throw ValidationError("bound harness supports m <= 3, |a| <= 2");
  BoundReport rep;
  rep.m = m;
  rep.a = a;
  const long nm = nm_recurrence(m);
  const SparseR gram = h1_gram(*space);
  const double eig_tol = 1e-8;

  std::vector<double> rhos, robs;
  for (const auto& fam : family) {
    SolveReport r;
    r.id = fam.id;
    r.n_dofs = space->n_free();
    r.nm = nm;
    r.nm_alt = nm_closed_form(m);

    CoefficientSet shifted = conjugate(fam.beta, a);
    LinearSystem sys = assemble(shifted, space, f);
    r.cuse = c_use(shifted);
    r.zm = zm_norm(shifted, m);
    r.rho_h = coercivity_constant(sys.A, gram).rho_h;
    if (r.rho_h <= 10 * eig_tol) {
      r.skipped = true;
      r.note = "non-coercive member (rho_h below noise floor)";
      rep.cases.push_back(r);
      continue;
    }
    FeFunction u = solve(sys);
    r.u_norm = kondratiev_norm(u, WeightedNormSpec::whole(m + 1, 1.0), domain);
    if (m == 0) {
      r.f_norm = dual_norm(sys.F, gram);
    } else {
      r.f_norm = kondratiev_norm(f, WeightedNormSpec::whole(m - 1, -1.0), domain, space->mesh());
    }
    r.r_obs = r.u_norm / r.f_norm;
    r.envelope = std::pow(r.rho_h, -double(nm + 1)) * std::pow(r.zm, double(nm));
    r.c_obs = r.r_obs / r.envelope;
    rhos.push_back(r.rho_h);
    robs.push_back(r.r_obs);
    rep.cases.push_back(r);
  }

  std::vector<double> cobs;
  for (const auto& r : rep.cases)
    if (!r.skipped) cobs.push_back(r.c_obs);
  if (!cobs.empty()) {
    auto [mn, mx] = std::minmax_element(cobs.begin(), cobs.end());
    rep.cobs_spread = *mx / *mn;
    auto [rn, rx] = std::minmax_element(rhos.begin(), rhos.end());
    rep.rho_spread = *rx / *rn;
  }
  if (rhos.size() >= 2) rep.slope = loglog_slope(rhos, robs);
  rep.passed = !cobs.empty() && rep.cobs_spread < cobs_cap;
  return rep;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("slope fit needs >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double n = double(x.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceTable convergence_study(const CoefficientSet& beta, const ManufacturedProblem& problem,
                                   const std::vector<std::shared_ptr<const FeSpace>>& spaces,
                                   std::optional<WeightedNormSpec> l2_region) {
  if (spaces.size() < 3) throw ValidationError("convergence study needs at least 3 levels");
  ConvergenceTable table;
  std::vector<double> hs, e2, e1, ek;
  int level = 0;
  for (const auto& space : spaces) {
    LinearSystem sys = assemble(beta, space, problem.f, problem.h, problem.u);
    FeFunction uh = solve(sys);
    auto err = difference(uh, problem.u);
    const Mesh& mesh = space->mesh();
    ConvergenceRow row;
    row.level = level++;
    row.h = mesh.max_diameter();
    row.ndof = space->n_free();
    WeightedNormSpec l2spec =
        l2_region ? *l2_region : WeightedNormSpec::whole(0, 0.0);
    l2spec.m = 0;
    row.errL2 = kondratiev_norm(*err, l2spec, *beta.domain, mesh);
    row.errH1 = h1_norm(*err, *beta.domain, mesh);
    row.errK11 = kondratiev_norm(*err, WeightedNormSpec::whole(1, 1.0), *beta.domain, mesh);
    hs.push_back(row.h);
    e2.push_back(row.errL2);
    e1.push_back(row.errH1);
    ek.push_back(row.errK11);
    table.rows.push_back(row);
  }
  table.rateL2 = loglog_slope(hs, e2);
  table.rateH1 = loglog_slope(hs, e1);
  table.rateK11 = loglog_slope(hs, ek);
  return table;
}

}  // namespace cornerfem
