#include "analysis/eigensolver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <random>

namespace cornerfem {

EigenResult smallest_pencil_eigenvalue(const SparseC& H, const SparseR& M, double rel_tol,
                                       int max_iter, unsigned seed) {
  const Eigen::Index n = H.rows();
  if (n == 0) throw ValidationError("empty eigenproblem");
  if (max_iter <= 0) max_iter = int(std::min<Eigen::Index>(n, 400));

  Eigen::SimplicialLLT<SparseR> llt(M);
  if (llt.info() != Eigen::Success)
    throw NumericalError("Gram matrix is not positive definite");
  const SparseC Mc = M.cast<Complex>();

  auto m_inner = [&](const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) {
    return Complex(u.adjoint() * (Mc * v));
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::VectorXcd q(n);
  for (Eigen::Index k = 0; k < n; ++k) q[k] = Complex(gauss(rng), 0.0);
  q /= std::sqrt(std::abs(m_inner(q, q).real()));

  std::vector<Eigen::VectorXcd> basis;
  std::vector<double> alpha, beta;
  Eigen::VectorXcd prev = Eigen::VectorXcd::Zero(n);
  double beta_prev = 0;
  EigenResult result;
  double scale = 0;

  for (int j = 0; j < max_iter; ++j) {
    basis.push_back(q);
    // w = M^{-1} H q
    Eigen::VectorXcd Hq = H * q;
    Eigen::VectorXcd w = llt.solve(Hq.real()).cast<Complex>() +
                         Complex(0, 1) * llt.solve(Hq.imag()).cast<Complex>();
    double a = m_inner(w, q).real();
    alpha.push_back(a);
    scale = std::max({scale, std::abs(a), beta_prev});
    w -= a * q + beta_prev * prev;
    // full reorthogonalization in the M-inner product
    for (const auto& b : basis) w -= m_inner(b, w) * b;
    for (const auto& b : basis) w -= m_inner(b, w) * b;
    double bnorm = std::sqrt(std::max(0.0, m_inner(w, w).real()));
    beta.push_back(bnorm);

    // Ritz values of the tridiagonal
    int k = j + 1;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      T(i, i) = alpha[std::size_t(i)];
      if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = beta[std::size_t(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    double theta = es.eigenvalues()(0);
    double resid = bnorm * std::abs(es.eigenvectors()(k - 1, 0));
    result.value = theta;
    result.iterations = k;
    double tol = rel_tol * std::max(std::abs(theta), 1e-6 * std::max(scale, 1.0));
    if (resid <= tol || bnorm <= 1e-14 * std::max(scale, 1.0) || k == int(n)) {
      result.converged = resid <= tol || bnorm <= 1e-14 * std::max(scale, 1.0) || k == int(n);
      Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
      for (int i = 0; i < k; ++i) x += es.eigenvectors()(i, 0) * basis[std::size_t(i)];
      result.vector = x;
      if (result.converged) return result;
    }
    prev = q;
    beta_prev = bnorm;
    if (bnorm <= 1e-14 * std::max(scale, 1.0)) break;  // invariant subspace found
    q = w / bnorm;
  }
  if (!result.converged)
    throw NumericalError("eigensolver did not converge within the iteration cap (last value " +
                         format_double(result.value) + ")");
  return result;
}

double pencil_operator_norm(const SparseC& Q, const SparseR& M, double tol, int max_iter,
                            unsigned seed) {
  const Eigen::Index n = Q.rows();
  Eigen::SimplicialLLT<SparseR> llt(M);
  if (llt.info() != Eigen::Success)
    throw NumericalError("Gram matrix is not positive definite");
  const SparseC Mc = M.cast<Complex>();
  auto msolve = [&](const Eigen::VectorXcd& v) {
    return (llt.solve(v.real()).cast<Complex>() + Complex(0, 1) * llt.solve(v.imag()).cast<Complex>())
        .eval();
  };
  auto m_norm2 = [&](const Eigen::VectorXcd& v) {
    return std::abs(Complex(v.adjoint() * (Mc * v)).real());
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::VectorXcd u(n);
  for (Eigen::Index k = 0; k < n; ++k) u[k] = Complex(gauss(rng), 0.0);
  u /= std::sqrt(m_norm2(u));

  SparseC Qh = Q.adjoint();
  double lambda = 0;
  for (int it = 0; it < max_iter; ++it) {
    // B u = M^{-1} Q^H M^{-1} Q u  (self-adjoint, PSD in the M inner product)
    Eigen::VectorXcd w = msolve(Q * u);
    Eigen::VectorXcd v = msolve(Qh * (Mc * w));
    // Rayleigh quotient of B in the M inner product
    double num = std::abs(Complex(u.adjoint() * (Qh * (Mc * w))).real());
    double next = std::sqrt(std::max(0.0, num));
    double vn = std::sqrt(m_norm2(v));
    if (vn == 0) return 0.0;
    v /= vn;
    bool done = std::abs(next - lambda) <= tol * std::max(next, 1e-30);
    lambda = next;
    u = v;
    if (done && it > 3) break;
  }
  return lambda;
}

}  // namespace cornerfem
