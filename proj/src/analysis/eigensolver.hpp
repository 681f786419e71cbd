#ifndef CORNERFEM_ANALYSIS_EIGENSOLVER_HPP
#define CORNERFEM_ANALYSIS_EIGENSOLVER_HPP

#include "fem/assembly.hpp"

namespace cornerfem {

struct EigenResult {
  double value = 0;
  Eigen::VectorXcd vector;
  int iterations = 0;
  bool converged = false;
};

/// Smallest eigenvalue of the Hermitian pencil H x = lambda M x with M real
/// SPD, by Lanczos in the M-inner product with full reorthogonalization.
/// Relative tolerance applies to the Ritz residual |H x - lambda M x|_{M^-1}.
EigenResult smallest_pencil_eigenvalue(const SparseC& H, const SparseR& M, double rel_tol = 1e-8,
                                       int max_iter = 0, unsigned seed = 12345);

/// Operator norm of Q as a map on the M-inner-product space, i.e. the largest
/// singular value of M^{-1/2} Q M^{-1/2}; power iteration, general Q.
double pencil_operator_norm(const SparseC& Q, const SparseR& M, double tol = 1e-6,
                            int max_iter = 300, unsigned seed = 977);

}  // namespace cornerfem

#endif
