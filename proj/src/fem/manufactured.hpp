#ifndef CORNERFEM_FEM_MANUFACTURED_HPP
#define CORNERFEM_FEM_MANUFACTURED_HPP

#include "coeffs/coefficients.hpp"
#include "fem/assembly.hpp"

namespace cornerfem {

/// Exact solution together with the data (f, h) it manufactures under a
/// coefficient set: f = p_beta u in the strong form, h the conormal
/// derivative on Neumann edges.
struct ManufacturedProblem {
  FieldPtr u;
  FieldPtr f;
  NeumannData h;
};

ManufacturedProblem manufactured_problem(const CoefficientSet& beta, FieldPtr u_exact);

/// sin(pi x) sin(pi y).
FieldPtr sine_solution();

/// Harmonic corner function chi(r) r^lambda sin(lambda theta) in the chart of
/// `vertex`, lambda = pi / interior angle, cut off smoothly over [r0, r1].
/// Vanishes on the two incident edges and outside radius r1.
FieldPtr corner_singular_solution(std::shared_ptr<const Domain> domain, int vertex, double r0,
                                  double r1);

/// x y (1-x)(1-y) ((x-px)^2 + (y-py)^2): vanishes on the unit square boundary
/// and quadratically at (px, py); used with inverse-square potentials.
FieldPtr bubble_solution(double px, double py);

/// Polynomial 1 + x + y + x^2 y + x y^2 (generic smooth test function).
FieldPtr polynomial_solution();

}  // namespace cornerfem

#endif
