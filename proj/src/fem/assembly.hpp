#ifndef CORNERFEM_FEM_ASSEMBLY_HPP
#define CORNERFEM_FEM_ASSEMBLY_HPP

#include <Eigen/Sparse>
#include <functional>

#include "coeffs/coefficients.hpp"
#include "fem/fe_space.hpp"

namespace cornerfem {

using SparseC = Eigen::SparseMatrix<Complex>;
using SparseR = Eigen::SparseMatrix<double>;

/// Neumann datum evaluated at a boundary point with outward unit normal.
using NeumannData = std::function<Complex(const Vec2& x, const Vec2& nu)>;

struct LinearSystem {
  std::shared_ptr<const FeSpace> space;
  SparseC full;                      // B(phi_j, phi_i) over all dofs
  SparseC A;                         // free x free block (symmetric elimination)
  Eigen::VectorXcd F;                // free right-hand side, lifting applied
  Eigen::VectorXcd F_full;           // right-hand side over all dofs
  Eigen::VectorXcd constrained_values;  // Dirichlet values per dof (0 on free)
};

/// Assembles the Dirichlet form of `beta` together with the load
/// F(v) = (f, v) + (h, v)_{Neumann boundary}. Quadrature order defaults to
/// 2 * degree + 4; nodes are strictly interior to elements.
LinearSystem assemble(const CoefficientSet& beta, std::shared_ptr<const FeSpace> space,
                      const FieldPtr& f = nullptr, const NeumannData& h = nullptr,
                      const FieldPtr& dirichlet_data = nullptr, int quad_order = -1);

/// Form matrix only (all dofs); used for perturbation directions.
SparseC assemble_form(const CoefficientSet& beta, const FeSpace& space, int quad_order = -1);

/// H^1 Gram matrix (mass + stiffness) on the free dofs; real SPD.
SparseR h1_gram(const FeSpace& space);

/// Load vector for a plain L^2 + Neumann functional on all dofs.
Eigen::VectorXcd assemble_load(const FeSpace& space, const FieldPtr& f,
                               const NeumannData& h = nullptr, int quad_order = -1);

/// Direct sparse solve with the residual contract |A u - F| <= rtol |F|.
/// Throws NumericalError("not coercive / singular system ...") on failure.
FeFunction solve(const LinearSystem& sys, double rtol = 1e-10);

/// Euclidean relative residual of the free block.
double residual(const LinearSystem& sys, const FeFunction& u);

/// Writes/reads the solution value file ("solution 1" header).
void write_solution(const FeFunction& u, std::ostream& out);
Eigen::VectorXcd read_solution(std::istream& in);

}  // namespace cornerfem

#endif
