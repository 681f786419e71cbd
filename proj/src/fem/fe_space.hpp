#ifndef CORNERFEM_FEM_FE_SPACE_HPP
#define CORNERFEM_FEM_FE_SPACE_HPP

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "coeffs/field.hpp"
#include "mesh/mesh.hpp"

namespace cornerfem {

/// Lagrange P1/P2 space on a triangulation with a Dirichlet mask derived from
/// the boundary labels. Dof order: mesh nodes first, then (for P2) edge
/// midpoints in global edge order.
class FeSpace {
public:
  FeSpace(std::shared_ptr<const Mesh> mesh, int degree);

  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  int degree() const { return degree_; }
  int n_dofs() const { return n_dofs_; }
  int n_free() const { return n_free_; }
  int n_local() const { return degree_ == 1 ? 3 : 6; }

  Vec2 dof_point(int dof) const;
  bool is_dirichlet(int dof) const { return dirichlet_[std::size_t(dof)]; }
  /// Index into the free-dof numbering, or -1 when constrained.
  int free_index(int dof) const { return free_index_[std::size_t(dof)]; }
  /// Inverse of free_index.
  int dof_of_free(int k) const { return free_dofs_[std::size_t(k)]; }

  int element_dof(int t, int local) const;

  /// P2 midpoint dof of mesh edge (a, b); -1 for P1 or unknown edge.
  int edge_dof(int a, int b) const;

  /// Values and gradients of all local basis functions at a physical point
  /// of element t.
  void basis(int t, const Vec2& x, double* values, Vec2* gradients) const;

  /// Exact jet of local basis function `local` of element t.
  Jet basis_jet(int t, int local, const Vec2& x, int order) const;

private:
  struct ElementGeometry {
    Vec2 grad_lambda[3];  // gradients of barycentric coordinates
    double lambda0[3];    // affine offsets: lambda_k(x) = lambda0 + grad . x
  };
  const ElementGeometry& geom(int t) const { return geom_[std::size_t(t)]; }

  std::shared_ptr<const Mesh> mesh_;
  int degree_;
  int n_dofs_ = 0, n_free_ = 0;
  std::map<std::pair<int, int>, int> edge_index_;       // P2 edge dofs
  std::vector<std::array<int, 3>> element_edge_dofs_;   // per element, P2
  std::vector<bool> dirichlet_;
  std::vector<int> free_index_;
  std::vector<int> free_dofs_;
  std::vector<Vec2> dof_points_;
  std::vector<ElementGeometry> geom_;
};

/// Finite element function: coefficient vector over the global dofs.
struct FeFunction {
  std::shared_ptr<const FeSpace> space;
  Eigen::VectorXcd values;

  /// Exact polynomial jet of the function restricted to element t. Requesting
  /// derivatives beyond the polynomial degree simply yields zeros there.
  Jet element_jet(int t, const Vec2& x, int order) const;
  Complex eval(int t, const Vec2& x) const { return element_jet(t, x, 0).value(); }

  /// Nodal interpolation of a closed-form field onto the space.
  static FeFunction interpolate(std::shared_ptr<const FeSpace> space, const FieldPtr& u);

  /// Re-interpolates this function onto a space over a (finer, nested) mesh
  /// whose elements are children of `this` mesh's elements in refinement
  /// order (4 children per parent).
  FeFunction prolong(std::shared_ptr<const FeSpace> fine) const;
};

}  // namespace cornerfem

#endif
