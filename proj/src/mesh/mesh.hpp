#ifndef CORNERFEM_MESH_MESH_HPP
#define CORNERFEM_MESH_MESH_HPP

#include <array>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "geometry/domain.hpp"

namespace cornerfem {

struct MeshBoundaryEdge {
  int a = -1, b = -1;  // oriented with the domain interior on the left
  BcLabel label = BcLabel::Dirichlet;
  int parent_edge = 0;
  // curve parameters on the parent edge; NaN when unknown (e.g. file input)
  double ta = std::numeric_limits<double>::quiet_NaN();
  double tb = std::numeric_limits<double>::quiet_NaN();
};

/// Conforming triangulation with boundary labels and per-vertex grading
/// metadata. Immutable after construction.
class Mesh {
public:
  Mesh() = default;
  Mesh(std::vector<Vec2> nodes, std::vector<std::array<int, 3>> triangles,
       std::vector<MeshBoundaryEdge> boundary, std::map<int, double> grading = {});

  int n_nodes() const { return int(nodes_.size()); }
  int n_triangles() const { return int(tris_.size()); }
  int n_boundary_edges() const { return int(bedges_.size()); }

  const Vec2& node(int i) const { return nodes_[std::size_t(i)]; }
  const std::array<int, 3>& triangle(int t) const { return tris_[std::size_t(t)]; }
  const MeshBoundaryEdge& boundary_edge(int e) const { return bedges_[std::size_t(e)]; }
  const std::vector<Vec2>& nodes() const { return nodes_; }
  const std::vector<std::array<int, 3>>& triangles() const { return tris_; }
  const std::vector<MeshBoundaryEdge>& boundary_edges() const { return bedges_; }
  const std::map<int, double>& grading() const { return grading_; }

  double area(int t) const;
  double diameter(int t) const;  // longest edge
  Vec2 barycenter(int t) const;
  double min_angle() const;      // degrees, over all triangles
  double total_area() const;
  double max_diameter() const;
  double min_diameter() const;

  /// Corner coordinates of triangle t.
  std::array<Vec2, 3> corners(int t) const;

  /// Checks conformity, orientation, boundary consistency. Throws on defect.
  void validate() const;

  /// Regular 4-way refinement (midpoint split). Children are emitted in
  /// parent order; input nodes are a prefix of output nodes. When a domain is
  /// given and boundary parameters are known, boundary midpoints are placed
  /// on the parent curve.
  Mesh refined_uniform(const Domain* domain = nullptr) const;

  void write(std::ostream& out) const;
  static Mesh read(std::istream& in);
  void save(const std::string& path) const;
  static Mesh load(const std::string& path);

private:
  std::vector<Vec2> nodes_;
  std::vector<std::array<int, 3>> tris_;
  std::vector<MeshBoundaryEdge> bedges_;
  std::map<int, double> grading_;
};

/// Generates a mesh of `domain` with target size h and per-vertex grading
/// exponents mu in (0, 1] (vertices not listed get mu = 1). Element sizes
/// satisfy h_T <= C h * (r_T / delta0)^{1 - mu} near graded vertices and
/// h_T <= h elsewhere, with C a small constant covering the conformity
/// closure.
Mesh generate_graded_mesh(const Domain& domain, double h,
                          const std::map<int, double>& grading = {},
                          double min_angle_deg = 15.0);

/// True if every node of `coarse` appears in `fine` (tolerance 1e-12).
bool nodes_nested(const Mesh& coarse, const Mesh& fine);

}  // namespace cornerfem

#endif
