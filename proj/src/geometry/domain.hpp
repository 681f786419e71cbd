#ifndef CORNERFEM_GEOMETRY_DOMAIN_HPP
#define CORNERFEM_GEOMETRY_DOMAIN_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "common/jet.hpp"
#include "common/util.hpp"

namespace cornerfem {

enum class VertexKind { Geometric, Artificial };
enum class BcLabel { Dirichlet, Neumann };

/// Boundary curve between two vertices: a polyline (possibly a single
/// segment) or a circular arc. Parametrized over t in [0, 1] from the "from"
/// vertex to the "to" vertex.
struct EdgeCurve {
  enum class Type { Polyline, Arc };
  Type type = Type::Polyline;

  // Polyline: full point list including both endpoints.
  std::vector<Vec2> points;

  // Arc: x(t) = center + radius * (cos, sin)(angle0 + t * (angle1 - angle0)).
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
  double angle0 = 0.0, angle1 = 0.0;

  Vec2 eval(double t) const;
  Vec2 tangent(double t) const;  // unit tangent, in direction of increasing t
  double length() const;

  static EdgeCurve segment(const Vec2& a, const Vec2& b);
};

struct BoundaryEdge {
  int from = -1, to = -1;
  BcLabel label = BcLabel::Dirichlet;
  EdgeCurve curve;
};

struct DomainVertex {
  Vec2 pos;
  VertexKind kind = VertexKind::Geometric;
};

/// Per-vertex polar chart: coordinates (r, theta) with r the distance to the
/// vertex and theta measured from the reference direction (the direction of
/// the lower-indexed incident edge leaving the vertex). The angular interval
/// I_p is (0, omega) when that edge is outgoing in the boundary traversal and
/// (-omega, 0) when it is incoming; omega is the interior angle.
struct PolarChart {
  int vertex = -1;
  Vec2 origin = Vec2::Zero();
  Vec2 reference_direction = Vec2::UnitX();
  double theta_min = 0.0, theta_max = 0.0;
  double radius = 0.0;

  double interior_angle() const { return theta_max - theta_min; }
};

/// Raw description used to build a Domain; mirrors the JSON domain file.
struct DomainSpec {
  std::vector<DomainVertex> vertices;
  std::vector<BoundaryEdge> edges;
  std::optional<double> delta0;
  bool allow_adjacent_neumann = false;
};

/// Curvilinear polygonal domain with labeled boundary, weight function
/// r_Omega and per-vertex polar charts. Immutable after construction.
class Domain {
public:
  static Domain build(DomainSpec spec);
  static Domain load_json(const std::string& path);
  static Domain from_json_text(const std::string& text);

  int n_vertices() const { return int(vertices_.size()); }
  int n_edges() const { return int(edges_.size()); }
  const DomainVertex& vertex(int i) const { return vertices_[std::size_t(i)]; }
  const BoundaryEdge& edge(int i) const { return edges_[std::size_t(i)]; }
  const std::vector<DomainVertex>& vertices() const { return vertices_; }
  const std::vector<BoundaryEdge>& edges() const { return edges_; }
  double delta0() const { return delta0_; }
  bool allow_adjacent_neumann() const { return allow_adjacent_neumann_; }

  /// Weight r_Omega(x) = min(delta0, distance to nearest vertex).
  double weight(const Vec2& x) const;

  /// Jet of r_Omega at x (one-sided on the clip circle / equidistant sets).
  Jet weight_jet(const Vec2& x, int order) const;

  /// Index of the nearest vertex; optionally returns the distance.
  int nearest_vertex(const Vec2& x, double* dist = nullptr) const;

  const PolarChart& chart(int vertex) const { return charts_[std::size_t(vertex)]; }
  const std::vector<PolarChart>& charts() const { return charts_; }

  /// Polar coordinates of x in the chart at `vertex`; requires
  /// |x - vertex| < delta0. theta lies in the chart interval.
  std::pair<double, double> polar(int vertex, const Vec2& x) const;

  /// Inverse chart map.
  Vec2 from_polar(int vertex, double r, double theta) const;

  /// Jets of (r, theta) about `vertex` at x (x away from the vertex).
  std::pair<Jet, Jet> polar_jets(int vertex, const Vec2& x, int order) const;

  double interior_angle(int vertex) const { return chart(vertex).interior_angle(); }
  double alpha_max() const;

  /// Chart angle of the direction (x - vertex), usable at any distance.
  double chart_angle(int vertex, const Vec2& x) const;

  /// Point-in-domain test (crossing number on a sampled boundary polygon).
  bool contains(const Vec2& x) const;

private:
  Domain() = default;
  void validate_and_finish();

  std::vector<DomainVertex> vertices_;
  std::vector<BoundaryEdge> edges_;
  std::vector<PolarChart> charts_;
  std::vector<std::pair<Vec2, Vec2>> boundary_segments_;  // sampled, for contains()
  double delta0_ = 0.0;
  bool allow_adjacent_neumann_ = false;
};

const char* to_string(BcLabel label);
BcLabel bc_label_from_string(const std::string& s);

}  // namespace cornerfem

#endif
