#ifndef CORNERFEM_TESTS_TEST_DOMAINS_HPP
#define CORNERFEM_TESTS_TEST_DOMAINS_HPP

#include <cmath>
#include <memory>

#include "geometry/domain.hpp"

namespace cornerfem::testing {

inline Domain unit_square(BcLabel label = BcLabel::Dirichlet) {
  DomainSpec spec;
  spec.vertices = {{Vec2(0, 0), VertexKind::Geometric},
                   {Vec2(1, 0), VertexKind::Geometric},
                   {Vec2(1, 1), VertexKind::Geometric},
                   {Vec2(0, 1), VertexKind::Geometric}};
  for (int k = 0; k < 4; ++k) {
    BoundaryEdge e;
    e.from = k;
    e.to = (k + 1) % 4;
    e.label = label;
    spec.edges.push_back(e);
  }
  return Domain::build(std::move(spec));
}

/// L-shaped domain (-1,1)^2 minus the quadrant {x > 0, y < 0}; the reentrant
/// corner sits at the origin with the first incident edge along +x.
inline Domain l_shape() {
  DomainSpec spec;
  spec.vertices = {{Vec2(0, 0), VertexKind::Geometric},   {Vec2(1, 0), VertexKind::Geometric},
                   {Vec2(1, 1), VertexKind::Geometric},   {Vec2(-1, 1), VertexKind::Geometric},
                   {Vec2(-1, -1), VertexKind::Geometric}, {Vec2(0, -1), VertexKind::Geometric}};
  for (int k = 0; k < 6; ++k) {
    BoundaryEdge e;
    e.from = k;
    e.to = (k + 1) % 6;
    e.label = BcLabel::Dirichlet;
    spec.edges.push_back(e);
  }
  return Domain::build(std::move(spec));
}

/// Unit square with pure Neumann boundary and an artificial vertex at the
/// bottom edge midpoint (hosting coefficient singularities).
inline Domain square_neumann_artificial() {
  DomainSpec spec;
  spec.vertices = {{Vec2(0, 0), VertexKind::Geometric},   {Vec2(0.5, 0), VertexKind::Artificial},
                   {Vec2(1, 0), VertexKind::Geometric},   {Vec2(1, 1), VertexKind::Geometric},
                   {Vec2(0, 1), VertexKind::Geometric}};
  for (int k = 0; k < 5; ++k) {
    BoundaryEdge e;
    e.from = k;
    e.to = (k + 1) % 5;
    e.label = BcLabel::Neumann;
    spec.edges.push_back(e);
  }
  spec.allow_adjacent_neumann = true;
  return Domain::build(std::move(spec));
}

/// Circular sector of the given opening angle and radius about the origin,
/// first edge along +x. Boundary: two straight legs and one arc.
inline Domain sector(double omega, double radius = 2.0, BcLabel label = BcLabel::Dirichlet) {
  DomainSpec spec;
  spec.vertices = {{Vec2(0, 0), VertexKind::Geometric},
                   {Vec2(radius, 0), VertexKind::Geometric},
                   {radius * Vec2(std::cos(omega), std::sin(omega)), VertexKind::Geometric}};
  BoundaryEdge leg0;
  leg0.from = 0;
  leg0.to = 1;
  leg0.label = label;
  BoundaryEdge arc;
  arc.from = 1;
  arc.to = 2;
  arc.label = label;
  arc.curve.type = EdgeCurve::Type::Arc;
  arc.curve.center = Vec2(0, 0);
  arc.curve.radius = radius;
  arc.curve.angle0 = 0.0;
  arc.curve.angle1 = omega;
  BoundaryEdge leg1;
  leg1.from = 2;
  leg1.to = 0;
  leg1.label = label;
  spec.edges = {leg0, arc, leg1};
  return Domain::build(std::move(spec));
}

inline std::shared_ptr<const Domain> shared(Domain d) {
  return std::make_shared<const Domain>(std::move(d));
}

}  // namespace cornerfem::testing

#endif
