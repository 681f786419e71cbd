#ifndef CORNERFEM_MESH_QUADRATURE_HPP
#define CORNERFEM_MESH_QUADRATURE_HPP

#include <array>
#include <vector>

#include "common/util.hpp"

namespace cornerfem {

/// Gauss-Legendre nodes and weights on [0, 1], exact to degree 2n-1.
struct GaussLegendre {
  std::vector<double> points, weights;
  static const GaussLegendre& get(int n);
};

/// Quadrature rule on the reference triangle in barycentric coordinates,
/// exact for the requested polynomial degree. Built from a collapsed
/// Gauss-Legendre product rule: all nodes are strictly interior and all
/// weights positive.
struct TriangleRule {
  struct Node {
    double l0, l1, l2;  // barycentric
    double w;           // weight, sums to 1 (reference area handled by caller)
  };
  std::vector<Node> nodes;
  int degree = 0;
  static const TriangleRule& get(int degree);
};

/// Physical-space quadrature point set for one triangle.
struct MappedQuadrature {
  std::vector<Vec2> points;
  std::vector<double> weights;  // include the Jacobian (sum = triangle area)
};

MappedQuadrature map_rule(const TriangleRule& rule, const Vec2& a, const Vec2& b, const Vec2& c);

/// Splits triangle (a,b,c), with `corner` the index of the vertex hosting a
/// weight singularity, into dyadic rings toward that vertex plus a core
/// triangle: rings at scales 2^-1 .. 2^-rings.
std::vector<std::array<Vec2, 3>> dyadic_split_toward(const Vec2& a, const Vec2& b, const Vec2& c,
                                                     int corner, int rings);

}  // namespace cornerfem

#endif
