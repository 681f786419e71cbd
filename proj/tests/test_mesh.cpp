#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mesh/mesh.hpp"
#include "mesh/quadrature.hpp"
#include "test_domains.hpp"

using namespace cornerfem;
using cornerfem::testing::l_shape;
using cornerfem::testing::unit_square;

TEST_CASE("quasi-uniform square mesh") {
  Domain d = unit_square();
  Mesh m = generate_graded_mesh(d, 0.25);
  m.validate();
  CHECK(m.max_diameter() <= 0.25 + 1e-12);
  CHECK(m.max_diameter() / m.min_diameter() <= 4.0);
  CHECK(m.total_area() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(m.min_angle() >= 15.0);
}

TEST_CASE("graded L-shape mesh: innermost layer scaling") {
  Domain d = l_shape();
  double h = 0.125;
  Mesh m = generate_graded_mesh(d, h, {{0, 2.0 / 3.0}});
  m.validate();
  CHECK(m.total_area() == doctest::Approx(3.0).epsilon(1e-10));

  // every element satisfies the graded size law (C covers the green-closure
  // children, whose barycenters sit slightly closer to the vertex)
  double delta0 = d.delta0();
  for (int t = 0; t < m.n_triangles(); ++t) {
    double r = m.barycenter(t).norm();
    double target = h * std::pow(std::min(1.0, r / delta0), 1.0 / 3.0);
    CHECK(m.diameter(t) <= 1.25 * target);
  }
  // elements touching the reentrant vertex have diameter <= delta0^{-1/2} h^{3/2}
  double innermost = 0;
  for (int t = 0; t < m.n_triangles(); ++t) {
    auto c = m.corners(t);
    for (const Vec2& p : c)
      if (p.norm() < 1e-14) innermost = std::max(innermost, m.diameter(t));
  }
  CHECK(innermost > 0);
  CHECK(innermost <= std::pow(h, 1.5) / std::sqrt(delta0) * (1 + 1e-12));
}

TEST_CASE("triangle count grows like h^-2") {
  Domain d = l_shape();
  std::vector<double> hs = {0.4, 0.2, 0.1, 0.05};
  std::vector<double> counts;
  for (double h : hs)
    counts.push_back(double(generate_graded_mesh(d, h, {{0, 2.0 / 3.0}}).n_triangles()));
  // least-squares slope of log(count) against log(1/h)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = int(hs.size());
  for (int k = 0; k < n; ++k) {
    double x = std::log(1.0 / hs[std::size_t(k)]), y = std::log(counts[std::size_t(k)]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("grading ratio grows without bound for mu < 1") {
  Domain d = l_shape();
  double r1 = 0, r2 = 0;
  {
    Mesh m = generate_graded_mesh(d, 0.2, {{0, 0.5}});
    r1 = m.max_diameter() / m.min_diameter();
  }
  {
    Mesh m = generate_graded_mesh(d, 0.05, {{0, 0.5}});
    r2 = m.max_diameter() / m.min_diameter();
  }
  CHECK(r2 >= 2.0 * r1);
}

TEST_CASE("invalid grading is rejected") {
  Domain d = unit_square();
  CHECK_THROWS_AS(generate_graded_mesh(d, 0.25, {{0, 0.0}}), ValidationError);
  CHECK_THROWS_AS(generate_graded_mesh(d, 0.25, {{0, 1.5}}), ValidationError);
  CHECK_THROWS_AS(generate_graded_mesh(d, -1.0), ValidationError);
}

TEST_CASE("uniform refinement: counts, labels, nesting") {
  Domain d = unit_square();
  // two-triangle square mesh
  std::vector<Vec2> nodes = {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)};
  std::vector<std::array<int, 3>> tris = {{0, 1, 2}, {0, 2, 3}};
  std::vector<MeshBoundaryEdge> bed;
  for (int k = 0; k < 4; ++k) {
    MeshBoundaryEdge be;
    be.a = k;
    be.b = (k + 1) % 4;
    be.label = (k == 0) ? BcLabel::Neumann : BcLabel::Dirichlet;
    be.parent_edge = k;
    be.ta = 0.0;
    be.tb = 1.0;
    bed.push_back(be);
  }
  Mesh m(nodes, tris, bed);
  m.validate();

  Mesh f = m.refined_uniform(&d);
  f.validate();
  CHECK(f.n_triangles() == 8);
  CHECK(f.n_nodes() == 9);
  CHECK(f.n_boundary_edges() == 8);
  int neumann = 0;
  for (const auto& be : f.boundary_edges())
    if (be.label == BcLabel::Neumann) ++neumann;
  CHECK(neumann == 2);  // children of the one Neumann edge

  Mesh f2 = f.refined_uniform(&d);
  CHECK(nodes_nested(f, f2));
  CHECK(nodes_nested(m, f2));
  CHECK(f2.min_angle() >= m.min_angle() - 1e-12);
}

TEST_CASE("mesh file round trip is bit-exact") {
  Domain d = l_shape();
  Mesh m = generate_graded_mesh(d, 0.3, {{0, 0.7}});
  std::ostringstream first;
  m.write(first);
  std::istringstream in(first.str());
  Mesh m2 = Mesh::read(in);
  std::ostringstream second;
  m2.write(second);
  CHECK(first.str() == second.str());
}

TEST_CASE("mesh file validation errors") {
  std::istringstream bad_header("polymess 1\n1 0 0\n0 0\n");
  CHECK_THROWS_WITH_AS(Mesh::read(bad_header), doctest::Contains("malformed header"),
                       ValidationError);

  std::istringstream bad_index("polymesh 1\n3 1 0\n0 0\n1 0\n0 1\n0 1 -1\n");
  CHECK_THROWS_WITH_AS(Mesh::read(bad_index), doctest::Contains("index out of range"),
                       ValidationError);

  std::istringstream zero_area("polymesh 1\n3 1 0\n0 0\n1 0\n2 0\n0 1 2\n");
  CHECK_THROWS_WITH_AS(Mesh::read(zero_area), doctest::Contains("zero-area"), ValidationError);

  // repeated node is tolerated; a triangle referencing it is accepted
  std::istringstream dup(
      "polymesh 1\n4 1 0\n0 0\n1 0\n0 1\n0 0\n3 1 2\n");
  Mesh m = Mesh::read(dup);
  CHECK(m.n_nodes() == 4);
  CHECK(m.area(0) > 0);
}

TEST_CASE("sector mesh with arc boundary approximates the area") {
  Domain d = cornerfem::testing::sector(1.5 * M_PI);
  Mesh m = generate_graded_mesh(d, 0.1);
  m.validate();
  double exact = 0.5 * 2.0 * 2.0 * 1.5 * M_PI;
  CHECK(m.total_area() == doctest::Approx(exact).epsilon(2e-4));
  // boundary midpoints sit on the arc after refinement
  Mesh f = m.refined_uniform(&d);
  for (const auto& be : f.boundary_edges()) {
    if (d.edge(be.parent_edge).curve.type != EdgeCurve::Type::Arc) continue;
    CHECK(f.node(be.a).norm() == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("triangle quadrature integrates polynomials exactly") {
  const TriangleRule& rule = TriangleRule::get(8);
  // reference triangle (0,0),(1,0),(0,1): integral of x^a y^b = a! b! / (a+b+2)!
  auto integral = [&](int a, int b) {
    MappedQuadrature q = map_rule(rule, Vec2(0, 0), Vec2(1, 0), Vec2(0, 1));
    double s = 0;
    for (std::size_t k = 0; k < q.points.size(); ++k)
      s += q.weights[k] * std::pow(q.points[k].x(), a) * std::pow(q.points[k].y(), b);
    return s;
  };
  auto exact = [](int a, int b) {
    auto fact = [](int n) {
      double f = 1;
      for (int k = 2; k <= n; ++k) f *= k;
      return f;
    };
    return fact(a) * fact(b) / fact(a + b + 2);
  };
  for (int a = 0; a <= 8; ++a)
    for (int b = 0; a + b <= 8; ++b)
      CHECK(integral(a, b) == doctest::Approx(exact(a, b)).epsilon(1e-12));
}
