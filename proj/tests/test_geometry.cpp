#include <doctest.h>

#include <cmath>
#include <random>

#include "geometry/domain.hpp"
#include "test_domains.hpp"

using namespace cornerfem;
using cornerfem::testing::l_shape;
using cornerfem::testing::sector;
using cornerfem::testing::unit_square;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("unit square: vertices, delta0, angles") {
  Domain d = unit_square();
  CHECK(d.n_vertices() == 4);
  CHECK(d.delta0() == doctest::Approx(0.5));
  for (int v = 0; v < 4; ++v) CHECK(d.interior_angle(v) == doctest::Approx(kPi / 2));
}

TEST_CASE("L-shape: reentrant angle and angle sum") {
  Domain d = l_shape();
  CHECK(d.interior_angle(0) == doctest::Approx(1.5 * kPi));
  CHECK(d.alpha_max() == doctest::Approx(1.5 * kPi));
  double sum = 0;
  for (int v = 0; v < d.n_vertices(); ++v) sum += d.interior_angle(v);
  CHECK(sum == doctest::Approx((d.n_vertices() - 2) * kPi));  // simple polygon
}

TEST_CASE("adjacent Neumann edges rejected unless allowed") {
  DomainSpec spec;
  spec.vertices = {{Vec2(0, 0), VertexKind::Geometric},
                   {Vec2(1, 0), VertexKind::Geometric},
                   {Vec2(1, 1), VertexKind::Geometric},
                   {Vec2(0, 1), VertexKind::Geometric}};
  for (int k = 0; k < 4; ++k) {
    BoundaryEdge e;
    e.from = k;
    e.to = (k + 1) % 4;
    e.label = (k <= 1) ? BcLabel::Neumann : BcLabel::Dirichlet;
    spec.edges.push_back(e);
  }
  CHECK_THROWS_WITH_AS(Domain::build(spec), doctest::Contains("adjacent Neumann edges"),
                       ValidationError);
  spec.allow_adjacent_neumann = true;
  CHECK_NOTHROW(Domain::build(spec));
}

TEST_CASE("weight function values") {
  Domain lsh = l_shape();
  CHECK(lsh.weight(Vec2(0, 0)) == doctest::Approx(0.0));
  Domain sq = unit_square();
  CHECK(sq.weight(Vec2(0.5, 0.5)) == doctest::Approx(0.5));  // clipped at delta0
  CHECK(sq.weight(Vec2(0.1, 0.0)) == doctest::Approx(0.1));
}

TEST_CASE("weight is 1-Lipschitz and positive off vertices") {
  Domain d = l_shape();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(-1, 1), uy(-1, 1);
  auto inside = [](const Vec2& p) {
    bool box = p.x() > -1 && p.x() < 1 && p.y() > -1 && p.y() < 1;
    return box && !(p.x() >= 0 && p.y() <= 0);
  };
  int done = 0;
  while (done < 500) {
    Vec2 p(ux(rng), uy(rng)), q(ux(rng), uy(rng));
    if (!inside(p) || !inside(q)) continue;
    ++done;
    CHECK(std::abs(d.weight(p) - d.weight(q)) <= (p - q).norm() + 1e-14);
    CHECK(d.weight(p) > 0);
    CHECK(d.weight(p) <= d.delta0() + 1e-14);
  }
}

TEST_CASE("polar chart at the reentrant vertex") {
  Domain d = l_shape();
  // first incident edge at vertex 0 runs along +x
  auto [r1, t1] = d.polar(0, Vec2(0.2, 0.0));
  CHECK(r1 == doctest::Approx(0.2));
  CHECK(t1 == doctest::Approx(0.0));
  auto [r2, t2] = d.polar(0, Vec2(0.0, 0.1));
  CHECK(r2 == doctest::Approx(0.1));
  CHECK(t2 == doctest::Approx(kPi / 2));
  CHECK_THROWS_AS(d.polar(0, Vec2(0.9, 0.9)), ValidationError);
}

TEST_CASE("polar chart round trip") {
  Domain d = l_shape();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ur(1e-6, 1.0), ut(0.0, 1.0);
  const PolarChart& ch = d.chart(0);
  for (int k = 0; k < 100; ++k) {
    double r = ur(rng) * d.delta0() * 0.999;
    double theta = ch.theta_min + ut(rng) * ch.interior_angle();
    Vec2 x = d.from_polar(0, r, theta);
    auto [r2, t2] = d.polar(0, x);
    Vec2 x2 = d.from_polar(0, r2, t2);
    CHECK((x - x2).norm() <= 1e-14 * d.delta0());
  }
}

TEST_CASE("artificial vertex on a straight edge has angle pi") {
  Domain d = cornerfem::testing::square_neumann_artificial();
  CHECK(d.interior_angle(1) == doctest::Approx(kPi));
}

TEST_CASE("charts cover boundary points near vertices exactly once") {
  Domain d = l_shape();
  // walk the boundary, sample points, count charts containing each
  for (int e = 0; e < d.n_edges(); ++e) {
    for (int k = 1; k < 40; ++k) {
      Vec2 p = d.edge(e).curve.eval(k / 40.0);
      int within = 0;
      for (int v = 0; v < d.n_vertices(); ++v)
        if ((p - d.vertex(v).pos).norm() < d.delta0()) ++within;
      CHECK(within <= 1);
    }
  }
}

TEST_CASE("sector domain with an arc edge") {
  Domain d = sector(1.5 * kPi);
  CHECK(d.interior_angle(0) == doctest::Approx(1.5 * kPi));
  CHECK(d.delta0() == doctest::Approx(1.0));  // min pairwise distance is 2
  CHECK(d.weight(Vec2(0.25, 0.25)) == doctest::Approx(std::sqrt(2.0) * 0.25));
}

TEST_CASE("polar jets match analytic derivatives") {
  Domain d = l_shape();
  Vec2 x(0.13, 0.21);
  auto [rj, tj] = d.polar_jets(0, x, 2);
  double r = x.norm();
  CHECK(rj.value().real() == doctest::Approx(r));
  CHECK(rj.derivative(1, 0).real() == doctest::Approx(x.x() / r));
  CHECK(rj.derivative(0, 1).real() == doctest::Approx(x.y() / r));
  CHECK(tj.derivative(1, 0).real() == doctest::Approx(-x.y() / (r * r)));
  CHECK(tj.derivative(0, 1).real() == doctest::Approx(x.x() / (r * r)));
  // second derivatives of r: (y^2, -xy; -xy, x^2)/r^3
  CHECK(rj.derivative(2, 0).real() == doctest::Approx(x.y() * x.y() / (r * r * r)));
  CHECK(rj.derivative(1, 1).real() == doctest::Approx(-x.x() * x.y() / (r * r * r)));
}

TEST_CASE("domain JSON round trip") {
  const char* text = R"({
    "vertices": [[0,0],[1,0],[1,1],[0,1,"artificial"]],
    "edges": [
      {"from":0,"to":1,"label":"D"},
      {"from":1,"to":2,"label":"Neumann"},
      {"from":2,"to":3,"label":"D"},
      {"from":3,"to":0,"label":"D"}
    ],
    "delta0": 0.25
  })";
  Domain d = Domain::from_json_text(text);
  CHECK(d.n_vertices() == 4);
  CHECK(d.vertex(3).kind == VertexKind::Artificial);
  CHECK(d.edge(1).label == BcLabel::Neumann);
  CHECK(d.delta0() == doctest::Approx(0.25));
}

TEST_CASE("open loop and self-intersection are rejected") {
  DomainSpec open_spec;
  open_spec.vertices = {{Vec2(0, 0), VertexKind::Geometric},
                        {Vec2(1, 0), VertexKind::Geometric},
                        {Vec2(1, 1), VertexKind::Geometric}};
  BoundaryEdge e01;
  e01.from = 0;
  e01.to = 1;
  BoundaryEdge e12;
  e12.from = 1;
  e12.to = 2;
  open_spec.edges = {e01, e12};
  CHECK_THROWS_AS(Domain::build(open_spec), ValidationError);

  DomainSpec bow;  // bow-tie: self intersecting
  bow.vertices = {{Vec2(0, 0), VertexKind::Geometric},
                  {Vec2(1, 1), VertexKind::Geometric},
                  {Vec2(1, 0), VertexKind::Geometric},
                  {Vec2(0, 1), VertexKind::Geometric}};
  for (int k = 0; k < 4; ++k) {
    BoundaryEdge e;
    e.from = k;
    e.to = (k + 1) % 4;
    bow.edges.push_back(e);
  }
  CHECK_THROWS_AS(Domain::build(bow), ValidationError);
}
