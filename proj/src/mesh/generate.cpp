#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "mesh/mesh.hpp"

namespace cornerfem {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::pair<int, int> sorted_pair(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

struct BSeg {
  BcLabel label;
  int parent;
  double ta, tb;  // oriented along the parent curve; node order follows ta < tb
  int na, nb;     // node ids at ta and tb
};

struct Builder {
  const Domain& dom;
  std::vector<Vec2> nodes;
  struct Tri {
    std::array<int, 3> v;
    bool alive = true;
  };
  std::vector<Tri> tris;
  std::map<std::pair<int, int>, int> midpoint;
  std::map<std::pair<int, int>, BSeg> bsegs;

  explicit Builder(const Domain& d) : dom(d) {}

  int add_node(const Vec2& p) {
    nodes.push_back(p);
    return int(nodes.size()) - 1;
  }

  double tri_area(const std::array<int, 3>& t) const {
    return 0.5 * cross2(nodes[std::size_t(t[1])] - nodes[std::size_t(t[0])],
                        nodes[std::size_t(t[2])] - nodes[std::size_t(t[0])]);
  }

  void add_tri(int a, int b, int c) {
    Tri t{{a, b, c}, true};
    if (tri_area(t.v) <= 0) throw NumericalError("mesh generator produced a degenerate triangle");
    tris.push_back(t);
  }

  int get_midpoint(int a, int b) {
    auto key = sorted_pair(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    Vec2 p = 0.5 * (nodes[std::size_t(a)] + nodes[std::size_t(b)]);
    auto bit = bsegs.find(key);
    int id;
    if (bit != bsegs.end()) {
      BSeg seg = bit->second;
      double tm = 0.5 * (seg.ta + seg.tb);
      p = dom.edge(seg.parent).curve.eval(tm);
      id = add_node(p);
      bsegs.erase(bit);
      int lo = seg.na, hi = seg.nb;
      bsegs[sorted_pair(lo, id)] = {seg.label, seg.parent, seg.ta, tm, lo, id};
      bsegs[sorted_pair(id, hi)] = {seg.label, seg.parent, tm, seg.tb, id, hi};
    } else {
      id = add_node(p);
    }
    midpoint[key] = id;
    return id;
  }

  bool edge_has_midpoint(int a, int b) const { return midpoint.count(sorted_pair(a, b)) > 0; }

  void red_refine(std::size_t t) {
    auto v = tris[t].v;
    tris[t].alive = false;
    int m01 = get_midpoint(v[0], v[1]);
    int m12 = get_midpoint(v[1], v[2]);
    int m20 = get_midpoint(v[2], v[0]);
    add_tri(v[0], m01, m20);
    add_tri(m01, v[1], m12);
    add_tri(m20, m12, v[2]);
    add_tri(m01, m12, m20);
  }
};

// Ear clipping of a simple polygon given as node indices (counterclockwise).
// Flat (collinear) vertices are skipped as ear tips; among valid ears the one
// with the best minimum angle is clipped, which keeps coarse quality decent.
std::vector<std::array<int, 3>> ear_clip(const std::vector<Vec2>& pts, std::vector<int> poly) {
  std::vector<std::array<int, 3>> out;
  auto at = [&](std::size_t k) { return pts[std::size_t(poly[k % poly.size()])]; };

  while (poly.size() > 3) {
    std::size_t n = poly.size();
    int best = -1;
    double best_quality = -1.0;
    for (std::size_t k = 0; k < n; ++k) {
      Vec2 a = at(k + n - 1), b = at(k), c = at(k + 1);
      double ar = 0.5 * cross2(b - a, c - b);
      if (ar <= 1e-14) continue;  // reflex or flat tip
      bool contains = false;
      for (std::size_t j = 0; j < n && !contains; ++j) {
        if (j == k || j == (k + n - 1) % n || j == (k + 1) % n) continue;
        Vec2 p = at(j);
        double d0 = cross2(b - a, p - a);
        double d1 = cross2(c - b, p - b);
        double d2 = cross2(a - c, p - c);
        if (d0 > -1e-14 && d1 > -1e-14 && d2 > -1e-14) contains = true;
      }
      if (contains) continue;
      double la = (b - a).norm(), lb = (c - b).norm(), lc = (a - c).norm();
      double quality = ar / (la * la + lb * lb + lc * lc);  // scale-free shape measure
      if (quality > best_quality) {
        best_quality = quality;
        best = int(k);
      }
    }
    if (best < 0) throw NumericalError("ear clipping failed (is the boundary a simple polygon?)");
    std::size_t k = std::size_t(best);
    out.push_back({poly[(k + n - 1) % n], poly[k], poly[(k + 1) % n]});
    poly.erase(poly.begin() + best);
  }
  out.push_back({poly[0], poly[1], poly[2]});
  return out;
}

// Lawson flips toward the constrained Delaunay triangulation. Boundary
// segments are never flipped.
void delaunay_flips(Builder& bld) {
  auto incircle = [&](int ia, int ib, int ic, int id) {
    // positive when d is strictly inside the circumcircle of ccw (a,b,c)
    const Vec2 &a = bld.nodes[std::size_t(ia)], &b = bld.nodes[std::size_t(ib)];
    const Vec2 &c = bld.nodes[std::size_t(ic)], &d = bld.nodes[std::size_t(id)];
    long double ax = a.x() - d.x(), ay = a.y() - d.y();
    long double bx = b.x() - d.x(), by = b.y() - d.y();
    long double cx = c.x() - d.x(), cy = c.y() - d.y();
    long double det = (ax * ax + ay * ay) * (bx * cy - by * cx) -
                      (bx * bx + by * by) * (ax * cy - ay * cx) +
                      (cx * cx + cy * cy) * (ax * by - ay * bx);
    return det > 1e-24L;
  };

  for (int pass = 0; pass < 256; ++pass) {
    // adjacency: sorted edge -> list of (tri, opposite vertex)
    std::map<std::pair<int, int>, std::vector<std::pair<std::size_t, int>>> adj;
    for (std::size_t t = 0; t < bld.tris.size(); ++t) {
      if (!bld.tris[t].alive) continue;
      auto v = bld.tris[t].v;
      for (int k = 0; k < 3; ++k)
        adj[sorted_pair(v[std::size_t(k)], v[std::size_t((k + 1) % 3)])].push_back(
            {t, v[std::size_t((k + 2) % 3)]});
    }
    auto has_directed_edge = [&](std::size_t t, int a, int b) {
      const auto& v = bld.tris[t].v;
      for (int k = 0; k < 3; ++k)
        if (v[std::size_t(k)] == a && v[std::size_t((k + 1) % 3)] == b) return true;
      return false;
    };
    bool flipped = false;
    for (auto& [edge, owners] : adj) {
      if (owners.size() != 2) continue;
      if (bld.bsegs.count(edge)) continue;  // constrained
      auto [t1, c1] = owners[0];
      auto [t2, c2] = owners[1];
      if (!bld.tris[t1].alive || !bld.tris[t2].alive) continue;
      int a = edge.first, b = edge.second;
      // orient so that t1 owns the directed edge a->b (c1 on its left)
      if (!has_directed_edge(t1, a, b)) std::swap(a, b);
      if (!incircle(a, b, c1, c2) && !incircle(b, a, c2, c1)) continue;
      // replacing the diagonal is only valid when the quad (a, c2, b, c1) is
      // convex, i.e. both new triangles come out with positive area
      std::array<int, 3> n1{a, c2, c1}, n2{b, c1, c2};
      if (bld.tri_area(n1) <= 1e-14 || bld.tri_area(n2) <= 1e-14) continue;
      bld.tris[t1].alive = false;
      bld.tris[t2].alive = false;
      bld.add_tri(n1[0], n1[1], n1[2]);
      bld.add_tri(n2[0], n2[1], n2[2]);
      flipped = true;
      break;  // adjacency is stale after a flip; rebuild
    }
    if (!flipped) return;
  }
}

}  // namespace

Mesh generate_graded_mesh(const Domain& domain, double h, const std::map<int, double>& grading,
                          double min_angle_deg) {
  if (!(h > 0)) throw ValidationError("mesh size h must be positive");
  for (const auto& [v, mu] : grading) {
    if (v < 0 || v >= domain.n_vertices()) throw ValidationError("grading vertex index out of range");
    if (!(mu > 0.0) || mu > 1.0) throw ValidationError("grading exponent mu must lie in (0, 1]");
  }

  Builder bld(domain);

  // boundary discretization: domain vertices, polyline breakpoints, and a
  // coarse chord sampling of arcs; finer sizing comes from refinement
  std::vector<int> vertex_node(std::size_t(domain.n_vertices()), -1);
  for (int v = 0; v < domain.n_vertices(); ++v)
    vertex_node[std::size_t(v)] = bld.add_node(domain.vertex(v).pos);

  // trace the boundary loops; only a single loop is supported here
  std::vector<int> next_edge(std::size_t(domain.n_vertices()), -1);
  for (int e = 0; e < domain.n_edges(); ++e) next_edge[std::size_t(domain.edge(e).from)] = e;
  std::vector<bool> seen(std::size_t(domain.n_vertices()), false);

  std::vector<int> poly;  // ccw node loop
  {
    int v = 0;
    do {
      if (seen[std::size_t(v)]) throw ValidationError("boundary loop tracing failed");
      seen[std::size_t(v)] = true;
      int e = next_edge[std::size_t(v)];
      const BoundaryEdge& be = domain.edge(e);
      // sample points along the edge: param breaks excluding the endpoint 1
      std::vector<double> params;
      if (be.curve.type == EdgeCurve::Type::Arc) {
        int ns = std::max(2, int(std::ceil(std::abs(be.curve.angle1 - be.curve.angle0) / (kPi / 4))));
        for (int k = 0; k < ns; ++k) params.push_back(double(k) / ns);
      } else {
        double total = be.curve.length();
        double acc = 0;
        params.push_back(0.0);
        for (std::size_t k = 0; k + 2 < be.curve.points.size(); ++k) {
          acc += (be.curve.points[k + 1] - be.curve.points[k]).norm();
          params.push_back(acc / total);
        }
      }
      int prev_node = vertex_node[std::size_t(v)];
      double prev_t = 0.0;
      poly.push_back(prev_node);
      for (std::size_t k = 1; k < params.size(); ++k) {
        int id = bld.add_node(be.curve.eval(params[k]));
        bld.bsegs[sorted_pair(prev_node, id)] = {be.label, e, prev_t, params[k], prev_node, id};
        poly.push_back(id);
        prev_node = id;
        prev_t = params[k];
      }
      int end_node = vertex_node[std::size_t(be.to)];
      bld.bsegs[sorted_pair(prev_node, end_node)] = {be.label, e, prev_t, 1.0, prev_node, end_node};
      v = be.to;
    } while (v != 0);
  }
  for (int v = 0; v < domain.n_vertices(); ++v)
    if (!seen[std::size_t(v)])
      throw ValidationError("mesh generator supports a single boundary loop (no holes)");

  for (auto& t : ear_clip(bld.nodes, poly)) bld.add_tri(t[0], t[1], t[2]);
  delaunay_flips(bld);

  // size-driven refinement
  const double delta0 = domain.delta0();
  auto target = [&](const Vec2& x) {
    double f = 1.0;
    for (const auto& [v, mu] : grading) {
      if (mu >= 1.0) continue;
      double r = (x - domain.vertex(v).pos).norm();
      double ratio = std::min(1.0, r / delta0);
      f = std::min(f, std::pow(ratio, 1.0 - mu));
    }
    return h * f;
  };
  auto diam = [&](const Builder::Tri& t) {
    const Vec2 &a = bld.nodes[std::size_t(t.v[0])], &b = bld.nodes[std::size_t(t.v[1])],
               &c = bld.nodes[std::size_t(t.v[2])];
    return std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
  };
  auto bary = [&](const Builder::Tri& t) {
    return Vec2((bld.nodes[std::size_t(t.v[0])] + bld.nodes[std::size_t(t.v[1])] +
                 bld.nodes[std::size_t(t.v[2])]) / 3.0);
  };

  for (int pass = 0; pass < 64; ++pass) {
    bool any = false;
    std::size_t n = bld.tris.size();
    for (std::size_t t = 0; t < n; ++t) {
      if (!bld.tris[t].alive) continue;
      if (diam(bld.tris[t]) > target(bary(bld.tris[t]))) {
        bld.red_refine(t);
        any = true;
      }
    }
    // conformity: a triangle with two or more split edges is refined too
    bool changed = true;
    while (changed) {
      changed = false;
      std::size_t m = bld.tris.size();
      for (std::size_t t = 0; t < m; ++t) {
        if (!bld.tris[t].alive) continue;
        auto v = bld.tris[t].v;
        int cnt = bld.edge_has_midpoint(v[0], v[1]) + bld.edge_has_midpoint(v[1], v[2]) +
                  bld.edge_has_midpoint(v[2], v[0]);
        if (cnt >= 2) {
          bld.red_refine(t);
          changed = true;
        }
      }
    }
    if (!any) break;
    if (pass == 63) throw NumericalError("graded refinement did not terminate");
  }

  // green closure: bisect triangles with exactly one split edge
  {
    std::size_t n = bld.tris.size();
    for (std::size_t t = 0; t < n; ++t) {
      if (!bld.tris[t].alive) continue;
      auto v = bld.tris[t].v;
      for (int k = 0; k < 3; ++k) {
        int a = v[std::size_t(k)], b = v[std::size_t((k + 1) % 3)], c = v[std::size_t((k + 2) % 3)];
        auto it = bld.midpoint.find(sorted_pair(a, b));
        if (it == bld.midpoint.end()) continue;
        int m = it->second;
        bld.tris[t].alive = false;
        bld.add_tri(a, m, c);
        bld.add_tri(m, b, c);
        break;
      }
    }
  }

  // assemble the final mesh
  std::vector<std::array<int, 3>> tris;
  for (const auto& t : bld.tris)
    if (t.alive) tris.push_back(t.v);

  std::vector<MeshBoundaryEdge> bedges;
  for (const auto& [key, seg] : bld.bsegs) {
    (void)key;
    MeshBoundaryEdge be;
    be.a = seg.na;
    be.b = seg.nb;
    be.label = seg.label;
    be.parent_edge = seg.parent;
    be.ta = seg.ta;
    be.tb = seg.tb;
    bedges.push_back(be);
  }

  std::map<int, double> grading_full = grading;
  Mesh mesh(std::move(bld.nodes), std::move(tris), std::move(bedges), std::move(grading_full));
  mesh.validate();
  double ma = mesh.min_angle();
  if (ma < min_angle_deg)
    throw NumericalError("mesh quality floor unreachable: min angle " + std::to_string(ma) +
                         " deg < " + std::to_string(min_angle_deg) + " deg");
  return mesh;
}

}  // namespace cornerfem
