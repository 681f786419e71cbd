#include "mesh/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace cornerfem {

namespace {
std::pair<int, int> sorted_pair(int a, int b) { return {std::min(a, b), std::max(a, b)}; }
}

Mesh::Mesh(std::vector<Vec2> nodes, std::vector<std::array<int, 3>> triangles,
           std::vector<MeshBoundaryEdge> boundary, std::map<int, double> grading)
    : nodes_(std::move(nodes)),
      tris_(std::move(triangles)),
      bedges_(std::move(boundary)),
      grading_(std::move(grading)) {}

std::array<Vec2, 3> Mesh::corners(int t) const {
  const auto& tri = tris_[std::size_t(t)];
  return {nodes_[std::size_t(tri[0])], nodes_[std::size_t(tri[1])], nodes_[std::size_t(tri[2])]};
}

double Mesh::area(int t) const {
  auto c = corners(t);
  return 0.5 * cross2(c[1] - c[0], c[2] - c[0]);
}

double Mesh::diameter(int t) const {
  auto c = corners(t);
  return std::max({(c[1] - c[0]).norm(), (c[2] - c[1]).norm(), (c[0] - c[2]).norm()});
}

Vec2 Mesh::barycenter(int t) const {
  auto c = corners(t);
  return (c[0] + c[1] + c[2]) / 3.0;
}

double Mesh::total_area() const {
  double s = 0;
  for (int t = 0; t < n_triangles(); ++t) s += area(t);
  return s;
}

double Mesh::max_diameter() const {
  double s = 0;
  for (int t = 0; t < n_triangles(); ++t) s = std::max(s, diameter(t));
  return s;
}

double Mesh::min_diameter() const {
  double s = std::numeric_limits<double>::infinity();
  for (int t = 0; t < n_triangles(); ++t) s = std::min(s, diameter(t));
  return s;
}

double Mesh::min_angle() const {
  double worst = 180.0;
  for (int t = 0; t < n_triangles(); ++t) {
    auto c = corners(t);
    for (int k = 0; k < 3; ++k) {
      Vec2 u = c[std::size_t((k + 1) % 3)] - c[std::size_t(k)];
      Vec2 v = c[std::size_t((k + 2) % 3)] - c[std::size_t(k)];
      double ang = std::atan2(std::abs(cross2(u, v)), u.dot(v)) * 180.0 / M_PI;
      worst = std::min(worst, ang);
    }
  }
  return worst;
}

void Mesh::validate() const {
  for (const auto& tri : tris_)
    for (int v : tri)
      if (v < 0 || v >= n_nodes()) throw ValidationError("triangle node index out of range");
  for (int t = 0; t < n_triangles(); ++t)
    if (!(area(t) > 0)) throw ValidationError("triangle " + std::to_string(t) + " has non-positive area");

  // conformity: every edge belongs to one or two triangles, and an edge
  // endpoint never lies strictly inside another triangle's edge
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& tri : tris_)
    for (int k = 0; k < 3; ++k) edge_count[sorted_pair(tri[std::size_t(k)], tri[std::size_t((k + 1) % 3)])]++;
  for (const auto& [e, cnt] : edge_count)
    if (cnt > 2) throw ValidationError("edge shared by more than two triangles");

  std::set<std::pair<int, int>> boundary_set;
  for (const auto& [e, cnt] : edge_count)
    if (cnt == 1) boundary_set.insert(e);
  if (boundary_set.size() != bedges_.size())
    throw ValidationError("boundary edge list does not match mesh boundary (hanging node?)");
  for (const auto& be : bedges_) {
    if (be.a < 0 || be.a >= n_nodes() || be.b < 0 || be.b >= n_nodes())
      throw ValidationError("boundary edge node index out of range");
    if (!boundary_set.count(sorted_pair(be.a, be.b)))
      throw ValidationError("boundary edge is not an edge of exactly one triangle");
  }
}

Mesh Mesh::refined_uniform(const Domain* domain) const {
  std::vector<Vec2> nodes = nodes_;
  std::map<std::pair<int, int>, int> midpoint;
  std::map<std::pair<int, int>, const MeshBoundaryEdge*> bmap;
  for (const auto& be : bedges_) bmap[sorted_pair(be.a, be.b)] = &be;

  auto get_mid = [&](int a, int b) {
    auto key = sorted_pair(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    Vec2 p = 0.5 * (nodes[std::size_t(a)] + nodes[std::size_t(b)]);
    auto bit = bmap.find(key);
    if (bit != bmap.end() && domain != nullptr) {
      const MeshBoundaryEdge& be = *bit->second;
      if (std::isfinite(be.ta) && std::isfinite(be.tb))
        p = domain->edge(be.parent_edge).curve.eval(0.5 * (be.ta + be.tb));
    }
    int id = int(nodes.size());
    nodes.push_back(p);
    midpoint[key] = id;
    return id;
  };

  std::vector<std::array<int, 3>> tris;
  tris.reserve(tris_.size() * 4);
  for (const auto& tri : tris_) {
    int m01 = get_mid(tri[0], tri[1]);
    int m12 = get_mid(tri[1], tri[2]);
    int m20 = get_mid(tri[2], tri[0]);
    tris.push_back({tri[0], m01, m20});
    tris.push_back({m01, tri[1], m12});
    tris.push_back({m20, m12, tri[2]});
    tris.push_back({m01, m12, m20});
  }

  std::vector<MeshBoundaryEdge> bedges;
  bedges.reserve(bedges_.size() * 2);
  for (const auto& be : bedges_) {
    int m = get_mid(be.a, be.b);
    double tm = (std::isfinite(be.ta) && std::isfinite(be.tb))
                    ? 0.5 * (be.ta + be.tb)
                    : std::numeric_limits<double>::quiet_NaN();
    bedges.push_back({be.a, m, be.label, be.parent_edge, be.ta, tm});
    bedges.push_back({m, be.b, be.label, be.parent_edge, tm, be.tb});
  }

  Mesh out(std::move(nodes), std::move(tris), std::move(bedges), grading_);
  return out;
}

bool nodes_nested(const Mesh& coarse, const Mesh& fine) {
  std::set<std::pair<long long, long long>> fine_keys;
  auto key = [](const Vec2& p) {
    return std::make_pair(llround(p.x() * 1e12), llround(p.y() * 1e12));
  };
  for (const Vec2& p : fine.nodes()) fine_keys.insert(key(p));
  for (const Vec2& p : coarse.nodes())
    if (!fine_keys.count(key(p))) return false;
  return true;
}

// -------------------------------------------------------------------- I/O

void Mesh::write(std::ostream& out) const {
  out << "polymesh 1\n";
  out << n_nodes() << ' ' << n_triangles() << ' ' << n_boundary_edges() << '\n';
  for (const Vec2& p : nodes_) out << format_double(p.x()) << ' ' << format_double(p.y()) << '\n';
  for (const auto& tri : tris_) out << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
  for (const auto& be : bedges_)
    out << be.a << ' ' << be.b << ' ' << to_string(be.label) << ' ' << be.parent_edge << '\n';
}

Mesh Mesh::read(std::istream& in) {
  std::string word, version;
  if (!(in >> word >> version) || word != "polymesh" || version != "1")
    throw ValidationError("malformed header: expected 'polymesh 1'");
  long long nn, nt, nb;
  if (!(in >> nn >> nt >> nb) || nn < 0 || nt < 0 || nb < 0)
    throw ValidationError("malformed header: bad counts");
  std::vector<Vec2> nodes(static_cast<std::size_t>(nn));
  for (auto& p : nodes)
    if (!(in >> p.x() >> p.y())) throw ValidationError("malformed node line");
  std::vector<std::array<int, 3>> tris(static_cast<std::size_t>(nt));
  for (auto& t : tris) {
    if (!(in >> t[0] >> t[1] >> t[2])) throw ValidationError("malformed triangle line");
    for (int v : t)
      if (v < 0 || v >= nn) throw ValidationError("triangle node index out of range");
  }
  std::vector<MeshBoundaryEdge> bedges(static_cast<std::size_t>(nb));
  for (auto& be : bedges) {
    std::string label;
    if (!(in >> be.a >> be.b >> label >> be.parent_edge))
      throw ValidationError("malformed boundary edge line");
    if (be.a < 0 || be.a >= nn || be.b < 0 || be.b >= nn)
      throw ValidationError("boundary edge node index out of range");
    if (be.parent_edge < 0) throw ValidationError("parent edge index out of range");
    be.label = bc_label_from_string(label);
  }
  Mesh m(std::move(nodes), std::move(tris), std::move(bedges));
  for (int t = 0; t < m.n_triangles(); ++t)
    if (!(m.area(t) > 0)) throw ValidationError("zero-area triangle in mesh file");
  return m;
}

void Mesh::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  write(out);
}

Mesh Mesh::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open mesh file '" + path + "'");
  return read(in);
}

}  // namespace cornerfem
