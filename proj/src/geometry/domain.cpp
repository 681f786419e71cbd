#include "geometry/domain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

namespace cornerfem {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kGeomTol = 1e-12;

}  // namespace

const char* to_string(BcLabel label) { return label == BcLabel::Dirichlet ? "D" : "N"; }

BcLabel bc_label_from_string(const std::string& s) {
  if (s == "D" || s == "Dirichlet" || s == "dirichlet") return BcLabel::Dirichlet;
  if (s == "N" || s == "Neumann" || s == "neumann") return BcLabel::Neumann;
  throw ValidationError("unknown boundary label '" + s + "'");
}

// ---------------------------------------------------------------- EdgeCurve

EdgeCurve EdgeCurve::segment(const Vec2& a, const Vec2& b) {
  EdgeCurve c;
  c.type = Type::Polyline;
  c.points = {a, b};
  return c;
}

Vec2 EdgeCurve::eval(double t) const {
  if (type == Type::Arc) {
    double a = angle0 + t * (angle1 - angle0);
    return center + radius * Vec2(std::cos(a), std::sin(a));
  }
  // arclength-proportional parametrization of the polyline
  double total = length();
  double target = t * total;
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    double seg = (points[k + 1] - points[k]).norm();
    if (target <= seg + kGeomTol || k + 2 == points.size()) {
      double s = (seg > 0) ? std::clamp(target / seg, 0.0, 1.0) : 0.0;
      return points[k] + s * (points[k + 1] - points[k]);
    }
    target -= seg;
  }
  return points.back();
}

Vec2 EdgeCurve::tangent(double t) const {
  if (type == Type::Arc) {
    double a = angle0 + t * (angle1 - angle0);
    double sgn = (angle1 >= angle0) ? 1.0 : -1.0;
    return sgn * Vec2(-std::sin(a), std::cos(a));
  }
  double total = length();
  double target = t * total;
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    double seg = (points[k + 1] - points[k]).norm();
    if (target <= seg + kGeomTol || k + 2 == points.size())
      return (points[k + 1] - points[k]).normalized();
    target -= seg;
  }
  return (points.back() - points[points.size() - 2]).normalized();
}

double EdgeCurve::length() const {
  if (type == Type::Arc) return radius * std::abs(angle1 - angle0);
  double total = 0;
  for (std::size_t k = 0; k + 1 < points.size(); ++k) total += (points[k + 1] - points[k]).norm();
  return total;
}

// ------------------------------------------------------------------ Domain

Domain Domain::build(DomainSpec spec) {
  Domain d;
  d.vertices_ = std::move(spec.vertices);
  d.edges_ = std::move(spec.edges);
  d.allow_adjacent_neumann_ = spec.allow_adjacent_neumann;

  if (d.vertices_.size() < 3) throw ValidationError("domain needs at least 3 vertices");

  double min_pair = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d.vertices_.size(); ++i)
    for (std::size_t j = i + 1; j < d.vertices_.size(); ++j)
      min_pair = std::min(min_pair, (d.vertices_[i].pos - d.vertices_[j].pos).norm());
  if (!(min_pair > 0)) throw ValidationError("coincident vertices");

  if (spec.delta0) {
    if (*spec.delta0 <= 0 || *spec.delta0 > 0.5 * min_pair + kGeomTol)
      throw ValidationError("delta0 must lie in (0, half the minimum vertex distance]");
    d.delta0_ = *spec.delta0;
  } else {
    d.delta0_ = 0.5 * min_pair;
  }

  d.validate_and_finish();
  return d;
}

void Domain::validate_and_finish() {
  const int nv = n_vertices();
  std::vector<int> out_edge(std::size_t(nv), -1), in_edge(std::size_t(nv), -1);
  for (int e = 0; e < n_edges(); ++e) {
    const BoundaryEdge& be = edges_[std::size_t(e)];
    if (be.from < 0 || be.from >= nv || be.to < 0 || be.to >= nv)
      throw ValidationError("edge endpoint index out of range");
    if (be.from == be.to) throw ValidationError("degenerate edge (from == to)");
    if (out_edge[std::size_t(be.from)] != -1 || in_edge[std::size_t(be.to)] != -1)
      throw ValidationError("open boundary loop: vertex with multiple outgoing/incoming edges");
    out_edge[std::size_t(be.from)] = e;
    in_edge[std::size_t(be.to)] = e;

    // geometric consistency of the curve with its endpoints
    const Vec2 a = vertices_[std::size_t(be.from)].pos;
    const Vec2 b = vertices_[std::size_t(be.to)].pos;
    BoundaryEdge& mut = edges_[std::size_t(e)];
    if (mut.curve.type == EdgeCurve::Type::Polyline) {
      if (mut.curve.points.size() < 2) mut.curve = EdgeCurve::segment(a, b);
      if ((mut.curve.eval(0.0) - a).norm() > 1e-9 || (mut.curve.eval(1.0) - b).norm() > 1e-9)
        throw ValidationError("edge curve endpoints do not match its vertices");
    } else {
      if ((mut.curve.eval(0.0) - a).norm() > 1e-9 || (mut.curve.eval(1.0) - b).norm() > 1e-9)
        throw ValidationError("arc endpoints do not match its vertices");
    }
  }
  for (int v = 0; v < nv; ++v)
    if (out_edge[std::size_t(v)] == -1 || in_edge[std::size_t(v)] == -1)
      throw ValidationError("open boundary loop: vertex " + std::to_string(v) +
                            " is not on a closed loop");

  // loop structure and orientation (outer loop must be counterclockwise)
  std::vector<int> loop_of(std::size_t(nv), -1);
  int nloops = 0;
  for (int v0 = 0; v0 < nv; ++v0) {
    if (loop_of[std::size_t(v0)] != -1) continue;
    int v = v0;
    do {
      loop_of[std::size_t(v)] = nloops;
      v = edges_[std::size_t(out_edge[std::size_t(v)])].to;
    } while (v != v0);
    ++nloops;
  }
  std::vector<double> loop_area(static_cast<std::size_t>(nloops), 0.0);
  for (const BoundaryEdge& be : edges_) {
    int lp = loop_of[std::size_t(be.from)];
    int ns = (be.curve.type == EdgeCurve::Type::Arc)
                 ? std::max(8, int(std::ceil(std::abs(be.curve.angle1 - be.curve.angle0) / 0.05)))
                 : std::max(1, int(be.curve.points.size()) - 1) * 4;
    for (int k = 0; k < ns; ++k) {
      Vec2 p = be.curve.eval(double(k) / ns), q = be.curve.eval(double(k + 1) / ns);
      loop_area[std::size_t(lp)] += 0.5 * cross2(p, q);
    }
  }
  int outer = 0;
  for (int l = 1; l < nloops; ++l)
    if (std::abs(loop_area[std::size_t(l)]) > std::abs(loop_area[std::size_t(outer)])) outer = l;
  if (loop_area[std::size_t(outer)] <= 0)
    throw ValidationError("outer boundary loop must be traversed counterclockwise");
  for (int l = 0; l < nloops; ++l)
    if (l != outer && loop_area[std::size_t(l)] >= 0)
      throw ValidationError("inner boundary loops (holes) must be traversed clockwise");

  // self-intersection test on the sampled boundary
  struct Seg { Vec2 a, b; int edge; };
  std::vector<Seg> segs;
  for (int e = 0; e < n_edges(); ++e) {
    const EdgeCurve& c = edges_[std::size_t(e)].curve;
    int ns = (c.type == EdgeCurve::Type::Arc)
                 ? std::max(8, int(std::ceil(std::abs(c.angle1 - c.angle0) / 0.1)))
                 : std::max(1, int(c.points.size()) - 1);
    for (int k = 0; k < ns; ++k)
      segs.push_back({c.eval(double(k) / ns), c.eval(double(k + 1) / ns), e});
  }
  auto proper_intersect = [](const Seg& s, const Seg& t) {
    auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
      return cross2(q - p, r - p);
    };
    double d1 = orient(s.a, s.b, t.a), d2 = orient(s.a, s.b, t.b);
    double d3 = orient(t.a, t.b, s.a), d4 = orient(t.a, t.b, s.b);
    return ((d1 > kGeomTol && d2 < -kGeomTol) || (d1 < -kGeomTol && d2 > kGeomTol)) &&
           ((d3 > kGeomTol && d4 < -kGeomTol) || (d3 < -kGeomTol && d4 > kGeomTol));
  };
  for (std::size_t i = 0; i < segs.size(); ++i)
    for (std::size_t j = i + 1; j < segs.size(); ++j) {
      if ((segs[i].b - segs[j].a).norm() < kGeomTol || (segs[j].b - segs[i].a).norm() < kGeomTol)
        continue;  // consecutive samples share an endpoint
      if (proper_intersect(segs[i], segs[j]))
        throw ValidationError("boundary is self-intersecting");
    }

  // adjacent Neumann edges share a vertex
  if (!allow_adjacent_neumann_) {
    for (int v = 0; v < nv; ++v) {
      const BoundaryEdge& ein = edges_[std::size_t(in_edge[std::size_t(v)])];
      const BoundaryEdge& eout = edges_[std::size_t(out_edge[std::size_t(v)])];
      if (ein.label == BcLabel::Neumann && eout.label == BcLabel::Neumann)
        throw ValidationError("adjacent Neumann edges at vertex " + std::to_string(v));
    }
  }

  // sampled boundary polygon for the point-in-domain test
  for (const BoundaryEdge& be : edges_) {
    const EdgeCurve& c = be.curve;
    int ns = (c.type == EdgeCurve::Type::Arc)
                 ? std::max(16, int(std::ceil(std::abs(c.angle1 - c.angle0) / 0.01)))
                 : std::max(1, int(c.points.size()) - 1);
    for (int k = 0; k < ns; ++k)
      boundary_segments_.push_back({c.eval(double(k) / ns), c.eval(double(k + 1) / ns)});
  }

  // polar charts
  charts_.resize(std::size_t(nv));
  for (int v = 0; v < nv; ++v) {
    const BoundaryEdge& eo = edges_[std::size_t(out_edge[std::size_t(v)])];
    const BoundaryEdge& ei = edges_[std::size_t(in_edge[std::size_t(v)])];
    Vec2 ray_out = eo.curve.tangent(0.0);
    Vec2 ray_in = -ei.curve.tangent(1.0);  // direction from v along the incoming edge
    double a_out = std::atan2(ray_out.y(), ray_out.x());
    double a_in = std::atan2(ray_in.y(), ray_in.x());
    double omega = a_in - a_out;
    while (omega <= 1e-12) omega += 2 * kPi;
    while (omega > 2 * kPi + 1e-12) omega -= 2 * kPi;

    PolarChart ch;
    ch.vertex = v;
    ch.origin = vertices_[std::size_t(v)].pos;
    ch.radius = delta0_;
    bool out_is_lower = out_edge[std::size_t(v)] < in_edge[std::size_t(v)];
    if (out_is_lower) {
      ch.reference_direction = ray_out;
      ch.theta_min = 0.0;
      ch.theta_max = omega;
    } else {
      ch.reference_direction = ray_in;
      ch.theta_min = -omega;
      ch.theta_max = 0.0;
    }
    charts_[std::size_t(v)] = ch;
  }
}

double Domain::weight(const Vec2& x) const {
  double dist;
  nearest_vertex(x, &dist);
  return std::min(delta0_, dist);
}

int Domain::nearest_vertex(const Vec2& x, double* dist) const {
  int best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (int v = 0; v < n_vertices(); ++v) {
    double d = (x - vertices_[std::size_t(v)].pos).norm();
    if (d < bd) {
      bd = d;
      best = v;
    }
  }
  if (dist) *dist = bd;
  return best;
}

Jet Domain::weight_jet(const Vec2& x, int order) const {
  double dist;
  int v = nearest_vertex(x, &dist);
  if (dist >= delta0_) return Jet::constant(delta0_, order);
  if (dist <= 0) throw ValidationError("weight_jet evaluated at a vertex");
  const Vec2 p = vertices_[std::size_t(v)].pos;
  Jet u = Jet::variable_x(x.x(), order) - Complex(p.x());
  Jet w = Jet::variable_y(x.y(), order) - Complex(p.y());
  return sqrt(u * u + w * w);
}

std::pair<double, double> Domain::polar(int vertex, const Vec2& x) const {
  const PolarChart& ch = chart(vertex);
  Vec2 u = x - ch.origin;
  double r = u.norm();
  if (r >= ch.radius) throw ValidationError("point outside chart radius");
  return {r, chart_angle(vertex, x)};
}

double Domain::chart_angle(int vertex, const Vec2& x) const {
  const PolarChart& ch = chart(vertex);
  Vec2 u = x - ch.origin;
  double phi = std::atan2(cross2(ch.reference_direction, u), ch.reference_direction.dot(u));
  // choose the 2*pi branch that lands in (or nearest to) the chart interval
  double best = phi;
  double bestpen = std::numeric_limits<double>::infinity();
  for (int k = -1; k <= 1; ++k) {
    double cand = phi + 2 * kPi * k;
    double pen = 0.0;
    if (cand < ch.theta_min - 1e-9) pen = ch.theta_min - cand;
    if (cand > ch.theta_max + 1e-9) pen = cand - ch.theta_max;
    if (pen < bestpen - 1e-15) {
      bestpen = pen;
      best = cand;
    }
  }
  return best;
}

Vec2 Domain::from_polar(int vertex, double r, double theta) const {
  const PolarChart& ch = chart(vertex);
  const Vec2& d = ch.reference_direction;
  Vec2 rot(d.x() * std::cos(theta) - d.y() * std::sin(theta),
           d.x() * std::sin(theta) + d.y() * std::cos(theta));
  return ch.origin + r * rot;
}

std::pair<Jet, Jet> Domain::polar_jets(int vertex, const Vec2& x, int order) const {
  const PolarChart& ch = chart(vertex);
  Jet u = Jet::variable_x(x.x(), order) - Complex(ch.origin.x());
  Jet w = Jet::variable_y(x.y(), order) - Complex(ch.origin.y());
  Jet r = sqrt(u * u + w * w);
  // rotate into the chart frame, take Im log for the angle
  Complex frame(ch.reference_direction.x(), -ch.reference_direction.y());
  Jet z = (u + Complex(0.0, 1.0) * w) * frame;
  Jet theta = log(z).imag_part();
  double target = chart_angle(vertex, x);
  theta += Complex(target - theta.value().real());
  return {r, theta};
}

bool Domain::contains(const Vec2& x) const {
  // crossing number against the sampled boundary, ray in +x direction
  int crossings = 0;
  for (const auto& [a, b] : boundary_segments_) {
    if ((a.y() > x.y()) == (b.y() > x.y())) continue;
    double t = (x.y() - a.y()) / (b.y() - a.y());
    double xc = a.x() + t * (b.x() - a.x());
    if (xc > x.x()) ++crossings;
  }
  return (crossings % 2) == 1;
}

double Domain::alpha_max() const {
  double m = 0;
  for (const PolarChart& ch : charts_) m = std::max(m, ch.interior_angle());
  return m;
}

// ---------------------------------------------------------------- JSON I/O

namespace {
Vec2 parse_point(const nlohmann::json& j) {
  if (!j.is_array() || j.size() < 2) throw ValidationError("point must be [x, y]");
  return Vec2(j[0].get<double>(), j[1].get<double>());
}
}  // namespace

Domain Domain::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ValidationError(std::string("domain file is not valid JSON: ") + e.what());
  }

  DomainSpec spec;
  if (!j.contains("vertices") || !j.contains("edges"))
    throw ValidationError("domain file needs 'vertices' and 'edges'");
  for (const auto& jv : j["vertices"]) {
    DomainVertex v;
    v.pos = parse_point(jv);
    if (jv.size() >= 3) {
      std::string kind = jv[2].get<std::string>();
      if (kind == "artificial")
        v.kind = VertexKind::Artificial;
      else if (kind == "geometric")
        v.kind = VertexKind::Geometric;
      else
        throw ValidationError("vertex kind must be 'geometric' or 'artificial'");
    }
    spec.vertices.push_back(v);
  }
  for (const auto& je : j["edges"]) {
    BoundaryEdge e;
    e.from = je.at("from").get<int>();
    e.to = je.at("to").get<int>();
    e.label = bc_label_from_string(je.at("label").get<std::string>());
    if (e.from < 0 || e.from >= int(spec.vertices.size()) || e.to < 0 ||
        e.to >= int(spec.vertices.size()))
      throw ValidationError("edge endpoint index out of range");
    const Vec2 a = spec.vertices[std::size_t(e.from)].pos;
    const Vec2 b = spec.vertices[std::size_t(e.to)].pos;
    if (je.contains("curve")) {
      const auto& jc = je["curve"];
      std::string type = jc.value("type", "polyline");
      if (type == "arc") {
        e.curve.type = EdgeCurve::Type::Arc;
        e.curve.center = parse_point(jc.at("center"));
        e.curve.radius = jc.contains("radius") ? jc["radius"].get<double>()
                                               : (a - e.curve.center).norm();
        Vec2 da = a - e.curve.center, db = b - e.curve.center;
        if (std::abs(da.norm() - e.curve.radius) > 1e-9 ||
            std::abs(db.norm() - e.curve.radius) > 1e-9)
          throw ValidationError("arc endpoints not at the given radius");
        e.curve.angle0 = std::atan2(da.y(), da.x());
        double a1 = std::atan2(db.y(), db.x());
        bool clockwise = jc.value("clockwise", false);
        if (!clockwise) {
          while (a1 <= e.curve.angle0 + 1e-12) a1 += 2 * kPi;
        } else {
          while (a1 >= e.curve.angle0 - 1e-12) a1 -= 2 * kPi;
        }
        e.curve.angle1 = a1;
      } else if (type == "polyline") {
        e.curve.type = EdgeCurve::Type::Polyline;
        for (const auto& jp : jc.at("points")) e.curve.points.push_back(parse_point(jp));
      } else {
        throw ValidationError("curve type must be 'polyline' or 'arc'");
      }
    } else {
      e.curve = EdgeCurve::segment(a, b);
    }
    spec.edges.push_back(e);
  }
  if (j.contains("delta0")) spec.delta0 = j["delta0"].get<double>();
  spec.allow_adjacent_neumann = j.value("allow_adjacent_neumann", false);
  return build(std::move(spec));
}

Domain Domain::load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open domain file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

}  // namespace cornerfem
