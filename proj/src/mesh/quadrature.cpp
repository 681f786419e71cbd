#include "mesh/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace cornerfem {

namespace {
std::mutex g_cache_mutex;
}

const GaussLegendre& GaussLegendre::get(int n) {
  static std::map<int, GaussLegendre> cache;
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  GaussLegendre gl;
  gl.points.resize(std::size_t(n));
  gl.weights.resize(std::size_t(n));
  // Newton iteration on Legendre polynomials over [-1, 1]
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    gl.points[std::size_t(i)] = 0.5 * (1.0 - x);  // map to [0,1], ascending later
    gl.weights[std::size_t(i)] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(gl)).first->second;
}

const TriangleRule& TriangleRule::get(int degree) {
  static std::map<int, TriangleRule> cache;
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = cache.find(degree);
    if (it != cache.end()) return it->second;
  }
  int n = std::max(1, (degree + 2 + 1) / 2);  // ceil((degree + 2) / 2)
  const GaussLegendre& gl = GaussLegendre::get(n);

  TriangleRule rule;
  rule.degree = degree;
  // Duffy map: l1 = u, l2 = v (1 - u), l0 = (1 - u)(1 - v); |J| = (1 - u).
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double u = gl.points[std::size_t(i)], v = gl.points[std::size_t(j)];
      TriangleRule::Node nd;
      nd.l1 = u;
      nd.l2 = v * (1.0 - u);
      nd.l0 = 1.0 - nd.l1 - nd.l2;
      nd.w = 2.0 * gl.weights[std::size_t(i)] * gl.weights[std::size_t(j)] * (1.0 - u);
      rule.nodes.push_back(nd);
    }
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  return cache.emplace(degree, std::move(rule)).first->second;
}

MappedQuadrature map_rule(const TriangleRule& rule, const Vec2& a, const Vec2& b, const Vec2& c) {
  MappedQuadrature q;
  double area = 0.5 * cross2(b - a, c - a);
  q.points.reserve(rule.nodes.size());
  q.weights.reserve(rule.nodes.size());
  for (const auto& nd : rule.nodes) {
    q.points.push_back(nd.l0 * a + nd.l1 * b + nd.l2 * c);
    q.weights.push_back(nd.w * area);  // rule weights sum to 1
  }
  return q;
}

std::vector<std::array<Vec2, 3>> dyadic_split_toward(const Vec2& a, const Vec2& b, const Vec2& c,
                                                     int corner, int rings) {
  Vec2 p0 = corner == 0 ? a : (corner == 1 ? b : c);
  Vec2 p1 = corner == 0 ? b : (corner == 1 ? c : a);
  Vec2 p2 = corner == 0 ? c : (corner == 1 ? a : b);

  std::vector<std::array<Vec2, 3>> out;
  double s_outer = 1.0;
  for (int k = 0; k < rings; ++k) {
    double s_inner = 0.5 * s_outer;
    Vec2 a_out = p0 + s_outer * (p1 - p0), b_out = p0 + s_outer * (p2 - p0);
    Vec2 a_in = p0 + s_inner * (p1 - p0), b_in = p0 + s_inner * (p2 - p0);
    out.push_back({a_in, a_out, b_out});
    out.push_back({a_in, b_out, b_in});
    s_outer = s_inner;
  }
  out.push_back({p0, p0 + s_outer * (p1 - p0), p0 + s_outer * (p2 - p0)});
  return out;
}

}  // namespace cornerfem
