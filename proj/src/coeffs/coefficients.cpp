#include "coeffs/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "coeffs/expr.hpp"
#include "mesh/quadrature.hpp"

namespace cornerfem {

// ----------------------------------------------------------- construction

CoefficientSet CoefficientSet::laplace(std::shared_ptr<const Domain> domain) {
  CoefficientSet beta;
  beta.domain = std::move(domain);
  beta.a[0][0] = make_constant(1.0);
  beta.a[0][1] = make_zero();
  beta.a[1][0] = make_zero();
  beta.a[1][1] = make_constant(1.0);
  for (auto& bi : beta.b) bi = make_zero();
  beta.c = make_zero();
  return beta;
}

CoefficientSet CoefficientSet::schroedinger(std::shared_ptr<const Domain> domain, double kappa) {
  CoefficientSet beta = laplace(domain);
  auto dom = beta.domain;
  beta.c = make_field(
      [dom, kappa](const Vec2& x, int ord) {
        return pow(dom->weight_jet(x, ord), -2.0) * Complex(kappa);
      },
      2);
  return beta;
}

CoefficientSet CoefficientSet::variable_demo(std::shared_ptr<const Domain> domain) {
  CoefficientSet beta;
  beta.domain = domain;
  beta.a[0][0] = parse_expression("2 + sin(x)", domain);
  beta.a[0][1] = parse_expression("0.3", domain);
  beta.a[1][0] = parse_expression("0.3", domain);
  beta.a[1][1] = parse_expression("2 + cos(y)", domain);
  beta.b[0] = parse_expression("0.5*y", domain);
  beta.b[1] = make_zero();
  beta.b[2] = make_zero();
  beta.b[3] = parse_expression("0.25*x", domain);
  beta.c = parse_expression("1/(1 + x^2 + y^2)", domain);
  return beta;
}

CoefficientSet CoefficientSet::named(const std::string& spec,
                                     std::shared_ptr<const Domain> domain) {
  std::istringstream ss(spec);
  std::string name;
  ss >> name;
  std::map<std::string, double> params;
  std::string kv;
  while (ss >> kv) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ValidationError("coefficient parameter must be key=value");
    params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
  }
  if (name == "laplace") return laplace(std::move(domain));
  if (name == "schroedinger")
    return schroedinger(std::move(domain), params.count("kappa") ? params["kappa"] : 1.0);
  if (name == "variable-demo") return variable_demo(std::move(domain));
  throw ValidationError("unknown coefficient set '" + name + "'");
}

CoefficientSet CoefficientSet::from_expressions(
    const std::vector<std::pair<std::string, std::string>>& fields,
    std::shared_ptr<const Domain> domain) {
  CoefficientSet beta = laplace(domain);
  for (const auto& [key, text] : fields) {
    FieldPtr f = parse_expression(text, domain);
    if (key == "a11") beta.a[0][0] = f;
    else if (key == "a12") beta.a[0][1] = f;
    else if (key == "a21") beta.a[1][0] = f;
    else if (key == "a22") beta.a[1][1] = f;
    else if (key == "b1") beta.b[0] = f;
    else if (key == "b2") beta.b[1] = f;
    else if (key == "b3") beta.b[2] = f;
    else if (key == "b4") beta.b[3] = f;
    else if (key == "c") beta.c = f;
    else throw ValidationError("unknown coefficient field '" + key + "'");
  }
  return beta;
}

void CoefficientSet::validate() const {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (a[std::size_t(i)][std::size_t(j)]->singular_exponent != 0)
        throw ValidationError("a_ij must not carry a vertex singularity");
  for (const auto& bi : b)
    if (bi->singular_exponent > 1)
      throw ValidationError("b_i may blow up at most like 1/r at vertices");
  if (c->singular_exponent > 2)
    throw ValidationError("c may blow up at most like 1/r^2 at vertices");
}

CoefficientSet CoefficientSet::scaled(Complex s) const {
  CoefficientSet out = *this;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.a[std::size_t(i)][std::size_t(j)] = field_scaled(a[std::size_t(i)][std::size_t(j)], s);
  for (int k = 0; k < 4; ++k) out.b[std::size_t(k)] = field_scaled(b[std::size_t(k)], s);
  out.c = field_scaled(c, s);
  return out;
}

// ------------------------------------------------------------ sample cloud

SampleCloud SampleCloud::reference(const Domain& domain) {
  SampleCloud cloud;
  // quasi-uniform reference mesh, then four regular refinements
  double span = 0;
  for (int v = 0; v < domain.n_vertices(); ++v)
    for (int w = v + 1; w < domain.n_vertices(); ++w)
      span = std::max(span, (domain.vertex(v).pos - domain.vertex(w).pos).norm());
  double h0 = std::max(domain.delta0(), span / 8.0);
  Mesh mesh = generate_graded_mesh(domain, h0);
  for (int k = 0; k < 4 && mesh.n_triangles() * 4 <= 200000; ++k)
    mesh = mesh.refined_uniform(&domain);

  const TriangleRule& rule = TriangleRule::get(2);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    auto c = mesh.corners(t);
    MappedQuadrature q = map_rule(rule, c[0], c[1], c[2]);
    for (const Vec2& p : q.points) cloud.points.push_back(p);
  }

  // boundary samples (sups are often attained on edges); vertex endpoints
  // themselves are excluded since the weight vanishes there
  for (int e = 0; e < domain.n_edges(); ++e) {
    const EdgeCurve& curve = domain.edge(e).curve;
    const int ns = 256;
    for (int k = 0; k < ns; ++k) {
      double t = (k + 0.5) / ns;
      cloud.points.push_back(curve.eval(t));
    }
    cloud.points.push_back(curve.eval(1.0 / 4096));
    cloud.points.push_back(curve.eval(1.0 - 1.0 / 4096));
  }

  // dyadic rings toward each vertex: radii delta0 * 2^-j, angles strictly
  // inside the chart interval
  for (int v = 0; v < domain.n_vertices(); ++v) {
    const PolarChart& ch = domain.chart(v);
    double omega = ch.interior_angle();
    const int n_ang = 8;
    for (int j = 1; j <= 30; ++j) {
      double r = domain.delta0() * std::pow(0.5, j);
      for (int k = 0; k < n_ang; ++k) {
        double theta = ch.theta_min + omega * (k + 0.5) / n_ang;
        cloud.points.push_back(domain.from_polar(v, r, theta));
      }
    }
  }
  return cloud;
}

namespace {
// Per-domain cache of reference clouds.
const SampleCloud& cached_cloud(const Domain& domain) {
  static std::mutex mtx;
  static std::map<const Domain*, SampleCloud> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(&domain);
  if (it != cache.end()) return it->second;
  return cache.emplace(&domain, SampleCloud::reference(domain)).first->second;
}
}  // namespace

// ------------------------------------------------------------------- norms

double wminf_norm(const std::function<Jet(const Vec2&, int)>& f, int m, const Domain& domain,
                  const SampleCloud& cloud) {
  std::vector<double> partial;
  std::size_t nchunks = 0;
  std::size_t n = cloud.points.size();
  partial.assign(std::size_t(num_threads()) + 1, 0.0);
  parallel_chunks(
      n,
      [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        double best = 0;
        for (std::size_t k = begin; k < end; ++k) {
          const Vec2& x = cloud.points[k];
          Jet jf = f(x, m);
          double r = domain.weight(x);
          double rp = 1.0;
          for (int d = 0; d <= m; ++d) {
            for (int j = 0; j <= d; ++j) {
              double v = std::abs(jf.derivative(d - j, j));
              best = std::max(best, rp * v);
            }
            rp *= r;
          }
        }
        partial[chunk] = std::max(partial[chunk], best);
      },
      &nchunks);
  double out = 0;
  for (double v : partial) out = std::max(out, v);
  return out;
}

double wminf_norm(const FieldPtr& f, int m, const Domain& domain, const SampleCloud& cloud) {
  return wminf_norm([&f](const Vec2& x, int ord) { return f->jet(x, ord); }, m, domain, cloud);
}

double zm_norm(const CoefficientSet& beta, int m, const SampleCloud& cloud) {
  const Domain& dom = *beta.domain;
  if (m > beta.max_order) throw ValidationError("zm_norm: derivative closures missing beyond order " +
                                                std::to_string(beta.max_order));
  double best = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      best = std::max(best, wminf_norm(beta.a[std::size_t(i)][std::size_t(j)], m, dom, cloud));
  for (int k = 0; k < 4; ++k) {
    const FieldPtr& bk = beta.b[std::size_t(k)];
    if (is_zero_field(bk)) continue;
    auto weighted = [&dom, &bk](const Vec2& x, int ord) {
      return dom.weight_jet(x, ord) * bk->jet(x, ord);
    };
    best = std::max(best, wminf_norm(weighted, m, dom, cloud));
  }
  if (!is_zero_field(beta.c)) {
    const FieldPtr& c = beta.c;
    auto weighted = [&dom, &c](const Vec2& x, int ord) {
      Jet w = dom.weight_jet(x, ord);
      return w * w * c->jet(x, ord);
    };
    best = std::max(best, wminf_norm(weighted, m, dom, cloud));
  }
  return best;
}

double zm_norm(const CoefficientSet& beta, int m) {
  return zm_norm(beta, m, cached_cloud(*beta.domain));
}

double c_use(const CoefficientSet& beta, const SampleCloud& cloud) {
  // smallest eigenvalue of the Hermitian part, closed form for 2x2
  auto lambda_min = [&beta](const Vec2& x) {
    Complex a11 = beta.a[0][0]->value(x), a12 = beta.a[0][1]->value(x);
    Complex a21 = beta.a[1][0]->value(x), a22 = beta.a[1][1]->value(x);
    double h11 = a11.real(), h22 = a22.real();
    Complex h12 = 0.5 * (a12 + std::conj(a21));
    double mean = 0.5 * (h11 + h22);
    double rad = std::sqrt(0.25 * (h11 - h22) * (h11 - h22) + std::norm(h12));
    return mean - rad;
  };

  double worst = std::numeric_limits<double>::infinity();
  Vec2 argmin = Vec2::Zero();
  for (const Vec2& x : cloud.points) {
    double v = lambda_min(x);
    if (v < worst) {
      worst = v;
      argmin = x;
    }
  }

  // local pattern-search polish around the cloud minimizer so interior
  // minima are resolved well below the cloud spacing
  const Domain& dom = *beta.domain;
  double step = dom.delta0() * 0.25;
  Vec2 best = argmin;
  while (step > 1e-10) {
    bool improved = false;
    for (int dir = 0; dir < 4; ++dir) {
      Vec2 cand = best + step * Vec2(dir == 0 ? 1 : dir == 1 ? -1 : 0,
                                     dir == 2 ? 1 : dir == 3 ? -1 : 0);
      double dist;
      dom.nearest_vertex(cand, &dist);
      if (dist < 1e-12 || !dom.contains(cand)) continue;
      double v = lambda_min(cand);
      if (v < worst) {
        worst = v;
        best = cand;
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  return worst;
}

double c_use(const CoefficientSet& beta) { return c_use(beta, cached_cloud(*beta.domain)); }

// ----------------------------------------------------------- chart algebra

ChartCoefficients to_polar_chart(const CoefficientSet& beta, const PolarChart& chart) {
  if (chart.vertex < 0 || chart.vertex >= beta.domain->n_vertices())
    throw ValidationError("chart is not centered at a domain vertex");
  auto dom = beta.domain;
  const CoefficientSet b = beta;  // capture by value (shared fields)
  const int v = chart.vertex;

  // Non-divergence data at a chart point: A_ij, B_j = b_j - b_{2+j} - d_i a_ij,
  // C0 = c - d_i b_{2+i}; then expand r^2 p_beta in X = r d_r, Y = d_theta.
  struct Local {
    Complex a11, a12, a21, a22, B1, B2, C0;
    double r, ca, sa;
  };
  auto local = [b, dom, v](double r, double theta) {
    Local L;
    Vec2 x = dom->from_polar(v, r, theta);
    Jet a11 = b.a[0][0]->jet(x, 1), a12 = b.a[0][1]->jet(x, 1);
    Jet a21 = b.a[1][0]->jet(x, 1), a22 = b.a[1][1]->jet(x, 1);
    Jet b3 = b.b[2]->jet(x, 1), b4 = b.b[3]->jet(x, 1);
    L.a11 = a11.value();
    L.a12 = a12.value();
    L.a21 = a21.value();
    L.a22 = a22.value();
    Complex b1 = b.b[0]->value(x), b2 = b.b[1]->value(x);
    L.B1 = b1 - b3.value() - (a11.derivative(1, 0) + a21.derivative(0, 1));
    L.B2 = b2 - b4.value() - (a12.derivative(1, 0) + a22.derivative(0, 1));
    L.C0 = b.c->value(x) - (b3.derivative(1, 0) + b4.derivative(0, 1));
    Vec2 u = x - dom->vertex(v).pos;
    double alpha = std::atan2(u.y(), u.x());  // global-frame polar angle
    L.r = r;
    L.ca = std::cos(alpha);
    L.sa = std::sin(alpha);
    return L;
  };

  ChartCoefficients cc;
  cc.vertex = v;
  cc.c11 = [local](double r, double th) {
    Local L = local(r, th);
    return L.a11 * (L.ca * L.ca) + (L.a12 + L.a21) * (L.sa * L.ca) + L.a22 * (L.sa * L.sa);
  };
  cc.c12 = [local](double r, double th) {
    Local L = local(r, th);
    return -2.0 * L.a11 * (L.sa * L.ca) + (L.a12 + L.a21) * (L.ca * L.ca - L.sa * L.sa) +
           2.0 * L.a22 * (L.sa * L.ca);
  };
  cc.c22 = [local](double r, double th) {
    Local L = local(r, th);
    return L.a11 * (L.sa * L.sa) - (L.a12 + L.a21) * (L.sa * L.ca) + L.a22 * (L.ca * L.ca);
  };
  cc.c1 = [local](double r, double th) {
    Local L = local(r, th);
    return (L.a11 - L.a22) * (L.ca * L.ca - L.sa * L.sa) +
           2.0 * (L.a12 + L.a21) * (L.sa * L.ca) + L.r * (L.B1 * L.ca + L.B2 * L.sa);
  };
  cc.c2 = [local](double r, double th) {
    Local L = local(r, th);
    return -2.0 * (L.a11 - L.a22) * (L.sa * L.ca) +
           (L.a12 + L.a21) * (L.ca * L.ca - L.sa * L.sa) + L.r * (L.B2 * L.ca - L.B1 * L.sa);
  };
  cc.c0 = [local](double r, double th) {
    Local L = local(r, th);
    return L.r * L.r * L.C0;
  };
  return cc;
}

// ------------------------------------------------------------- conjugation

CoefficientSet conjugate(const CoefficientSet& beta, double s) {
  if (s == 0.0) return beta;
  auto dom = beta.domain;
  const CoefficientSet base = beta;

  // g_i = d_i r_Omega / r_Omega as jets
  auto g = [dom](const Vec2& x, int ord, int i) {
    Jet w = dom->weight_jet(x, ord + 1);
    Jet d = (i == 0) ? w.dx() : w.dy();
    return d / w.truncated(ord);
  };

  CoefficientSet out = beta;
  out.weight_shift = beta.weight_shift + s;

  for (int i = 0; i < 2; ++i) {
    // b'_i = b_i - s * sum_k g_k a_ki
    out.b[std::size_t(i)] = make_field(
        [base, g, s, i](const Vec2& x, int ord) {
          Jet r = base.b[std::size_t(i)]->jet(x, ord);
          for (int k = 0; k < 2; ++k)
            r -= Complex(s) * g(x, ord, k) * base.a[std::size_t(k)][std::size_t(i)]->jet(x, ord);
          return r;
        },
        std::max(base.b[std::size_t(i)]->singular_exponent, 1));
    // b'_{2+i} = b_{2+i} + s * sum_j a_ij g_j
    out.b[std::size_t(2 + i)] = make_field(
        [base, g, s, i](const Vec2& x, int ord) {
          Jet r = base.b[std::size_t(2 + i)]->jet(x, ord);
          for (int j = 0; j < 2; ++j)
            r += Complex(s) * base.a[std::size_t(i)][std::size_t(j)]->jet(x, ord) * g(x, ord, j);
          return r;
        },
        std::max(base.b[std::size_t(2 + i)]->singular_exponent, 1));
  }
  // c' = c + s * sum_i (b_i - b_{2+i}) g_i - s^2 * sum_ij g_i a_ij g_j
  out.c = make_field(
      [base, g, s](const Vec2& x, int ord) {
        Jet r = base.c->jet(x, ord);
        for (int i = 0; i < 2; ++i) {
          Jet gi = g(x, ord, i);
          r += Complex(s) * (base.b[std::size_t(i)]->jet(x, ord) -
                             base.b[std::size_t(2 + i)]->jet(x, ord)) * gi;
          for (int j = 0; j < 2; ++j)
            r -= Complex(s * s) * gi * base.a[std::size_t(i)][std::size_t(j)]->jet(x, ord) *
                 g(x, ord, j);
        }
        return r;
      },
      std::max(base.c->singular_exponent, 2));
  return out;
}

// ------------------------------------------------------------- strong form

Jet apply_jet(const CoefficientSet& beta, const FieldPtr& u, const Vec2& x, int order) {
  Jet U = u->jet(x, order + 2);
  Jet Ux = U.dx(), Uy = U.dy();
  Jet result = Jet::constant(0.0, order);

  // -sum_ij d_i (a_ij d_j u)
  Jet flux_x = beta.a[0][0]->jet(x, order + 1) * Ux + beta.a[0][1]->jet(x, order + 1) * Uy;
  Jet flux_y = beta.a[1][0]->jet(x, order + 1) * Ux + beta.a[1][1]->jet(x, order + 1) * Uy;
  result -= flux_x.dx() + flux_y.dy();

  // + b_1 d_x u + b_2 d_y u
  result += beta.b[0]->jet(x, order) * Ux.truncated(order) +
            beta.b[1]->jet(x, order) * Uy.truncated(order);

  // - d_i (b_{2+i} u)
  Jet div_x = beta.b[2]->jet(x, order + 1) * U.truncated(order + 1);
  Jet div_y = beta.b[3]->jet(x, order + 1) * U.truncated(order + 1);
  result -= div_x.dx() + div_y.dy();

  // + c u
  result += beta.c->jet(x, order) * U.truncated(order);
  return result;
}

Complex apply_pointwise(const CoefficientSet& beta, const FieldPtr& u, const Vec2& x) {
  double dist;
  beta.domain->nearest_vertex(x, &dist);
  if (dist <= 0) throw ValidationError("apply_pointwise: evaluation at a vertex");
  return apply_jet(beta, u, x, 0).value();
}

Complex conormal(const CoefficientSet& beta, const FieldPtr& u, const Vec2& x, const Vec2& nu) {
  Jet U = u->jet(x, 1);
  Complex ux = U.derivative(1, 0), uy = U.derivative(0, 1), uv = U.value();
  Complex fx = beta.a[0][0]->value(x) * ux + beta.a[0][1]->value(x) * uy + beta.b[2]->value(x) * uv;
  Complex fy = beta.a[1][0]->value(x) * ux + beta.a[1][1]->value(x) * uy + beta.b[3]->value(x) * uv;
  return nu.x() * fx + nu.y() * fy;
}

}  // namespace cornerfem
