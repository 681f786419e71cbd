#include "norms/weighted_norms.hpp"

#include <algorithm>
#include <cmath>

#include "mesh/quadrature.hpp"

namespace cornerfem {

namespace {

class FieldFunction final : public ElementFunction {
public:
  explicit FieldFunction(FieldPtr f) : f_(std::move(f)) {}
  Jet jet(int, const Vec2& x, int order) const override { return f_->jet(x, order); }

private:
  FieldPtr f_;
};

class FeFunctionAdapter final : public ElementFunction {
public:
  explicit FeFunctionAdapter(FeFunction u) : u_(std::move(u)) {}
  Jet jet(int element, const Vec2& x, int order) const override {
    return u_.element_jet(element, x, order);
  }
  int degree() const { return u_.space->degree(); }

private:
  FeFunction u_;
};

class DifferenceFunction final : public ElementFunction {
public:
  DifferenceFunction(FeFunction u, FieldPtr exact) : u_(std::move(u)), exact_(std::move(exact)) {}
  Jet jet(int element, const Vec2& x, int order) const override {
    return u_.element_jet(element, x, order) - exact_->jet(x, order);
  }

private:
  FeFunction u_;
  FieldPtr exact_;
};

// region classification for one triangle against a radial region
enum class Overlap { Inside, Outside, Crossing };

double min_dist_to_triangle(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
  double d0 = cross2(b - a, p - a), d1 = cross2(c - b, p - b), d2 = cross2(a - c, p - c);
  if (d0 >= 0 && d1 >= 0 && d2 >= 0) return 0.0;  // inside (ccw triangle)
  auto seg = [&](const Vec2& u, const Vec2& v) {
    Vec2 d = v - u;
    double t = std::clamp((p - u).dot(d) / d.squaredNorm(), 0.0, 1.0);
    return (p - (u + t * d)).norm();
  };
  return std::min({seg(a, b), seg(b, c), seg(c, a)});
}

Overlap classify(const WeightedNormSpec& spec, const Domain& domain, const Vec2& a, const Vec2& b,
                 const Vec2& c) {
  switch (spec.region) {
    case WeightedNormSpec::Region::Whole:
      return Overlap::Inside;
    case WeightedNormSpec::Region::VertexDisk:
    case WeightedNormSpec::Region::VertexAnnulus: {
      const Vec2 v = domain.vertex(spec.vertex).pos;
      double mind = min_dist_to_triangle(v, a, b, c);
      double maxd = std::max({(a - v).norm(), (b - v).norm(), (c - v).norm()});
      double rin = (spec.region == WeightedNormSpec::Region::VertexAnnulus) ? spec.radius_inner : 0.0;
      if (mind >= rin && maxd <= spec.radius_outer) return Overlap::Inside;
      if (maxd <= rin || mind >= spec.radius_outer) return Overlap::Outside;
      return Overlap::Crossing;
    }
    case WeightedNormSpec::Region::OffVertexPatch: {
      // inside iff every vertex is further than radius_inner from the triangle
      bool crossing = false;
      for (int v = 0; v < domain.n_vertices(); ++v) {
        const Vec2 p = domain.vertex(v).pos;
        double mind = min_dist_to_triangle(p, a, b, c);
        double maxd = std::max({(a - p).norm(), (b - p).norm(), (c - p).norm()});
        if (maxd <= spec.radius_inner) return Overlap::Outside;
        if (mind < spec.radius_inner) crossing = true;
      }
      return crossing ? Overlap::Crossing : Overlap::Inside;
    }
  }
  return Overlap::Inside;
}

bool point_in_region(const WeightedNormSpec& spec, const Domain& domain, const Vec2& x) {
  switch (spec.region) {
    case WeightedNormSpec::Region::Whole:
      return true;
    case WeightedNormSpec::Region::VertexDisk:
      return (x - domain.vertex(spec.vertex).pos).norm() <= spec.radius_outer;
    case WeightedNormSpec::Region::VertexAnnulus: {
      double r = (x - domain.vertex(spec.vertex).pos).norm();
      return r >= spec.radius_inner && r <= spec.radius_outer;
    }
    case WeightedNormSpec::Region::OffVertexPatch: {
      double dist;
      domain.nearest_vertex(x, &dist);
      return dist > spec.radius_inner;
    }
  }
  return true;
}

// Integrates `density` over one (sub)triangle restricted to the region,
// recursing on region-crossing triangles.
template <typename Density>
void integrate_region(const WeightedNormSpec& spec, const Domain& domain,
                      const TriangleRule& rule, const Vec2& a, const Vec2& b, const Vec2& c,
                      int depth, const Density& density, double* acc) {
  Overlap ov = classify(spec, domain, a, b, c);
  if (ov == Overlap::Outside) return;
  if (ov == Overlap::Crossing && depth > 0) {
    Vec2 mab = 0.5 * (a + b), mbc = 0.5 * (b + c), mca = 0.5 * (c + a);
    integrate_region(spec, domain, rule, a, mab, mca, depth - 1, density, acc);
    integrate_region(spec, domain, rule, mab, b, mbc, depth - 1, density, acc);
    integrate_region(spec, domain, rule, mca, mbc, c, depth - 1, density, acc);
    integrate_region(spec, domain, rule, mab, mbc, mca, depth - 1, density, acc);
    return;
  }
  MappedQuadrature q = map_rule(rule, a, b, c);
  for (std::size_t k = 0; k < q.points.size(); ++k) {
    if (ov == Overlap::Crossing && !point_in_region(spec, domain, q.points[k])) continue;
    density(q.points[k], q.weights[k], acc);
  }
}

// Element loop with dyadic subdivision toward domain vertices. `density`
// accumulates into a fixed-size accumulator per element; results are reduced
// in deterministic element order.
template <typename DensityFactory>
std::vector<double> integrate_mesh(const WeightedNormSpec& spec, const Domain& domain,
                                   const Mesh& mesh, const NormOptions& opts, int n_acc,
                                   const DensityFactory& factory) {
  const TriangleRule& rule = TriangleRule::get(opts.quad_order > 0 ? opts.quad_order
                                                                   : 2 * std::max(1, spec.m) + 4);
  std::vector<std::vector<double>> partial(std::size_t(num_threads()) + 1,
                                           std::vector<double>(std::size_t(n_acc), 0.0));
  std::size_t nchunks = 0;
  parallel_chunks(
      std::size_t(mesh.n_triangles()),
      [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        std::vector<double>& acc = partial[chunk];
        for (std::size_t t = begin; t < end; ++t) {
          auto density = factory(int(t));
          auto corners = mesh.corners(int(t));
          // dyadic rings when an element corner sits on a domain vertex
          int touching = -1;
          for (int k = 0; k < 3 && touching < 0; ++k)
            for (int v = 0; v < domain.n_vertices(); ++v)
              if ((corners[std::size_t(k)] - domain.vertex(v).pos).norm() < 1e-13) {
                touching = k;
                break;
              }
          if (touching >= 0 && opts.vertex_rings > 0) {
            auto subs = dyadic_split_toward(corners[0], corners[1], corners[2], touching,
                                            opts.vertex_rings);
            for (const auto& s : subs)
              integrate_region(spec, domain, rule, s[0], s[1], s[2], opts.region_depth, density,
                               acc.data());
          } else {
            integrate_region(spec, domain, rule, corners[0], corners[1], corners[2],
                             opts.region_depth, density, acc.data());
          }
        }
      },
      &nchunks);
  std::vector<double> total(std::size_t(n_acc), 0.0);
  for (std::size_t c = 0; c < nchunks; ++c)
    for (int i = 0; i < n_acc; ++i) total[std::size_t(i)] += partial[c][std::size_t(i)];
  return total;
}

}  // namespace

std::shared_ptr<ElementFunction> as_element_function(FieldPtr f) {
  return std::make_shared<FieldFunction>(std::move(f));
}
std::shared_ptr<ElementFunction> as_element_function(FeFunction u) {
  return std::make_shared<FeFunctionAdapter>(std::move(u));
}
std::shared_ptr<ElementFunction> difference(FeFunction u, FieldPtr exact) {
  return std::make_shared<DifferenceFunction>(std::move(u), std::move(exact));
}

double kondratiev_norm(const ElementFunction& u, const WeightedNormSpec& spec,
                       const Domain& domain, const Mesh& mesh, const NormOptions& opts) {
  if (opts.truncation_flag) {
    if (auto fe = dynamic_cast<const FeFunctionAdapter*>(&u))
      *opts.truncation_flag = spec.m > fe->degree();
  }
  auto factory = [&](int element) {
    return [&u, &spec, &domain, element](const Vec2& x, double w, double* acc) {
      Jet j = u.jet(element, x, spec.m);
      double r = domain.weight(x);
      double sum = 0;
      for (int d = 0; d <= spec.m; ++d) {
        double rp = std::pow(r, 2.0 * (d - spec.a));
        for (int k = 0; k <= d; ++k) sum += rp * std::norm(j.derivative(d - k, k));
      }
      acc[0] += w * sum;
    };
  };
  std::vector<double> total = integrate_mesh(spec, domain, mesh, opts, 1, factory);
  return std::sqrt(total[0]);
}

double kondratiev_norm(const FieldPtr& u, const WeightedNormSpec& spec, const Domain& domain,
                       const Mesh& mesh, const NormOptions& opts) {
  FieldFunction f(u);
  return kondratiev_norm(f, spec, domain, mesh, opts);
}

double kondratiev_norm(const FeFunction& u, const WeightedNormSpec& spec, const Domain& domain,
                       const NormOptions& opts) {
  FeFunctionAdapter f(u);
  return kondratiev_norm(f, spec, domain, u.space->mesh(), opts);
}

double l2_norm(const ElementFunction& u, const Domain& domain, const Mesh& mesh,
               const NormOptions& opts) {
  return kondratiev_norm(u, WeightedNormSpec::whole(0, 0.0), domain, mesh, opts);
}

double h1_norm(const ElementFunction& u, const Domain& domain, const Mesh& mesh,
               const NormOptions& opts) {
  NormOptions o = opts;
  if (o.quad_order < 0) o.quad_order = 6;
  WeightedNormSpec spec = WeightedNormSpec::whole(1, 0.0);
  auto factory = [&](int element) {
    return [&u, element](const Vec2& x, double w, double* acc) {
      Jet j = u.jet(element, x, 1);
      acc[0] += w * (std::norm(j.value()) + std::norm(j.derivative(1, 0)) +
                     std::norm(j.derivative(0, 1)));
    };
  };
  std::vector<double> total = integrate_mesh(spec, domain, mesh, o, 1, factory);
  return std::sqrt(total[0]);
}

double chart_norm(const ElementFunction& u, int m, double a, const Domain& domain,
                  const Mesh& mesh, const NormOptions& opts) {
  const int n_terms = (m + 1) * (m + 2) / 2;
  double total = 0;

  // vertex charts: X = r d_r = u d_x + v d_y, Y = d_theta = -v d_x + u d_y
  for (int vtx = 0; vtx < domain.n_vertices(); ++vtx) {
    WeightedNormSpec spec = WeightedNormSpec::disk(m, a, vtx, domain.delta0());
    const Vec2 origin = domain.vertex(vtx).pos;
    auto factory = [&, origin](int element) {
      return [&u, &domain, m, a, origin, element](const Vec2& x, double w, double* acc) {
        Jet base = u.jet(element, x, m);
        double r = domain.weight(x);
        double rw = std::pow(r, -2.0 * a);
        // iterate X^i Y^j via repeated first-order applications
        Jet ux = Jet::variable_x(x.x(), m) - Complex(origin.x());
        Jet uy = Jet::variable_y(x.y(), m) - Complex(origin.y());
        std::vector<Jet> xpow(std::size_t(m + 1));
        xpow[0] = base;
        for (int i = 1; i <= m; ++i)
          xpow[std::size_t(i)] =
              ux.truncated(m - i) * xpow[std::size_t(i - 1)].dx() +
              uy.truncated(m - i) * xpow[std::size_t(i - 1)].dy();
        int idx = 0;
        for (int i = 0; i <= m; ++i) {
          Jet cur = xpow[std::size_t(i)];
          for (int j = 0; i + j <= m; ++j) {
            acc[idx++] += w * rw * std::norm(cur.value());
            if (i + j < m)
              cur = (-1.0) * uy.truncated(cur.order() - 1) * cur.dx() +
                    ux.truncated(cur.order() - 1) * cur.dy();
          }
        }
      };
    };
    std::vector<double> terms = integrate_mesh(spec, domain, mesh, opts, n_terms, factory);
    for (double t : terms) total += std::sqrt(t);
  }

  // off-vertex patch: plain Cartesian derivatives where no vertex is near
  {
    WeightedNormSpec spec;
    spec.m = m;
    spec.a = a;
    spec.region = WeightedNormSpec::Region::OffVertexPatch;
    spec.radius_inner = 0.5 * domain.delta0();
    auto factory = [&](int element) {
      return [&u, &domain, m, a, element](const Vec2& x, double w, double* acc) {
        Jet j = u.jet(element, x, m);
        double rw = std::pow(domain.weight(x), -2.0 * a);
        int idx = 0;
        for (int i = 0; i <= m; ++i)
          for (int jj = 0; i + jj <= m; ++jj) acc[idx++] += w * rw * std::norm(j.derivative(i, jj));
      };
    };
    std::vector<double> terms = integrate_mesh(spec, domain, mesh, opts, n_terms, factory);
    for (double t : terms) total += std::sqrt(t);
  }
  return total;
}

EquivalenceReport equivalence_report(
    const std::vector<std::shared_ptr<ElementFunction>>& coarse_samples,
    const std::vector<std::shared_ptr<ElementFunction>>& fine_samples, int m, double a,
    const Domain& domain, const Mesh& coarse, const Mesh& fine, const NormOptions& opts) {
  if (coarse_samples.empty()) throw ValidationError("equivalence_report: empty sample list");
  if (coarse_samples.size() != fine_samples.size())
    throw ValidationError("equivalence_report: sample lists differ in length");

  EquivalenceReport rep;
  std::vector<double> ratios;
  for (std::size_t k = 0; k < coarse_samples.size(); ++k) {
    EquivalenceReport::Row row{};
    WeightedNormSpec spec = WeightedNormSpec::whole(m, a);
    row.kondratiev = kondratiev_norm(*coarse_samples[k], spec, domain, coarse, opts);
    row.chart = chart_norm(*coarse_samples[k], m, a, domain, coarse, opts);
    row.ratio = row.chart / row.kondratiev;
    double kon_f = kondratiev_norm(*fine_samples[k], spec, domain, fine, opts);
    double chart_f = chart_norm(*fine_samples[k], m, a, domain, fine, opts);
    row.ratio_refined = chart_f / kon_f;
    row.drift = std::abs(row.ratio_refined / row.ratio - 1.0);
    rep.max_drift = std::max(rep.max_drift, row.drift);
    ratios.push_back(row.ratio);
    rep.rows.push_back(row);
  }
  std::sort(ratios.begin(), ratios.end());
  rep.ratio_min = ratios.front();
  rep.ratio_max = ratios.back();
  rep.ratio_median = ratios[ratios.size() / 2];
  rep.drift_violation = rep.max_drift > 0.10;
  return rep;
}

}  // namespace cornerfem
