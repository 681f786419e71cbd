#ifndef CORNERFEM_NORMS_WEIGHTED_NORMS_HPP
#define CORNERFEM_NORMS_WEIGHTED_NORMS_HPP

#include <memory>
#include <vector>

#include "fem/fe_space.hpp"

namespace cornerfem {

/// A function evaluated element-wise: closed-form fields, FE functions, and
/// differences of the two share this interface so the norm code never cares
/// which it is handed.
class ElementFunction {
public:
  virtual ~ElementFunction() = default;
  virtual Jet jet(int element, const Vec2& x, int order) const = 0;
};

std::shared_ptr<ElementFunction> as_element_function(FieldPtr f);
std::shared_ptr<ElementFunction> as_element_function(FeFunction u);
/// u_h - u_exact.
std::shared_ptr<ElementFunction> difference(FeFunction u, FieldPtr exact);

/// Norm spec: derivative order m, weight exponent a, and the region of
/// integration (whole domain, or radial regions about a vertex for
/// chart-restricted and truncated norms).
struct WeightedNormSpec {
  int m = 0;
  double a = 0.0;
  enum class Region { Whole, VertexDisk, VertexAnnulus, OffVertexPatch } region = Region::Whole;
  int vertex = -1;
  double radius_inner = 0.0;
  double radius_outer = std::numeric_limits<double>::infinity();

  static WeightedNormSpec whole(int m, double a) { return {m, a, Region::Whole, -1, 0, 0}; }
  static WeightedNormSpec disk(int m, double a, int vertex, double radius) {
    return {m, a, Region::VertexDisk, vertex, 0.0, radius};
  }
  static WeightedNormSpec annulus(int m, double a, int vertex, double r_in, double r_out) {
    return {m, a, Region::VertexAnnulus, vertex, r_in, r_out};
  }
};

struct NormOptions {
  int quad_order = -1;    // default 2m + 4
  int vertex_rings = 4;   // dyadic rings on elements touching a vertex
  int region_depth = 6;   // subdivision depth on region-crossing elements
  bool* truncation_flag = nullptr;  // set when m exceeds the FE degree
};

/// Kondratiev norm (sum over |alpha| <= m of the squared weighted derivative
/// L^2 norms, square root taken).
double kondratiev_norm(const ElementFunction& u, const WeightedNormSpec& spec,
                       const Domain& domain, const Mesh& mesh, const NormOptions& opts = {});

double kondratiev_norm(const FieldPtr& u, const WeightedNormSpec& spec, const Domain& domain,
                       const Mesh& mesh, const NormOptions& opts = {});
double kondratiev_norm(const FeFunction& u, const WeightedNormSpec& spec, const Domain& domain,
                       const NormOptions& opts = {});

/// Chart-based equivalent norm: sum over vertex charts (X = r d_r,
/// Y = d_theta on the chart disk) and the off-vertex patch (X = d_x, Y = d_y
/// where all vertices are further than delta0/2) of the L^2 norms of
/// r^{-a} X^i Y^j u, i + j <= m.
double chart_norm(const ElementFunction& u, int m, double a, const Domain& domain,
                  const Mesh& mesh, const NormOptions& opts = {});

/// Plain L^2 / H^1 norms via the same machinery.
double l2_norm(const ElementFunction& u, const Domain& domain, const Mesh& mesh,
               const NormOptions& opts = {});
double h1_norm(const ElementFunction& u, const Domain& domain, const Mesh& mesh,
               const NormOptions& opts = {});

struct EquivalenceReport {
  struct Row {
    double kondratiev, chart, ratio;
    double ratio_refined;  // same function, one uniform refinement
    double drift;          // |ratio_refined / ratio - 1|
  };
  std::vector<Row> rows;
  double ratio_min = 0, ratio_max = 0, ratio_median = 0;
  double max_drift = 0;
  bool drift_violation = false;  // any drift > 10%
};

/// Ratio statistics chart_norm / kondratiev_norm for a family of functions
/// given on a mesh and its uniform refinement.
EquivalenceReport equivalence_report(
    const std::vector<std::shared_ptr<ElementFunction>>& coarse_samples,
    const std::vector<std::shared_ptr<ElementFunction>>& fine_samples, int m, double a,
    const Domain& domain, const Mesh& coarse, const Mesh& fine, const NormOptions& opts = {});

}  // namespace cornerfem

#endif
