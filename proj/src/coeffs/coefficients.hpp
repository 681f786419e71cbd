#ifndef CORNERFEM_COEFFS_COEFFICIENTS_HPP
#define CORNERFEM_COEFFS_COEFFICIENTS_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "coeffs/field.hpp"
#include "mesh/mesh.hpp"

namespace cornerfem {

/// Coefficient tuple beta = (a_ij, b_i, c) of the divergence-form operator
///   p_beta u = -sum_ij d_i(a_ij d_j u) + sum_i b_i d_i u
///              - sum_i d_i(b_{2+i} u) + c u .
/// b[0], b[1] are the convective coefficients, b[2], b[3] sit inside the
/// divergence. Immutable; fields must be thread-safe.
struct CoefficientSet {
  std::shared_ptr<const Domain> domain;
  std::array<std::array<FieldPtr, 2>, 2> a;
  std::array<FieldPtr, 4> b;
  FieldPtr c;
  double weight_shift = 0.0;  // accumulated conjugation shift
  int max_order = 4;          // derivative closures available up to this order

  static CoefficientSet laplace(std::shared_ptr<const Domain> domain);
  static CoefficientSet schroedinger(std::shared_ptr<const Domain> domain, double kappa = 1.0);
  static CoefficientSet variable_demo(std::shared_ptr<const Domain> domain);

  /// "laplace", "schroedinger kappa=0.5", "variable-demo".
  static CoefficientSet named(const std::string& spec, std::shared_ptr<const Domain> domain);

  /// Expression-table form: keys a11, a12, a21, a22, b1..b4, c (all optional;
  /// a defaults to the identity, the rest to zero).
  static CoefficientSet from_expressions(
      const std::vector<std::pair<std::string, std::string>>& fields,
      std::shared_ptr<const Domain> domain);

  /// Checks declared singular exponents: s(a_ij) = 0, s(b_i) <= 1, s(c) <= 2.
  void validate() const;

  /// beta scaled by a complex factor (acts linearly on the form).
  CoefficientSet scaled(Complex s) const;
};

/// Fixed point cloud over which W^{m,inf}-type sups are estimated: the
/// quadrature cloud of a reference mesh refined four times, plus dyadic rings
/// near each vertex so singular factors are sampled where they peak.
struct SampleCloud {
  std::vector<Vec2> points;
  static SampleCloud reference(const Domain& domain);
};

/// Sampled sup over the cloud of max_{|alpha| <= m} |r^{|alpha|} d^alpha f|.
double wminf_norm(const std::function<Jet(const Vec2&, int)>& f, int m, const Domain& domain,
                  const SampleCloud& cloud);
double wminf_norm(const FieldPtr& f, int m, const Domain& domain, const SampleCloud& cloud);

/// Z_m norm: max of |a_ij|, |r b_i|, |r^2 c| in W^{m,inf} (Eq. above).
double zm_norm(const CoefficientSet& beta, int m, const SampleCloud& cloud);
double zm_norm(const CoefficientSet& beta, int m);  // uses the cached reference cloud

/// Uniform strong ellipticity constant: inf over the cloud of the smallest
/// eigenvalue of (a + a^*)/2. Nonpositive values signal non-ellipticity.
double c_use(const CoefficientSet& beta, const SampleCloud& cloud);
double c_use(const CoefficientSet& beta);

/// Coefficients of r^2 p_beta on a vertex chart, in the chart operators
/// X = r d_r and Y = d_theta:
///   r^2 p_beta u = -(c11 X^2 + c12 XY + c22 Y^2) u + c1 X u + c2 Y u + c0 u.
/// On a chart of an elliptic operator, Re c22 >= C_use.
struct ChartCoefficients {
  int vertex = -1;
  std::function<Complex(double r, double theta)> c11, c12, c22, c1, c2, c0;
};

ChartCoefficients to_polar_chart(const CoefficientSet& beta, const PolarChart& chart);

/// Conjugated coefficients beta(s) with p_{beta(s)} v = r^{-s} p_beta (r^s v)
/// pointwise away from vertices. Quadratic in s; conjugate(beta, 0) == beta.
CoefficientSet conjugate(const CoefficientSet& beta, double s);

/// Strong-form value p_beta u (x); x must be off-vertex.
Complex apply_pointwise(const CoefficientSet& beta, const FieldPtr& u, const Vec2& x);

/// Jet of p_beta u at x (used to build manufactured right-hand sides).
Jet apply_jet(const CoefficientSet& beta, const FieldPtr& u, const Vec2& x, int order);

/// Conormal derivative sum_i nu_i (sum_j a_ij d_j u + b_{2+i} u) at x.
Complex conormal(const CoefficientSet& beta, const FieldPtr& u, const Vec2& x, const Vec2& nu);

}  // namespace cornerfem

#endif
