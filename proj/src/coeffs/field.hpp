#ifndef CORNERFEM_COEFFS_FIELD_HPP
#define CORNERFEM_COEFFS_FIELD_HPP

#include <functional>
#include <memory>

#include "common/jet.hpp"
#include "geometry/domain.hpp"

namespace cornerfem {

/// A complex scalar field on a domain, evaluable as a Taylor jet so that all
/// partial derivatives up to the requested order come out exactly.
/// Implementations must be safe for concurrent calls.
class ScalarField {
public:
  virtual ~ScalarField() = default;
  virtual Jet jet(const Vec2& x, int order) const = 0;

  Complex value(const Vec2& x) const { return jet(x, 0).value(); }

  /// Declared decay class near vertices: the field behaves like
  /// r_Omega^{-singular_exponent}. Metadata used for validation and sampling.
  int singular_exponent = 0;
};

using FieldPtr = std::shared_ptr<const ScalarField>;

FieldPtr make_constant(Complex v);
FieldPtr make_zero();

/// Field from a jet-evaluating callable.
FieldPtr make_field(std::function<Jet(const Vec2&, int)> f, int singular_exponent = 0);

/// Pointwise combinations.
FieldPtr field_sum(FieldPtr a, FieldPtr b);
FieldPtr field_product(FieldPtr a, FieldPtr b);
FieldPtr field_scaled(FieldPtr a, Complex s);

/// r_Omega^p * f (p real; domain supplies the weight).
FieldPtr weight_power_scaled(std::shared_ptr<const Domain> domain, FieldPtr f, double p);

/// r_Omega^p as a field.
FieldPtr weight_power(std::shared_ptr<const Domain> domain, double p);

bool is_zero_field(const FieldPtr& f);

}  // namespace cornerfem

#endif
