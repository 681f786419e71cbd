#include "coeffs/field.hpp"

namespace cornerfem {

namespace {

class ConstantField final : public ScalarField {
public:
  explicit ConstantField(Complex v) : v_(v) {}
  Jet jet(const Vec2&, int order) const override { return Jet::constant(v_, order); }
  Complex constant_value() const { return v_; }

private:
  Complex v_;
};

class LambdaField final : public ScalarField {
public:
  explicit LambdaField(std::function<Jet(const Vec2&, int)> f) : f_(std::move(f)) {}
  Jet jet(const Vec2& x, int order) const override { return f_(x, order); }

private:
  std::function<Jet(const Vec2&, int)> f_;
};

}  // namespace

FieldPtr make_constant(Complex v) { return std::make_shared<ConstantField>(v); }

FieldPtr make_zero() {
  static FieldPtr zero = std::make_shared<ConstantField>(Complex(0.0));
  return zero;
}

FieldPtr make_field(std::function<Jet(const Vec2&, int)> f, int singular_exponent) {
  auto field = std::make_shared<LambdaField>(std::move(f));
  field->singular_exponent = singular_exponent;
  return field;
}

bool is_zero_field(const FieldPtr& f) {
  if (!f) return true;
  if (auto c = dynamic_cast<const ConstantField*>(f.get()))
    return c->constant_value() == Complex(0.0);
  return false;
}

FieldPtr field_sum(FieldPtr a, FieldPtr b) {
  if (is_zero_field(a)) return b;
  if (is_zero_field(b)) return a;
  int s = std::max(a->singular_exponent, b->singular_exponent);
  return make_field(
      [a, b](const Vec2& x, int ord) { return a->jet(x, ord) + b->jet(x, ord); }, s);
}

FieldPtr field_product(FieldPtr a, FieldPtr b) {
  if (is_zero_field(a) || is_zero_field(b)) return make_zero();
  int s = a->singular_exponent + b->singular_exponent;
  return make_field(
      [a, b](const Vec2& x, int ord) { return a->jet(x, ord) * b->jet(x, ord); }, s);
}

FieldPtr field_scaled(FieldPtr a, Complex s) {
  if (is_zero_field(a) || s == Complex(0.0)) return make_zero();
  int se = a->singular_exponent;
  return make_field([a, s](const Vec2& x, int ord) { return a->jet(x, ord) * s; }, se);
}

FieldPtr weight_power_scaled(std::shared_ptr<const Domain> domain, FieldPtr f, double p) {
  if (p == 0.0) return f;
  if (is_zero_field(f)) return make_zero();
  int s = f->singular_exponent + int(std::ceil(std::max(0.0, -p)));
  return make_field(
      [domain, f, p](const Vec2& x, int ord) {
        return pow(domain->weight_jet(x, ord), p) * f->jet(x, ord);
      },
      s);
}

FieldPtr weight_power(std::shared_ptr<const Domain> domain, double p) {
  return weight_power_scaled(domain, make_constant(1.0), p);
}

}  // namespace cornerfem
