#include "fem/manufactured.hpp"

namespace cornerfem {

ManufacturedProblem manufactured_problem(const CoefficientSet& beta, FieldPtr u_exact) {
  ManufacturedProblem p;
  p.u = u_exact;
  CoefficientSet b = beta;
  p.f = make_field([b, u_exact](const Vec2& x, int ord) { return apply_jet(b, u_exact, x, ord); });
  p.h = [b, u_exact](const Vec2& x, const Vec2& nu) { return conormal(b, u_exact, x, nu); };
  return p;
}

FieldPtr sine_solution() {
  return make_field([](const Vec2& x, int ord) {
    return sin(Jet::variable_x(x.x(), ord) * Complex(M_PI)) *
           sin(Jet::variable_y(x.y(), ord) * Complex(M_PI));
  });
}

FieldPtr corner_singular_solution(std::shared_ptr<const Domain> domain, int vertex, double r0,
                                  double r1) {
  if (!(0 < r0 && r0 < r1)) throw ValidationError("cutoff radii must satisfy 0 < r0 < r1");
  double lambda = M_PI / domain->interior_angle(vertex);
  return make_field([domain, vertex, lambda, r0, r1](const Vec2& x, int ord) {
    Vec2 v = domain->vertex(vertex).pos;
    double rho = (x - v).norm();
    if (rho >= r1) return Jet::constant(0.0, ord);
    auto [rj, tj] = domain->polar_jets(vertex, x, ord);
    Jet u = pow(rj, lambda) * sin(tj * Complex(lambda));
    if (rho <= r0) return u;
    // C^3 blend 1 - S(t), S = 35 t^4 - 84 t^5 + 70 t^6 - 20 t^7
    Jet t = (rj - Complex(r0)) * Complex(1.0 / (r1 - r0));
    Jet t4 = t * t * t * t;
    Jet s = t4 * (Complex(35.0) + t * (Complex(-84.0) + t * (Complex(70.0) - t * Complex(20.0))));
    return u * (Complex(1.0) - s);
  });
}

FieldPtr bubble_solution(double px, double py) {
  return make_field([px, py](const Vec2& p, int ord) {
    Jet x = Jet::variable_x(p.x(), ord);
    Jet y = Jet::variable_y(p.y(), ord);
    Jet g = x * y * (Complex(1.0) - x) * (Complex(1.0) - y);
    Jet q = (x - Complex(px)) * (x - Complex(px)) + (y - Complex(py)) * (y - Complex(py));
    return g * q;
  });
}

FieldPtr polynomial_solution() {
  return make_field([](const Vec2& p, int ord) {
    Jet x = Jet::variable_x(p.x(), ord);
    Jet y = Jet::variable_y(p.y(), ord);
    return Complex(1.0) + x + y + x * x * y + x * y * y;
  });
}

}  // namespace cornerfem
