#ifndef CORNERFEM_COMMON_JET_HPP
#define CORNERFEM_COMMON_JET_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace cornerfem {

using Complex = std::complex<double>;

/// Truncated bivariate Taylor expansion around a base point.
///
/// A Jet of order m stores the coefficients of (x-x0)^i (y-y0)^j for
/// i+j <= m, so arithmetic on jets propagates all partial derivatives up to
/// total order m exactly (in floating point). Coefficients are complex since
/// the operator coefficients of the workbench are complex valued.
class Jet {
public:
  static constexpr int kMaxOrder = 6;
  static constexpr int kMaxCoeffs = (kMaxOrder + 1) * (kMaxOrder + 2) / 2;

  Jet() : ord_(0) { c_.fill(Complex(0.0)); }

  explicit Jet(int order) : ord_(check_order(order)) { c_.fill(Complex(0.0)); }

  static Jet constant(Complex v, int order) {
    Jet j(order);
    j.c_[0] = v;
    return j;
  }

  // Jet of the coordinate function x (resp. y) around the base point value.
  static Jet variable_x(double x0, int order) {
    Jet j(order);
    j.c_[0] = x0;
    if (order >= 1) j.c_[idx(1, 0)] = 1.0;
    return j;
  }
  static Jet variable_y(double y0, int order) {
    Jet j(order);
    j.c_[0] = y0;
    if (order >= 1) j.c_[idx(0, 1)] = 1.0;
    return j;
  }

  int order() const { return ord_; }
  Complex value() const { return c_[0]; }

  Complex coeff(int i, int j) const {
    return (i + j <= ord_) ? c_[idx(i, j)] : Complex(0.0);
  }
  Complex& coeff_ref(int i, int j) { return c_[idx(i, j)]; }

  /// Partial derivative d^{i+j} f / dx^i dy^j at the base point.
  Complex derivative(int i, int j) const {
    if (i + j > ord_) throw std::runtime_error("Jet: derivative order exceeds jet order");
    return c_[idx(i, j)] * double(factorial(i) * factorial(j));
  }

  /// Jet of df/dx (one order lower).
  Jet dx() const {
    Jet r(std::max(0, ord_ - 1));
    for (int d = 0; d <= r.ord_; ++d)
      for (int j = 0; j <= d; ++j) {
        int i = d - j;
        r.c_[idx(i, j)] = c_[idx(i + 1, j)] * double(i + 1);
      }
    return r;
  }
  /// Jet of df/dy (one order lower).
  Jet dy() const {
    Jet r(std::max(0, ord_ - 1));
    for (int d = 0; d <= r.ord_; ++d)
      for (int j = 0; j <= d; ++j) {
        int i = d - j;
        r.c_[idx(i, j)] = c_[idx(i, j + 1)] * double(j + 1);
      }
    return r;
  }

  Jet truncated(int order) const {
    order = std::min(order, ord_);
    Jet r(order);
    for (int d = 0; d <= order; ++d)
      for (int j = 0; j <= d; ++j) r.c_[idx(d - j, j)] = c_[idx(d - j, j)];
    return r;
  }

  Jet operator-() const {
    Jet r(ord_);
    for (int k = 0; k < ncoeffs(ord_); ++k) r.c_[k] = -c_[k];
    return r;
  }

  Jet& operator+=(const Jet& o) {
    align(o);
    for (int k = 0; k < ncoeffs(ord_); ++k) c_[k] += o.coeff_flat(k);
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    align(o);
    for (int k = 0; k < ncoeffs(ord_); ++k) c_[k] -= o.coeff_flat(k);
    return *this;
  }
  Jet& operator*=(Complex s) {
    for (int k = 0; k < ncoeffs(ord_); ++k) c_[k] *= s;
    return *this;
  }
  Jet& operator+=(Complex s) { c_[0] += s; return *this; }
  Jet& operator-=(Complex s) { c_[0] -= s; return *this; }

  friend Jet operator+(Jet a, const Jet& b) { a += b; return a; }
  friend Jet operator-(Jet a, const Jet& b) { a -= b; return a; }
  friend Jet operator+(Jet a, Complex s) { a += s; return a; }
  friend Jet operator+(Complex s, Jet a) { a += s; return a; }
  friend Jet operator-(Jet a, Complex s) { a -= s; return a; }
  friend Jet operator-(Complex s, const Jet& a) { return (-a) + s; }
  friend Jet operator*(Jet a, Complex s) { a *= s; return a; }
  friend Jet operator*(Complex s, Jet a) { a *= s; return a; }
  friend Jet operator*(Jet a, double s) { a *= Complex(s); return a; }
  friend Jet operator*(double s, Jet a) { a *= Complex(s); return a; }
  friend Jet operator/(Jet a, Complex s) { a *= Complex(1.0) / s; return a; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    int m = std::min(a.ord_, b.ord_);
    Jet r(m);
    for (int da = 0; da <= m; ++da)
      for (int ja = 0; ja <= da; ++ja) {
        int ia = da - ja;
        Complex ca = a.c_[idx(ia, ja)];
        if (ca == Complex(0.0)) continue;
        for (int db = 0; db + da <= m; ++db)
          for (int jb = 0; jb <= db; ++jb) {
            int ib = db - jb;
            r.c_[idx(ia + ib, ja + jb)] += ca * b.c_[idx(ib, jb)];
          }
      }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * b.reciprocal(); }

  /// Compose a univariate analytic function with this jet.
  /// ders[k] must hold f^{(k)}(value()) for k = 0..order().
  Jet compose(const std::array<Complex, kMaxOrder + 1>& ders) const {
    Jet hat = *this;
    hat.c_[0] = 0.0;  // nilpotent part
    Jet r = Jet::constant(ders[0], ord_);
    Jet p = Jet::constant(1.0, ord_);
    double kfac = 1.0;
    for (int k = 1; k <= ord_; ++k) {
      p = p * hat;
      kfac *= k;
      r += p * (ders[std::size_t(k)] / kfac);
    }
    return r;
  }

  Jet reciprocal() const {
    Complex v = c_[0];
    if (v == Complex(0.0)) throw std::runtime_error("Jet: reciprocal of zero value");
    std::array<Complex, kMaxOrder + 1> d{};
    Complex p = Complex(1.0) / v;  // f = 1/z, f^{(k)} = (-1)^k k! z^{-k-1}
    double sign = 1.0, kfac = 1.0;
    for (int k = 0; k <= ord_; ++k) {
      d[std::size_t(k)] = sign * kfac * p;
      p /= v;
      sign = -sign;
      kfac *= (k + 1);
    }
    return compose(d);
  }

  friend Jet exp(const Jet& a) {
    std::array<Complex, kMaxOrder + 1> d{};
    Complex e = std::exp(a.c_[0]);
    for (int k = 0; k <= a.ord_; ++k) d[std::size_t(k)] = e;
    return a.compose(d);
  }

  /// Principal branch complex logarithm.
  friend Jet log(const Jet& a) {
    Complex v = a.c_[0];
    if (v == Complex(0.0)) throw std::runtime_error("Jet: log of zero value");
    std::array<Complex, kMaxOrder + 1> d{};
    d[0] = std::log(v);
    Complex p = Complex(1.0) / v;
    double sign = 1.0, kfac = 1.0;
    for (int k = 1; k <= a.ord_; ++k) {
      d[std::size_t(k)] = sign * kfac * p;  // (-1)^{k-1} (k-1)! z^{-k}
      p /= v;
      sign = -sign;
      kfac *= k;
    }
    return a.compose(d);
  }

  friend Jet sin(const Jet& a) {
    std::array<Complex, kMaxOrder + 1> d{};
    Complex s = std::sin(a.c_[0]), c = std::cos(a.c_[0]);
    const Complex cyc[4] = {s, c, -s, -c};
    for (int k = 0; k <= a.ord_; ++k) d[std::size_t(k)] = cyc[k % 4];
    return a.compose(d);
  }
  friend Jet cos(const Jet& a) {
    std::array<Complex, kMaxOrder + 1> d{};
    Complex s = std::sin(a.c_[0]), c = std::cos(a.c_[0]);
    const Complex cyc[4] = {c, -s, -c, s};
    for (int k = 0; k <= a.ord_; ++k) d[std::size_t(k)] = cyc[k % 4];
    return a.compose(d);
  }

  friend Jet sqrt(const Jet& a) { return pow(a, 0.5); }

  /// z^p for constant exponent p; integer exponents use repeated products so
  /// that negative bases stay on the expected branch.
  friend Jet pow(const Jet& a, double p) {
    double ip;
    if (std::modf(p, &ip) == 0.0 && std::abs(p) <= 32) {
      int n = int(ip);
      Jet r = Jet::constant(1.0, a.ord_);
      Jet base = (n < 0) ? a.reciprocal() : a;
      for (int k = 0; k < std::abs(n); ++k) r = r * base;
      return r;
    }
    Complex v = a.c_[0];
    if (v == Complex(0.0)) throw std::runtime_error("Jet: pow of zero value with non-integer exponent");
    std::array<Complex, kMaxOrder + 1> d{};
    Complex coef = std::pow(v, Complex(p));
    double fac = 1.0;
    for (int k = 0; k <= a.ord_; ++k) {
      d[std::size_t(k)] = fac * coef;
      coef /= v;
      fac *= (p - k);
    }
    return a.compose(d);
  }

  /// Real part (coefficient-wise) and imaginary part as real-valued jets.
  Jet real_part() const {
    Jet r(ord_);
    for (int k = 0; k < ncoeffs(ord_); ++k) r.c_[k] = c_[k].real();
    return r;
  }
  Jet imag_part() const {
    Jet r(ord_);
    for (int k = 0; k < ncoeffs(ord_); ++k) r.c_[k] = c_[k].imag();
    return r;
  }

  static int ncoeffs(int order) { return (order + 1) * (order + 2) / 2; }

private:
  static int check_order(int order) {
    if (order < 0 || order > kMaxOrder) throw std::runtime_error("Jet: unsupported order");
    return order;
  }
  static int idx(int i, int j) {
    int d = i + j;
    return d * (d + 1) / 2 + j;
  }
  static long factorial(int n) {
    long f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
  }
  Complex coeff_flat(int k) const { return c_[std::size_t(k)]; }
  void align(const Jet& o) { ord_ = std::min(ord_, o.ord_); }

  std::array<Complex, kMaxCoeffs> c_;
  int ord_;
};

/// atan2(y, x) as a jet (principal value in (-pi, pi]); both arguments must
/// be real-valued jets and (x,y) != (0,0) at the base point.
inline Jet jet_atan2(const Jet& y, const Jet& x) {
  Jet z = x + Complex(0.0, 1.0) * y;
  return log(z).imag_part();
}

}  // namespace cornerfem

#endif
