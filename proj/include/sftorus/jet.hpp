#pragma once

// Truncated univariate Taylor series ("jets") for forward-mode
// differentiation of the model fields. Jet<double, 1> is a dual number;
// higher orders give exact higher derivatives along one direction.

#include <Eigen/Core>

#include <cmath>

namespace sftorus {

template <typename Scalar, int Order>
class Jet {
 public:
  static_assert(Order >= 1, "a jet carries at least one derivative");
  using Coeffs = Eigen::Matrix<Scalar, Order + 1, 1>;

  Jet() : c_(Coeffs::Zero()) {}
  Jet(Scalar value) : c_(Coeffs::Zero()) { c_[0] = value; }  // NOLINT

  /// Independent variable: value + t.
  static Jet variable(Scalar value) {
    Jet j(value);
    j.c_[1] = Scalar(1);
    return j;
  }

  /// value + slope * t.
  static Jet line(Scalar value, Scalar slope) {
    Jet j(value);
    j.c_[1] = slope;
    return j;
  }

  Scalar value() const { return c_[0]; }
  /// Taylor coefficient of t^n (n-th derivative divided by n!).
  Scalar coeff(int n) const { return c_[n]; }
  Scalar& coeff(int n) { return c_[n]; }
  /// n-th derivative with respect to t.
  Scalar derivative(int n) const {
    Scalar fact = 1;
    for (int i = 2; i <= n; ++i) fact *= Scalar(i);
    return c_[n] * fact;
  }
  const Coeffs& coeffs() const { return c_; }

  Jet operator-() const {
    Jet r;
    r.c_ = -c_;
    return r;
  }
  Jet& operator+=(const Jet& o) {
    c_ += o.c_;
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    c_ -= o.c_;
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    *this = *this * o;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int n = 0; n <= Order; ++n) {
      Scalar s = 0;
      for (int j = 0; j <= n; ++j) s += a.c_[j] * b.c_[n - j];
      r.c_[n] = s;
    }
    return r;
  }
  friend Jet operator*(Scalar a, Jet b) {
    b.c_ *= a;
    return b;
  }
  friend Jet operator*(Jet b, Scalar a) {
    b.c_ *= a;
    return b;
  }
  friend Jet operator+(Jet b, Scalar a) {
    b.c_[0] += a;
    return b;
  }
  friend Jet operator+(Scalar a, Jet b) {
    b.c_[0] += a;
    return b;
  }
  friend Jet operator-(Jet b, Scalar a) {
    b.c_[0] -= a;
    return b;
  }
  friend Jet operator-(Scalar a, const Jet& b) { return -b + a; }

  /// sin and cos together via the coupled recurrence s' = c u', c' = -s u'.
  friend void sincos(const Jet& u, Jet& s, Jet& c) {
    using std::cos;
    using std::sin;
    s = Jet();
    c = Jet();
    s.c_[0] = sin(u.c_[0]);
    c.c_[0] = cos(u.c_[0]);
    for (int n = 1; n <= Order; ++n) {
      Scalar ss = 0;
      Scalar cc = 0;
      for (int j = 1; j <= n; ++j) {
        ss += Scalar(j) * u.c_[j] * c.c_[n - j];
        cc += Scalar(j) * u.c_[j] * s.c_[n - j];
      }
      s.c_[n] = ss / Scalar(n);
      c.c_[n] = -cc / Scalar(n);
    }
  }
  friend Jet sin(const Jet& u) {
    Jet s, c;
    sincos(u, s, c);
    return s;
  }
  friend Jet cos(const Jet& u) {
    Jet s, c;
    sincos(u, s, c);
    return c;
  }

 private:
  Coeffs c_;
};

using Dual = Jet<double, 1>;
/// Enough orders to classify contacts up to order 7.
using Taylor7 = Jet<double, 7>;

}  // namespace sftorus
