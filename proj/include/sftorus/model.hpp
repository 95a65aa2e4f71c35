#pragma once

// Slow-fast families on the torus in skew-product form
//   x' = f(x, y; rho),   y' = eps * g(x, y, eps; rho).
// Fields are written once as templates over the scalar type and evaluated
// with doubles, dual numbers (exact first partials) or 7th-order jets.

#include <sftorus/jet.hpp>
#include <sftorus/types.hpp>

#include <Eigen/Core>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sftorus {

enum class SlowVariant { Unit, Cosine };
enum class ModelKind { SineLink, Graph, TrigPoly };

struct SineLinkParams {
  int m = 1;
  int k = 1;
  int l = 1;
  SlowVariant slow = SlowVariant::Unit;
};

/// phi(x) = q x + c0 + sum_n a_n cos(n x) + b_n sin(n x), so that
/// phi(x + 2pi) = phi(x) + 2pi q.
struct PhiSeries {
  int q = 1;
  double c0 = 0.0;
  std::vector<double> a;  // a[n-1] multiplies cos(n x)
  std::vector<double> b;  // b[n-1] multiplies sin(n x)

  template <typename T>
  T operator()(const T& x) const {
    using std::cos;
    using std::sin;
    T r = double(q) * x + c0;
    const std::size_t n = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
      const T arg = double(i + 1) * x;
      if (i < a.size() && a[i] != 0.0) r = r + a[i] * cos(arg);
      if (i < b.size() && b[i] != 0.0) r = r + b[i] * sin(arg);
    }
    return r;
  }

  /// n-th derivative at x (n >= 1).
  double derivative(double x, int n) const;

  /// Parses "q:1,c0:0,s1:1,c2:0.5" (q, constant, cosine cN, sine sN terms).
  static PhiSeries parse(const std::string& text);
  std::string to_string() const;
};

/// Real trigonometric polynomial
///   sum_{i,j} C(i,j) cos(p x + r y) + S(i,j) sin(p x + r y),
/// with p = i - P, r = j - R for a (2P+1) x (2R+1) coefficient matrix.
struct TrigPoly {
  Eigen::MatrixXd cos_coeffs;
  Eigen::MatrixXd sin_coeffs;

  int half_rows() const { return static_cast<int>(cos_coeffs.rows() / 2); }
  int half_cols() const { return static_cast<int>(cos_coeffs.cols() / 2); }

  /// Throws InvalidArgument on mismatched or even-sized matrices.
  void validate() const;

  template <typename T>
  T operator()(const T& x, const T& y) const {
    using std::cos;
    using std::sin;
    T r(0.0);
    const int P = half_rows();
    const int R = half_cols();
    for (int i = 0; i < cos_coeffs.rows(); ++i) {
      for (int j = 0; j < cos_coeffs.cols(); ++j) {
        const double c = cos_coeffs(i, j);
        const double s = sin_coeffs(i, j);
        if (c == 0.0 && s == 0.0) continue;
        const T arg = double(i - P) * x + double(j - R) * y;
        if (c != 0.0) r = r + c * cos(arg);
        if (s != 0.0) r = r + s * sin(arg);
      }
    }
    return r;
  }
};

class SlowFastModel {
 public:
  virtual ~SlowFastModel() = default;

  virtual double fast(double x, double y) const = 0;
  virtual Dual fast(const Dual& x, const Dual& y) const = 0;
  virtual Taylor7 fast(const Taylor7& x, const Taylor7& y) const = 0;
  virtual double slow(double x, double y, double eps) const = 0;
  virtual Dual slow(const Dual& x, const Dual& y, double eps) const = 0;

  virtual ModelKind kind() const = 0;
  virtual std::optional<SineLinkParams> sine_link() const { return std::nullopt; }
  virtual const PhiSeries* phi() const { return nullptr; }
  virtual SlowVariant slow_variant() const { return SlowVariant::Unit; }

  const std::string& label() const { return label_; }
  /// Family parameters rho, flattened.
  const Eigen::VectorXd& params() const { return params_; }

  /// (f_x, f_y), exact.
  Vec2 fast_gradient(double x, double y) const;
  /// (g_x, g_y), exact.
  Vec2 slow_gradient(double x, double y, double eps) const;
  /// Taylor coefficients of t -> f(x + t, y), i.e. along the fast fiber.
  Taylor7 fast_fiber_jet(double x, double y) const;
  /// Taylor coefficients of t -> f(x + t dx, y + t dy).
  Taylor7 fast_directional_jet(double x, double y, double dx, double dy) const;
  /// div X_eps = f_x + eps g_y.
  double divergence(double x, double y, double eps) const;

 protected:
  SlowFastModel(std::string label, Eigen::VectorXd params)
      : label_(std::move(label)), params_(std::move(params)) {}

 private:
  std::string label_;
  Eigen::VectorXd params_;
};

using Model = std::shared_ptr<const SlowFastModel>;

/// x' = sin(m(l y - k x)), y' = eps (unit) or eps cos(y - x) (cosine).
Model sine_link_model(int m, int k, int l, SlowVariant slow = SlowVariant::Unit);
/// x' = sin(y - phi(x)), y' = eps (unit) or eps cos(y - phi(x)) (cosine).
Model graph_model(PhiSeries phi, SlowVariant slow = SlowVariant::Unit);
/// x' = f(x, y), y' = eps g(x, y) for user trigonometric polynomials.
Model trig_model(TrigPoly f, TrigPoly g, std::string label = "trig");

/// x' = sin(y - x), y' = eps.
Model diagonal_model();
/// Graph model with phi(x) = x + sin x: one cubic contact per critical curve.
Model odd_contact_model();

/// Max |f(x,y) - f(x+2pi,y)|, |f(x,y) - f(x,y+2pi)| and the same for g at
/// n random points drawn with the given seed.
double periodicity_residue(const SlowFastModel& model, int n = 100,
                           std::uint64_t seed = 0);

/// The integrated field (f, eps g, div) at a lift point.
inline Vec3 augmented_field(const SlowFastModel& model, double x, double y,
                            double eps) {
  const Dual fx = model.fast(Dual::variable(x), Dual(y));
  double g = 0.0;
  double gy = 0.0;
  if (eps != 0.0) {
    const Dual gd = model.slow(Dual(x), Dual::variable(y), eps);
    g = gd.value();
    gy = gd.coeff(1);
  }
  return {fx.value(), eps * g, fx.coeff(1) + eps * gy};
}

}  // namespace sftorus
