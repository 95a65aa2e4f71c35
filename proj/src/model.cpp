#include <sftorus/model.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace sftorus {

namespace {

/// Routes every virtual evaluation to the derived class's templated f and g.
template <typename Derived>
class BasicModel : public SlowFastModel {
 public:
  using SlowFastModel::SlowFastModel;

  double fast(double x, double y) const override { return self().f(x, y); }
  Dual fast(const Dual& x, const Dual& y) const override { return self().f(x, y); }
  Taylor7 fast(const Taylor7& x, const Taylor7& y) const override {
    return self().f(x, y);
  }
  double slow(double x, double y, double) const override { return self().g(x, y); }
  Dual slow(const Dual& x, const Dual& y, double) const override {
    return self().g(x, y);
  }

 private:
  const Derived& self() const { return static_cast<const Derived&>(*this); }
};

class SineLinkModel final : public BasicModel<SineLinkModel> {
 public:
  explicit SineLinkModel(SineLinkParams p)
      : BasicModel(make_label(p), make_params(p)), p_(p) {}

  template <typename T>
  T f(const T& x, const T& y) const {
    using std::sin;
    return sin(double(p_.m) * (double(p_.l) * y - double(p_.k) * x));
  }
  template <typename T>
  T g(const T& x, const T& y) const {
    using std::cos;
    if (p_.slow == SlowVariant::Unit) return T(1.0);
    return cos(y - x);
  }

  ModelKind kind() const override { return ModelKind::SineLink; }
  std::optional<SineLinkParams> sine_link() const override { return p_; }
  SlowVariant slow_variant() const override { return p_.slow; }

 private:
  static std::string make_label(const SineLinkParams& p) {
    std::ostringstream os;
    os << "sine-link(m=" << p.m << ",k=" << p.k << ",l=" << p.l
       << (p.slow == SlowVariant::Cosine ? ",cosine)" : ")");
    return os.str();
  }
  static Eigen::VectorXd make_params(const SineLinkParams& p) {
    Eigen::VectorXd v(3);
    v << p.m, p.k, p.l;
    return v;
  }

  SineLinkParams p_;
};

class GraphModel final : public BasicModel<GraphModel> {
 public:
  GraphModel(PhiSeries phi, SlowVariant slow)
      : BasicModel("graph(" + phi.to_string() +
                       (slow == SlowVariant::Cosine ? ",cosine)" : ")"),
                   make_params(phi)),
        phi_(std::move(phi)),
        slow_(slow) {}

  template <typename T>
  T f(const T& x, const T& y) const {
    using std::sin;
    return sin(y - phi_(x));
  }
  template <typename T>
  T g(const T& x, const T& y) const {
    using std::cos;
    if (slow_ == SlowVariant::Unit) return T(1.0);
    return cos(y - phi_(x));
  }

  ModelKind kind() const override { return ModelKind::Graph; }
  const PhiSeries* phi() const override { return &phi_; }
  SlowVariant slow_variant() const override { return slow_; }

 private:
  static Eigen::VectorXd make_params(const PhiSeries& phi) {
    const std::size_t n = std::max(phi.a.size(), phi.b.size());
    Eigen::VectorXd v = Eigen::VectorXd::Zero(2 + 2 * static_cast<Eigen::Index>(n));
    v[0] = phi.q;
    v[1] = phi.c0;
    for (std::size_t i = 0; i < phi.a.size(); ++i) v[2 + 2 * i] = phi.a[i];
    for (std::size_t i = 0; i < phi.b.size(); ++i) v[3 + 2 * i] = phi.b[i];
    return v;
  }

  PhiSeries phi_;
  SlowVariant slow_;
};

class TrigModel final : public BasicModel<TrigModel> {
 public:
  TrigModel(TrigPoly f, TrigPoly g, std::string label)
      : BasicModel(std::move(label), Eigen::VectorXd()), f_(std::move(f)), g_(std::move(g)) {}

  template <typename T>
  T f(const T& x, const T& y) const {
    return f_(x, y);
  }
  template <typename T>
  T g(const T& x, const T& y) const {
    return g_(x, y);
  }

  ModelKind kind() const override { return ModelKind::TrigPoly; }

 private:
  TrigPoly f_;
  TrigPoly g_;
};

}  // namespace

double PhiSeries::derivative(double x, int n) const {
  // d^n/dx^n cos(jx) = j^n cos(jx + n pi/2), likewise for sin.
  double r = n == 1 ? double(q) : 0.0;
  const double shift = n * kPi / 2.0;
  const std::size_t count = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < count; ++i) {
    const double j = double(i + 1);
    const double scale = std::pow(j, n);
    if (i < a.size()) r += a[i] * scale * std::cos(j * x + shift);
    if (i < b.size()) r += b[i] * scale * std::sin(j * x + shift);
  }
  return r;
}

PhiSeries PhiSeries::parse(const std::string& text) {
  PhiSeries phi;
  phi.q = 0;
  std::string token;
  std::istringstream in(text);
  bool any = false;
  while (std::getline(in, token, ',')) {
    token.erase(std::remove_if(token.begin(), token.end(), ::isspace), token.end());
    if (token.empty()) continue;
    const auto colon = token.find(':');
    if (colon == std::string::npos || colon == 0)
      throw Error(ErrorCode::InvalidArgument, "phi: malformed term '" + token + "'");
    const std::string key = token.substr(0, colon);
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(token.substr(colon + 1), &used);
      if (used != token.size() - colon - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "phi: bad coefficient in '" + token + "'");
    }
    if (!std::isfinite(value))
      throw Error(ErrorCode::InvalidArgument, "phi: non-finite coefficient");
    any = true;
    if (key == "q") {
      if (value != std::round(value))
        throw Error(ErrorCode::InvalidArgument, "phi: q must be an integer");
      phi.q = static_cast<int>(value);
    } else if (key == "c0") {
      phi.c0 = value;
    } else if ((key[0] == 'c' || key[0] == 's') && key.size() > 1) {
      int n = 0;
      try {
        n = std::stoi(key.substr(1));
      } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidArgument, "phi: bad term key '" + key + "'");
      }
      if (n < 1 || n > 64) throw Error(ErrorCode::InvalidArgument, "phi: harmonic out of range");
      auto& vec = key[0] == 'c' ? phi.a : phi.b;
      if (vec.size() < static_cast<std::size_t>(n)) vec.resize(n, 0.0);
      vec[n - 1] = value;
    } else {
      throw Error(ErrorCode::InvalidArgument, "phi: unknown term key '" + key + "'");
    }
  }
  if (!any) throw Error(ErrorCode::InvalidArgument, "phi: empty coefficient list");
  return phi;
}

std::string PhiSeries::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << "q:" << q;
  if (c0 != 0.0) os << ",c0:" << c0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0.0) os << ",c" << i + 1 << ":" << a[i];
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b[i] != 0.0) os << ",s" << i + 1 << ":" << b[i];
  return os.str();
}

void TrigPoly::validate() const {
  if (cos_coeffs.rows() != sin_coeffs.rows() || cos_coeffs.cols() != sin_coeffs.cols())
    throw Error(ErrorCode::InvalidArgument, "trig polynomial: cos/sin shapes differ");
  if (cos_coeffs.size() == 0 || cos_coeffs.rows() % 2 == 0 || cos_coeffs.cols() % 2 == 0)
    throw Error(ErrorCode::InvalidArgument,
                "trig polynomial: coefficient matrices must have odd, nonzero dimensions");
  if (!cos_coeffs.allFinite() || !sin_coeffs.allFinite())
    throw Error(ErrorCode::InvalidArgument, "trig polynomial: non-finite coefficient");
}

Vec2 SlowFastModel::fast_gradient(double x, double y) const {
  const Dual dx = fast(Dual::variable(x), Dual(y));
  const Dual dy = fast(Dual(x), Dual::variable(y));
  return {dx.coeff(1), dy.coeff(1)};
}

Vec2 SlowFastModel::slow_gradient(double x, double y, double eps) const {
  const Dual dx = slow(Dual::variable(x), Dual(y), eps);
  const Dual dy = slow(Dual(x), Dual::variable(y), eps);
  return {dx.coeff(1), dy.coeff(1)};
}

Taylor7 SlowFastModel::fast_fiber_jet(double x, double y) const {
  return fast(Taylor7::variable(x), Taylor7(y));
}

Taylor7 SlowFastModel::fast_directional_jet(double x, double y, double dx,
                                            double dy) const {
  return fast(Taylor7::line(x, dx), Taylor7::line(y, dy));
}

double SlowFastModel::divergence(double x, double y, double eps) const {
  return augmented_field(*this, x, y, eps)[2];
}

Model sine_link_model(int m, int k, int l, SlowVariant slow) {
  if (m < 1 || k < 1 || l < 0)
    throw Error(ErrorCode::InvalidArgument, "sine_link_model: need m >= 1, k >= 1, l >= 0");
  if (std::gcd(k, l) != 1)
    throw Error(ErrorCode::InvalidArgument, "sine_link_model: (k,l) not coprime");
  if (slow == SlowVariant::Cosine) {
    // g = cos(y - x) is constant on a curve only when k = l = 1; there
    // y - x = j pi / m and g vanishes for some j when m is even.
    if (k != 1 || l != 1 || m % 2 == 0)
      throw Error(ErrorCode::AssumptionViolated,
                  "sine_link_model: cosine slow flow vanishes on a critical curve");
  }
  return std::make_shared<SineLinkModel>(SineLinkParams{m, k, l, slow});
}

Model graph_model(PhiSeries phi, SlowVariant slow) {
  if (!std::isfinite(phi.c0)) throw Error(ErrorCode::InvalidArgument, "graph_model: bad phi");
  for (double v : phi.a)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "graph_model: bad phi");
  for (double v : phi.b)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "graph_model: bad phi");
  return std::make_shared<GraphModel>(std::move(phi), slow);
}

Model trig_model(TrigPoly f, TrigPoly g, std::string label) {
  f.validate();
  g.validate();
  return std::make_shared<TrigModel>(std::move(f), std::move(g), std::move(label));
}

Model diagonal_model() { return sine_link_model(1, 1, 1, SlowVariant::Unit); }

Model odd_contact_model() {
  PhiSeries phi;
  phi.q = 1;
  phi.b = {1.0};
  return graph_model(std::move(phi), SlowVariant::Unit);
}

double periodicity_residue(const SlowFastModel& model, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  double r = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = u(rng);
    const double y = u(rng);
    const double f = model.fast(x, y);
    const double g = model.slow(x, y, 0.0);
    r = std::max({r, std::abs(f - model.fast(x + kTwoPi, y)),
                  std::abs(f - model.fast(x, y + kTwoPi)),
                  std::abs(g - model.slow(x + kTwoPi, y, 0.0)),
                  std::abs(g - model.slow(x, y + kTwoPi, 0.0))});
  }
  return r;
}

}  // namespace sftorus
