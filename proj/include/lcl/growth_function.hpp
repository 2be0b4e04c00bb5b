#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lcl {

using Gradient = Eigen::Vector2d;
using Hessian = Eigen::Matrix2d;
using ParamMap = std::map<std::string, double>;

enum class Curvature { linear, concave, convex, neither };

std::string_view to_string(Curvature c);

// Closed forms for the built-in growth functions. Templated on the scalar so
// oracles can run them in extended precision.
namespace kernels {

template <typename Scalar>
Scalar harmonic(Scalar t, Scalar s) {
  return t * s / (t + s);
}

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> harmonic_gradient(Scalar t, Scalar s) {
  const Scalar d = (t + s) * (t + s);
  return {s * s / d, t * t / d};
}

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> harmonic_hessian(Scalar t, Scalar s) {
  const Scalar d = (t + s) * (t + s) * (t + s);
  Eigen::Matrix<Scalar, 2, 2> h;
  h << Scalar(-2) * s * s / d, Scalar(2) * t * s / d,
       Scalar(2) * t * s / d, Scalar(-2) * t * t / d;
  return h;
}

/// c * t^alpha * s^(1 - alpha); the geometric mean is alpha = 1/2, c = 1.
template <typename Scalar>
Scalar weighted_geometric(Scalar t, Scalar s, Scalar alpha, Scalar c) {
  using std::pow;
  return c * pow(t, alpha) * pow(s, Scalar(1) - alpha);
}

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> weighted_geometric_gradient(Scalar t, Scalar s,
                                                        Scalar alpha,
                                                        Scalar c) {
  using std::pow;
  const Scalar beta = Scalar(1) - alpha;
  return {c * alpha * pow(s / t, beta), c * beta * pow(t / s, alpha)};
}

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> weighted_geometric_hessian(Scalar t, Scalar s,
                                                       Scalar alpha,
                                                       Scalar c) {
  using std::pow;
  const Scalar beta = Scalar(1) - alpha;
  const Scalar k = c * alpha * beta;
  Eigen::Matrix<Scalar, 2, 2> h;
  const Scalar mixed = k * pow(t, alpha - Scalar(1)) * pow(s, -alpha);
  h << -k * pow(t, alpha - Scalar(2)) * pow(s, beta), mixed,
       mixed, -k * pow(t, alpha) * pow(s, -alpha - Scalar(1));
  return h;
}

/// c * (t^p + s^p)^(1/p), evaluated relative to max(t, s) to avoid overflow.
template <typename Scalar>
Scalar power_mean(Scalar t, Scalar s, Scalar p, Scalar c) {
  using std::max;
  using std::pow;
  const Scalar m = max(t, s);
  return c * m * pow(pow(t / m, p) + pow(s / m, p), Scalar(1) / p);
}

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> power_mean_gradient(Scalar t, Scalar s, Scalar p,
                                                Scalar c) {
  using std::pow;
  const Scalar r = power_mean(t, s, p, Scalar(1));
  return {c * pow(t / r, p - Scalar(1)), c * pow(s / r, p - Scalar(1))};
}

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> power_mean_hessian(Scalar t, Scalar s, Scalar p,
                                               Scalar c) {
  using std::pow;
  const Scalar r = power_mean(t, s, p, Scalar(1));
  const Scalar x = t / r;
  const Scalar y = s / r;
  const Scalar k = c * (p - Scalar(1)) / r;
  Eigen::Matrix<Scalar, 2, 2> h;
  const Scalar mixed = -k * pow(x, p - Scalar(1)) * pow(y, p - Scalar(1));
  h << k * pow(x, p - Scalar(2)) * pow(y, p), mixed,
       mixed, k * pow(y, p - Scalar(2)) * pow(x, p);
  return h;
}

/// t/3 + s/3 + sin^2(t - s)/3. Monotone but with Theta(1) second partials.
template <typename Scalar>
Scalar sin2_perturbed(Scalar t, Scalar s) {
  using std::sin;
  const Scalar v = sin(t - s);
  return (t + s + v * v) / Scalar(3);
}

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> sin2_perturbed_gradient(Scalar t, Scalar s) {
  using std::sin;
  const Scalar w = sin(Scalar(2) * (t - s));
  return {(Scalar(1) + w) / Scalar(3), (Scalar(1) - w) / Scalar(3)};
}

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> sin2_perturbed_hessian(Scalar t, Scalar s) {
  using std::cos;
  const Scalar g = Scalar(2) * cos(Scalar(2) * (t - s)) / Scalar(3);
  Eigen::Matrix<Scalar, 2, 2> h;
  h << g, -g, -g, g;
  return h;
}

}  // namespace kernels

/// Everything a registrant supplies to define a growth function f(t, s).
///
/// `gradient` and `hessian` may be left empty only when
/// `numeric_derivatives` is set; central differences are then substituted
/// and reports carry the "numeric derivatives" flag.
///
/// `hessian_sup(L)` returns the supremum over [L, 2L]^2 of the largest
/// absolute second partial. When absent, checks fall back to a dense grid.
struct GrowthFunctionSpec {
  std::string id;
  ParamMap params;
  std::function<double(double, double)> value;
  std::function<Gradient(double, double)> gradient;
  std::function<Hessian(double, double)> hessian;
  std::function<double(double)> hessian_sup;
  std::string hessian_sup_provenance = "analytic";
  double cx = 0.0;
  double cy = 0.0;
  bool theorem_compliant = false;
  bool symmetric = false;
  Curvature curvature = Curvature::neither;
  bool numeric_derivatives = false;
};

/// Immutable, cheaply copyable handle to a growth function.
///
/// Arguments must lie in [1, inf). Values in [1 - 1e-9, 1) are clamped to 1
/// and counted (see domain_clamp_count); anything lower throws DomainError.
class GrowthFunction {
 public:
  /// Validates the spec and cross-checks (cx, cy) against the gradient on
  /// the diagonal at t in {10, 1e3, 1e6}. Throws std::invalid_argument.
  explicit GrowthFunction(GrowthFunctionSpec spec);

  double operator()(double t, double s) const;
  Gradient gradient(double t, double s) const;
  Hessian hessian(double t, double s) const;

  /// Sup of max |second partial| over [lower, 2 lower]^2, if known without a grid.
  std::optional<double> hessian_sup(double lower) const;
  const std::string& hessian_sup_provenance() const;

  std::pair<double, double> diagonal_constants() const { return {cx(), cy()}; }
  double cx() const { return spec_->cx; }
  double cy() const { return spec_->cy; }
  /// 2 + cx + cy: the per-generation growth base of E[X_n] and of the range.
  double mean_base() const { return 2.0 + cx() + cy(); }

  const std::string& id() const { return spec_->id; }
  const ParamMap& params() const { return spec_->params; }
  bool theorem_compliant() const { return spec_->theorem_compliant; }
  bool symmetric() const { return spec_->symmetric; }
  Curvature curvature() const { return spec_->curvature; }
  bool numeric_derivatives() const { return spec_->numeric_derivatives; }

  /// Unchecked evaluation for hot loops whose inputs are known to be in range.
  double evaluate_unchecked(double t, double s) const {
    return spec_->value(t, s);
  }

 private:
  std::shared_ptr<const GrowthFunctionSpec> spec_;
};

/// Number of arguments clamped from [1 - 1e-9, 1) up to 1 since start-up.
std::uint64_t domain_clamp_count();

/// eps * f with gradient, Hessian and constants scaled to match.
GrowthFunction scale(const GrowthFunction& fn, double eps);

/// Lower edge (2 + cx + cy)^n of the generation-n domain.
double generation_lower(const GrowthFunction& fn, int n);

using GrowthFactory = std::function<GrowthFunction(const ParamMap&)>;

/// Maps ids to factories. Built-ins: harmonic, geometric, power_mean,
/// weighted_geometric, sin2_perturbed. Every id also accepts an `eps`
/// parameter that applies scale().
class FunctionRegistry {
 public:
  static FunctionRegistry& global();

  void add(const std::string& id, GrowthFactory factory);
  GrowthFunction make(const std::string& id, const ParamMap& params = {}) const;
  std::vector<std::string> ids() const;
  bool contains(const std::string& id) const;

 private:
  FunctionRegistry();
  std::map<std::string, GrowthFactory> factories_;
};

GrowthFunction make_function(const std::string& id, const ParamMap& params = {});

// Direct constructors for the built-ins.
GrowthFunction harmonic();
GrowthFunction geometric();
/// Default c = 2^(-1 - 1/p), which gives cx = cy = 1/4.
GrowthFunction power_mean(double p = 2.0, std::optional<double> c = {});
/// Default c = 1/2.
GrowthFunction weighted_geometric(double alpha = 0.5, double c = 0.5);
GrowthFunction sin2_perturbed();

/// Central-difference gradient with step max(1, |x|) * 1e-6, one-sided at the
/// domain edge.
Gradient numeric_gradient(const std::function<double(double, double)>& f,
                          double t, double s);
/// Central-difference Hessian with step max(1, |x|) * 1e-4.
Hessian numeric_hessian(const std::function<double(double, double)>& f,
                        double t, double s);

}  // namespace lcl
