#include "lcl/growth_function.hpp"

#include "lcl/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lcl {

namespace {

std::atomic<std::uint64_t> g_domain_clamps{0};

constexpr double clamp_window = 1e-9;

double guard(double x, const std::string& id) {
  if (x >= 1.0) return x;
  if (x >= 1.0 - clamp_window) {
    g_domain_clamps.fetch_add(1, std::memory_order_relaxed);
    return 1.0;
  }
  std::ostringstream msg;
  msg << "growth function '" << id << "': argument " << x
      << " outside [1, inf)";
  throw DomainError(msg.str());
}

std::string format_number(double v) {
  std::ostringstream out;
  out.precision(12);
  out << v;
  return out.str();
}

double param_or(const ParamMap& params, const std::string& key,
                double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void require_known(const std::string& id, const ParamMap& params,
                   std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : params) {
    const bool known =
        key == "eps" || std::any_of(allowed.begin(), allowed.end(),
                                    [&](const char* a) { return key == a; });
    if (!known)
      throw std::invalid_argument("growth function '" + id +
                                  "' has no parameter '" + key + "'");
  }
}

/// Sup over [1,2]^2 of the largest absolute second partial on a grid;
/// exact for functions homogeneous of degree -1 after dividing by L.
double grid_hessian_sup_unit_box(const std::function<Hessian(double, double)>& h,
                                 int points) {
  double best = 0.0;
  for (int i = 0; i < points; ++i) {
    const double t = 1.0 + static_cast<double>(i) / (points - 1);
    for (int j = 0; j < points; ++j) {
      const double s = 1.0 + static_cast<double>(j) / (points - 1);
      best = std::max(best, h(t, s).cwiseAbs().maxCoeff());
    }
  }
  return best;
}

}  // namespace

std::string_view to_string(Curvature c) {
  switch (c) {
    case Curvature::linear: return "linear";
    case Curvature::concave: return "concave";
    case Curvature::convex: return "convex";
    case Curvature::neither: return "neither";
  }
  return "neither";
}

std::uint64_t domain_clamp_count() {
  return g_domain_clamps.load(std::memory_order_relaxed);
}

Gradient numeric_gradient(const std::function<double(double, double)>& f,
                          double t, double s) {
  auto partial = [&](double x, auto&& shifted) {
    const double h = std::max(1.0, std::abs(x)) * 1e-6;
    if (x - h < 1.0) return (shifted(x + h) - shifted(x)) / h;
    return (shifted(x + h) - shifted(x - h)) / (2.0 * h);
  };
  return {partial(t, [&](double u) { return f(u, s); }),
          partial(s, [&](double u) { return f(t, u); })};
}

Hessian numeric_hessian(const std::function<double(double, double)>& f,
                        double t, double s) {
  const double ht = std::max(1.0, std::abs(t)) * 1e-4;
  const double hs = std::max(1.0, std::abs(s)) * 1e-4;
  // Shift the stencil inward at the domain edge.
  const double tc = std::max(t, 1.0 + ht);
  const double sc = std::max(s, 1.0 + hs);
  Hessian h;
  h(0, 0) = (f(tc + ht, sc) - 2.0 * f(tc, sc) + f(tc - ht, sc)) / (ht * ht);
  h(1, 1) = (f(tc, sc + hs) - 2.0 * f(tc, sc) + f(tc, sc - hs)) / (hs * hs);
  h(0, 1) = (f(tc + ht, sc + hs) - f(tc + ht, sc - hs) - f(tc - ht, sc + hs) +
             f(tc - ht, sc - hs)) /
            (4.0 * ht * hs);
  h(1, 0) = h(0, 1);
  return h;
}

GrowthFunction::GrowthFunction(GrowthFunctionSpec spec) {
  if (spec.id.empty())
    throw std::invalid_argument("growth function needs an id");
  if (!spec.value)
    throw std::invalid_argument("growth function '" + spec.id +
                                "' has no value function");
  if (!std::isfinite(spec.cx) || !std::isfinite(spec.cy))
    throw std::invalid_argument("growth function '" + spec.id +
                                "' has non-finite diagonal constants");
  if (!spec.gradient || !spec.hessian) {
    if (!spec.numeric_derivatives)
      throw std::invalid_argument(
          "growth function '" + spec.id +
          "' must supply gradient and Hessian or opt into numeric derivatives");
    auto value = spec.value;
    if (!spec.gradient)
      spec.gradient = [value](double t, double s) {
        return numeric_gradient(value, t, s);
      };
    if (!spec.hessian)
      spec.hessian = [value](double t, double s) {
        return numeric_hessian(value, t, s);
      };
  }

  // The gradient on the diagonal must approach (cx, cy).
  const double cs[2] = {spec.cx, spec.cy};
  for (double t : {10.0, 1e3, 1e6}) {
    const Gradient g = spec.gradient(t, t);
    for (int i = 0; i < 2; ++i) {
      const double tol = t >= 1e6 ? 1e-4 * std::max(1.0, std::abs(cs[i]))
                                  : std::numeric_limits<double>::infinity();
      if (!(std::abs(g[i] - cs[i]) <= tol)) {
        std::ostringstream msg;
        msg << "growth function '" << spec.id << "': gradient at (" << t
            << ", " << t << ") is (" << g[0] << ", " << g[1]
            << "), inconsistent with diagonal constants (" << spec.cx << ", "
            << spec.cy << ")";
        throw std::invalid_argument(msg.str());
      }
    }
  }
  spec_ = std::make_shared<const GrowthFunctionSpec>(std::move(spec));
}

double GrowthFunction::operator()(double t, double s) const {
  return spec_->value(guard(t, spec_->id), guard(s, spec_->id));
}

Gradient GrowthFunction::gradient(double t, double s) const {
  return spec_->gradient(guard(t, spec_->id), guard(s, spec_->id));
}

Hessian GrowthFunction::hessian(double t, double s) const {
  return spec_->hessian(guard(t, spec_->id), guard(s, spec_->id));
}

std::optional<double> GrowthFunction::hessian_sup(double lower) const {
  if (!spec_->hessian_sup) return std::nullopt;
  return spec_->hessian_sup(lower);
}

const std::string& GrowthFunction::hessian_sup_provenance() const {
  return spec_->hessian_sup_provenance;
}

double generation_lower(const GrowthFunction& fn, int n) {
  return std::pow(fn.mean_base(), n);
}

GrowthFunction scale(const GrowthFunction& fn, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw std::invalid_argument("scale factor must be positive, got " +
                                format_number(eps));
  GrowthFunctionSpec spec;
  spec.id = fn.id() + "@eps=" + format_number(eps);
  spec.params = fn.params();
  spec.params["eps"] = param_or(fn.params(), "eps", 1.0) * eps;
  spec.value = [fn, eps](double t, double s) {
    return eps * fn.evaluate_unchecked(t, s);
  };
  spec.gradient = [fn, eps](double t, double s) -> Gradient {
    return eps * fn.gradient(t, s);
  };
  spec.hessian = [fn, eps](double t, double s) -> Hessian {
    return eps * fn.hessian(t, s);
  };
  if (fn.hessian_sup(1.0)) {
    spec.hessian_sup = [fn, eps](double lower) {
      return eps * *fn.hessian_sup(lower);
    };
  }
  spec.hessian_sup_provenance = fn.hessian_sup_provenance();
  spec.cx = eps * fn.cx();
  spec.cy = eps * fn.cy();
  // A and B scale by eps^2 while cx + cy scales by eps.
  spec.theorem_compliant = fn.theorem_compliant() && eps <= 1.0;
  spec.symmetric = fn.symmetric();
  spec.curvature = fn.curvature();
  spec.numeric_derivatives = fn.numeric_derivatives();
  return GrowthFunction(std::move(spec));
}

GrowthFunction harmonic() {
  GrowthFunctionSpec spec;
  spec.id = "harmonic";
  spec.value = kernels::harmonic<double>;
  spec.gradient = kernels::harmonic_gradient<double>;
  spec.hessian = kernels::harmonic_hessian<double>;
  // |d2f/dt2| = 2 s^2 / (t+s)^3 peaks at t = L, s = 2L.
  spec.hessian_sup = [](double lower) { return 8.0 / (27.0 * lower); };
  spec.cx = 0.25;
  spec.cy = 0.25;
  spec.theorem_compliant = true;
  spec.symmetric = true;
  spec.curvature = Curvature::concave;
  return GrowthFunction(std::move(spec));
}

namespace {

GrowthFunctionSpec weighted_geometric_spec(double alpha, double c) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("weighted_geometric needs alpha in (0, 1)");
  if (!(c > 0.0))
    throw std::invalid_argument("weighted_geometric needs c > 0");
  GrowthFunctionSpec spec;
  spec.value = [alpha, c](double t, double s) {
    return kernels::weighted_geometric(t, s, alpha, c);
  };
  spec.gradient = [alpha, c](double t, double s) {
    return kernels::weighted_geometric_gradient(t, s, alpha, c);
  };
  spec.hessian = [alpha, c](double t, double s) {
    return kernels::weighted_geometric_hessian(t, s, alpha, c);
  };
  spec.hessian_sup = [alpha, c](double lower) {
    return c * alpha * (1.0 - alpha) *
           std::pow(2.0, std::max(alpha, 1.0 - alpha)) / lower;
  };
  spec.cx = c * alpha;
  spec.cy = c * (1.0 - alpha);
  spec.curvature = Curvature::concave;
  return spec;
}

}  // namespace

GrowthFunction geometric() {
  GrowthFunctionSpec spec = weighted_geometric_spec(0.5, 1.0);
  spec.id = "geometric";
  // sqrt(t * s) rather than sqrt(t) * sqrt(s): keeps f(t, t) == t exactly.
  spec.value = [](double t, double s) { return std::sqrt(t * s); };
  spec.theorem_compliant = false;  // only the remark-4 variant of condition 2
  spec.symmetric = true;
  return GrowthFunction(std::move(spec));
}

GrowthFunction weighted_geometric(double alpha, double c) {
  GrowthFunctionSpec spec = weighted_geometric_spec(alpha, c);
  spec.id = "weighted_geometric";
  spec.params = {{"alpha", alpha}, {"c", c}};
  spec.theorem_compliant = true;
  spec.symmetric = alpha == 0.5;
  return GrowthFunction(std::move(spec));
}

GrowthFunction power_mean(double p, std::optional<double> c_opt) {
  if (!(p > 0.0) || !std::isfinite(p))
    throw std::invalid_argument("power_mean needs p > 0");
  const double c = c_opt.value_or(std::pow(2.0, -1.0 - 1.0 / p));
  if (!(c > 0.0)) throw std::invalid_argument("power_mean needs c > 0");
  GrowthFunctionSpec spec;
  spec.id = "power_mean";
  spec.params = {{"p", p}, {"c", c}};
  spec.value = [p, c](double t, double s) {
    return kernels::power_mean(t, s, p, c);
  };
  spec.gradient = [p, c](double t, double s) {
    return kernels::power_mean_gradient(t, s, p, c);
  };
  spec.hessian = [p, c](double t, double s) {
    return kernels::power_mean_hessian(t, s, p, c);
  };
  // Second partials are homogeneous of degree -1.
  const double unit_sup = grid_hessian_sup_unit_box(spec.hessian, 257);
  spec.hessian_sup = [unit_sup](double lower) { return unit_sup / lower; };
  spec.hessian_sup_provenance = "grid on [1,2]^2, scaled by homogeneity";
  spec.cx = c * std::pow(2.0, 1.0 / p - 1.0);
  spec.cy = spec.cx;
  spec.theorem_compliant = true;
  spec.symmetric = true;
  spec.curvature = p < 1.0   ? Curvature::concave
                   : p > 1.0 ? Curvature::convex
                             : Curvature::linear;
  return GrowthFunction(std::move(spec));
}

GrowthFunction sin2_perturbed() {
  GrowthFunctionSpec spec;
  spec.id = "sin2_perturbed";
  spec.value = kernels::sin2_perturbed<double>;
  spec.gradient = kernels::sin2_perturbed_gradient<double>;
  spec.hessian = kernels::sin2_perturbed_hessian<double>;
  // |2 cos(2(t - s)) / 3| reaches 2/3 on the diagonal of every box.
  spec.hessian_sup = [](double) { return 2.0 / 3.0; };
  spec.cx = 1.0 / 3.0;
  spec.cy = 1.0 / 3.0;
  spec.theorem_compliant = false;
  spec.symmetric = true;
  spec.curvature = Curvature::neither;
  return GrowthFunction(std::move(spec));
}

FunctionRegistry::FunctionRegistry() {
  factories_["harmonic"] = [](const ParamMap& p) {
    require_known("harmonic", p, {});
    return harmonic();
  };
  factories_["geometric"] = [](const ParamMap& p) {
    require_known("geometric", p, {});
    return geometric();
  };
  factories_["power_mean"] = [](const ParamMap& p) {
    require_known("power_mean", p, {"p", "c"});
    std::optional<double> c;
    if (auto it = p.find("c"); it != p.end()) c = it->second;
    return power_mean(param_or(p, "p", 2.0), c);
  };
  factories_["weighted_geometric"] = [](const ParamMap& p) {
    require_known("weighted_geometric", p, {"alpha", "c"});
    return weighted_geometric(param_or(p, "alpha", 0.5), param_or(p, "c", 0.5));
  };
  factories_["sin2_perturbed"] = [](const ParamMap& p) {
    require_known("sin2_perturbed", p, {});
    return sin2_perturbed();
  };
}

FunctionRegistry& FunctionRegistry::global() {
  static FunctionRegistry registry;
  return registry;
}

void FunctionRegistry::add(const std::string& id, GrowthFactory factory) {
  if (id.empty() || !factory)
    throw std::invalid_argument("registry entries need an id and a factory");
  factories_[id] = std::move(factory);
}

GrowthFunction FunctionRegistry::make(const std::string& id,
                                      const ParamMap& params) const {
  auto it = factories_.find(id);
  if (it == factories_.end())
    throw UnknownFunctionError("unknown growth function '" + id + "'");
  ParamMap base = params;
  base.erase("eps");
  GrowthFunction fn = it->second(base);
  if (auto eps = params.find("eps"); eps != params.end())
    return scale(fn, eps->second);
  return fn;
}

std::vector<std::string> FunctionRegistry::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, f] : factories_) out.push_back(id);
  return out;
}

bool FunctionRegistry::contains(const std::string& id) const {
  return factories_.count(id) != 0;
}

GrowthFunction make_function(const std::string& id, const ParamMap& params) {
  return FunctionRegistry::global().make(id, params);
}

}  // namespace lcl
