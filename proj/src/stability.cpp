#include "countstable/stability.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "countstable/errors.hpp"
#include "countstable/summation.hpp"

namespace countstable {

StabilityCoefficients coefficients(const StableParams& p, unsigned long n) {
  if (n == 0) throw DomainError("copy count must be positive");
  require_valid(p);
  const double nd = static_cast<double>(n);
  if (p.log_form) return {1.0 / nd, -p.gamma * std::log(nd)};
  return {std::pow(nd, -1.0 / p.alpha), p.delta * (std::pow(nd, 1.0 - 1.0 / p.alpha) - 1.0)};
}

double verify_param_level(const StableParams& p, unsigned long n) {
  const auto [a, b] = coefficients(p, n);
  const StableParams thinned = thin_params(iid_sum_params(p, n), a);
  StableParams back;
  try {
    back = shift_params(thinned, -b);
  } catch (const LeftShiftError&) {
    // Rounding pushed the left shift just outside the family; the distance
    // from p still measures the identity.
    back = thinned;
    back.delta -= b;
  }
  return std::max({std::abs(back.alpha - p.alpha), std::abs(back.delta - p.delta),
                   std::abs(back.gamma - p.gamma)});
}

std::string_view to_string(ShiftForm f) {
  switch (f) {
    case ShiftForm::kNone: return "none";
    case ShiftForm::kRhsShifted: return "rhs_shifted";
    case ShiftForm::kLhsShifted: return "lhs_shifted";
  }
  return "unknown";
}

std::size_t pre_thinning_range(std::size_t window, double a, std::size_t cap) {
  if (!(a > 0.0 && a <= 1.0)) throw DomainError("thinning probability must lie in (0,1]");
  if (a == 1.0) return std::min(window, cap);
  const double w = static_cast<double>(window);
  const double needed = std::ceil((w + 10.0 * std::sqrt(w + 1.0) + 20.0) / a);
  if (needed >= static_cast<double>(cap)) return std::max(cap, window);
  return std::max(static_cast<std::size_t>(needed), window);
}

std::size_t verification_window(const StableParams& p, unsigned long n, double tol, std::size_t cap) {
  // Both sides lose about the tail of X beyond the window.
  const double target = tol / 4.0;
  std::size_t k = stable_pmf_auto(p, target, cap).max_k();
  const double b = std::abs(coefficients(p, n).b);
  if (k < cap && b > 0.0) k = std::max(k, stable_pmf_auto(shift_params(p, b), target, cap).max_k());
  return std::max<std::size_t>(k, 1);
}

StabilityReport verify_pmf_level(const StableParams& p, unsigned long n, std::size_t max_k,
                                 double tol) {
  const std::size_t range = pre_thinning_range(max_k, coefficients(p, n).a);
  return verify_pmf_level(p, n, stable_pmf(p, range), max_k, tol);
}

StabilityReport verify_pmf_level(const StableParams& p, unsigned long n, const CountPmf& x,
                                 std::size_t max_k, double tol) {
  if (n == 0 || n > kMaxPmfCopies) {
    throw DomainError("PMF-level verification takes 1 <= n <= " + std::to_string(kMaxPmfCopies));
  }
  if (x.max_k() < max_k) throw DomainError("PMF of X is shorter than the comparison window");
  StabilityReport r;
  r.n = n;
  r.tolerance = tol;
  r.max_k = max_k;
  const auto coef = coefficients(p, n);
  r.a_n = coef.a;
  r.b_n = coef.b + 0.0;  // no negative zero in reports
  r.param_residual = verify_param_level(p, n);

  CountPmf lhs = truncate_pmf(thin_pmf(convolve_power(x, n, x.max_k()), r.a_n), max_k);
  CountPmf rhs = truncate_pmf(x, max_k);
  if (r.b_n > 0.0) {
    rhs = poisson_shift_pmf(rhs, r.b_n, max_k);
    r.form_used = ShiftForm::kRhsShifted;
  } else if (r.b_n < 0.0) {
    lhs = poisson_shift_pmf(lhs, -r.b_n, max_k);
    r.form_used = ShiftForm::kLhsShifted;
  }
  r.tv = tv_distance(lhs, rhs);
  CompensatedSum diff;
  for (std::size_t k = 0; k <= max_k; ++k) diff += std::abs(lhs.probs[k] - rhs.probs[k]);
  r.window_tv = 0.5 * diff.value();
  r.lhs_tail = lhs.tail_bound;
  r.rhs_tail = rhs.tail_bound;
  r.pass = r.param_residual <= kParamTolerance && r.tv <= tol;
  return r;
}

nlohmann::json to_json(const StabilityReport& r) {
  return nlohmann::json{
      {"n", r.n},
      {"a_n", r.a_n},
      {"b_n", r.b_n},
      {"param_residual", r.param_residual},
      {"tv", r.tv},
      {"window_tv", r.window_tv},
      {"lhs_tail", r.lhs_tail},
      {"rhs_tail", r.rhs_tail},
      {"max_k", r.max_k},
      {"tolerance", r.tolerance},
      {"verdict", r.pass ? "pass" : "fail"},
      {"form_used", std::string(to_string(r.form_used))},
  };
}

StabilityClass classify(const StableParams& p) {
  require_valid(p);
  const double scale = std::max(std::abs(p.delta), std::abs(p.gamma));
  const double eps = kBoundaryRelTol * scale;
  if (std::abs(p.gamma) <= eps) return StabilityClass::kPoisson;
  if (std::abs(p.delta) <= eps && p.gamma > 0.0 && p.alpha <= 1.0) return StabilityClass::kStrictlyStable;
  return StabilityClass::kBroadlyStableOnly;
}

std::string_view to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::kStrictlyStable: return "strictly_stable";
    case StabilityClass::kBroadlyStableOnly: return "broadly_stable_only";
    case StabilityClass::kPoisson: return "poisson";
  }
  return "unknown";
}

}  // namespace countstable
