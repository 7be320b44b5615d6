#pragma once

// The discrete stable family: laws on {0,1,2,...} with alternate probability
// generating function (APGF) psi(t) = E(1-t)^X of the form
//
//   psi(t) = exp(-delta*t - gamma*t^alpha)        alpha in (0,1) u (1,2]
//   psi(t) = exp(-delta*t - gamma*t*log t)        alpha = 1
//
// together with the compound Poisson (lambda, theta, alpha) and Hermite
// (mu, sigma2) parametrizations and the parameter-level action of thinning,
// Poisson shifting and IID summation.

#include <optional>
#include <string>
#include <vector>

namespace countstable {

/// Relative slack allowed on boundary inequalities such as delta >= -alpha*gamma.
inline constexpr double kBoundaryRelTol = 1e-12;

struct StableParams {
  double alpha = 1.0;
  double delta = 0.0;
  double gamma = 0.0;
  /// True exactly when alpha == 1; selects the t*log(t) APGF.
  bool log_form = true;

  /// Builds params with log_form derived from alpha.
  static StableParams make(double alpha, double delta, double gamma) {
    return StableParams{alpha, delta, gamma, alpha == 1.0};
  }

  friend bool operator==(const StableParams&, const StableParams&) = default;
};

/// Poisson-delayed-Sibuya parametrization: Po(lambda) many IID DSib(theta, alpha) summands.
struct CompoundParams {
  double lambda = 0.0;
  double theta = 1.0;
  double alpha = 1.0;
  /// (1-theta)/(1-alpha); absent when alpha == 1.
  std::optional<double> zeta;

  static CompoundParams make(double lambda, double theta, double alpha);
};

/// Hermite law U + 2V, U ~ Po(mu - sigma2), V ~ Po(sigma2/2).
struct HermiteParams {
  double mu = 0.0;
  double sigma2 = 0.0;
};

struct Violation {
  std::string constraint;  // short machine-friendly tag, e.g. "gamma_sign"
  std::string message;
};

using Violations = std::vector<Violation>;

Violations validate_stable(const StableParams& p);
Violations validate_compound(const CompoundParams& c);
Violations validate_hermite(const HermiteParams& h);

/// Throws InvalidParams listing every violation.
void require_valid(const StableParams& p);
void require_valid(const CompoundParams& c);
void require_valid(const HermiteParams& h);

std::string describe(const Violations& v);

double apgf_eval(const StableParams& p, double t);
/// Factorial cumulant generating function, log psi(t).
double fcgf_eval(const StableParams& p, double t);

StableParams compound_to_stable(const CompoundParams& c);
/// Throws DegenerateError when lambda = 0 (point mass at 0).
CompoundParams stable_to_compound(const StableParams& p);
StableParams hermite_to_stable(const HermiteParams& h);

StableParams thin_params(const StableParams& p, double a);
/// Poisson shift by b; b < 0 is the left shift and throws LeftShiftError
/// when the result leaves the family.
StableParams shift_params(const StableParams& p, double b);
StableParams iid_sum_params(const StableParams& p, unsigned long n);

/// Mean; +infinity for the heavy-tailed branches.
double stable_mean(const StableParams& p);
/// Dispersion Var(X) - E X; finite only for alpha = 2 or the Poisson case.
double stable_dispersion(const StableParams& p);

}  // namespace countstable
