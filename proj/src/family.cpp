#include "countstable/family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "countstable/errors.hpp"

namespace countstable {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// x >= bound up to the relative boundary slack.
bool at_least(double x, double bound, double scale) {
  return x >= bound - kBoundaryRelTol * scale;
}

double scale_of(double a, double b) { return std::max(std::abs(a), std::abs(b)); }

void check_t(double t) {
  if (!(t >= 0.0 && t <= 2.0)) {
    throw DomainError("APGF argument t must lie in [0,2], got " + std::to_string(t));
  }
}

// t*log(t) with 0 log 0 = 0.
double t_log_t(double t) { return t == 0.0 ? 0.0 : t * std::log(t); }

}  // namespace

CompoundParams CompoundParams::make(double lambda, double theta, double alpha) {
  CompoundParams c{lambda, theta, alpha, std::nullopt};
  if (alpha != 1.0) c.zeta = (1.0 - theta) / (1.0 - alpha);
  return c;
}

Violations validate_stable(const StableParams& p) {
  Violations out;
  const double a = p.alpha, d = p.delta, g = p.gamma;
  if (!std::isfinite(a) || !std::isfinite(d) || !std::isfinite(g)) {
    out.push_back({"finite", "alpha, delta and gamma must be finite"});
    return out;
  }
  if (!(a > 0.0 && a <= 2.0)) {
    out.push_back({"alpha_range", "alpha must lie in (0,2]"});
    return out;
  }
  if (p.log_form != (a == 1.0)) {
    out.push_back({"log_form", "log_form must be set exactly when alpha = 1"});
  }
  const double s = scale_of(d, g);
  if (a < 1.0) {
    if (!at_least(g, 0.0, s)) out.push_back({"gamma_sign", "gamma must be >= 0 for alpha < 1"});
    if (!at_least(d, -a * g, scale_of(d, a * g)))
      out.push_back({"delta_lower", "delta must be >= -alpha*gamma"});
    if (!at_least(d + g, 0.0, s)) out.push_back({"lambda_sign", "delta + gamma must be >= 0"});
  } else if (a == 1.0) {
    if (!at_least(-g, 0.0, s)) out.push_back({"gamma_sign", "gamma must be <= 0 for alpha = 1"});
    if (!at_least(d, -g, s)) out.push_back({"delta_lower", "delta must be >= -gamma for alpha = 1"});
    if (!at_least(d, 0.0, s)) out.push_back({"lambda_sign", "delta must be >= 0 for alpha = 1"});
  } else {
    if (!at_least(-g, 0.0, s)) out.push_back({"gamma_sign", "gamma must be <= 0 for alpha > 1"});
    if (!at_least(d, -a * g, scale_of(d, a * g)))
      out.push_back({"delta_lower", "delta must be >= -alpha*gamma"});
    if (!at_least(d + g, 0.0, s)) out.push_back({"lambda_sign", "delta + gamma must be >= 0"});
  }
  return out;
}

Violations validate_compound(const CompoundParams& c) {
  Violations out;
  if (!std::isfinite(c.lambda) || c.lambda < 0.0)
    out.push_back({"lambda_range", "lambda must be finite and >= 0"});
  if (!(c.theta >= 0.0 && c.theta <= 1.0))
    out.push_back({"theta_range", "theta must lie in [0,1]"});
  if (!(c.alpha > 0.0 && c.alpha <= 2.0))
    out.push_back({"alpha_range", "alpha must lie in (0,2]"});
  if (c.alpha != 1.0) {
    if (!c.zeta || *c.zeta != (1.0 - c.theta) / (1.0 - c.alpha))
      out.push_back({"zeta", "zeta must equal (1-theta)/(1-alpha)"});
  } else if (c.zeta) {
    out.push_back({"zeta", "zeta is undefined for alpha = 1"});
  }
  return out;
}

Violations validate_hermite(const HermiteParams& h) {
  Violations out;
  if (!std::isfinite(h.mu) || !std::isfinite(h.sigma2)) {
    out.push_back({"finite", "mu and sigma2 must be finite"});
    return out;
  }
  if (h.sigma2 < 0.0) out.push_back({"sigma2_sign", "sigma2 must be >= 0"});
  if (!at_least(h.mu, h.sigma2, scale_of(h.mu, h.sigma2)))
    out.push_back({"mu_lower", "mu must be >= sigma2"});
  return out;
}

std::string describe(const Violations& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << "; ";
    os << v[i].constraint << ": " << v[i].message;
  }
  return os.str();
}

namespace {
void throw_if(const Violations& v, const char* what) {
  if (!v.empty()) throw InvalidParams(std::string(what) + ": " + describe(v));
}
}  // namespace

void require_valid(const StableParams& p) { throw_if(validate_stable(p), "invalid stable parameters"); }
void require_valid(const CompoundParams& c) { throw_if(validate_compound(c), "invalid compound parameters"); }
void require_valid(const HermiteParams& h) { throw_if(validate_hermite(h), "invalid Hermite parameters"); }

double fcgf_eval(const StableParams& p, double t) {
  check_t(t);
  if (p.log_form) return -p.delta * t - p.gamma * t_log_t(t);
  // gamma * 0^alpha is 0 even when gamma is 0.
  const double power = t == 0.0 ? 0.0 : std::pow(t, p.alpha);
  return -p.delta * t - p.gamma * power;
}

double apgf_eval(const StableParams& p, double t) { return std::exp(fcgf_eval(p, t)); }

StableParams compound_to_stable(const CompoundParams& c) {
  require_valid(c);
  if (c.theta == 1.0) return StableParams::make(c.alpha, c.lambda, 0.0);
  if (c.alpha == 1.0) return StableParams::make(1.0, c.lambda, -c.lambda * (1.0 - c.theta));
  const double denom = 1.0 - c.alpha;
  return StableParams::make(c.alpha, c.lambda * (c.theta - c.alpha) / denom,
                            c.lambda * (1.0 - c.theta) / denom);
}

CompoundParams stable_to_compound(const StableParams& p) {
  require_valid(p);
  const double lambda = p.log_form ? p.delta : p.delta + p.gamma;
  if (!(lambda > kBoundaryRelTol * scale_of(p.delta, p.gamma))) {
    throw DegenerateError("point mass at 0 (lambda = 0) has no compound parametrization");
  }
  double theta = p.log_form ? 1.0 + p.gamma / p.delta : (p.delta + p.alpha * p.gamma) / lambda;
  theta = std::clamp(theta, 0.0, 1.0);
  return CompoundParams::make(lambda, theta, p.alpha);
}

StableParams hermite_to_stable(const HermiteParams& h) {
  require_valid(h);
  return StableParams::make(2.0, h.mu, -0.5 * h.sigma2);
}

StableParams thin_params(const StableParams& p, double a) {
  if (!(a >= 0.0 && a <= 1.0)) {
    throw DomainError("thinning probability must lie in [0,1], got " + std::to_string(a));
  }
  require_valid(p);
  if (a == 0.0) return StableParams::make(p.alpha, 0.0, 0.0);
  if (p.log_form) return StableParams::make(1.0, a * (p.delta + p.gamma * std::log(a)), a * p.gamma);
  return StableParams::make(p.alpha, a * p.delta, std::pow(a, p.alpha) * p.gamma);
}

StableParams shift_params(const StableParams& p, double b) {
  if (!std::isfinite(b)) throw DomainError("shift must be finite");
  require_valid(p);
  StableParams out = p;
  out.delta += b;
  if (b < 0.0) {
    const auto v = validate_stable(out);
    if (!v.empty()) {
      throw LeftShiftError("left Poisson shift by " + std::to_string(-b) +
                           " does not exist: " + describe(v));
    }
  }
  return out;
}

StableParams iid_sum_params(const StableParams& p, unsigned long n) {
  if (n == 0) throw DomainError("copy count must be positive");
  require_valid(p);
  const double k = static_cast<double>(n);
  return StableParams::make(p.alpha, k * p.delta, k * p.gamma);
}

double stable_mean(const StableParams& p) {
  require_valid(p);
  if (p.gamma == 0.0 || p.alpha > 1.0) return p.delta;
  return kInf;
}

double stable_dispersion(const StableParams& p) {
  require_valid(p);
  if (p.gamma == 0.0) return 0.0;
  if (p.alpha == 2.0) return -2.0 * p.gamma;
  return kInf;
}

}  // namespace countstable
