#include "countstable/severity.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <string>

#include "countstable/errors.hpp"

namespace countstable {

namespace {

// Below this index the single-point PMF uses the exact finite product.
constexpr std::uint64_t kProductLimit = 1024;

bool point_mass_at_one(const DelayedSibuyaParams& d) { return d.theta == 1.0; }

// Gamma(y+1-alpha) / (Gamma(2-alpha) * y!), the probability that trials
// 2..y all fail. Valid for alpha in (0,2), y >= 1.
double sibuya_tail_ratio(double alpha, std::uint64_t y) {
  const double z = static_cast<double>(y) + 1.0 - alpha;
  return boost::math::tgamma_delta_ratio(z, alpha) / boost::math::tgamma(2.0 - alpha);
}

}  // namespace

void require_valid(const DelayedSibuyaParams& d) {
  if (!(d.theta >= 0.0 && d.theta <= 1.0)) {
    throw InvalidParams("delayed Sibuya theta must lie in [0,1], got " + std::to_string(d.theta));
  }
  if (!point_mass_at_one(d) && !(d.alpha > 0.0 && d.alpha <= 2.0)) {
    throw InvalidParams("delayed Sibuya alpha must lie in (0,2], got " + std::to_string(d.alpha));
  }
}

DelayedSibuyaParams sibuya(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("Sibuya alpha must lie in (0,1], got " + std::to_string(alpha));
  }
  return {alpha, alpha};
}

double dsib_pmf(const DelayedSibuyaParams& d, std::uint64_t y) {
  require_valid(d);
  if (y == 0) return 0.0;
  if (y == 1) return d.theta;
  if (point_mass_at_one(d)) return 0.0;
  const double fail_first = 1.0 - d.theta;
  if (d.alpha == 2.0) return y == 2 ? fail_first : 0.0;
  const double yd = static_cast<double>(y);
  if (d.alpha == 1.0) return fail_first / ((yd - 1.0) * yd);
  if (y <= kProductLimit) {
    double p = fail_first;
    for (std::uint64_t j = 2; j < y; ++j) p *= 1.0 - d.alpha / static_cast<double>(j);
    return p * d.alpha / yd;
  }
  // alpha * Gamma(y-alpha) / (Gamma(2-alpha) * y!) = S(y-1) * alpha / y
  return fail_first * sibuya_tail_ratio(d.alpha, y - 1) * d.alpha / yd;
}

double dsib_survival(const DelayedSibuyaParams& d, std::uint64_t y) {
  require_valid(d);
  if (y == 0) return 1.0;
  if (point_mass_at_one(d)) return 0.0;
  const double fail_first = 1.0 - d.theta;
  if (y == 1) return fail_first;
  if (d.alpha == 2.0) return 0.0;
  if (d.alpha == 1.0) return fail_first / static_cast<double>(y);
  return fail_first * sibuya_tail_ratio(d.alpha, y);
}

std::vector<double> dsib_pmf_table(const DelayedSibuyaParams& d, std::size_t max_y) {
  require_valid(d);
  std::vector<double> q(max_y + 1, 0.0);
  if (max_y >= 1) q[1] = d.theta;
  if (max_y < 2 || point_mass_at_one(d)) return q;
  q[2] = (1.0 - d.theta) * d.alpha / 2.0;
  for (std::size_t y = 2; y < max_y; ++y) {
    q[y + 1] = q[y] * (static_cast<double>(y) - d.alpha) / static_cast<double>(y + 1);
  }
  return q;
}

double dsib_apgf(const DelayedSibuyaParams& d, double t) {
  if (!(t >= 0.0 && t <= 2.0)) {
    throw DomainError("APGF argument t must lie in [0,2], got " + std::to_string(t));
  }
  require_valid(d);
  if (point_mass_at_one(d)) return 1.0 - t;
  if (d.alpha == 1.0) {
    const double tlogt = t == 0.0 ? 0.0 : t * std::log(t);
    return 1.0 - t + (1.0 - d.theta) * tlogt;
  }
  const double zeta = (1.0 - d.theta) / (1.0 - d.alpha);
  const double power = t == 0.0 ? 0.0 : std::pow(t, d.alpha);
  return 1.0 - (1.0 - zeta) * t - zeta * power;
}

std::uint64_t dsib_sample(const DelayedSibuyaParams& d, Rng& rng) {
  require_valid(d);
  if (point_mass_at_one(d)) return 1;
  const double u = uniform_open01(rng);
  if (dsib_survival(d, 1) <= u) return 1;
  if (d.alpha == 2.0) return 2;

  // S(lo) > u >= S(hi)
  std::uint64_t lo = 1;
  std::uint64_t hi = 2;
  while (dsib_survival(d, hi) > u) {
    if (hi >= kSampleCap) return kSampleCap;
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (dsib_survival(d, mid) > u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace countstable
