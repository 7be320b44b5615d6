#pragma once

// Sibuya and delayed Sibuya laws on {1,2,3,...}. DSib(theta, alpha) is the
// index of the first success in independent trials that succeed with
// probabilities theta, alpha/2, alpha/3, ...; Sib(alpha) = DSib(alpha, alpha).

#include <cstdint>
#include <vector>

#include "countstable/random.hpp"

namespace countstable {

struct DelayedSibuyaParams {
  double theta = 1.0;
  double alpha = 1.0;
};

/// Throws InvalidParams unless theta in [0,1] and alpha in (0,2] (alpha ignored when theta = 1).
void require_valid(const DelayedSibuyaParams& d);

/// Sib(alpha) as DSib(alpha, alpha); alpha must lie in (0,1].
DelayedSibuyaParams sibuya(double alpha);

double dsib_pmf(const DelayedSibuyaParams& d, std::uint64_t y);

/// P(Y > y).
double dsib_survival(const DelayedSibuyaParams& d, std::uint64_t y);

/// q[0..max_y] with q[0] = 0, built by the incremental ratio q(y+1) = q(y)(y-alpha)/(y+1).
std::vector<double> dsib_pmf_table(const DelayedSibuyaParams& d, std::size_t max_y);

double dsib_apgf(const DelayedSibuyaParams& d, double t);

/// Largest value dsib_sample returns; draws beyond it saturate.
inline constexpr std::uint64_t kSampleCap = std::uint64_t{1} << 63;

/// Exact inversion: smallest y with S(y) <= u, found by doubling then bisection.
std::uint64_t dsib_sample(const DelayedSibuyaParams& d, Rng& rng);

}  // namespace countstable
