#pragma once

// Truncated probability mass functions on {0,...,K} with a certified bound
// on the mass that lies beyond K, plus the PMF-level operators.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "countstable/family.hpp"
#include "countstable/random.hpp"

namespace countstable {

/// Target for automatic truncation of compound PMFs.
inline constexpr double kDefaultTailTarget = 1e-12;
/// Hard ceiling on automatic truncation indices.
inline constexpr std::size_t kMaxTruncation = 100000;
/// Poisson factors used by shifts are cut where their tail drops below this.
inline constexpr double kPoissonShiftTail = 1e-15;

struct CountPmf {
  std::vector<double> probs;
  /// Upper bound on P(X > K), K = probs.size() - 1.
  double tail_bound = 0.0;

  std::size_t max_k() const { return probs.empty() ? 0 : probs.size() - 1; }
  double mass() const;

  static CountPmf point_mass(std::size_t k);
};

/// Compound Poisson PoDSib(lambda, theta, alpha) on {0..K} by the Panjer recursion.
CountPmf panjer_pmf(const CompoundParams& c, std::size_t max_k);

/// Same, stopping at the first K whose tail drops below `tail_target` (or at `cap`).
CountPmf panjer_pmf_auto(const CompoundParams& c, double tail_target = kDefaultTailTarget,
                         std::size_t cap = kMaxTruncation);

/// PMF of the law with APGF exp(-delta t - gamma t^alpha); the point mass at
/// 0 (lambda = 0) is returned directly.
CountPmf stable_pmf(const StableParams& p, std::size_t max_k);
CountPmf stable_pmf_auto(const StableParams& p, double tail_target = kDefaultTailTarget,
                         std::size_t cap = kMaxTruncation);

CountPmf poisson_pmf(double rate, std::size_t max_k);

/// Poisson(rate) truncated at the smallest K with P(X > K) < tail_target.
CountPmf poisson_pmf_auto(double rate, double tail_target = kPoissonShiftTail);

/// Hermite law built directly as U + 2V from two Poisson factors.
CountPmf hermite_pmf(const HermiteParams& h, std::size_t max_k);

/// Binomial thinning a∘X.
CountPmf thin_pmf(const CountPmf& x, double a);

/// Distribution of X + Y. With `cap`, entries above it are dropped and their
/// mass added to the tail bound.
CountPmf convolve(const CountPmf& x, const CountPmf& y,
                  std::optional<std::size_t> cap = std::nullopt);

/// n-fold convolution power by repeated squaring, truncated at `cap`.
CountPmf convolve_power(const CountPmf& x, unsigned long n, std::size_t cap);

/// Right Poisson shift X ⊕ b (b >= 0). Left shifts exist only at parameter level.
CountPmf poisson_shift_pmf(const CountPmf& x, double b,
                           std::optional<std::size_t> cap = std::nullopt);

/// Drops entries above max_k, adding their mass to the tail bound.
CountPmf truncate_pmf(const CountPmf& x, std::size_t max_k);

/// Certified upper bound on the total variation distance.
double tv_distance(const CountPmf& x, const CountPmf& y);

/// Largest |x[k] - y[k]| over the common range.
double max_abs_difference(const CountPmf& x, const CountPmf& y);

/// E X(X-1)...(X-k+1) of the truncated mass vector.
double factorial_moment(const CountPmf& x, unsigned k);

std::vector<std::uint64_t> stable_sample(const CompoundParams& c, Rng& rng, std::size_t count);
std::vector<std::uint64_t> hermite_sample(const HermiteParams& h, Rng& rng, std::size_t count);

void write_csv(std::ostream& os, const CountPmf& x);
nlohmann::json to_json(const CountPmf& x);
CountPmf pmf_from_json(const nlohmann::json& j);

}  // namespace countstable
