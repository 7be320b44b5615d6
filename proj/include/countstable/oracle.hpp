#pragma once

// Independent reference engines: PMFs read off as Taylor coefficients of the
// closed-form APGF, and Monte Carlo statistics for sampler validation.

#include <cstdint>
#include <span>
#include <vector>

#include "countstable/family.hpp"
#include "countstable/pmf.hpp"

namespace countstable {

/// Coefficients c[0..K] of a power series truncated at order K.
struct PowerSeries {
  std::vector<double> coeffs;

  std::size_t order() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
};

/// exp of a truncated series via b' = a' b.
PowerSeries series_exp(const PowerSeries& a);

/// log of a series with positive constant term; inverse of series_exp.
PowerSeries series_log(const PowerSeries& b);

/// Generalized binomial coefficients binom(alpha, k), k = 0..K.
PowerSeries binomial_series(double alpha, std::size_t max_k);

/// Coefficients of (1-s) log(1-s), k = 0..K.
PowerSeries one_minus_s_log_series(std::size_t max_k);

/// p(k) as the k-th coefficient of psi(1 - s). Throws SeriesError on
/// coefficients below -1e-10 or non-finite ones.
CountPmf series_pmf(const StableParams& p, std::size_t max_k);

struct ChiSquareResult {
  double statistic = 0.0;
  double p_value = 1.0;
  unsigned degrees_of_freedom = 0;
  std::size_t cells = 0;
};

inline constexpr std::size_t kMinChiSquareSamples = 10000;

/// Pearson goodness of fit with cells pooled to expected count >= 5. Samples
/// above the reference range fall in one tail cell priced by tail_bound.
ChiSquareResult mc_chisquare(std::span<const std::uint64_t> samples, const CountPmf& reference);

double empirical_factorial_moment(std::span<const std::uint64_t> samples, unsigned k);

}  // namespace countstable
