#include "countstable/oracle.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "countstable/errors.hpp"
#include "countstable/summation.hpp"

namespace countstable {

namespace {

constexpr double kNegativeCoefficientTol = -1e-10;

}  // namespace

PowerSeries series_exp(const PowerSeries& a) {
  PowerSeries b;
  if (a.coeffs.empty()) return b;
  const std::size_t order = a.order();
  b.coeffs.assign(order + 1, 0.0);
  b.coeffs[0] = std::exp(a.coeffs[0]);
  for (std::size_t k = 1; k <= order; ++k) {
    CompensatedSum s;
    for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a.coeffs[j] * b.coeffs[k - j];
    b.coeffs[k] = s.value() / static_cast<double>(k);
  }
  return b;
}

PowerSeries series_log(const PowerSeries& b) {
  PowerSeries a;
  if (b.coeffs.empty()) return a;
  if (!(b.coeffs[0] > 0.0)) throw SeriesError("series_log needs a positive constant term");
  const std::size_t order = b.order();
  a.coeffs.assign(order + 1, 0.0);
  a.coeffs[0] = std::log(b.coeffs[0]);
  // k a_k b_0 = k b_k - sum_{j=1}^{k-1} j a_j b_{k-j}
  for (std::size_t k = 1; k <= order; ++k) {
    CompensatedSum s;
    s += static_cast<double>(k) * b.coeffs[k];
    for (std::size_t j = 1; j < k; ++j) s += -static_cast<double>(j) * a.coeffs[j] * b.coeffs[k - j];
    a.coeffs[k] = s.value() / (static_cast<double>(k) * b.coeffs[0]);
  }
  return a;
}

PowerSeries binomial_series(double alpha, std::size_t max_k) {
  PowerSeries c;
  c.coeffs.assign(max_k + 1, 0.0);
  c.coeffs[0] = 1.0;
  for (std::size_t k = 0; k < max_k; ++k) {
    c.coeffs[k + 1] = c.coeffs[k] * (alpha - static_cast<double>(k)) / static_cast<double>(k + 1);
  }
  return c;
}

PowerSeries one_minus_s_log_series(std::size_t max_k) {
  // (1-s) log(1-s) = -s + sum_{k>=2} s^k / (k(k-1))
  PowerSeries c;
  c.coeffs.assign(max_k + 1, 0.0);
  if (max_k >= 1) c.coeffs[1] = -1.0;
  for (std::size_t k = 2; k <= max_k; ++k) {
    const double kd = static_cast<double>(k);
    c.coeffs[k] = 1.0 / (kd * (kd - 1.0));
  }
  return c;
}

CountPmf series_pmf(const StableParams& p, std::size_t max_k) {
  require_valid(p);
  // Exponent of psi(1 - s) = exp(-delta (1-s) - gamma g(1-s)) as a series in s.
  PowerSeries exponent;
  exponent.coeffs.assign(max_k + 1, 0.0);
  exponent.coeffs[0] = -p.delta;
  if (max_k >= 1) exponent.coeffs[1] = p.delta;
  if (p.log_form) {
    const PowerSeries g = one_minus_s_log_series(max_k);
    for (std::size_t k = 0; k <= max_k; ++k) exponent.coeffs[k] -= p.gamma * g.coeffs[k];
  } else {
    // (1-s)^alpha = sum binom(alpha,k) (-s)^k
    const PowerSeries g = binomial_series(p.alpha, max_k);
    for (std::size_t k = 0; k <= max_k; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      exponent.coeffs[k] -= p.gamma * sign * g.coeffs[k];
    }
  }
  const PowerSeries probs = series_exp(exponent);
  for (std::size_t k = 0; k <= max_k; ++k) {
    const double v = probs.coeffs[k];
    if (!std::isfinite(v)) throw SeriesError("non-finite coefficient at order " + std::to_string(k));
    if (v < kNegativeCoefficientTol) {
      throw SeriesError("coefficient " + std::to_string(v) + " at order " + std::to_string(k) +
                        " is negative; parameters do not describe a distribution");
    }
  }
  CountPmf out;
  out.probs = probs.coeffs;
  for (double& v : out.probs) v = std::max(v, 0.0);
  out.tail_bound = std::max(0.0, 1.0 - compensated_total(out.probs));
  return out;
}

ChiSquareResult mc_chisquare(std::span<const std::uint64_t> samples, const CountPmf& reference) {
  if (samples.size() < kMinChiSquareSamples) {
    throw InsufficientData("chi-square needs at least " + std::to_string(kMinChiSquareSamples) +
                           " samples, got " + std::to_string(samples.size()));
  }
  const std::size_t range = reference.probs.size();
  std::vector<double> observed(range + 1, 0.0);  // last slot: above the reference range
  for (std::uint64_t s : samples) {
    observed[s < range ? static_cast<std::size_t>(s) : range] += 1.0;
  }
  const double n = static_cast<double>(samples.size());

  struct Cell {
    double expected = 0.0;
    double observed = 0.0;
  };
  std::vector<Cell> cells;
  Cell open;
  for (std::size_t k = 0; k < range; ++k) {
    open.expected += n * reference.probs[k];
    open.observed += observed[k];
    if (open.expected >= 5.0) {
      cells.push_back(open);
      open = {};
    }
  }
  open.expected += n * reference.tail_bound;
  open.observed += observed[range];
  if (open.expected >= 5.0 || cells.empty()) {
    cells.push_back(open);
  } else {
    cells.back().expected += open.expected;
    cells.back().observed += open.observed;
  }

  ChiSquareResult result;
  result.cells = cells.size();
  CompensatedSum stat;
  for (const Cell& c : cells) {
    const double diff = c.observed - c.expected;
    if (c.expected > 0.0) {
      stat += diff * diff / c.expected;
    } else if (c.observed > 0.0) {
      stat += std::numeric_limits<double>::infinity();
    }
  }
  result.statistic = stat.value();
  if (cells.size() < 2) {
    result.degrees_of_freedom = 0;
    result.p_value = result.statistic == 0.0 ? 1.0 : 0.0;
    return result;
  }
  result.degrees_of_freedom = static_cast<unsigned>(cells.size() - 1);
  result.p_value = std::isfinite(result.statistic)
                       ? boost::math::gamma_q(0.5 * result.degrees_of_freedom, 0.5 * result.statistic)
                       : 0.0;
  return result;
}

double empirical_factorial_moment(std::span<const std::uint64_t> samples, unsigned k) {
  if (k == 0) throw DomainError("factorial moment order must be >= 1");
  if (samples.empty()) throw InsufficientData("no samples");
  CompensatedSum s;
  for (std::uint64_t x : samples) {
    double f = 1.0;
    const double xd = static_cast<double>(x);
    for (unsigned i = 0; i < k; ++i) f *= xd - static_cast<double>(i);
    s += f;
  }
  return s.value() / static_cast<double>(samples.size());
}

}  // namespace countstable
