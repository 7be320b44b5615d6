#include "countstable/random.hpp"

#include <cmath>

#include "countstable/errors.hpp"

namespace countstable {

std::uint64_t sample_poisson(double rate, Rng& rng) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw DomainError("Poisson rate must be finite and >= 0");
  if (rate == 0.0) return 0;
  if (rate < 30.0) {
    const double u = uniform_open01(rng);
    double p = std::exp(-rate);
    double cdf = p;
    std::uint64_t k = 0;
    while (u > cdf) {
      ++k;
      p *= rate / static_cast<double>(k);
      if (p == 0.0) break;
      cdf += p;
    }
    return k;
  }
  std::poisson_distribution<std::uint64_t> dist(rate);
  return dist(rng);
}

}  // namespace countstable
