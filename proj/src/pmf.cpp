#include "countstable/pmf.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <ostream>
#include <string>

#include "countstable/errors.hpp"
#include "countstable/severity.hpp"
#include "countstable/summation.hpp"

namespace countstable {

namespace {

// exp(-lambda) underflows to a denormal beyond this.
constexpr double kMaxRate = 700.0;

// Binomial weights below this fraction of the modal weight are dropped. The
// dropped mass is below 1e-25 of the row and is not tracked.
constexpr double kBinomialCutoff = 1e-30;

// Index of the last non-zero entry, or 0.
std::size_t support_end(const std::vector<double>& q) {
  for (std::size_t i = q.size(); i-- > 0;) {
    if (q[i] != 0.0) return i;
  }
  return 0;
}

class PanjerRecursion {
 public:
  PanjerRecursion(const CompoundParams& c, std::size_t max_k) {
    require_valid(c);
    if (c.lambda > kMaxRate) {
      throw DomainError("lambda too large for the Panjer recursion: " + std::to_string(c.lambda));
    }
    const auto q = dsib_pmf_table({c.theta, c.alpha}, max_k);
    weights_.resize(q.size());
    for (std::size_t y = 0; y < q.size(); ++y) weights_[y] = c.lambda * static_cast<double>(y) * q[y];
    support_ = support_end(q);
    probs_.reserve(max_k + 1);
    probs_.push_back(std::exp(-c.lambda));
    mass_ += probs_.front();
  }

  // Appends p(n) for n = size().
  void step() {
    const std::size_t n = probs_.size();
    const std::size_t len = std::min(n, support_);
    double v = 0.0;
    if (len > 0) v = compensated_reverse_dot(weights_.data() + 1, probs_.data() + n - 1, len);
    v /= static_cast<double>(n);
    probs_.push_back(v);
    mass_ += v;
  }

  double tail() const { return std::max(0.0, 1.0 - mass_.value()); }
  std::size_t size() const { return probs_.size(); }
  std::vector<double> take() { return std::move(probs_); }

 private:
  std::vector<double> weights_;
  std::size_t support_ = 0;
  std::vector<double> probs_;
  CompensatedSum mass_;
};

// Binomial(x, a) weights for k in [lo, lo + w.size()), built outward from the
// mode by the term ratios and normalized over the kept window.
struct BinomialRow {
  std::size_t lo = 0;
  std::vector<double> w;
};

BinomialRow binomial_row(std::size_t x, double a) {
  BinomialRow row;
  const double ratio_up = a / (1.0 - a);
  const double xd = static_cast<double>(x);
  std::size_t mode = static_cast<std::size_t>(std::floor((xd + 1.0) * a));
  mode = std::min(mode, x);

  // Unnormalized, modal weight 1.
  std::vector<double> down;  // mode-1, mode-2, ...
  double v = 1.0;
  for (std::size_t k = mode; k > 0; --k) {
    v *= static_cast<double>(k) / (xd - static_cast<double>(k) + 1.0) / ratio_up;
    if (v < kBinomialCutoff) break;
    down.push_back(v);
  }
  std::vector<double> up;  // mode+1, mode+2, ...
  v = 1.0;
  for (std::size_t k = mode; k < x; ++k) {
    v *= (xd - static_cast<double>(k)) / static_cast<double>(k + 1) * ratio_up;
    if (v < kBinomialCutoff) break;
    up.push_back(v);
  }
  row.lo = mode - down.size();
  row.w.reserve(down.size() + 1 + up.size());
  row.w.assign(down.rbegin(), down.rend());
  row.w.push_back(1.0);
  row.w.insert(row.w.end(), up.begin(), up.end());
  const double total = compensated_total(row.w);
  for (double& e : row.w) e /= total;
  return row;
}

}  // namespace

double CountPmf::mass() const { return compensated_total(probs); }

CountPmf CountPmf::point_mass(std::size_t k) {
  CountPmf out;
  out.probs.assign(k + 1, 0.0);
  out.probs[k] = 1.0;
  return out;
}

CountPmf panjer_pmf(const CompoundParams& c, std::size_t max_k) {
  PanjerRecursion rec(c, max_k);
  while (rec.size() <= max_k) rec.step();
  const double tail = rec.tail();
  return {rec.take(), tail};
}

CountPmf panjer_pmf_auto(const CompoundParams& c, double tail_target, std::size_t cap) {
  PanjerRecursion rec(c, cap);
  while (rec.tail() >= tail_target && rec.size() <= cap) rec.step();
  const double tail = rec.tail();
  return {rec.take(), tail};
}

namespace {

std::optional<CompoundParams> compound_form(const StableParams& p) {
  require_valid(p);
  try {
    return stable_to_compound(p);
  } catch (const DegenerateError&) {
    return std::nullopt;
  }
}

CountPmf padded_point_mass_at_zero(std::size_t max_k) {
  CountPmf out;
  out.probs.assign(max_k + 1, 0.0);
  out.probs[0] = 1.0;
  return out;
}

}  // namespace

CountPmf stable_pmf(const StableParams& p, std::size_t max_k) {
  const auto c = compound_form(p);
  return c ? panjer_pmf(*c, max_k) : padded_point_mass_at_zero(max_k);
}

CountPmf stable_pmf_auto(const StableParams& p, double tail_target, std::size_t cap) {
  const auto c = compound_form(p);
  return c ? panjer_pmf_auto(*c, tail_target, cap) : padded_point_mass_at_zero(0);
}

CountPmf poisson_pmf(double rate, std::size_t max_k) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw DomainError("Poisson rate must be finite and >= 0");
  CountPmf out;
  out.probs.assign(max_k + 1, 0.0);
  if (rate == 0.0) {
    out.probs[0] = 1.0;
    return out;
  }
  if (rate <= kMaxRate) {
    double p = std::exp(-rate);
    out.probs[0] = p;
    for (std::size_t k = 1; k <= max_k; ++k) {
      p *= rate / static_cast<double>(k);
      out.probs[k] = p;
    }
  } else {
    // Start from the mode to avoid underflow of exp(-rate).
    const std::size_t mode = static_cast<std::size_t>(std::floor(rate));
    const double log_mode = -rate + static_cast<double>(mode) * std::log(rate) -
                            std::lgamma(static_cast<double>(mode) + 1.0);
    if (mode <= max_k) out.probs[mode] = std::exp(log_mode);
    double p = std::exp(log_mode);
    for (std::size_t k = mode; k > 0; --k) {
      p *= static_cast<double>(k) / rate;
      if (k - 1 <= max_k) out.probs[k - 1] = p;
    }
    p = std::exp(log_mode);
    for (std::size_t k = mode + 1; k <= max_k; ++k) {
      p *= rate / static_cast<double>(k);
      out.probs[k] = p;
    }
  }
  out.tail_bound = boost::math::gamma_p(static_cast<double>(max_k) + 1.0, rate);
  return out;
}

CountPmf poisson_pmf_auto(double rate, double tail_target) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw DomainError("Poisson rate must be finite and >= 0");
  std::size_t k = static_cast<std::size_t>(std::ceil(rate));
  while (boost::math::gamma_p(static_cast<double>(k) + 1.0, rate) >= tail_target) {
    k += 1 + k / 8;
  }
  return poisson_pmf(rate, k);
}

CountPmf hermite_pmf(const HermiteParams& h, std::size_t max_k) {
  require_valid(h);
  const CountPmf u = poisson_pmf(std::max(0.0, h.mu - h.sigma2), max_k);
  const CountPmf v = poisson_pmf(h.sigma2 / 2.0, max_k / 2);
  CountPmf twice_v;
  twice_v.probs.assign(max_k + 1, 0.0);
  for (std::size_t j = 0; j < v.probs.size(); ++j) twice_v.probs[2 * j] = v.probs[j];
  twice_v.tail_bound = v.tail_bound;
  return convolve(u, twice_v, max_k);
}

CountPmf thin_pmf(const CountPmf& x, double a) {
  if (!(a >= 0.0 && a <= 1.0)) {
    throw DomainError("thinning probability must lie in [0,1], got " + std::to_string(a));
  }
  if (a == 1.0) return x;
  CountPmf out;
  out.probs.assign(x.probs.size(), 0.0);
  out.tail_bound = x.tail_bound;
  if (x.probs.empty()) return out;
  if (a == 0.0) {
    out.probs[0] = x.mass();
    return out;
  }
  std::vector<CompensatedSum> acc(x.probs.size());
  for (std::size_t n = 0; n < x.probs.size(); ++n) {
    const double px = x.probs[n];
    if (px == 0.0) continue;
    const BinomialRow row = binomial_row(n, a);
    for (std::size_t j = 0; j < row.w.size(); ++j) acc[row.lo + j] += px * row.w[j];
  }
  for (std::size_t k = 0; k < acc.size(); ++k) out.probs[k] = acc[k].value();
  return out;
}

CountPmf convolve(const CountPmf& x, const CountPmf& y, std::optional<std::size_t> cap) {
  if (x.probs.empty()) return y;
  if (y.probs.empty()) return x;
  const std::size_t full = x.max_k() + y.max_k();
  const std::size_t top = cap ? std::min(*cap, full) : full;
  // Iterate over the shorter operand in the inner loop.
  const bool x_short = x.probs.size() <= y.probs.size();
  const std::vector<double>& s = x_short ? x.probs : y.probs;
  const std::vector<double>& l = x_short ? y.probs : x.probs;

  CountPmf out;
  out.probs.assign(top + 1, 0.0);
  for (std::size_t k = 0; k <= top; ++k) {
    // j indexes s; k - j indexes l.
    const std::size_t j_lo = k >= l.size() ? k - (l.size() - 1) : 0;
    const std::size_t j_hi = std::min(k, s.size() - 1);
    if (j_lo > j_hi) continue;
    out.probs[k] = compensated_reverse_dot(s.data() + j_lo, l.data() + (k - j_lo), j_hi - j_lo + 1);
  }
  double loss = 0.0;
  if (top < full) {
    const double product_mass = x.mass() * y.mass();
    loss = std::max(0.0, product_mass - out.mass());
  }
  out.tail_bound = x.tail_bound + y.tail_bound + loss;
  return out;
}

CountPmf truncate_pmf(const CountPmf& x, std::size_t max_k) {
  if (x.max_k() <= max_k) return x;
  CountPmf out;
  out.probs.assign(x.probs.begin(), x.probs.begin() + static_cast<std::ptrdiff_t>(max_k + 1));
  out.tail_bound = x.tail_bound + compensated_total(std::span(x.probs).subspan(max_k + 1));
  return out;
}

CountPmf convolve_power(const CountPmf& x, unsigned long n, std::size_t cap) {
  if (n == 0) throw DomainError("convolution power must be positive");
  CountPmf base = truncate_pmf(x, cap);
  std::optional<CountPmf> result;
  for (;;) {
    if (n & 1UL) result = result ? convolve(*result, base, cap) : base;
    n >>= 1;
    if (n == 0) break;
    base = convolve(base, base, cap);
  }
  return *result;
}

CountPmf poisson_shift_pmf(const CountPmf& x, double b, std::optional<std::size_t> cap) {
  if (!(b >= 0.0) || !std::isfinite(b)) {
    throw DomainError("PMF-level Poisson shift requires finite b >= 0; left shifts are parameter-level only");
  }
  if (b == 0.0) return x;
  return convolve(x, poisson_pmf_auto(b), cap);
}

double tv_distance(const CountPmf& x, const CountPmf& y) {
  const std::size_t common = std::min(x.probs.size(), y.probs.size());
  CompensatedSum diff;
  for (std::size_t k = 0; k < common; ++k) diff += std::abs(x.probs[k] - y.probs[k]);
  // Mass of the longer vector past the common range is unmatched.
  const auto beyond = [common](const CountPmf& p) {
    return p.probs.size() > common ? compensated_total(std::span(p.probs).subspan(common)) : 0.0;
  };
  return 0.5 * diff.value() + 0.5 * (x.tail_bound + beyond(x) + y.tail_bound + beyond(y));
}

double max_abs_difference(const CountPmf& x, const CountPmf& y) {
  const std::size_t common = std::min(x.probs.size(), y.probs.size());
  double m = 0.0;
  for (std::size_t k = 0; k < common; ++k) m = std::max(m, std::abs(x.probs[k] - y.probs[k]));
  return m;
}

double factorial_moment(const CountPmf& x, unsigned k) {
  CompensatedSum s;
  for (std::size_t n = 0; n < x.probs.size(); ++n) {
    double f = 1.0;
    for (unsigned i = 0; i < k; ++i) f *= static_cast<double>(n) - static_cast<double>(i);
    s += f * x.probs[n];
  }
  return s.value();
}

std::vector<std::uint64_t> stable_sample(const CompoundParams& c, Rng& rng, std::size_t count) {
  require_valid(c);
  const DelayedSibuyaParams severity{c.theta, c.alpha};
  std::vector<std::uint64_t> out(count, 0);
  for (auto& draw : out) {
    const std::uint64_t summands = sample_poisson(c.lambda, rng);
    std::uint64_t total = 0;
    for (std::uint64_t i = 0; i < summands; ++i) total = saturating_add(total, dsib_sample(severity, rng));
    draw = total;
  }
  return out;
}

std::vector<std::uint64_t> hermite_sample(const HermiteParams& h, Rng& rng, std::size_t count) {
  require_valid(h);
  const double singles = std::max(0.0, h.mu - h.sigma2);
  const double pairs = h.sigma2 / 2.0;
  std::vector<std::uint64_t> out(count, 0);
  for (auto& draw : out) {
    const std::uint64_t u = sample_poisson(singles, rng);
    const std::uint64_t v = sample_poisson(pairs, rng);
    draw = u + 2 * v;
  }
  return out;
}

void write_csv(std::ostream& os, const CountPmf& x) {
  const auto old_precision = os.precision(17);
  os << "k,p\n";
  for (std::size_t k = 0; k < x.probs.size(); ++k) os << k << ',' << x.probs[k] << '\n';
  os << "tail," << x.tail_bound << '\n';
  os.precision(old_precision);
}

nlohmann::json to_json(const CountPmf& x) {
  return nlohmann::json{{"probs", x.probs}, {"tail_bound", x.tail_bound}};
}

CountPmf pmf_from_json(const nlohmann::json& j) {
  CountPmf out;
  j.at("probs").get_to(out.probs);
  j.at("tail_bound").get_to(out.tail_bound);
  return out;
}

}  // namespace countstable
