#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace countstable {

// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  CompensatedSum& operator+=(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_total(std::span<const double> xs) {
  CompensatedSum s;
  for (double x : xs) s += x;
  return s.value();
}

// Dot product of x[0..len) with y read backwards from y_last, i.e.
// sum_j x[j] * y_last[-j]. Blocks of plain products (eight interleaved
// partial sums) are folded into a compensated accumulator.
inline double compensated_reverse_dot(const double* x, const double* y_last,
                                      std::size_t len) {
  constexpr std::size_t kBlock = 64;
  constexpr std::size_t kLanes = 8;
  CompensatedSum total;
  std::size_t j = 0;
  while (j < len) {
    const std::size_t end = (len - j > kBlock) ? j + kBlock : len;
    double lane[kLanes] = {};
    for (; j + kLanes <= end; j += kLanes) {
      for (std::size_t l = 0; l < kLanes; ++l) lane[l] += x[j + l] * *(y_last - (j + l));
    }
    double block = 0.0;
    for (; j < end; ++j) block += x[j] * *(y_last - j);
    for (double v : lane) block += v;
    total += block;
  }
  return total.value();
}

}  // namespace countstable
