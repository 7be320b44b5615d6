#pragma once

// Discrete stability: a_n ∘ (X_1 + ... + X_n) ≡ X ⊕ b_n with a_n = n^(-1/alpha).

#include <cstddef>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "countstable/family.hpp"
#include "countstable/pmf.hpp"

namespace countstable {

inline constexpr double kParamTolerance = 1e-10;
inline constexpr double kPmfTolerance = 1e-8;
/// Largest copy count accepted by the PMF-level verifier.
inline constexpr unsigned long kMaxPmfCopies = 16;

struct StabilityCoefficients {
  double a = 1.0;  // thinning, n^(-1/alpha)
  double b = 0.0;  // Poisson shift
};

/// a_n = n^(-1/alpha); b_n = delta (n^(1-1/alpha) - 1) for alpha != 1 and
/// b_n = -gamma log n for alpha = 1.
StabilityCoefficients coefficients(const StableParams& p, unsigned long n);

/// Max componentwise deviation of thin(sum_n(p), a_n) ⊖ b_n from p.
double verify_param_level(const StableParams& p, unsigned long n);

/// Which side carried the Poisson shift when the two sides were balanced.
enum class ShiftForm {
  kNone,        // b_n = 0
  kRhsShifted,  // b_n > 0: LHS vs X ⊕ b_n
  kLhsShifted,  // b_n < 0: LHS ⊕ |b_n| vs X
};

std::string_view to_string(ShiftForm f);

struct StabilityReport {
  unsigned long n = 1;
  double a_n = 1.0;
  double b_n = 0.0;
  double param_residual = 0.0;
  /// Certified TV bound between the balanced sides, tails included.
  double tv = 0.0;
  /// Half the l1 distance over the computed window only.
  double window_tv = 0.0;
  double lhs_tail = 0.0;
  double rhs_tail = 0.0;
  std::size_t max_k = 0;
  double tolerance = kPmfTolerance;
  bool pass = false;
  ShiftForm form_used = ShiftForm::kNone;
};

/// Compares a_n ∘ (X_1 + ... + X_n) with X ⊕ b_n on {0..max_k}, shifting
/// whichever side keeps both shifts non-negative. X is computed on the
/// pre-thinning range so that no window mass is lost to truncation.
StabilityReport verify_pmf_level(const StableParams& p, unsigned long n, std::size_t max_k,
                                 double tol = kPmfTolerance);

/// Same, with X supplied; entries of x above max_k feed the thinned side only.
StabilityReport verify_pmf_level(const StableParams& p, unsigned long n, const CountPmf& x,
                                 std::size_t max_k, double tol = kPmfTolerance);

/// Range of X needed before thinning by `a` so that values thinning into
/// {0..window} are (to ~10 standard deviations) all present. Capped at `cap`.
std::size_t pre_thinning_range(std::size_t window, double a, std::size_t cap = kMaxTruncation);

/// Smallest window whose tails leave room for an n-copy check at `tol`, capped at `cap`.
std::size_t verification_window(const StableParams& p, unsigned long n, double tol,
                                std::size_t cap = kMaxTruncation);

nlohmann::json to_json(const StabilityReport& r);

enum class StabilityClass { kStrictlyStable, kBroadlyStableOnly, kPoisson };

StabilityClass classify(const StableParams& p);
std::string_view to_string(StabilityClass c);

}  // namespace countstable
