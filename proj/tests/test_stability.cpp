#include <doctest.h>

#include <cmath>

#include "countstable/errors.hpp"
#include "countstable/stability.hpp"
#include "reference.hpp"

using namespace countstable;

namespace {

std::vector<StableParams> grid() {
  std::vector<StableParams> out;
  for (double alpha : {0.3, 0.5, 1.0, 1.5, 2.0}) {
    for (double theta : {0.0, 0.4, 0.9}) {
      for (double lambda : {0.5, 2.0}) out.push_back(compound_to_stable(CompoundParams::make(lambda, theta, alpha)));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("coefficients examples") {
  const auto h = coefficients(hermite_to_stable({2.0, 2.0}), 4);
  CHECK(h.a == 0.5);
  CHECK(h.b == 2.0);
  for (const auto& p : grid()) {
    const auto c = coefficients(p, 1);
    CHECK(c.a == 1.0);
    CHECK(c.b == 0.0);
  }
  const auto s = coefficients(StableParams::make(0.5, 1.0, 0.0), 4);
  CHECK(s.a == 1.0 / 16);
  CHECK(s.b == doctest::Approx(-0.75).epsilon(1e-15));
  // alpha = 1: b_n = -gamma log n
  const auto l = coefficients(StableParams::make(1.0, 1.0, -0.5), 3);
  CHECK(l.a == doctest::Approx(1.0 / 3));
  CHECK(l.b == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-15));
}

TEST_CASE("coefficients satisfy the APGF identity") {
  // psi(a t)^n = e^{-b t} psi(t)
  for (const auto& p : grid()) {
    for (unsigned long n : {2ul, 3ul, 7ul}) {
      const auto c = coefficients(p, n);
      for (double t : {0.1, 0.8, 1.9}) {
        const double lhs = std::pow(apgf_eval(p, c.a * t), static_cast<double>(n));
        CHECK(lhs == doctest::Approx(std::exp(-c.b * t) * apgf_eval(p, t)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("multiplicativity and cocycle") {
  for (const auto& p : grid()) {
    for (unsigned long n = 1; n <= 6; ++n) {
      for (unsigned long m = 1; m <= 6; ++m) {
        const auto cn = coefficients(p, n);
        const auto cm = coefficients(p, m);
        const auto cnm = coefficients(p, n * m);
        CHECK(std::abs(cnm.a - cn.a * cm.a) <= 1e-14);
        const double predicted = p.log_form
                                     ? cn.b + cm.b
                                     : std::pow(static_cast<double>(n), 1 - 1 / p.alpha) * cm.b + cn.b;
        CHECK(std::abs(cnm.b - predicted) <= 1e-12);
      }
    }
  }
}

TEST_CASE("a_n decreases in n") {
  for (double alpha : {0.3, 1.0, 2.0}) {
    const auto p = StableParams::make(alpha, 1.0, 0.0);
    double prev = coefficients(p, 1).a;
    for (unsigned long n = 2; n <= 50; ++n) {
      const double a = coefficients(p, n).a;
      CHECK(a < prev);
      prev = a;
    }
  }
}

TEST_CASE("verify_param_level examples") {
  CHECK(verify_param_level(hermite_to_stable({2.0, 2.0}), 4) <= 1e-12);
  CHECK(verify_param_level(StableParams::make(1.0, 1.0, -0.5), 3) <= 1e-12);
  for (unsigned long n : {2ul, 5ul, 40ul}) {
    CHECK(verify_param_level(StableParams::make(0.7, 2.0, 0.0), n) == 0.0);
    CHECK(coefficients(StableParams::make(1.0, 2.0, 0.0), n).b == 0.0);
  }
}

TEST_CASE("verify_param_level over the grid") {
  for (const auto& p : grid()) {
    for (unsigned long n : {2ul, 3ul, 4ul, 7ul, 10ul, 100ul}) CHECK(verify_param_level(p, n) <= 1e-12);
  }
  // the boundary point delta = -alpha gamma
  CHECK(verify_param_level(StableParams::make(0.5, -0.25, 0.5), 9) <= 1e-12);
}

TEST_CASE("the log-form shift sign") {
  // with b_n = +gamma log n the identity would be off by 2 |gamma| log n
  const auto p = StableParams::make(1.0, 1.0, -0.5);
  const auto c = coefficients(p, 4);
  CHECK(c.b > 0.0);
  const auto wrong = shift_params(thin_params(iid_sum_params(p, 4), c.a), c.b);
  CHECK(std::abs(wrong.delta - p.delta) == doctest::Approx(2 * 0.5 * std::log(4.0)));
}

TEST_CASE("verify_pmf_level on Hermite") {
  const auto r = verify_pmf_level(hermite_to_stable({2.0, 2.0}), 4, 60);
  CHECK(r.pass);
  CHECK(r.a_n == 0.5);
  CHECK(r.b_n == 2.0);
  CHECK(r.form_used == ShiftForm::kRhsShifted);
  CHECK(r.tv <= 1e-8);
  CHECK(r.param_residual <= 1e-12);
  CHECK(r.max_k == 60);
}

TEST_CASE("verify_pmf_level balances negative shifts on the left") {
  // alpha < 1 with delta > 0 gives b_n < 0
  const auto p = StableParams::make(0.5, 1.0, 0.0);
  const auto r = verify_pmf_level(p, 4, 80);
  CHECK(r.b_n < 0.0);
  CHECK(r.form_used == ShiftForm::kLhsShifted);
  CHECK(r.pass);
}

TEST_CASE("verify_pmf_level strict case has no shift") {
  const auto p = StableParams::make(0.5, 0.0, 1.0);
  const auto r = verify_pmf_level(p, 2, 2000);
  CHECK(r.b_n == 0.0);
  CHECK_FALSE(std::signbit(r.b_n));
  CHECK(r.form_used == ShiftForm::kNone);
  CHECK(r.param_residual <= 1e-12);
  // the two sides agree inside the window; the certified bound is dominated by the heavy tail
  CHECK(r.window_tv <= 1e-8);
  CHECK(r.tv == doctest::Approx(r.window_tv + 0.5 * (r.lhs_tail + r.rhs_tail)));
  CHECK(r.rhs_tail > 1e-3);
  CHECK_FALSE(r.pass);
  CHECK(verify_pmf_level(p, 2, 2000, 2 * r.tv).pass);
}

TEST_CASE("verify_pmf_level in the log form") {
  const auto p = StableParams::make(1.0, 1.0, -0.5);
  const auto r = verify_pmf_level(p, 2, 2000);
  CHECK(r.b_n == doctest::Approx(0.5 * std::log(2.0)));
  CHECK(r.form_used == ShiftForm::kRhsShifted);
  CHECK(r.param_residual <= 1e-12);
  CHECK(r.window_tv <= 1e-8);
  // tail of order (1-theta) lambda / K remains beyond the window
  CHECK(r.rhs_tail > 1e-5);
  CHECK(r.pass == (r.tv <= 1e-8));
}

TEST_CASE("verify_pmf_level window agrees with a direct computation") {
  // one LHS value from the binomial sum over the exact convolution
  const auto c = CompoundParams::make(1.0, 0.4, 1.5);
  const auto p = compound_to_stable(c);
  const std::size_t k = 40;
  const auto coef = coefficients(p, 2);
  const std::size_t range = 400;
  const auto q = reference::delayed_sibuya(c.theta, c.alpha, range);
  const auto x = reference::compound_poisson(c.lambda, q, range, 200);
  const auto sum = reference::convolve(x, x, range);
  const auto lhs = reference::thin(sum, coef.a);
  const auto rhs = reference::convolve(x, reference::poisson(coef.b, range), range);
  double window = 0.0;
  for (std::size_t i = 0; i <= k; ++i) window += 0.5 * std::abs(lhs[i] - rhs[i]);
  const auto r = verify_pmf_level(p, 2, k);
  CHECK(window <= 1e-8);
  CHECK(r.window_tv <= 1e-8);
}

TEST_CASE("verify_pmf_level rejects bad copy counts") {
  const auto p = hermite_to_stable({2.0, 1.0});
  CHECK_THROWS_AS(verify_pmf_level(p, 0, 10), DomainError);
  CHECK_THROWS_AS(verify_pmf_level(p, 17, 10), DomainError);
  CHECK_THROWS_AS(verify_pmf_level(p, 2, stable_pmf(p, 5), 10), DomainError);
}

TEST_CASE("verification window and pre-thinning range") {
  const auto p = hermite_to_stable({2.0, 2.0});
  const std::size_t w = verification_window(p, 4, 1e-8);
  CHECK(stable_pmf(p, w).tail_bound <= 1e-8 / 4);
  CHECK(pre_thinning_range(w, 1.0) == w);
  CHECK(pre_thinning_range(100, 0.5) >= 200);
  CHECK(pre_thinning_range(100, 1e-9) == kMaxTruncation);
  CHECK_THROWS_AS(pre_thinning_range(10, 0.0), DomainError);
  const auto r = verify_pmf_level(p, 4, w);
  CHECK(r.pass);
}

TEST_CASE("report JSON") {
  const auto r = verify_pmf_level(hermite_to_stable({2.0, 2.0}), 4, 60);
  const auto j = to_json(r);
  CHECK(j["n"] == 4);
  CHECK(j["a_n"] == 0.5);
  CHECK(j["verdict"] == "pass");
  CHECK(j["form_used"] == "rhs_shifted");
  for (const char* key : {"b_n", "param_residual", "tv", "window_tv", "lhs_tail", "rhs_tail", "max_k", "tolerance"}) {
    CHECK(j.contains(key));
  }
}

TEST_CASE("classify") {
  CHECK(classify(StableParams::make(2.0, 2.0, -1.0)) == StabilityClass::kBroadlyStableOnly);
  CHECK(classify(StableParams::make(0.5, 0.0, 1.0)) == StabilityClass::kStrictlyStable);
  CHECK(classify(StableParams::make(1.0, 3.0, 0.0)) == StabilityClass::kPoisson);
  CHECK(classify(StableParams::make(1.0, 0.0, 0.0)) == StabilityClass::kPoisson);
  CHECK(classify(StableParams::make(0.5, 1.0, 1.0)) == StabilityClass::kBroadlyStableOnly);
  CHECK(to_string(StabilityClass::kStrictlyStable) == "strictly_stable");
}

TEST_CASE("classify is invariant under thinning") {
  for (const auto& p : grid()) {
    for (double a : {0.1, 0.5, 0.99}) CHECK(classify(thin_params(p, a)) == classify(p));
  }
  const auto strict = StableParams::make(0.6, 0.0, 2.0);
  for (double a : {0.1, 0.5, 0.99}) CHECK(classify(thin_params(strict, a)) == StabilityClass::kStrictlyStable);
}
