#pragma once

#include <cmath>
#include <span>

namespace metriq {

// Neumaier's variant of Kahan summation. Keeps a running correction term so
// that the result is accurate to about one rounding of the exact sum even when
// terms cancel.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double initial) : sum_(initial) {}

  CompensatedSum& operator+=(double term) noexcept {
    const double t = sum_ + term;
    if (std::fabs(sum_) >= std::fabs(term)) {
      correction_ += (sum_ - t) + term;
    } else {
      correction_ += (term - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  CompensatedSum& operator-=(double term) noexcept { return *this += -term; }

  [[nodiscard]] double value() const noexcept { return sum_ + correction_; }
  explicit operator double() const noexcept { return value(); }

 private:
  double sum_ = 0.0;
  double correction_ = 0.0;
};

[[nodiscard]] inline double compensated_sum(std::span<const double> terms) noexcept {
  CompensatedSum acc;
  for (double t : terms) acc += t;
  return acc.value();
}

}  // namespace metriq
