#pragma once

#include <cmath>

namespace bps {

/// Compensated (Neumaier) accumulator. Mass sums feed certified bounds, so
/// plain left-to-right summation error is not acceptable at large sizes.
class NeumaierSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace bps
