#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace bdp {

using Index = long;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Neumaier-compensated accumulator. The carry is added once, on read.
template <typename Scalar = double>
class CompensatedSum {
 public:
  void add(Scalar x) {
    using std::fabs;
    const Scalar t = sum_ + x;
    if (fabs(sum_) >= fabs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  Scalar value() const { return sum_ + carry_; }
  void reset() { sum_ = Scalar(0); carry_ = Scalar(0); }

 private:
  Scalar sum_ = Scalar(0);
  Scalar carry_ = Scalar(0);
};

// log(exp(x) + exp(y)) without leaving the log domain.
inline double log_add_exp(double x, double y) {
  if (x == -kInf) return y;
  if (y == -kInf) return x;
  const double hi = std::max(x, y);
  const double lo = std::min(x, y);
  return hi + std::log1p(std::exp(lo - hi));
}

// Extended nonnegative real used for series limits and certificates.
// `Unknown` marks an indeterminate limit (e.g. an inf*0 product).
struct ExtReal {
  enum class Kind { Zero, Finite, Infinite, Unknown };
  Kind kind = Kind::Unknown;
  double value = kNaN;  // meaningful only when Finite (value > 0)

  static ExtReal zero() { return {Kind::Zero, 0.0}; }
  static ExtReal finite(double v) {
    if (!(v > 0.0) || std::isinf(v)) throw std::invalid_argument("ExtReal::finite needs 0 < v < inf");
    return {Kind::Finite, v};
  }
  static ExtReal infinite() { return {Kind::Infinite, kInf}; }
  static ExtReal unknown() { return {Kind::Unknown, kNaN}; }

  bool is_zero() const { return kind == Kind::Zero; }
  bool is_finite() const { return kind == Kind::Finite; }
  bool is_infinite() const { return kind == Kind::Infinite; }
  bool is_unknown() const { return kind == Kind::Unknown; }
};

// Product of extended reals; 0 * inf is Unknown.
inline ExtReal operator*(const ExtReal& x, const ExtReal& y) {
  using K = ExtReal::Kind;
  if (x.kind == K::Unknown || y.kind == K::Unknown) return ExtReal::unknown();
  if ((x.kind == K::Zero && y.kind == K::Infinite) ||
      (x.kind == K::Infinite && y.kind == K::Zero))
    return ExtReal::unknown();
  if (x.kind == K::Zero || y.kind == K::Zero) return ExtReal::zero();
  if (x.kind == K::Infinite || y.kind == K::Infinite) return ExtReal::infinite();
  return ExtReal::finite(x.value * y.value);
}

inline ExtReal ext_reciprocal(const ExtReal& x) {
  using K = ExtReal::Kind;
  switch (x.kind) {
    case K::Zero: return ExtReal::infinite();
    case K::Infinite: return ExtReal::zero();
    case K::Finite: return ExtReal::finite(1.0 / x.value);
    default: return ExtReal::unknown();
  }
}

}  // namespace bdp
