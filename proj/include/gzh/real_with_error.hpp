#pragma once

#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "gzh/arith.hpp"

namespace gzh {

enum class ErrorKind { kRigorous, kHeuristic };

inline std::string_view to_string(ErrorKind k) {
  return k == ErrorKind::kRigorous ? "rigorous" : "heuristic";
}

// A real number with an absolute error bound. Arithmetic propagates errors
// linearly (first order) and degrades the flag to heuristic if any operand is.
struct RealWithError {
  double value = 0.0;
  double abs_error = 0.0;
  ErrorKind kind = ErrorKind::kRigorous;

  static RealWithError exact(double v) { return {v, 0.0, ErrorKind::kRigorous}; }

  friend RealWithError operator+(const RealWithError& a, const RealWithError& b) {
    return {a.value + b.value, a.abs_error + b.abs_error, worst(a.kind, b.kind)};
  }
  friend RealWithError operator-(const RealWithError& a, const RealWithError& b) {
    return {a.value - b.value, a.abs_error + b.abs_error, worst(a.kind, b.kind)};
  }
  friend RealWithError operator*(double c, const RealWithError& a) {
    return {c * a.value, std::abs(c) * a.abs_error, a.kind};
  }
  friend RealWithError operator*(const RealWithError& a, const RealWithError& b) {
    return {a.value * b.value,
            std::abs(a.value) * b.abs_error + std::abs(b.value) * a.abs_error +
                a.abs_error * b.abs_error,
            worst(a.kind, b.kind)};
  }
  friend RealWithError operator/(const RealWithError& a, const RealWithError& b) {
    const double q = a.value / b.value;
    const double denom = std::abs(b.value) - b.abs_error;
    const double err = denom > 0 ? (a.abs_error + std::abs(q) * b.abs_error) / denom
                                 : std::numeric_limits<double>::infinity();
    return {q, err, worst(a.kind, b.kind)};
  }

  static ErrorKind worst(ErrorKind a, ErrorKind b) {
    return (a == ErrorKind::kHeuristic || b == ErrorKind::kHeuristic) ? ErrorKind::kHeuristic
                                                                     : ErrorKind::kRigorous;
  }

  friend std::ostream& operator<<(std::ostream& os, const RealWithError& x) {
    return os << x.value << " ± " << x.abs_error << " (" << to_string(x.kind) << ")";
  }
};

// Exact rational with 64-bit components, always normalized (den > 0, gcd 1).
class Rational {
 public:
  Rational() = default;
  Rational(i64 num, i64 den = 1) : num_(num), den_(den) {
    if (den_ == 0) throw InvalidArgument("Rational: zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const i64 g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  i64 num() const { return num_; }
  i64 den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return {a.num_ * b.num_, a.den_ * b.den_};
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    return {a.num_ * b.den_, a.den_ * b.num_};
  }
  friend bool operator==(const Rational&, const Rational&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  i64 num_ = 0;
  i64 den_ = 1;
};

}  // namespace gzh
