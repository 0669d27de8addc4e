#pragma once

#include <cmath>
#include <compare>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace pwcalc {

// A value in (-inf, +inf]. +inf is the only non-finite value allowed;
// 0 * inf = 0 and inf - inf is a logic error.
class ExtendedReal {
 public:
  ExtendedReal() = default;
  ExtendedReal(double v) : v_(v) {  // NOLINT(google-explicit-constructor)
    if (std::isnan(v)) throw std::logic_error("ExtendedReal: NaN");
    if (v == -std::numeric_limits<double>::infinity()) throw std::logic_error("ExtendedReal: -inf is not representable");
  }

  static ExtendedReal infinity() { return ExtendedReal(std::numeric_limits<double>::infinity()); }

  bool is_infinite() const { return std::isinf(v_); }
  bool is_finite() const { return !is_infinite(); }
  double value() const { return v_; }

  // Finite value or throws.
  double finite() const {
    if (is_infinite()) throw std::logic_error("ExtendedReal: expected a finite value");
    return v_;
  }

  friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    return a.v_ + b.v_;
  }
  friend ExtendedReal operator-(ExtendedReal a, ExtendedReal b) {
    if (b.is_infinite()) throw std::logic_error(a.is_infinite() ? "ExtendedReal: inf - inf" : "ExtendedReal: x - inf");
    if (a.is_infinite()) return infinity();
    return a.v_ - b.v_;
  }
  ExtendedReal& operator+=(ExtendedReal o) { return *this = *this + o; }

  // Scalar multiple with the 0 * inf = 0 convention.
  friend ExtendedReal operator*(double s, ExtendedReal a) {
    if (s == 0.0) return 0.0;
    if (a.is_infinite()) {
      if (s < 0) throw std::logic_error("ExtendedReal: negative multiple of inf");
      return infinity();
    }
    return s * a.v_;
  }
  friend ExtendedReal operator*(ExtendedReal a, double s) { return s * a; }

  friend bool operator==(ExtendedReal a, ExtendedReal b) { return a.v_ == b.v_; }
  friend std::partial_ordering operator<=>(ExtendedReal a, ExtendedReal b) { return a.v_ <=> b.v_; }

  std::string to_string() const {
    if (is_infinite()) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v_);
    return buf;
  }

  friend std::ostream& operator<<(std::ostream& os, ExtendedReal a) { return os << a.to_string(); }

 private:
  double v_ = 0.0;
};

inline ExtendedReal inf() { return ExtendedReal::infinity(); }

}  // namespace pwcalc
