#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <numbers>

namespace pshift {

/// Real number m * 2^e with a double mantissa (0.5 <= |m| < 1) and a 64-bit exponent.
///
/// Weight products of pseudo-shifts grow or decay geometrically in the power and
/// leave the double range after a few thousand steps; coefficients built from them
/// do too. This type keeps double precision at any scale. Zero is m = 0, e = 0;
/// infinities and NaN sit in the mantissa with e = 0.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  ExtReal(double v) : m_(v) { normalize(); }  // NOLINT: implicit by design

  static ExtReal zero() { return {}; }
  static ExtReal one() { return ExtReal(1.0); }
  static ExtReal from_double(double v) { return ExtReal(v); }
  /// m * 2^e for any finite m.
  static ExtReal ldexp(double m, std::int64_t e) {
    ExtReal r(m);
    if (r.m_ != 0.0 && std::isfinite(r.m_)) r.e_ += e;
    return r;
  }
  /// sign * exp(log_abs).
  static ExtReal from_log(int sign, double log_abs) {
    if (sign == 0 || log_abs == -kInf) return {};
    const double s = sign > 0 ? 1.0 : -1.0;
    if (std::fabs(log_abs) < 700.0 || !std::isfinite(log_abs)) return ExtReal(s * std::exp(log_abs));
    const double t = log_abs / std::numbers::ln2;
    const double whole = std::floor(t);
    return ldexp(s * std::exp2(t - whole), static_cast<std::int64_t>(whole));
  }

  double mantissa() const { return m_; }
  std::int64_t exponent() const { return e_; }

  int sign() const { return (m_ > 0.0) - (m_ < 0.0); }
  bool is_zero() const { return m_ == 0.0; }
  bool is_finite() const { return std::isfinite(m_); }

  /// Saturates to 0 or +-inf outside the double range.
  double to_double() const {
    if (!std::isfinite(m_) || m_ == 0.0) return m_;
    if (e_ > 2000) return std::copysign(kInf, m_);
    if (e_ < -2000) return std::copysign(0.0, m_);
    return std::ldexp(m_, static_cast<int>(e_));
  }
  /// ln |x|; -inf for zero.
  double log_abs() const {
    if (m_ == 0.0) return -kInf;
    if (!std::isfinite(m_)) return std::fabs(m_);
    return std::log(std::fabs(m_)) + static_cast<double>(e_) * std::numbers::ln2;
  }

  ExtReal abs() const {
    ExtReal r = *this;
    r.m_ = std::fabs(r.m_);
    return r;
  }
  /// 1/x; the reciprocal of zero is +inf.
  ExtReal reciprocal() const { return ExtReal(1.0) / *this; }

  ExtReal operator-() const {
    ExtReal r = *this;
    r.m_ = -r.m_;
    return r;
  }

  ExtReal& operator*=(const ExtReal& o) {
    m_ *= o.m_;
    e_ += o.e_;
    normalize();
    return *this;
  }
  ExtReal& operator/=(const ExtReal& o) {
    m_ /= o.m_;
    e_ -= o.e_;
    normalize();
    return *this;
  }
  ExtReal& operator+=(const ExtReal& o) {
    if (o.m_ == 0.0) return *this;
    if (m_ == 0.0) return *this = o;
    if (!std::isfinite(m_) || !std::isfinite(o.m_)) {
      m_ += o.m_;
      e_ = 0;
      return *this;
    }
    if (e_ >= o.e_) {
      m_ += std::ldexp(o.m_, -shift(e_ - o.e_));
    } else {
      m_ = std::ldexp(m_, -shift(o.e_ - e_)) + o.m_;
      e_ = o.e_;
    }
    normalize();
    return *this;
  }
  ExtReal& operator-=(const ExtReal& o) { return *this += -o; }

  friend ExtReal operator*(ExtReal a, const ExtReal& b) { return a *= b; }
  friend ExtReal operator/(ExtReal a, const ExtReal& b) { return a /= b; }
  friend ExtReal operator+(ExtReal a, const ExtReal& b) { return a += b; }
  friend ExtReal operator-(ExtReal a, const ExtReal& b) { return a -= b; }

  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    return a.m_ == b.m_ && a.e_ == b.e_;
  }
  friend std::partial_ordering operator<=>(const ExtReal& a, const ExtReal& b) {
    if (std::isnan(a.m_) || std::isnan(b.m_)) return std::partial_ordering::unordered;
    const int sa = a.sign();
    const int sb = b.sign();
    if (sa != sb) return sa <=> sb;
    if (sa == 0) return std::partial_ordering::equivalent;
    auto mag = compare_magnitude(a, b);
    return sa > 0 ? mag : 0 <=> mag;
  }

  /// Compares |a| with |b|.
  friend std::partial_ordering compare_abs(const ExtReal& a, const ExtReal& b) {
    if (std::isnan(a.m_) || std::isnan(b.m_)) return std::partial_ordering::unordered;
    if (a.m_ == 0.0 || b.m_ == 0.0) return std::fabs(a.m_) <=> std::fabs(b.m_);
    return compare_magnitude(a, b);
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  static int shift(std::int64_t d) { return static_cast<int>(std::min<std::int64_t>(d, 2000)); }

  static std::partial_ordering compare_magnitude(const ExtReal& a, const ExtReal& b) {
    const bool fa = std::isfinite(a.m_);
    const bool fb = std::isfinite(b.m_);
    if (!fa || !fb) return std::fabs(fa ? 0.0 : a.m_) <=> std::fabs(fb ? 0.0 : b.m_);
    if (a.e_ != b.e_) return a.e_ <=> b.e_;
    return std::fabs(a.m_) <=> std::fabs(b.m_);
  }

  void normalize() {
    if (m_ == 0.0) {
      m_ = 0.0;  // drops the sign of -0.0
      e_ = 0;
      return;
    }
    if (!std::isfinite(m_)) {
      e_ = 0;
      return;
    }
    // Normal doubles: rewrite the biased exponent to 1022 so that 0.5 <= |m| < 1.
    auto bits = std::bit_cast<std::uint64_t>(m_);
    const auto biased = static_cast<std::int64_t>((bits >> 52) & 0x7ff);
    if (biased != 0) {
      bits = (bits & ~(std::uint64_t{0x7ff} << 52)) | (std::uint64_t{1022} << 52);
      m_ = std::bit_cast<double>(bits);
      e_ += biased - 1022;
      return;
    }
    int k = 0;
    m_ = std::frexp(m_, &k);
    e_ += k;
  }

  double m_ = 0.0;
  std::int64_t e_ = 0;
};

/// base^k by repeated squaring; k may be negative.
inline ExtReal pow(ExtReal base, std::int64_t k) {
  const bool invert = k < 0;
  std::uint64_t bits = invert ? 0 - static_cast<std::uint64_t>(k) : static_cast<std::uint64_t>(k);
  ExtReal result = ExtReal::one();
  while (bits != 0) {
    if (bits & 1u) result *= base;
    bits >>= 1;
    if (bits != 0) base *= base;
  }
  return invert ? result.reciprocal() : result;
}

}  // namespace pshift
