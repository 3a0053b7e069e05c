#pragma once

// Exact coefficient fields: prime fields F_p (p < 2^31) and the rationals.

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "skewtower/error.hpp"

namespace skewtower {

__extension__ using wide_int = __int128;

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (std::int64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

class FieldDescriptor {
 public:
  enum class Kind : std::uint8_t { PrimeField, Rationals };

  /// F_p. Throws NotAPrime unless p is a prime below 2^31.
  static FieldDescriptor prime(std::int64_t p) {
    if (p >= (std::int64_t{1} << 31) || !is_prime(p)) {
      throw Error(ErrorKind::NotAPrime, std::to_string(p) + " is not a prime below 2^31");
    }
    return FieldDescriptor(Kind::PrimeField, static_cast<std::uint32_t>(p));
  }
  static FieldDescriptor rationals() { return FieldDescriptor(Kind::Rationals, 0); }

  Kind kind() const noexcept { return kind_; }
  bool is_prime_field() const noexcept { return kind_ == Kind::PrimeField; }
  std::int64_t characteristic() const noexcept { return p_; }

  std::string name() const {
    return is_prime_field() ? "F_" + std::to_string(p_) : std::string("Q");
  }

  friend bool operator==(const FieldDescriptor&, const FieldDescriptor&) = default;

 private:
  FieldDescriptor(Kind kind, std::uint32_t p) : kind_(kind), p_(p) {}

  Kind kind_;
  std::uint32_t p_;
};

/// An element of a FieldDescriptor's field in canonical form: a residue in
/// [0, p) for F_p, a reduced fraction with positive denominator for Q.
class Scalar {
 public:
  Scalar(const FieldDescriptor& field, std::int64_t value) : field_(field) {
    if (field_.is_prime_field()) {
      const std::int64_t p = field_.characteristic();
      num_ = value % p;
      if (num_ < 0) num_ += p;
    } else {
      num_ = value;
    }
  }

  /// num/den in the given field; den must be nonzero (and invertible mod p).
  static Scalar fraction(const FieldDescriptor& field, std::int64_t num, std::int64_t den) {
    if (den == 0) throw Error(ErrorKind::DivisionByZero, "zero denominator");
    if (field.is_prime_field()) return Scalar(field, num) * Scalar(field, den).inverse();
    return Scalar(field, num, den, Normalize{});
  }

  static Scalar zero(const FieldDescriptor& field) { return Scalar(field, 0); }
  static Scalar one(const FieldDescriptor& field) { return Scalar(field, 1); }

  const FieldDescriptor& field() const noexcept { return field_; }
  std::int64_t numerator() const noexcept { return num_; }
  std::int64_t denominator() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_ == 0; }
  bool is_one() const noexcept { return num_ == 1 && den_ == 1; }

  Scalar operator+(const Scalar& rhs) const {
    check_field(rhs);
    if (field_.is_prime_field()) {
      std::int64_t s = num_ + rhs.num_;
      if (s >= field_.characteristic()) s -= field_.characteristic();
      return Scalar(field_, s, 1, Raw{});
    }
    const wide_int n = static_cast<wide_int>(num_) * rhs.den_ + static_cast<wide_int>(rhs.num_) * den_;
    const wide_int d = static_cast<wide_int>(den_) * rhs.den_;
    return from_wide(n, d);
  }

  Scalar operator-() const {
    if (field_.is_prime_field()) {
      return Scalar(field_, num_ == 0 ? 0 : field_.characteristic() - num_, 1, Raw{});
    }
    return Scalar(field_, -num_, den_, Raw{});
  }

  Scalar operator-(const Scalar& rhs) const { return *this + (-rhs); }

  Scalar operator*(const Scalar& rhs) const {
    check_field(rhs);
    if (field_.is_prime_field()) {
      return Scalar(field_, (num_ * rhs.num_) % field_.characteristic(), 1, Raw{});
    }
    const wide_int n = static_cast<wide_int>(num_) * rhs.num_;
    const wide_int d = static_cast<wide_int>(den_) * rhs.den_;
    return from_wide(n, d);
  }

  Scalar& operator+=(const Scalar& rhs) { return *this = *this + rhs; }
  Scalar& operator-=(const Scalar& rhs) { return *this = *this - rhs; }
  Scalar& operator*=(const Scalar& rhs) { return *this = *this * rhs; }

  /// Multiplicative inverse; DivisionByZero for 0.
  Scalar inverse() const {
    if (is_zero()) throw Error(ErrorKind::DivisionByZero, "zero has no inverse");
    if (field_.is_prime_field()) {
      // Extended Euclid on (num, p).
      std::int64_t a = num_, m = field_.characteristic();
      std::int64_t x0 = 1, x1 = 0;
      while (m != 0) {
        const std::int64_t q = a / m;
        std::int64_t t = a - q * m;
        a = m;
        m = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
      }
      return Scalar(field_, x0);
    }
    return Scalar(field_, den_, num_, Normalize{});
  }

  Scalar pow(std::int64_t e) const {
    if (e < 0) return inverse().pow(-e);
    Scalar result = one(field_), base = *this;
    while (e > 0) {
      if (e & 1) result *= base;
      base *= base;
      e >>= 1;
    }
    return result;
  }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.field_ == b.field_ && a.num_ == b.num_ && a.den_ == b.den_;
  }

  /// Rendering: "3" in F_p, "-1/2" in Q.
  std::string to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Negative Q elements render with a leading '-'; F_p never does.
  bool is_negative() const noexcept { return num_ < 0; }

  friend std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

 private:
  struct Raw {};
  struct Normalize {};

  Scalar(const FieldDescriptor& field, std::int64_t num, std::int64_t den, Raw)
      : field_(field), num_(num), den_(den) {}

  Scalar(const FieldDescriptor& field, std::int64_t num, std::int64_t den, Normalize)
      : field_(field) {
    if (den == 0) throw Error(ErrorKind::DivisionByZero, "zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
  }

  Scalar from_wide(wide_int n, wide_int d) const {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    wide_int a = n < 0 ? -n : n, b = d;
    while (b != 0) {
      const wide_int t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      n /= a;
      d /= a;
    }
    constexpr wide_int kMax = INT64_MAX;
    if (n > kMax || n < -kMax || d > kMax) {
      throw Error(ErrorKind::Overflow, "rational coefficient exceeds 64 bits");
    }
    return Scalar(field_, static_cast<std::int64_t>(n), static_cast<std::int64_t>(d), Raw{});
  }

  void check_field(const Scalar& rhs) const {
    if (!(field_ == rhs.field_)) {
      throw Error(ErrorKind::FieldMismatch, field_.name() + " vs " + rhs.field_.name());
    }
  }

  FieldDescriptor field_;
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline Scalar field_inverse(const Scalar& a) { return a.inverse(); }

/// Whether -1 is a square in F_p; this is p = 2 or p = 1 mod 4.
inline bool has_sqrt_minus_one(std::int64_t p) {
  if (!is_prime(p)) throw Error(ErrorKind::NotAPrime, std::to_string(p) + " is not prime");
  return p == 2 || p % 4 == 1;
}

}  // namespace skewtower
