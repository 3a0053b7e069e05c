#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "skewtower/error.hpp"
#include "skewtower/scalars.hpp"

namespace skewtower {

inline constexpr int kMaxGenerators = 16;
inline constexpr int kMaxPrecision = 60;

/// An ordered monomial x_1^{a_1} ... x_n^{a_n}. Generators beyond the owning
/// tower's rank always carry exponent zero, so a monomial of a sub-tower is
/// also a monomial of every tower extending it.
class Monomial {
 public:
  Monomial() = default;

  static Monomial generator(int t, int exponent = 1) {
    Monomial m;
    m.set(t, exponent);
    return m;
  }

  int degree() const noexcept { return degree_; }
  bool is_one() const noexcept { return degree_ == 0; }
  int operator[](int t) const noexcept { return exps_[static_cast<std::size_t>(t)]; }

  void set(int t, int exponent) {
    if (t < 0 || t >= kMaxGenerators) throw Error(ErrorKind::InvalidOperand, "generator index out of range");
    if (exponent < 0 || exponent > 255) throw Error(ErrorKind::InvalidOperand, "exponent out of range");
    auto& slot = exps_[static_cast<std::size_t>(t)];
    degree_ += exponent - slot;
    slot = static_cast<std::uint8_t>(exponent);
  }

  /// Exponent-wise product; only meaningful when the result is already in
  /// canonical order (every generator of *this precedes every one of rhs).
  Monomial concat(const Monomial& rhs) const {
    Monomial m = *this;
    for (int t = 0; t < kMaxGenerators; ++t) {
      if (rhs[t] != 0) m.set(t, m[t] + rhs[t]);
    }
    return m;
  }

  /// Lowest generator index with nonzero exponent, or -1 for 1.
  int first_generator() const noexcept {
    for (int t = 0; t < kMaxGenerators; ++t) {
      if (exps_[static_cast<std::size_t>(t)] != 0) return t;
    }
    return -1;
  }
  int last_generator() const noexcept {
    for (int t = kMaxGenerators - 1; t >= 0; --t) {
      if (exps_[static_cast<std::size_t>(t)] != 0) return t;
    }
    return -1;
  }

  /// Part on generators t < j.
  Monomial below(int j) const {
    Monomial m;
    for (int t = 0; t < j && t < kMaxGenerators; ++t) m.set(t, (*this)[t]);
    return m;
  }
  /// Part on generators t >= j.
  Monomial from(int j) const {
    Monomial m;
    for (int t = j < 0 ? 0 : j; t < kMaxGenerators; ++t) m.set(t, (*this)[t]);
    return m;
  }

  bool involves_only_below(int j) const noexcept { return last_generator() < j; }

  /// Drops the first `count` generators and shifts the rest down.
  Monomial shifted_down(int count) const {
    Monomial m;
    for (int t = count; t < kMaxGenerators; ++t) m.set(t - count, (*this)[t]);
    return m;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) noexcept { return a.exps_ == b.exps_; }

  /// Graded lexicographic: lower degree first; within a degree, a larger
  /// exponent on an earlier generator comes first (x^2 < x*y < y^2).
  friend bool operator<(const Monomial& a, const Monomial& b) noexcept {
    if (a.degree_ != b.degree_) return a.degree_ < b.degree_;
    for (std::size_t t = 0; t < a.exps_.size(); ++t) {
      if (a.exps_[t] != b.exps_[t]) return a.exps_[t] > b.exps_[t];
    }
    return false;
  }

  std::size_t hash() const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto e : exps_) {
      h ^= e;
      h *= 1099511628211ull;
    }
    return h;
  }

 private:
  std::array<std::uint8_t, kMaxGenerators> exps_{};
  int degree_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept { return m.hash(); }
};

/// Finitely supported coefficient map; zero coefficients are never stored.
using Terms = std::map<Monomial, Scalar>;

inline void add_term(Terms& terms, const Monomial& m, const Scalar& c) {
  if (c.is_zero()) return;
  auto it = terms.find(m);
  if (it == terms.end()) {
    terms.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms.erase(it);
}

/// terms += c * other * shift, dropping monomials of degree >= precision.
/// `shift` is concatenated on the right, so it must only involve generators
/// at or above every generator occurring in `other`.
inline void add_scaled_shifted(Terms& terms, const Terms& other, const Scalar& c, const Monomial& shift,
                               int precision) {
  if (c.is_zero()) return;
  for (const auto& [m, v] : other) {
    if (m.degree() + shift.degree() >= precision) break;  // graded order: later terms are no lower
    add_term(terms, m.concat(shift), c * v);
  }
}

inline Terms truncate_terms(const Terms& terms, int precision) {
  Terms out;
  for (const auto& [m, c] : terms) {
    if (m.degree() >= precision) break;
    out.emplace(m, c);
  }
  return out;
}

/// Minimal total degree of a stored term; `absent` if there are none.
inline int min_degree(const Terms& terms, int absent) {
  return terms.empty() ? absent : terms.begin()->first.degree();
}

inline bool terms_involve_only_below(const Terms& terms, int j) {
  for (const auto& [m, c] : terms) {
    if (!m.involves_only_below(j)) return false;
  }
  return true;
}

/// Homogeneous part of total degree d.
inline Terms degree_part(const Terms& terms, int d) {
  Terms out;
  for (const auto& [m, c] : terms) {
    if (m.degree() == d) out.emplace(m, c);
  }
  return out;
}

/// All monomials on generators [0, gens) with total degree in [lo, hi], in
/// graded-lex order.
inline std::vector<Monomial> monomials_in_range(int gens, int lo, int hi) {
  std::vector<Monomial> out;
  if (gens == 0) {
    if (lo <= 0 && 0 <= hi) out.emplace_back();
    return out;
  }
  for (int d = lo < 0 ? 0 : lo; d <= hi; ++d) {
    // Enumerate exponent vectors of total degree d in graded-lex order.
    Monomial m;
    std::function<void(int, int)> rec = [&](int t, int remaining) {
      if (t == gens - 1) {
        m.set(t, remaining);
        out.push_back(m);
        m.set(t, 0);
        return;
      }
      for (int e = remaining; e >= 0; --e) {
        m.set(t, e);
        rec(t + 1, remaining - e);
      }
      m.set(t, 0);
    };
    rec(0, d);
  }
  return out;
}

}  // namespace skewtower
