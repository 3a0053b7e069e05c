#pragma once

// Canonical-form truncated series over a RingTower and the rewriting engine.
//
// Elements are written as sums of left-coefficient ordered monomials
// x_1^{a_1} ... x_n^{a_n}. A product is brought back to canonical form by
// moving later generators rightward with x_j a = s_j(a) x_j + d_j(a).
// Locality (s_j(m) in m, d_j(m) in m^2) means no rewrite ever lowers the total
// degree, so working modulo m^N needs only finitely many steps.

#include <algorithm>
#include <climits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "skewtower/error.hpp"
#include "skewtower/monomial.hpp"
#include "skewtower/ring_tower.hpp"
#include "skewtower/scalars.hpp"

namespace skewtower {

/// Valuation of the zero series.
inline constexpr int kInfiniteValuation = INT_MAX;

namespace detail {

Terms mul_terms(const RingTower& tower, const Terms& a, const Terms& b, int precision);

/// s_j(x^L) for a monomial L on generators below j.
inline const Terms& sigma_monomial(const RingTower& tower, int j, const Monomial& low, int precision) {
  auto& cache = tower.cache();
  const CacheKey key{precision, j, low};
  if (const Terms* hit = cache.find(cache.sigma, key)) return *hit;

  Terms result;
  const int t = low.first_generator();
  if (t < 0) {
    result = {{Monomial(), Scalar::one(tower.field())}};
  } else {
    Monomial rest = low;
    rest.set(t, rest[t] - 1);
    const Terms head = truncate_terms(tower.sigma_image(j, t), precision);
    if (rest.is_one()) {
      result = head;
    } else {
      result = mul_terms(tower, head, sigma_monomial(tower, j, rest, precision), precision);
    }
  }
  return *cache.insert(cache.sigma, key, std::move(result));
}

/// d_j(x^L) by the Leibniz recursion d(x_t m') = d(x_t) m' + s(x_t) d(m'),
/// where x_t is the first letter of L.
inline const Terms& delta_monomial(const RingTower& tower, int j, const Monomial& low, int precision) {
  auto& cache = tower.cache();
  const CacheKey key{precision, j, low};
  if (const Terms* hit = cache.find(cache.delta, key)) return *hit;

  Terms result;
  const int t = low.first_generator();
  if (t >= 0) {
    Monomial rest = low;
    rest.set(t, rest[t] - 1);
    const Terms d_head = truncate_terms(tower.delta_image(j, t), precision);
    if (rest.is_one()) {
      result = d_head;
    } else {
      const Terms rest_terms{{rest, Scalar::one(tower.field())}};
      result = mul_terms(tower, d_head, rest_terms, precision);
      const Terms& d_rest = delta_monomial(tower, j, rest, precision);
      const Terms s_head = truncate_terms(tower.sigma_image(j, t), precision);
      for (const auto& [m, c] : mul_terms(tower, s_head, d_rest, precision)) add_term(result, m, c);
    }
  }
  return *cache.insert(cache.delta, key, std::move(result));
}

/// x_j * x^gamma in canonical form, for gamma with a nonempty part below j.
inline const Terms& gen_times_monomial(const RingTower& tower, int j, const Monomial& gamma, int precision) {
  auto& cache = tower.cache();
  const CacheKey key{precision, j, gamma};
  if (const Terms* hit = cache.find(cache.gen_times, key)) return *hit;

  const Monomial low = gamma.below(j);
  const Monomial high = gamma.from(j);
  Monomial xj_high = high;
  xj_high.set(j, xj_high[j] + 1);

  const Terms& s = sigma_monomial(tower, j, low, precision);
  const Terms& d = delta_monomial(tower, j, low, precision);
  if (min_degree(s, INT_MAX) < low.degree() || min_degree(d, INT_MAX) < low.degree() + 1) {
    throw Error(ErrorKind::DegreeLowering, "rewriting x_" + std::to_string(j) +
                                               " past a lower monomial lowered the degree; is the tower local?");
  }
  Terms result;
  const Scalar one = Scalar::one(tower.field());
  add_scaled_shifted(result, s, one, xj_high, precision);
  add_scaled_shifted(result, d, one, high, precision);
  return *cache.insert(cache.gen_times, key, std::move(result));
}

/// x_j * b.
inline Terms gen_times(const RingTower& tower, int j, const Terms& b, int precision) {
  Terms result;
  for (const auto& [gamma, c] : b) {
    if (gamma.degree() + 1 >= precision) break;
    if (gamma.below(j).is_one()) {
      Monomial m = gamma;
      m.set(j, m[j] + 1);
      add_term(result, m, c);
    } else {
      add_scaled_shifted(result, gen_times_monomial(tower, j, gamma, precision), c, Monomial(), precision);
    }
  }
  return result;
}

inline Terms mul_terms(const RingTower& tower, const Terms& a, const Terms& b, int precision) {
  Terms result;
  if (a.empty() || b.empty()) return result;
  const int vb = min_degree(b, INT_MAX);

  // left[alpha] = x^alpha * b, built from x^alpha = x_t * x^{alpha - e_t}
  // with t the first generator of alpha.
  std::unordered_map<Monomial, Terms, MonomialHash> left;
  left.emplace(Monomial(), b);
  auto left_times = [&](auto&& self, const Monomial& alpha) -> const Terms& {
    if (auto it = left.find(alpha); it != left.end()) return it->second;
    const int t = alpha.first_generator();
    Monomial rest = alpha;
    rest.set(t, rest[t] - 1);
    const Terms& prev = self(self, rest);
    Terms next = gen_times(tower, t, prev, precision);
    return left.emplace(alpha, std::move(next)).first->second;
  };

  for (const auto& [alpha, c] : a) {
    if (alpha.degree() + vb >= precision) break;
    add_scaled_shifted(result, left_times(left_times, alpha), c, Monomial(), precision);
  }
  return result;
}

inline Terms apply_sigma_terms(const RingTower& tower, int j, const Terms& a, int precision) {
  Terms result;
  for (const auto& [m, c] : a) {
    add_scaled_shifted(result, sigma_monomial(tower, j, m, precision), c, Monomial(), precision);
  }
  return result;
}

inline Terms apply_delta_terms(const RingTower& tower, int j, const Terms& a, int precision) {
  Terms result;
  for (const auto& [m, c] : a) {
    if (m.degree() + 1 >= precision) break;
    add_scaled_shifted(result, delta_monomial(tower, j, m, precision), c, Monomial(), precision);
  }
  return result;
}

}  // namespace detail

/// An element of a ring tower modulo m^N, in canonical form.
class Series {
 public:
  Series(TowerPtr tower, int precision, Terms terms = {}) : tower_(std::move(tower)), precision_(precision) {
    if (!tower_) throw Error(ErrorKind::InvalidOperand, "series needs a tower");
    if (precision_ < 1 || precision_ > tower_->precision()) {
      throw Error(ErrorKind::PrecisionMismatch, "series precision " + std::to_string(precision_) +
                                                    " outside [1, " + std::to_string(tower_->precision()) + "]");
    }
    for (const auto& [m, c] : terms) {
      if (!m.involves_only_below(tower_->generator_count())) {
        throw Error(ErrorKind::InvalidOperand, "monomial uses a generator outside the tower");
      }
      if (!(c.field() == tower_->field())) throw Error(ErrorKind::FieldMismatch, "coefficient field");
      if (c.is_zero()) continue;
      if (m.degree() >= precision_) break;
      terms_.emplace(m, c);
    }
  }

  static Series zero(TowerPtr tower, std::optional<int> precision = std::nullopt) {
    const int n = precision.value_or(tower->precision());
    return Series(std::move(tower), n);
  }
  static Series constant(TowerPtr tower, const Scalar& c, std::optional<int> precision = std::nullopt) {
    const int n = precision.value_or(tower->precision());
    return Series(std::move(tower), n, {{Monomial(), c}});
  }
  static Series constant(TowerPtr tower, std::int64_t c, std::optional<int> precision = std::nullopt) {
    const Scalar s(tower->field(), c);
    return constant(std::move(tower), s, precision);
  }
  static Series one(TowerPtr tower, std::optional<int> precision = std::nullopt) {
    return constant(std::move(tower), 1, precision);
  }
  static Series generator(TowerPtr tower, int t, std::optional<int> precision = std::nullopt) {
    if (t < 0 || t >= tower->generator_count()) throw Error(ErrorKind::InvalidOperand, "no such generator");
    const int n = precision.value_or(tower->precision());
    const Scalar one = Scalar::one(tower->field());
    return Series(std::move(tower), n, {{Monomial::generator(t), one}});
  }
  static Series generator(TowerPtr tower, std::string_view name, std::optional<int> precision = std::nullopt) {
    const int t = tower->generator_index(name);
    if (t < 0) throw Error(ErrorKind::InvalidOperand, "no generator named " + std::string(name));
    return generator(std::move(tower), t, precision);
  }
  static Series monomial(TowerPtr tower, const Monomial& m, std::optional<int> precision = std::nullopt) {
    const int n = precision.value_or(tower->precision());
    const Scalar one = Scalar::one(tower->field());
    return Series(std::move(tower), n, {{m, one}});
  }

  const TowerPtr& tower() const noexcept { return tower_; }
  int precision() const noexcept { return precision_; }
  const Terms& terms() const noexcept { return terms_; }
  const FieldDescriptor& field() const noexcept { return tower_->field(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  Scalar coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Scalar::zero(field()) : it->second;
  }
  Scalar constant_term() const { return coefficient(Monomial()); }

  /// Largest j such that only generators below j occur.
  int generator_span() const {
    int top = -1;
    for (const auto& [m, c] : terms_) top = std::max(top, m.last_generator());
    return top + 1;
  }

  Series truncated(int precision) const {
    if (precision > precision_) throw Error(ErrorKind::PrecisionMismatch, "cannot raise precision");
    return Series(tower_, precision, terms_);
  }

  Series operator-() const {
    Terms out;
    for (const auto& [m, c] : terms_) out.emplace(m, -c);
    return Series(tower_, precision_, std::move(out));
  }

  Series scaled(const Scalar& c) const {
    Terms out;
    for (const auto& [m, v] : terms_) add_term(out, m, c * v);
    return Series(tower_, precision_, std::move(out));
  }

  friend bool operator==(const Series& a, const Series& b) {
    return a.tower_ == b.tower_ && a.precision_ == b.precision_ && a.terms_ == b.terms_;
  }

  void check_compatible(const Series& other) const {
    if (tower_ != other.tower_) throw Error(ErrorKind::TowerMismatch, "series live in different towers");
    if (precision_ != other.precision_) {
      throw Error(ErrorKind::PrecisionMismatch, std::to_string(precision_) + " vs " + std::to_string(other.precision_));
    }
  }

 private:
  TowerPtr tower_;
  int precision_;
  Terms terms_;
};

/// Coefficientwise sum; same tower and precision required.
inline Series normalize_add(const Series& a, const Series& b) {
  a.check_compatible(b);
  Terms out = a.terms();
  for (const auto& [m, c] : b.terms()) add_term(out, m, c);
  return Series(a.tower(), a.precision(), std::move(out));
}

/// Canonical-form product modulo m^N.
inline Series multiply(const Series& a, const Series& b) {
  a.check_compatible(b);
  return Series(a.tower(), a.precision(), detail::mul_terms(*a.tower(), a.terms(), b.terms(), a.precision()));
}

inline Series operator+(const Series& a, const Series& b) { return normalize_add(a, b); }
inline Series operator-(const Series& a, const Series& b) { return normalize_add(a, -b); }
inline Series operator*(const Series& a, const Series& b) { return multiply(a, b); }
inline Series operator*(const Scalar& c, const Series& a) { return a.scaled(c); }

inline Series power(const Series& a, int e) {
  if (e < 0) throw Error(ErrorKind::InvalidOperand, "negative exponent; invert first");
  Series result = Series::one(a.tower(), a.precision());
  Series base = a;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

namespace detail {
inline void require_below(const Series& a, int j, const char* what) {
  if (j < 0 || j >= a.tower()->generator_count()) throw Error(ErrorKind::InvalidOperand, "no such step");
  if (!terms_involve_only_below(a.terms(), j)) {
    throw Error(ErrorKind::InvalidOperand,
                std::string(what) + " of step " + a.tower()->generator_name(j) + " needs an operand below it");
  }
}
}  // namespace detail

/// s_j(a): the multiplicative, k-linear extension of the stored images.
inline Series apply_sigma(int j, const Series& a) {
  detail::require_below(a, j, "sigma");
  return Series(a.tower(), a.precision(), detail::apply_sigma_terms(*a.tower(), j, a.terms(), a.precision()));
}

/// d_j(a): the k-linear extension by the Leibniz rule.
inline Series apply_delta(int j, const Series& a) {
  detail::require_below(a, j, "delta");
  return Series(a.tower(), a.precision(), detail::apply_delta_terms(*a.tower(), j, a.terms(), a.precision()));
}

/// A word over {S, D}; S applies sigma and D applies delta of the top step.
/// Letters compose like functions: "SD" means sigma(delta(a)).
struct OperatorWord {
  std::string letters;
  int x_exponent = 0;  // number of S letters
};

struct PowerExpansion {
  Series value;
  struct Entry {
    OperatorWord word;
    Series image;  // word(sigma, delta)(a), a series below the top generator
  };
  std::vector<Entry> trace;
};

/// x^n * a expanded as the sum over all 2^n words m of m(s, d)(a) x^{e(m)},
/// where x is the top generator and a lies below it.
inline PowerExpansion power_expand(int n, const Series& a) {
  const int top = a.tower()->generator_count() - 1;
  if (n < 1) throw Error(ErrorKind::InvalidOperand, "power must be positive");
  if (top < 0) throw Error(ErrorKind::InvalidOperand, "tower has no generators");
  if (n > 20) throw Error(ErrorKind::InvalidOperand, "power too large to enumerate words");
  detail::require_below(a, top, "power expansion");

  PowerExpansion out{Series::zero(a.tower(), a.precision()), {}};
  Terms total;
  const Scalar one = Scalar::one(a.field());
  for (unsigned bits = 0; bits < (1u << n); ++bits) {
    OperatorWord word;
    for (int i = 0; i < n; ++i) {
      const bool s = ((bits >> (n - 1 - i)) & 1u) == 0;
      word.letters.push_back(s ? 'S' : 'D');
      if (s) ++word.x_exponent;
    }
    Series image = a;
    for (auto it = word.letters.rbegin(); it != word.letters.rend(); ++it) {
      image = (*it == 'S') ? apply_sigma(top, image) : apply_delta(top, image);
    }
    add_scaled_shifted(total, image.terms(), one, Monomial::generator(top, word.x_exponent), a.precision());
    out.trace.push_back({std::move(word), std::move(image)});
  }
  out.value = Series(a.tower(), a.precision(), std::move(total));
  return out;
}

/// Two-sided inverse of a series with unit constant term.
inline Series series_inverse(const Series& a) {
  const Scalar c = a.constant_term();
  if (c.is_zero()) throw Error(ErrorKind::NotAUnit, "constant term is zero");
  const Scalar c_inv = c.inverse();
  // a = c (1 - u) with u in m, so a^{-1} = (sum u^k) c^{-1}.
  const Series u = Series::one(a.tower(), a.precision()) - a.scaled(c_inv);
  Series sum = Series::one(a.tower(), a.precision());
  for (int k = 1; k < a.precision(); ++k) sum = Series::one(a.tower(), a.precision()) + u * sum;
  return sum.scaled(c_inv);
}

/// m-adic valuation: lowest total degree present; kInfiniteValuation for 0.
inline int valuation_m_adic(const Series& a) { return min_degree(a.terms(), kInfiniteValuation); }

/// f-value of a single monomial: twice its degree below the top generator
/// plus its top exponent.
inline int f_weight(const Monomial& m, int top) { return 2 * (m.degree() - m[top]) + m[top]; }

/// f(sum r_i x^i) = min(2 v(r_i) + i) for the top generator x.
inline int valuation_f(const Series& a) {
  const int top = a.tower()->generator_count() - 1;
  if (top < 0) throw Error(ErrorKind::InvalidOperand, "valuation_f needs at least one step");
  int best = kInfiniteValuation;
  for (const auto& [m, c] : a.terms()) best = std::min(best, f_weight(m, top));
  return best;
}

}  // namespace skewtower
