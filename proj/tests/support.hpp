#pragma once

#include <functional>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "skewtower/skewtower.hpp"

namespace skewtower::support {

/// Kind of the Error thrown by f; records a failure if nothing is thrown.
inline ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::ValidationError;
}

/// Sparse random element: up to `max_terms` monomials of degree in
/// [min_degree, N), coefficients uniform in the field (F_p) or small
/// fractions (Q).
inline Series random_series(const TowerPtr& tower, int precision, std::mt19937_64& rng, int max_terms = 5,
                            int min_degree = 0) {
  const int n = tower->generator_count();
  const auto monos = monomials_in_range(n, min_degree, precision - 1);
  Terms terms;
  if (monos.empty()) return Series(tower, precision);
  std::uniform_int_distribution<int> count(0, max_terms);
  std::uniform_int_distribution<std::size_t> pick(0, monos.size() - 1);
  const FieldDescriptor& f = tower->field();
  const int k = count(rng);
  for (int i = 0; i < k; ++i) {
    Scalar c = Scalar::zero(f);
    if (f.is_prime_field()) {
      std::uniform_int_distribution<std::int64_t> coeff(0, f.characteristic() - 1);
      c = Scalar(f, coeff(rng));
    } else {
      std::uniform_int_distribution<std::int64_t> num(-4, 4), den(1, 3);
      c = Scalar::fraction(f, num(rng), den(rng));
    }
    add_term(terms, monos[pick(rng)], c);
  }
  return Series(tower, precision, std::move(terms));
}

/// Element of the subring below generator j.
inline Series random_below(const TowerPtr& tower, int j, int precision, std::mt19937_64& rng, int max_terms = 5) {
  const Series a = random_series(tower, precision, rng, max_terms);
  Terms low;
  for (const auto& [m, c] : a.terms()) {
    if (m.involves_only_below(j)) low.emplace(m, c);
  }
  return Series(tower, precision, std::move(low));
}

inline Series poly(const TowerPtr& tower, std::string_view text) { return parse_series(tower, text); }

/// The example towers exercised by the property suites, at precision n.
inline std::vector<TowerPtr> example_towers(int n) {
  return {builtin_tower("@e1", n), builtin_tower("@e2", n), builtin_tower("@e3", n),
          builtin_tower("@e4", n), builtin_tower("@e5", n), builtin_tower("@e6", n),
          builtin_tower("@e6-row-major", n)};
}

}  // namespace skewtower::support
