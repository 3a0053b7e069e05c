#pragma once

// Associated graded rings of a tower, for the m-adic filtration and for the
// filtration f(sum r_i x^i) = min(2 v(r_i) + i) on the top step.
//
// The graded ring is again an iterated skew extension, with s-bar the linear
// part of each s_j and d-bar the quadratic part of each d_j (zero on the top
// step under f). It is stored as a RingTower whose images are exactly these
// homogeneous pieces, so graded products reuse the rewriting engine.

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "skewtower/error.hpp"
#include "skewtower/linalg.hpp"
#include "skewtower/render.hpp"
#include "skewtower/ring_tower.hpp"
#include "skewtower/series.hpp"
#include "skewtower/tower.hpp"

namespace skewtower {

enum class Filtration { MAdic, F };

inline std::string to_string(Filtration f) { return f == Filtration::MAdic ? "m-adic" : "f"; }

/// Monomials are keyed by symbol index, like the generators they lift.
struct HomogeneousElement {
  int degree = 0;
  Terms coeffs;
  friend bool operator==(const HomogeneousElement&, const HomogeneousElement&) = default;
};

struct GradedStep {
  Matrix sigma_bar;                          // (t, s): coefficient of X_s in s-bar(X_t)
  std::vector<HomogeneousElement> delta_bar; // d-bar(X_t), t < j
};

struct GradedPresentation {
  Filtration filtration = Filtration::MAdic;
  std::vector<std::string> symbols;
  std::vector<int> weights;
  std::vector<GradedStep> steps;
  TowerPtr graded_tower;

  int precision() const { return graded_tower->precision(); }
  const FieldDescriptor& field() const { return graded_tower->field(); }

  int weight_of(const Monomial& m) const {
    int w = 0;
    for (int t = 0; t < static_cast<int>(weights.size()); ++t) w += weights[static_cast<std::size_t>(t)] * m[t];
    return w;
  }

  bool delta_bar_is_zero() const {
    for (const auto& step : steps) {
      for (const auto& d : step.delta_bar) {
        if (!d.coeffs.empty()) return false;
      }
    }
    return true;
  }

  /// Homogeneous element from a coefficient map; throws if the map mixes
  /// weighted degrees. The zero map takes the given degree.
  HomogeneousElement element(const Terms& coeffs, int degree_if_zero = 0) const {
    if (coeffs.empty()) return {degree_if_zero, {}};
    const int d = weight_of(coeffs.begin()->first);
    for (const auto& [m, c] : coeffs) {
      if (weight_of(m) != d) throw Error(ErrorKind::InvalidOperand, "element is not homogeneous");
      if (!m.involves_only_below(static_cast<int>(symbols.size()))) {
        throw Error(ErrorKind::InvalidOperand, "monomial uses an unknown symbol");
      }
    }
    return {d, coeffs};
  }

  HomogeneousElement symbol(int t) const {
    return element({{Monomial::generator(t), Scalar::one(field())}});
  }

  std::string render(const HomogeneousElement& h) const { return render_terms(h.coeffs, symbols); }

  /// One relation per pair t < j, written "X_j*X_t = s-bar(X_t)*X_j + d-bar(X_t)".
  std::vector<std::string> relations() const {
    std::vector<std::string> out;
    for (int j = 0; j < static_cast<int>(steps.size()); ++j) {
      const auto& step = steps[static_cast<std::size_t>(j)];
      for (int t = 0; t < j; ++t) {
        Terms twisted;
        for (int s = 0; s < j; ++s) {
          const Scalar& c = step.sigma_bar.at(t, s);
          if (c.is_zero()) continue;
          Monomial m = Monomial::generator(s);
          m.set(j, 1);
          add_term(twisted, m, c);
        }
        const Terms& extra = step.delta_bar[static_cast<std::size_t>(t)].coeffs;
        std::string rhs = render_terms(twisted, symbols);
        if (!extra.empty()) {
          const std::string tail = render_terms(extra, symbols);
          rhs += tail.front() == '-' ? " - " + tail.substr(1) : " + " + tail;
        }
        out.push_back(symbols[static_cast<std::size_t>(j)] + "*" + symbols[static_cast<std::size_t>(t)] + " = " + rhs);
      }
    }
    return out;
  }
};

inline Matrix induced_sigma_bar(const RingTower& tower, int j) { return sigma_linear_part(tower, j); }

/// Quadratic parts of the d_j images.
inline std::vector<HomogeneousElement> induced_delta_bar(const RingTower& tower, int j) {
  std::vector<HomogeneousElement> out;
  for (int t = 0; t < j; ++t) out.push_back({2, degree_part(tower.delta_image(j, t), 2)});
  return out;
}

namespace detail {
inline std::vector<std::string> graded_symbols(const RingTower& tower) {
  std::vector<std::string> out;
  for (int t = 0; t < tower.generator_count(); ++t) {
    std::string s = tower.generator_name(t);
    for (auto& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    for (const auto& prev : out) {
      if (prev == s) {
        s = "gr(" + tower.generator_name(t) + ")";
        break;
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}
}  // namespace detail

inline GradedPresentation gr_presentation(const TowerPtr& tower, Filtration filtration) {
  const RingTower& t = *tower;
  const int n = t.generator_count();
  if (filtration == Filtration::F && n < 1) {
    throw Error(ErrorKind::InvalidOperand, "the f filtration needs at least one step");
  }
  GradedPresentation gp;
  gp.filtration = filtration;
  gp.symbols = detail::graded_symbols(t);
  gp.weights.assign(static_cast<std::size_t>(n), 1);
  if (filtration == Filtration::F) {
    for (int u = 0; u + 1 < n; ++u) gp.weights[static_cast<std::size_t>(u)] = 2;
  }

  std::vector<SkewStep> graded_steps;
  for (int j = 0; j < n; ++j) {
    GradedStep step{induced_sigma_bar(t, j), induced_delta_bar(t, j)};
    const bool top_under_f = filtration == Filtration::F && j == n - 1;
    if (top_under_f) {
      for (int u = 0; u < j; ++u) {
        // f(x_n x_u - s(x_u) x_n) = f(d(x_u)) must exceed f(x_n x_u) = 3.
        const Series d(tower, t.precision(), t.delta_image(j, u));
        if (!d.is_zero() && valuation_f(d) <= 3) {
          throw Error(ErrorKind::ValidationError, "commutator does not drop in the f filtration");
        }
        step.delta_bar[static_cast<std::size_t>(u)] = {gp.weights[static_cast<std::size_t>(u)] + 1, {}};
      }
    }
    for (int u = 0; u < j && !top_under_f; ++u) {
      step.delta_bar[static_cast<std::size_t>(u)].degree = gp.weights[static_cast<std::size_t>(u)] * 2;
    }

    SkewStep gs{gp.symbols[static_cast<std::size_t>(j)], {}, {}};
    for (int u = 0; u < j; ++u) {
      Terms lin;
      for (int s = 0; s < j; ++s) add_term(lin, Monomial::generator(s), step.sigma_bar.at(u, s));
      gs.sigma_images[u] = std::move(lin);
      if (!step.delta_bar[static_cast<std::size_t>(u)].coeffs.empty()) {
        gs.delta_images[u] = step.delta_bar[static_cast<std::size_t>(u)].coeffs;
      }
    }
    graded_steps.push_back(std::move(gs));
    gp.steps.push_back(std::move(step));
  }
  gp.graded_tower = std::make_shared<const RingTower>(
      t.name() + (filtration == Filtration::MAdic ? "/gr" : "/gr_f"), t.field(), std::move(graded_steps),
      t.precision());
  return gp;
}

/// Product of homogeneous elements in the graded ring.
inline HomogeneousElement graded_multiply(const GradedPresentation& gp, const HomogeneousElement& u,
                                          const HomogeneousElement& v) {
  const int degree = u.degree + v.degree;
  if (degree > gp.precision() - 1) {
    throw Error(ErrorKind::DegreeOverflow, "product degree " + std::to_string(degree) + " exceeds " +
                                               std::to_string(gp.precision() - 1));
  }
  Terms product = detail::mul_terms(*gp.graded_tower, u.coeffs, v.coeffs, gp.precision());
  return gp.element(product, degree);
}

/// Lowest-weight homogeneous component of a, as an element of the graded
/// ring of the given presentation.
inline HomogeneousElement leading_form(const GradedPresentation& gp, const Series& a) {
  if (a.is_zero()) return {kInfiniteValuation, {}};
  int best = kInfiniteValuation;
  for (const auto& [m, c] : a.terms()) best = std::min(best, gp.weight_of(m));
  Terms lead;
  for (const auto& [m, c] : a.terms()) {
    if (gp.weight_of(m) == best) lead.emplace(m, c);
  }
  return {best, std::move(lead)};
}

/// All monomials of the given weighted degree.
inline std::vector<Monomial> graded_basis(const GradedPresentation& gp, int degree) {
  std::vector<Monomial> out;
  if (degree < 0) return out;
  for (const auto& m : monomials_in_range(static_cast<int>(gp.symbols.size()), 0, degree)) {
    if (gp.weight_of(m) == degree) out.push_back(m);
  }
  return out;
}

/// A homogeneous alpha with left_factor * alpha = target, if one exists.
inline std::optional<HomogeneousElement> graded_membership(const GradedPresentation& gp,
                                                           const HomogeneousElement& target,
                                                           const HomogeneousElement& left_factor) {
  const int d = target.degree - left_factor.degree;
  if (d < 0) throw Error(ErrorKind::InvalidOperand, "target degree below the left factor's");
  if (target.degree > gp.precision() - 1) throw Error(ErrorKind::DegreeOverflow, "target degree too large");
  const std::vector<Monomial> basis = graded_basis(gp, d);
  SpanBasis span(gp.field());
  for (const auto& m : basis) {
    span.insert(detail::mul_terms(*gp.graded_tower, left_factor.coeffs, {{m, Scalar::one(gp.field())}},
                                  gp.precision()));
  }
  const auto coeffs = span.solve(target.coeffs);
  if (!coeffs) return std::nullopt;
  Terms alpha;
  for (std::size_t i = 0; i < basis.size(); ++i) add_term(alpha, basis[i], (*coeffs)[i]);
  return HomogeneousElement{d, std::move(alpha)};
}

}  // namespace skewtower
