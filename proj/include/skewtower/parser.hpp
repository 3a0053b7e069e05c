#pragma once

// Ring-definition files and series expressions.
//
//   ring <name>
//   field fp <prime> | field q
//   precision <N>
//   gen <name> [sigma <name> = <expr>]... [delta <name> = <expr>]...
//   presentation <d1> <d2> ...
//
// Expressions use integers, generator names, + - * /, ^ and parentheses.
// Division is by nonzero scalars only; negative exponents need a unit.

#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "skewtower/error.hpp"
#include "skewtower/render.hpp"
#include "skewtower/series.hpp"
#include "skewtower/tower.hpp"

namespace skewtower {

namespace detail {

enum class TokenKind { Integer, Ident, Symbol, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  int column = 0;  // 1-based
};

inline Error syntax_error(int line, int column, const std::string& message) {
  return Error(ErrorKind::SyntaxError, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                                           message,
               SourceLocation{line, column});
}

inline std::vector<Token> tokenize(std::string_view text, int line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char ch = text[i];
    const int column = static_cast<int>(i) + 1;
    if (ch == '#') break;
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back({TokenKind::Integer, std::string(text.substr(i, j - i)), column});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      out.push_back({TokenKind::Ident, std::string(text.substr(i, j - i)), column});
      i = j;
      continue;
    }
    if (std::string_view("+-*/^()=").find(ch) != std::string_view::npos) {
      out.push_back({TokenKind::Symbol, std::string(1, ch), column});
      ++i;
      continue;
    }
    throw syntax_error(line, column, std::string("unexpected character '") + ch + "'");
  }
  out.push_back({TokenKind::End, "", static_cast<int>(text.size()) + 1});
  return out;
}

inline std::int64_t parse_integer(const Token& tok, int line) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(tok.text, &used);
    if (used != tok.text.size()) throw std::out_of_range("trailing");
    return v;
  } catch (const std::exception&) {
    throw syntax_error(line, tok.column, "integer out of range");
  }
}

/// Recursive-descent evaluator over a token range; stops at End or at any
/// token listed in `stop` at nesting depth zero.
class ExpressionParser {
 public:
  ExpressionParser(const std::vector<Token>& tokens, std::size_t pos, int line, TowerPtr tower, int precision,
                   std::vector<std::string> stop = {})
      : toks_(tokens), pos_(pos), line_(line), tower_(std::move(tower)), precision_(precision), stop_(std::move(stop)) {}

  Series parse() {
    Series value = expr();
    if (!at_stop()) throw syntax_error(line_, peek().column, "unexpected '" + peek().text + "'");
    return value;
  }

  std::size_t position() const noexcept { return pos_; }

  /// Parses a series optionally followed by "+ O(n)"; returns it at
  /// precision n when the marker is present.
  Series parse_with_order() {
    Series value = expr();
    if (!at_stop()) throw syntax_error(line_, peek().column, "unexpected '" + peek().text + "'");
    if (order_) {
      if (*order_ > tower_->precision() || *order_ < 1) {
        throw Error(ErrorKind::PrecisionMismatch, "O(" + std::to_string(*order_) + ") outside [1, " +
                                                      std::to_string(tower_->precision()) + "]");
      }
      return Series(tower_, *order_, value.terms());
    }
    return value;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool is_symbol(const char* s) const { return peek().kind == TokenKind::Symbol && peek().text == s; }
  bool at_stop() const {
    if (peek().kind == TokenKind::End) return true;
    if (peek().kind != TokenKind::Ident) return false;
    for (const auto& s : stop_) {
      if (peek().text == s) return true;
    }
    return false;
  }
  const Token& advance() { return toks_[pos_++]; }
  void expect(const char* s) {
    if (!is_symbol(s)) throw syntax_error(line_, peek().column, std::string("expected '") + s + "'");
    ++pos_;
  }

  bool at_order_marker() const {
    return pos_ + 1 < toks_.size() && is_symbol("+") && toks_[pos_ + 1].kind == TokenKind::Ident &&
           toks_[pos_ + 1].text == "O" && tower_->generator_index("O") < 0;
  }

  Series expr() {
    Series value = term();
    while (is_symbol("+") || is_symbol("-")) {
      if (at_order_marker()) {
        pos_ += 2;
        expect("(");
        const Token& tok = peek();
        if (tok.kind != TokenKind::Integer) throw syntax_error(line_, tok.column, "expected an integer");
        ++pos_;
        order_ = static_cast<int>(parse_integer(tok, line_));
        expect(")");
        continue;
      }
      const bool plus = advance().text == "+";
      Series rhs = term();
      value = plus ? value + rhs : value - rhs;
    }
    return value;
  }

  Series term() {
    Series value = unary();
    while (is_symbol("*") || is_symbol("/")) {
      const Token op = advance();
      const int column = peek().column;
      Series rhs = unary();
      if (op.text == "*") {
        value = value * rhs;
        continue;
      }
      if (!terms_involve_only_below(rhs.terms(), 0)) throw syntax_error(line_, column, "division by a non-scalar");
      if (rhs.is_zero()) throw syntax_error(line_, column, "division by zero");
      value = value.scaled(rhs.constant_term().inverse());
    }
    return value;
  }

  Series unary() {
    if (is_symbol("-")) {
      ++pos_;
      return -unary();
    }
    if (is_symbol("+")) {
      ++pos_;
      return unary();
    }
    return power_expr();
  }

  Series power_expr() {
    Series base = primary();
    if (!is_symbol("^")) return base;
    ++pos_;
    bool negative = false;
    if (is_symbol("-")) {
      negative = true;
      ++pos_;
    }
    const Token& tok = peek();
    if (tok.kind != TokenKind::Integer) throw syntax_error(line_, tok.column, "expected an integer exponent");
    ++pos_;
    const std::int64_t e = parse_integer(tok, line_);
    if (e > 10000) throw syntax_error(line_, tok.column, "exponent too large");
    if (negative) {
      if (base.constant_term().is_zero()) throw syntax_error(line_, tok.column, "negative exponent of a non-unit");
      base = series_inverse(base);
    }
    return power(base, static_cast<int>(e));
  }

  Series primary() {
    const Token& tok = peek();
    if (tok.kind == TokenKind::Integer) {
      ++pos_;
      return Series::constant(tower_, parse_integer(tok, line_), precision_);
    }
    if (tok.kind == TokenKind::Ident && !at_stop()) {
      ++pos_;
      const int t = tower_->generator_index(tok.text);
      if (t < 0) {
        throw Error(ErrorKind::UseBeforeDeclaration, "line " + std::to_string(line_) + ", column " +
                                                         std::to_string(tok.column) + ": " + tok.text +
                                                         " is not a declared generator",
                    SourceLocation{line_, tok.column});
      }
      return Series::generator(tower_, t, precision_);
    }
    if (is_symbol("(")) {
      ++pos_;
      Series value = expr();
      expect(")");
      return value;
    }
    throw syntax_error(line_, tok.column, tok.kind == TokenKind::End ? "unexpected end of expression"
                                                                     : "unexpected '" + tok.text + "'");
  }

  const std::vector<Token>& toks_;
  std::size_t pos_;
  int line_;
  TowerPtr tower_;
  int precision_;
  std::vector<std::string> stop_;
  std::optional<int> order_;
};

inline bool is_keyword(std::string_view s) {
  return s == "ring" || s == "field" || s == "precision" || s == "gen" || s == "sigma" || s == "delta" ||
         s == "presentation";
}

}  // namespace detail

/// Evaluates an expression over a tower. A trailing "+ O(n)" sets the
/// precision; otherwise the tower precision is used.
inline Series parse_series(const TowerPtr& tower, std::string_view text) {
  const auto tokens = detail::tokenize(text, 1);
  detail::ExpressionParser parser(tokens, 0, 1, tower, tower->precision());
  return parser.parse_with_order();
}

/// Parses and validates a ring file. A precision override replaces the
/// file's precision clause.
inline TowerPtr parse_ring_file(std::string_view text, std::optional<int> precision_override = std::nullopt) {
  std::string name = "ring";
  std::optional<FieldDescriptor> field;
  int precision = kDefaultPrecision;
  std::optional<TowerBuilder> builder;
  std::optional<PresentationWindow> presentation;
  bool seen_gen = false;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto toks = detail::tokenize(raw, line);
    if (toks.front().kind == detail::TokenKind::End) continue;
    const detail::Token& head = toks.front();
    if (head.kind != detail::TokenKind::Ident) throw detail::syntax_error(line, head.column, "expected a keyword");

    auto need_end = [&](std::size_t pos) {
      if (toks[pos].kind != detail::TokenKind::End) {
        throw detail::syntax_error(line, toks[pos].column, "unexpected '" + toks[pos].text + "'");
      }
    };

    if (head.text == "ring") {
      // The name is the rest of the line, so it may contain '-' or '.'.
      const auto start = raw.find_first_not_of(" \t", static_cast<std::size_t>(head.column - 1) + 4);
      const auto hash = raw.find('#');
      std::string rest = start == std::string::npos ? "" : raw.substr(start, hash == std::string::npos ? hash : hash - start);
      while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.back()))) rest.pop_back();
      if (rest.empty() || rest.find_first_of(" \t") != std::string::npos) {
        throw detail::syntax_error(line, head.column + 5, "expected a single ring name");
      }
      if (seen_gen) throw detail::syntax_error(line, head.column, "ring must precede the first gen");
      name = rest;
    } else if (head.text == "field") {
      if (seen_gen) throw detail::syntax_error(line, head.column, "field must precede the first gen");
      if (toks[1].kind == detail::TokenKind::Ident && toks[1].text == "q") {
        need_end(2);
        field = FieldDescriptor::rationals();
      } else if (toks[1].kind == detail::TokenKind::Ident && toks[1].text == "fp") {
        if (toks[2].kind != detail::TokenKind::Integer) {
          throw detail::syntax_error(line, toks[2].column, "expected a prime");
        }
        need_end(3);
        const std::int64_t p = detail::parse_integer(toks[2], line);
        try {
          field = FieldDescriptor::prime(p);
        } catch (const Error& e) {
          throw detail::syntax_error(line, toks[2].column, e.what());
        }
      } else {
        throw detail::syntax_error(line, toks[1].column, "expected 'fp <prime>' or 'q'");
      }
    } else if (head.text == "precision") {
      if (seen_gen) throw detail::syntax_error(line, head.column, "precision must precede the first gen");
      if (toks[1].kind != detail::TokenKind::Integer) {
        throw detail::syntax_error(line, toks[1].column, "expected an integer");
      }
      need_end(2);
      precision = static_cast<int>(detail::parse_integer(toks[1], line));
      if (precision < 1 || precision > kMaxPrecision) {
        throw detail::syntax_error(line, toks[1].column, "precision must lie in [1, " + std::to_string(kMaxPrecision) + "]");
      }
    } else if (head.text == "gen") {
      if (!field) throw detail::syntax_error(line, head.column, "field must be declared before gen");
      if (!builder) {
        if (precision_override) precision = *precision_override;
        builder.emplace(name, *field, precision);
      }
      seen_gen = true;
      if (toks[1].kind != detail::TokenKind::Ident || detail::is_keyword(toks[1].text)) {
        throw detail::syntax_error(line, toks[1].column, "expected a generator name");
      }
      const std::string gen = toks[1].text;
      if (builder->current()->generator_index(gen) >= 0) {
        throw detail::syntax_error(line, toks[1].column, "generator " + gen + " declared twice");
      }
      TowerBuilder::Images sigma, delta;
      std::size_t pos = 2;
      while (toks[pos].kind != detail::TokenKind::End) {
        const detail::Token& kw = toks[pos];
        if (kw.kind != detail::TokenKind::Ident || (kw.text != "sigma" && kw.text != "delta")) {
          throw detail::syntax_error(line, kw.column, "expected 'sigma' or 'delta'");
        }
        const detail::Token& target = toks[pos + 1];
        if (target.kind != detail::TokenKind::Ident) {
          throw detail::syntax_error(line, target.column, "expected a generator name");
        }
        if (builder->current()->generator_index(target.text) < 0) {
          throw Error(ErrorKind::UseBeforeDeclaration,
                      "line " + std::to_string(line) + ", column " + std::to_string(target.column) + ": " +
                          target.text + " is not an earlier generator",
                      SourceLocation{line, target.column});
        }
        if (!(toks[pos + 2].kind == detail::TokenKind::Symbol && toks[pos + 2].text == "=")) {
          throw detail::syntax_error(line, toks[pos + 2].column, "expected '='");
        }
        auto& images = kw.text == "sigma" ? sigma : delta;
        for (const auto& [g, s] : images) {
          if (g == target.text) throw detail::syntax_error(line, target.column, kw.text + " " + g + " given twice");
        }
        detail::ExpressionParser parser(toks, pos + 3, line, builder->current(), precision, {"sigma", "delta"});
        images.emplace_back(target.text, parser.parse());
        pos = parser.position();
      }
      try {
        builder->adjoin(gen, sigma, delta);
      } catch (const Error& e) {
        throw Error(ErrorKind::ValidationError, "line " + std::to_string(line) + ": " + e.what(),
                    SourceLocation{line, head.column});
      }
    } else if (head.text == "presentation") {
      PresentationWindow window;
      for (std::size_t pos = 1; toks[pos].kind != detail::TokenKind::End; ++pos) {
        if (toks[pos].kind != detail::TokenKind::Integer) {
          throw detail::syntax_error(line, toks[pos].column, "expected a block size");
        }
        window.block_sizes.push_back(static_cast<int>(detail::parse_integer(toks[pos], line)));
      }
      if (window.block_sizes.empty()) throw detail::syntax_error(line, head.column + 12, "expected block sizes");
      presentation = window;
    } else {
      throw detail::syntax_error(line, head.column, "unknown keyword '" + head.text + "'");
    }
  }

  if (!field) throw detail::syntax_error(line + 1, 1, "missing field clause");
  if (!builder) builder.emplace(name, *field, precision_override.value_or(precision));
  try {
    return builder->build(presentation);
  } catch (const Error& e) {
    throw Error(ErrorKind::ValidationError, std::string("presentation: ") + e.what());
  }
}

inline std::vector<std::string> generator_names(const RingTower& tower) {
  std::vector<std::string> out;
  for (int t = 0; t < tower.generator_count(); ++t) out.push_back(tower.generator_name(t));
  return out;
}

/// "x^2 + 2*x^3 + O(5)"; parse_series inverts it.
inline std::string render_series(const Series& a) {
  return render_terms(a.terms(), generator_names(*a.tower())) + " + O(" + std::to_string(a.precision()) + ")";
}

/// A ring file that parse_ring_file maps back to the same skew data.
inline std::string render_ring_file(const RingTower& tower) {
  std::ostringstream out;
  const auto names = generator_names(tower);
  out << "ring " << tower.name() << "\n";
  if (tower.field().is_prime_field()) {
    out << "field fp " << tower.field().characteristic() << "\n";
  } else {
    out << "field q\n";
  }
  out << "precision " << tower.precision() << "\n";
  for (int j = 0; j < tower.generator_count(); ++j) {
    out << "gen " << names[static_cast<std::size_t>(j)];
    for (int t = 0; t < j; ++t) {
      if (tower.sigma_is_identity_on(j, t)) continue;
      out << " sigma " << names[static_cast<std::size_t>(t)] << " = " << render_terms(tower.sigma_image(j, t), names);
    }
    for (int t = 0; t < j; ++t) {
      if (tower.delta_image(j, t).empty()) continue;
      out << " delta " << names[static_cast<std::size_t>(t)] << " = " << render_terms(tower.delta_image(j, t), names);
    }
    out << "\n";
  }
  if (!tower.presentation().is_saturated()) {
    out << "presentation";
    for (int d : tower.presentation().block_sizes) out << " " << d;
    out << "\n";
  }
  return out.str();
}

}  // namespace skewtower
