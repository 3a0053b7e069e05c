#pragma once

// Exact linear algebra over a FieldDescriptor.
//
// Vectors are sparse coefficient maps keyed by monomials. A SpanBasis keeps
// rows in semi-echelon form: every row's lowest monomial (its pivot) is
// distinct and absent from the other rows' pivots. Because pivots are the
// lowest terms in graded order, the rows with pivot degree <= d span the
// image of the subspace modulo monomials of degree > d.

#include <map>
#include <optional>
#include <vector>

#include "skewtower/monomial.hpp"
#include "skewtower/scalars.hpp"

namespace skewtower {

class SpanBasis {
 public:
  explicit SpanBasis(FieldDescriptor field) : field_(field) {}

  struct Row {
    Terms vector;
    /// Coefficients expressing this row in terms of the inserted vectors.
    std::vector<Scalar> combination;
  };

  const FieldDescriptor& field() const noexcept { return field_; }
  std::size_t dimension() const noexcept { return rows_.size(); }
  std::size_t inserted() const noexcept { return inserted_; }
  const std::map<Monomial, Row>& rows() const noexcept { return rows_; }

  /// Adds a vector; returns true if it enlarged the span.
  bool insert(const Terms& v) {
    Row r{v, unit(inserted_)};
    ++inserted_;
    for (auto& row : rows_) row.second.combination.resize(inserted_, Scalar::zero(field_));
    reduce(r);
    if (r.vector.empty()) return false;
    const Monomial pivot = r.vector.begin()->first;
    const Scalar inv = r.vector.begin()->second.inverse();
    scale(r, inv);
    rows_.emplace(pivot, std::move(r));
    return true;
  }

  bool contains(const Terms& v) const {
    Row r{v, {}};
    reduce_vector_only(r.vector);
    return r.vector.empty();
  }

  /// Coefficients c_i with sum c_i * inserted_i = v, if v is in the span.
  std::optional<std::vector<Scalar>> solve(const Terms& v) const {
    Row r{v, std::vector<Scalar>(inserted_, Scalar::zero(field_))};
    // Track how much of each row we subtract; v - sum(k_r row_r) = remainder.
    std::vector<Scalar> coeffs(inserted_, Scalar::zero(field_));
    while (!r.vector.empty()) {
      const auto lead = *r.vector.begin();
      auto it = rows_.find(lead.first);
      if (it == rows_.end()) return std::nullopt;
      const Scalar k = lead.second;
      for (const auto& [m, c] : it->second.vector) add_term(r.vector, m, -(k * c));
      for (std::size_t i = 0; i < inserted_; ++i) coeffs[i] += k * it->second.combination[i];
    }
    return coeffs;
  }

  /// Rows whose pivot has degree at most d, truncated to degree <= d.
  std::vector<Terms> basis_up_to_degree(int d) const {
    std::vector<Terms> out;
    for (const auto& [pivot, row] : rows_) {
      if (pivot.degree() > d) break;
      out.push_back(truncate_terms(row.vector, d + 1));
    }
    return out;
  }

 private:
  std::vector<Scalar> unit(std::size_t i) const {
    std::vector<Scalar> e(inserted_ + 1, Scalar::zero(field_));
    e[i] = Scalar::one(field_);
    return e;
  }

  void scale(Row& r, const Scalar& k) const {
    for (auto& [m, c] : r.vector) c *= k;
    for (auto& c : r.combination) c *= k;
  }

  // Eliminates pivots from r until its lowest term is not a pivot.
  void reduce(Row& r) const {
    while (!r.vector.empty()) {
      const auto lead = *r.vector.begin();
      auto it = rows_.find(lead.first);
      if (it == rows_.end()) return;
      const Scalar k = lead.second;
      for (const auto& [m, c] : it->second.vector) add_term(r.vector, m, -(k * c));
      for (std::size_t i = 0; i < r.combination.size() && i < it->second.combination.size(); ++i) {
        r.combination[i] -= k * it->second.combination[i];
      }
    }
  }

  void reduce_vector_only(Terms& v) const {
    while (!v.empty()) {
      const auto lead = *v.begin();
      auto it = rows_.find(lead.first);
      if (it == rows_.end()) return;
      for (const auto& [m, c] : it->second.vector) add_term(v, m, -(lead.second * c));
    }
  }

  FieldDescriptor field_;
  std::map<Monomial, Row> rows_;
  std::size_t inserted_ = 0;
};

/// A small dense matrix; rows are indexed first.
class Matrix {
 public:
  Matrix(FieldDescriptor field, int rows, int cols)
      : field_(field),
        rows_(rows),
        cols_(cols),
        data_(static_cast<std::size_t>(rows * cols), Scalar::zero(field)) {}

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  const FieldDescriptor& field() const noexcept { return field_; }

  Scalar& at(int r, int c) { return data_.at(static_cast<std::size_t>(r * cols_ + c)); }
  const Scalar& at(int r, int c) const { return data_.at(static_cast<std::size_t>(r * cols_ + c)); }

  int rank() const {
    Matrix m = *this;
    int rank = 0;
    for (int c = 0; c < cols_ && rank < rows_; ++c) {
      int pivot = -1;
      for (int r = rank; r < rows_; ++r) {
        if (!m.at(r, c).is_zero()) {
          pivot = r;
          break;
        }
      }
      if (pivot < 0) continue;
      for (int k = 0; k < cols_; ++k) std::swap(m.at(rank, k), m.at(pivot, k));
      const Scalar inv = m.at(rank, c).inverse();
      for (int r = 0; r < rows_; ++r) {
        if (r == rank || m.at(r, c).is_zero()) continue;
        const Scalar f = m.at(r, c) * inv;
        for (int k = 0; k < cols_; ++k) m.at(r, k) -= f * m.at(rank, k);
      }
      ++rank;
    }
    return rank;
  }

  bool is_invertible() const { return rows_ == cols_ && rank() == rows_; }

  bool is_identity() const {
    for (int r = 0; r < rows_; ++r) {
      for (int c = 0; c < cols_; ++c) {
        if (!(at(r, c) == Scalar(field_, r == c ? 1 : 0))) return false;
      }
    }
    return true;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  FieldDescriptor field_;
  int rows_;
  int cols_;
  std::vector<Scalar> data_;
};

}  // namespace skewtower
