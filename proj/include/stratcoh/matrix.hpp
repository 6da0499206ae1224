#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "stratcoh/integer.hpp"

namespace stratcoh {

/// Dense integer matrix, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::size_t rows, std::size_t cols, const std::vector<std::vector<long long>>& values);

  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  bool is_zero() const;
  IntMatrix transpose() const;

  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);
  /// row[target] += factor * row[source]
  void add_row_multiple(std::size_t target, std::size_t source, const Integer& factor);
  void add_col_multiple(std::size_t target, std::size_t source, const Integer& factor);
  void negate_row(std::size_t r);
  void negate_col(std::size_t c);

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

struct Triplet {
  std::size_t row;
  std::size_t col;
  Integer value;
};

/// Column-compressed sparse integer matrix. Each column is sorted by row and
/// holds no explicit zeros.
class SparseMatrix {
 public:
  struct Entry {
    std::size_t row;
    Integer value;
    friend bool operator==(const Entry&, const Entry&) = default;
  };
  using Column = std::vector<Entry>;

  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), columns_(cols) {}

  /// Duplicate coordinates are summed; zero sums are dropped.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries);
  static SparseMatrix from_dense(const IntMatrix& dense);
  static SparseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nonzeros() const;
  bool is_zero() const;

  const Column& column(std::size_t c) const { return columns_[c]; }
  std::span<const Column> columns() const { return columns_; }
  Integer at(std::size_t r, std::size_t c) const;

  /// Replaces column c; the column must be sorted by row with no zeros.
  void set_column(std::size_t c, Column column);

  IntMatrix to_dense() const;
  SparseMatrix transpose() const;
  SparseMatrix negated() const;
  SparseMatrix scaled(const Integer& factor) const;
  /// Entries reduced into [0, p); zero residues dropped.
  SparseMatrix reduced_mod(std::uint64_t p) const;
  std::vector<Triplet> triplets() const;

  friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b);
  friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b);
  friend SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b);
  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Column> columns_;
};

/// Block-diagonal direct sum.
SparseMatrix direct_sum(const SparseMatrix& a, const SparseMatrix& b);

/// Kronecker product: (a ⊗ b)[(i,k),(j,l)] = a[i][j] * b[k][l], with row index
/// i * b.rows() + k and column index j * b.cols() + l.
SparseMatrix kronecker(const SparseMatrix& a, const SparseMatrix& b);

}  // namespace stratcoh
