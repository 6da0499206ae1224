#include "stratcoh/matrix.hpp"

#include <algorithm>
#include <sstream>

#include "stratcoh/error.hpp"

namespace stratcoh {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, const std::vector<std::vector<long long>>& values)
    : IntMatrix(rows, cols) {
  if (values.size() != rows) throw Error(ErrorCode::Internal, "IntMatrix: row count mismatch");
  for (std::size_t r = 0; r < rows; ++r) {
    if (values[r].size() != cols) throw Error(ErrorCode::Internal, "IntMatrix: column count mismatch");
    for (std::size_t c = 0; c < cols; ++c) (*this)(r, c) = values[r][c];
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return x == 0; });
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
}

void IntMatrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, a), (*this)(r, b));
}

void IntMatrix::add_row_multiple(std::size_t target, std::size_t source, const Integer& factor) {
  if (factor == 0) return;
  for (std::size_t c = 0; c < cols_; ++c) {
    const Integer& s = (*this)(source, c);
    if (s != 0) (*this)(target, c) += factor * s;
  }
}

void IntMatrix::add_col_multiple(std::size_t target, std::size_t source, const Integer& factor) {
  if (factor == 0) return;
  for (std::size_t r = 0; r < rows_; ++r) {
    const Integer& s = (*this)(r, source);
    if (s != 0) (*this)(r, target) += factor * s;
  }
}

void IntMatrix::negate_row(std::size_t r) {
  for (std::size_t c = 0; c < cols_; ++c) (*this)(r, c) = -(*this)(r, c);
}

void IntMatrix::negate_col(std::size_t c) {
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = -(*this)(r, c);
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorCode::Internal, "IntMatrix product: dimension mismatch");
  IntMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Integer& x = a(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const Integer& y = b(k, j);
        if (y != 0) out(i, j) += x * y;
      }
    }
  return out;
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t r = 0; r < rows_; ++r) {
    os << (r ? ", [" : "[");
    for (std::size_t c = 0; c < cols_; ++c) os << (c ? ", " : "") << (*this)(r, c);
    os << "]";
  }
  os << "]";
  return os.str();
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries) {
  SparseMatrix m(rows, cols);
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });
  for (std::size_t i = 0; i < entries.size();) {
    const auto& t = entries[i];
    if (t.row >= rows || t.col >= cols)
      throw Error(ErrorCode::InvalidComplex, "matrix entry (" + std::to_string(t.row) + "," +
                                                 std::to_string(t.col) + ") outside " + std::to_string(rows) +
                                                 "x" + std::to_string(cols));
    Integer sum = 0;
    std::size_t j = i;
    while (j < entries.size() && entries[j].row == t.row && entries[j].col == t.col) sum += entries[j++].value;
    if (sum != 0) m.columns_[t.col].push_back({t.row, std::move(sum)});
    i = j;
  }
  return m;
}

SparseMatrix SparseMatrix::from_dense(const IntMatrix& dense) {
  SparseMatrix m(dense.rows(), dense.cols());
  for (std::size_t c = 0; c < dense.cols(); ++c)
    for (std::size_t r = 0; r < dense.rows(); ++r)
      if (dense(r, c) != 0) m.columns_[c].push_back({r, dense(r, c)});
  return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  SparseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.columns_[i].push_back({i, Integer(1)});
  return m;
}

std::size_t SparseMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& c : columns_) n += c.size();
  return n;
}

bool SparseMatrix::is_zero() const {
  return std::all_of(columns_.begin(), columns_.end(), [](const Column& c) { return c.empty(); });
}

Integer SparseMatrix::at(std::size_t r, std::size_t c) const {
  const auto& col = columns_.at(c);
  auto it = std::lower_bound(col.begin(), col.end(), r, [](const Entry& e, std::size_t row) { return e.row < row; });
  if (it != col.end() && it->row == r) return it->value;
  return 0;
}

void SparseMatrix::set_column(std::size_t c, Column column) { columns_.at(c) = std::move(column); }

IntMatrix SparseMatrix::to_dense() const {
  IntMatrix d(rows_, cols_);
  for (std::size_t c = 0; c < cols_; ++c)
    for (const auto& e : columns_[c]) d(e.row, c) = e.value;
  return d;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols_, rows_);
  for (std::size_t c = 0; c < cols_; ++c)
    for (const auto& e : columns_[c]) t.columns_[e.row].push_back({c, e.value});
  return t;
}

SparseMatrix SparseMatrix::negated() const { return scaled(-1); }

SparseMatrix SparseMatrix::scaled(const Integer& factor) const {
  if (factor == 0) return SparseMatrix(rows_, cols_);
  SparseMatrix m = *this;
  for (auto& col : m.columns_)
    for (auto& e : col) e.value *= factor;
  return m;
}

SparseMatrix SparseMatrix::reduced_mod(std::uint64_t p) const {
  SparseMatrix m(rows_, cols_);
  for (std::size_t c = 0; c < cols_; ++c)
    for (const auto& e : columns_[c]) {
      auto r = reduce_mod(e.value, p);
      if (r != 0) m.columns_[c].push_back({e.row, Integer(r)});
    }
  return m;
}

std::vector<Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> out;
  for (std::size_t c = 0; c < cols_; ++c)
    for (const auto& e : columns_[c]) out.push_back({e.row, c, e.value});
  std::sort(out.begin(), out.end(),
            [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  return out;
}

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols_ != b.rows_)
    throw Error(ErrorCode::Internal, "sparse product: " + std::to_string(a.rows_) + "x" + std::to_string(a.cols_) +
                                         " times " + std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
  SparseMatrix out(a.rows_, b.cols_);
  std::vector<Integer> acc(a.rows_);
  std::vector<char> touched(a.rows_, 0);
  std::vector<std::size_t> rows;
  for (std::size_t j = 0; j < b.cols_; ++j) {
    rows.clear();
    for (const auto& eb : b.columns_[j]) {
      for (const auto& ea : a.columns_[eb.row]) {
        if (!touched[ea.row]) {
          touched[ea.row] = 1;
          rows.push_back(ea.row);
          acc[ea.row] = 0;
        }
        acc[ea.row] += ea.value * eb.value;
      }
    }
    std::sort(rows.begin(), rows.end());
    for (auto r : rows) {
      if (acc[r] != 0) out.columns_[j].push_back({r, acc[r]});
      touched[r] = 0;
    }
  }
  return out;
}

namespace {

template <class Op>
SparseMatrix combine(const SparseMatrix& a, const SparseMatrix& b, Op op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(ErrorCode::Internal, "sparse sum: shape mismatch");
  SparseMatrix out(a.rows(), a.cols());
  for (std::size_t c = 0; c < a.cols(); ++c) {
    const auto& x = a.column(c);
    const auto& y = b.column(c);
    SparseMatrix::Column col;
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
      if (j == y.size() || (i < x.size() && x[i].row < y[j].row)) {
        col.push_back(x[i++]);
      } else if (i == x.size() || y[j].row < x[i].row) {
        col.push_back({y[j].row, op(Integer(0), y[j].value)});
        ++j;
      } else {
        Integer v = op(x[i].value, y[j].value);
        if (v != 0) col.push_back({x[i].row, std::move(v)});
        ++i;
        ++j;
      }
    }
    out.set_column(c, std::move(col));
  }
  return out;
}

}  // namespace

SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) {
  return combine(a, b, [](const Integer& x, const Integer& y) { return Integer(x + y); });
}

SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) {
  return combine(a, b, [](const Integer& x, const Integer& y) { return Integer(x - y); });
}

SparseMatrix direct_sum(const SparseMatrix& a, const SparseMatrix& b) {
  SparseMatrix out(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t c = 0; c < a.cols(); ++c) out.set_column(c, a.column(c));
  for (std::size_t c = 0; c < b.cols(); ++c) {
    SparseMatrix::Column col = b.column(c);
    for (auto& e : col) e.row += a.rows();
    out.set_column(a.cols() + c, std::move(col));
  }
  return out;
}

SparseMatrix kronecker(const SparseMatrix& a, const SparseMatrix& b) {
  SparseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t l = 0; l < b.cols(); ++l) {
      SparseMatrix::Column col;
      for (const auto& ea : a.column(j))
        for (const auto& eb : b.column(l)) col.push_back({ea.row * b.rows() + eb.row, ea.value * eb.value});
      out.set_column(j * b.cols() + l, std::move(col));
    }
  return out;
}

}  // namespace stratcoh
