#pragma once

// Dense matrices over prime fields GF(q) and the elimination-based
// procedures built on them: rank, column-span intersection, left null
// spaces and partial decoding of two-stream linear systems.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nc2/error.hpp"
#include "nc2/rng.hpp"

namespace nc2 {

using Element = std::uint32_t;

// Prime field GF(q). Elements are canonical residues in [0, q).
class Field {
 public:
  explicit Field(std::uint32_t q) : q_(q) {
    if (!is_prime(q)) throw PreconditionError("field size " + std::to_string(q) + " is not prime");
  }

  std::uint32_t q() const noexcept { return q_; }

  Element reduce(long long v) const noexcept {
    long long r = v % static_cast<long long>(q_);
    return static_cast<Element>(r < 0 ? r + q_ : r);
  }
  Element add(Element a, Element b) const noexcept {
    std::uint64_t s = std::uint64_t{a} + b;
    return static_cast<Element>(s >= q_ ? s - q_ : s);
  }
  Element sub(Element a, Element b) const noexcept { return a >= b ? a - b : static_cast<Element>(a + (q_ - b)); }
  Element neg(Element a) const noexcept { return a == 0 ? 0 : q_ - a; }
  Element mul(Element a, Element b) const noexcept {
    return static_cast<Element>(std::uint64_t{a} * b % q_);
  }
  Element pow(Element a, std::uint64_t e) const noexcept {
    Element r = 1 % q_;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  // Fermat inverse; a must be nonzero.
  Element inv(Element a) const {
    if (a == 0) throw PreconditionError("inverse of zero");
    return pow(a, q_ - 2);
  }

  Element random(Rng& rng) const { return static_cast<Element>(rng.below(q_)); }

  static bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }

  friend bool operator==(const Field&, const Field&) = default;

 private:
  std::uint32_t q_;
};

class Matrix {
 public:
  Matrix(Field f, std::size_t rows, std::size_t cols)
      : field_(f), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static Matrix identity(Field f, std::size_t n) {
    Matrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1 % f.q();
    return m;
  }

  static Matrix from_rows(Field f, std::initializer_list<std::initializer_list<long long>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.begin()->size() : 0;
    Matrix m(f, r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw PreconditionError("ragged matrix literal");
      std::size_t j = 0;
      for (long long v : row) m.set(i, j++, v);
      ++i;
    }
    return m;
  }

  static Matrix column(Field f, std::span<const Element> values) {
    Matrix m(f, values.size(), 1);
    for (std::size_t i = 0; i < values.size(); ++i) m.set(i, 0, values[i]);
    return m;
  }

  static Matrix random(Field f, std::size_t rows, std::size_t cols, Rng& rng) {
    Matrix m(f, rows, cols);
    for (auto& x : m.data_) x = f.random(rng);
    return m;
  }

  const Field& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  Element at(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, long long v) noexcept { data_[r * cols_ + c] = field_.reduce(v); }

  std::span<const Element> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const Element> data() const noexcept { return data_; }

  std::vector<Element> column_values(std::size_t c) const {
    std::vector<Element> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = at(i, c);
    return v;
  }

  Matrix select_columns(std::span<const std::size_t> idx) const {
    Matrix m(field_, rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) m.data_[i * idx.size() + j] = at(i, idx[j]);
    return m;
  }

  Matrix select_rows(std::span<const std::size_t> idx) const {
    Matrix m(field_, idx.size(), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i)
      std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(idx[i] * cols_), cols_,
                  m.data_.begin() + static_cast<std::ptrdiff_t>(i * cols_));
    return m;
  }

  Matrix leading_columns(std::size_t n) const {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return select_columns(idx);
  }

  Matrix without_column(std::size_t c) const {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < cols_; ++j)
      if (j != c) idx.push_back(j);
    return select_columns(idx);
  }

  bool is_zero() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](Element x) { return x == 0; });
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    require_same_field(a, b);
    if (a.cols_ != b.rows_) throw PreconditionError("matrix product dimension mismatch");
    const Field& f = a.field_;
    Matrix m(f, a.rows_, b.cols_);
    // Accumulate in 64 bits and reduce lazily; q < 2^32 so each product fits
    // and we flush before the sum can overflow.
    const std::uint64_t q = f.q();
    const std::uint64_t flush = q > 1 ? (UINT64_MAX / ((q - 1) * (q - 1) + 1)) : 1;
    std::vector<std::uint64_t> acc(b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      std::fill(acc.begin(), acc.end(), 0);
      std::uint64_t pending = 0;
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const std::uint64_t x = a.at(i, k);
        if (x == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) acc[j] += x * b.at(k, j);
        if (++pending == flush) {
          for (auto& v : acc) v %= q;
          pending = 0;
        }
      }
      for (std::size_t j = 0; j < b.cols_; ++j) m.data_[i * b.cols_ + j] = static_cast<Element>(acc[j] % q);
    }
    return m;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    require_same_field(a, b);
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw PreconditionError("matrix sum dimension mismatch");
    Matrix m = a;
    for (std::size_t i = 0; i < m.data_.size(); ++i) m.data_[i] = a.field_.add(a.data_[i], b.data_[i]);
    return m;
  }

  static void require_same_field(const Matrix& a, const Matrix& b) {
    if (!(a.field_ == b.field_)) throw PreconditionError("operands live in different fields");
  }

 private:
  friend class RowReducer;
  Field field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Element> data_;
};

// A·x for a plain vector x.
inline std::vector<Element> mat_vec(const Matrix& a, std::span<const Element> x) {
  if (x.size() != a.cols()) throw PreconditionError("apply: vector length mismatch");
  const Field& f = a.field();
  std::vector<Element> y(a.rows(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::uint64_t acc = 0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc = (acc + std::uint64_t{a.at(i, j)} * x[j]) % f.q();
    y[i] = static_cast<Element>(acc);
  }
  return y;
}

inline Matrix hcat(const Matrix& a, const Matrix& b) {
  Matrix::require_same_field(a, b);
  if (a.rows() != b.rows()) throw PreconditionError("hcat row-count mismatch");
  Matrix m(a.field(), a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m.set(i, j, a.at(i, j));
    for (std::size_t j = 0; j < b.cols(); ++j) m.set(i, a.cols() + j, b.at(i, j));
  }
  return m;
}

inline Matrix vcat(const Matrix& a, const Matrix& b) {
  Matrix::require_same_field(a, b);
  if (a.cols() != b.cols()) throw PreconditionError("vcat column-count mismatch");
  Matrix m(a.field(), a.rows() + b.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m.set(i, j, a.at(i, j));
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m.set(a.rows() + i, j, b.at(i, j));
  return m;
}

inline Matrix transpose(const Matrix& a) {
  Matrix m(a.field(), a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m.set(j, i, a.at(i, j));
  return m;
}

// Reduced row echelon form with first-nonzero pivoting (deterministic).
struct Echelon {
  Matrix reduced;
  std::vector<std::size_t> pivots;  // pivot column of row i, ascending
  std::size_t rank() const noexcept { return pivots.size(); }
};

class RowReducer {
 public:
  // Eliminates over the first `limit` columns only (all when limit exceeds cols).
  static Echelon reduce(Matrix m, std::size_t limit = SIZE_MAX) {
    const Field f = m.field_;
    const std::size_t rows = m.rows_, cols = m.cols_;
    auto* d = m.data_.data();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < std::min(cols, limit) && r < rows; ++c) {
      std::size_t p = r;
      while (p < rows && d[p * cols + c] == 0) ++p;
      if (p == rows) continue;
      if (p != r)
        std::swap_ranges(d + p * cols, d + (p + 1) * cols, d + r * cols);
      const Element inv = f.inv(d[r * cols + c]);
      for (std::size_t j = c; j < cols; ++j) d[r * cols + j] = f.mul(d[r * cols + j], inv);
      for (std::size_t i = 0; i < rows; ++i) {
        if (i == r) continue;
        const Element factor = d[i * cols + c];
        if (factor == 0) continue;
        for (std::size_t j = c; j < cols; ++j)
          d[i * cols + j] = f.sub(d[i * cols + j], f.mul(factor, d[r * cols + j]));
      }
      pivots.push_back(c);
      ++r;
    }
    return {std::move(m), std::move(pivots)};
  }
};

inline Echelon row_reduce(Matrix m, std::size_t limit = SIZE_MAX) { return RowReducer::reduce(std::move(m), limit); }

inline std::size_t rank(const Matrix& a) {
  if (a.empty()) return 0;
  return row_reduce(a).rank();
}

inline bool full_column_rank(const Matrix& a) { return rank(a) == a.cols(); }
inline bool full_row_rank(const Matrix& a) { return rank(a) == a.rows(); }

// dim(span(A) ∩ span(B)) for column spans.
inline std::size_t span_intersection_dim(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw PreconditionError("span_intersection_dim: row-count mismatch");
  return rank(a) + rank(b) - rank(hcat(a, b));
}

// Rows form a basis of {p : p·A = 0}.
inline Matrix left_nullspace(const Matrix& a) {
  const Field f = a.field();
  const Echelon e = row_reduce(transpose(a));
  const std::size_t n = a.rows();
  std::vector<bool> is_pivot(n, false);
  for (auto c : e.pivots) is_pivot[c] = true;
  Matrix p(f, n - e.rank(), n);
  std::size_t out = 0;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    p.set(out, free, 1);
    for (std::size_t i = 0; i < e.rank(); ++i) p.set(out, e.pivots[i], f.neg(e.reduced.at(i, free)));
    ++out;
  }
  return p;
}

// Lowest-index-first greedy choice of k linearly independent columns.
inline std::vector<std::size_t> independent_column_subset(const Matrix& a, std::size_t k) {
  const Echelon e = row_reduce(a);
  if (k > e.rank())
    throw PreconditionError("independent_column_subset: requested " + std::to_string(k) +
                            " columns but rank is " + std::to_string(e.rank()));
  return {e.pivots.begin(), e.pivots.begin() + static_cast<std::ptrdiff_t>(k)};
}

// L with L·A = I for A of full column rank.
inline Matrix left_inverse(const Matrix& a) {
  const Field f = a.field();
  const std::size_t m = a.rows(), n = a.cols();
  const Echelon e = row_reduce(hcat(a, Matrix::identity(f, m)), n);
  if (e.rank() != n) throw PreconditionError("left_inverse: matrix lacks full column rank");
  Matrix l(f, n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) l.set(i, j, e.reduced.at(i, n + j));
  return l;
}

// R with A·R = I for A of full row rank.
inline Matrix right_inverse(const Matrix& a) { return transpose(left_inverse(transpose(a))); }

// Unique X with A·X = B when A has full column rank; nullopt when B is not
// in span(A).
inline std::optional<Matrix> solve_full_column_rank(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.cols();
  const Echelon e = row_reduce(hcat(a, b));
  for (auto c : e.pivots)
    if (c >= n) return std::nullopt;
  if (e.rank() != n) throw PreconditionError("solve: coefficient matrix lacks full column rank");
  Matrix x(a.field(), n, b.cols());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) x.set(i, j, e.reduced.at(i, n + j));
  return x;
}

class SolveError : public PreconditionError {
 public:
  enum class Reason { DimensionMismatch, RankDeficient, SpanOverlap, TooFewRows, Inconsistent };

  SolveError(Reason reason, const std::string& what) : PreconditionError(what), reason_(reason) {}
  Reason reason() const noexcept { return reason_; }

 private:
  Reason reason_;
};

// Linear map D with D·Z = X2 for every Z = H1·X1 + H2·X2, where the
// interfering block H1 may be rank deficient but its column span meets
// span(H2) only at zero. Built by projecting onto the left null space of H1.
inline Matrix partial_decoder(const Matrix& h1, const Matrix& h2) {
  using R = SolveError::Reason;
  if (h1.rows() != h2.rows()) throw SolveError(R::DimensionMismatch, "H1 and H2 row counts differ");
  const std::size_t rank2 = rank(h2);
  if (rank2 != h2.cols())
    throw SolveError(R::RankDeficient, "H2 has rank " + std::to_string(rank2) + " < " +
                                           std::to_string(h2.cols()) + " columns");
  const std::size_t overlap = span_intersection_dim(h1, h2);
  if (overlap != 0)
    throw SolveError(R::SpanOverlap, "span(H1) and span(H2) share a " + std::to_string(overlap) +
                                         "-dimensional subspace");
  const std::size_t sigma = h1.cols() - rank(h1);
  if (h1.rows() + sigma < h1.cols() + h2.cols())
    throw SolveError(R::TooFewRows, "too few rows for the unknowns");
  const Matrix p = left_nullspace(h1);
  const Matrix ph2 = p * h2;
  if (!full_column_rank(ph2)) throw LemmaViolation("projected H2 lost full column rank");
  return left_inverse(ph2) * p;
}

// The unique X2 in Z = H1·X1 + H2·X2 (Z may hold several columns).
inline Matrix solve_partial(const Matrix& z, const Matrix& h1, const Matrix& h2) {
  using R = SolveError::Reason;
  if (z.rows() != h1.rows()) throw SolveError(R::DimensionMismatch, "Z and H1 row counts differ");
  const Matrix d = partial_decoder(h1, h2);
  const Matrix p = left_nullspace(h1);
  auto x2 = solve_full_column_rank(p * h2, p * z);
  if (!x2) throw SolveError(R::Inconsistent, "Z is not in span([H1 H2])");
  return *x2;
}

}  // namespace nc2
