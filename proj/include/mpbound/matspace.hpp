#pragma once

// Dense matrices and linear forms over a finite field.
//
// Row-major vectorization is used everywhere: a linear form on n x m matrices
// has n*m coefficients and coefficient i*m + j multiplies entry (i, j).

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mpbound/error.hpp"
#include "mpbound/field.hpp"
#include "mpbound/rng.hpp"

namespace mpbound {

class Mat {
 public:
  Mat() = default;
  Mat(FieldCtx ctx, std::size_t rows, std::size_t cols) : ctx_(ctx), rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
  }
  Mat(FieldCtx ctx, std::size_t rows, std::size_t cols, std::vector<Elem> entries)
      : ctx_(ctx), rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
    if (data_.size() != rows * cols) throw DimensionError("entry count does not match matrix shape");
    for (auto e : data_)
      if (!ctx_.contains(e)) throw Error("matrix entry outside field");
  }

  /// Entries given as integers, reduced into the prime subfield.
  static Mat from_ints(FieldCtx ctx, std::size_t rows, std::size_t cols, std::initializer_list<std::int64_t> values) {
    if (values.size() != rows * cols) throw DimensionError("entry count does not match matrix shape");
    std::vector<Elem> e;
    e.reserve(values.size());
    for (auto v : values) e.push_back(ctx.from_int(v));
    return Mat(ctx, rows, cols, std::move(e));
  }

  static Mat identity(FieldCtx ctx, std::size_t n) {
    Mat m(ctx, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = ctx.one();
    return m;
  }

  /// Matrix unit e_{i,j} (0-indexed).
  static Mat unit(FieldCtx ctx, std::size_t rows, std::size_t cols, std::size_t i, std::size_t j) {
    Mat m(ctx, rows, cols);
    m(i, j) = ctx.one();
    return m;
  }

  const FieldCtx& ctx() const { return ctx_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Elem& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  Elem operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Elem> entries() const { return data_; }
  std::span<Elem> entries() { return data_; }

  bool is_zero() const {
    for (auto e : data_)
      if (!e.is_zero()) return false;
    return true;
  }

  friend bool operator==(const Mat&, const Mat&) = default;

 private:
  FieldCtx ctx_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Elem> data_;
};

/// Linear form sum_i coeffs[i] * v_i over a field.
struct LinForm {
  FieldCtx ctx;
  std::vector<Elem> coeffs;

  std::size_t nvars() const { return coeffs.size(); }

  static LinForm zero(FieldCtx ctx, std::size_t nvars) { return {ctx, std::vector<Elem>(nvars)}; }
  static LinForm coordinate(FieldCtx ctx, std::size_t nvars, std::size_t index) {
    LinForm f = zero(ctx, nvars);
    f.coeffs.at(index) = ctx.one();
    return f;
  }

  friend bool operator==(const LinForm&, const LinForm&) = default;
};

namespace detail {

inline void require_same_field(const FieldCtx& a, const FieldCtx& b) {
  if (!(a == b)) throw DimensionError("operands live in different fields");
}

inline void require_same_shape(const Mat& a, const Mat& b) {
  require_same_field(a.ctx(), b.ctx());
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("matrix shapes differ");
}

/// In-place row reduction; returns pivot columns. Pivot is the topmost
/// nonzero entry of the leftmost remaining column.
inline std::vector<std::size_t> row_reduce(const FieldCtx& f, std::vector<Elem>& a, std::size_t rows, std::size_t cols,
                                           bool* odd_swaps = nullptr) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  bool odd = false;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv * cols + c].is_zero()) ++piv;
    if (piv == rows) continue;
    if (piv != r) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(a[piv * cols + j], a[r * cols + j]);
      odd = !odd;
    }
    const Elem inv = f.inv(a[r * cols + c]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      const Elem factor = f.mul(a[i * cols + c], inv);
      if (factor.is_zero()) continue;
      for (std::size_t j = c; j < cols; ++j) a[i * cols + j] = f.sub(a[i * cols + j], f.mul(factor, a[r * cols + j]));
    }
    pivots.push_back(c);
    ++r;
  }
  if (odd_swaps) *odd_swaps = odd;
  return pivots;
}

}  // namespace detail

/// Growing basis of a subspace of F^len, kept in echelon form.
class IncrementalBasis {
 public:
  IncrementalBasis(FieldCtx ctx, std::size_t len) : ctx_(ctx), len_(len) {}

  std::size_t dim() const { return rows_.size(); }
  std::size_t length() const { return len_; }

  /// Residue of v after elimination against the basis.
  std::vector<Elem> reduce(std::vector<Elem> v) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const Elem c = v[pivots_[r]];
      if (c.is_zero()) continue;
      const auto& row = rows_[r];
      for (std::size_t j = pivots_[r]; j < len_; ++j)
        if (!row[j].is_zero()) v[j] = ctx_.sub(v[j], ctx_.mul(c, row[j]));
    }
    return v;
  }

  bool contains(std::span<const Elem> v) const {
    const auto res = reduce(std::vector<Elem>(v.begin(), v.end()));
    for (auto e : res)
      if (!e.is_zero()) return false;
    return true;
  }

  /// Adds v; returns false (and leaves the basis unchanged) when v is in the span.
  bool insert(std::span<const Elem> v) {
    if (v.size() != len_) throw DimensionError("vector length does not match basis");
    auto res = reduce(std::vector<Elem>(v.begin(), v.end()));
    std::size_t piv = 0;
    while (piv < len_ && res[piv].is_zero()) ++piv;
    if (piv == len_) return false;
    const Elem inv = ctx_.inv(res[piv]);
    for (auto& e : res) e = ctx_.mul(e, inv);
    rows_.push_back(std::move(res));
    pivots_.push_back(piv);
    return true;
  }

 private:
  FieldCtx ctx_;
  std::size_t len_;
  std::vector<std::vector<Elem>> rows_;
  std::vector<std::size_t> pivots_;
};

inline Mat mat_add(const Mat& a, const Mat& b) {
  detail::require_same_shape(a, b);
  Mat out(a.ctx(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.entries().size(); ++i) out.entries()[i] = a.ctx().add(a.entries()[i], b.entries()[i]);
  return out;
}

inline Mat mat_sub(const Mat& a, const Mat& b) {
  detail::require_same_shape(a, b);
  Mat out(a.ctx(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.entries().size(); ++i) out.entries()[i] = a.ctx().sub(a.entries()[i], b.entries()[i]);
  return out;
}

inline Mat mat_scale(Elem s, const Mat& a) {
  Mat out(a.ctx(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.entries().size(); ++i) out.entries()[i] = a.ctx().mul(s, a.entries()[i]);
  return out;
}

inline Mat mat_mul(const Mat& a, const Mat& b) {
  detail::require_same_field(a.ctx(), b.ctx());
  if (a.cols() != b.rows()) throw DimensionError("inner dimensions differ in matrix product");
  const auto& f = a.ctx();
  Mat out(f, a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Elem x = a(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) = f.add(out(i, j), f.mul(x, b(k, j)));
    }
  return out;
}

inline Mat operator+(const Mat& a, const Mat& b) { return mat_add(a, b); }
inline Mat operator-(const Mat& a, const Mat& b) { return mat_sub(a, b); }
inline Mat operator*(const Mat& a, const Mat& b) { return mat_mul(a, b); }

inline Mat transpose(const Mat& a) {
  Mat out(a.ctx(), a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

inline Elem trace(const Mat& a) {
  if (!a.square()) throw DimensionError("trace of a non-square matrix");
  Elem s{};
  for (std::size_t i = 0; i < a.rows(); ++i) s = a.ctx().add(s, a(i, i));
  return s;
}

inline std::size_t rank(const Mat& a) {
  std::vector<Elem> work(a.entries().begin(), a.entries().end());
  return detail::row_reduce(a.ctx(), work, a.rows(), a.cols()).size();
}

inline Elem det(const Mat& a) {
  if (!a.square()) throw DimensionError("determinant of a non-square matrix");
  const auto& f = a.ctx();
  const std::size_t n = a.rows();
  std::vector<Elem> work(a.entries().begin(), a.entries().end());
  bool odd = false;
  if (detail::row_reduce(f, work, n, n, &odd).size() < n) return f.zero();
  Elem d = f.one();
  for (std::size_t i = 0; i < n; ++i) d = f.mul(d, work[i * n + i]);
  return odd ? f.neg(d) : d;
}

inline bool is_invertible(const Mat& a) { return a.square() && rank(a) == a.rows(); }

/// Gauss-Jordan inverse; throws SingularMatrix.
inline Mat inverse(const Mat& a) {
  if (!a.square()) throw DimensionError("inverse of a non-square matrix");
  const auto& f = a.ctx();
  const std::size_t n = a.rows();
  const std::size_t w = 2 * n;
  std::vector<Elem> aug(n * w);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i * w + j] = a(i, j);
    aug[i * w + n + i] = f.one();
  }
  const auto pivots = detail::row_reduce(f, aug, n, w);
  if (pivots.size() < n || pivots[n - 1] >= n) throw SingularMatrix("matrix is singular");
  // back substitution to reduced echelon form
  for (std::size_t r = n; r-- > 0;) {
    const Elem inv = f.inv(aug[r * w + r]);
    for (std::size_t j = 0; j < w; ++j) aug[r * w + j] = f.mul(aug[r * w + j], inv);
    for (std::size_t i = 0; i < r; ++i) {
      const Elem factor = aug[i * w + r];
      if (factor.is_zero()) continue;
      for (std::size_t j = 0; j < w; ++j) aug[i * w + j] = f.sub(aug[i * w + j], f.mul(factor, aug[r * w + j]));
    }
  }
  Mat out(f, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = aug[i * w + n + j];
  return out;
}

/// [a, b] = ab - ba.
inline Mat commutator(const Mat& a, const Mat& b) {
  if (!a.square() || !b.square()) throw DimensionError("commutator needs square matrices");
  detail::require_same_shape(a, b);
  return mat_sub(mat_mul(a, b), mat_mul(b, a));
}

inline Elem eval_form(const LinForm& f, std::span<const Elem> v) {
  if (f.nvars() != v.size()) throw DimensionError("linear form arity does not match vector length");
  Elem s{};
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!f.coeffs[i].is_zero() && !v[i].is_zero()) s = f.ctx.add(s, f.ctx.mul(f.coeffs[i], v[i]));
  return s;
}

inline Elem eval_form(const LinForm& f, const Mat& a) {
  detail::require_same_field(f.ctx, a.ctx());
  return eval_form(f, a.entries());
}

/// Greedy maximal independent subset, keeping the earliest forms.
inline std::vector<std::size_t> select_independent(std::span<const LinForm> forms) {
  std::vector<std::size_t> kept;
  if (forms.empty()) return kept;
  IncrementalBasis basis(forms.front().ctx, forms.front().nvars());
  for (std::size_t i = 0; i < forms.size(); ++i) {
    if (forms[i].nvars() != basis.length()) throw DimensionError("forms have different arity");
    if (basis.insert(forms[i].coeffs)) kept.push_back(i);
  }
  return kept;
}

/// Matrices b_j (n x n) with forms[i](b_j) = delta_{ij}.
inline std::vector<Mat> dual_basis(std::span<const LinForm> forms, std::size_t n) {
  const std::size_t nn = n * n;
  if (forms.size() != nn) throw PreconditionError("dual basis needs exactly n^2 forms");
  const auto& f = forms.front().ctx;
  Mat coeff(f, nn, nn);
  for (std::size_t i = 0; i < nn; ++i) {
    if (forms[i].nvars() != nn) throw DimensionError("form arity is not n^2");
    for (std::size_t j = 0; j < nn; ++j) coeff(i, j) = forms[i].coeffs[j];
  }
  Mat inv;
  try {
    inv = inverse(coeff);
  } catch (const SingularMatrix&) {
    throw PreconditionError("forms are linearly dependent");
  }
  // column j of the inverse is vec(b_j)
  std::vector<Mat> duals;
  duals.reserve(nn);
  for (std::size_t j = 0; j < nn; ++j) {
    Mat b(f, n, n);
    for (std::size_t r = 0; r < nn; ++r) b.entries()[r] = inv(r, j);
    duals.push_back(std::move(b));
  }
  return duals;
}

/// Matrix whose row-major entries are the base-q digits of index (entry 0 lowest).
inline Mat matrix_from_index(FieldCtx ctx, std::size_t rows, std::size_t cols, std::uint64_t index) {
  Mat m(ctx, rows, cols);
  const std::uint64_t q = ctx.size();
  for (auto& e : m.entries()) {
    e.code = static_cast<std::uint32_t>(index % q);
    index /= q;
  }
  return m;
}

/// q^(rows*cols), or nullopt when it does not fit in 64 bits.
inline std::optional<std::uint64_t> matrix_count(const FieldCtx& ctx, std::size_t rows, std::size_t cols) {
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < rows * cols; ++i) {
    if (count > UINT64_MAX / ctx.size()) return std::nullopt;
    count *= ctx.size();
  }
  return count;
}

inline Elem random_elem(const FieldCtx& ctx, Rng& rng) { return {static_cast<std::uint32_t>(rng.below(ctx.size()))}; }

inline Mat random_matrix(FieldCtx ctx, std::size_t rows, std::size_t cols, Rng& rng) {
  Mat m(ctx, rows, cols);
  for (auto& e : m.entries()) e = random_elem(ctx, rng);
  return m;
}

}  // namespace mpbound
