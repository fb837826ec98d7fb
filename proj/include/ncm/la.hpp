#pragma once

// Exact dense linear algebra over a scalar field context.
//
// Convention used throughout the library: vectors are ROWS and linear maps
// act on the right (v |-> v * M).  Composition "first f, then g" is therefore
// the matrix product M_f * M_g.  All eliminations pick the first nonzero
// pivot, so every echelon form — and hence every kernel/solution basis — is
// deterministic.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncm/errors.hpp"
#include "ncm/field.hpp"

namespace ncm {

template <ScalarField F>
using Vec = std::vector<typename F::Elem>;

template <ScalarField F>
Vec<F> zero_vec(const F& fld, std::size_t n) {
  return Vec<F>(n, fld.zero());
}

template <ScalarField F>
Vec<F> unit_row(const F& fld, std::size_t n, std::size_t i) {
  Vec<F> v(n, fld.zero());
  v[i] = fld.one();
  return v;
}

template <ScalarField F>
bool is_zero_vec(const F& fld, const Vec<F>& v) {
  for (const auto& x : v)
    if (!fld.is_zero(x)) return false;
  return true;
}

// These three deliberately deduce on the element type (Vec<F> alone is a
// non-deduced context).
template <class E>
void add_to(std::vector<E>& a, const std::vector<E>& b) {
  assert(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}

template <class E>
void sub_from(std::vector<E>& a, const std::vector<E>& b) {
  assert(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
}

template <class E>
std::vector<E> scaled(const std::vector<E>& a, const E& c) {
  std::vector<E> r = a;
  for (auto& x : r) x *= c;
  return r;
}

template <ScalarField F>
class Mat {
 public:
  using Elem = typename F::Elem;

  Mat() : fld_{}, rows_(0), cols_(0) {}
  Mat(const F& fld, std::size_t rows, std::size_t cols)
      : fld_(fld), rows_(rows), cols_(cols), a_(rows * cols, fld.zero()) {}

  static Mat identity(const F& fld, std::size_t n) {
    Mat m(fld, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = fld.one();
    return m;
  }
  static Mat from_rows(const F& fld, const std::vector<Vec<F>>& rows,
                       std::size_t cols) {
    Mat m(fld, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      require(rows[i].size() == cols, ErrorCode::BadDimension,
              "row length mismatch");
      for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
  }

  const F& field() const { return fld_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Elem& at(std::size_t i, std::size_t j) {
    assert(i < rows_ && j < cols_);
    return a_[i * cols_ + j];
  }
  const Elem& at(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return a_[i * cols_ + j];
  }

  Vec<F> row(std::size_t i) const {
    Vec<F> r(cols_, fld_.zero());
    for (std::size_t j = 0; j < cols_; ++j) r[j] = at(i, j);
    return r;
  }
  void set_row(std::size_t i, const Vec<F>& v) {
    assert(v.size() == cols_);
    for (std::size_t j = 0; j < cols_; ++j) at(i, j) = v[j];
  }

  bool is_zero() const {
    for (const auto& x : a_)
      if (!fld_.is_zero(x)) return false;
    return true;
  }

  friend bool operator==(const Mat& a, const Mat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

  friend Mat operator+(const Mat& a, const Mat& b) {
    require(a.rows_ == b.rows_ && a.cols_ == b.cols_, ErrorCode::BadDimension,
            "matrix addition shape mismatch");
    Mat r = a;
    for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] += b.a_[i];
    return r;
  }
  friend Mat operator-(const Mat& a, const Mat& b) {
    require(a.rows_ == b.rows_ && a.cols_ == b.cols_, ErrorCode::BadDimension,
            "matrix subtraction shape mismatch");
    Mat r = a;
    for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] -= b.a_[i];
    return r;
  }
  friend Mat operator*(const Mat& a, const Mat& b) {
    require(a.cols_ == b.rows_, ErrorCode::BadDimension,
            "matrix product shape mismatch");
    Mat r(a.fld_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Elem& x = a.at(i, k);
        if (a.fld_.is_zero(x)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          r.at(i, j) += x * b.at(k, j);
      }
    return r;
  }
  friend Mat operator*(const Elem& c, const Mat& a) {
    Mat r = a;
    for (auto& x : r.a_) x *= c;
    return r;
  }
  friend Mat operator-(const Mat& a) { return a.fld_.from_int(-1) * a; }

  Mat transpose() const {
    Mat r(fld_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
  }

 private:
  F fld_;
  std::size_t rows_, cols_;
  std::vector<Elem> a_;
};

template <ScalarField F>
Vec<F> operator*(const Vec<F>& v, const Mat<F>& m) {
  require(v.size() == m.rows(), ErrorCode::BadDimension,
          "row-vector/matrix shape mismatch");
  Vec<F> r(m.cols(), m.field().zero());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (m.field().is_zero(v[i])) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) r[j] += v[i] * m.at(i, j);
  }
  return r;
}

// Kronecker product; block (i,j) of the result is a(i,j) * b.
template <ScalarField F>
Mat<F> kron(const Mat<F>& a, const Mat<F>& b) {
  Mat<F> r(a.field(), a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a.field().is_zero(a.at(i, j))) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          r.at(i * b.rows() + k, j * b.cols() + l) = a.at(i, j) * b.at(k, l);
    }
  return r;
}

// Reduced row echelon form together with the performed row transform:
// result.transform * input == result.rref, and result.pivots lists the pivot
// column of each nonzero row in order.
template <ScalarField F>
struct Echelon {
  Mat<F> rref;
  Mat<F> transform;
  std::vector<std::size_t> pivots;
  std::size_t rank() const { return pivots.size(); }
};

template <ScalarField F>
Echelon<F> echelon(const Mat<F>& input) {
  const F& fld = input.field();
  Mat<F> r = input;
  Mat<F> t = Mat<F>::identity(fld, input.rows());
  std::vector<std::size_t> pivots;
  std::size_t lead = 0;
  for (std::size_t col = 0; col < r.cols() && lead < r.rows(); ++col) {
    std::size_t sel = lead;
    while (sel < r.rows() && fld.is_zero(r.at(sel, col))) ++sel;
    if (sel == r.rows()) continue;
    if (sel != lead) {
      for (std::size_t j = 0; j < r.cols(); ++j)
        std::swap(r.at(sel, j), r.at(lead, j));
      for (std::size_t j = 0; j < t.cols(); ++j)
        std::swap(t.at(sel, j), t.at(lead, j));
    }
    typename F::Elem inv = fld.inv(r.at(lead, col));
    for (std::size_t j = 0; j < r.cols(); ++j) r.at(lead, j) *= inv;
    for (std::size_t j = 0; j < t.cols(); ++j) t.at(lead, j) *= inv;
    for (std::size_t i = 0; i < r.rows(); ++i) {
      if (i == lead || fld.is_zero(r.at(i, col))) continue;
      typename F::Elem c = r.at(i, col);
      for (std::size_t j = 0; j < r.cols(); ++j)
        r.at(i, j) -= c * r.at(lead, j);
      for (std::size_t j = 0; j < t.cols(); ++j)
        t.at(i, j) -= c * t.at(lead, j);
    }
    pivots.push_back(col);
    ++lead;
  }
  return {std::move(r), std::move(t), std::move(pivots)};
}

template <ScalarField F>
std::size_t rank(const Mat<F>& m) {
  return echelon(m).rank();
}

// Canonical basis of the row space: the nonzero rows of the RREF.
template <ScalarField F>
std::vector<Vec<F>> row_basis(const Mat<F>& m) {
  Echelon<F> e = echelon(m);
  std::vector<Vec<F>> rows;
  rows.reserve(e.rank());
  for (std::size_t i = 0; i < e.rank(); ++i) rows.push_back(e.rref.row(i));
  return rows;
}

// Basis of { x : x * m == 0 } (rows).
template <ScalarField F>
std::vector<Vec<F>> left_kernel(const Mat<F>& m) {
  Echelon<F> e = echelon(m);
  std::vector<Vec<F>> out;
  for (std::size_t i = e.rank(); i < m.rows(); ++i)
    out.push_back(e.transform.row(i));
  return out;
}

// Basis of { v : m * v^T == 0 }, returned as rows of length m.cols().
template <ScalarField F>
std::vector<Vec<F>> right_kernel(const Mat<F>& m) {
  return left_kernel(m.transpose());
}

// Solve x * m == b for a single row b; returns std::nullopt when b is not in
// the row space of m.  The solution is the deterministic one built from the
// echelon transform (no free-parameter choices).
template <ScalarField F>
std::optional<Vec<F>> solve_left(const Mat<F>& m, const Vec<F>& b) {
  require(b.size() == m.cols(), ErrorCode::BadDimension, "rhs length mismatch");
  const F& fld = m.field();
  Echelon<F> e = echelon(m);
  Vec<F> residual = b;
  Vec<F> coeffs(m.rows(), fld.zero());
  for (std::size_t i = 0; i < e.rank(); ++i) {
    const typename F::Elem c = residual[e.pivots[i]];
    if (fld.is_zero(c)) continue;
    coeffs[i] = c;
    Vec<F> r = e.rref.row(i);
    for (std::size_t j = 0; j < residual.size(); ++j) residual[j] -= c * r[j];
  }
  if (!is_zero_vec(fld, residual)) return std::nullopt;
  return coeffs * e.transform;
}

// Solve X * m == rhs row-by-row; nullopt if any row fails.
template <ScalarField F>
std::optional<Mat<F>> solve_left(const Mat<F>& m, const Mat<F>& rhs) {
  Mat<F> x(m.field(), rhs.rows(), m.rows());
  for (std::size_t i = 0; i < rhs.rows(); ++i) {
    auto sol = solve_left(m, rhs.row(i));
    if (!sol) return std::nullopt;
    x.set_row(i, *sol);
  }
  return x;
}

template <ScalarField F>
std::optional<Mat<F>> inverse(const Mat<F>& m) {
  require(m.rows() == m.cols(), ErrorCode::BadDimension,
          "only square matrices can be inverted");
  auto x = solve_left(m, Mat<F>::identity(m.field(), m.rows()));
  if (!x) return std::nullopt;
  return x;  // x * m == I and m is square, so x is the two-sided inverse
}

// Quotient of F^n by the span of `relation_rows`, with a canonical
// complement basis (the standard coordinates that are not RREF pivots of the
// relations) and a deterministic reduction map.
template <ScalarField F>
class CosetSpace {
 public:
  CosetSpace(const F& fld, std::size_t ambient_dim,
             const std::vector<Vec<F>>& relation_rows)
      : fld_(fld), ambient_(ambient_dim) {
    if (!relation_rows.empty())
      rels_ = row_basis(Mat<F>::from_rows(fld, relation_rows, ambient_dim));
    is_pivot_.assign(ambient_dim, false);
    pivot_row_.assign(ambient_dim, 0);
    for (std::size_t r = 0; r < rels_.size(); ++r) {
      std::size_t c = 0;
      while (c < ambient_dim && fld.is_zero(rels_[r][c])) ++c;
      is_pivot_[c] = true;
      pivot_row_[c] = r;
    }
    for (std::size_t c = 0; c < ambient_dim; ++c)
      if (!is_pivot_[c]) keep_.push_back(c);
  }

  std::size_t dim() const { return keep_.size(); }
  std::size_t ambient_dim() const { return ambient_; }
  const std::vector<std::size_t>& kept_coords() const { return keep_; }

  // Coordinates of the class of v in the complement basis.
  Vec<F> reduce(Vec<F> v) const {
    assert(v.size() == ambient_);
    for (std::size_t c = 0; c < ambient_; ++c) {
      if (fld_.is_zero(v[c]) || !is_pivot_[c]) continue;
      typename F::Elem s = v[c];
      const Vec<F>& row = rels_[pivot_row_[c]];
      for (std::size_t j = 0; j < ambient_; ++j) v[j] -= s * row[j];
    }
    Vec<F> out(keep_.size(), fld_.zero());
    for (std::size_t t = 0; t < keep_.size(); ++t) out[t] = v[keep_[t]];
    return out;
  }

  // The standard section: class coordinates -> ambient representative.
  Vec<F> lift(const Vec<F>& w) const {
    assert(w.size() == keep_.size());
    Vec<F> v(ambient_, fld_.zero());
    for (std::size_t t = 0; t < keep_.size(); ++t) v[keep_[t]] = w[t];
    return v;
  }

 private:
  F fld_;
  std::size_t ambient_;
  std::vector<Vec<F>> rels_;
  std::vector<bool> is_pivot_;
  std::vector<std::size_t> pivot_row_;
  std::vector<std::size_t> keep_;
};

// Membership of a row vector in the row space spanned by `rows`.
template <ScalarField F>
bool in_row_space(const F& fld, const std::vector<Vec<F>>& rows,
                  const Vec<F>& v) {
  if (rows.empty()) return is_zero_vec(fld, v);
  Mat<F> m = Mat<F>::from_rows(fld, rows, v.size());
  return solve_left(m, v).has_value();
}

// Coordinates of v in the given basis (must be independent rows); nullopt if
// v is outside the span.
template <ScalarField F>
std::optional<Vec<F>> coords_in_basis(const F& fld,
                                      const std::vector<Vec<F>>& basis,
                                      const Vec<F>& v) {
  if (basis.empty())
    return is_zero_vec(fld, v) ? std::optional<Vec<F>>(Vec<F>{}) : std::nullopt;
  Mat<F> m = Mat<F>::from_rows(fld, basis, v.size());
  return solve_left(m, v);
}

}  // namespace ncm
