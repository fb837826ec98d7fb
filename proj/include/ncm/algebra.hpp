#pragma once

// Finite-dimensional associative unital algebras presented by structure
// constants, together with the constructions the rest of the library builds
// on: matrix algebras Mat_n(A), block upper-triangular algebras T(r_1..r_n),
// opposites, tensor products, enveloping algebras A (x) A^op, direct
// products, fiber products, square-zero extensions B (+) M and quotients by
// two-sided ideals.
//
// Structure constants are stored sparsely (most constructions here are very
// sparse) and every algebra is validated exhaustively at construction time:
// all dim^3 associativity triples and the two-sided unit law.  Failures carry
// a concrete witness.
//
// Elements are coordinate rows (Vec<F>) relative to the stored basis; an
// algebra is shared immutably via AlgebraPtr.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncm/errors.hpp"
#include "ncm/field.hpp"
#include "ncm/la.hpp"

namespace ncm {

template <ScalarField F>
class FinAlgebra;

template <ScalarField F>
using AlgebraPtr = std::shared_ptr<const FinAlgebra<F>>;

template <ScalarField F>
class FinAlgebra {
 public:
  using Elem = typename F::Elem;
  using SparseRow = std::vector<std::pair<std::size_t, Elem>>;

  // `table[i][j]` = coordinates of basis_i * basis_j.  Validates
  // associativity on every basis triple and that `unit` is two-sided.
  FinAlgebra(const F& fld, std::vector<std::string> names, Vec<F> unit,
             const std::vector<std::vector<Vec<F>>>& table)
      : fld_(fld),
        dim_(names.size()),
        names_(std::move(names)),
        unit_(std::move(unit)) {
    require(unit_.size() == dim_, ErrorCode::BadDimension,
            "unit vector has wrong length");
    require(table.size() == dim_, ErrorCode::BadDimension,
            "structure-constant table has wrong shape");
    mul_.resize(dim_ * dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      require(table[i].size() == dim_, ErrorCode::BadDimension,
              "structure-constant table has wrong shape");
      for (std::size_t j = 0; j < dim_; ++j) {
        require(table[i][j].size() == dim_, ErrorCode::BadDimension,
                "structure-constant row has wrong length");
        SparseRow& row = mul_[i * dim_ + j];
        for (std::size_t k = 0; k < dim_; ++k)
          if (!fld_.is_zero(table[i][j][k])) row.emplace_back(k, table[i][j][k]);
      }
    }
    validate();
  }

  const F& field() const { return fld_; }
  std::size_t dim() const { return dim_; }
  const std::vector<std::string>& basis_names() const { return names_; }
  const Vec<F>& unit() const { return unit_; }

  Vec<F> zero_elem() const { return zero_vec(fld_, dim_); }
  Vec<F> basis_elem(std::size_t i) const {
    Vec<F> v = zero_elem();
    v[i] = fld_.one();
    return v;
  }

  const SparseRow& basis_mul(std::size_t i, std::size_t j) const {
    return mul_[i * dim_ + j];
  }

  Vec<F> mul(const Vec<F>& x, const Vec<F>& y) const {
    assert(x.size() == dim_ && y.size() == dim_);
    Vec<F> r = zero_elem();
    for (std::size_t i = 0; i < dim_; ++i) {
      if (fld_.is_zero(x[i])) continue;
      for (std::size_t j = 0; j < dim_; ++j) {
        if (fld_.is_zero(y[j])) continue;
        const Elem c = x[i] * y[j];
        for (const auto& [k, s] : mul_[i * dim_ + j]) r[k] += c * s;
      }
    }
    return r;
  }

  bool is_idempotent(const Vec<F>& x) const { return mul(x, x) == x; }

  // Row-convention operator matrices: v * left_mult(x) == x * v and
  // v * right_mult(x) == v * x.
  Mat<F> left_mult(const Vec<F>& x) const {
    Mat<F> m(fld_, dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i) m.set_row(i, mul(x, basis_elem(i)));
    return m;
  }
  Mat<F> right_mult(const Vec<F>& x) const {
    Mat<F> m(fld_, dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i) m.set_row(i, mul(basis_elem(i), x));
    return m;
  }

  std::string format(const Vec<F>& v) const {
    std::string out;
    for (std::size_t i = 0; i < dim_; ++i) {
      if (fld_.is_zero(v[i])) continue;
      if (!out.empty()) out += " + ";
      if (!(v[i] == fld_.one())) out += fld_.str(v[i]) + "*";
      out += names_[i];
    }
    return out.empty() ? "0" : out;
  }

  std::size_t center_dim() const {
    // x central  <=>  x*b_i - b_i*x = 0 for all i: stack the commutator
    // operators and take the common kernel.
    Mat<F> stacked(fld_, dim_, dim_ * dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      Mat<F> comm = right_mult(basis_elem(i)) - left_mult(basis_elem(i));
      for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c)
          stacked.at(r, i * dim_ + c) = comm.at(r, c);
    }
    return dim_ - rank(stacked);
  }

  bool is_commutative() const {
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = i + 1; j < dim_; ++j)
        if (mul(basis_elem(i), basis_elem(j)) != mul(basis_elem(j), basis_elem(i)))
          return false;
    return true;
  }

 private:
  void validate() const {
    // two-sided unit
    for (std::size_t i = 0; i < dim_; ++i) {
      Vec<F> b = basis_elem(i);
      if (mul(unit_, b) != b || mul(b, unit_) != b)
        fail(ErrorCode::UnitNotTwoSided,
             "claimed unit fails on basis element '" + names_[i] + "'");
    }
    // exhaustive associativity
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) {
        Vec<F> ij = sparse_to_vec(mul_[i * dim_ + j]);
        for (std::size_t k = 0; k < dim_; ++k) {
          Vec<F> left = mul(ij, basis_elem(k));
          Vec<F> right = mul(basis_elem(i), sparse_to_vec(mul_[j * dim_ + k]));
          if (left != right)
            fail(ErrorCode::NotAssociative,
                 "associativity fails on triple (" + names_[i] + ", " +
                     names_[j] + ", " + names_[k] + ")");
        }
      }
  }

  Vec<F> sparse_to_vec(const SparseRow& row) const {
    Vec<F> v = zero_elem();
    for (const auto& [k, c] : row) v[k] = c;
    return v;
  }

  F fld_;
  std::size_t dim_;
  std::vector<std::string> names_;
  Vec<F> unit_;
  std::vector<SparseRow> mul_;
};

template <ScalarField F>
AlgebraPtr<F> make_algebra(const F& fld, std::vector<std::string> names,
                           Vec<F> unit,
                           const std::vector<std::vector<Vec<F>>>& table) {
  return std::make_shared<const FinAlgebra<F>>(fld, std::move(names),
                                               std::move(unit), table);
}

// ---------------------------------------------------------------------------
// Algebra maps

template <ScalarField F>
struct AlgMap {
  AlgebraPtr<F> src, dst;
  Mat<F> m;      // src->dim() x dst->dim(); apply as x |-> x * m
  bool unital = true;

  Vec<F> apply(const Vec<F>& x) const { return x * m; }
};

// Validates multiplicativity on all basis pairs; unit preservation is
// required unless `require_unital` is false (non-unital multiplicative maps
// occur as corner embeddings between triangular algebras).
template <ScalarField F>
AlgMap<F> make_alg_map(AlgebraPtr<F> src, AlgebraPtr<F> dst, Mat<F> m,
                       bool require_unital = true) {
  require(m.rows() == src->dim() && m.cols() == dst->dim(),
          ErrorCode::BadDimension, "algebra-map matrix has wrong shape");
  for (std::size_t i = 0; i < src->dim(); ++i)
    for (std::size_t j = 0; j < src->dim(); ++j) {
      Vec<F> lhs = src->mul(src->basis_elem(i), src->basis_elem(j)) * m;
      Vec<F> rhs = dst->mul(src->basis_elem(i) * m, src->basis_elem(j) * m);
      if (lhs != rhs)
        fail(ErrorCode::NotAMap,
             "map is not multiplicative on pair (" + src->basis_names()[i] +
                 ", " + src->basis_names()[j] + ")");
    }
  bool unital = (src->unit() * m == dst->unit());
  if (require_unital && !unital)
    fail(ErrorCode::NotAMap, "map does not send unit to unit");
  return AlgMap<F>{std::move(src), std::move(dst), std::move(m), unital};
}

template <ScalarField F>
AlgMap<F> identity_map(AlgebraPtr<F> a) {
  Mat<F> id = Mat<F>::identity(a->field(), a->dim());
  return AlgMap<F>{a, a, std::move(id), true};
}

template <ScalarField F>
AlgMap<F> compose(const AlgMap<F>& first, const AlgMap<F>& then) {
  require(first.dst.get() == then.src.get(), ErrorCode::BadDimension,
          "algebra maps are not composable");
  return AlgMap<F>{first.src, then.dst, first.m * then.m,
                   first.unital && then.unital};
}

template <ScalarField F>
bool is_surjective(const AlgMap<F>& f) {
  return rank(f.m) == f.dst->dim();
}

template <ScalarField F>
std::vector<Vec<F>> kernel_rows(const AlgMap<F>& f) {
  return left_kernel(f.m);
}

// ---------------------------------------------------------------------------
// Ideals

// Smallest two-sided ideal containing the given spanning rows; returns a
// canonical (RREF) basis.
template <ScalarField F>
std::vector<Vec<F>> ideal_closure(const FinAlgebra<F>& a,
                                  const std::vector<Vec<F>>& gens) {
  std::vector<Vec<F>> basis;
  auto absorb = [&](const Vec<F>& v) {
    if (in_row_space(a.field(), basis, v)) return false;
    basis.push_back(v);
    return true;
  };
  for (const auto& g : gens) absorb(g);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Vec<F>> snapshot = basis;
    for (const auto& v : snapshot)
      for (std::size_t i = 0; i < a.dim(); ++i) {
        if (absorb(a.mul(a.basis_elem(i), v))) grew = true;
        if (absorb(a.mul(v, a.basis_elem(i)))) grew = true;
      }
  }
  if (basis.empty()) return basis;
  return row_basis(Mat<F>::from_rows(a.field(), basis, a.dim()));
}

template <ScalarField F>
bool is_two_sided_ideal(const FinAlgebra<F>& a,
                        const std::vector<Vec<F>>& rows) {
  for (const auto& v : rows)
    for (std::size_t i = 0; i < a.dim(); ++i) {
      if (!in_row_space(a.field(), rows, a.mul(a.basis_elem(i), v))) return false;
      if (!in_row_space(a.field(), rows, a.mul(v, a.basis_elem(i)))) return false;
    }
  return true;
}

// Degree of nilpotency of the span (as an ideal power sequence); nullopt if
// the powers stabilise at something nonzero.
template <ScalarField F>
std::optional<std::size_t> nilpotency_degree(const FinAlgebra<F>& a,
                                             const std::vector<Vec<F>>& rows) {
  if (rows.empty()) return 1;
  std::vector<Vec<F>> power = rows;
  for (std::size_t k = 2; k <= a.dim() + 1; ++k) {
    std::vector<Vec<F>> next;
    for (const auto& v : power)
      for (const auto& w : rows) {
        Vec<F> prod = a.mul(v, w);
        if (!in_row_space(a.field(), next, prod)) next.push_back(prod);
      }
    if (next.empty()) return k;
    if (next.size() >= power.size()) {
      // compare spans: if V^k == V^{k+1} the chain has stabilised
      bool same = true;
      for (const auto& v : power)
        if (!in_row_space(a.field(), next, v)) { same = false; break; }
      if (same) return std::nullopt;
    }
    power = std::move(next);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Constructions

template <ScalarField F>
AlgebraPtr<F> field_algebra(const F& fld, const std::string& name = "1") {
  std::vector<std::vector<Vec<F>>> table{{Vec<F>{fld.one()}}};
  return make_algebra(fld, {name}, Vec<F>{fld.one()}, table);
}

namespace detail {
template <ScalarField F>
std::vector<std::vector<Vec<F>>> empty_table(const F& fld, std::size_t n) {
  return std::vector<std::vector<Vec<F>>>(
      n, std::vector<Vec<F>>(n, zero_vec(fld, n)));
}
}  // namespace detail

// Mat_n(A); basis e_{kl} (x) b_m indexed (k*n + l)*dim(A) + m.
template <ScalarField F>
AlgebraPtr<F> matrix_algebra(const AlgebraPtr<F>& inner, std::size_t n) {
  const F& fld = inner->field();
  const std::size_t d = inner->dim();
  const std::size_t dim = n * n * d;
  auto idx = [&](std::size_t k, std::size_t l, std::size_t m) {
    return (k * n + l) * d + m;
  };
  auto table = detail::empty_table(fld, dim);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t m = 0; m < d; ++m)
        for (std::size_t l2 = 0; l2 < n; ++l2)
          for (std::size_t m2 = 0; m2 < d; ++m2) {
            // (e_{kl} b_m)(e_{l l2} b_m2) = e_{k l2} (b_m b_m2)
            Vec<F>& out = table[idx(k, l, m)][idx(l, l2, m2)];
            for (const auto& [t, c] : inner->basis_mul(m, m2))
              out[idx(k, l2, t)] += c;
          }
  std::vector<std::string> names(dim);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t m = 0; m < d; ++m) {
        std::string base = "e" + std::to_string(k + 1) + std::to_string(l + 1);
        names[idx(k, l, m)] =
            (d == 1) ? base : base + "*" + inner->basis_names()[m];
      }
  Vec<F> unit = zero_vec(fld, dim);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t m = 0; m < d; ++m) unit[idx(k, k, m)] = inner->unit()[m];
  return make_algebra(fld, std::move(names), std::move(unit), table);
}

template <ScalarField F>
AlgebraPtr<F> matrix_algebra(const F& fld, std::size_t n) {
  return matrix_algebra(field_algebra(fld), n);
}

// Block upper-triangular algebra T(r_1, ..., r_n) over the ground field:
// matrices of total size sum(r_i) supported on blocks (i, j) with i <= j.
template <ScalarField F>
AlgebraPtr<F> triangular_algebra(const F& fld,
                                 const std::vector<std::size_t>& sig) {
  std::size_t total = 0;
  std::vector<std::size_t> block_of;  // block index of each global row/col
  for (std::size_t b = 0; b < sig.size(); ++b) {
    require(sig[b] > 0, ErrorCode::BadDimension, "signature entries must be positive");
    for (std::size_t i = 0; i < sig[b]; ++i) block_of.push_back(b);
    total += sig[b];
  }
  std::vector<std::pair<std::size_t, std::size_t>> units;  // (row, col)
  for (std::size_t r = 0; r < total; ++r)
    for (std::size_t c = 0; c < total; ++c)
      if (block_of[r] <= block_of[c]) units.emplace_back(r, c);
  auto find = [&](std::size_t r, std::size_t c) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < units.size(); ++i)
      if (units[i] == std::make_pair(r, c)) return i;
    return std::nullopt;
  };
  const std::size_t dim = units.size();
  auto table = detail::empty_table(fld, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      if (units[i].second != units[j].first) continue;
      auto k = find(units[i].first, units[j].second);
      require(k.has_value(), ErrorCode::InvariantViolation,
              "triangular product left the support");
      table[i][j][*k] = fld.one();
    }
  std::vector<std::string> names(dim);
  for (std::size_t i = 0; i < dim; ++i)
    names[i] = "e" + std::to_string(units[i].first + 1) +
               std::to_string(units[i].second + 1);
  Vec<F> unit = zero_vec(fld, dim);
  for (std::size_t r = 0; r < total; ++r) unit[*find(r, r)] = fld.one();
  return make_algebra(fld, std::move(names), std::move(unit), table);
}

// F[x]/(x^n - r(x)) with basis 1, x, ..., x^{n-1}; `reduction` holds the
// coordinates of x^n.  Covers F[x]/(x^k) (reduction = 0) and friends.
template <ScalarField F>
AlgebraPtr<F> poly_quotient_algebra(const F& fld, const Vec<F>& reduction,
                                    const std::string& var = "x") {
  const std::size_t n = reduction.size();
  require(n > 0, ErrorCode::BadDimension, "empty reduction row");
  // powers[k] = coordinates of x^k for k = 0 .. 2n-2
  std::vector<Vec<F>> powers(2 * n - 1, zero_vec(fld, n));
  powers[0][0] = fld.one();
  for (std::size_t k = 1; k < 2 * n - 1; ++k) {
    // multiply powers[k-1] by x
    for (std::size_t i = 0; i < n; ++i) {
      if (fld.is_zero(powers[k - 1][i])) continue;
      if (i + 1 < n) {
        powers[k][i + 1] += powers[k - 1][i];
      } else {
        for (std::size_t j = 0; j < n; ++j)
          powers[k][j] += powers[k - 1][i] * reduction[j];
      }
    }
  }
  auto table = detail::empty_table(fld, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) table[i][j] = powers[i + j];
  std::vector<std::string> names(n);
  names[0] = "1";
  for (std::size_t i = 1; i < n; ++i)
    names[i] = i == 1 ? var : var + "^" + std::to_string(i);
  Vec<F> unit = zero_vec(fld, n);
  unit[0] = fld.one();
  return make_algebra(fld, std::move(names), std::move(unit), table);
}

template <ScalarField F>
AlgebraPtr<F> opposite_algebra(const AlgebraPtr<F>& a) {
  const std::size_t n = a->dim();
  auto table = detail::empty_table(a->field(), n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      for (const auto& [k, c] : a->basis_mul(j, i)) table[i][j][k] += c;
    }
  std::vector<std::string> names = a->basis_names();
  return make_algebra(a->field(), std::move(names), a->unit(), table);
}

// A (x) B with basis a_i (x) b_j at index i*dim(B)+j.
template <ScalarField F>
AlgebraPtr<F> tensor_algebra(const AlgebraPtr<F>& a, const AlgebraPtr<F>& b) {
  const F& fld = a->field();
  const std::size_t da = a->dim(), db = b->dim(), dim = da * db;
  auto table = detail::empty_table(fld, dim);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < db; ++j)
      for (std::size_t i2 = 0; i2 < da; ++i2)
        for (std::size_t j2 = 0; j2 < db; ++j2) {
          Vec<F>& out = table[i * db + j][i2 * db + j2];
          for (const auto& [k, c] : a->basis_mul(i, i2))
            for (const auto& [l, e] : b->basis_mul(j, j2))
              out[k * db + l] += c * e;
        }
  std::vector<std::string> names(dim);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < db; ++j)
      names[i * db + j] = a->basis_names()[i] + "⊗" + b->basis_names()[j];
  Vec<F> unit = zero_vec(fld, dim);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < db; ++j)
      unit[i * db + j] = a->unit()[i] * b->unit()[j];
  return make_algebra(fld, std::move(names), std::move(unit), table);
}

// A^e = A (x) A^op.  dim = dim(A)^2; basis a_i (x) a_j^op at i*dim(A)+j.
template <ScalarField F>
AlgebraPtr<F> enveloping_algebra(const AlgebraPtr<F>& a) {
  return tensor_algebra(a, opposite_algebra(a));
}

// Direct product A x B (componentwise operations).
template <ScalarField F>
struct ProductAlgebra {
  AlgebraPtr<F> alg;
  AlgMap<F> proj1, proj2;  // unital projections
};

template <ScalarField F>
ProductAlgebra<F> product_algebra(const AlgebraPtr<F>& a,
                                  const AlgebraPtr<F>& b) {
  const F& fld = a->field();
  const std::size_t da = a->dim(), db = b->dim(), dim = da + db;
  auto table = detail::empty_table(fld, dim);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j)
      for (const auto& [k, c] : a->basis_mul(i, j)) table[i][j][k] += c;
  for (std::size_t i = 0; i < db; ++i)
    for (std::size_t j = 0; j < db; ++j)
      for (const auto& [k, c] : b->basis_mul(i, j))
        table[da + i][da + j][da + k] += c;
  std::vector<std::string> names(dim);
  for (std::size_t i = 0; i < da; ++i) names[i] = "l." + a->basis_names()[i];
  for (std::size_t j = 0; j < db; ++j) names[da + j] = "r." + b->basis_names()[j];
  Vec<F> unit = zero_vec(fld, dim);
  for (std::size_t i = 0; i < da; ++i) unit[i] = a->unit()[i];
  for (std::size_t j = 0; j < db; ++j) unit[da + j] = b->unit()[j];
  AlgebraPtr<F> prod = make_algebra(fld, std::move(names), std::move(unit), table);
  Mat<F> p1(fld, dim, da), p2(fld, dim, db);
  for (std::size_t i = 0; i < da; ++i) p1.at(i, i) = fld.one();
  for (std::size_t j = 0; j < db; ++j) p2.at(da + j, j) = fld.one();
  return {prod, make_alg_map(prod, a, std::move(p1)),
          make_alg_map(prod, b, std::move(p2))};
}

// Subalgebra spanned by the given rows of an ambient algebra.  The rows must
// be closed under multiplication and contain the unit.
template <ScalarField F>
struct Subalgebra {
  AlgebraPtr<F> alg;
  Mat<F> inclusion;  // alg->dim() x ambient->dim()
};

template <ScalarField F>
Subalgebra<F> subalgebra_from_basis(const AlgebraPtr<F>& ambient,
                                    const std::vector<Vec<F>>& span_rows,
                                    const std::string& name_prefix = "f") {
  const F& fld = ambient->field();
  std::vector<Vec<F>> basis =
      span_rows.empty()
          ? span_rows
          : row_basis(Mat<F>::from_rows(fld, span_rows, ambient->dim()));
  const std::size_t n = basis.size();
  require(n > 0, ErrorCode::BadDimension, "subalgebra span is zero");
  Mat<F> basis_mat = Mat<F>::from_rows(fld, basis, ambient->dim());
  auto coords = [&](const Vec<F>& v) {
    auto c = solve_left(basis_mat, v);
    require(c.has_value(), ErrorCode::NotAMap,
            "span is not closed under multiplication");
    return *c;
  };
  auto table = detail::empty_table(fld, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      table[i][j] = coords(ambient->mul(basis[i], basis[j]));
  Vec<F> unit = coords(ambient->unit());
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) names[i] = name_prefix + std::to_string(i);
  AlgebraPtr<F> alg = make_algebra(fld, std::move(names), std::move(unit), table);
  return {alg, std::move(basis_mat)};
}

// Fiber product A x_B C of algebra maps f: A -> B, g: C -> B, realised as the
// equaliser subalgebra of A x C, with its two projections.
template <ScalarField F>
struct FiberProduct {
  AlgebraPtr<F> alg;
  AlgMap<F> to_first, to_second;
  Mat<F> inclusion;  // into the direct product A x C
  ProductAlgebra<F> ambient;
};

template <ScalarField F>
FiberProduct<F> fiber_product(const AlgMap<F>& f, const AlgMap<F>& g) {
  require(f.dst.get() == g.dst.get(), ErrorCode::BadDimension,
          "fiber product needs a common codomain");
  const F& fld = f.src->field();
  const std::size_t da = f.src->dim(), dc = g.src->dim();
  ProductAlgebra<F> prod = product_algebra(f.src, g.src);
  // (a, c) is in the fiber product iff a*f.m - c*g.m == 0.
  Mat<F> stacked(fld, da + dc, f.dst->dim());
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < f.dst->dim(); ++j)
      stacked.at(i, j) = f.m.at(i, j);
  for (std::size_t i = 0; i < dc; ++i)
    for (std::size_t j = 0; j < g.dst->dim(); ++j)
      stacked.at(da + i, j) = fld.zero() - g.m.at(i, j);
  std::vector<Vec<F>> basis = left_kernel(stacked);
  Subalgebra<F> sub = subalgebra_from_basis(prod.alg, basis);
  AlgMap<F> p1 = make_alg_map(sub.alg, f.src, sub.inclusion * prod.proj1.m);
  AlgMap<F> p2 = make_alg_map(sub.alg, g.src, sub.inclusion * prod.proj2.m);
  return {sub.alg, std::move(p1), std::move(p2), sub.inclusion, prod};
}

// Square-zero extension B (+) M for a B-bimodule given by raw action
// matrices: row convention, m * left_act[i] == b_i . m and
// m * right_act[i] == m . b_i.  Returns the extension with its projection to
// B (kernel M, M^2 = 0).
template <ScalarField F>
struct SquareZero {
  AlgebraPtr<F> alg;
  AlgMap<F> projection;             // onto B
  std::vector<Vec<F>> kernel_rows;  // canonical basis of the copy of M
};

template <ScalarField F>
SquareZero<F> square_zero_extension(const AlgebraPtr<F>& b, std::size_t dim_m,
                                    const std::vector<Mat<F>>& left_act,
                                    const std::vector<Mat<F>>& right_act,
                                    const std::string& m_prefix = "m") {
  const F& fld = b->field();
  const std::size_t db = b->dim(), dim = db + dim_m;
  require(left_act.size() == db && right_act.size() == db,
          ErrorCode::BadDimension, "need one action matrix per basis element");
  auto table = detail::empty_table(fld, dim);
  for (std::size_t i = 0; i < db; ++i)
    for (std::size_t j = 0; j < db; ++j)
      for (const auto& [k, c] : b->basis_mul(i, j)) table[i][j][k] += c;
  for (std::size_t i = 0; i < db; ++i)
    for (std::size_t j = 0; j < dim_m; ++j) {
      // b_i * m_j
      for (std::size_t k = 0; k < dim_m; ++k)
        table[i][db + j][db + k] = left_act[i].at(j, k);
      // m_j * b_i
      for (std::size_t k = 0; k < dim_m; ++k)
        table[db + j][i][db + k] = right_act[i].at(j, k);
    }
  std::vector<std::string> names(dim);
  for (std::size_t i = 0; i < db; ++i) names[i] = b->basis_names()[i];
  for (std::size_t j = 0; j < dim_m; ++j)
    names[db + j] = m_prefix + std::to_string(j);
  Vec<F> unit = zero_vec(fld, dim);
  for (std::size_t i = 0; i < db; ++i) unit[i] = b->unit()[i];
  AlgebraPtr<F> ext = make_algebra(fld, std::move(names), std::move(unit), table);
  Mat<F> proj(fld, dim, db);
  for (std::size_t i = 0; i < db; ++i) proj.at(i, i) = fld.one();
  std::vector<Vec<F>> ker;
  for (std::size_t j = 0; j < dim_m; ++j) {
    Vec<F> v = zero_vec(fld, dim);
    v[db + j] = fld.one();
    ker.push_back(v);
  }
  return {ext, make_alg_map(ext, b, std::move(proj)), std::move(ker)};
}

// Trivial square-zero extension B (+) B*eps with the regular bimodule.
template <ScalarField F>
SquareZero<F> trivial_square_zero(const AlgebraPtr<F>& b) {
  std::vector<Mat<F>> left, right;
  for (std::size_t i = 0; i < b->dim(); ++i) {
    left.push_back(b->left_mult(b->basis_elem(i)));
    right.push_back(b->right_mult(b->basis_elem(i)));
  }
  return square_zero_extension(b, b->dim(), left, right, "eps*");
}

// Quotient A / I by a two-sided ideal spanned by `ideal_rows`.
template <ScalarField F>
struct QuotientAlgebra {
  AlgebraPtr<F> alg;
  AlgMap<F> projection;  // A -> A/I
  Mat<F> section;        // linear section A/I -> A (standard complement)
};

template <ScalarField F>
QuotientAlgebra<F> quotient_algebra(const AlgebraPtr<F>& a,
                                    const std::vector<Vec<F>>& ideal_rows) {
  const F& fld = a->field();
  require(is_two_sided_ideal(*a, ideal_rows), ErrorCode::NotAMap,
          "span is not a two-sided ideal");
  std::vector<Vec<F>> ib =
      ideal_rows.empty()
          ? std::vector<Vec<F>>{}
          : row_basis(Mat<F>::from_rows(fld, ideal_rows, a->dim()));
  // Complement coordinates: everything that is not a pivot of the ideal RREF.
  std::vector<bool> is_pivot(a->dim(), false);
  std::vector<std::size_t> pivot_row(a->dim(), 0);
  for (std::size_t r = 0; r < ib.size(); ++r) {
    std::size_t c = 0;
    while (c < a->dim() && fld.is_zero(ib[r][c])) ++c;
    is_pivot[c] = true;
    pivot_row[c] = r;
  }
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < a->dim(); ++c)
    if (!is_pivot[c]) keep.push_back(c);
  const std::size_t q = keep.size();
  require(q > 0, ErrorCode::BadDimension, "quotient by the whole algebra");
  // reduce(v): subtract ideal rows to kill pivot coordinates, then read off
  // the surviving ones.
  auto reduce = [&](Vec<F> v) {
    for (std::size_t c = 0; c < a->dim(); ++c)
      if (is_pivot[c] && !fld.is_zero(v[c])) {
        typename F::Elem s = v[c];
        const Vec<F>& row = ib[pivot_row[c]];
        for (std::size_t j = 0; j < v.size(); ++j) v[j] -= s * row[j];
      }
    Vec<F> out(q, fld.zero());
    for (std::size_t t = 0; t < q; ++t) out[t] = v[keep[t]];
    return out;
  };
  auto table = detail::empty_table(fld, q);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < q; ++j)
      table[i][j] = reduce(a->mul(a->basis_elem(keep[i]), a->basis_elem(keep[j])));
  std::vector<std::string> names(q);
  for (std::size_t t = 0; t < q; ++t) names[t] = a->basis_names()[keep[t]];
  AlgebraPtr<F> quot = make_algebra(fld, std::move(names), reduce(a->unit()), table);
  Mat<F> proj(fld, a->dim(), q);
  for (std::size_t i = 0; i < a->dim(); ++i) proj.set_row(i, reduce(a->basis_elem(i)));
  Mat<F> section(fld, q, a->dim());
  for (std::size_t t = 0; t < q; ++t) section.at(t, keep[t]) = fld.one();
  return {quot, make_alg_map(a, quot, std::move(proj)), std::move(section)};
}

// A small generating set of A as a unital algebra, found greedily: keep
// adjoining the first basis element outside the subalgebra generated so far.
// Representation-theoretic checks (module validity, intertwining) only need
// to be verified on generators, which keeps the linear systems small.
template <ScalarField F>
std::vector<std::size_t> generating_set(const FinAlgebra<F>& a) {
  const F& fld = a.field();
  std::vector<Vec<F>> span{a.unit()};
  std::vector<std::size_t> gens;
  auto close = [&]() {
    bool grew = true;
    while (grew) {
      grew = false;
      std::vector<Vec<F>> snapshot = span;
      for (const auto& v : snapshot)
        for (const auto& w : snapshot) {
          Vec<F> prod = a.mul(v, w);
          if (!in_row_space(fld, span, prod)) {
            span.push_back(prod);
            grew = true;
          }
        }
      if (span.size() > 1)
        span = row_basis(Mat<F>::from_rows(fld, span, a.dim()));
    }
  };
  close();
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (in_row_space(fld, span, a.basis_elem(i))) continue;
    gens.push_back(i);
    span.push_back(a.basis_elem(i));
    close();
  }
  return gens;
}

// ---------------------------------------------------------------------------
// Finite enumeration support

// Visit every vector of F^n (F finite).  The callback may return false to
// stop early; the function returns false iff it was stopped.
template <ScalarField F>
bool for_each_vector(const F& fld, std::size_t n,
                     const std::function<bool(const Vec<F>&)>& visit) {
  require(fld.finite(), ErrorCode::Unsupported,
          "cannot enumerate vectors over an infinite field");
  const std::uint64_t q = fld.size();
  Vec<F> v = zero_vec(fld, n);
  std::vector<std::uint64_t> digits(n, 0);
  while (true) {
    if (!visit(v)) return false;
    std::size_t pos = 0;
    while (pos < n) {
      if (++digits[pos] < q) {
        v[pos] = fld.elem_at(digits[pos]);
        break;
      }
      digits[pos] = 0;
      v[pos] = fld.zero();
      ++pos;
    }
    if (pos == n) return true;
  }
}

}  // namespace ncm
