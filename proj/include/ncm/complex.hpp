#pragma once

// Bounded chain complexes of right modules (homological indexing, the
// differential lowers degree), chain maps, cones, shifts, homology, and the
// hom complex between two complexes (a cochain complex of plain vector
// spaces whose degree-r part collects the maps lowering degree by r).
//
// Conventions (fixed here once, used everywhere):
//   * shift(X, k)_n = X_{n-k}, with differential scaled by (-1)^k;
//   * cone(f)_n = Y_n (+) X_{n-1}, d(y, x) = (d y + f x, -d x);
//   * hom differential on a degree-r map f: (delta f)_n = f_n * dY - (-1)^r dX * f_{n-1}
//     (row-convention matrices, so "apply f then dY" is f * dY).
// A map is a quasi-isomorphism iff its cone is acyclic.

#include <optional>
#include <utility>
#include <vector>

#include "ncm/errors.hpp"
#include "ncm/field.hpp"
#include "ncm/la.hpp"
#include "ncm/module.hpp"

namespace ncm {

template <ScalarField F>
struct ChainComplex {
  AlgebraPtr<F> alg;
  int lo = 0, hi = -1;  // support [lo, hi]; empty if hi < lo
  std::vector<RightModule<F>> objects;  // objects[n - lo]
  // diff[k]: X_{lo+k+1} -> X_{lo+k}; size hi - lo (empty when a single level)
  std::vector<Mat<F>> diff;

  std::size_t len() const { return objects.size(); }
  bool in_support(int n) const { return n >= lo && n <= hi; }
  const RightModule<F>& object(int n) const { return objects[n - lo]; }
  std::size_t dim_at(int n) const { return in_support(n) ? object(n).dim : 0; }
  // matrix of d: X_n -> X_{n-1}; zero-shaped when out of range
  Mat<F> diff_from(int n) const {
    if (n - 1 < lo || n > hi) {
      const F& fld = alg->field();
      return Mat<F>(fld, dim_at(n), dim_at(n - 1));
    }
    return diff[n - 1 - lo];
  }
};

template <ScalarField F>
ChainComplex<F> make_chain_complex(AlgebraPtr<F> alg, int lo,
                                   std::vector<RightModule<F>> objects,
                                   std::vector<Mat<F>> diff) {
  require(!objects.empty(), ErrorCode::BadDimension, "empty complex support");
  require(diff.size() + 1 == objects.size(), ErrorCode::BadDimension,
          "need exactly one differential between consecutive degrees");
  ChainComplex<F> x{std::move(alg), lo, lo + static_cast<int>(objects.size()) - 1,
                    std::move(objects), std::move(diff)};
  for (std::size_t k = 0; k < x.diff.size(); ++k) {
    require(x.diff[k].rows() == x.objects[k + 1].dim &&
                x.diff[k].cols() == x.objects[k].dim,
            ErrorCode::BadDimension, "differential has wrong shape");
    require(intertwines(x.objects[k + 1], x.objects[k], x.diff[k]),
            ErrorCode::NotAMap, "differential is not a module map");
  }
  for (std::size_t k = 0; k + 1 < x.diff.size(); ++k)
    require((x.diff[k + 1] * x.diff[k]).is_zero(), ErrorCode::NotAComplex,
            "differential does not square to zero");
  return x;
}

// A single module placed in degree n.
template <ScalarField F>
ChainComplex<F> one_term_complex(AlgebraPtr<F> alg, RightModule<F> m, int n) {
  return make_chain_complex(std::move(alg), n, {std::move(m)}, {});
}

// Extend the support with zero modules so that [lo, hi] is covered.
template <ScalarField F>
ChainComplex<F> pad_complex(const ChainComplex<F>& x, int lo, int hi) {
  require(lo <= x.lo && hi >= x.hi, ErrorCode::BadDimension,
          "padding must enlarge the support");
  std::vector<RightModule<F>> objects;
  std::vector<Mat<F>> diff;
  for (int n = lo; n <= hi; ++n)
    objects.push_back(x.in_support(n) ? x.object(n) : zero_module(x.alg));
  for (int n = lo + 1; n <= hi; ++n) diff.push_back(x.diff_from(n));
  return ChainComplex<F>{x.alg, lo, hi, std::move(objects), std::move(diff)};
}

template <ScalarField F>
ChainComplex<F> shift_complex(const ChainComplex<F>& x, int k) {
  ChainComplex<F> y = x;
  y.lo += k;
  y.hi += k;
  if (k % 2 != 0) {
    const F& fld = x.alg->field();
    for (auto& d : y.diff) d = fld.from_int(-1) * d;
  }
  return y;
}

template <ScalarField F>
struct ChainMap {
  const ChainComplex<F>* src;
  const ChainComplex<F>* dst;
  // comps[n - src->lo]: X_n -> Y_n (shapes follow the two supports)
  std::vector<Mat<F>> comps;

  Mat<F> comp(int n) const {
    if (n < src->lo || n > src->hi)
      return Mat<F>(src->alg->field(), src->dim_at(n), dst->dim_at(n));
    return comps[n - src->lo];
  }
};

template <ScalarField F>
ChainMap<F> make_chain_map(const ChainComplex<F>& x, const ChainComplex<F>& y,
                           std::vector<Mat<F>> comps) {
  require(comps.size() == x.len(), ErrorCode::BadDimension,
          "need one component per source degree");
  ChainMap<F> f{&x, &y, std::move(comps)};
  for (int n = x.lo; n <= x.hi; ++n) {
    const Mat<F>& c = f.comps[n - x.lo];
    require(c.rows() == x.dim_at(n) && c.cols() == y.dim_at(n),
            ErrorCode::BadDimension, "chain-map component has wrong shape");
    if (x.dim_at(n) > 0 && y.dim_at(n) > 0)
      require(intertwines(x.object(n), y.object(n), c), ErrorCode::NotAMap,
              "chain-map component is not a module map");
    // commuting square: f then d  ==  d then f
    if (x.dim_at(n) > 0)
      require(c * y.diff_from(n) == x.diff_from(n) * f.comp(n - 1),
              ErrorCode::NotChainMap,
              "square at degree " + std::to_string(n) +
                  " does not commute with the differentials");
  }
  return f;
}

template <ScalarField F>
std::vector<Vec<F>> rows_of(const Mat<F>& m) {
  std::vector<Vec<F>> rows;
  rows.reserve(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(m.row(r));
  return rows;
}

// Homology at degree n, as a module (subquotient of X_n).
template <ScalarField F>
RightModule<F> homology_module(const ChainComplex<F>& x, int n) {
  if (!x.in_support(n) || x.dim_at(n) == 0) return zero_module(x.alg);
  const F& fld = x.alg->field();
  Mat<F> d_out = x.diff_from(n);
  std::vector<Vec<F>> cycles =
      d_out.cols() == 0
          ? [&] {
              std::vector<Vec<F>> all;
              for (std::size_t i = 0; i < x.dim_at(n); ++i)
                all.push_back(unit_row<F>(fld, x.dim_at(n), i));
              return all;
            }()
          : left_kernel(d_out);
  if (cycles.empty()) return zero_module(x.alg);
  Submodule<F> z = submodule(x.object(n), cycles, /*close=*/false);
  // boundaries, expressed inside the cycle submodule
  Mat<F> d_in = x.diff_from(n + 1);
  std::vector<Vec<F>> boundary_in_z;
  for (std::size_t r = 0; r < d_in.rows(); ++r) {
    if (is_zero_vec(fld, d_in.row(r))) continue;
    auto c = coords_in_basis(fld, rows_of(z.inclusion), d_in.row(r));
    require(c.has_value(), ErrorCode::InvariantViolation,
            "boundary is not a cycle");
    boundary_in_z.push_back(*c);
  }
  return quotient_module(z.mod, boundary_in_z).mod;
}

template <ScalarField F>
std::size_t homology_dim(const ChainComplex<F>& x, int n) {
  if (!x.in_support(n)) return 0;
  std::size_t zero_rank = rank(x.diff_from(n));
  std::size_t cycles = x.dim_at(n) - zero_rank;
  std::size_t boundaries = rank(x.diff_from(n + 1));
  return cycles - boundaries;
}

template <ScalarField F>
bool is_acyclic(const ChainComplex<F>& x) {
  for (int n = x.lo; n <= x.hi; ++n)
    if (homology_dim(x, n) != 0) return false;
  return true;
}

// cone(f)_n = Y_n (+) X_{n-1}; d(y, x) = (dy + f(x), -dx).
template <ScalarField F>
ChainComplex<F> cone(const ChainMap<F>& f) {
  const ChainComplex<F>& x = *f.src;
  const ChainComplex<F>& y = *f.dst;
  const F& fld = x.alg->field();
  int lo = std::min(y.lo, x.lo + 1), hi = std::max(y.hi, x.hi + 1);
  std::vector<RightModule<F>> objects;
  for (int n = lo; n <= hi; ++n) {
    RightModule<F> yn = y.in_support(n) ? y.object(n) : zero_module(y.alg);
    RightModule<F> xn1 =
        x.in_support(n - 1) ? x.object(n - 1) : zero_module(x.alg);
    objects.push_back(direct_sum(yn, xn1));
  }
  std::vector<Mat<F>> diff;
  for (int n = lo + 1; n <= hi; ++n) {
    std::size_t ry = y.dim_at(n), rx = x.dim_at(n - 1);
    std::size_t cy = y.dim_at(n - 1), cx = x.dim_at(n - 2);
    Mat<F> d(fld, ry + rx, cy + cx);
    Mat<F> dy = y.diff_from(n);
    for (std::size_t i = 0; i < ry; ++i)
      for (std::size_t j = 0; j < cy; ++j) d.at(i, j) = dy.at(i, j);
    Mat<F> fx = f.comp(n - 1);
    for (std::size_t i = 0; i < rx; ++i)
      for (std::size_t j = 0; j < cy; ++j) d.at(ry + i, j) = fx.at(i, j);
    Mat<F> dx = x.diff_from(n - 1);
    for (std::size_t i = 0; i < rx; ++i)
      for (std::size_t j = 0; j < cx; ++j)
        d.at(ry + i, cy + j) = fld.zero() - dx.at(i, j);
    diff.push_back(std::move(d));
  }
  return make_chain_complex(x.alg, lo, std::move(objects), std::move(diff));
}

template <ScalarField F>
bool is_quasi_iso(const ChainMap<F>& f) {
  return is_acyclic(cone(f));
}

// ---------------------------------------------------------------------------
// Cochain complexes of plain vector spaces (differential raises degree).

template <ScalarField F>
struct VecCochain {
  F fld;
  int lo = 0, hi = -1;
  std::vector<std::size_t> dims;  // dims[i] = dim C^{lo+i}
  std::vector<Mat<F>> d;          // d[i]: C^{lo+i} -> C^{lo+i+1}

  bool in_support(int i) const { return i >= lo && i <= hi; }
  std::size_t dim_at(int i) const { return in_support(i) ? dims[i - lo] : 0; }
  Mat<F> d_from(int i) const {
    if (i < lo || i >= hi) return Mat<F>(fld, dim_at(i), dim_at(i + 1));
    return d[i - lo];
  }
};

template <ScalarField F>
VecCochain<F> make_vec_cochain(const F& fld, int lo,
                               std::vector<std::size_t> dims,
                               std::vector<Mat<F>> d) {
  require(!dims.empty(), ErrorCode::BadDimension, "empty cochain support");
  require(d.size() + 1 == dims.size(), ErrorCode::BadDimension,
          "need one differential between consecutive degrees");
  VecCochain<F> c{fld, lo, lo + static_cast<int>(dims.size()) - 1,
                  std::move(dims), std::move(d)};
  for (std::size_t k = 0; k < c.d.size(); ++k)
    require(c.d[k].rows() == c.dims[k] && c.d[k].cols() == c.dims[k + 1],
            ErrorCode::BadDimension, "cochain differential has wrong shape");
  for (std::size_t k = 0; k + 1 < c.d.size(); ++k)
    require((c.d[k] * c.d[k + 1]).is_zero(), ErrorCode::NotAComplex,
            "cochain differential does not square to zero");
  return c;
}

template <ScalarField F>
std::size_t cohomology_dim(const VecCochain<F>& c, int i) {
  if (!c.in_support(i)) return 0;
  std::size_t cocycles = c.dim_at(i) - rank(c.d_from(i));
  std::size_t coboundaries = rank(c.d_from(i - 1));
  return cocycles - coboundaries;
}

template <ScalarField F>
std::vector<Vec<F>> cocycle_basis(const VecCochain<F>& c, int i) {
  if (!c.in_support(i)) return {};
  Mat<F> d = c.d_from(i);
  if (d.cols() == 0) {
    std::vector<Vec<F>> all;
    for (std::size_t k = 0; k < c.dim_at(i); ++k)
      all.push_back(unit_row<F>(c.fld, c.dim_at(i), k));
    return all;
  }
  return left_kernel(d);
}

template <ScalarField F>
std::vector<Vec<F>> coboundary_basis(const VecCochain<F>& c, int i) {
  if (!c.in_support(i) || !c.in_support(i - 1)) return {};
  return row_basis(c.d_from(i - 1));
}

// ---------------------------------------------------------------------------
// The hom complex HHom(X, Y): degree r collects maps lowering degree by r.

template <ScalarField F>
struct HomComplex {
  ChainComplex<F> x;  // owned copies: the hom complex outlives its operands
  ChainComplex<F> y;
  int lo = 0;                      // lowest hom degree, x.lo - y.hi
  std::vector<std::size_t> dims;   // dims[r - lo]
  VecCochain<F> cx;
  // components[r - lo]: list of (n, basis of Hom_A(X_n, Y_{n-r})); the
  // flattened coordinate order follows this list.
  std::vector<std::vector<std::pair<int, std::vector<Mat<F>>>>> components;

  // Reassemble per-degree matrices { n -> X_n -> Y_{n-r} } from coordinates.
  std::vector<std::pair<int, Mat<F>>> unflatten(int r, const Vec<F>& v) const {
    const F& fld = x.alg->field();
    std::vector<std::pair<int, Mat<F>>> out;
    std::size_t pos = 0;
    for (const auto& [n, basis] : components[r - lo]) {
      Mat<F> m(fld, x.dim_at(n), y.dim_at(n - r));
      for (const auto& b : basis) {
        if (!fld.is_zero(v[pos])) m = m + v[pos] * b;
        ++pos;
      }
      out.emplace_back(n, std::move(m));
    }
    return out;
  }

  // Express per-degree matrices in coordinates; the maps must lie in the
  // intertwiner spans.
  Vec<F> flatten(int r, const std::vector<std::pair<int, Mat<F>>>& maps) const {
    const F& fld = x.alg->field();
    Vec<F> v(dims[r - lo], fld.zero());
    std::size_t pos = 0;
    for (const auto& [n, basis] : components[r - lo]) {
      // locate the map for this n (zero if absent)
      Mat<F> target(fld, x.dim_at(n), y.dim_at(n - r));
      for (const auto& [m_n, m] : maps)
        if (m_n == n) target = m;
      if (!basis.empty()) {
        // solve sum c_k basis_k == target entrywise
        Mat<F> sys(fld, basis.size(), basis[0].rows() * basis[0].cols());
        for (std::size_t k = 0; k < basis.size(); ++k)
          for (std::size_t i = 0; i < basis[k].rows(); ++i)
            for (std::size_t j = 0; j < basis[k].cols(); ++j)
              sys.at(k, i * basis[k].cols() + j) = basis[k].at(i, j);
        Vec<F> rhs(target.rows() * target.cols(), fld.zero());
        for (std::size_t i = 0; i < target.rows(); ++i)
          for (std::size_t j = 0; j < target.cols(); ++j)
            rhs[i * target.cols() + j] = target.at(i, j);
        auto sol = solve_left(sys, rhs);
        require(sol.has_value(), ErrorCode::NotAMap,
                "map is not A-linear (outside the intertwiner span)");
        for (std::size_t k = 0; k < basis.size(); ++k, ++pos) v[pos] = (*sol)[k];
      }
    }
    return v;
  }
};

template <ScalarField F>
HomComplex<F> hom_complex(const ChainComplex<F>& x, const ChainComplex<F>& y) {
  const F& fld = x.alg->field();
  require(x.alg.get() == y.alg.get(), ErrorCode::AlgebraMismatch,
          "hom complex needs a common algebra");
  int lo = x.lo - y.hi, hi = x.hi - y.lo;
  HomComplex<F> h{x, y, lo, {}, VecCochain<F>{fld, 0, -1, {}, {}}, {}};
  for (int r = lo; r <= hi; ++r) {
    std::vector<std::pair<int, std::vector<Mat<F>>>> comp;
    std::size_t total = 0;
    for (int n = x.lo; n <= x.hi; ++n) {
      if (!y.in_support(n - r)) continue;
      if (x.dim_at(n) == 0 || y.dim_at(n - r) == 0) continue;
      std::vector<Mat<F>> basis = intertwiner_space(x.object(n), y.object(n - r));
      total += basis.size();
      comp.emplace_back(n, std::move(basis));
    }
    h.components.push_back(std::move(comp));
    h.dims.push_back(total);
  }
  const std::vector<std::size_t>& dims = h.dims;
  // differentials: delta(f)_n = f_n * dY_{n-r} - (-1)^r dX_n * f_{n-1}
  std::vector<Mat<F>> d;
  for (int r = lo; r < hi; ++r) {
    Mat<F> m(fld, dims[r - lo], dims[r + 1 - lo]);
    std::size_t pos = 0;
    for (const auto& [n, basis] : h.components[r - lo]) {
      for (const auto& b : basis) {
        // delta of the single-component map (n, b)
        std::vector<std::pair<int, Mat<F>>> df;
        // term f * dY lives at the same n
        if (y.in_support(n - r) && y.in_support(n - r - 1) && x.dim_at(n) > 0)
          df.emplace_back(n, b * y.diff_from(n - r));
        // term -(-1)^r dX * f lives at n+1: negate exactly when r is even
        if (x.in_support(n + 1) && y.in_support(n - r)) {
          Mat<F> t = x.diff_from(n + 1) * b;
          if (r % 2 == 0) t = fld.from_int(-1) * t;
          df.emplace_back(n + 1, std::move(t));
        }
        // merge duplicate degrees before flattening
        std::vector<std::pair<int, Mat<F>>> merged;
        for (auto& [dn, dm] : df) {
          bool found = false;
          for (auto& [mn, mm] : merged)
            if (mn == dn) {
              mm = mm + dm;
              found = true;
            }
          if (!found) merged.emplace_back(dn, std::move(dm));
        }
        Vec<F> coords = h.flatten(r + 1, merged);
        m.set_row(pos, coords);
        ++pos;
      }
    }
    d.push_back(std::move(m));
  }
  h.cx = make_vec_cochain(fld, lo, dims, std::move(d));
  return h;
}

}  // namespace ncm
