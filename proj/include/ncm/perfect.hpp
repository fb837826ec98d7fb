#pragma once

// Perfect-complex presentations over a structure-constant algebra.
//
//  * AlgBlock: a rectangular matrix with entries in the algebra.  An entry
//    acts on free column tuples by left multiplication, so a block commutes
//    with the right module structure and induces a genuine map of free right
//    modules.  Blocks are stored with rows indexed by the source copies and
//    columns by the target copies.
//  * PerfObject: a degree window of block sizes, one idempotent block per
//    degree and one differential block between consecutive degrees.  The
//    invariants e.e = e, d.d = 0 and d = e.d.e (compression by the
//    idempotents on both sides) are enforced at construction; `realize`
//    carves the image of each idempotent out of the free module and
//    re-verifies the squared differential on the realization.
//  * PerfMorphismComplex: for each degree r, the compressed block families
//    f = (f_n : degree n -> degree n+r), with differential
//        D(f) = d'.f - (-1)^r f.d.
//    Degree-zero cocycles are exactly chain maps of the realizations, and
//    the degree-zero cohomology counts them up to homotopy.
//  * lift_object: lifting a presentation backwards through a square-zero
//    surjection of algebras.  The idempotents always lift; an arbitrary
//    compressed lift of the differential fails to square to zero by a
//    kernel-valued degree -2 cocycle whose class is the exact obstruction.
//    When the class vanishes the defect is absorbed by a bounding family and
//    the corrected presentation is returned fully re-verified; homotopy
//    classes of lifts then form a torsor under the degree -1 cohomology of
//    the same kernel-valued complex.
//  * lift_homotopy_equivalence: given a presentation upstairs and an
//    equivalence from its image to a second presentation downstairs, both
//    the second presentation and the equivalence lift together; the two
//    correction equations are solved jointly and every identity is checked
//    exactly afterwards.
//
// Conventions:
//  * Applying first f and then g composes blockwise as
//        (f; g)(s, t) = sum_m g(m, t) * f(s, m),
//    the entry of the later map multiplying from the left.  This is forced
//    by letting entries act as left multiplications: it makes the induced
//    scalar operators compose in the row-vector order used everywhere else.
//  * The square block e embeds into the matrix algebra over A with the two
//    copy indices transposed; `matrix_elem_of` / `block_of_matrix_elem`
//    translate, and the induced operator agrees with matrix_left_operator.
//  * A family of degree r maps degree n to degree n + r.  Kernel-valued
//    families along a square-zero surjection are insensitive to every lift
//    choice (the kernel multiplies itself to zero), which is what makes the
//    obstruction class and the torsor rank canonical.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ncm/algebra.hpp"
#include "ncm/budget.hpp"
#include "ncm/complex.hpp"
#include "ncm/errors.hpp"
#include "ncm/field.hpp"
#include "ncm/idem.hpp"
#include "ncm/la.hpp"
#include "ncm/module.hpp"

namespace ncm {

// ---------------------------------------------------------------------------
// Rectangular blocks with algebra entries

template <ScalarField F>
struct AlgBlock {
  AlgebraPtr<F> alg;
  std::size_t rows = 0, cols = 0;
  std::vector<Vec<F>> ent;  // row-major; ent[r * cols + c] is an algebra element

  const Vec<F>& at(std::size_t r, std::size_t c) const { return ent[r * cols + c]; }
  Vec<F>& at(std::size_t r, std::size_t c) { return ent[r * cols + c]; }

  friend bool operator==(const AlgBlock& a, const AlgBlock& b) {
    if (a.alg.get() != b.alg.get() || a.rows != b.rows || a.cols != b.cols)
      return false;
    const F& fld = a.alg->field();
    for (std::size_t k = 0; k < a.ent.size(); ++k) {
      Vec<F> d = a.ent[k];
      sub_from(d, b.ent[k]);
      if (!is_zero_vec(fld, d)) return false;
    }
    return true;
  }
};

template <ScalarField F>
AlgBlock<F> alg_block_zero(const AlgebraPtr<F>& alg, std::size_t rows,
                           std::size_t cols) {
  return AlgBlock<F>{alg, rows, cols,
                     std::vector<Vec<F>>(rows * cols,
                                         zero_vec(alg->field(), alg->dim()))};
}

template <ScalarField F>
AlgBlock<F> make_alg_block(AlgebraPtr<F> alg, std::size_t rows, std::size_t cols,
                           std::vector<Vec<F>> ent) {
  require(ent.size() == rows * cols, ErrorCode::BadDimension,
          "a block needs one entry per cell");
  for (const Vec<F>& e : ent)
    require(e.size() == alg->dim(), ErrorCode::BadDimension,
            "a block entry must be an algebra element");
  return AlgBlock<F>{std::move(alg), rows, cols, std::move(ent)};
}

template <ScalarField F>
AlgBlock<F> alg_block_identity(const AlgebraPtr<F>& alg, std::size_t n) {
  AlgBlock<F> b = alg_block_zero(alg, n, n);
  for (std::size_t i = 0; i < n; ++i) b.at(i, i) = alg->unit();
  return b;
}

template <ScalarField F>
bool alg_block_is_zero(const AlgBlock<F>& b) {
  const F& fld = b.alg->field();
  for (const Vec<F>& e : b.ent)
    if (!is_zero_vec(fld, e)) return false;
  return true;
}

template <ScalarField F>
AlgBlock<F> alg_block_add(const AlgBlock<F>& a, const AlgBlock<F>& b) {
  require(a.alg.get() == b.alg.get(), ErrorCode::AlgebraMismatch,
          "block sum needs a common algebra");
  require(a.rows == b.rows && a.cols == b.cols, ErrorCode::BadDimension,
          "block sum needs equal shapes");
  AlgBlock<F> out = a;
  for (std::size_t k = 0; k < out.ent.size(); ++k) add_to(out.ent[k], b.ent[k]);
  return out;
}

template <ScalarField F>
AlgBlock<F> alg_block_sub(const AlgBlock<F>& a, const AlgBlock<F>& b) {
  require(a.alg.get() == b.alg.get(), ErrorCode::AlgebraMismatch,
          "block difference needs a common algebra");
  require(a.rows == b.rows && a.cols == b.cols, ErrorCode::BadDimension,
          "block difference needs equal shapes");
  AlgBlock<F> out = a;
  for (std::size_t k = 0; k < out.ent.size(); ++k) sub_from(out.ent[k], b.ent[k]);
  return out;
}

// Apply first f, then g.  The later map's entry multiplies from the left, so
// the induced operators on free modules compose in row-vector order.
template <ScalarField F>
AlgBlock<F> alg_block_then(const AlgBlock<F>& f, const AlgBlock<F>& g) {
  require(f.alg.get() == g.alg.get(), ErrorCode::AlgebraMismatch,
          "block composition needs a common algebra");
  require(f.cols == g.rows, ErrorCode::BadDimension,
          "block shapes do not compose");
  const F& fld = f.alg->field();
  AlgBlock<F> out = alg_block_zero(f.alg, f.rows, g.cols);
  for (std::size_t s = 0; s < f.rows; ++s)
    for (std::size_t m = 0; m < f.cols; ++m) {
      if (is_zero_vec(fld, f.at(s, m))) continue;
      for (std::size_t t = 0; t < g.cols; ++t) {
        if (is_zero_vec(fld, g.at(m, t))) continue;
        add_to(out.at(s, t), f.alg->mul(g.at(m, t), f.at(s, m)));
      }
    }
  return out;
}

// Entrywise image of a block under an algebra map.
template <ScalarField F>
AlgBlock<F> alg_block_apply(const AlgMap<F>& phi, const AlgBlock<F>& b) {
  require(b.alg.get() == phi.src.get(), ErrorCode::AlgebraMismatch,
          "the block is not defined over the source of the map");
  AlgBlock<F> out = alg_block_zero(phi.dst, b.rows, b.cols);
  for (std::size_t k = 0; k < b.ent.size(); ++k) out.ent[k] = b.ent[k] * phi.m;
  return out;
}

// The scalar operator induced on free modules: source copy s holding v goes
// to target copy t holding  b(s, t) * v.  Acts on row coordinates, source
// basis (copy, algebra basis) at copy*dim(A)+basis.
template <ScalarField F>
Mat<F> alg_block_operator(const AlgBlock<F>& b) {
  const F& fld = b.alg->field();
  const std::size_t da = b.alg->dim();
  Mat<F> out(fld, b.rows * da, b.cols * da);
  for (std::size_t s = 0; s < b.rows; ++s)
    for (std::size_t t = 0; t < b.cols; ++t) {
      if (is_zero_vec(fld, b.at(s, t))) continue;
      Mat<F> lm = b.alg->left_mult(b.at(s, t));
      for (std::size_t r = 0; r < da; ++r)
        for (std::size_t c = 0; c < da; ++c)
          out.at(s * da + r, t * da + c) = lm.at(r, c);
    }
  return out;
}

// A square block as an element of the matrix algebra over A.  The copy
// indices transpose: the matrix-algebra cell (k, l) holds the entry sending
// source copy l to target copy k, so the embedding reverses products while
// preserving idempotency and the induced operator.
template <ScalarField F>
Vec<F> matrix_elem_of(const AlgBlock<F>& b) {
  require(b.rows == b.cols, ErrorCode::BadDimension,
          "only square blocks embed into the matrix algebra");
  const std::size_t n = b.rows, da = b.alg->dim();
  Vec<F> y = zero_vec(b.alg->field(), n * n * da);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t u = 0; u < da; ++u)
        y[(k * n + l) * da + u] = b.at(l, k)[u];
  return y;
}

template <ScalarField F>
AlgBlock<F> block_of_matrix_elem(const AlgebraPtr<F>& alg, std::size_t n,
                                 const Vec<F>& y) {
  const std::size_t da = alg->dim();
  require(y.size() == n * n * da, ErrorCode::BadDimension,
          "matrix-algebra element has the wrong dimension");
  AlgBlock<F> b = alg_block_zero(alg, n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t u = 0; u < da; ++u)
        b.at(l, k)[u] = y[(k * n + l) * da + u];
  return b;
}

// ---------------------------------------------------------------------------
// Presentations

template <ScalarField F>
struct PerfObject {
  AlgebraPtr<F> alg;
  int lo = 0, hi = -1;              // degree window; empty if hi < lo
  std::vector<std::size_t> sizes;   // sizes[n - lo]; gaps inside carry zero
  std::vector<AlgBlock<F>> idem;    // idem[n - lo], square of size sizes[n - lo]
  std::vector<AlgBlock<F>> diff;    // diff[k]: block from degree lo+k+1 to lo+k

  std::size_t len() const { return sizes.size(); }
  bool in_window(int n) const { return n >= lo && n <= hi; }
  std::size_t size_at(int n) const { return in_window(n) ? sizes[n - lo] : 0; }

  AlgBlock<F> idem_at(int n) const {
    if (in_window(n)) return idem[n - lo];
    return alg_block_zero(alg, 0, 0);
  }
  // The block of d : degree n -> degree n - 1 (zero-shaped off the window).
  AlgBlock<F> diff_at(int n) const {
    if (n - 1 >= lo && n <= hi) return diff[n - 1 - lo];
    return alg_block_zero(alg, size_at(n), size_at(n - 1));
  }

  std::map<int, std::size_t> signature() const {
    std::map<int, std::size_t> s;
    for (int n = lo; n <= hi; ++n)
      if (size_at(n) > 0) s[n] = size_at(n);
    return s;
  }

  friend bool operator==(const PerfObject& a, const PerfObject& b) {
    return a.alg.get() == b.alg.get() && a.lo == b.lo && a.sizes == b.sizes &&
           a.idem == b.idem && a.diff == b.diff;
  }
};

namespace detail {

// Assemble the window layout without validating any invariant.  Used for
// in-progress lift data whose differential intentionally fails to square to
// zero; every public entry point validates through make_perf_object instead.
template <ScalarField F>
PerfObject<F> raw_object(AlgebraPtr<F> alg, const std::map<int, std::size_t>& signature,
                         const std::map<int, AlgBlock<F>>& idem,
                         const std::map<int, AlgBlock<F>>& diff) {
  PerfObject<F> p;
  p.alg = std::move(alg);
  std::map<int, std::size_t> sig;
  for (const auto& [n, sz] : signature)
    if (sz > 0) sig[n] = sz;
  if (sig.empty()) return p;
  p.lo = sig.begin()->first;
  p.hi = sig.rbegin()->first;
  for (int n = p.lo; n <= p.hi; ++n) {
    auto it = sig.find(n);
    p.sizes.push_back(it == sig.end() ? 0 : it->second);
  }
  for (int n = p.lo; n <= p.hi; ++n) {
    auto it = idem.find(n);
    p.idem.push_back(it == idem.end()
                         ? alg_block_zero(p.alg, p.size_at(n), p.size_at(n))
                         : it->second);
  }
  for (int n = p.lo + 1; n <= p.hi; ++n) {
    auto it = diff.find(n);
    p.diff.push_back(it == diff.end()
                         ? alg_block_zero(p.alg, p.size_at(n), p.size_at(n - 1))
                         : it->second);
  }
  return p;
}

}  // namespace detail

// Validating factory.  `repair` replaces each differential block by its
// compression e.d.e instead of rejecting uncompressed input; the remaining
// invariants are still enforced.
template <ScalarField F>
PerfObject<F> make_perf_object(AlgebraPtr<F> alg,
                               const std::map<int, std::size_t>& signature,
                               const std::map<int, AlgBlock<F>>& idem,
                               const std::map<int, AlgBlock<F>>& diff,
                               bool repair = false) {
  for (const auto& [n, b] : idem)
    require(b.alg.get() == alg.get(), ErrorCode::AlgebraMismatch,
            "idempotent block at degree " + std::to_string(n) +
                " lives over the wrong algebra");
  for (const auto& [n, b] : diff)
    require(b.alg.get() == alg.get(), ErrorCode::AlgebraMismatch,
            "differential block at degree " + std::to_string(n) +
                " lives over the wrong algebra");
  PerfObject<F> p = detail::raw_object(alg, signature, idem, diff);
  for (const auto& [n, sz] : signature) {
    if (sz == 0) continue;
    require(idem.count(n) == 1, ErrorCode::BadDimension,
            "missing the idempotent block at degree " + std::to_string(n));
  }
  for (const auto& [n, b] : idem)
    require(p.in_window(n) && b.rows == p.size_at(n) && b.cols == p.size_at(n),
            ErrorCode::BadDimension,
            "idempotent block at degree " + std::to_string(n) +
                " does not match the signature");
  for (int n = p.lo; n <= p.hi; ++n) {
    const AlgBlock<F>& e = p.idem[n - p.lo];
    require(e.rows == p.size_at(n) && e.cols == p.size_at(n),
            ErrorCode::BadDimension,
            "idempotent block at degree " + std::to_string(n) +
                " has the wrong shape");
    require(alg_block_then(e, e) == e, ErrorCode::NotIdempotent,
            "block at degree " + std::to_string(n) +
                " does not square to itself");
  }
  for (const auto& [n, b] : diff) {
    require(n > p.lo && n <= p.hi, ErrorCode::BadDimension,
            "differential block at degree " + std::to_string(n) +
                " sits outside the degree window");
    require(b.rows == p.size_at(n) && b.cols == p.size_at(n - 1),
            ErrorCode::BadDimension,
            "differential block at degree " + std::to_string(n) +
                " has the wrong shape");
  }
  for (int n = p.lo + 1; n <= p.hi; ++n) {
    AlgBlock<F>& d = p.diff[n - 1 - p.lo];
    AlgBlock<F> want =
        alg_block_then(alg_block_then(p.idem[n - p.lo], d), p.idem[n - 1 - p.lo]);
    if (repair) {
      d = std::move(want);
    } else {
      require(d == want, ErrorCode::InvariantViolation,
              "differential block at degree " + std::to_string(n) +
                  " is not compressed by the idempotents");
    }
  }
  for (int n = p.lo + 2; n <= p.hi; ++n)
    require(alg_block_is_zero(
                alg_block_then(p.diff[n - 1 - p.lo], p.diff[n - 2 - p.lo])),
            ErrorCode::NotAComplex,
            "differential blocks do not compose to zero at degree " +
                std::to_string(n));
  return p;
}

// Entrywise image of a presentation under an algebra map, revalidated.
template <ScalarField F>
PerfObject<F> map_object(const AlgMap<F>& phi, const PerfObject<F>& p) {
  require(p.alg.get() == phi.src.get(), ErrorCode::AlgebraMismatch,
          "the presentation is not defined over the source of the map");
  std::map<int, AlgBlock<F>> idem, diff;
  for (int n = p.lo; n <= p.hi; ++n) {
    if (p.size_at(n) > 0) idem[n] = alg_block_apply(phi, p.idem_at(n));
    if (n > p.lo && p.size_at(n) > 0 && p.size_at(n - 1) > 0)
      diff[n] = alg_block_apply(phi, p.diff_at(n));
  }
  return make_perf_object(phi.dst, p.signature(), idem, diff);
}

// ---------------------------------------------------------------------------
// Realization

namespace detail {

// The image of the idempotent inside the free module, as a canonical
// submodule of A^{size}.
template <ScalarField F>
Submodule<F> realized_term(const PerfObject<F>& p, int n) {
  Mat<F> op = alg_block_operator(p.idem_at(n));
  return submodule(free_module(p.alg, p.size_at(n)), rows_of(op),
                   /*close=*/false);
}

}  // namespace detail

template <ScalarField F>
ChainComplex<F> realize(const PerfObject<F>& p) {
  if (p.len() == 0) return one_term_complex(p.alg, zero_module(p.alg), 0);
  std::vector<Submodule<F>> subs;
  for (int n = p.lo; n <= p.hi; ++n) subs.push_back(detail::realized_term(p, n));
  std::vector<RightModule<F>> objects;
  for (const Submodule<F>& s : subs) objects.push_back(s.mod);
  std::vector<Mat<F>> diffs;
  for (int n = p.lo + 1; n <= p.hi; ++n) {
    Mat<F> full = alg_block_operator(p.diff_at(n));
    auto d = solve_left(subs[n - 1 - p.lo].inclusion,
                        subs[n - p.lo].inclusion * full);
    require(d.has_value(), ErrorCode::InvariantViolation,
            "the realized differential must land in the image of the idempotent");
    diffs.push_back(std::move(*d));
  }
  return make_chain_complex(p.alg, p.lo, std::move(objects), std::move(diffs));
}

// Chain-map components of a degree-zero block family between the two
// realizations, aligned to the common window [lo, hi].  The coordinates agree
// with `realize` because the carved submodules are canonical.
template <ScalarField F>
std::vector<Mat<F>> realized_family_components(
    const PerfObject<F>& p, const PerfObject<F>& q,
    const std::map<int, AlgBlock<F>>& fam, int lo, int hi) {
  require(p.alg.get() == q.alg.get(), ErrorCode::AlgebraMismatch,
          "realized components need a common algebra");
  std::vector<Mat<F>> comps;
  for (int n = lo; n <= hi; ++n) {
    Submodule<F> sp = detail::realized_term(p, n);
    Submodule<F> sq = detail::realized_term(q, n);
    auto it = fam.find(n);
    AlgBlock<F> b = it == fam.end()
                        ? alg_block_zero(p.alg, p.size_at(n), q.size_at(n))
                        : it->second;
    auto c = solve_left(sq.inclusion, sp.inclusion * alg_block_operator(b));
    require(c.has_value(), ErrorCode::InvariantViolation,
            "the realized component must land in the target image");
    comps.push_back(std::move(*c));
  }
  return comps;
}

// ---------------------------------------------------------------------------
// Morphism complexes

namespace detail {

// Flat coordinates of one graded piece: the blocks run through `degrees` in
// order, each row-major with the algebra coordinates innermost, so the entry
// (s, t) of block n starts at offset(n) + (s * cols + t) * dim(A).
struct FamilyLayout {
  int shift = 0;  // family degree r: blocks map degree n to degree n + r
  std::vector<int> degrees;
  std::vector<std::size_t> src_sizes, dst_sizes, offsets;
  std::size_t total = 0;
};

template <ScalarField F>
Vec<F> pack_family(const F& fld, std::size_t da, const FamilyLayout& lay,
                   const std::map<int, AlgBlock<F>>& fam) {
  Vec<F> v = zero_vec(fld, lay.total);
  for (const auto& [n, b] : fam) {
    auto it = std::find(lay.degrees.begin(), lay.degrees.end(), n);
    if (it == lay.degrees.end()) {
      require(alg_block_is_zero(b), ErrorCode::BadDimension,
              "a family block sits at a degree without components");
      continue;
    }
    const std::size_t k = static_cast<std::size_t>(it - lay.degrees.begin());
    require(b.rows == lay.src_sizes[k] && b.cols == lay.dst_sizes[k],
            ErrorCode::BadDimension,
            "family block at degree " + std::to_string(n) +
                " has the wrong shape");
    for (std::size_t s = 0; s < b.rows; ++s)
      for (std::size_t t = 0; t < b.cols; ++t)
        for (std::size_t u = 0; u < da; ++u)
          v[lay.offsets[k] + (s * b.cols + t) * da + u] = b.at(s, t)[u];
  }
  return v;
}

template <ScalarField F>
std::map<int, AlgBlock<F>> unpack_family(const AlgebraPtr<F>& alg,
                                         const FamilyLayout& lay,
                                         const Vec<F>& v) {
  const std::size_t da = alg->dim();
  std::map<int, AlgBlock<F>> fam;
  for (std::size_t k = 0; k < lay.degrees.size(); ++k) {
    AlgBlock<F> b = alg_block_zero(alg, lay.src_sizes[k], lay.dst_sizes[k]);
    for (std::size_t s = 0; s < b.rows; ++s)
      for (std::size_t t = 0; t < b.cols; ++t)
        for (std::size_t u = 0; u < da; ++u)
          b.at(s, t)[u] = v[lay.offsets[k] + (s * b.cols + t) * da + u];
    fam[lay.degrees[k]] = std::move(b);
  }
  return fam;
}

// The stored block of a family, or a zero-shaped block off its support.
template <ScalarField F>
AlgBlock<F> family_block(const std::map<int, AlgBlock<F>>& fam,
                         const PerfObject<F>& src, const PerfObject<F>& dst,
                         int shift, int n) {
  auto it = fam.find(n);
  if (it != fam.end()) return it->second;
  return alg_block_zero(src.alg, src.size_at(n), dst.size_at(n + shift));
}

}  // namespace detail

template <ScalarField F>
struct PerfMorphismComplex {
  PerfObject<F> src, dst;  // owned copies of the two presentations
  int lo = 0, hi = 0;      // family degrees r covered by the layouts
  std::vector<detail::FamilyLayout> layouts;  // layouts[r - lo]
  std::vector<std::vector<Vec<F>>> basis;     // compressed-family bases
  VecCochain<F> cochain;                      // reindexed by k = -r

  std::size_t dim(int r) const { return cochain.dim_at(-r); }
  std::size_t cohomology_at(int r) const { return cohomology_dim(cochain, -r); }
  // Chain maps of the realizations modulo homotopy.
  std::size_t homotopy_classes() const { return cohomology_dim(cochain, 0); }

  // Coordinates of a compressed family in the degree-r component basis.
  std::optional<Vec<F>> coords_of(int r,
                                  const std::map<int, AlgBlock<F>>& fam) const {
    const F& fld = src.alg->field();
    for (const auto& [n, b] : fam)
      require(b.alg.get() == src.alg.get(), ErrorCode::AlgebraMismatch,
              "family block lives over the wrong algebra");
    if (r < lo || r > hi) {
      for (const auto& [n, b] : fam)
        if (!alg_block_is_zero(b)) return std::nullopt;
      return Vec<F>{};
    }
    Vec<F> flat =
        detail::pack_family(fld, src.alg->dim(), layouts[r - lo], fam);
    return coords_in_basis(fld, basis[r - lo], flat);
  }

  std::map<int, AlgBlock<F>> family_of(int r, const Vec<F>& coords) const {
    if (r < lo || r > hi) {
      require(coords.empty(), ErrorCode::BadDimension,
              "no components at this family degree");
      return {};
    }
    const std::vector<Vec<F>>& bas = basis[r - lo];
    require(coords.size() == bas.size(), ErrorCode::BadDimension,
            "family coordinates have the wrong dimension");
    const F& fld = src.alg->field();
    Vec<F> flat = zero_vec(fld, layouts[r - lo].total);
    for (std::size_t k = 0; k < bas.size(); ++k)
      add_to(flat, scaled(bas[k], coords[k]));
    return detail::unpack_family(src.alg, layouts[r - lo], flat);
  }

  bool is_cycle(int r, const std::map<int, AlgBlock<F>>& fam) const {
    auto c = coords_of(r, fam);
    require(c.has_value(), ErrorCode::BadDimension,
            "the family is not a compressed morphism family");
    if (!cochain.in_support(-r)) return true;
    return is_zero_vec(src.alg->field(), *c * cochain.d_from(-r));
  }
};

namespace detail {

// The differential D(f) = d_dst . f - (-1)^r f . d_src of a degree-r family.
template <ScalarField F>
std::map<int, AlgBlock<F>> family_differential(
    const PerfObject<F>& p, const PerfObject<F>& q, int r,
    const std::map<int, AlgBlock<F>>& fam) {
  std::map<int, AlgBlock<F>> out;
  for (int n = p.lo; n <= p.hi; ++n) {
    if (p.size_at(n) == 0 || q.size_at(n + r - 1) == 0) continue;
    AlgBlock<F> fn = family_block(fam, p, q, r, n);
    AlgBlock<F> fprev = family_block(fam, p, q, r, n - 1);
    AlgBlock<F> term1 = alg_block_then(fn, q.diff_at(n + r));
    AlgBlock<F> term2 = alg_block_then(p.diff_at(n), fprev);
    out[n] = (r % 2 == 0) ? alg_block_sub(term1, term2)
                          : alg_block_add(term1, term2);
  }
  return out;
}

// Families of block maps between two presentations with entries drawn from a
// given subspace of the algebra (empty span means the whole algebra),
// compressed by the two idempotent systems.  The construction only uses the
// compression and the differential formula, so it accepts in-progress lift
// data: with kernel-valued entries along a square-zero surjection the
// differential squares to zero even when d.d of the data itself does not.
template <ScalarField F>
PerfMorphismComplex<F> family_complex(const PerfObject<F>& p,
                                      const PerfObject<F>& q,
                                      const std::vector<Vec<F>>& entry_span) {
  require(p.alg.get() == q.alg.get(), ErrorCode::AlgebraMismatch,
          "a morphism complex needs a common algebra");
  const F& fld = p.alg->field();
  const std::size_t da = p.alg->dim();
  std::vector<Vec<F>> entries = entry_span;
  if (entries.empty())
    for (std::size_t u = 0; u < da; ++u)
      entries.push_back(unit_row<F>(fld, da, u));

  PerfMorphismComplex<F> mc{p, q, 0, 0, {}, {}, VecCochain<F>{fld, 0, -1, {}, {}}};
  const bool empty = p.len() == 0 || q.len() == 0;
  if (!empty) {
    mc.lo = q.lo - p.hi;
    mc.hi = q.hi - p.lo;
  }

  for (int r = mc.lo; r <= mc.hi; ++r) {
    FamilyLayout lay;
    lay.shift = r;
    if (!empty)
      for (int n = p.lo; n <= p.hi; ++n) {
        const std::size_t is = p.size_at(n), js = q.size_at(n + r);
        if (is == 0 || js == 0) continue;
        lay.degrees.push_back(n);
        lay.src_sizes.push_back(is);
        lay.dst_sizes.push_back(js);
        lay.offsets.push_back(lay.total);
        lay.total += is * js * da;
      }
    // span of the compressed single-entry families
    std::vector<Vec<F>> rows;
    for (std::size_t k = 0; k < lay.degrees.size(); ++k) {
      const int n = lay.degrees[k];
      for (std::size_t s = 0; s < lay.src_sizes[k]; ++s)
        for (std::size_t t = 0; t < lay.dst_sizes[k]; ++t)
          for (const Vec<F>& kap : entries) {
            AlgBlock<F> g =
                alg_block_zero(p.alg, lay.src_sizes[k], lay.dst_sizes[k]);
            g.at(s, t) = kap;
            AlgBlock<F> sg = alg_block_then(alg_block_then(p.idem_at(n), g),
                                            q.idem_at(n + r));
            if (alg_block_is_zero(sg)) continue;
            Vec<F> row = zero_vec(fld, lay.total);
            for (std::size_t ss = 0; ss < sg.rows; ++ss)
              for (std::size_t tt = 0; tt < sg.cols; ++tt)
                for (std::size_t u = 0; u < da; ++u)
                  row[lay.offsets[k] + (ss * sg.cols + tt) * da + u] =
                      sg.at(ss, tt)[u];
            rows.push_back(std::move(row));
          }
    }
    if (!rows.empty())
      rows = row_basis(Mat<F>::from_rows(fld, rows, lay.total));
    mc.layouts.push_back(std::move(lay));
    mc.basis.push_back(std::move(rows));
  }

  // the cochain runs over k = -r, so the list of differentials descends in r
  std::vector<std::size_t> dims_c;
  std::vector<Mat<F>> d_c;
  for (int r = mc.hi; r >= mc.lo; --r) dims_c.push_back(mc.basis[r - mc.lo].size());
  for (int r = mc.hi; r > mc.lo; --r) {
    const std::vector<Vec<F>>& bas = mc.basis[r - mc.lo];
    const std::vector<Vec<F>>& low = mc.basis[r - 1 - mc.lo];
    Mat<F> d(fld, bas.size(), low.size());
    for (std::size_t i = 0; i < bas.size(); ++i) {
      std::map<int, AlgBlock<F>> fam =
          unpack_family(p.alg, mc.layouts[r - mc.lo], bas[i]);
      std::map<int, AlgBlock<F>> img = family_differential(p, q, r, fam);
      Vec<F> flat = pack_family(fld, da, mc.layouts[r - 1 - mc.lo], img);
      auto coords = coords_in_basis(fld, low, flat);
      require(coords.has_value(), ErrorCode::InvariantViolation,
              "the morphism differential must preserve the compressed families");
      d.set_row(i, *coords);
    }
    d_c.push_back(std::move(d));
  }
  mc.cochain = make_vec_cochain(fld, -mc.hi, std::move(dims_c), std::move(d_c));
  return mc;
}

}  // namespace detail

template <ScalarField F>
PerfMorphismComplex<F> morphism_complex(const PerfObject<F>& p,
                                        const PerfObject<F>& q) {
  return detail::family_complex(p, q, {});
}

// ---------------------------------------------------------------------------
// Lifting along a square-zero surjection

template <ScalarField F>
struct PerfLiftOutcome {
  std::optional<PerfObject<F>> object;   // engaged when the obstruction vanishes
  std::map<int, AlgBlock<F>> e_lift;     // lifted idempotent blocks
  std::map<int, AlgBlock<F>> delta_lift; // compressed, uncorrected lift of d
  std::map<int, AlgBlock<F>> defect;     // its square, keyed by source degree
  PerfMorphismComplex<F> twisted;        // kernel-valued endomorphism families
  Vec<F> defect_coords;                  // the defect in the degree -2 basis
  Vec<F> obstruction_class;              // canonical representative mod boundaries
  std::size_t obstruction_dim = 0;       // cohomology dimension at degree -2
  std::size_t torsor_rank = 0;           // cohomology dimension at degree -1

  bool lifted() const { return object.has_value(); }
};

namespace detail {

// Canonical ambient representative of v modulo the row space of m.
template <ScalarField F>
Vec<F> mod_rows(const F& fld, const Mat<F>& m, const Vec<F>& v) {
  std::vector<Vec<F>> rows;
  for (std::size_t r = 0; r < m.rows(); ++r)
    if (!is_zero_vec(fld, m.row(r))) rows.push_back(m.row(r));
  if (rows.empty() || v.empty()) return v;
  CosetSpace<F> cs(fld, v.size(), rows);
  return cs.lift(cs.reduce(v));
}

template <ScalarField F>
bool vec_equal(const F& fld, const Vec<F>& a, const Vec<F>& b) {
  if (a.size() != b.size()) return false;
  Vec<F> d = a;
  sub_from(d, b);
  return is_zero_vec(fld, d);
}

// A preimage of an algebra element, optionally blurred by kernel noise.
template <ScalarField F>
Vec<F> preimage_of(const AlgMap<F>& phi, const std::vector<Vec<F>>& ker,
                   const Vec<F>& x, std::mt19937_64* rng) {
  auto y = solve_left(phi.m, x);
  require(y.has_value(), ErrorCode::InvariantViolation,
          "every element must have a preimage under a surjection");
  if (rng != nullptr)
    for (const Vec<F>& k : ker)
      add_to(*y, scaled(k, phi.src->field().from_int(
                               static_cast<int>((*rng)() % 5))));
  return *y;
}

// Lift one idempotent block through the matrix extension of phi.  With a
// seed the starting preimage is blurred before the idempotent-refinement
// iteration; the result is still an exact idempotent lift.
template <ScalarField F>
AlgBlock<F> lift_idem_block(const AlgMap<F>& phi, const AlgBlock<F>& e,
                            std::mt19937_64* rng) {
  const std::size_t n = e.rows;
  if (n == 0) return alg_block_zero(phi.src, 0, 0);
  AlgebraPtr<F> msrc = matrix_algebra(phi.src, n);
  AlgebraPtr<F> mdst = matrix_algebra(phi.dst, n);
  AlgMap<F> mphi = matrix_map(phi, n, msrc, mdst);
  Vec<F> target = matrix_elem_of(e);
  if (rng == nullptr)
    return block_of_matrix_elem(phi.src, n, lift_idempotent(mphi, target));
  const F& fld = phi.src->field();
  Vec<F> y = preimage_of(mphi, kernel_rows(mphi), target, rng);
  for (int step = 0; step < 64 && !msrc->is_idempotent(y); ++step) {
    Vec<F> y2 = msrc->mul(y, y);
    Vec<F> y3 = msrc->mul(y2, y);
    y = scaled(y2, fld.from_int(3));
    sub_from(y, scaled(y3, fld.from_int(2)));
  }
  require(msrc->is_idempotent(y), ErrorCode::InvariantViolation,
          "the idempotent refinement must converge over a nilpotent kernel");
  require(vec_equal(fld, y * mphi.m, target), ErrorCode::InvariantViolation,
          "the refined idempotent must still reduce to the original");
  return block_of_matrix_elem(phi.src, n, y);
}

}  // namespace detail

// Lift a presentation backwards through a square-zero surjection.  The
// idempotents lift exactly; the compressed lift of the differential squares
// to a kernel-valued degree -2 cocycle.  Its class modulo boundaries is
// independent of every arbitrary choice (kernel-valued families do not feel
// them), so a nonzero class reports genuine obstruction; a zero class is
// absorbed and the corrected presentation is returned fully re-verified.
// A nonzero seed blurs all preimage choices, for checking that independence.
template <ScalarField F>
PerfLiftOutcome<F> lift_object(const AlgMap<F>& phi, const PerfObject<F>& q,
                               std::uint64_t seed = 0) {
  require(q.alg.get() == phi.dst.get(), ErrorCode::AlgebraMismatch,
          "the presentation is not defined over the target of the map");
  require(is_surjective(phi), ErrorCode::NotSurjective,
          "lifting needs a surjective algebra map");
  std::vector<Vec<F>> ker = kernel_rows(phi);
  require(detail::kernel_is_square_zero(*phi.src, ker),
          ErrorCode::KernelNotSquareZero,
          "lifting needs a square-zero kernel");
  const F& fld = phi.src->field();
  std::mt19937_64 rng(seed);
  std::mt19937_64* noise = seed == 0 ? nullptr : &rng;

  std::map<int, AlgBlock<F>> e_lift, d_lift;
  for (int n = q.lo; n <= q.hi; ++n)
    if (q.size_at(n) > 0)
      e_lift[n] = detail::lift_idem_block(phi, q.idem_at(n), noise);
  PerfObject<F> stage =
      detail::raw_object(phi.src, q.signature(), e_lift, {});
  for (int n = q.lo + 1; n <= q.hi; ++n) {
    if (q.size_at(n) == 0 || q.size_at(n - 1) == 0) continue;
    AlgBlock<F> d0 = alg_block_zero(phi.src, q.size_at(n), q.size_at(n - 1));
    for (std::size_t s = 0; s < d0.rows; ++s)
      for (std::size_t t = 0; t < d0.cols; ++t)
        d0.at(s, t) = detail::preimage_of(phi, ker, q.diff_at(n).at(s, t), noise);
    d_lift[n] = alg_block_then(alg_block_then(stage.idem_at(n), d0),
                               stage.idem_at(n - 1));
    require(alg_block_apply(phi, d_lift[n]) == q.diff_at(n),
            ErrorCode::InvariantViolation,
            "the compressed lift must still reduce to the differential");
  }
  stage = detail::raw_object(phi.src, q.signature(), e_lift, d_lift);

  std::map<int, AlgBlock<F>> defect;
  for (int n = stage.lo + 2; n <= stage.hi; ++n) {
    if (stage.size_at(n) == 0 || stage.size_at(n - 2) == 0) continue;
    defect[n] = alg_block_then(stage.diff_at(n), stage.diff_at(n - 1));
  }

  PerfLiftOutcome<F> out{std::nullopt,
                         e_lift,
                         d_lift,
                         defect,
                         detail::family_complex(stage, stage, ker),
                         {},
                         {},
                         0,
                         0};
  out.obstruction_dim = cohomology_dim(out.twisted.cochain, 2);
  out.torsor_rank = cohomology_dim(out.twisted.cochain, 1);

  auto kap = out.twisted.coords_of(-2, defect);
  require(kap.has_value(), ErrorCode::InvariantViolation,
          "the defect must be a kernel-valued compressed family");
  out.defect_coords = *kap;
  Mat<F> bnd = out.twisted.cochain.d_from(1);  // degree -1 -> degree -2
  out.obstruction_class = detail::mod_rows(fld, bnd, out.defect_coords);

  if (is_zero_vec(fld, out.obstruction_class)) {
    std::map<int, AlgBlock<F>> corrected = d_lift;
    if (!is_zero_vec(fld, out.defect_coords)) {
      auto h = solve_left(bnd, out.defect_coords);
      require(h.has_value(), ErrorCode::InvariantViolation,
              "a vanishing obstruction class must bound");
      std::map<int, AlgBlock<F>> hfam = out.twisted.family_of(-1, *h);
      for (auto& [n, d] : corrected)
        d = alg_block_sub(d, detail::family_block(hfam, stage, stage, -1, n));
    }
    out.object = make_perf_object(phi.src, q.signature(), e_lift, corrected);
    require(map_object(phi, *out.object) == q, ErrorCode::InvariantViolation,
            "the corrected lift must reduce to the original presentation");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Census of lifts over a finite field

template <ScalarField F>
struct LiftCensus {
  std::size_t lifts = 0;                // presentations of the base lifting the data
  std::vector<PerfObject<F>> classes;   // one verified representative per homotopy class
};

// Enumerate every kernel-valued correction of the base differential lift and
// keep those whose blocks literally compose to zero; two lifts land in the
// same class when their difference bounds, which matches conjugating by a
// unit congruent to the identity.  Works over finite scalar fields; over an
// infinite field the torsor is only reported through its rank.
template <ScalarField F>
LiftCensus<F> count_lift_classes(const PerfLiftOutcome<F>& out, Budget& budget) {
  const PerfObject<F>& stage = out.twisted.src;
  const F& fld = stage.alg->field();
  require(fld.finite(), ErrorCode::Unsupported,
          "the lift census needs a finite scalar field");
  const std::size_t dim1 = out.twisted.dim(-1);
  Mat<F> lin = out.twisted.cochain.d_from(1);   // degree -1 -> degree -2
  Mat<F> bnd0 = out.twisted.cochain.d_from(0);  // degree 0 -> degree -1

  LiftCensus<F> census;
  std::vector<Vec<F>> seen;
  for_each_vector(fld, dim1, [&](const Vec<F>& c) {
    budget.tick();
    std::map<int, AlgBlock<F>> h = out.twisted.family_of(-1, c);
    std::map<int, AlgBlock<F>> cand;
    for (int n = stage.lo + 1; n <= stage.hi; ++n) {
      if (stage.size_at(n) == 0 || stage.size_at(n - 1) == 0) continue;
      cand[n] = alg_block_sub(
          detail::family_block(out.delta_lift, stage, stage, -1, n),
          detail::family_block(h, stage, stage, -1, n));
    }
    bool flat = true;
    for (int n = stage.lo + 2; n <= stage.hi && flat; ++n) {
      if (stage.size_at(n) == 0 || stage.size_at(n - 2) == 0) continue;
      flat = alg_block_is_zero(
          alg_block_then(detail::family_block(cand, stage, stage, -1, n),
                         detail::family_block(cand, stage, stage, -1, n - 1)));
    }
    // over a square-zero kernel the literal condition must agree with the
    // linear one; a mismatch would mean the calculus above is wrong
    bool linear = detail::vec_equal(fld, c * lin, out.defect_coords);
    require(flat == linear, ErrorCode::InvariantViolation,
            "the quadratic and linear lift conditions must agree");
    if (!flat) return true;
    ++census.lifts;
    Vec<F> key = detail::mod_rows(fld, bnd0, c);
    for (const Vec<F>& s : seen)
      if (detail::vec_equal(fld, s, key)) return true;
    seen.push_back(std::move(key));
    census.classes.push_back(
        make_perf_object(stage.alg, stage.signature(), out.e_lift, cand));
    return true;
  });
  return census;
}

// ---------------------------------------------------------------------------
// Homotopy equivalence, exhaustively over a finite field

// Two presentations are equivalent when some degree-zero cocycle pair
// composes to the identity up to boundaries on both sides.  The left factor
// is enumerated; the right factor is then a linear problem.
template <ScalarField F>
bool are_homotopy_equivalent(const PerfObject<F>& p, const PerfObject<F>& q,
                             Budget& budget) {
  require(p.alg.get() == q.alg.get(), ErrorCode::AlgebraMismatch,
          "equivalence needs a common algebra");
  const F& fld = p.alg->field();
  require(fld.finite(), ErrorCode::Unsupported,
          "the equivalence search needs a finite scalar field");
  PerfMorphismComplex<F> mc_pq = morphism_complex(p, q);
  PerfMorphismComplex<F> mc_qp = morphism_complex(q, p);
  PerfMorphismComplex<F> end_p = morphism_complex(p, p);
  PerfMorphismComplex<F> end_q = morphism_complex(q, q);

  std::vector<Vec<F>> z1 = cocycle_basis(mc_pq.cochain, 0);
  std::vector<Vec<F>> z2 = cocycle_basis(mc_qp.cochain, 0);

  // identities of the two presentations, normalized modulo boundaries
  Mat<F> bp = end_p.cochain.d_from(-1);
  Mat<F> bq = end_q.cochain.d_from(-1);
  std::map<int, AlgBlock<F>> idp, idq;
  for (int n = p.lo; n <= p.hi; ++n)
    if (p.size_at(n) > 0) idp[n] = p.idem_at(n);
  for (int n = q.lo; n <= q.hi; ++n)
    if (q.size_at(n) > 0) idq[n] = q.idem_at(n);
  auto idp_c = end_p.coords_of(0, idp);
  auto idq_c = end_q.coords_of(0, idq);
  require(idp_c.has_value() && idq_c.has_value(), ErrorCode::InvariantViolation,
          "the identity family must be a compressed family");
  Vec<F> tgt_p = detail::mod_rows(fld, bp, *idp_c);
  Vec<F> tgt_q = detail::mod_rows(fld, bq, *idq_c);
  Vec<F> rhs = tgt_p;
  rhs.insert(rhs.end(), tgt_q.begin(), tgt_q.end());

  bool found = false;
  for_each_vector(fld, z1.size(), [&](const Vec<F>& c1) {
    budget.tick();
    std::map<int, AlgBlock<F>> theta;
    {
      Vec<F> tc = zero_vec(fld, mc_pq.dim(0));
      for (std::size_t k = 0; k < z1.size(); ++k) add_to(tc, scaled(z1[k], c1[k]));
      theta = mc_pq.family_of(0, tc);
    }
    // one row per candidate-inverse basis cocycle
    Mat<F> sys(fld, z2.size(), rhs.size());
    for (std::size_t k = 0; k < z2.size(); ++k) {
      std::map<int, AlgBlock<F>> psi = mc_qp.family_of(0, z2[k]);
      std::map<int, AlgBlock<F>> tp, pt;
      for (int n = p.lo; n <= p.hi; ++n)
        if (p.size_at(n) > 0)
          tp[n] = alg_block_then(detail::family_block(theta, p, q, 0, n),
                                 detail::family_block(psi, q, p, 0, n));
      for (int n = q.lo; n <= q.hi; ++n)
        if (q.size_at(n) > 0)
          pt[n] = alg_block_then(detail::family_block(psi, q, p, 0, n),
                                 detail::family_block(theta, p, q, 0, n));
      auto tp_c = end_p.coords_of(0, tp);
      auto pt_c = end_q.coords_of(0, pt);
      require(tp_c.has_value() && pt_c.has_value(),
              ErrorCode::InvariantViolation,
              "composites of compressed families must stay compressed");
      Vec<F> row = detail::mod_rows(fld, bp, *tp_c);
      Vec<F> qq = detail::mod_rows(fld, bq, *pt_c);
      row.insert(row.end(), qq.begin(), qq.end());
      sys.set_row(k, row);
    }
    if (solve_left(sys, rhs).has_value()) {
      found = true;
      return false;
    }
    return true;
  });
  return found;
}

// ---------------------------------------------------------------------------
// Lifting a homotopy equivalence together with its target

template <ScalarField F>
struct PerfEquivalenceLift {
  PerfObject<F> object;              // the lifted target presentation
  std::map<int, AlgBlock<F>> theta;  // the lifted comparison family
};

// Given p upstairs and an equivalence theta : image of p -> q downstairs,
// produce a lift of q together with a lifted comparison family that is again
// a chain map and again an equivalence.  The two defects (the squared
// differential lift and the commutator of the comparison lift) bound jointly
// because the comparison is invertible up to homotopy; the joint linear
// system is solved exactly and every postcondition is re-verified.
template <ScalarField F>
PerfEquivalenceLift<F> lift_homotopy_equivalence(
    const AlgMap<F>& phi, const PerfObject<F>& p, const PerfObject<F>& q,
    const std::map<int, AlgBlock<F>>& theta, std::uint64_t seed = 0) {
  require(p.alg.get() == phi.src.get(), ErrorCode::AlgebraMismatch,
          "the source presentation must live over the source algebra");
  require(q.alg.get() == phi.dst.get(), ErrorCode::AlgebraMismatch,
          "the target presentation must live over the target algebra");
  require(is_surjective(phi), ErrorCode::NotSurjective,
          "lifting needs a surjective algebra map");
  std::vector<Vec<F>> ker = kernel_rows(phi);
  require(detail::kernel_is_square_zero(*phi.src, ker),
          ErrorCode::KernelNotSquareZero, "lifting needs a square-zero kernel");
  const F& fld = phi.src->field();

  PerfObject<F> pb = map_object(phi, p);
  PerfMorphismComplex<F> mcb = morphism_complex(pb, q);
  auto theta_c = mcb.coords_of(0, theta);
  require(theta_c.has_value(), ErrorCode::NotAMap,
          "the comparison family must be compressed by the idempotents");
  require(!mcb.cochain.in_support(0) ||
              is_zero_vec(fld, *theta_c * mcb.cochain.d_from(0)),
          ErrorCode::NotChainMap,
          "the comparison family must commute with the differentials");
  {
    const int wlo = std::min(pb.len() == 0 ? 0 : pb.lo, q.len() == 0 ? 0 : q.lo);
    const int whi = std::max(pb.len() == 0 ? 0 : pb.hi, q.len() == 0 ? 0 : q.hi);
    ChainComplex<F> rx = pad_complex(realize(pb), wlo, whi);
    ChainComplex<F> ry = pad_complex(realize(q), wlo, whi);
    ChainMap<F> f = make_chain_map(
        rx, ry, realized_family_components(pb, q, theta, wlo, whi));
    require(is_quasi_iso(f), ErrorCode::NotEquivalence,
            "the comparison family is not invertible up to homotopy");
  }

  // when the data downstairs is literally the image of p and the comparison
  // is its identity family, p itself is the canonical lift
  {
    bool identical = pb == q;
    for (int n = pb.lo; identical && n <= pb.hi; ++n)
      identical = detail::family_block(theta, pb, q, 0, n) == pb.idem_at(n);
    for (const auto& [n, b] : theta)
      if (!pb.in_window(n) && !alg_block_is_zero(b)) identical = false;
    if (identical) {
      std::map<int, AlgBlock<F>> idp;
      for (int n = p.lo; n <= p.hi; ++n)
        if (p.size_at(n) > 0) idp[n] = p.idem_at(n);
      return PerfEquivalenceLift<F>{p, std::move(idp)};
    }
  }

  std::mt19937_64 rng(seed);
  std::mt19937_64* noise = seed == 0 ? nullptr : &rng;

  // arbitrary compressed lifts of the target data and of the comparison
  std::map<int, AlgBlock<F>> e_lift, d_lift, t_lift;
  for (int n = q.lo; n <= q.hi; ++n)
    if (q.size_at(n) > 0)
      e_lift[n] = detail::lift_idem_block(phi, q.idem_at(n), noise);
  PerfObject<F> stage = detail::raw_object(phi.src, q.signature(), e_lift, {});
  for (int n = q.lo + 1; n <= q.hi; ++n) {
    if (q.size_at(n) == 0 || q.size_at(n - 1) == 0) continue;
    AlgBlock<F> d0 = alg_block_zero(phi.src, q.size_at(n), q.size_at(n - 1));
    for (std::size_t s = 0; s < d0.rows; ++s)
      for (std::size_t t = 0; t < d0.cols; ++t)
        d0.at(s, t) = detail::preimage_of(phi, ker, q.diff_at(n).at(s, t), noise);
    d_lift[n] = alg_block_then(alg_block_then(stage.idem_at(n), d0),
                               stage.idem_at(n - 1));
  }
  stage = detail::raw_object(phi.src, q.signature(), e_lift, d_lift);
  for (int n = p.lo; n <= p.hi; ++n) {
    if (p.size_at(n) == 0 || stage.size_at(n) == 0) continue;
    AlgBlock<F> t0 = alg_block_zero(phi.src, p.size_at(n), stage.size_at(n));
    AlgBlock<F> tb = detail::family_block(theta, pb, q, 0, n);
    for (std::size_t s = 0; s < t0.rows; ++s)
      for (std::size_t t = 0; t < t0.cols; ++t)
        t0.at(s, t) = detail::preimage_of(phi, ker, tb.at(s, t), noise);
    t_lift[n] = alg_block_then(alg_block_then(p.idem_at(n), t0),
                               stage.idem_at(n));
  }

  // the two kernel-valued defects
  std::map<int, AlgBlock<F>> kappa, dd;
  for (int n = stage.lo + 2; n <= stage.hi; ++n) {
    if (stage.size_at(n) == 0 || stage.size_at(n - 2) == 0) continue;
    kappa[n] = alg_block_then(stage.diff_at(n), stage.diff_at(n - 1));
  }
  for (int n = p.lo; n <= p.hi; ++n) {
    if (p.size_at(n) == 0 || stage.size_at(n - 1) == 0) continue;
    AlgBlock<F> a = alg_block_then(
        detail::family_block(t_lift, p, stage, 0, n), stage.diff_at(n));
    AlgBlock<F> b = alg_block_then(
        p.diff_at(n), detail::family_block(t_lift, p, stage, 0, n - 1));
    dd[n] = alg_block_sub(a, b);
  }

  PerfMorphismComplex<F> endo = detail::family_complex(stage, stage, ker);
  PerfMorphismComplex<F> homc = detail::family_complex(p, stage, ker);
  auto kap_c = endo.coords_of(-2, kappa);
  auto dd_c = homc.coords_of(-1, dd);
  require(kap_c.has_value() && dd_c.has_value(), ErrorCode::InvariantViolation,
          "the defects must be kernel-valued compressed families");

  // joint system: correct d by h (endomorphism degree -1) and the comparison
  // by u (morphism degree 0) so that both defects cancel exactly
  const std::size_t eh = endo.dim(-1), hu = homc.dim(0);
  Mat<F> me = endo.cochain.d_from(1);   // h |-> d.h + h.d
  Mat<F> mh = homc.cochain.d_from(0);   // u |-> d.u - u.d
  Mat<F> sys(fld, eh + hu, kap_c->size() + dd_c->size());
  for (std::size_t k = 0; k < eh; ++k) {
    Vec<F> row = me.row(k);
    std::map<int, AlgBlock<F>> h = endo.family_of(-1, unit_row<F>(fld, eh, k));
    std::map<int, AlgBlock<F>> th;
    for (int n = p.lo; n <= p.hi; ++n) {
      if (p.size_at(n) == 0 || stage.size_at(n - 1) == 0) continue;
      th[n] = alg_block_then(detail::family_block(t_lift, p, stage, 0, n),
                             detail::family_block(h, stage, stage, -1, n));
    }
    auto th_c = homc.coords_of(-1, th);
    require(th_c.has_value(), ErrorCode::InvariantViolation,
            "precomposition must preserve the kernel-valued families");
    row.insert(row.end(), th_c->begin(), th_c->end());
    sys.set_row(k, row);
  }
  for (std::size_t k = 0; k < hu; ++k) {
    Vec<F> row = zero_vec(fld, kap_c->size());
    Vec<F> img = mh.row(k);
    row.insert(row.end(), img.begin(), img.end());
    sys.set_row(eh + k, row);
  }
  Vec<F> rhs = *kap_c;
  rhs.insert(rhs.end(), dd_c->begin(), dd_c->end());
  auto sol = solve_left(sys, rhs);
  require(sol.has_value(), ErrorCode::InvariantViolation,
          "the correction system of an equivalence lift must be solvable");

  Vec<F> h_coords(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(eh));
  Vec<F> u_coords(sol->begin() + static_cast<std::ptrdiff_t>(eh), sol->end());
  std::map<int, AlgBlock<F>> hfam = endo.family_of(-1, h_coords);
  std::map<int, AlgBlock<F>> ufam = homc.family_of(0, u_coords);
  std::map<int, AlgBlock<F>> d_hat = d_lift, t_hat = t_lift;
  for (auto& [n, d] : d_hat)
    d = alg_block_sub(d, detail::family_block(hfam, stage, stage, -1, n));
  for (auto& [n, t] : t_hat)
    t = alg_block_sub(t, detail::family_block(ufam, p, stage, 0, n));

  PerfEquivalenceLift<F> res{
      make_perf_object(phi.src, q.signature(), e_lift, d_hat), std::move(t_hat)};
  require(map_object(phi, res.object) == q, ErrorCode::InvariantViolation,
          "the lifted presentation must reduce to the target");
  for (int n = p.lo; n <= p.hi; ++n) {
    AlgBlock<F> lhs = alg_block_then(
        detail::family_block(res.theta, p, res.object, 0, n),
        res.object.diff_at(n));
    AlgBlock<F> rhs_blk = alg_block_then(
        p.diff_at(n), detail::family_block(res.theta, p, res.object, 0, n - 1));
    require(lhs == rhs_blk, ErrorCode::InvariantViolation,
            "the lifted comparison family must commute with the differentials");
  }
  for (const auto& [n, t] : res.theta)
    require(alg_block_apply(phi, t) ==
                detail::family_block(theta, pb, q, 0, n),
            ErrorCode::InvariantViolation,
            "the lifted comparison family must reduce to the original");
  {
    const int wlo = std::min(p.len() == 0 ? 0 : p.lo,
                             res.object.len() == 0 ? 0 : res.object.lo);
    const int whi = std::max(p.len() == 0 ? 0 : p.hi,
                             res.object.len() == 0 ? 0 : res.object.hi);
    ChainComplex<F> rx = pad_complex(realize(p), wlo, whi);
    ChainComplex<F> ry = pad_complex(realize(res.object), wlo, whi);
    ChainMap<F> f = make_chain_map(
        rx, ry,
        realized_family_components(p, res.object, res.theta, wlo, whi));
    require(is_quasi_iso(f), ErrorCode::InvariantViolation,
            "the lifted comparison family must remain an equivalence");
  }
  return res;
}

}  // namespace ncm
