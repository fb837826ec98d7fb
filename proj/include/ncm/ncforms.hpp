#pragma once

// Noncommutative differential forms over structure-constant algebras.
//
//  * OmegaOne: the bimodule of one-forms, realized as the kernel of the
//    multiplication map A (x) A -> A (absolute case, over the scalar field)
//    or A (x)_B A -> A (relative to an algebra map B -> A), together with
//    the universal derivation d(a) = a (x) 1 - 1 (x) a.
//  * Derivation spaces Der(A, M) and inner derivations, solved exactly from
//    the Leibniz linear system, and the identification of Der(A, M) with
//    bimodule maps Omega^1 -> M given by composition with d.
//  * The cotangent sequence of a composite  scalars -> B -> A:
//        A (x)_B Omega^1_B (x)_B A  ->  Omega^1_A  ->  Omega^1_{A/B}  ->  0
//    checked exactly, with the kernel dimension of the leftmost map
//    reported (the failure of left exactness).
//  * Formal smoothness and etaleness: etale iff Omega^1 = 0, formally
//    smooth iff Omega^1 is a projective bimodule; cross-examined against
//    exhaustive lifting of algebra points through a fixed battery of
//    square-zero surjections.  Disagreement with the implied lifting
//    behaviour is a hard error, never a silent downgrade.
//  * The truncated universal differential graded algebra Omega^{<= p}:
//    degree p is modelled as B (x) Bbar^{(x) p} with Bbar = B modulo the
//    span of the unit, the basis element (i0, t1, ..., tp) encoding
//    b_{i0} d(b_{k1}) ... d(b_{kp}).  The differential sends
//    b0 db1 ... dbp to db0 db1 ... dbp; the product moves coefficients
//    through d via  (da) b = d(ab) - a db.  del^2 = 0, the graded Leibniz
//    rule, associativity, and the bimodule axioms in every degree are
//    verified at construction.
//
// Conventions:
//  * A (x) A has basis a_i (x) a_j at index i*dim(A)+j; left multiplication
//    acts on the first slot, right multiplication on the second.
//  * The inner derivation attached to m is a |-> a.m - m.a, matching the
//    degree-zero coboundary of the Hochschild complex.
//  * Graded Leibniz sign: del(v w) = (del v) w + (-1)^p v (del w) for v of
//    degree p.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncm/algebra.hpp"
#include "ncm/budget.hpp"
#include "ncm/errors.hpp"
#include "ncm/ext.hpp"
#include "ncm/field.hpp"
#include "ncm/la.hpp"
#include "ncm/module.hpp"
#include "ncm/presentation.hpp"

namespace ncm {

namespace detail {

// Push an ambient operator that preserves the relation subspace down to
// class coordinates of the quotient.
template <ScalarField F>
Mat<F> induced_on_classes(const CosetSpace<F>& cs, const Mat<F>& op) {
  const F& fld = op.field();
  Mat<F> out(fld, cs.dim(), cs.dim());
  for (std::size_t r = 0; r < cs.dim(); ++r)
    out.set_row(r, cs.reduce(cs.lift(unit_row<F>(fld, cs.dim(), r)) * op));
  return out;
}

// The action of `op` on the row space of `incl` (independent rows, stable
// under op): the unique X with X * incl == incl * op.
template <ScalarField F>
Mat<F> restrict_operator(const Mat<F>& incl, const Mat<F>& op) {
  auto x = solve_left(incl, incl * op);
  require(x.has_value(), ErrorCode::InvariantViolation,
          "operator does not preserve the subspace");
  return *x;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// One-forms

// The kernel of multiplication inside A (x)_B A, with the outer A-bimodule
// structure.  `ambient` quotients the full tensor square by the middle-B
// relations (no relations in the absolute case), `basis` spans the kernel in
// class coordinates, and `d` tabulates the universal derivation on the
// algebra basis.
template <ScalarField F>
struct OmegaOne {
  AlgebraPtr<F> alg;             // A
  AlgebraPtr<F> base;            // B, or null when working over the scalars
  CosetSpace<F> ambient;         // A (x) A -> A (x)_B A
  std::vector<Vec<F>> basis;     // one-form basis, in class coordinates
  Mat<F> inclusion;              // the rows of `basis`, stacked
  Mat<F> mult;                   // induced multiplication, classes -> A
  Mat<F> d;                      // dim(A) x dim(): a_i |-> d(a_i)
  std::vector<Mat<F>> left_act;  // action of a_i on one-form coordinates
  std::vector<Mat<F>> right_act;

  std::size_t dim() const { return basis.size(); }
};

namespace detail {

template <ScalarField F>
OmegaOne<F> omega1_core(AlgebraPtr<F> a, AlgebraPtr<F> base,
                        const std::vector<Vec<F>>& relation_rows) {
  const F& fld = a->field();
  const std::size_t da = a->dim();
  CosetSpace<F> cs(fld, da * da, relation_rows);

  Mat<F> mult(fld, cs.dim(), da);
  for (std::size_t r = 0; r < cs.dim(); ++r) {
    Vec<F> rep = cs.lift(unit_row<F>(fld, cs.dim(), r));
    Vec<F> acc = zero_vec(fld, da);
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t j = 0; j < da; ++j) {
        if (fld.is_zero(rep[i * da + j])) continue;
        add_to(acc, scaled(a->mul(a->basis_elem(i), a->basis_elem(j)),
                           rep[i * da + j]));
      }
    mult.set_row(r, acc);
  }
  require(rank(mult) == da, ErrorCode::InvariantViolation,
          "multiplication must stay surjective on the tensor classes");

  std::vector<Vec<F>> basis = left_kernel(mult);
  Mat<F> inclusion = Mat<F>::from_rows(fld, basis, cs.dim());

  // universal derivation d(a_i) = a_i (x) 1 - 1 (x) a_i
  const Vec<F>& unit = a->unit();
  Mat<F> dmat(fld, da, basis.size());
  for (std::size_t i = 0; i < da; ++i) {
    Vec<F> amb = zero_vec(fld, da * da);
    for (std::size_t u = 0; u < da; ++u) {
      amb[i * da + u] += unit[u];
      amb[u * da + i] -= unit[u];
    }
    auto coords = coords_in_basis(fld, basis, cs.reduce(amb));
    require(coords.has_value(), ErrorCode::InvariantViolation,
            "the universal derivation must land in the one-forms");
    dmat.set_row(i, *coords);
  }

  Mat<F> id_da = Mat<F>::identity(fld, da);
  std::vector<Mat<F>> lact, ract;
  for (std::size_t g = 0; g < da; ++g) {
    Mat<F> left_amb = kron(a->left_mult(a->basis_elem(g)), id_da);
    Mat<F> right_amb = kron(id_da, a->right_mult(a->basis_elem(g)));
    lact.push_back(restrict_operator(inclusion, induced_on_classes(cs, left_amb)));
    ract.push_back(restrict_operator(inclusion, induced_on_classes(cs, right_amb)));
  }

  // Leibniz, exhaustively on basis pairs (bilinear, so this settles all pairs)
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j) {
      Vec<F> lhs = zero_vec(fld, basis.size());
      for (const auto& [k, c] : a->basis_mul(i, j))
        add_to(lhs, scaled(dmat.row(k), c));
      Vec<F> rhs = dmat.row(i) * ract[j];
      add_to(rhs, dmat.row(j) * lact[i]);
      require(lhs == rhs, ErrorCode::InvariantViolation,
              "the universal derivation must satisfy the Leibniz rule");
    }

  // the one-forms are generated as a bimodule by the d(a_i)
  if (!basis.empty()) {
    std::vector<Vec<F>> span;
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t u = 0; u < da; ++u)
        for (std::size_t v = 0; v < da; ++v)
          span.push_back((dmat.row(i) * lact[u]) * ract[v]);
    require(rank(Mat<F>::from_rows(fld, span, basis.size())) == basis.size(),
            ErrorCode::InvariantViolation,
            "the images of the universal derivation must generate the one-forms");
  }

  return OmegaOne<F>{std::move(a),      std::move(base),  std::move(cs),
                     std::move(basis),  std::move(inclusion), std::move(mult),
                     std::move(dmat),   std::move(lact),  std::move(ract)};
}

}  // namespace detail

// One-forms over the scalar field.
template <ScalarField F>
OmegaOne<F> omega1(const AlgebraPtr<F>& a) {
  return detail::omega1_core(a, AlgebraPtr<F>{}, {});
}

// One-forms of A relative to an algebra map B -> A: the tensor square is
// taken over B, so the forms of the base die.
template <ScalarField F>
OmegaOne<F> omega1_relative(const AlgMap<F>& base) {
  const AlgebraPtr<F>& a = base.dst;
  const F& fld = a->field();
  const std::size_t da = a->dim(), db = base.src->dim();
  std::vector<Vec<F>> rels;
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t k = 0; k < db; ++k) {
      Vec<F> xb = a->mul(a->basis_elem(i), base.m.row(k));
      for (std::size_t j = 0; j < da; ++j) {
        // (a_i . f(b_k)) (x) a_j  -  a_i (x) (f(b_k) . a_j)
        Vec<F> row = zero_vec(fld, da * da);
        for (std::size_t t = 0; t < da; ++t) row[t * da + j] += xb[t];
        Vec<F> by = a->mul(base.m.row(k), a->basis_elem(j));
        for (std::size_t s = 0; s < da; ++s) row[i * da + s] -= by[s];
        if (!is_zero_vec(fld, row)) rels.push_back(std::move(row));
      }
    }
  OmegaOne<F> w = detail::omega1_core(a, base.src, rels);
  for (std::size_t k = 0; k < db; ++k)
    require(is_zero_vec(fld, base.m.row(k) * w.d),
            ErrorCode::InvariantViolation,
            "one-forms of the base must vanish in the relative forms");
  return w;
}

// The one-forms as an (A, A)-bimodule space / as a right module over the
// enveloping algebra (for projectivity tests and tensor products).
template <ScalarField F>
BimoduleSpace<F> omega1_bimodule_space(const OmegaOne<F>& w) {
  return make_bimodule_space(w.alg, w.alg, w.dim(), w.left_act, w.right_act);
}

template <ScalarField F>
RightModule<F> omega1_env_module(const OmegaOne<F>& w, const AlgebraPtr<F>& env) {
  return bimodule_from_actions(env, w.alg, w.dim(), w.left_act, w.right_act);
}

// ---------------------------------------------------------------------------
// Derivation spaces

// A derivation is tabulated as a dim(A) x dim(M) matrix: row i is the value
// on a_i, and values extend linearly.
template <ScalarField F>
struct DerivationSpace {
  AlgebraPtr<F> alg;
  std::size_t module_dim = 0;
  std::vector<Mat<F>> basis;

  std::size_t dim() const { return basis.size(); }
};

template <ScalarField F>
bool is_derivation(const AlgebraPtr<F>& a, const BimoduleSpace<F>& m,
                   const Mat<F>& d) {
  require(m.left_alg.get() == a.get() && m.right_alg.get() == a.get(),
          ErrorCode::AlgebraMismatch,
          "the coefficients must be a bimodule over the algebra itself");
  require(d.rows() == a->dim() && d.cols() == m.dim, ErrorCode::BadDimension,
          "derivation table has the wrong shape");
  const F& fld = a->field();
  for (std::size_t i = 0; i < a->dim(); ++i)
    for (std::size_t j = 0; j < a->dim(); ++j) {
      Vec<F> lhs = zero_vec(fld, m.dim);
      for (const auto& [k, c] : a->basis_mul(i, j))
        add_to(lhs, scaled(d.row(k), c));
      Vec<F> rhs = d.row(i) * m.right_act[j];
      add_to(rhs, d.row(j) * m.left_act[i]);
      if (lhs != rhs) return false;
    }
  return true;
}

// All derivations A -> M, from the Leibniz linear system over every basis
// pair (complete by bilinearity).
template <ScalarField F>
DerivationSpace<F> derivations(const AlgebraPtr<F>& a, const BimoduleSpace<F>& m) {
  require(m.left_alg.get() == a.get() && m.right_alg.get() == a.get(),
          ErrorCode::AlgebraMismatch,
          "the coefficients must be a bimodule over the algebra itself");
  const F& fld = a->field();
  const std::size_t da = a->dim(), dm = m.dim;
  // unknown (k, t) = value coordinate t on a_k; equation ((i, j), s)
  Mat<F> sys(fld, da * dm, da * da * dm);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j) {
      const std::size_t col0 = (i * da + j) * dm;
      for (const auto& [k, c] : a->basis_mul(i, j))
        for (std::size_t s = 0; s < dm; ++s) sys.at(k * dm + s, col0 + s) += c;
      for (std::size_t t = 0; t < dm; ++t)
        for (std::size_t s = 0; s < dm; ++s) {
          sys.at(i * dm + t, col0 + s) -= m.right_act[j].at(t, s);
          sys.at(j * dm + t, col0 + s) -= m.left_act[i].at(t, s);
        }
    }
  DerivationSpace<F> out{a, dm, {}};
  for (const Vec<F>& v : left_kernel(sys)) {
    Mat<F> d(fld, da, dm);
    for (std::size_t k = 0; k < da; ++k)
      for (std::size_t t = 0; t < dm; ++t) d.at(k, t) = v[k * dm + t];
    require(is_derivation(a, m, d), ErrorCode::InvariantViolation,
            "the Leibniz system produced a non-derivation");
    out.basis.push_back(std::move(d));
  }
  return out;
}

// The inner derivations a |-> a.m - m.a, as a canonical subspace basis.
template <ScalarField F>
DerivationSpace<F> inner_derivations(const AlgebraPtr<F>& a,
                                     const BimoduleSpace<F>& m) {
  require(m.left_alg.get() == a.get() && m.right_alg.get() == a.get(),
          ErrorCode::AlgebraMismatch,
          "the coefficients must be a bimodule over the algebra itself");
  const F& fld = a->field();
  const std::size_t da = a->dim(), dm = m.dim;
  std::vector<Vec<F>> flat;
  for (std::size_t t = 0; t < dm; ++t) {
    Vec<F> row = zero_vec(fld, da * dm);
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t s = 0; s < dm; ++s)
        row[i * dm + s] = m.left_act[i].at(t, s) - m.right_act[i].at(t, s);
    flat.push_back(std::move(row));
  }
  DerivationSpace<F> out{a, dm, {}};
  if (dm == 0) return out;
  for (const Vec<F>& v : row_basis(Mat<F>::from_rows(fld, flat, da * dm))) {
    Mat<F> d(fld, da, dm);
    for (std::size_t k = 0; k < da; ++k)
      for (std::size_t t = 0; t < dm; ++t) d.at(k, t) = v[k * dm + t];
    require(is_derivation(a, m, d), ErrorCode::InvariantViolation,
            "an inner derivation failed the Leibniz rule");
    out.basis.push_back(std::move(d));
  }
  return out;
}

// ---------------------------------------------------------------------------
// The universal property: Hom_{A-bimod}(Omega^1, M) = Der(A, M) through d

struct UniversalPropertyReport {
  std::size_t hom_dim = 0;  // bimodule maps Omega^1 -> M
  std::size_t der_dim = 0;
  bool bijective = false;
};

template <ScalarField F>
UniversalPropertyReport omega1_universal_check(const OmegaOne<F>& w,
                                               const BimoduleSpace<F>& m) {
  require(w.base == nullptr, ErrorCode::Unsupported,
          "the universal-property check covers forms over the scalars only");
  require(m.left_alg.get() == w.alg.get() && m.right_alg.get() == w.alg.get(),
          ErrorCode::AlgebraMismatch,
          "the coefficients must be a bimodule over the algebra itself");
  const F& fld = w.alg->field();
  const std::size_t da = w.alg->dim(), dm = m.dim;
  AlgebraPtr<F> env = enveloping_algebra(w.alg);
  RightModule<F> wmod = omega1_env_module(w, env);
  RightModule<F> mmod =
      bimodule_from_actions(env, w.alg, m.dim, m.left_act, m.right_act);
  std::vector<Mat<F>> homs = intertwiner_space(wmod, mmod);
  DerivationSpace<F> der = derivations(w.alg, m);

  auto flatten = [&](const Mat<F>& v) {
    Vec<F> f = zero_vec(fld, da * dm);
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t t = 0; t < dm; ++t) f[i * dm + t] = v.at(i, t);
    return f;
  };

  std::vector<Vec<F>> images;
  for (const Mat<F>& h : homs) {
    Mat<F> comp = w.d * h;  // a_i |-> h(d a_i)
    require(is_derivation(w.alg, m, comp), ErrorCode::InvariantViolation,
            "composing a bimodule map with d must give a derivation");
    images.push_back(flatten(comp));
  }
  const std::size_t image_rank =
      images.empty() ? 0 : rank(Mat<F>::from_rows(fld, images, da * dm));
  bool injective = (image_rank == homs.size());
  bool surjective = true;
  for (const Mat<F>& d : der.basis)
    surjective = surjective && in_row_space(fld, images, flatten(d));
  return UniversalPropertyReport{
      homs.size(), der.dim(),
      injective && surjective && homs.size() == der.dim()};
}

// ---------------------------------------------------------------------------
// The cotangent sequence of  scalars -> B -> A

struct CotangentReport {
  std::size_t omega_base_dim = 0;   // one-forms of B
  std::size_t omega_total_dim = 0;  // one-forms of A
  std::size_t omega_rel_dim = 0;    // one-forms of A relative to B
  std::size_t left_domain_dim = 0;  // A (x)_B Omega^1_B (x)_B A
  std::size_t left_image_dim = 0;
  std::size_t left_kernel_dim = 0;  // failure of left exactness
  bool exact_middle = false;
  bool exact_right = false;
};

template <ScalarField F>
CotangentReport cotangent_sequence_check(const AlgMap<F>& f) {
  const AlgebraPtr<F>& b = f.src;
  const AlgebraPtr<F>& a = f.dst;
  const F& fld = a->field();
  const std::size_t da = a->dim(), db = b->dim();

  OmegaOne<F> wb = omega1(b);
  OmegaOne<F> wa = omega1(a);
  OmegaOne<F> wab = omega1_relative(f);

  // A as an (A, B)- and a (B, A)-bimodule through f
  std::vector<Mat<F>> a_left, a_right, fb_left, fb_right;
  for (std::size_t i = 0; i < da; ++i) {
    a_left.push_back(a->left_mult(a->basis_elem(i)));
    a_right.push_back(a->right_mult(a->basis_elem(i)));
  }
  for (std::size_t k = 0; k < db; ++k) {
    fb_left.push_back(a->left_mult(f.m.row(k)));
    fb_right.push_back(a->right_mult(f.m.row(k)));
  }
  BimoduleSpace<F> a_ab =
      make_bimodule_space(a, b, da, std::move(a_left), std::move(fb_right));
  BimoduleSpace<F> a_ba =
      make_bimodule_space(b, a, da, std::move(fb_left), std::move(a_right));
  BimoduleSpace<F> wb_space =
      make_bimodule_space(b, b, wb.dim(), wb.left_act, wb.right_act);

  RelativeTensor<F> t1 = tensor_over(a_ab, wb_space);
  RelativeTensor<F> t2 = tensor_over(t1.space, a_ba);
  const std::size_t t1d = t1.space.dim, t2d = t2.space.dim, wbd = wb.dim();

  // products a_i . f(b_p) and f(b_q) . a_j, tabulated once
  std::vector<std::vector<Vec<F>>> xprod(da, std::vector<Vec<F>>(db));
  std::vector<std::vector<Vec<F>>> yprod(db, std::vector<Vec<F>>(da));
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t p = 0; p < db; ++p)
      xprod[i][p] = a->mul(a->basis_elem(i), f.m.row(p));
  for (std::size_t q = 0; q < db; ++q)
    for (std::size_t j = 0; j < da; ++j)
      yprod[q][j] = a->mul(f.m.row(q), a->basis_elem(j));

  std::vector<Vec<F>> lifts1;
  for (std::size_t u = 0; u < t1d; ++u)
    lifts1.push_back(t1.classes.lift(unit_row<F>(fld, t1d, u)));
  std::vector<Vec<F>> base_forms;  // ambient B (x) B representatives
  for (std::size_t s = 0; s < wbd; ++s)
    base_forms.push_back(wb.ambient.lift(wb.basis[s]));

  // the connecting map x (x) omega (x) y |-> x . omega . y inside A (x) A
  std::vector<Vec<F>> alpha_rows;
  for (std::size_t r = 0; r < t2d; ++r) {
    Vec<F> rep2 = t2.classes.lift(unit_row<F>(fld, t2d, r));
    Vec<F> amb = zero_vec(fld, da * da);
    for (std::size_t u = 0; u < t1d; ++u)
      for (std::size_t j = 0; j < da; ++j) {
        if (fld.is_zero(rep2[u * da + j])) continue;
        for (std::size_t i = 0; i < da; ++i)
          for (std::size_t s = 0; s < wbd; ++s) {
            if (fld.is_zero(lifts1[u][i * wbd + s])) continue;
            const auto outer = rep2[u * da + j] * lifts1[u][i * wbd + s];
            const Vec<F>& om = base_forms[s];
            for (std::size_t p = 0; p < db; ++p)
              for (std::size_t q = 0; q < db; ++q) {
                if (fld.is_zero(om[p * db + q])) continue;
                const auto coeff = outer * om[p * db + q];
                const Vec<F>& xa = xprod[i][p];
                const Vec<F>& ay = yprod[q][j];
                for (std::size_t r1 = 0; r1 < da; ++r1) {
                  if (fld.is_zero(xa[r1])) continue;
                  for (std::size_t c1 = 0; c1 < da; ++c1)
                    amb[r1 * da + c1] += coeff * xa[r1] * ay[c1];
                }
              }
          }
      }
    auto coords = coords_in_basis(fld, wa.basis, wa.ambient.reduce(amb));
    require(coords.has_value(), ErrorCode::InvariantViolation,
            "the connecting map must land in the one-forms");
    alpha_rows.push_back(*coords);
  }

  // the projection Omega^1_A -> Omega^1_{A/B}
  Mat<F> beta(fld, wa.dim(), wab.dim());
  for (std::size_t r = 0; r < wa.dim(); ++r) {
    Vec<F> amb = wa.ambient.lift(wa.basis[r]);
    auto coords = coords_in_basis(fld, wab.basis, wab.ambient.reduce(amb));
    require(coords.has_value(), ErrorCode::InvariantViolation,
            "the projected form must stay a one-form");
    beta.set_row(r, *coords);
  }

  const std::size_t image_dim =
      alpha_rows.empty() ? 0
                         : rank(Mat<F>::from_rows(fld, alpha_rows, wa.dim()));
  const std::size_t beta_rank = rank(beta);
  bool middle = (image_dim + beta_rank == wa.dim());
  for (const Vec<F>& row : alpha_rows)
    middle = middle && is_zero_vec(fld, row * beta);

  return CotangentReport{wb.dim(),  wa.dim(),  wab.dim(),
                         t2d,       image_dim, t2d - image_dim,
                         middle,    beta_rank == wab.dim()};
}

// ---------------------------------------------------------------------------
// Formal smoothness / etaleness, with the lifting cross-examination

struct ExtensionLiftReport {
  std::string name;
  std::size_t points = 0;      // algebra maps into the base of the extension
  std::size_t unliftable = 0;  // points with no lift through the surjection
  std::size_t min_lifts = 0;
  std::size_t max_lifts = 0;
};

struct SmoothEtaleReport {
  std::size_t omega1_dim = 0;
  bool etale = false;   // one-forms vanish
  bool smooth = false;  // one-forms are a projective bimodule
  std::size_t der_dim = 0;
  std::size_t inner_der_dim = 0;
  std::size_t hh0 = 0, hh1 = 0, hh2 = 0;
  bool battery_ran = false;  // point lifting needs a finite field
  bool battery_all_lift = true;
  bool battery_unique_lift = true;
  std::vector<ExtensionLiftReport> battery;
  std::string witness;  // a point with no lift, when one exists
  std::string note;
};

namespace detail {

template <ScalarField F>
bool kernel_square_zero(const AlgMap<F>& phi) {
  const std::vector<Vec<F>> rows = kernel_rows(phi);
  for (const Vec<F>& u : rows)
    for (const Vec<F>& v : rows)
      if (!is_zero_vec(phi.src->field(), phi.src->mul(u, v))) return false;
  return true;
}

// Fixed square-zero surjections used to cross-examine the module-theoretic
// smoothness verdict by honest lifting of algebra points.
template <ScalarField F>
std::vector<std::pair<AlgMap<F>, std::string>> lifting_battery(const F& fld) {
  auto nil = [&](std::size_t k) {
    return poly_quotient_algebra(fld, zero_vec(fld, k));
  };
  std::vector<std::pair<AlgMap<F>, std::string>> out;
  auto add = [&](AlgebraPtr<F> big, AlgebraPtr<F> small,
                 std::vector<std::pair<std::size_t, std::size_t>> ones,
                 std::string name) {
    Mat<F> m(fld, big->dim(), small->dim());
    for (const auto& [r, c] : ones) m.at(r, c) = fld.one();
    AlgMap<F> phi = make_alg_map(big, small, std::move(m));
    require(is_surjective(phi), ErrorCode::NotSurjective,
            "battery surjections must be onto");
    require(kernel_square_zero(phi), ErrorCode::InvariantViolation,
            "battery kernels must square to zero");
    out.emplace_back(std::move(phi), std::move(name));
  };
  add(nil(2), field_algebra(fld), {{0, 0}}, "F[x]/(x^2) -> F");
  add(nil(3), nil(2), {{0, 0}, {1, 1}}, "F[x]/(x^3) -> F[x]/(x^2)");
  add(nil(4), nil(2), {{0, 0}, {1, 1}}, "F[x]/(x^4) -> F[x]/(x^2)");
  ProductAlgebra<F> ff =
      product_algebra(field_algebra(fld), field_algebra(fld));
  add(triangular_algebra(fld, {1, 1}), ff.alg, {{0, 0}, {2, 1}},
      "T(1,1) -> F x F");
  return out;
}

template <ScalarField F>
ExtensionLiftReport lift_extension_report(const AlgebraPtr<F>& b,
                                          const AlgMap<F>& ext,
                                          std::string name, Budget& budget,
                                          std::string* witness) {
  FreePresentation<F> pres = presentation_of(*b);
  std::vector<std::vector<Vec<F>>> points = enumerate_homs(pres, *ext.dst, budget);
  std::vector<std::vector<Vec<F>>> tops = enumerate_homs(pres, *ext.src, budget);

  auto flatten = [&](const std::vector<Vec<F>>& images, const Mat<F>* proj) {
    std::vector<typename F::Elem> key;
    for (const Vec<F>& im : images) {
      Vec<F> v = proj ? im * *proj : im;
      key.insert(key.end(), v.begin(), v.end());
    }
    return key;
  };
  std::map<std::vector<typename F::Elem>, std::size_t> lift_count;
  for (const auto& top : tops) ++lift_count[flatten(top, &ext.m)];

  ExtensionLiftReport rep{std::move(name), points.size(), 0, 0, 0};
  bool first = true;
  for (const auto& pt : points) {
    auto it = lift_count.find(flatten(pt, nullptr));
    const std::size_t lifts = (it == lift_count.end()) ? 0 : it->second;
    rep.min_lifts = first ? lifts : std::min(rep.min_lifts, lifts);
    rep.max_lifts = first ? lifts : std::max(rep.max_lifts, lifts);
    first = false;
    if (lifts == 0) {
      ++rep.unliftable;
      if (witness != nullptr && witness->empty()) {
        std::string desc = rep.name + ":";
        for (std::size_t i = 0; i < b->dim(); ++i)
          desc += " " + b->basis_names()[i] + " -> (" +
                  ext.dst->format(pt[i]) + ")";
        *witness = std::move(desc);
      }
    }
  }
  return rep;
}

}  // namespace detail

// The full report.  Being formally smooth implies every battery point
// lifts, and being etale implies the lifts are unique; both implications
// are enforced here, so a disagreement between the module-theoretic and the
// lifting route is a hard error.
template <ScalarField F>
SmoothEtaleReport smooth_etale_report(const AlgebraPtr<F>& b, Budget& budget) {
  SmoothEtaleReport rep;
  OmegaOne<F> w = omega1(b);
  rep.omega1_dim = w.dim();
  rep.etale = (w.dim() == 0);
  rep.smooth = is_projective(omega1_env_module(w, enveloping_algebra(b)));

  BimoduleSpace<F> reg = regular_bimodule_space(b);
  rep.der_dim = derivations(b, reg).dim();
  rep.inner_der_dim = inner_derivations(b, reg).dim();
  rep.hh0 = hochschild_dim(b, 0);
  rep.hh1 = hochschild_dim(b, 1);
  rep.hh2 = hochschild_dim(b, 2);
  require(rep.inner_der_dim <= rep.der_dim &&
              rep.hh1 == rep.der_dim - rep.inner_der_dim,
          ErrorCode::InvariantViolation,
          "the two routes to first cohomology must agree");

  if (b->field().finite()) {
    rep.battery_ran = true;
    std::vector<std::pair<AlgMap<F>, std::string>> battery =
        detail::lifting_battery(b->field());
    for (auto& [ext, name] : battery) {
      ExtensionLiftReport sub = detail::lift_extension_report(
          b, ext, std::move(name), budget, &rep.witness);
      rep.battery_all_lift = rep.battery_all_lift && sub.unliftable == 0;
      rep.battery_unique_lift =
          rep.battery_unique_lift &&
          (sub.points == 0 || (sub.unliftable == 0 && sub.max_lifts == 1));
      rep.battery.push_back(std::move(sub));
    }
    require(!rep.smooth || rep.battery_all_lift, ErrorCode::InvariantViolation,
            "a formally smooth algebra must lift through every battery extension");
    require(!rep.etale || rep.battery_unique_lift, ErrorCode::InvariantViolation,
            "an etale algebra must lift uniquely through every battery extension");
  }
  rep.note =
      "one-forms use the strict kernel model over the scalar field; for "
      "algebras over a field this coincides with the derived model";
  return rep;
}

// ---------------------------------------------------------------------------
// The truncated universal differential graded algebra

// Degrees 0..p_max of the universal differential envelope of B.  Degree p
// has dimension dim(B) * (dim(B) - 1)^p; the mixed-radix basis index
// (i0, t1, ..., tp) encodes b_{i0} d(b_{k1}) ... d(b_{kp}) with k = the
// basis element representing the reduced coordinate t.
template <ScalarField F>
struct DeRhamDGAA {
  AlgebraPtr<F> alg;
  std::size_t p_max = 0;
  CosetSpace<F> reduced;  // B modulo the span of the unit
  std::vector<std::size_t> comp_dim;
  std::vector<Mat<F>> del;  // del[p] : degree p -> degree p + 1
  std::vector<std::vector<Mat<F>>> left_act;   // [degree][basis element]
  std::vector<std::vector<Mat<F>>> right_act;

  std::size_t dim(std::size_t p) const { return comp_dim.at(p); }

  // the degree-p piece as a validated bimodule space
  BimoduleSpace<F> component(std::size_t p) const {
    return make_bimodule_space(alg, alg, comp_dim.at(p), left_act.at(p),
                               right_act.at(p));
  }

  // product of a degree-p and a degree-q element, p + q <= p_max
  Vec<F> mul(std::size_t p, std::size_t q, const Vec<F>& v,
             const Vec<F>& w) const {
    require(p + q <= p_max, ErrorCode::BadDimension,
            "product degree exceeds the truncation");
    require(v.size() == comp_dim.at(p) && w.size() == comp_dim.at(q),
            ErrorCode::BadDimension, "component coordinates of the wrong length");
    const F& fld = alg->field();
    Vec<F> acc = zero_vec(fld, comp_dim.at(p + q));
    if (q == 0) {
      for (std::size_t g = 0; g < alg->dim(); ++g)
        if (!fld.is_zero(w[g])) add_to(acc, scaled(v * right_act[p][g], w[g]));
      return acc;
    }
    const std::size_t tails = comp_dim[q] / alg->dim();  // (dim B - 1)^q
    for (std::size_t widx = 0; widx < w.size(); ++widx) {
      if (fld.is_zero(w[widx])) continue;
      const std::size_t j0 = widx / tails, tail = widx % tails;
      Vec<F> moved = scaled(v * right_act[p][j0], w[widx]);
      for (std::size_t t = 0; t < moved.size(); ++t)
        if (!fld.is_zero(moved[t])) acc[t * tails + tail] += moved[t];
    }
    return acc;
  }
};

template <ScalarField F>
DeRhamDGAA<F> derham(const AlgebraPtr<F>& b, std::size_t p_max, Budget& budget) {
  const F& fld = b->field();
  const std::size_t dB = b->dim();
  CosetSpace<F> red(fld, dB, {b->unit()});
  const std::size_t r = red.dim();

  // cost guard before any large allocation: stored matrices dominate
  {
    long double cells = 0, comp = static_cast<long double>(dB);
    for (std::size_t p = 0; p <= p_max; ++p) {
      cells += 2.0L * static_cast<long double>(dB) * comp * comp;
      if (p < p_max) cells += comp * comp * static_cast<long double>(r);
      comp *= static_cast<long double>(r);
    }
    const std::uint64_t left =
        budget.used() >= budget.limit() ? 0 : budget.limit() - budget.used();
    if (cells > static_cast<long double>(left))
      fail(ErrorCode::BudgetExceeded,
           "graded components exceed the work budget");
  }

  std::vector<std::size_t> comp(p_max + 1);
  comp[0] = dB;
  for (std::size_t p = 1; p <= p_max; ++p) comp[p] = comp[p - 1] * r;

  std::vector<Vec<F>> redcoord(dB);
  for (std::size_t m = 0; m < dB; ++m)
    redcoord[m] = red.reduce(unit_row<F>(fld, dB, m));
  const std::vector<std::size_t>& keep = red.kept_coords();

  std::vector<std::vector<Mat<F>>> lefts(p_max + 1), rights(p_max + 1);
  for (std::size_t p = 0; p <= p_max; ++p) {
    Mat<F> id_tail = Mat<F>::identity(fld, dB == 0 ? 0 : comp[p] / dB);
    for (std::size_t g = 0; g < dB; ++g)
      lefts[p].push_back(kron(b->left_mult(b->basis_elem(g)), id_tail));
  }
  for (std::size_t g = 0; g < dB; ++g)
    rights[0].push_back(b->right_mult(b->basis_elem(g)));
  for (std::size_t p = 1; p <= p_max; ++p)
    for (std::size_t g = 0; g < dB; ++g) {
      Mat<F> m(fld, comp[p], comp[p]);
      for (std::size_t prefix = 0; prefix < comp[p - 1]; ++prefix)
        for (std::size_t last = 0; last < r; ++last) {
          budget.tick();
          const std::size_t row = prefix * r + last;
          const std::size_t k = keep[last];
          // (w (x) bar(b_k)) . b_g = w (x) bar(b_k b_g) - (w . b_k) (x) bar(b_g)
          for (const auto& [mm, c] : b->basis_mul(k, g))
            for (std::size_t t = 0; t < r; ++t) {
              if (fld.is_zero(redcoord[mm][t])) continue;
              m.at(row, prefix * r + t) += c * redcoord[mm][t];
            }
          const Vec<F> moved = rights[p - 1][k].row(prefix);
          for (std::size_t u = 0; u < comp[p - 1]; ++u) {
            if (fld.is_zero(moved[u])) continue;
            for (std::size_t t = 0; t < r; ++t) {
              if (fld.is_zero(redcoord[g][t])) continue;
              m.at(row, u * r + t) -= moved[u] * redcoord[g][t];
            }
          }
        }
      rights[p].push_back(std::move(m));
    }

  const Vec<F>& unit = b->unit();
  std::vector<Mat<F>> dels;
  for (std::size_t p = 0; p < p_max; ++p) {
    Mat<F> d(fld, comp[p], comp[p + 1]);
    const std::size_t tails = comp[p] / dB;  // (dim B - 1)^p
    for (std::size_t idx = 0; idx < comp[p]; ++idx) {
      budget.tick();
      const std::size_t i0 = idx / tails, tail = idx % tails;
      for (std::size_t u = 0; u < dB; ++u) {
        if (fld.is_zero(unit[u])) continue;
        for (std::size_t t = 0; t < r; ++t) {
          if (fld.is_zero(redcoord[i0][t])) continue;
          d.at(idx, (u * r + t) * tails + tail) += unit[u] * redcoord[i0][t];
        }
      }
    }
    dels.push_back(std::move(d));
  }

  DeRhamDGAA<F> dga{b,
                    p_max,
                    std::move(red),
                    std::move(comp),
                    std::move(dels),
                    std::move(lefts),
                    std::move(rights)};

  // every degree is an honest bimodule
  for (std::size_t p = 0; p <= p_max; ++p) (void)dga.component(p);
  // the differential squares to zero
  for (std::size_t p = 0; p + 2 <= p_max; ++p)
    require((dga.del[p] * dga.del[p + 1]).is_zero(),
            ErrorCode::InvariantViolation,
            "the differential must square to zero");
  // graded Leibniz rule, exhaustively on basis pairs
  for (std::size_t p = 0; p <= p_max; ++p)
    for (std::size_t q = 0; p + q < p_max; ++q)
      for (std::size_t vi = 0; vi < dga.comp_dim[p]; ++vi)
        for (std::size_t wi = 0; wi < dga.comp_dim[q]; ++wi) {
          budget.tick();
          Vec<F> v = unit_row<F>(fld, dga.comp_dim[p], vi);
          Vec<F> w = unit_row<F>(fld, dga.comp_dim[q], wi);
          Vec<F> lhs = dga.mul(p, q, v, w) * dga.del[p + q];
          Vec<F> rhs = dga.mul(p + 1, q, v * dga.del[p], w);
          Vec<F> second = dga.mul(p, q + 1, v, w * dga.del[q]);
          if (p % 2 == 0)
            add_to(rhs, second);
          else
            sub_from(rhs, second);
          require(lhs == rhs, ErrorCode::InvariantViolation,
                  "the differential must be a graded derivation");
        }
  // associativity of the graded product
  for (std::size_t p = 0; p <= p_max; ++p)
    for (std::size_t q = 0; p + q <= p_max; ++q)
      for (std::size_t s = 0; p + q + s <= p_max; ++s)
        for (std::size_t vi = 0; vi < dga.comp_dim[p]; ++vi)
          for (std::size_t wi = 0; wi < dga.comp_dim[q]; ++wi)
            for (std::size_t ui = 0; ui < dga.comp_dim[s]; ++ui) {
              budget.tick();
              Vec<F> v = unit_row<F>(fld, dga.comp_dim[p], vi);
              Vec<F> w = unit_row<F>(fld, dga.comp_dim[q], wi);
              Vec<F> u = unit_row<F>(fld, dga.comp_dim[s], ui);
              require(dga.mul(p + q, s, dga.mul(p, q, v, w), u) ==
                          dga.mul(p, q + s, v, dga.mul(q, s, w, u)),
                      ErrorCode::InvariantViolation,
                      "the graded product must be associative");
            }
  // the unit of degree zero is neutral
  for (std::size_t p = 0; p <= p_max; ++p)
    for (std::size_t vi = 0; vi < dga.comp_dim[p]; ++vi) {
      Vec<F> v = unit_row<F>(fld, dga.comp_dim[p], vi);
      require(dga.mul(p, 0, v, unit) == v && dga.mul(0, p, unit, v) == v,
              ErrorCode::InvariantViolation,
              "the unit must be neutral for the graded product");
    }
  return dga;
}

// The comparison isomorphism from the degree-one piece of the graded model
// onto the kernel model of the one-forms: b_{i0} d(b_k) |-> b_{i0} . d(b_k).
// Verifies invertibility, both action intertwinings, and compatibility with
// the universal derivation, then returns the matrix.
template <ScalarField F>
Mat<F> derham_to_omega1(const DeRhamDGAA<F>& dga, const OmegaOne<F>& w) {
  require(dga.alg.get() == w.alg.get(), ErrorCode::AlgebraMismatch,
          "the graded model and the one-forms must share the algebra");
  require(w.base == nullptr, ErrorCode::Unsupported,
          "the comparison covers forms over the scalars only");
  require(dga.p_max >= 1, ErrorCode::BadDimension,
          "the graded model must include degree one");
  const F& fld = dga.alg->field();
  const std::size_t dB = dga.alg->dim(), r = dga.reduced.dim();
  require(dga.comp_dim[1] == w.dim(), ErrorCode::InvariantViolation,
          "the degree-one piece must match the one-forms in dimension");
  Mat<F> j(fld, dga.comp_dim[1], w.dim());
  for (std::size_t i0 = 0; i0 < dB; ++i0)
    for (std::size_t t = 0; t < r; ++t)
      j.set_row(i0 * r + t,
                w.d.row(dga.reduced.kept_coords()[t]) * w.left_act[i0]);
  require(rank(j) == w.dim(), ErrorCode::InvariantViolation,
          "the comparison map must be invertible");
  for (std::size_t g = 0; g < dB; ++g) {
    require(dga.left_act[1][g] * j == j * w.left_act[g],
            ErrorCode::InvariantViolation,
            "the comparison map must intertwine the left actions");
    require(dga.right_act[1][g] * j == j * w.right_act[g],
            ErrorCode::InvariantViolation,
            "the comparison map must intertwine the right actions");
  }
  require(dga.del[0] * j == w.d, ErrorCode::InvariantViolation,
          "the comparison map must match the universal derivations");
  return j;
}

}  // namespace ncm
