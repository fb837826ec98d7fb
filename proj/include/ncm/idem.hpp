#pragma once

// The groupoid of idempotents I(A): objects are e with e^2 = e, morphisms are
// pairs (f, g) with fgf = f and gfg = g, where source = gf and target = fg,
// composed by (f', g') after (f, g) = (f'f, gg').
//
// On top of it: constructive lifting of idempotents and isomorphisms through
// nilpotent surjections, classification of the projective right modules e*A^n
// by connected components of I(Mat_n(A)), stabilization Mat_n -> Mat_{n+1} by
// zero-extension, and the homogeneity check comparing I(A x_B C) with the
// iso-comma fiber product of groupoids.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "ncm/algebra.hpp"
#include "ncm/budget.hpp"
#include "ncm/errors.hpp"
#include "ncm/field.hpp"
#include "ncm/la.hpp"
#include "ncm/module.hpp"

namespace ncm {

// ---------------------------------------------------------------------------
// Idempotent enumeration

namespace detail {

// lexicographic key on coordinate indices, for deterministic output order
template <ScalarField F>
bool lex_less(const F& fld, const Vec<F>& a, const Vec<F>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto ia = fld.index_of(a[i]), ib = fld.index_of(b[i]);
    if (ia != ib) return ia < ib;
  }
  return false;
}

// Backtracking solver for e*e = e: coordinates are assigned in order and a
// coordinate equation is checked as soon as its full support is assigned.
template <ScalarField F>
std::vector<Vec<F>> idempotents_backtracking(const FinAlgebra<F>& a,
                                             Budget& budget) {
  const F& fld = a.field();
  const std::size_t d = a.dim();
  struct Term {
    std::size_t i, j;
    typename F::Elem c;
  };
  // equation k:  sum_terms v_i v_j c  -  v_k  =  0
  std::vector<std::vector<Term>> eq(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (const auto& [k, c] : a.basis_mul(i, j)) eq[k].push_back({i, j, c});
  std::vector<std::vector<std::size_t>> ready_at(d + 1);
  for (std::size_t k = 0; k < d; ++k) {
    std::size_t depth = k + 1;
    for (const auto& t : eq[k])
      depth = std::max(depth, std::max(t.i, t.j) + 1);
    ready_at[depth].push_back(k);
  }
  std::vector<Vec<F>> out;
  Vec<F> v = zero_vec(fld, d);
  const std::uint64_t p = fld.size();
  std::function<void(std::size_t)> walk = [&](std::size_t t) {
    budget.tick();
    for (std::size_t k : ready_at[t]) {
      typename F::Elem acc = fld.zero();
      for (const auto& term : eq[k]) acc += v[term.i] * v[term.j] * term.c;
      if (!(acc == v[k])) return;
    }
    if (t == d) {
      out.push_back(v);
      return;
    }
    for (std::uint64_t val = 0; val < p; ++val) {
      v[t] = fld.elem_at(val);
      walk(t + 1);
    }
    v[t] = fld.zero();
  };
  walk(0);
  return out;
}

}  // namespace detail

// All idempotents of A, in lexicographic coordinate order; always contains
// 0 and 1.  Small state spaces are scanned outright; larger ones go through
// the backtracking variety solver.  Both engines tick the budget per node.
template <ScalarField F>
std::vector<Vec<F>> enumerate_idempotents(const AlgebraPtr<F>& a,
                                          Budget& budget) {
  const F& fld = a->field();
  require(fld.finite(), ErrorCode::Unsupported,
          "idempotent enumeration needs a finite field");
  // decide |A| = p^dim <= 2^20 without overflowing
  long double total = 1;
  for (std::size_t i = 0; i < a->dim(); ++i) {
    total *= static_cast<long double>(fld.size());
    if (total > static_cast<long double>(1 << 20)) break;
  }
  std::vector<Vec<F>> out;
  if (total <= static_cast<long double>(1 << 20)) {
    for_each_vector(fld, a->dim(), [&](const Vec<F>& v) {
      budget.tick();
      if (a->is_idempotent(v)) out.push_back(v);
      return true;
    });
    std::sort(out.begin(), out.end(), [&](const Vec<F>& x, const Vec<F>& y) {
      return detail::lex_less(fld, x, y);
    });
  } else {
    out = detail::idempotents_backtracking(*a, budget);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Morphisms

template <ScalarField F>
struct IsoPair {
  Vec<F> f, g;      // fgf = f, gfg = g; source gf, target fg
  std::size_t src = 0, dst = 0;  // object indices within a groupoid
};

// All morphisms from e_src to e_dst: f ranges over e_dst*A*e_src and g is
// solved for linearly (it is unique when it exists: g = g e' = g(fg') =
// (gf)g' = e g' = g').  With `first_only` the search stops at the first hit.
template <ScalarField F>
std::vector<std::pair<Vec<F>, Vec<F>>> hom_idempotents(
    const FinAlgebra<F>& a, const Vec<F>& e_src, const Vec<F>& e_dst,
    Budget& budget, bool first_only = false) {
  const F& fld = a.field();
  const std::size_t d = a.dim();
  auto corner_basis = [&](const Vec<F>& l, const Vec<F>& r) {
    std::vector<Vec<F>> rows;
    for (std::size_t i = 0; i < d; ++i)
      rows.push_back(a.mul(a.mul(l, a.basis_elem(i)), r));
    Mat<F> m = Mat<F>::from_rows(fld, rows, d);
    return row_basis(m);
  };
  std::vector<Vec<F>> fb = corner_basis(e_dst, e_src);  // e' A e
  std::vector<Vec<F>> gb = corner_basis(e_src, e_dst);  // e A e'
  std::vector<std::pair<Vec<F>, Vec<F>>> out;
  // For each candidate f, solve g*f = e_src and f*g = e_dst for g in eAe'.
  Mat<F> sys(fld, gb.size(), 2 * d);
  Vec<F> rhs(2 * d, fld.zero());
  for (std::size_t c = 0; c < d; ++c) {
    rhs[c] = e_src[c];
    rhs[d + c] = e_dst[c];
  }
  for_each_vector(fld, fb.size(), [&](const Vec<F>& coeff) {
    budget.tick();
    Vec<F> f = zero_vec(fld, d);
    for (std::size_t i = 0; i < fb.size(); ++i)
      if (!fld.is_zero(coeff[i])) add_to(f, scaled(fb[i], coeff[i]));
    for (std::size_t s = 0; s < gb.size(); ++s) {
      Vec<F> gf = a.mul(gb[s], f);
      Vec<F> fg = a.mul(f, gb[s]);
      for (std::size_t c = 0; c < d; ++c) {
        sys.at(s, c) = gf[c];
        sys.at(s, d + c) = fg[c];
      }
    }
    auto sol = gb.empty() ? (is_zero_vec(fld, rhs)
                                 ? std::optional<Vec<F>>(Vec<F>{})
                                 : std::nullopt)
                          : solve_left(sys, rhs);
    if (sol) {
      Vec<F> g = zero_vec(fld, d);
      for (std::size_t s = 0; s < gb.size(); ++s)
        if (!fld.is_zero((*sol)[s])) add_to(g, scaled(gb[s], (*sol)[s]));
      out.emplace_back(std::move(f), std::move(g));
      if (first_only) return false;
    }
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// The groupoid

template <ScalarField F>
struct IdemGroupoid {
  AlgebraPtr<F> alg;
  std::vector<Vec<F>> objects;
  std::vector<IsoPair<F>> morphisms;

  std::optional<std::size_t> object_index(const Vec<F>& e) const {
    for (std::size_t i = 0; i < objects.size(); ++i)
      if (objects[i] == e) return i;
    return std::nullopt;
  }
  std::optional<std::size_t> morphism_index(const Vec<F>& f,
                                            const Vec<F>& g) const {
    for (std::size_t i = 0; i < morphisms.size(); ++i)
      if (morphisms[i].f == f && morphisms[i].g == g) return i;
    return std::nullopt;
  }
  std::size_t identity_index(std::size_t obj) const {
    auto idx = morphism_index(objects[obj], objects[obj]);
    require(idx.has_value(), ErrorCode::InvariantViolation,
            "identity morphism missing");
    return *idx;
  }
  // (f', g') after (f, g):  (f' f, g g')
  std::optional<std::size_t> compose_index(std::size_t first,
                                           std::size_t then) const {
    const IsoPair<F>& m1 = morphisms[first];
    const IsoPair<F>& m2 = morphisms[then];
    if (m1.dst != m2.src) return std::nullopt;
    Vec<F> f = alg->mul(m2.f, m1.f);
    Vec<F> g = alg->mul(m1.g, m2.g);
    auto idx = morphism_index(f, g);
    require(idx.has_value(), ErrorCode::InvariantViolation,
            "composite not found in the enumerated groupoid");
    return idx;
  }
  std::size_t inverse_index(std::size_t m) const {
    auto idx = morphism_index(morphisms[m].g, morphisms[m].f);
    require(idx.has_value(), ErrorCode::InvariantViolation,
            "inverse not found in the enumerated groupoid");
    return *idx;
  }

  // connected components: labels[i] = smallest object index in i's component
  std::vector<std::size_t> component_labels() const {
    std::vector<std::size_t> parent(objects.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
      while (parent[i] != i) i = parent[i] = parent[parent[i]];
      return i;
    };
    for (const auto& m : morphisms) {
      std::size_t a = find(m.src), b = find(m.dst);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::vector<std::size_t> labels(objects.size());
    for (std::size_t i = 0; i < objects.size(); ++i) labels[i] = find(i);
    return labels;
  }
};

template <ScalarField F>
IdemGroupoid<F> groupoid(const AlgebraPtr<F>& a, Budget& budget) {
  IdemGroupoid<F> g{a, enumerate_idempotents(a, budget), {}};
  for (std::size_t s = 0; s < g.objects.size(); ++s)
    for (std::size_t t = 0; t < g.objects.size(); ++t)
      for (auto& [f, gg] :
           hom_idempotents(*a, g.objects[s], g.objects[t], budget))
        g.morphisms.push_back(IsoPair<F>{std::move(f), std::move(gg), s, t});
  // sanity: pair axioms on everything enumerated
  for (const auto& m : g.morphisms) {
    require(a->mul(a->mul(m.f, m.g), m.f) == m.f &&
                a->mul(a->mul(m.g, m.f), m.g) == m.g,
            ErrorCode::InvariantViolation, "enumerated pair fails the axioms");
    require(a->mul(m.g, m.f) == g.objects[m.src] &&
                a->mul(m.f, m.g) == g.objects[m.dst],
            ErrorCode::InvariantViolation, "enumerated pair at wrong objects");
  }
  return g;
}

// ---------------------------------------------------------------------------
// Lifting

// Lift an idempotent through a surjection with nilpotent kernel by iterating
// y -> 3y^2 - 2y^3 on any preimage; each step squares the defect's ideal
// power, so ceil(log2(nilpotency degree)) steps suffice.
template <ScalarField F>
Vec<F> lift_idempotent(const AlgMap<F>& phi, const Vec<F>& e) {
  const FinAlgebra<F>& a = *phi.src;
  const F& fld = a.field();
  require(is_surjective(phi), ErrorCode::NotSurjective,
          "cannot lift through a non-surjection");
  require(nilpotency_degree(a, kernel_rows(phi)).has_value(),
          ErrorCode::NotNilpotent, "kernel is not nilpotent");
  require(phi.dst->is_idempotent(e), ErrorCode::NotIdempotent,
          "element to lift is not idempotent");
  Vec<F> y = *solve_left(phi.m, e);
  const typename F::Elem three = fld.from_int(3), two = fld.from_int(2);
  for (int iter = 0; iter < 64 && !a.is_idempotent(y); ++iter) {
    Vec<F> y2 = a.mul(y, y);
    Vec<F> y3 = a.mul(y2, y);
    for (std::size_t i = 0; i < y.size(); ++i)
      y[i] = three * y2[i] - two * y3[i];
  }
  require(a.is_idempotent(y), ErrorCode::InvariantViolation,
          "lift iteration did not converge");
  require(y * phi.m == e, ErrorCode::InvariantViolation,
          "lift does not reduce to the input");
  return y;
}

namespace detail {

// Shared engine for iso lifting.  Starting from preimages f0, g0 of (f, g),
// set ft = f0 etilde, gt = etilde g0 and repeatedly correct gt by (1 - x)
// with x = gt ft - etilde.  Each pass squares the ideal power containing
// the defect, which is one square-zero stage of the filtration I^(2^j), so
// the loop is the staged lifting run in place.
template <ScalarField F>
std::pair<Vec<F>, Vec<F>> lift_iso_core(const AlgMap<F>& phi,
                                        const Vec<F>& e_tilde,
                                        const Vec<F>& f0, const Vec<F>& g0) {
  const FinAlgebra<F>& a = *phi.src;
  const F& fld = a.field();
  Vec<F> ft = a.mul(f0, e_tilde);
  Vec<F> gt = a.mul(e_tilde, g0);
  for (int iter = 0; iter < 64; ++iter) {
    Vec<F> x = a.mul(gt, ft);
    sub_from(x, e_tilde);
    if (is_zero_vec(fld, x)) break;
    Vec<F> one_minus_x = a.unit();
    sub_from(one_minus_x, x);
    gt = a.mul(one_minus_x, gt);
  }
  // the defining identities, exactly
  require(a.mul(gt, ft) == e_tilde, ErrorCode::InvariantViolation,
          "lifted pair has wrong source");
  require(a.mul(a.mul(ft, gt), ft) == ft && a.mul(a.mul(gt, ft), gt) == gt,
          ErrorCode::InvariantViolation, "lifted pair fails the axioms");
  return {std::move(ft), std::move(gt)};
}

template <ScalarField F>
bool kernel_is_square_zero(const FinAlgebra<F>& a,
                           const std::vector<Vec<F>>& ker) {
  for (const auto& x : ker)
    for (const auto& y : ker)
      if (!is_zero_vec(a.field(), a.mul(x, y))) return false;
  return true;
}

}  // namespace detail

// Lift an isomorphism pair (f, g) with source phi(e_tilde) through a
// square-zero surjection, to a pair with source exactly e_tilde.
template <ScalarField F>
std::pair<Vec<F>, Vec<F>> lift_iso(const AlgMap<F>& phi, const Vec<F>& e_tilde,
                                   const Vec<F>& f, const Vec<F>& g) {
  const FinAlgebra<F>& a = *phi.src;
  const FinAlgebra<F>& b = *phi.dst;
  require(is_surjective(phi), ErrorCode::NotSurjective,
          "cannot lift through a non-surjection");
  require(detail::kernel_is_square_zero(a, kernel_rows(phi)),
          ErrorCode::KernelNotSquareZero,
          "kernel is not square-zero; stage through the ideal-power filtration");
  require(a.is_idempotent(e_tilde), ErrorCode::NotIdempotent,
          "designated source is not idempotent");
  require(b.mul(b.mul(f, g), f) == f && b.mul(b.mul(g, f), g) == g,
          ErrorCode::HypothesisUnmet, "(f, g) is not an isomorphism pair");
  require(b.mul(g, f) == e_tilde * phi.m, ErrorCode::SourceMismatch,
          "source of (f, g) is not the image of the designated idempotent");
  Vec<F> f0 = *solve_left(phi.m, f);
  Vec<F> g0 = *solve_left(phi.m, g);
  auto lifted = detail::lift_iso_core(phi, e_tilde, f0, g0);
  require(lifted.first * phi.m == f && lifted.second * phi.m == g,
          ErrorCode::InvariantViolation, "lift does not reduce to (f, g)");
  return lifted;
}

// The same construction through a merely nilpotent kernel: the correction
// loop in the core is exactly the ideal-power staging.
template <ScalarField F>
std::pair<Vec<F>, Vec<F>> lift_iso_nilpotent(const AlgMap<F>& phi,
                                             const Vec<F>& e_tilde,
                                             const Vec<F>& f, const Vec<F>& g) {
  const FinAlgebra<F>& a = *phi.src;
  const FinAlgebra<F>& b = *phi.dst;
  require(is_surjective(phi), ErrorCode::NotSurjective,
          "cannot lift through a non-surjection");
  require(nilpotency_degree(a, kernel_rows(phi)).has_value(),
          ErrorCode::NotNilpotent, "kernel is not nilpotent");
  require(a.is_idempotent(e_tilde), ErrorCode::NotIdempotent,
          "designated source is not idempotent");
  require(b.mul(g, f) == e_tilde * phi.m, ErrorCode::SourceMismatch,
          "source of (f, g) is not the image of the designated idempotent");
  Vec<F> f0 = *solve_left(phi.m, f);
  Vec<F> g0 = *solve_left(phi.m, g);
  return detail::lift_iso_core(phi, e_tilde, f0, g0);
}

// Connect two lifts of one idempotent by an isomorphism pair: run the lifting
// construction with the second lift itself taken as both preimages.  The
// resulting pair has source e1 and target exactly e2.
template <ScalarField F>
std::pair<Vec<F>, Vec<F>> connect_lifts(const AlgMap<F>& phi, const Vec<F>& e1,
                                        const Vec<F>& e2) {
  const FinAlgebra<F>& a = *phi.src;
  require(nilpotency_degree(a, kernel_rows(phi)).has_value(),
          ErrorCode::NotNilpotent, "kernel is not nilpotent");
  require(a.is_idempotent(e1) && a.is_idempotent(e2), ErrorCode::NotIdempotent,
          "arguments must be idempotent");
  require(e1 * phi.m == e2 * phi.m, ErrorCode::SourceMismatch,
          "the two elements do not lift the same idempotent");
  auto pair = detail::lift_iso_core(phi, e1, e2, e2);
  require(a.mul(pair.first, pair.second) == e2, ErrorCode::InvariantViolation,
          "connecting pair has wrong target");
  return pair;
}

// ---------------------------------------------------------------------------
// Projective modules e * A^n

// Left action of y in Mat_n(A) on the free row module A^n (basis (copy c,
// algebra basis m) at c*dim(A)+m): the matrix unit E_{kl} a_t sends copy l to
// copy k by left multiplication with a_t.
template <ScalarField F>
Mat<F> matrix_left_operator(const AlgebraPtr<F>& a, std::size_t n,
                            const Vec<F>& y) {
  const F& fld = a->field();
  const std::size_t da = a->dim();
  Mat<F> out(fld, n * da, n * da);
  for (std::size_t idx = 0; idx < y.size(); ++idx) {
    if (fld.is_zero(y[idx])) continue;
    std::size_t t = idx % da, cell = idx / da;
    std::size_t k = cell / n, l = cell % n;
    Mat<F> lm = a->left_mult(a->basis_elem(t));
    for (std::size_t r = 0; r < da; ++r)
      for (std::size_t c = 0; c < da; ++c)
        out.at(l * da + r, k * da + c) += y[idx] * lm.at(r, c);
  }
  return out;
}

// The right A-module e * A^n carved out of the free module.
template <ScalarField F>
Submodule<F> projective_module_of(const AlgebraPtr<F>& a, std::size_t n,
                                  const Vec<F>& e) {
  RightModule<F> free = free_module(a, n);
  Mat<F> op = matrix_left_operator(a, n, e);
  std::vector<Vec<F>> rows;
  for (std::size_t r = 0; r < op.rows(); ++r)
    if (!is_zero_vec(a->field(), op.row(r))) rows.push_back(op.row(r));
  return submodule(free, rows, /*close=*/false);
}

// Connected-component labels for a list of idempotents, unioning only on
// explicitly found morphisms.  A morphism e -> e' makes e*M isomorphic to
// e'*M as right M-modules, so pairs whose (dimension, action-rank) profiles
// differ provably have no morphism and are skipped without search.
template <ScalarField F>
std::vector<std::size_t> connected_components(const AlgebraPtr<F>& alg,
                                              const std::vector<Vec<F>>& idems,
                                              Budget& budget) {
  std::vector<std::vector<std::size_t>> prints;
  for (const auto& e : idems) {
    Mat<F> le = alg->left_mult(e);
    std::vector<std::size_t> p{rank(le)};
    for (std::size_t i = 0; i < alg->dim(); ++i)
      p.push_back(rank(le * alg->right_mult(alg->basis_elem(i))));
    prints.push_back(std::move(p));
  }
  std::vector<std::size_t> parent(idems.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < idems.size(); ++i)
    for (std::size_t j = i + 1; j < idems.size(); ++j) {
      if (find(i) == find(j)) continue;
      if (prints[i] != prints[j]) continue;
      auto found =
          hom_idempotents(*alg, idems[i], idems[j], budget, /*first_only=*/true);
      if (!found.empty())
        parent[std::max(find(i), find(j))] = std::min(find(i), find(j));
    }
  std::vector<std::size_t> labels(idems.size());
  for (std::size_t i = 0; i < idems.size(); ++i) labels[i] = find(i);
  return labels;
}

template <ScalarField F>
struct ProjectiveClass {
  Vec<F> representative;  // lexicographically smallest idempotent
  std::size_t size = 0;
  std::size_t module_dim = 0;  // dim_F of e * A^n
  std::vector<std::size_t> members;  // indices into the idempotent list
};

template <ScalarField F>
struct Classification {
  AlgebraPtr<F> mat;  // Mat_n(A); null for n = 0
  std::size_t n = 0;
  std::vector<Vec<F>> idempotents;
  std::vector<std::size_t> labels;
  std::vector<ProjectiveClass<F>> classes;
};

// Isomorphism classes of projective right A-modules with at most n
// generators, as connected components of I(Mat_n(A)).
template <ScalarField F>
Classification<F> classify_projectives(const AlgebraPtr<F>& a, std::size_t n,
                                       Budget& budget) {
  if (n == 0) {
    Classification<F> c{nullptr, 0, {Vec<F>{}}, {0}, {}};
    c.classes.push_back(ProjectiveClass<F>{Vec<F>{}, 1, 0, {0}});
    return c;
  }
  Classification<F> c{matrix_algebra(a, n), n, {}, {}, {}};
  c.idempotents = enumerate_idempotents(c.mat, budget);
  c.labels = connected_components(c.mat, c.idempotents, budget);
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < c.idempotents.size(); ++i)
    if (std::find(roots.begin(), roots.end(), c.labels[i]) == roots.end())
      roots.push_back(c.labels[i]);
  for (std::size_t root : roots) {
    ProjectiveClass<F> cls;
    for (std::size_t i = 0; i < c.idempotents.size(); ++i)
      if (c.labels[i] == root) cls.members.push_back(i);
    cls.size = cls.members.size();
    cls.representative = c.idempotents[cls.members.front()];
    cls.module_dim = rank(matrix_left_operator(a, n, cls.representative));
    c.classes.push_back(std::move(cls));
  }
  std::sort(c.classes.begin(), c.classes.end(),
            [&](const ProjectiveClass<F>& x, const ProjectiveClass<F>& y) {
              if (x.module_dim != y.module_dim) return x.module_dim < y.module_dim;
              return detail::lex_less(a->field(), x.representative,
                                      y.representative);
            });
  return c;
}

// Zero-extension of an idempotent of Mat_n(A) into Mat_{n+1}(A).
template <ScalarField F>
Vec<F> stabilize_idempotent(const AlgebraPtr<F>& a, std::size_t n,
                            const Vec<F>& e) {
  const F& fld = a->field();
  const std::size_t da = a->dim();
  Vec<F> out = zero_vec(fld, (n + 1) * (n + 1) * da);
  for (std::size_t idx = 0; idx < e.size(); ++idx) {
    if (fld.is_zero(e[idx])) continue;
    std::size_t t = idx % da, cell = idx / da;
    std::size_t k = cell / n, l = cell % n;
    out[(k * (n + 1) + l) * da + t] = e[idx];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Homogeneity: I(A x_B C) versus the iso-comma fiber product of groupoids

struct HomogeneityReport {
  bool equivalent = true;
  std::string witness;  // first failure found, empty when equivalent
  std::size_t fiber_objects = 0;
  std::size_t comma_objects = 0;
};

// Compares I applied to the strict fiber product A x_B C against the
// iso-comma groupoid whose objects are triples (a, c, theta: phi(a) ->
// psi(c)); the comparison functor sends d to (p(d), q(d), identity).
// Essential surjectivity and full faithfulness are checked exhaustively.
template <ScalarField F>
HomogeneityReport homogeneity_check(const AlgMap<F>& phi, const AlgMap<F>& psi,
                                    Budget& budget) {
  require(phi.dst.get() == psi.dst.get(), ErrorCode::AlgebraMismatch,
          "the two maps must share their target");
  require(is_surjective(phi), ErrorCode::NotSurjective,
          "first leg must be surjective");
  require(nilpotency_degree(*phi.src, kernel_rows(phi)).has_value(),
          ErrorCode::NotNilpotent, "first leg must have nilpotent kernel");
  FiberProduct<F> fp = fiber_product(phi, psi);

  IdemGroupoid<F> gd = groupoid(fp.alg, budget);
  IdemGroupoid<F> ga = groupoid(phi.src, budget);
  IdemGroupoid<F> gc = groupoid(psi.src, budget);
  IdemGroupoid<F> gb = groupoid(phi.dst, budget);

  HomogeneityReport rep;
  rep.fiber_objects = gd.objects.size();

  // index morphisms of a groupoid by (src, dst)
  auto index_homs = [](const IdemGroupoid<F>& g) {
    std::vector<std::vector<std::vector<std::size_t>>> by(
        g.objects.size(),
        std::vector<std::vector<std::size_t>>(g.objects.size()));
    for (std::size_t m = 0; m < g.morphisms.size(); ++m)
      by[g.morphisms[m].src][g.morphisms[m].dst].push_back(m);
    return by;
  };
  auto ha = index_homs(ga);
  auto hc = index_homs(gc);
  auto hb = index_homs(gb);
  auto hd = index_homs(gd);

  auto apply_pair = [](const AlgMap<F>& m, const IsoPair<F>& pr) {
    return std::make_pair(pr.f * m.m, pr.g * m.m);
  };
  // compose in I(B): `then` after `first`
  auto compose_b = [&](const std::pair<Vec<F>, Vec<F>>& first,
                       const std::pair<Vec<F>, Vec<F>>& then) {
    return std::make_pair(phi.dst->mul(then.first, first.first),
                          phi.dst->mul(first.second, then.second));
  };

  // object images of the two projections, as groupoid indices
  std::vector<std::size_t> pd(gd.objects.size()), qd(gd.objects.size());
  for (std::size_t i = 0; i < gd.objects.size(); ++i) {
    auto ia = ga.object_index(gd.objects[i] * fp.to_first.m);
    auto ic = gc.object_index(gd.objects[i] * fp.to_second.m);
    require(ia && ic, ErrorCode::InvariantViolation,
            "projection of an idempotent is not idempotent");
    pd[i] = *ia;
    qd[i] = *ic;
  }
  std::vector<std::size_t> a_in_b(ga.objects.size()), c_in_b(gc.objects.size());
  for (std::size_t i = 0; i < ga.objects.size(); ++i) {
    auto ib = gb.object_index(ga.objects[i] * phi.m);
    require(ib.has_value(), ErrorCode::InvariantViolation, "phi not a map");
    a_in_b[i] = *ib;
  }
  for (std::size_t i = 0; i < gc.objects.size(); ++i) {
    auto ib = gb.object_index(gc.objects[i] * psi.m);
    require(ib.has_value(), ErrorCode::InvariantViolation, "psi not a map");
    c_in_b[i] = *ib;
  }

  // --- essential surjectivity over all comma objects (a, c, theta)
  for (std::size_t ai = 0; ai < ga.objects.size() && rep.equivalent; ++ai)
    for (std::size_t ci = 0; ci < gc.objects.size() && rep.equivalent; ++ci)
      for (std::size_t th : hb[a_in_b[ai]][c_in_b[ci]]) {
        ++rep.comma_objects;
        const IsoPair<F>& theta = gb.morphisms[th];
        bool hit = false;
        for (std::size_t di = 0; di < gd.objects.size() && !hit; ++di) {
          // want alpha: p(d) -> a, gamma: q(d) -> c with
          // theta o phi(alpha) = psi(gamma)
          for (std::size_t am : ha[pd[di]][ai]) {
            auto lhs = compose_b(apply_pair(phi, ga.morphisms[am]),
                                 std::make_pair(theta.f, theta.g));
            for (std::size_t cm : hc[qd[di]][ci]) {
              auto rhs = apply_pair(psi, gc.morphisms[cm]);
              if (lhs == rhs) {
                hit = true;
                break;
              }
            }
            if (hit) break;
          }
        }
        if (!hit) {
          rep.equivalent = false;
          rep.witness = "no fiber idempotent hits the comma object with a = " +
                        phi.src->format(ga.objects[ai]) + ", c = " +
                        psi.src->format(gc.objects[ci]) + ", theta = (" +
                        phi.dst->format(theta.f) + ", " +
                        phi.dst->format(theta.g) + ")";
          break;
        }
      }

  // --- full faithfulness on all pairs of fiber objects
  for (std::size_t d1 = 0; d1 < gd.objects.size() && rep.equivalent; ++d1)
    for (std::size_t d2 = 0; d2 < gd.objects.size() && rep.equivalent; ++d2) {
      // comma morphisms between the images have identity thetas, so the
      // square condition is phi(alpha) = psi(gamma)
      std::size_t comma_count = 0;
      for (std::size_t am : ha[pd[d1]][pd[d2]]) {
        auto img = apply_pair(phi, ga.morphisms[am]);
        for (std::size_t cm : hc[qd[d1]][qd[d2]])
          if (img == apply_pair(psi, gc.morphisms[cm])) ++comma_count;
      }
      if (comma_count != hd[d1][d2].size()) {
        rep.equivalent = false;
        rep.witness = "morphism counts differ between fiber objects " +
                      fp.alg->format(gd.objects[d1]) + " and " +
                      fp.alg->format(gd.objects[d2]) + ": " +
                      std::to_string(hd[d1][d2].size()) + " in the fiber, " +
                      std::to_string(comma_count) + " in the comma groupoid";
      }
    }
  return rep;
}

// Matrix-level extension of an algebra map: Mat_n(phi) acts entrywise.
// Pass pre-built matrix algebras to share them between several maps (e.g.
// when two maps into Mat_n(B) must literally agree on their target).
template <ScalarField F>
AlgMap<F> matrix_map(const AlgMap<F>& phi, std::size_t n,
                     std::type_identity_t<AlgebraPtr<F>> msrc = nullptr,
                     std::type_identity_t<AlgebraPtr<F>> mdst = nullptr) {
  const F& fld = phi.src->field();
  const std::size_t da = phi.src->dim(), db = phi.dst->dim();
  if (!msrc) msrc = matrix_algebra(phi.src, n);
  if (!mdst) mdst = matrix_algebra(phi.dst, n);
  Mat<F> m(fld, n * n * da, n * n * db);
  for (std::size_t cell = 0; cell < n * n; ++cell)
    for (std::size_t t = 0; t < da; ++t)
      for (std::size_t s = 0; s < db; ++s)
        m.at(cell * da + t, cell * db + s) = phi.m.at(t, s);
  return make_alg_map(msrc, mdst, std::move(m));
}

}  // namespace ncm
