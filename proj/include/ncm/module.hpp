#pragma once

// Finite-dimensional right modules over a structure-constant algebra, module
// maps, sub/quotient modules, intertwiner spaces, isomorphism testing with
// certificates, projectivity with an explicit splitting, and bimodules.
//
// Row convention: module elements are coordinate rows, the action of the
// basis element b_i is v |-> v * act[i], and a module map f is a matrix
// applied on the right.  "First f then g" composes as f.m * g.m.
//
// Bimodules over A are right modules over the enveloping algebra
// A^e = A (x) A^op, with the convention m . (a (x) b^op) = b * m * a; the
// BimoduleSpace type below additionally handles (L, R)-bimodules over two
// different algebras (needed for relative tensor products).

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncm/algebra.hpp"
#include "ncm/budget.hpp"
#include "ncm/errors.hpp"
#include "ncm/field.hpp"
#include "ncm/la.hpp"

namespace ncm {

template <ScalarField F>
struct RightModule {
  AlgebraPtr<F> alg;
  std::size_t dim = 0;
  std::vector<Mat<F>> act;  // one dim x dim matrix per algebra basis element

  Mat<F> action_matrix(const Vec<F>& a) const {
    Mat<F> m(alg->field(), dim, dim);
    for (std::size_t i = 0; i < alg->dim(); ++i) {
      if (alg->field().is_zero(a[i])) continue;
      m = m + a[i] * act[i];
    }
    return m;
  }
  Vec<F> act_on(const Vec<F>& v, const Vec<F>& a) const {
    return v * action_matrix(a);
  }
};

// Validates that `act` defines a unital representation.  Multiplicativity is
// checked on (basis x generating set), which suffices: linearity handles the
// rest and products of generators are reached inductively.
template <ScalarField F>
RightModule<F> make_module(AlgebraPtr<F> alg, std::size_t dim,
                           std::vector<Mat<F>> act) {
  const F& fld = alg->field();
  require(act.size() == alg->dim(), ErrorCode::BadDimension,
          "need one action matrix per basis element");
  for (const auto& m : act)
    require(m.rows() == dim && m.cols() == dim, ErrorCode::BadDimension,
            "action matrix has wrong shape");
  RightModule<F> mod{alg, dim, std::move(act)};
  // unit acts as identity
  if (mod.action_matrix(alg->unit()) != Mat<F>::identity(fld, dim))
    fail(ErrorCode::NotAMap, "unit does not act as the identity");
  std::vector<std::size_t> gens = generating_set(*alg);
  for (std::size_t i = 0; i < alg->dim(); ++i)
    for (std::size_t g : gens) {
      Vec<F> prod = alg->mul(alg->basis_elem(i), alg->basis_elem(g));
      if (mod.act[i] * mod.act[g] != mod.action_matrix(prod))
        fail(ErrorCode::NotAMap,
             "action is not multiplicative on (" + alg->basis_names()[i] +
                 ", " + alg->basis_names()[g] + ")");
    }
  return mod;
}

template <ScalarField F>
RightModule<F> zero_module(AlgebraPtr<F> alg) {
  return RightModule<F>{alg, 0,
                        std::vector<Mat<F>>(alg->dim(), Mat<F>(alg->field(), 0, 0))};
}

// Free right module A^n; basis (copy c, algebra basis m) at c*dim(A)+m.
template <ScalarField F>
RightModule<F> free_module(AlgebraPtr<F> alg, std::size_t n) {
  const F& fld = alg->field();
  std::vector<Mat<F>> act;
  act.reserve(alg->dim());
  Mat<F> eye(fld, n, n);
  for (std::size_t c = 0; c < n; ++c) eye.at(c, c) = fld.one();
  for (std::size_t i = 0; i < alg->dim(); ++i)
    act.push_back(kron(eye, alg->right_mult(alg->basis_elem(i))));
  return RightModule<F>{alg, n * alg->dim(), std::move(act)};
}

template <ScalarField F>
struct ModuleMap {
  const RightModule<F>* src;
  const RightModule<F>* dst;
  Mat<F> m;

  Vec<F> apply(const Vec<F>& v) const { return v * m; }
};

template <ScalarField F>
bool intertwines(const RightModule<F>& src, const RightModule<F>& dst,
                 const Mat<F>& m) {
  for (std::size_t i = 0; i < src.alg->dim(); ++i)
    if (src.act[i] * m != m * dst.act[i]) return false;
  return true;
}

template <ScalarField F>
ModuleMap<F> make_module_map(const RightModule<F>& src,
                             const RightModule<F>& dst, Mat<F> m) {
  require(m.rows() == src.dim && m.cols() == dst.dim, ErrorCode::BadDimension,
          "module-map matrix has wrong shape");
  require(intertwines(src, dst, m), ErrorCode::NotAMap,
          "matrix does not commute with the action");
  return ModuleMap<F>{&src, &dst, std::move(m)};
}

// ---------------------------------------------------------------------------
// Sub and quotient modules

template <ScalarField F>
struct Submodule {
  RightModule<F> mod;
  Mat<F> inclusion;  // mod.dim x ambient.dim
};

// Closure of the span under the action, as a canonical submodule.
template <ScalarField F>
std::vector<Vec<F>> module_span(const RightModule<F>& m,
                                const std::vector<Vec<F>>& rows) {
  const F& fld = m.alg->field();
  std::vector<Vec<F>> basis;
  auto absorb = [&](const Vec<F>& v) {
    if (in_row_space(fld, basis, v)) return false;
    basis.push_back(v);
    return true;
  };
  for (const auto& r : rows) absorb(r);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Vec<F>> snapshot = basis;
    for (const auto& v : snapshot)
      for (std::size_t i = 0; i < m.alg->dim(); ++i)
        if (absorb(v * m.act[i])) grew = true;
  }
  if (basis.empty()) return basis;
  return row_basis(Mat<F>::from_rows(fld, basis, m.dim));
}

template <ScalarField F>
Submodule<F> submodule(const RightModule<F>& ambient,
                       const std::vector<Vec<F>>& span_rows,
                       bool close = true) {
  const F& fld = ambient.alg->field();
  std::vector<Vec<F>> basis =
      close ? module_span(ambient, span_rows)
            : (span_rows.empty()
                   ? span_rows
                   : row_basis(Mat<F>::from_rows(fld, span_rows, ambient.dim)));
  const std::size_t d = basis.size();
  Mat<F> inc = Mat<F>::from_rows(fld, basis, ambient.dim);
  std::vector<Mat<F>> act;
  for (std::size_t i = 0; i < ambient.alg->dim(); ++i) {
    Mat<F> a(fld, d, d);
    for (std::size_t r = 0; r < d; ++r) {
      Vec<F> img = basis[r] * ambient.act[i];
      auto c = solve_left(inc, img);
      require(c.has_value(), ErrorCode::NotAMap,
              "span is not closed under the action");
      a.set_row(r, *c);
    }
    act.push_back(std::move(a));
  }
  return {RightModule<F>{ambient.alg, d, std::move(act)}, std::move(inc)};
}

template <ScalarField F>
struct QuotientModule {
  RightModule<F> mod;
  Mat<F> projection;  // ambient.dim x mod.dim
};

template <ScalarField F>
QuotientModule<F> quotient_module(const RightModule<F>& ambient,
                                  const std::vector<Vec<F>>& sub_rows) {
  const F& fld = ambient.alg->field();
  CosetSpace<F> cs(fld, ambient.dim, sub_rows);
  const std::size_t d = cs.dim();
  std::vector<Mat<F>> act;
  for (std::size_t i = 0; i < ambient.alg->dim(); ++i) {
    Mat<F> a(fld, d, d);
    for (std::size_t r = 0; r < d; ++r) {
      Vec<F> rep = cs.lift(unit_row<F>(fld, d, r));
      a.set_row(r, cs.reduce(rep * ambient.act[i]));
    }
    act.push_back(std::move(a));
  }
  Mat<F> proj(fld, ambient.dim, d);
  for (std::size_t r = 0; r < ambient.dim; ++r)
    proj.set_row(r, cs.reduce(unit_row<F>(fld, ambient.dim, r)));
  return {RightModule<F>{ambient.alg, d, std::move(act)}, std::move(proj)};
}

template <ScalarField F>
RightModule<F> direct_sum(const RightModule<F>& a, const RightModule<F>& b) {
  require(a.alg.get() == b.alg.get(), ErrorCode::BadDimension,
          "direct sum needs a common algebra");
  const F& fld = a.alg->field();
  std::vector<Mat<F>> act;
  for (std::size_t i = 0; i < a.alg->dim(); ++i) {
    Mat<F> m(fld, a.dim + b.dim, a.dim + b.dim);
    for (std::size_t r = 0; r < a.dim; ++r)
      for (std::size_t c = 0; c < a.dim; ++c) m.at(r, c) = a.act[i].at(r, c);
    for (std::size_t r = 0; r < b.dim; ++r)
      for (std::size_t c = 0; c < b.dim; ++c)
        m.at(a.dim + r, a.dim + c) = b.act[i].at(r, c);
    act.push_back(std::move(m));
  }
  return RightModule<F>{a.alg, a.dim + b.dim, std::move(act)};
}

// Image and kernel of a module map, as canonical submodules of dst/src.
template <ScalarField F>
Submodule<F> image_submodule(const ModuleMap<F>& f) {
  std::vector<Vec<F>> rows;
  for (std::size_t r = 0; r < f.src->dim; ++r) rows.push_back(f.m.row(r));
  return submodule(*f.dst, rows, /*close=*/false);
}

template <ScalarField F>
Submodule<F> kernel_submodule(const ModuleMap<F>& f) {
  return submodule(*f.src, left_kernel(f.m), /*close=*/false);
}

// ---------------------------------------------------------------------------
// Hom spaces, isomorphism, projectivity

// Basis of Hom_A(M, N) as matrices.  The linear system only ranges over a
// generating set of A (sufficient; see make_module).
template <ScalarField F>
std::vector<Mat<F>> intertwiner_space(const RightModule<F>& m,
                                      const RightModule<F>& n) {
  const F& fld = m.alg->field();
  std::vector<std::size_t> gens = generating_set(*m.alg);
  const std::size_t unknowns = m.dim * n.dim;
  if (unknowns == 0) return {};
  // system: for each generator g, m.act[g] * X - X * n.act[g] == 0
  Mat<F> sys(fld, unknowns, gens.size() * m.dim * n.dim);
  for (std::size_t gi = 0; gi < gens.size(); ++gi) {
    const Mat<F>& am = m.act[gens[gi]];
    const Mat<F>& an = n.act[gens[gi]];
    for (std::size_t r = 0; r < m.dim; ++r)
      for (std::size_t c = 0; c < n.dim; ++c) {
        const std::size_t eq = (gi * m.dim + r) * n.dim + c;
        for (std::size_t k = 0; k < m.dim; ++k)
          sys.at(k * n.dim + c, eq) += am.at(r, k);
        for (std::size_t k = 0; k < n.dim; ++k)
          sys.at(r * n.dim + k, eq) -= an.at(k, c);
      }
  }
  std::vector<Vec<F>> sols = left_kernel(sys);
  std::vector<Mat<F>> out;
  for (const auto& s : sols) {
    Mat<F> x(fld, m.dim, n.dim);
    for (std::size_t r = 0; r < m.dim; ++r)
      for (std::size_t c = 0; c < n.dim; ++c) x.at(r, c) = s[r * n.dim + c];
    out.push_back(std::move(x));
  }
  return out;
}

// Search for an invertible intertwiner; returns a certificate matrix.
// Enumerates coefficient combinations over the (finite) field, ticking the
// budget once per candidate.
template <ScalarField F>
std::optional<Mat<F>> find_isomorphism(const RightModule<F>& m,
                                       const RightModule<F>& n,
                                       Budget& budget) {
  if (m.dim != n.dim) return std::nullopt;
  if (m.dim == 0) return Mat<F>(m.alg->field(), 0, 0);
  const F& fld = m.alg->field();
  std::vector<Mat<F>> basis = intertwiner_space(m, n);
  if (basis.empty()) return std::nullopt;
  // single basis elements first (cheap and usually enough)
  for (const auto& b : basis) {
    budget.tick();
    if (rank(b) == m.dim) return b;
  }
  std::optional<Mat<F>> found;
  for_each_vector(fld, basis.size(), [&](const Vec<F>& coeff) {
    budget.tick();
    Mat<F> cand(fld, m.dim, n.dim);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (fld.is_zero(coeff[i])) continue;
      cand = cand + coeff[i] * basis[i];
    }
    if (rank(cand) == m.dim) {
      found = cand;
      return false;
    }
    return true;
  });
  return found;
}

// Greedy module generators: standard basis vectors added until they span.
template <ScalarField F>
std::vector<Vec<F>> module_generators(const RightModule<F>& m) {
  const F& fld = m.alg->field();
  std::vector<Vec<F>> gens;
  std::vector<Vec<F>> span;
  for (std::size_t i = 0; i < m.dim; ++i) {
    Vec<F> e = unit_row<F>(fld, m.dim, i);
    if (in_row_space(fld, span, e)) continue;
    gens.push_back(e);
    for (const auto& v : module_span(m, gens)) {
      if (!in_row_space(fld, span, v)) span.push_back(v);
    }
    if (span.size() == m.dim) break;
  }
  return gens;
}

// The free cover on the greedy generators: pi: A^g -> M.
template <ScalarField F>
struct FreeCover {
  RightModule<F> free;
  std::vector<Vec<F>> generators;
  Mat<F> pi;  // free.dim x m.dim
};

template <ScalarField F>
FreeCover<F> free_cover(const RightModule<F>& m) {
  const F& fld = m.alg->field();
  std::vector<Vec<F>> gens = module_generators(m);
  RightModule<F> fr = free_module(m.alg, gens.size());
  Mat<F> pi(fld, fr.dim, m.dim);
  for (std::size_t c = 0; c < gens.size(); ++c)
    for (std::size_t b = 0; b < m.alg->dim(); ++b)
      pi.set_row(c * m.alg->dim() + b, gens[c] * m.act[b]);
  require(intertwines(fr, m, pi), ErrorCode::InvariantViolation,
          "free cover projection is not a module map");
  require(rank(pi) == m.dim, ErrorCode::InvariantViolation,
          "free cover does not surject");
  return {std::move(fr), std::move(gens), std::move(pi)};
}

// Projectivity via an explicit splitting of the free cover: solve for a
// module map s: M -> A^g with s . pi = id.  Returns the splitting matrix if
// one exists.
template <ScalarField F>
std::optional<Mat<F>> projective_splitting(const RightModule<F>& m) {
  if (m.dim == 0) return Mat<F>(m.alg->field(), 0, 0);
  const F& fld = m.alg->field();
  FreeCover<F> cover = free_cover(m);
  const RightModule<F>& fr = cover.free;
  std::vector<std::size_t> gens = generating_set(*m.alg);
  const std::size_t unknowns = m.dim * fr.dim;
  // columns: intertwining constraints, then the s*pi = id constraints
  const std::size_t eq_int = gens.size() * m.dim * fr.dim;
  const std::size_t eq_split = m.dim * m.dim;
  Mat<F> sys(fld, unknowns, eq_int + eq_split);
  Vec<F> rhs(eq_int + eq_split, fld.zero());
  for (std::size_t gi = 0; gi < gens.size(); ++gi) {
    const Mat<F>& am = m.act[gens[gi]];
    const Mat<F>& af = fr.act[gens[gi]];
    for (std::size_t r = 0; r < m.dim; ++r)
      for (std::size_t c = 0; c < fr.dim; ++c) {
        const std::size_t eq = (gi * m.dim + r) * fr.dim + c;
        for (std::size_t k = 0; k < m.dim; ++k)
          sys.at(k * fr.dim + c, eq) += am.at(r, k);
        for (std::size_t k = 0; k < fr.dim; ++k)
          sys.at(r * fr.dim + k, eq) -= af.at(k, c);
      }
  }
  for (std::size_t r = 0; r < m.dim; ++r)
    for (std::size_t c = 0; c < m.dim; ++c) {
      const std::size_t eq = eq_int + r * m.dim + c;
      for (std::size_t k = 0; k < fr.dim; ++k)
        sys.at(r * fr.dim + k, eq) += cover.pi.at(k, c);
      if (r == c) rhs[eq] = fld.one();
    }
  // solve x * sys == rhs for a row x of unknowns (x encodes s row-major)
  auto sol = solve_left(sys, rhs);
  if (!sol) return std::nullopt;
  Mat<F> s(fld, m.dim, fr.dim);
  for (std::size_t r = 0; r < m.dim; ++r)
    for (std::size_t c = 0; c < fr.dim; ++c) s.at(r, c) = (*sol)[r * fr.dim + c];
  require(intertwines(m, fr, s), ErrorCode::InvariantViolation,
          "computed splitting is not a module map");
  require(s * cover.pi == Mat<F>::identity(fld, m.dim),
          ErrorCode::InvariantViolation, "computed splitting does not split");
  return s;
}

template <ScalarField F>
bool is_projective(const RightModule<F>& m) {
  return projective_splitting(m).has_value();
}

// ---------------------------------------------------------------------------
// Bimodules

// A bimodule over A is a right module over A^e = A (x) A^op with
// m . (a (x) b^op) = b * m * a; index of a_i (x) a_j^op is i*dim(A)+j.
template <ScalarField F>
Vec<F> env_elem(const FinAlgebra<F>& a, const Vec<F>& x, const Vec<F>& y_op) {
  Vec<F> v = zero_vec(a.field(), a.dim() * a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (a.field().is_zero(x[i])) continue;
    for (std::size_t j = 0; j < a.dim(); ++j) v[i * a.dim() + j] = x[i] * y_op[j];
  }
  return v;
}

// Build the A^e-module from left/right action matrices (row convention:
// m * left_act[i] = b_i * m, m * right_act[i] = m * b_i).
template <ScalarField F>
RightModule<F> bimodule_from_actions(AlgebraPtr<F> env, const AlgebraPtr<F>& a,
                                     std::size_t dim,
                                     const std::vector<Mat<F>>& left_act,
                                     const std::vector<Mat<F>>& right_act) {
  require(env->dim() == a->dim() * a->dim(), ErrorCode::BadDimension,
          "enveloping algebra dimension mismatch");
  std::vector<Mat<F>> act;
  act.reserve(env->dim());
  for (std::size_t i = 0; i < a->dim(); ++i)
    for (std::size_t j = 0; j < a->dim(); ++j)
      act.push_back(left_act[j] * right_act[i]);  // b_j * m * b_i
  return make_module(env, dim, std::move(act));
}

// A itself as a bimodule.
template <ScalarField F>
RightModule<F> regular_bimodule(AlgebraPtr<F> env, const AlgebraPtr<F>& a) {
  std::vector<Mat<F>> left, right;
  for (std::size_t i = 0; i < a->dim(); ++i) {
    left.push_back(a->left_mult(a->basis_elem(i)));
    right.push_back(a->right_mult(a->basis_elem(i)));
  }
  return bimodule_from_actions(env, a, a->dim(), left, right);
}

// Extract one-sided action matrices back out of an A^e-module.
template <ScalarField F>
Mat<F> bimodule_left_action(const RightModule<F>& env_mod,
                            const FinAlgebra<F>& a, const Vec<F>& x) {
  return env_mod.action_matrix(env_elem(a, a.unit(), x));
}
template <ScalarField F>
Mat<F> bimodule_right_action(const RightModule<F>& env_mod,
                             const FinAlgebra<F>& a, const Vec<F>& x) {
  return env_mod.action_matrix(env_elem(a, x, a.unit()));
}

// ---------------------------------------------------------------------------
// (L, R)-bimodule spaces over two algebras, and relative tensor products

template <ScalarField F>
struct BimoduleSpace {
  AlgebraPtr<F> left_alg, right_alg;
  std::size_t dim = 0;
  std::vector<Mat<F>> left_act;   // m * left_act[i] = b_i . m
  std::vector<Mat<F>> right_act;  // m * right_act[i] = m . b_i
};

template <ScalarField F>
BimoduleSpace<F> make_bimodule_space(AlgebraPtr<F> l, AlgebraPtr<F> r,
                                     std::size_t dim,
                                     std::vector<Mat<F>> left_act,
                                     std::vector<Mat<F>> right_act) {
  const F& fld = l->field();
  BimoduleSpace<F> b{std::move(l), std::move(r), dim, std::move(left_act),
                     std::move(right_act)};
  auto lmat = [&](const Vec<F>& x) {
    Mat<F> m(fld, dim, dim);
    for (std::size_t i = 0; i < b.left_alg->dim(); ++i)
      if (!fld.is_zero(x[i])) m = m + x[i] * b.left_act[i];
    return m;
  };
  auto rmat = [&](const Vec<F>& x) {
    Mat<F> m(fld, dim, dim);
    for (std::size_t i = 0; i < b.right_alg->dim(); ++i)
      if (!fld.is_zero(x[i])) m = m + x[i] * b.right_act[i];
    return m;
  };
  require(lmat(b.left_alg->unit()) == Mat<F>::identity(fld, dim),
          ErrorCode::NotAMap, "left unit does not act as identity");
  require(rmat(b.right_alg->unit()) == Mat<F>::identity(fld, dim),
          ErrorCode::NotAMap, "right unit does not act as identity");
  std::vector<std::size_t> lgens = generating_set(*b.left_alg);
  std::vector<std::size_t> rgens = generating_set(*b.right_alg);
  for (std::size_t i = 0; i < b.left_alg->dim(); ++i)
    for (std::size_t g : lgens) {
      // b_i . (b_g . m): apply left_act[g] then left_act[i]
      Vec<F> prod = b.left_alg->mul(b.left_alg->basis_elem(i),
                                    b.left_alg->basis_elem(g));
      if (b.left_act[g] * b.left_act[i] != lmat(prod))
        fail(ErrorCode::NotAMap, "left action is not associative");
    }
  for (std::size_t i = 0; i < b.right_alg->dim(); ++i)
    for (std::size_t g : rgens) {
      Vec<F> prod = b.right_alg->mul(b.right_alg->basis_elem(i),
                                     b.right_alg->basis_elem(g));
      if (b.right_act[i] * b.right_act[g] != rmat(prod))
        fail(ErrorCode::NotAMap, "right action is not associative");
    }
  for (std::size_t i = 0; i < b.left_alg->dim(); ++i)
    for (std::size_t j = 0; j < b.right_alg->dim(); ++j)
      require(b.left_act[i] * b.right_act[j] == b.right_act[j] * b.left_act[i],
              ErrorCode::NotAMap, "left and right actions do not commute");
  return b;
}

// A as an (A, A)-bimodule space.
template <ScalarField F>
BimoduleSpace<F> regular_bimodule_space(const AlgebraPtr<F>& a) {
  std::vector<Mat<F>> left, right;
  for (std::size_t i = 0; i < a->dim(); ++i) {
    left.push_back(a->left_mult(a->basis_elem(i)));
    right.push_back(a->right_mult(a->basis_elem(i)));
  }
  return make_bimodule_space(a, a, a->dim(), std::move(left), std::move(right));
}

// M (x)_B N for M an (L,B)- and N a (B,R)-bimodule space.
template <ScalarField F>
struct RelativeTensor {
  BimoduleSpace<F> space;
  CosetSpace<F> classes;  // of the ambient M (x)_F N; index (i,j) = i*dim(N)+j
};

template <ScalarField F>
RelativeTensor<F> tensor_over(const BimoduleSpace<F>& m,
                              const BimoduleSpace<F>& n) {
  require(m.right_alg.get() == n.left_alg.get(), ErrorCode::BadDimension,
          "tensor product needs matching middle algebra");
  const F& fld = m.left_alg->field();
  const AlgebraPtr<F>& mid = m.right_alg;
  const std::size_t dm = m.dim, dn = n.dim, amb = dm * dn;
  std::vector<Vec<F>> rels;
  for (std::size_t i = 0; i < dm; ++i)
    for (std::size_t k = 0; k < mid->dim(); ++k)
      for (std::size_t j = 0; j < dn; ++j) {
        // (m_i . b_k) (x) n_j - m_i (x) (b_k . n_j)
        Vec<F> row = zero_vec(fld, amb);
        for (std::size_t t = 0; t < dm; ++t)
          row[t * dn + j] += m.right_act[k].at(i, t);
        for (std::size_t s = 0; s < dn; ++s)
          row[i * dn + s] -= n.left_act[k].at(j, s);
        if (!is_zero_vec(fld, row)) rels.push_back(std::move(row));
      }
  CosetSpace<F> cs(fld, amb, rels);
  const std::size_t d = cs.dim();
  auto induced = [&](const Mat<F>& on_m, const Mat<F>& on_n) {
    // the ambient operator on_m (x) on_n, pushed to the quotient
    Mat<F> out(fld, d, d);
    for (std::size_t r = 0; r < d; ++r) {
      Vec<F> rep = cs.lift(unit_row<F>(fld, d, r));
      Vec<F> img = zero_vec(fld, amb);
      for (std::size_t i = 0; i < dm; ++i)
        for (std::size_t j = 0; j < dn; ++j) {
          if (fld.is_zero(rep[i * dn + j])) continue;
          for (std::size_t t = 0; t < dm; ++t) {
            if (fld.is_zero(on_m.at(i, t))) continue;
            for (std::size_t s = 0; s < dn; ++s)
              img[t * dn + s] += rep[i * dn + j] * on_m.at(i, t) * on_n.at(j, s);
          }
        }
      out.set_row(r, cs.reduce(img));
    }
    return out;
  };
  Mat<F> idm = Mat<F>::identity(fld, dm), idn = Mat<F>::identity(fld, dn);
  std::vector<Mat<F>> left, right;
  for (std::size_t i = 0; i < m.left_alg->dim(); ++i)
    left.push_back(induced(m.left_act[i], idn));
  for (std::size_t i = 0; i < n.right_alg->dim(); ++i)
    right.push_back(induced(idm, n.right_act[i]));
  BimoduleSpace<F> result = make_bimodule_space(m.left_alg, n.right_alg, d,
                                                std::move(left), std::move(right));
  return {std::move(result), std::move(cs)};
}

}  // namespace ncm
