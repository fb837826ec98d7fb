// Counting filtrations of finite modules over a finite-dimensional algebra
// over a finite field: complete classification of right modules of bounded
// dimension up to isomorphism, Hall numbers g^L_{M,N} counting submodules
// with prescribed sub and quotient classes, the induced graded product with
// the zero module as two-sided unit, and two consistency batteries — the
// triangular fiber-product (gluing) identities and associativity of the
// product.  All enumeration is deterministic and budget-metered.

#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncm/algebra.hpp"
#include "ncm/budget.hpp"
#include "ncm/errors.hpp"
#include "ncm/la.hpp"
#include "ncm/module.hpp"
#include "ncm/presentation.hpp"
#include "ncm/weil.hpp"

namespace ncm {

// ---------------------------------------------------------------------------
// Radical and fingerprints

// Basis of the radical, computed from first principles: an element lies in
// the radical exactly when the two-sided ideal it generates is nilpotent
// (the radical is the largest nilpotent ideal, it contains every nilpotent
// ideal, and each of its elements generates one).  Enumerates all q^dim
// elements, ticking the budget once per element; exact over any finite
// field, with no characteristic caveats.
template <ScalarField F>
std::vector<Vec<F>> radical_rows(const AlgebraPtr<F>& a, Budget& budget) {
  const F& fld = a->field();
  require(fld.finite(), ErrorCode::Unsupported,
          "radical enumeration needs a finite field");
  std::vector<Vec<F>> members;
  for_each_vector(fld, a->dim(), [&](const Vec<F>& x) {
    budget.tick();
    if (is_zero_vec(fld, x)) return true;
    std::vector<Vec<F>> ideal = ideal_closure(*a, {x});
    if (nilpotency_degree(*a, ideal).has_value()) members.push_back(x);
    return true;
  });
  if (members.empty()) return members;
  return row_basis(Mat<F>::from_rows(fld, members, a->dim()));
}

// Isomorphism-invariant fingerprint of a module: its dimension followed by
// the dimensions of the chain M·J ⊇ M·J² ⊇ … for the radical J, ending with
// the first zero.  Isomorphic modules have equal fingerprints because the
// chain is defined from the algebra alone; the converse is settled by an
// explicit intertwiner (see enumerate_module_classes).
template <ScalarField F>
std::vector<std::size_t> module_fingerprint(
    const RightModule<F>& m, const std::vector<Vec<F>>& radical) {
  const F& fld = m.alg->field();
  std::vector<Mat<F>> ops;
  ops.reserve(radical.size());
  for (const auto& j : radical) ops.push_back(m.action_matrix(j));
  std::vector<std::size_t> fp{m.dim};
  std::vector<Vec<F>> layer;
  for (std::size_t r = 0; r < m.dim; ++r)
    layer.push_back(unit_row<F>(fld, m.dim, r));
  for (std::size_t step = 0; fp.back() > 0; ++step) {
    // a nilpotent J makes the chain strictly decreasing, so it must reach
    // zero within dim(M) steps
    require(step <= m.dim, ErrorCode::InvariantViolation,
            "radical filtration failed to terminate");
    std::vector<Vec<F>> next;
    for (const auto& v : layer)
      for (const auto& op : ops) {
        Vec<F> w = v * op;
        if (!is_zero_vec(fld, w)) next.push_back(w);
      }
    layer = next.empty() ? next
                         : row_basis(Mat<F>::from_rows(fld, next, m.dim));
    fp.push_back(layer.size());
  }
  return fp;
}

// ---------------------------------------------------------------------------
// Module classes

// One isomorphism class of right modules, by chosen representative.  Classes
// produced by a single enumeration carry distinct ids, and a candidate is
// assigned an existing id only once an invertible intertwiner to that
// class's representative has been found and validated.
template <ScalarField F>
struct ModuleClass {
  RightModule<F> rep;
  std::vector<std::size_t> fingerprint;
  std::size_t id = 0;

  std::size_t dim() const { return rep.dim; }
};

// Every right module of dimension ≤ bound, up to isomorphism.  A dimension-n
// module structure is exactly a unital algebra map A → Mat_n(F) (acting on
// row vectors), so the enumeration runs over homomorphisms out of the
// tautological presentation of A; duplicates are removed fingerprint-first,
// then by searching for an invertible intertwiner.  Deterministic: classes
// are ordered by dimension, then by enumeration order; the zero module is
// always class 0.
template <ScalarField F>
std::vector<ModuleClass<F>> enumerate_module_classes(const AlgebraPtr<F>& a,
                                                     std::size_t bound,
                                                     Budget& budget) {
  const F& fld = a->field();
  require(fld.finite(), ErrorCode::Unsupported,
          "module enumeration needs a finite field");
  const std::vector<Vec<F>> rad = radical_rows(a, budget);
  std::vector<ModuleClass<F>> classes;
  RightModule<F> zero = zero_module(a);
  std::vector<std::size_t> zero_fp = module_fingerprint(zero, rad);
  classes.push_back({std::move(zero), std::move(zero_fp), 0});
  const FreePresentation<F> pres = presentation_of(*a);
  for (std::size_t n = 1; n <= bound; ++n) {
    AlgebraPtr<F> mats = matrix_algebra(fld, n);
    for (const auto& images : enumerate_homs(pres, *mats, budget)) {
      std::vector<Mat<F>> act;
      act.reserve(a->dim());
      for (const Vec<F>& img : images) {
        Mat<F> op(fld, n, n);
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t c = 0; c < n; ++c) op.at(r, c) = img[r * n + c];
        act.push_back(std::move(op));
      }
      RightModule<F> mod = make_module(a, n, std::move(act));
      std::vector<std::size_t> fp = module_fingerprint(mod, rad);
      bool known = false;
      for (const ModuleClass<F>& cls : classes) {
        if (cls.rep.dim != n || cls.fingerprint != fp) continue;
        auto cert = find_isomorphism(mod, cls.rep, budget);
        if (!cert.has_value()) continue;
        require(intertwines(mod, cls.rep, *cert) && rank(*cert) == n,
                ErrorCode::InvariantViolation,
                "isomorphism certificate failed validation");
        known = true;
        break;
      }
      if (!known)
        classes.push_back({std::move(mod), std::move(fp), classes.size()});
    }
  }
  return classes;
}

// ---------------------------------------------------------------------------
// Hall numbers

// Which factor the counted submodule must match.  SubIsSecond (the default)
// reads g^L_{M,N} as the number of submodules isomorphic to N whose quotient
// is isomorphic to M; SubIsFirst swaps the two roles.
enum class HallConvention { SubIsSecond, SubIsFirst };

namespace detail {

// Visit every k-dimensional subspace of F^n exactly once, presented by its
// unique reduced row-echelon basis: pivot columns increase, pivot entries
// are one, all other pivot-column entries vanish, and the remaining
// positions right of each pivot range over the field.  Ticks the budget once
// per subspace; the visitor returns false to stop early.
template <ScalarField F, typename Visit>
void for_each_subspace(const F& fld, std::size_t n, std::size_t k,
                       Budget& budget, Visit&& visit) {
  if (k > n) return;
  std::vector<std::size_t> piv(k);
  bool go = true;
  auto fill = [&]() {
    std::vector<bool> is_piv(n, false);
    for (std::size_t p : piv) is_piv[p] = true;
    std::vector<std::pair<std::size_t, std::size_t>> free_pos;
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = piv[r] + 1; c < n; ++c)
        if (!is_piv[c]) free_pos.emplace_back(r, c);
    for_each_vector(fld, free_pos.size(), [&](const Vec<F>& vals) {
      budget.tick();
      std::vector<Vec<F>> rows(k, zero_vec(fld, n));
      for (std::size_t r = 0; r < k; ++r) rows[r][piv[r]] = fld.one();
      for (std::size_t i = 0; i < free_pos.size(); ++i)
        rows[free_pos[i].first][free_pos[i].second] = vals[i];
      go = visit(rows);
      return go;
    });
  };
  auto choose = [&](auto&& self, std::size_t idx, std::size_t from) -> void {
    if (idx == k) {
      fill();
      return;
    }
    for (std::size_t c = from; c + (k - idx - 1) < n && go; ++c) {
      piv[idx] = c;
      self(self, idx + 1, c + 1);
    }
  };
  choose(choose, 0, 0);
}

// Fingerprint-then-intertwiner isomorphism test against a fixed class.
template <ScalarField F>
bool matches_class(const RightModule<F>& cand, const ModuleClass<F>& target,
                   const std::vector<Vec<F>>& radical, Budget& budget) {
  if (cand.dim != target.rep.dim) return false;
  if (module_fingerprint(cand, radical) != target.fingerprint) return false;
  return find_isomorphism(cand, target.rep, budget).has_value();
}

// Exhaustive submodule scan with a precomputed radical.  A subspace closed
// under the action of a generating set is closed under the whole algebra
// (actions are multiplicative and linear, the unit acts as the identity),
// so invariance is only tested on generators.
template <ScalarField F>
std::size_t hall_number_impl(const ModuleClass<F>& l, const ModuleClass<F>& m,
                             const ModuleClass<F>& n,
                             const std::vector<Vec<F>>& radical,
                             Budget& budget, HallConvention conv) {
  const RightModule<F>& big = l.rep;
  const F& fld = big.alg->field();
  const ModuleClass<F>& sub_target =
      (conv == HallConvention::SubIsSecond) ? n : m;
  const ModuleClass<F>& quo_target =
      (conv == HallConvention::SubIsSecond) ? m : n;
  if (sub_target.rep.dim > big.dim) return 0;
  const std::vector<std::size_t> gens = generating_set(*big.alg);
  std::size_t count = 0;
  for_each_subspace(fld, big.dim, sub_target.rep.dim, budget,
                    [&](const std::vector<Vec<F>>& rows) {
                      for (const Vec<F>& v : rows)
                        for (std::size_t g : gens)
                          if (!in_row_space(fld, rows, v * big.act[g]))
                            return true;
                      Submodule<F> sub = submodule(big, rows, /*close=*/false);
                      if (!matches_class(sub.mod, sub_target, radical, budget))
                        return true;
                      QuotientModule<F> quo = quotient_module(big, rows);
                      if (!matches_class(quo.mod, quo_target, radical, budget))
                        return true;
                      ++count;
                      return true;
                    });
  return count;
}

}  // namespace detail

// g^L_{M,N}: the exact number of submodules of (a representative of) L whose
// class matches one factor while the quotient matches the other, per `conv`.
// Exhaustive over all subspaces of the matching dimension; in particular the
// count is zero whenever dim L ≠ dim M + dim N, because no subspace can then
// have both the prescribed sub dimension and the prescribed quotient
// dimension.
template <ScalarField F>
std::size_t hall_number(const ModuleClass<F>& l, const ModuleClass<F>& m,
                        const ModuleClass<F>& n, Budget& budget,
                        HallConvention conv = HallConvention::SubIsSecond) {
  require(l.rep.alg.get() == m.rep.alg.get() &&
              l.rep.alg.get() == n.rep.alg.get(),
          ErrorCode::AlgebraMismatch, "classes live over different algebras");
  const std::vector<Vec<F>> rad = radical_rows(l.rep.alg, budget);
  return detail::hall_number_impl(l, m, n, rad, budget, conv);
}

// The formal sum [M]·[N] = Σ_L g^L_{M,N}·[L] as a map class-id → coefficient
// with zero coefficients omitted.  `classes` must contain every class of
// dimension dim M + dim N (as produced by enumerate_module_classes); only
// classes of exactly that dimension are scanned.
template <ScalarField F>
std::map<std::size_t, std::size_t> hall_product(
    const ModuleClass<F>& m, const ModuleClass<F>& n,
    const std::vector<ModuleClass<F>>& classes, Budget& budget,
    HallConvention conv = HallConvention::SubIsSecond) {
  require(m.rep.alg.get() == n.rep.alg.get(), ErrorCode::AlgebraMismatch,
          "classes live over different algebras");
  const std::vector<Vec<F>> rad = radical_rows(m.rep.alg, budget);
  std::map<std::size_t, std::size_t> out;
  for (const ModuleClass<F>& l : classes) {
    require(l.rep.alg.get() == m.rep.alg.get(), ErrorCode::AlgebraMismatch,
            "class list belongs to a different algebra");
    if (l.rep.dim != m.rep.dim + n.rep.dim) continue;
    std::size_t g = detail::hall_number_impl(l, m, n, rad, budget, conv);
    if (g > 0) out[l.id] = g;
  }
  return out;
}

// ---------------------------------------------------------------------------
// The product table

// The complete multiplication table up to a dimension bound: every structure
// constant g^L_{M,N} with dim M + dim N ≤ bound, keyed (M,N,L) by class id
// with zeros omitted.  Constants vanish off the grading
// dim L = dim M + dim N, and the zero class is a strict two-sided unit; the
// unit law is recomputed from the stored constants and enforced.
template <ScalarField F>
struct HallTable {
  std::size_t bound = 0;
  std::vector<ModuleClass<F>> classes;
  std::map<std::array<std::size_t, 3>, std::size_t> coeffs;

  std::size_t coefficient(std::size_t m, std::size_t n, std::size_t l) const {
    auto it = coeffs.find({m, n, l});
    return it == coeffs.end() ? 0 : it->second;
  }

  // The formal sum [M]·[N] read off the table (class id → coefficient).
  std::map<std::size_t, std::size_t> product(std::size_t m,
                                             std::size_t n) const {
    std::map<std::size_t, std::size_t> out;
    for (const auto& [key, g] : coeffs)
      if (key[0] == m && key[1] == n) out[key[2]] = g;
    return out;
  }
};

template <ScalarField F>
HallTable<F> hall_table(const AlgebraPtr<F>& a, std::size_t bound,
                        Budget& budget,
                        HallConvention conv = HallConvention::SubIsSecond) {
  HallTable<F> table;
  table.bound = bound;
  table.classes = enumerate_module_classes(a, bound, budget);
  const std::vector<Vec<F>> rad = radical_rows(a, budget);
  for (const ModuleClass<F>& m : table.classes)
    for (const ModuleClass<F>& n : table.classes) {
      if (m.rep.dim + n.rep.dim > bound) continue;
      for (const ModuleClass<F>& l : table.classes) {
        if (l.rep.dim != m.rep.dim + n.rep.dim) continue;
        std::size_t g = detail::hall_number_impl(l, m, n, rad, budget, conv);
        if (g > 0) table.coeffs[{m.id, n.id, l.id}] = g;
      }
    }
  require(!table.classes.empty() && table.classes[0].rep.dim == 0,
          ErrorCode::InvariantViolation, "class 0 must be the zero module");
  for (const ModuleClass<F>& c : table.classes) {
    const std::map<std::size_t, std::size_t> expect{{c.id, 1}};
    require(table.product(0, c.id) == expect &&
                table.product(c.id, 0) == expect,
            ErrorCode::InvariantViolation,
            "the zero class is not a strict two-sided unit");
  }
  return table;
}

// ---------------------------------------------------------------------------
// Consistency batteries

namespace detail {

// All compositions of 2..max_total into at least two positive parts, in
// increasing total then lexicographic order.
inline std::vector<std::vector<std::size_t>> block_signatures(
    std::size_t max_total) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t left) -> void {
    if (left == 0) {
      if (cur.size() >= 2) out.push_back(cur);
      return;
    }
    for (std::size_t r = 1; r <= left; ++r) {
      cur.push_back(r);
      self(self, left - r);
      cur.pop_back();
    }
  };
  for (std::size_t total = 2; total <= max_total; ++total) rec(rec, total);
  return out;
}

inline std::string format_signature(const std::vector<std::size_t>& sig) {
  std::string s = "(";
  for (std::size_t i = 0; i < sig.size(); ++i)
    s += (i ? "," : "") + std::to_string(sig[i]);
  return s + ")";
}

// One gluing identity: merging blocks 1..j of the signature into a single
// block must reconstruct the fine triangular algebra as the fiber product of
// the merged algebra (corner truncation, surjective) and the fine corner
// (coarsening inclusion) over the merged corner.  The comparison map sends a
// fine matrix to the pair (itself, viewed coarsely; its leading corner); it
// is injective because the first leg keeps every entry, so a dimension match
// plus the homomorphism property makes it an exact isomorphism.  Returns a
// description of the first failure, or nothing.
template <ScalarField F>
std::optional<std::string> merge_identity_failure(
    const F& fld, const std::vector<std::size_t>& sig, std::size_t j) {
  std::vector<std::size_t> merged{sig[0], 0};
  for (std::size_t b = 1; b <= j; ++b) merged[1] += sig[b];
  const std::size_t corner = sig[0] + merged[1];
  const std::vector<std::size_t> base = merged;
  for (std::size_t b = j + 1; b < sig.size(); ++b) merged.push_back(sig[b]);
  const std::vector<std::size_t> head(sig.begin(), sig.begin() + j + 1);

  AlgebraPtr<F> full_alg = triangular_algebra(fld, sig);
  AlgebraPtr<F> merged_alg = triangular_algebra(fld, merged);
  AlgebraPtr<F> base_alg = triangular_algebra(fld, base);
  AlgebraPtr<F> head_alg = triangular_algebra(fld, head);
  const auto full_units = triangular_units(sig);
  const auto merged_units = triangular_units(merged);
  const auto base_units = triangular_units(base);
  const auto head_units = triangular_units(head);
  check_triangular_layout(full_alg, full_units);
  check_triangular_layout(merged_alg, merged_units);
  check_triangular_layout(base_alg, base_units);
  check_triangular_layout(head_alg, head_units);

  Mat<F> trunc(fld, merged_alg->dim(), base_alg->dim());
  for (std::size_t u = 0; u < merged_units.size(); ++u) {
    const auto [r, c] = merged_units[u];
    if (r < corner && c < corner)
      trunc.at(u, triangular_index(base_units, r, c)) = fld.one();
  }
  Mat<F> coarse(fld, head_alg->dim(), base_alg->dim());
  for (std::size_t u = 0; u < head_units.size(); ++u) {
    const auto [r, c] = head_units[u];
    coarse.at(u, triangular_index(base_units, r, c)) = fld.one();
  }
  FiberProduct<F> fib =
      fiber_product(make_alg_map(merged_alg, base_alg, std::move(trunc)),
                    make_alg_map(head_alg, base_alg, std::move(coarse)));

  Mat<F> into_ambient(fld, full_alg->dim(), fib.ambient.alg->dim());
  const std::size_t off = merged_alg->dim();
  for (std::size_t u = 0; u < full_units.size(); ++u) {
    const auto [r, c] = full_units[u];
    into_ambient.at(u, triangular_index(merged_units, r, c)) = fld.one();
    if (r < corner && c < corner)
      into_ambient.at(u, off + triangular_index(head_units, r, c)) = fld.one();
  }
  auto cmp = solve_left(fib.inclusion, into_ambient);
  if (!cmp.has_value())
    return "the comparison map does not land in the fiber product";
  if (fib.alg->dim() != full_alg->dim() || rank(*cmp) != full_alg->dim())
    return "the comparison map is not bijective";
  make_alg_map(full_alg, fib.alg, *cmp);  // throws unless a unital algebra map
  return std::nullopt;
}

}  // namespace detail

// Outcome of the two consistency batteries.  Check failures are recorded,
// never thrown; resource errors (budget, unsupported field) still propagate.
template <ScalarField F>
struct SegalReport {
  HallTable<F> table;
  std::size_t ring_cases = 0;
  std::size_t ring_failures = 0;
  std::size_t assoc_triples = 0;
  std::size_t assoc_failures = 0;
  std::vector<std::string> failures;

  bool ok() const { return ring_failures == 0 && assoc_failures == 0; }
};

// (i) For every signature of total size ≤ 4 and every merge position, the
// triangular gluing identity holds as an exact algebra isomorphism over the
// ground field.  (ii) The product computed from the table is associative on
// every class triple of total dimension ≤ bound:
// Σ_X g^X_{M,N} g^L_{X,P} = Σ_Y g^Y_{N,P} g^L_{M,Y} for every L.
template <ScalarField F>
SegalReport<F> segal_checks(const AlgebraPtr<F>& a, std::size_t bound,
                            Budget& budget,
                            HallConvention conv = HallConvention::SubIsSecond) {
  SegalReport<F> report;
  const F& fld = a->field();
  for (const auto& sig : detail::block_signatures(4)) {
    for (std::size_t j = 1; j < sig.size(); ++j) {
      ++report.ring_cases;
      std::optional<std::string> bad;
      try {
        bad = detail::merge_identity_failure(fld, sig, j);
      } catch (const Error& e) {
        bad = std::string(e.what());
      }
      if (bad.has_value()) {
        ++report.ring_failures;
        report.failures.push_back("signature " + detail::format_signature(sig) +
                                  " merged at " + std::to_string(j) + ": " +
                                  *bad);
      }
    }
  }
  report.table = hall_table(a, bound, budget, conv);
  const std::vector<ModuleClass<F>>& cls = report.table.classes;
  for (const ModuleClass<F>& m : cls)
    for (const ModuleClass<F>& n : cls)
      for (const ModuleClass<F>& p : cls) {
        const std::size_t total = m.rep.dim + n.rep.dim + p.rep.dim;
        if (total > bound) continue;
        ++report.assoc_triples;
        for (const ModuleClass<F>& l : cls) {
          if (l.rep.dim != total) continue;
          std::size_t lhs = 0, rhs = 0;
          for (const ModuleClass<F>& x : cls) {
            lhs += report.table.coefficient(m.id, n.id, x.id) *
                   report.table.coefficient(x.id, p.id, l.id);
            rhs += report.table.coefficient(n.id, p.id, x.id) *
                   report.table.coefficient(m.id, x.id, l.id);
          }
          if (lhs != rhs) {
            ++report.assoc_failures;
            report.failures.push_back(
                "associativity fails at classes (" + std::to_string(m.id) +
                "," + std::to_string(n.id) + "," + std::to_string(p.id) +
                ") against " + std::to_string(l.id) + ": " +
                std::to_string(lhs) + " != " + std::to_string(rhs));
          }
        }
      }
  return report;
}

}  // namespace ncm
