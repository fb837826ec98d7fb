#pragma once

// Finitely presented associative unital algebras: noncommutative polynomials
// in named generators, and exhaustive (budgeted) enumeration of unital
// algebra maps from a presented algebra into a finite-dimensional algebra
// over a finite field.
//
// A Word is a sequence of generator indices (empty = the unit), so relations
// may carry constant terms.

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ncm/algebra.hpp"
#include "ncm/budget.hpp"
#include "ncm/errors.hpp"
#include "ncm/field.hpp"
#include "ncm/la.hpp"

namespace ncm {

using Word = std::vector<std::size_t>;

template <ScalarField F>
struct NCPoly {
  using Elem = typename F::Elem;
  std::vector<std::pair<Elem, Word>> terms;

  static NCPoly monomial(const Elem& c, Word w) {
    return NCPoly{{{c, std::move(w)}}};
  }
};

// Collapse duplicate words and drop zero coefficients (sorted by word).
template <ScalarField F>
NCPoly<F> normalized(const F& fld, const NCPoly<F>& p) {
  std::map<Word, typename F::Elem> acc;
  for (const auto& [c, w] : p.terms) {
    auto it = acc.find(w);
    if (it == acc.end())
      acc.emplace(w, c);
    else
      it->second += c;
  }
  NCPoly<F> out;
  for (const auto& [w, c] : acc)
    if (!fld.is_zero(c)) out.terms.push_back({c, w});
  return out;
}

template <ScalarField F>
struct FreePresentation {
  F fld;
  std::vector<std::string> gens;
  std::vector<NCPoly<F>> rels;
};

template <ScalarField F>
Vec<F> eval_word(const FinAlgebra<F>& b, const std::vector<Vec<F>>& images,
                 const Word& w) {
  Vec<F> acc = b.unit();
  for (std::size_t g : w) {
    assert(g < images.size());
    acc = b.mul(acc, images[g]);
  }
  return acc;
}

template <ScalarField F>
Vec<F> eval_poly(const FinAlgebra<F>& b, const std::vector<Vec<F>>& images,
                 const NCPoly<F>& p) {
  Vec<F> acc = b.zero_elem();
  for (const auto& [c, w] : p.terms) {
    Vec<F> t = eval_word(b, images, w);
    for (std::size_t i = 0; i < t.size(); ++i) acc[i] += c * t[i];
  }
  return acc;
}

// The tautological presentation of a structure-constant algebra: one
// generator per basis element, relations b_i b_j - sum c^k_{ij} b_k, plus the
// unit relation sum u_i b_i = 1.  Maps out of it are exactly the unital
// algebra maps out of A.
template <ScalarField F>
FreePresentation<F> presentation_of(const FinAlgebra<F>& a) {
  const F& fld = a.field();
  FreePresentation<F> p{fld, a.basis_names(), {}};
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) {
      NCPoly<F> r;
      r.terms.push_back({fld.one(), Word{i, j}});
      for (const auto& [k, c] : a.basis_mul(i, j))
        r.terms.push_back({fld.zero() - c, Word{k}});
      p.rels.push_back(normalized(fld, r));
    }
  NCPoly<F> unit_rel;
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (!fld.is_zero(a.unit()[i])) unit_rel.terms.push_back({a.unit()[i], Word{i}});
  unit_rel.terms.push_back({fld.zero() - fld.one(), Word{}});
  p.rels.push_back(normalized(fld, unit_rel));
  return p;
}

// All tuples of generator images defining a unital algebra map from the
// presented algebra into B.  Backtracking over generators in order; each
// relation is checked as soon as all generators occurring in it have images.
// The budget counts visited assignment nodes.
template <ScalarField F>
std::vector<std::vector<Vec<F>>> enumerate_homs(const FreePresentation<F>& p,
                                                const FinAlgebra<F>& b,
                                                Budget& budget) {
  require(b.field().finite(), ErrorCode::Unsupported,
          "hom enumeration needs a finite field");
  const std::size_t g = p.gens.size();
  // relations become checkable once generators 0..max_gen have images
  std::vector<std::vector<const NCPoly<F>*>> checkable(g + 1);
  for (const auto& r : p.rels) {
    std::size_t max_gen = 0;
    bool has_gen = false;
    for (const auto& [c, w] : r.terms)
      for (std::size_t idx : w) {
        has_gen = true;
        max_gen = std::max(max_gen, idx);
      }
    std::size_t slot = has_gen ? max_gen + 1 : 0;
    checkable[slot].push_back(&r);
  }
  // constant relations must vanish outright
  std::vector<Vec<F>> images;
  for (const NCPoly<F>* r : checkable[0])
    if (!is_zero_vec(b.field(), eval_poly(b, images, *r))) return {};

  std::vector<std::vector<Vec<F>>> found;
  std::vector<Vec<F>> stack;
  auto dfs = [&](auto&& self, std::size_t level) -> void {
    if (level == g) {
      found.push_back(stack);
      return;
    }
    for_each_vector(b.field(), b.dim(), [&](const Vec<F>& cand) {
      budget.tick();
      stack.push_back(cand);
      bool ok = true;
      for (const NCPoly<F>* r : checkable[level + 1])
        if (!is_zero_vec(b.field(), eval_poly(b, stack, *r))) {
          ok = false;
          break;
        }
      if (ok) self(self, level + 1);
      stack.pop_back();
      return true;
    });
  };
  dfs(dfs, 0);
  return found;
}

template <ScalarField F>
std::size_t count_homs(const FreePresentation<F>& p, const FinAlgebra<F>& b,
                       Budget& budget) {
  return enumerate_homs(p, b, budget).size();
}

}  // namespace ncm
