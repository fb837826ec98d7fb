#pragma once

// Restriction of scalars for finitely presented algebras, representation
// spaces, conjugation groupoids, and the block-triangular flag maps.
//
// For a finite-dimensional algebra S over the ground field, a map from a
// presented algebra A into S⊗B is the same as one element of B per generator
// of A and per basis element of S.  Expanding every relation of A through the
// structure constants of S turns that observation into a new presentation
// whose points over B are exactly Hom(A, S⊗B); `restrict_presentation`
// performs the expansion and (over finite fields) certifies the defining
// bijection exhaustively against a fixed battery of test algebras.  With
// S a matrix algebra the points are framed representation spaces; quotienting
// the points over B by conjugation under the unit group B^× yields a finite
// groupoid whose cardinality Σ 1/|stabilizer| is reported as an exact
// rational.  Block upper-triangular algebras T(r₁,…,rₙ) carry projections to
// the diagonal matrix blocks, diagonal sections, an inclusion into the full
// matrix algebra, and the non-unital zero-insertion maps that grow one block
// by a slot; the insertion at any of the rᵢ+1 slots induces the same map on
// idempotent groupoids up to isomorphism, and helpers verify that
// position-independence on enumerable inputs.

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ncm/algebra.hpp"
#include "ncm/budget.hpp"
#include "ncm/errors.hpp"
#include "ncm/field.hpp"
#include "ncm/idem.hpp"
#include "ncm/la.hpp"
#include "ncm/presentation.hpp"

namespace ncm {

using Rational = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// Restriction of scalars

// The presentation representing B ↦ Hom(A, S⊗B): one generator per
// (generator of A, basis element of S), relations obtained by expanding each
// relation of A through the structure constants of S, one component per
// basis element of S (zero components are kept so the relation count is
// always #rels(A)·dim(S)).
template <ScalarField F>
struct RestrictedPresentation {
  FreePresentation<F> source;
  AlgebraPtr<F> restrictor;
  FreePresentation<F> result;
  bool battery_ran = false;

  // generator of `result` carrying the s_k-coordinate of generator `gen`
  std::size_t gen_index(std::size_t gen, std::size_t k) const {
    return gen * restrictor->dim() + k;
  }
};

namespace detail {

// Expand a word in the source generators into a sum of words in the
// restricted generators, each weighted by an element of S: the letter x_i
// becomes Σ_k s_k · x_i^{(k)}, and the S-parts multiply out left to right.
// Branches whose S-coefficient vanishes contribute nothing and are dropped.
template <ScalarField F>
std::vector<std::pair<Word, Vec<F>>> expand_word_through(
    const AlgebraPtr<F>& s, const Word& w, Budget& budget) {
  const F& fld = s->field();
  std::vector<std::pair<Word, Vec<F>>> acc{{Word{}, s->unit()}};
  for (std::size_t gen : w) {
    std::vector<std::pair<Word, Vec<F>>> next;
    for (const auto& [word, coeff] : acc)
      for (std::size_t k = 0; k < s->dim(); ++k) {
        budget.tick();
        Vec<F> c = s->mul(coeff, s->basis_elem(k));
        if (is_zero_vec(fld, c)) continue;
        Word grown = word;
        grown.push_back(gen * s->dim() + k);
        next.emplace_back(std::move(grown), std::move(c));
      }
    acc = std::move(next);
  }
  return acc;
}

}  // namespace detail

// The canonical unpacking of a point of the restricted presentation over an
// algebra of dimension `b_dim` into generator images in S⊗B (tensor basis
// s_k⊗b_l at index k·b_dim + l).
template <ScalarField F>
std::vector<Vec<F>> unpack_restricted_point(
    const RestrictedPresentation<F>& r, std::size_t b_dim,
    const std::vector<Vec<F>>& images) {
  const F& fld = r.source.fld;
  const std::size_t ds = r.restrictor->dim();
  require(images.size() == r.result.gens.size(), ErrorCode::BadDimension,
          "point has the wrong number of generator images");
  std::vector<Vec<F>> out;
  for (std::size_t g = 0; g < r.source.gens.size(); ++g) {
    Vec<F> img = zero_vec(fld, ds * b_dim);
    for (std::size_t k = 0; k < ds; ++k) {
      const Vec<F>& part = images[r.gen_index(g, k)];
      require(part.size() == b_dim, ErrorCode::BadDimension,
              "generator image has the wrong length");
      for (std::size_t l = 0; l < b_dim; ++l) img[k * b_dim + l] = part[l];
    }
    out.push_back(std::move(img));
  }
  return out;
}

// Exhaustively check the defining bijection over one finite test algebra:
// points of the restricted presentation over b, unpacked into S⊗b, must be
// distinct, must satisfy the source relations, and must exhaust Hom(A, S⊗b).
template <ScalarField F>
bool verify_restriction(const RestrictedPresentation<F>& r,
                        const AlgebraPtr<F>& b, Budget& budget) {
  const F& fld = r.source.fld;
  AlgebraPtr<F> sb = tensor_algebra(r.restrictor, b);
  auto points = enumerate_homs(r.result, *b, budget);
  auto homs = enumerate_homs(r.source, *sb, budget);
  if (points.size() != homs.size()) return false;
  std::vector<std::vector<Vec<F>>> unpacked;
  for (const auto& pt : points)
    unpacked.push_back(unpack_restricted_point(r, b->dim(), pt));
  for (std::size_t i = 0; i < unpacked.size(); ++i) {
    for (const NCPoly<F>& rel : r.source.rels)
      if (!is_zero_vec(fld, eval_poly(*sb, unpacked[i], rel))) return false;
    for (std::size_t j = i + 1; j < unpacked.size(); ++j)
      if (unpacked[i] == unpacked[j]) return false;
    bool hit = false;
    for (const auto& h : homs)
      if (h == unpacked[i]) {
        hit = true;
        break;
      }
    if (!hit) return false;
  }
  return true;
}

// Restriction of scalars along S.  Over a finite field the defining
// bijection is certified against the standard battery (the ground field,
// its square, and the upper-triangular algebra T(1,1)) unless `run_battery`
// is false; over an infinite field the battery cannot be enumerated and
// `battery_ran` stays false.
template <ScalarField F>
RestrictedPresentation<F> restrict_presentation(const FreePresentation<F>& p,
                                                const AlgebraPtr<F>& s,
                                                Budget& budget,
                                                bool run_battery = true) {
  const F& fld = p.fld;
  require(s->field() == fld, ErrorCode::BadField,
          "the restricting algebra must live over the presentation's field");
  const std::size_t ds = s->dim();
  FreePresentation<F> out{fld, {}, {}};
  for (const std::string& g : p.gens)
    for (std::size_t k = 0; k < ds; ++k)
      out.gens.push_back(g + "(" + s->basis_names()[k] + ")");
  for (const NCPoly<F>& rel : p.rels) {
    std::vector<NCPoly<F>> comps(ds);
    for (const auto& [c, w] : rel.terms)
      for (auto& [word, coeff] : detail::expand_word_through(s, w, budget))
        for (std::size_t t = 0; t < ds; ++t)
          if (!fld.is_zero(coeff[t]))
            comps[t].terms.push_back({c * coeff[t], word});
    for (std::size_t t = 0; t < ds; ++t)
      out.rels.push_back(normalized(fld, comps[t]));
  }
  RestrictedPresentation<F> r{p, s, std::move(out), false};
  if (run_battery && fld.finite()) {
    AlgebraPtr<F> ground = field_algebra(fld);
    std::vector<AlgebraPtr<F>> battery{
        ground, product_algebra(ground, ground).alg,
        triangular_algebra(fld, {1, 1})};
    for (const AlgebraPtr<F>& b : battery)
      require(verify_restriction(r, b, budget), ErrorCode::InvariantViolation,
              "restricted presentation fails the defining bijection over the "
              "test battery");
    r.battery_ran = true;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Representation spaces

template <ScalarField F>
struct RepSpacePoints {
  std::size_t count = 0;
  std::vector<std::vector<Vec<F>>> points;  // generator images in Mat_n(B)
};

// Framed n-dimensional representations of a presented algebra with
// coefficients in B, by direct enumeration of Hom(A, Mat_n(B)); the count is
// re-derived by evaluating the matrix-restricted presentation over B, and
// the two routes must agree.
template <ScalarField F>
RepSpacePoints<F> rep_space_count(const FreePresentation<F>& p, std::size_t n,
                                  const AlgebraPtr<F>& b, Budget& budget) {
  require(n > 0, ErrorCode::BadDimension,
          "representation dimension must be positive");
  require(b->field() == p.fld, ErrorCode::BadField,
          "the coefficient algebra must live over the presentation's field");
  AlgebraPtr<F> mat = matrix_algebra(b, n);
  auto points = enumerate_homs(p, *mat, budget);
  RestrictedPresentation<F> r = restrict_presentation(
      p, matrix_algebra(p.fld, n), budget, /*run_battery=*/false);
  const std::size_t via_restriction = count_homs(r.result, *b, budget);
  require(via_restriction == points.size(), ErrorCode::InvariantViolation,
          "restricted-presentation point count disagrees with direct "
          "enumeration");
  return {points.size(), std::move(points)};
}

// ---------------------------------------------------------------------------
// Conjugation groupoids

template <ScalarField F>
struct UnitGroup {
  std::vector<Vec<F>> units;
  std::vector<Vec<F>> inverses;  // aligned with `units`
};

// All invertible elements of a finite algebra, with their inverses.
template <ScalarField F>
UnitGroup<F> unit_group(const AlgebraPtr<F>& b, Budget& budget) {
  const F& fld = b->field();
  require(fld.finite(), ErrorCode::Unsupported,
          "unit enumeration needs a finite field");
  UnitGroup<F> g;
  for_each_vector(fld, b->dim(), [&](const Vec<F>& u) {
    budget.tick();
    auto inv_op = inverse(b->left_mult(u));
    if (inv_op) {
      Vec<F> v = b->unit() * *inv_op;
      require(b->mul(u, v) == b->unit() && b->mul(v, u) == b->unit(),
              ErrorCode::InvariantViolation,
              "computed inverse must be two-sided");
      g.units.push_back(u);
      g.inverses.push_back(std::move(v));
    }
    return true;
  });
  return g;
}

struct ConjugationOrbit {
  std::vector<std::size_t> members;  // object indices, ascending
  std::size_t stabilizer_order = 0;  // of the first member
};

// Objects are the points Hom(A, B); B^× acts by conjugation.  The groupoid
// cardinality Σ_orbits 1/|stabilizer| is exact.
template <ScalarField F>
struct ConjugationGroupoid {
  std::vector<std::vector<Vec<F>>> objects;
  UnitGroup<F> units;
  std::vector<ConjugationOrbit> orbits;
  Rational cardinality{0};
};

template <ScalarField F>
ConjugationGroupoid<F> conjugation_groupoid(const FreePresentation<F>& p,
                                            const AlgebraPtr<F>& b,
                                            Budget& budget) {
  ConjugationGroupoid<F> g{enumerate_homs(p, *b, budget),
                           unit_group(b, budget),
                           {},
                           Rational{0}};
  const std::size_t nu = g.units.units.size();
  auto find_object = [&](const std::vector<Vec<F>>& imgs) -> std::size_t {
    for (std::size_t i = 0; i < g.objects.size(); ++i)
      if (g.objects[i] == imgs) return i;
    fail(ErrorCode::InvariantViolation,
         "a conjugate of an enumerated point must itself be enumerated");
  };
  std::vector<char> seen(g.objects.size(), 0);
  for (std::size_t i = 0; i < g.objects.size(); ++i) {
    if (seen[i]) continue;
    std::set<std::size_t> members;
    std::size_t stab = 0;
    for (std::size_t ui = 0; ui < nu; ++ui) {
      budget.tick();
      std::vector<Vec<F>> conj;
      for (const Vec<F>& img : g.objects[i])
        conj.push_back(
            b->mul(b->mul(g.units.units[ui], img), g.units.inverses[ui]));
      std::size_t j = find_object(conj);
      members.insert(j);
      if (j == i) ++stab;
    }
    ConjugationOrbit orb;
    for (std::size_t j : members) {
      seen[j] = 1;
      orb.members.push_back(j);
    }
    orb.stabilizer_order = stab;
    require(orb.members.size() * stab == nu, ErrorCode::InvariantViolation,
            "orbit size times stabilizer order must equal the unit-group "
            "order");
    g.cardinality += Rational(1) / Rational(static_cast<unsigned>(stab));
    g.orbits.push_back(std::move(orb));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Flag maps

namespace detail {

inline std::vector<std::pair<std::size_t, std::size_t>> triangular_units(
    const std::vector<std::size_t>& sig) {
  std::vector<std::size_t> block_of;
  for (std::size_t bl = 0; bl < sig.size(); ++bl)
    for (std::size_t i = 0; i < sig[bl]; ++i) block_of.push_back(bl);
  std::vector<std::pair<std::size_t, std::size_t>> units;
  for (std::size_t r = 0; r < block_of.size(); ++r)
    for (std::size_t c = 0; c < block_of.size(); ++c)
      if (block_of[r] <= block_of[c]) units.emplace_back(r, c);
  return units;
}

inline std::size_t triangular_index(
    const std::vector<std::pair<std::size_t, std::size_t>>& units,
    std::size_t r, std::size_t c) {
  for (std::size_t i = 0; i < units.size(); ++i)
    if (units[i] == std::make_pair(r, c)) return i;
  fail(ErrorCode::InvariantViolation,
       "matrix position is outside the block-triangular support");
}

// Pin the basis layout of a block-triangular algebra semantically: the
// diagonal positions must be orthogonal idempotents summing to the unit, and
// sandwiching any basis element between its row and column diagonals must
// return it unchanged.
template <ScalarField F>
void check_triangular_layout(
    const AlgebraPtr<F>& t,
    const std::vector<std::pair<std::size_t, std::size_t>>& units) {
  require(t->dim() == units.size(), ErrorCode::InvariantViolation,
          "block-triangular dimension mismatch");
  Vec<F> diag_sum = t->zero_elem();
  std::size_t total = 0;
  for (const auto& [r, c] : units) total = std::max(total, r + 1);
  for (std::size_t r = 0; r < total; ++r) {
    Vec<F> d = t->basis_elem(triangular_index(units, r, r));
    require(t->is_idempotent(d), ErrorCode::InvariantViolation,
            "diagonal basis element is not idempotent");
    add_to(diag_sum, d);
  }
  require(diag_sum == t->unit(), ErrorCode::InvariantViolation,
          "diagonal basis elements do not sum to the unit");
  for (std::size_t m = 0; m < units.size(); ++m) {
    const auto& [r, c] = units[m];
    Vec<F> dr = t->basis_elem(triangular_index(units, r, r));
    Vec<F> dc = t->basis_elem(triangular_index(units, c, c));
    require(t->mul(t->mul(dr, t->basis_elem(m)), dc) == t->basis_elem(m),
            ErrorCode::InvariantViolation,
            "basis element is not supported at its nominal position");
  }
}

}  // namespace detail

// The structural maps of a block upper-triangular algebra T(r₁,…,rₙ):
// unital projections pᵢ onto the diagonal blocks Mat_{rᵢ}, multiplicative
// sections placing Mat_{rᵢ} back on the diagonal (unital only for a single
// block), the unital inclusion into Mat_{r₁+⋯+rₙ}, and for every block the
// rᵢ+1 zero-insertion maps into the signature with that block grown by one
// (non-unital: a zero row and column appear at the chosen slot).
template <ScalarField F>
struct FlagMaps {
  std::vector<std::size_t> signature;
  AlgebraPtr<F> alg;                   // T(signature)
  std::vector<AlgMap<F>> projections;  // alg -> Mat_{r_i}
  std::vector<AlgMap<F>> sections;     // Mat_{r_i} -> alg
  AlgMap<F> inclusion;                 // alg -> Mat_{sum r_i}
  std::vector<std::vector<AlgMap<F>>> insertions;  // [block][slot]
};

template <ScalarField F>
FlagMaps<F> flag_maps(const F& fld, const std::vector<std::size_t>& sig) {
  require(!sig.empty(), ErrorCode::BadDimension, "empty flag signature");
  AlgebraPtr<F> t = triangular_algebra(fld, sig);
  auto units = detail::triangular_units(sig);
  detail::check_triangular_layout(t, units);
  std::size_t total = 0;
  std::vector<std::size_t> offset(sig.size(), 0);
  for (std::size_t bl = 0; bl < sig.size(); ++bl) {
    offset[bl] = total;
    total += sig[bl];
  }
  std::vector<std::size_t> block_of;
  for (std::size_t bl = 0; bl < sig.size(); ++bl)
    for (std::size_t i = 0; i < sig[bl]; ++i) block_of.push_back(bl);

  std::vector<AlgMap<F>> projections, sections;
  for (std::size_t bl = 0; bl < sig.size(); ++bl) {
    const std::size_t r_i = sig[bl];
    AlgebraPtr<F> mat = matrix_algebra(fld, r_i);
    Mat<F> pm(fld, t->dim(), r_i * r_i);
    Mat<F> sm(fld, r_i * r_i, t->dim());
    for (std::size_t m = 0; m < units.size(); ++m) {
      const auto& [r, c] = units[m];
      if (block_of[r] == bl && block_of[c] == bl) {
        const std::size_t local = (r - offset[bl]) * r_i + (c - offset[bl]);
        pm.at(m, local) = fld.one();
        sm.at(local, m) = fld.one();
      }
    }
    projections.push_back(make_alg_map(t, mat, std::move(pm)));
    sections.push_back(
        make_alg_map(mat, t, std::move(sm), /*require_unital=*/false));
  }

  AlgebraPtr<F> full = matrix_algebra(fld, total);
  Mat<F> im(fld, t->dim(), total * total);
  for (std::size_t m = 0; m < units.size(); ++m)
    im.at(m, units[m].first * total + units[m].second) = fld.one();
  AlgMap<F> inclusion = make_alg_map(t, full, std::move(im));

  std::vector<std::vector<AlgMap<F>>> insertions;
  for (std::size_t bl = 0; bl < sig.size(); ++bl) {
    std::vector<std::size_t> grown = sig;
    grown[bl] += 1;
    AlgebraPtr<F> tg = triangular_algebra(fld, grown);
    auto grown_units = detail::triangular_units(grown);
    detail::check_triangular_layout(tg, grown_units);
    std::vector<AlgMap<F>> slot_maps;
    for (std::size_t slot = 0; slot <= sig[bl]; ++slot) {
      const std::size_t cut = offset[bl] + slot;
      auto shift = [&](std::size_t i) { return i < cut ? i : i + 1; };
      Mat<F> m(fld, t->dim(), tg->dim());
      for (std::size_t u = 0; u < units.size(); ++u)
        m.at(u, detail::triangular_index(grown_units, shift(units[u].first),
                                         shift(units[u].second))) = fld.one();
      slot_maps.push_back(
          make_alg_map(t, tg, std::move(m), /*require_unital=*/false));
    }
    insertions.push_back(std::move(slot_maps));
  }
  return FlagMaps<F>{sig, t, std::move(projections), std::move(sections),
                     std::move(inclusion), std::move(insertions)};
}

// The zero-insertion maps of one block all induce the same map on idempotent
// groupoids up to isomorphism: for every idempotent e and every pair of
// slots, the two images must be isomorphic objects in the groupoid of the
// grown algebra.
template <ScalarField F>
bool insertion_position_independent(const FlagMaps<F>& fm, std::size_t block,
                                    Budget& budget) {
  require(block < fm.insertions.size(), ErrorCode::BadDimension,
          "block index out of range");
  const auto& ins = fm.insertions[block];
  const AlgebraPtr<F>& tgt = ins.front().dst;
  std::vector<Vec<F>> idems = enumerate_idempotents(fm.alg, budget);
  for (const Vec<F>& e : idems)
    for (std::size_t a = 0; a + 1 < ins.size(); ++a)
      for (std::size_t b = a + 1; b < ins.size(); ++b) {
        Vec<F> ea = ins[a].apply(e);
        Vec<F> eb = ins[b].apply(e);
        if (!tgt->is_idempotent(ea) || !tgt->is_idempotent(eb)) return false;
        if (hom_idempotents(*tgt, ea, eb, budget, /*first_only=*/true).empty())
          return false;
      }
  return true;
}

// The same statement through a Hom-functor evaluation: post-composing any
// point of a presentation with two insertions of the same block gives
// families conjugate under one unit of the grown algebra.
template <ScalarField F>
bool insertions_conjugate_on_points(const FlagMaps<F>& fm, std::size_t block,
                                    const FreePresentation<F>& p,
                                    Budget& budget) {
  require(block < fm.insertions.size(), ErrorCode::BadDimension,
          "block index out of range");
  const auto& ins = fm.insertions[block];
  const AlgebraPtr<F>& tgt = ins.front().dst;
  auto points = enumerate_homs(p, *fm.alg, budget);
  UnitGroup<F> ug = unit_group(tgt, budget);
  for (const auto& pt : points)
    for (std::size_t a = 0; a + 1 < ins.size(); ++a)
      for (std::size_t b = a + 1; b < ins.size(); ++b) {
        bool conjugate = false;
        for (std::size_t ui = 0; ui < ug.units.size() && !conjugate; ++ui) {
          budget.tick();
          conjugate = true;
          for (const Vec<F>& img : pt) {
            Vec<F> lhs = tgt->mul(tgt->mul(ug.units[ui], ins[a].apply(img)),
                                  ug.inverses[ui]);
            if (lhs != ins[b].apply(img)) {
              conjugate = false;
              break;
            }
          }
        }
        if (!conjugate) return false;
      }
  return true;
}

}  // namespace ncm
