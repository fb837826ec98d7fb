// Restriction of scalars, representation spaces, conjugation groupoids, and
// flag maps.
//
// Reference values used below, all derived by hand:
//
// * Restricting ⟨x | x²⟩ along Mat₂ produces four generators x(e_kl) and
//   four relations Σ_m x(e_km)·x(e_ml), one per matrix unit: the expansion
//   of x·x through e_ab·e_cd = δ_bc·e_ad leaves exactly the two paths
//   through m = 1, 2 in each component.
// * |Hom(F₂⟨x⟩/(x²), Mat₂(F₂))| = 4: the zero matrix and the three rank-one
//   square-zero matrices [[0,1],[0,0]], [[0,0],[1,0]], [[1,1],[1,1]].
// * Over B = F₂[x]/(x²) the same representation space has 28 points: write
//   X = A + xB' with A² = 0; A = 0 leaves B' free (16), and each of the
//   three nonzero nilpotent A forces B' into the two-dimensional
//   anticommutant (= commutant in characteristic 2), 4 choices each.
// * (F₂×F₂)⊗(F₂×F₂) ≅ F₂⁴, so the functoriality instance counts solutions
//   of x² = 0 in F₂⁴⊗B: exactly 1 over B = F₂ and 2⁴ = 16 over B = T(1,1)
//   (in T(1,1) the square-zero elements are the two strictly upper ones).
// * Conjugation groupoid of ⟨e | e²−e⟩ in Mat₂(F₂): 8 idempotents, orbits
//   {0}, {1}, and the six rank-one idempotents; |GL₂(F₂)| = 6; stabilizer
//   of a rank-one idempotent is trivial, so the cardinality is
//   1/6 + 1/6 + 1/1 = 4/3.
// * Same groupoid over F₃: 14 idempotents (q(q+1) = 12 of rank one),
//   |GL₂(F₃)| = 48, rank-one stabilizer of order (q−1)² = 4, cardinality
//   1/48 + 1/48 + 1/4 = 7/24.  The central units are ±1.
// * T(1,1)(F₂) has 6 idempotents [[a,b],[0,d]]: b must vanish unless
//   a ≠ d, giving diagonal patterns (0,0), (1,1) once and (1,0), (0,1)
//   twice each — exactly the multiset of images under the two block
//   projections.
// * Zero insertions T(r) → T(…, rᵢ+1, …) add a zero row and column at one
//   of the rᵢ+1 slots; any two choices differ by conjugation with a
//   block-diagonal permutation unit, so they agree on idempotent groupoids
//   and on conjugacy classes of points.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "ncm/algebra.hpp"
#include "ncm/budget.hpp"
#include "ncm/errors.hpp"
#include "ncm/field.hpp"
#include "ncm/idem.hpp"
#include "ncm/la.hpp"
#include "ncm/presentation.hpp"
#include "ncm/weil.hpp"

using namespace ncm;

namespace {

auto has_code(ErrorCode c) {
  return Catch::Matchers::Predicate<Error>(
      [c](const Error& e) { return e.code() == c; });
}

template <ScalarField F>
Vec<F> vec(const F& fld, const std::vector<int>& entries) {
  Vec<F> v = zero_vec(fld, entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i)
    v[i] = fld.from_int(entries[i]);
  return v;
}

template <ScalarField F>
NCPoly<F> poly(const F& fld, std::vector<std::pair<int, Word>> terms) {
  NCPoly<F> p;
  for (auto& [c, w] : terms) p.terms.push_back({fld.from_int(c), std::move(w)});
  return normalized(fld, p);
}

}  // namespace

TEST_CASE("restriction of scalars represents maps into the tensor algebra") {
  FpField f2(2);
  Budget budget(1u << 24);
  auto ground = field_algebra(f2);
  auto mat2 = matrix_algebra(f2, 2);
  FreePresentation<FpField> nil{f2, {"x"}, {poly(f2, {{1, {0, 0}}})}};

  RestrictedPresentation<FpField> r = restrict_presentation(nil, mat2, budget);
  CHECK(r.battery_ran);
  REQUIRE(r.result.gens.size() == 4);
  REQUIRE(r.result.rels.size() == 4);
  // component of e00: the paths x(e00)x(e00) + x(e01)x(e10)
  CHECK(r.result.rels[0].terms ==
        poly(f2, {{1, {0, 0}}, {1, {1, 2}}}).terms);
  // component of e11: the paths x(e10)x(e01) + x(e11)x(e11)
  CHECK(r.result.rels[3].terms ==
        poly(f2, {{1, {2, 1}}, {1, {3, 3}}}).terms);

  // evaluating the result over F_2 counts the 2x2 square-zero matrices
  CHECK(count_homs(r.result, *ground, budget) == 4);
  // and over the dual numbers it counts the 28 square-zero matrices there
  auto dual = poly_quotient_algebra(f2, zero_vec(f2, 2));
  CHECK(count_homs(r.result, *dual, budget) == 28);
  CHECK(verify_restriction(r, dual, budget));

  // restricting along the ground field changes nothing
  RestrictedPresentation<FpField> triv =
      restrict_presentation(nil, ground, budget);
  REQUIRE(triv.result.gens.size() == 1);
  REQUIRE(triv.result.rels.size() == 1);
  CHECK(triv.result.rels[0].terms == nil.rels[0].terms);

  // a noncommutative restricting algebra against a noncommutative test ring
  RestrictedPresentation<FpField> rt =
      restrict_presentation(nil, triangular_algebra(f2, {1, 1}), budget);
  CHECK(rt.battery_ran);
  CHECK(verify_restriction(rt, mat2, budget));

  // mismatched ground fields are rejected
  FpField f3(3);
  CHECK_THROWS_MATCHES(
      restrict_presentation(nil, field_algebra(f3), budget), Error,
      has_code(ErrorCode::BadField));

  // over the rationals the expansion still works, the battery cannot run
  QField qq;
  FreePresentation<QField> nilq{qq, {"x"}, {poly(qq, {{1, {0, 0}}})}};
  RestrictedPresentation<QField> rq =
      restrict_presentation(nilq, matrix_algebra(qq, 2), budget);
  CHECK_FALSE(rq.battery_ran);
  CHECK(rq.result.gens.size() == 4);
  CHECK(rq.result.rels.size() == 4);
}

TEST_CASE("restriction is functorial in the restricting algebra") {
  FpField f2(2);
  Budget budget(1u << 24);
  auto ground = field_algebra(f2);
  auto two = product_algebra(ground, ground).alg;
  FreePresentation<FpField> nil{f2, {"x"}, {poly(f2, {{1, {0, 0}}})}};

  RestrictedPresentation<FpField> joint =
      restrict_presentation(nil, tensor_algebra(two, two), budget);
  RestrictedPresentation<FpField> first =
      restrict_presentation(nil, two, budget);
  RestrictedPresentation<FpField> staged =
      restrict_presentation(first.result, two, budget);

  CHECK(joint.result.gens.size() == 4);
  CHECK(staged.result.gens.size() == 4);
  CHECK(joint.result.rels.size() == 4);
  CHECK(staged.result.rels.size() == 4);

  auto t11 = triangular_algebra(f2, {1, 1});
  CHECK(count_homs(joint.result, *ground, budget) == 1);
  CHECK(count_homs(staged.result, *ground, budget) == 1);
  CHECK(count_homs(joint.result, *t11, budget) == 16);
  CHECK(count_homs(staged.result, *t11, budget) == 16);
}

TEST_CASE("representation spaces count framed representations both ways") {
  FpField f2(2);
  Budget budget(1u << 24);
  auto ground = field_algebra(f2);
  FreePresentation<FpField> nil{f2, {"x"}, {poly(f2, {{1, {0, 0}}})}};
  FreePresentation<FpField> split{f2, {"e"},
                                  {poly(f2, {{1, {0, 0}}, {-1, {0}}})}};

  RepSpacePoints<FpField> reps = rep_space_count(nil, 2, ground, budget);
  CHECK(reps.count == 4);
  REQUIRE(reps.points.size() == 4);
  auto mat2 = matrix_algebra(f2, 2);
  bool zero_seen = false;
  for (const auto& pt : reps.points) {
    REQUIRE(pt.size() == 1);
    CHECK(is_zero_vec(f2, mat2->mul(pt[0], pt[0])));
    if (is_zero_vec(f2, pt[0])) zero_seen = true;
  }
  CHECK(zero_seen);

  // one-dimensional points of <e | e^2 - e> are the idempotents of B
  CHECK(rep_space_count(split, 1, ground, budget).count == 2);
  CHECK(rep_space_count(split, 1, triangular_algebra(f2, {1, 1}), budget)
            .count == 6);

  // x^2 = 1 has the two solutions +-1 in F_3
  FpField f3(3);
  FreePresentation<FpField> invol{f3, {"x"},
                                  {poly(f3, {{1, {0, 0}}, {-1, {}}})}};
  CHECK(rep_space_count(invol, 1, field_algebra(f3), budget).count == 2);

  CHECK_THROWS_MATCHES(rep_space_count(nil, 0, ground, budget), Error,
                       has_code(ErrorCode::BadDimension));
  CHECK_THROWS_MATCHES(rep_space_count(nil, 1, field_algebra(f3), budget),
                       Error, has_code(ErrorCode::BadField));
}

TEST_CASE("conjugation groupoids report exact cardinalities") {
  FpField f2(2);
  Budget budget(1u << 24);
  auto mat2 = matrix_algebra(f2, 2);
  FreePresentation<FpField> split{f2, {"e"},
                                  {poly(f2, {{1, {0, 0}}, {-1, {0}}})}};

  ConjugationGroupoid<FpField> g = conjugation_groupoid(split, mat2, budget);
  CHECK(g.objects.size() == 8);
  CHECK(g.units.units.size() == 6);
  REQUIRE(g.orbits.size() == 3);
  std::vector<std::size_t> sizes;
  std::size_t covered = 0;
  for (const auto& orb : g.orbits) {
    sizes.push_back(orb.members.size());
    covered += orb.members.size();
    CHECK(orb.members.size() * orb.stabilizer_order == 6);
  }
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<std::size_t>{1, 1, 6});
  CHECK(covered == 8);
  CHECK(g.cardinality == Rational(4) / Rational(3));

  // the empty presentation has one point with every unit as automorphism
  FreePresentation<FpField> point{f2, {}, {}};
  ConjugationGroupoid<FpField> pg = conjugation_groupoid(point, mat2, budget);
  CHECK(pg.objects.size() == 1);
  REQUIRE(pg.orbits.size() == 1);
  CHECK(pg.orbits[0].stabilizer_order == 6);
  CHECK(pg.cardinality == Rational(1) / Rational(6));

  // over F_3 the counts follow the same orbit-stabilizer bookkeeping
  FpField f3(3);
  FreePresentation<FpField> split3{f3, {"e"},
                                   {poly(f3, {{1, {0, 0}}, {-1, {0}}})}};
  auto mat23 = matrix_algebra(f3, 2);
  ConjugationGroupoid<FpField> g3 =
      conjugation_groupoid(split3, mat23, budget);
  CHECK(g3.objects.size() == 14);
  CHECK(g3.units.units.size() == 48);
  CHECK(g3.orbits.size() == 3);
  CHECK(g3.cardinality == Rational(7) / Rational(24));

  // central units fix every object
  std::size_t central = 0;
  for (std::size_t ui = 0; ui < g3.units.units.size(); ++ui) {
    const Vec<FpField>& u = g3.units.units[ui];
    if (!(mat23->left_mult(u) == mat23->right_mult(u))) continue;
    ++central;
    for (const auto& obj : g3.objects)
      for (const Vec<FpField>& img : obj)
        CHECK(mat23->mul(mat23->mul(u, img), g3.units.inverses[ui]) == img);
  }
  CHECK(central == 2);

  CHECK_THROWS_MATCHES(
      conjugation_groupoid(
          FreePresentation<QField>{QField{}, {}, {}},
          field_algebra(QField{}), budget),
      Error, has_code(ErrorCode::Unsupported));
  Budget tiny(3);
  CHECK_THROWS_MATCHES(conjugation_groupoid(split, mat2, tiny), Error,
                       has_code(ErrorCode::BudgetExceeded));
}

TEST_CASE("groupoid cardinality is an isomorphism invariant of the target") {
  FpField f2(2);
  Budget budget(1u << 24);
  auto mat2 = matrix_algebra(f2, 2);
  FreePresentation<FpField> split{f2, {"e"},
                                  {poly(f2, {{1, {0, 0}}, {-1, {0}}})}};
  Rational expected = Rational(4) / Rational(3);
  CHECK(conjugation_groupoid(split, mat2, budget).cardinality == expected);

  // the opposite algebra is isomorphic via transposition
  CHECK(conjugation_groupoid(split, opposite_algebra(mat2), budget)
            .cardinality == expected);

  // transport the structure constants along an explicit linear isomorphism
  Mat<FpField> g = Mat<FpField>::from_rows(
      f2,
      {vec(f2, {1, 1, 0, 0}), vec(f2, {0, 1, 0, 0}), vec(f2, {0, 0, 1, 1}),
       vec(f2, {0, 0, 0, 1})},
      4);
  auto ginv = inverse(g);
  REQUIRE(ginv.has_value());
  std::vector<std::vector<Vec<FpField>>> table(
      4, std::vector<Vec<FpField>>(4, zero_vec(f2, 4)));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      table[i][j] = mat2->mul(g.row(i), g.row(j)) * *ginv;
  auto twisted = make_algebra(
      f2, std::vector<std::string>{"a", "b", "c", "d"},
      mat2->unit() * *ginv, table);
  // certify the transport really is an algebra isomorphism
  AlgMap<FpField> iso = make_alg_map(twisted, mat2, g);
  CHECK(iso.unital);
  CHECK(rank(iso.m) == 4);
  CHECK(conjugation_groupoid(split, twisted, budget).cardinality == expected);
}

TEST_CASE("flag maps project, include, and stabilize block presentations") {
  FpField f2(2);
  Budget budget(1u << 24);
  FlagMaps<FpField> fm = flag_maps(f2, {1, 1});
  CHECK(fm.alg->dim() == 3);
  REQUIRE(fm.projections.size() == 2);
  REQUIRE(fm.sections.size() == 2);

  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(fm.projections[i].unital);
    CHECK_FALSE(fm.sections[i].unital);
    // the projection retracts the diagonal section
    CHECK(fm.sections[i].m * fm.projections[i].m ==
          Mat<FpField>::identity(f2, 1));
  }
  CHECK((fm.sections[0].m * fm.projections[1].m).is_zero());

  // the inclusion embeds onto the upper-triangular matrix units
  CHECK(fm.inclusion.unital);
  CHECK(rank(fm.inclusion.m) == 3);
  CHECK(fm.inclusion.m.row(0) == unit_row(f2, 4, 0));
  CHECK(fm.inclusion.m.row(1) == unit_row(f2, 4, 1));
  CHECK(fm.inclusion.m.row(2) == unit_row(f2, 4, 3));

  // a single block is the matrix algebra itself
  FlagMaps<FpField> whole = flag_maps(f2, {2});
  CHECK(whole.projections[0].unital);
  CHECK(whole.sections[0].unital);
  CHECK(whole.sections[0].m * whole.projections[0].m ==
        Mat<FpField>::identity(f2, 4));
  CHECK(whole.projections[0].m * whole.sections[0].m ==
        Mat<FpField>::identity(f2, 4));
  CHECK(whole.insertions[0].size() == 3);

  // insertions add one zero slot: non-unital, and the missing diagonal is
  // exactly the inserted slot
  REQUIRE(fm.insertions.size() == 2);
  for (std::size_t bl = 0; bl < 2; ++bl) {
    REQUIRE(fm.insertions[bl].size() == 2);
    for (std::size_t slot = 0; slot < 2; ++slot) {
      const AlgMap<FpField>& ins = fm.insertions[bl][slot];
      CHECK_FALSE(ins.unital);
      CHECK(ins.dst->dim() == 7);
      Vec<FpField> img = ins.apply(fm.alg->unit());
      CHECK(ins.dst->is_idempotent(img));
      // complement of the image of the unit is one diagonal matrix unit
      Vec<FpField> gap = ins.dst->unit();
      sub_from(gap, img);
      CHECK(ins.dst->is_idempotent(gap));
      CHECK(is_zero_vec(f2, ins.dst->mul(gap, img)));
    }
  }

  CHECK(insertion_position_independent(fm, 0, budget));
  CHECK(insertion_position_independent(fm, 1, budget));
  FreePresentation<FpField> split{f2, {"e"},
                                  {poly(f2, {{1, {0, 0}}, {-1, {0}}})}};
  CHECK(insertions_conjugate_on_points(fm, 0, split, budget));
  CHECK(insertions_conjugate_on_points(fm, 1, split, budget));

  // a block of size two: three slots, still position-independent
  FlagMaps<FpField> fm12 = flag_maps(f2, {1, 2});
  CHECK(fm12.insertions[1].size() == 3);
  CHECK(insertion_position_independent(fm12, 1, budget));

  CHECK_THROWS_MATCHES(flag_maps(f2, {}), Error,
                       has_code(ErrorCode::BadDimension));
  CHECK_THROWS_MATCHES(insertion_position_independent(fm, 5, budget), Error,
                       has_code(ErrorCode::BadDimension));
}

TEST_CASE("the idempotent groupoid of a flag algebra projects to the blocks") {
  FpField f2(2);
  Budget budget(1u << 24);
  FlagMaps<FpField> fm = flag_maps(f2, {1, 1});
  IdemGroupoid<FpField> ig = groupoid(fm.alg, budget);
  REQUIRE(ig.objects.size() == 6);

  std::map<std::pair<bool, bool>, std::size_t> diag_counts;
  for (const Vec<FpField>& e : ig.objects) {
    Vec<FpField> p1 = fm.projections[0].apply(e);
    Vec<FpField> p2 = fm.projections[1].apply(e);
    CHECK(fm.projections[0].dst->is_idempotent(p1));
    CHECK(fm.projections[1].dst->is_idempotent(p2));
    ++diag_counts[{!f2.is_zero(p1[0]), !f2.is_zero(p2[0])}];
  }
  std::map<std::pair<bool, bool>, std::size_t> expected{
      {{false, false}, 1}, {{true, true}, 1},
      {{true, false}, 2},  {{false, true}, 2}};
  CHECK(diag_counts == expected);
}
