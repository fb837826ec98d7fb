// One-forms, derivations, the cotangent sequence, smoothness reports, and
// the truncated universal differential graded algebra.
//
// Reference values used below, all derived by hand:
//
// * For a d-dimensional algebra the absolute one-forms have dimension
//   d(d-1) (the multiplication A (x) A -> A is onto), so: fields 0,
//   Mat_2 12, T(1,1) 6, F[x]/(x^2) 2, F x F 2.
// * For A = F_2[x]/(x^2) the kernel of multiplication inside A (x) A is
//   spanned by x (x) 1 + 1 (x) x = d(x) and x (x) x = x.d(x).
// * Derivations: a matrix algebra has only inner derivations (dimension
//   n^2 - 1 = 3 for n = 2); T(1,1) likewise has der = inner = 2 (the
//   center is the scalars); F_2[x]/(x^2) has der 2, inner 0 (commutative,
//   and D(x) is unconstrained in characteristic 2); the one-dimensional
//   module over F_2[x]/(x^2) on which x acts as zero on both sides has
//   der 1, inner 0.
// * Cotangent sequences, by Peirce decompositions of the middle tensors:
//     - the identity on F_2[x]/(x^2): domain A(x)Omega(x)A has dim 2, the
//       connecting map is onto the 2-dimensional one-forms, relative
//       forms vanish;
//     - the unit map F_2 -> T(1,1): no base forms, relative = absolute = 6;
//     - the augmentation F_2[x]/(x^2) -> F_2: both one-forms of the target
//       and the relative forms vanish, but the domain
//       F_2 (x)_B Omega_B (x)_B F_2 is one-dimensional (spanned by
//       1 (x) dx (x) 1; x acts as zero on both sides), so the connecting
//       map has a one-dimensional kernel: the sequence is not left exact;
//     - the diagonal-idempotent embedding F_2 x F_2 -> T(1,1):
//       A e_1 and e_1 A have dims 1 and 2, A e_2 and e_2 A dims 2 and 1,
//       so A (x)_B A has dim 1*2 + 2*1 = 4 and the relative forms dim 1,
//       while the domain has dim 1*1 + 2*2 = 5 and maps injectively.
// * Point lifting through the square-zero battery over F = F_2:
//     - F itself has the single point 1 -> 1 in every target, with exactly
//       one lift (unit preservation forces everything);
//     - B = F[x]/(x^2): into F only x -> 0, which lifts two ways to
//       F[x]/(x^2) (x -> 0 or x); into F[x]/(x^2) the two points x -> 0,
//       x -> x, and u = ax + bx^2 squares to 0 in F[x]/(x^3) only if
//       a = 0, so x -> x has no lift (4 square-zero elements in F[x]/(x^4),
//       hence max 4 lifts there); into F x F only x -> 0, lifting to the
//       two square-zero elements of T(1,1);
//     - B = T(1,1): two points into F (e11 -> 1 or e22 -> 1), each lifting
//       uniquely (complementary idempotents force the corner generator to
//       0 in a commutative target); into F x F four points (four
//       idempotents as the image of e11), with 1, 2, 2, or 4 lifts into
//       T(1,1) (idempotents above (1,0) are e11 and e11+e12, and above a
//       proper idempotent the corner can also map to e12);
//     - B = F x F: as for T(1,1) but without the corner generator, so the
//       four points into F x F lift with multiplicity 1, 2, 2, 1;
//     - B = Mat_2: no unital maps into any battery target (a 4-dimensional
//       simple algebra has no nonzero representation of dimension < 2,
//       and unital maps are injective), so every report is vacuous.
// * Hochschild: fields and Mat_2 give (1,0,0), T(1,1) gives (1,0,0),
//   F_2[x]/(x^2) gives (2,2,2), F_2 x F_2 gives (2,0,0).
// * The graded components of the universal differential algebra have
//   dimension d(d-1)^p: {2,2,2,2} for F_2[x]/(x^2) up to degree 3,
//   {3,6,12,24} for T(1,1), {4,12,36} for Mat_2(F_2) up to degree 2; and
//   over F_2[x]/(x^2), with e_p the class of 1.dx...dx in degree p,
//   del(x) = dx, x.dx = dx.x, dx.dx != 0, and del(x dx) = dx dx.

#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "ncm/algebra.hpp"
#include "ncm/budget.hpp"
#include "ncm/errors.hpp"
#include "ncm/ext.hpp"
#include "ncm/field.hpp"
#include "ncm/la.hpp"
#include "ncm/module.hpp"
#include "ncm/ncforms.hpp"

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

// The one-dimensional bimodule over F[x]/(x^2) on which x acts as zero
// from both sides.
template <ScalarField F>
BimoduleSpace<F> trivial_bimodule(const AlgebraPtr<F>& a) {
  const F& fld = a->field();
  Mat<F> one = Mat<F>::identity(fld, 1);
  Mat<F> zero(fld, 1, 1);
  return make_bimodule_space(a, a, 1, {one, zero}, {one, zero});
}

template <ScalarField F>
Vec<F> flat(const F& fld, const Mat<F>& m) {
  Vec<F> v = zero_vec(fld, m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) v[i * m.cols() + j] = m.at(i, j);
  return v;
}

void check_member(const ExtensionLiftReport& r, std::size_t points,
                  std::size_t unliftable, std::size_t min_lifts,
                  std::size_t max_lifts) {
  INFO(r.name);
  CHECK(r.points == points);
  CHECK(r.unliftable == unliftable);
  CHECK(r.min_lifts == min_lifts);
  CHECK(r.max_lifts == max_lifts);
}

}  // namespace

TEST_CASE("one-forms have the expected dimensions and satisfy the Leibniz rule") {
  FpField f2(2);
  FpField f3(3);

  // dim Omega^1 = d(d-1) across the board
  CHECK(omega1(field_algebra(f2)).dim() == 0);
  CHECK(omega1(field_algebra(f3)).dim() == 0);
  CHECK(omega1(matrix_algebra(f2, 2)).dim() == 12);
  CHECK(omega1(matrix_algebra(f3, 2)).dim() == 12);
  CHECK(omega1(triangular_algebra(f2, {1, 1})).dim() == 6);
  auto prod = product_algebra(field_algebra(f2), field_algebra(f2));
  CHECK(omega1(prod.alg).dim() == 2);

  auto a = poly_quotient_algebra(f2, zero_vec(f2, 2));  // F_2[x]/(x^2)
  OmegaOne<FpField> w = omega1(a);
  REQUIRE(w.dim() == 2);
  // the forms really are the kernel of multiplication
  CHECK((w.inclusion * w.mult).is_zero());
  // explicit kernel basis in A (x) A coordinates: dx and x (x) x
  CHECK(w.basis[0] == vec(f2, {0, 1, 1, 0}));
  CHECK(w.basis[1] == vec(f2, {0, 0, 0, 1}));
  // d kills the unit and sends x to x (x) 1 + 1 (x) x
  CHECK(is_zero_vec(f2, w.d.row(0)));
  CHECK(w.d.row(1) * w.inclusion == vec(f2, {0, 1, 1, 0}));

  // the same for a noncommutative instance
  OmegaOne<FpField> wt = omega1(triangular_algebra(f2, {1, 1}));
  CHECK((wt.inclusion * wt.mult).is_zero());

  // relative forms along the identity vanish; forms of the base must die
  OmegaOne<FpField> wrel = omega1_relative(identity_map(a));
  CHECK(wrel.dim() == 0);
  CHECK(wrel.base != nullptr);
}

TEST_CASE("derivation spaces match hand computations and the Hochschild comparison") {
  FpField f2(2);
  FpField f3(3);

  auto der_of = [](const AlgebraPtr<FpField>& a) {
    return derivations(a, regular_bimodule_space(a)).dim();
  };
  auto inner_of = [](const AlgebraPtr<FpField>& a) {
    return inner_derivations(a, regular_bimodule_space(a)).dim();
  };

  CHECK(der_of(field_algebra(f2)) == 0);
  CHECK(der_of(field_algebra(f3)) == 0);

  auto a = poly_quotient_algebra(f2, zero_vec(f2, 2));
  CHECK(der_of(a) == 2);
  CHECK(inner_of(a) == 0);
  CHECK(hochschild_dim(a, 1) == 2);

  auto m2f3 = matrix_algebra(f3, 2);
  CHECK(der_of(m2f3) == 3);
  CHECK(inner_of(m2f3) == 3);
  auto m2 = matrix_algebra(f2, 2);
  CHECK(der_of(m2) == 3);
  CHECK(inner_of(m2) == 3);
  auto t = triangular_algebra(f2, {1, 1});
  CHECK(der_of(t) == 2);
  CHECK(inner_of(t) == 2);

  // a non-regular coefficient bimodule: x acts as zero on both sides
  BimoduleSpace<FpField> triv = trivial_bimodule(a);
  DerivationSpace<FpField> dt = derivations(a, triv);
  CHECK(dt.dim() == 1);
  CHECK(inner_derivations(a, triv).dim() == 0);
  // both actions coincide, so degree zero sees the whole module, and
  // degree one agrees with derivations modulo inner ones
  CHECK(hochschild_dim(triv, 0) == 1);
  CHECK(hochschild_dim(triv, 1) == 1);

  // tabulated maps: D(1) = 0, D(x) = 1 is a derivation; D(1) = 1 is not
  Mat<FpField> good(f2, 2, 1);
  good.at(1, 0) = f2.one();
  CHECK(is_derivation(a, triv, good));
  Mat<FpField> bad(f2, 2, 1);
  bad.at(0, 0) = f2.one();
  CHECK(!is_derivation(a, triv, bad));
  CHECK_THROWS_MATCHES(is_derivation(a, triv, Mat<FpField>(f2, 3, 1)), Error,
                       has_code(ErrorCode::BadDimension));

  // inner derivations sit inside all derivations
  BimoduleSpace<FpField> reg = regular_bimodule_space(m2);
  DerivationSpace<FpField> all = derivations(m2, reg);
  DerivationSpace<FpField> inn = inner_derivations(m2, reg);
  std::vector<Vec<FpField>> rows;
  for (const Mat<FpField>& d : all.basis) rows.push_back(flat(f2, d));
  for (const Mat<FpField>& d : inn.basis)
    CHECK(in_row_space(f2, rows, flat(f2, d)));

  // coefficients over the wrong algebra are rejected
  CHECK_THROWS_MATCHES(derivations(m2, regular_bimodule_space(t)), Error,
                       has_code(ErrorCode::AlgebraMismatch));
}

TEST_CASE("bimodule maps out of the one-forms are exactly derivations") {
  FpField f2(2);
  auto a = poly_quotient_algebra(f2, zero_vec(f2, 2));
  auto m2 = matrix_algebra(f2, 2);
  auto t = triangular_algebra(f2, {1, 1});

  auto check_bijective = [](const AlgebraPtr<FpField>& alg,
                            const BimoduleSpace<FpField>& coeffs,
                            std::size_t expected) {
    OmegaOne<FpField> w = omega1(alg);
    UniversalPropertyReport rep = omega1_universal_check(w, coeffs);
    CHECK(rep.bijective);
    CHECK(rep.hom_dim == expected);
    CHECK(rep.der_dim == expected);
  };

  check_bijective(a, regular_bimodule_space(a), 2);
  check_bijective(a, trivial_bimodule(a), 1);
  check_bijective(m2, regular_bimodule_space(m2), 3);
  check_bijective(t, regular_bimodule_space(t), 2);

  // the check covers absolute forms only
  OmegaOne<FpField> wrel = omega1_relative(identity_map(a));
  CHECK_THROWS_MATCHES(omega1_universal_check(wrel, regular_bimodule_space(a)),
                       Error, has_code(ErrorCode::Unsupported));
}

TEST_CASE("the cotangent sequence is exact on the right and middle") {
  FpField f2(2);
  auto a = poly_quotient_algebra(f2, zero_vec(f2, 2));
  auto t = triangular_algebra(f2, {1, 1});
  auto scalars = field_algebra(f2);

  // identity: the connecting map is onto and the relative forms vanish
  CotangentReport same = cotangent_sequence_check(identity_map(a));
  CHECK(same.omega_base_dim == 2);
  CHECK(same.omega_total_dim == 2);
  CHECK(same.omega_rel_dim == 0);
  CHECK(same.left_domain_dim == 2);
  CHECK(same.left_image_dim == 2);
  CHECK(same.left_kernel_dim == 0);
  CHECK(same.exact_middle);
  CHECK(same.exact_right);

  // the unit map: no base forms, relative forms = absolute forms
  Mat<FpField> unit_row_t(f2, 1, 3);
  unit_row_t.at(0, 0) = f2.one();
  unit_row_t.at(0, 2) = f2.one();
  CotangentReport from_unit =
      cotangent_sequence_check(make_alg_map(scalars, t, std::move(unit_row_t)));
  CHECK(from_unit.omega_base_dim == 0);
  CHECK(from_unit.omega_total_dim == 6);
  CHECK(from_unit.omega_rel_dim == 6);
  CHECK(from_unit.left_domain_dim == 0);
  CHECK(from_unit.left_image_dim == 0);
  CHECK(from_unit.exact_middle);
  CHECK(from_unit.exact_right);

  // the augmentation F_2[x]/(x^2) -> F_2: exact at the middle and right,
  // but the connecting map has a one-dimensional kernel
  Mat<FpField> aug(f2, 2, 1);
  aug.at(0, 0) = f2.one();
  CotangentReport onto_point =
      cotangent_sequence_check(make_alg_map(a, scalars, std::move(aug)));
  CHECK(onto_point.omega_base_dim == 2);
  CHECK(onto_point.omega_total_dim == 0);
  CHECK(onto_point.omega_rel_dim == 0);
  CHECK(onto_point.left_domain_dim == 1);
  CHECK(onto_point.left_image_dim == 0);
  CHECK(onto_point.left_kernel_dim == 1);
  CHECK(onto_point.exact_middle);
  CHECK(onto_point.exact_right);

  // the diagonal-idempotent embedding F_2 x F_2 -> T(1,1)
  auto prod = product_algebra(field_algebra(f2), field_algebra(f2));
  Mat<FpField> diag(f2, 2, 3);
  diag.at(0, 0) = f2.one();
  diag.at(1, 2) = f2.one();
  CotangentReport semis =
      cotangent_sequence_check(make_alg_map(prod.alg, t, std::move(diag)));
  CHECK(semis.omega_base_dim == 2);
  CHECK(semis.omega_total_dim == 6);
  CHECK(semis.omega_rel_dim == 1);
  CHECK(semis.left_domain_dim == 5);
  CHECK(semis.left_image_dim == 5);
  CHECK(semis.left_kernel_dim == 0);
  CHECK(semis.exact_middle);
  CHECK(semis.exact_right);
}

TEST_CASE("smoothness and etaleness verdicts with the lifting cross-check") {
  FpField f2(2);
  FpField f3(3);

  auto report = [](const AlgebraPtr<FpField>& alg) {
    Budget budget;
    return smooth_etale_report(alg, budget);
  };

  // fields are etale: one point per target, exactly one lift
  for (const FpField* fld : {&f2, &f3}) {
    SmoothEtaleReport r = report(field_algebra(*fld));
    CHECK(r.omega1_dim == 0);
    CHECK(r.etale);
    CHECK(r.smooth);
    CHECK(r.hh0 == 1);
    CHECK(r.hh1 == 0);
    CHECK(r.hh2 == 0);
    REQUIRE(r.battery_ran);
    REQUIRE(r.battery.size() == 4);
    for (const ExtensionLiftReport& m : r.battery) check_member(m, 1, 0, 1, 1);
    CHECK(r.battery_all_lift);
    CHECK(r.battery_unique_lift);
    CHECK(r.witness.empty());
  }

  // matrix algebras are smooth but not etale; the battery is vacuous
  // because a 4-dimensional simple algebra has no points in targets of
  // dimension at most 4 other than itself
  for (const FpField* fld : {&f2, &f3}) {
    SmoothEtaleReport r = report(matrix_algebra(*fld, 2));
    CHECK(r.omega1_dim == 12);
    CHECK(!r.etale);
    CHECK(r.smooth);
    CHECK(r.der_dim == 3);
    CHECK(r.inner_der_dim == 3);
    CHECK(r.hh0 == 1);
    CHECK(r.hh1 == 0);
    CHECK(r.hh2 == 0);
    REQUIRE(r.battery.size() == 4);
    for (const ExtensionLiftReport& m : r.battery) check_member(m, 0, 0, 0, 0);
    CHECK(r.battery_all_lift);
    CHECK(r.battery_unique_lift);
  }

  // the triangular algebra is smooth (hereditary) but far from etale
  {
    SmoothEtaleReport r = report(triangular_algebra(f2, {1, 1}));
    CHECK(r.omega1_dim == 6);
    CHECK(!r.etale);
    CHECK(r.smooth);
    CHECK(r.hh0 == 1);
    CHECK(r.hh1 == 0);
    CHECK(r.hh2 == 0);
    REQUIRE(r.battery.size() == 4);
    check_member(r.battery[0], 2, 0, 1, 1);
    check_member(r.battery[1], 2, 0, 1, 1);
    check_member(r.battery[2], 2, 0, 1, 1);
    check_member(r.battery[3], 4, 0, 1, 4);
    CHECK(r.battery_all_lift);
    CHECK(!r.battery_unique_lift);
  }

  // the dual numbers are neither: the point x -> x of F[x]/(x^2) admits
  // no lift through F[x]/(x^3) -> F[x]/(x^2)
  {
    SmoothEtaleReport r = report(poly_quotient_algebra(f2, zero_vec(f2, 2)));
    CHECK(r.omega1_dim == 2);
    CHECK(!r.etale);
    CHECK(!r.smooth);
    CHECK(r.der_dim == 2);
    CHECK(r.inner_der_dim == 0);
    CHECK(r.hh0 == 2);
    CHECK(r.hh1 == 2);
    CHECK(r.hh2 == 2);
    REQUIRE(r.battery.size() == 4);
    check_member(r.battery[0], 1, 0, 2, 2);
    check_member(r.battery[1], 2, 1, 0, 2);
    check_member(r.battery[2], 2, 1, 0, 4);
    check_member(r.battery[3], 1, 0, 2, 2);
    CHECK(!r.battery_all_lift);
    CHECK(!r.battery_unique_lift);
    CHECK(!r.witness.empty());
  }

  // the split quadratic etale algebra F x F is smooth (separable) but its
  // one-forms do not vanish, so it is not etale in this absolute sense
  {
    auto prod = product_algebra(field_algebra(f2), field_algebra(f2));
    SmoothEtaleReport r = report(prod.alg);
    CHECK(r.omega1_dim == 2);
    CHECK(!r.etale);
    CHECK(r.smooth);
    CHECK(r.hh0 == 2);
    CHECK(r.hh1 == 0);
    CHECK(r.hh2 == 0);
    REQUIRE(r.battery.size() == 4);
    check_member(r.battery[0], 2, 0, 1, 1);
    check_member(r.battery[1], 2, 0, 1, 1);
    check_member(r.battery[2], 2, 0, 1, 1);
    check_member(r.battery[3], 4, 0, 1, 2);
    CHECK(r.battery_all_lift);
    CHECK(!r.battery_unique_lift);
  }

  // over the rationals the lifting battery cannot run, but the
  // module-theoretic verdicts still do
  {
    QField q;
    Budget budget;
    SmoothEtaleReport r = smooth_etale_report(matrix_algebra(q, 2), budget);
    CHECK(!r.battery_ran);
    CHECK(r.battery.empty());
    CHECK(r.omega1_dim == 12);
    CHECK(r.smooth);
    CHECK(!r.etale);
  }

  // a tiny budget stops the enumeration
  {
    Budget tiny(50);
    CHECK_THROWS_MATCHES(
        smooth_etale_report(poly_quotient_algebra(f2, zero_vec(f2, 2)), tiny),
        Error, has_code(ErrorCode::BudgetExceeded));
  }
}

TEST_CASE("the truncated universal differential graded algebra") {
  FpField f2(2);
  Budget budget;

  // over a field everything above degree zero collapses
  DeRhamDGAA<FpField> df = derham(field_algebra(f2), 3, budget);
  CHECK(df.comp_dim == std::vector<std::size_t>{1, 0, 0, 0});

  // F_2[x]/(x^2): every degree is two-dimensional
  auto a = poly_quotient_algebra(f2, zero_vec(f2, 2));
  DeRhamDGAA<FpField> da = derham(a, 3, budget);
  CHECK(da.comp_dim == std::vector<std::size_t>{2, 2, 2, 2});
  // del kills the unit and sends x to dx = e_1 of degree 1
  CHECK(is_zero_vec(f2, da.del[0].row(0)));
  CHECK(da.del[0].row(1) == vec(f2, {1, 0}));
  // x.dx and dx.x agree in characteristic 2 and land on x dx
  Vec<FpField> x = vec(f2, {0, 1});
  Vec<FpField> dx = vec(f2, {1, 0});
  CHECK(da.mul(0, 1, x, dx) == vec(f2, {0, 1}));
  CHECK(da.mul(1, 0, dx, x) == vec(f2, {0, 1}));
  // dx.dx is the basis form of degree 2, not zero
  CHECK(da.mul(1, 1, dx, dx) == vec(f2, {1, 0}));
  // del(x dx) = dx dx
  CHECK(da.del[1].row(1) == vec(f2, {1, 0}));
  // degree one is the kernel model of the one-forms, here on the nose
  OmegaOne<FpField> wa = omega1(a);
  CHECK(derham_to_omega1(da, wa) == Mat<FpField>::identity(f2, 2));

  // degree dimensions d(d-1)^p, and degree two matches the double tensor
  auto t = triangular_algebra(f2, {1, 1});
  DeRhamDGAA<FpField> dt = derham(t, 3, budget);
  CHECK(dt.comp_dim == std::vector<std::size_t>{3, 6, 12, 24});
  auto m2 = matrix_algebra(f2, 2);
  DeRhamDGAA<FpField> dm = derham(m2, 2, budget);
  CHECK(dm.comp_dim == std::vector<std::size_t>{4, 12, 36});

  OmegaOne<FpField> wt = omega1(t);
  OmegaOne<FpField> wm = omega1(m2);
  CHECK(rank(derham_to_omega1(dt, wt)) == 6);
  CHECK(rank(derham_to_omega1(dm, wm)) == 12);
  BimoduleSpace<FpField> wts = omega1_bimodule_space(wt);
  BimoduleSpace<FpField> wms = omega1_bimodule_space(wm);
  BimoduleSpace<FpField> was = omega1_bimodule_space(wa);
  CHECK(tensor_over(was, was).space.dim == da.comp_dim[2]);
  CHECK(tensor_over(wts, wts).space.dim == dt.comp_dim[2]);
  CHECK(tensor_over(wms, wms).space.dim == dm.comp_dim[2]);

  // mismatched pairs and overflowing degrees are rejected
  CHECK_THROWS_MATCHES(derham_to_omega1(dt, wm), Error,
                       has_code(ErrorCode::AlgebraMismatch));
  CHECK_THROWS_MATCHES(da.mul(3, 1, vec(f2, {1, 0}), dx), Error,
                       has_code(ErrorCode::BadDimension));

  // eight degrees of Mat_2 would need billions of matrix cells: the
  // budget stops the construction before anything is allocated
  Budget fresh;
  CHECK_THROWS_MATCHES(derham(m2, 8, fresh), Error,
                       has_code(ErrorCode::BudgetExceeded));
}
