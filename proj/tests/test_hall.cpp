// Module classification, submodule-counting structure constants, the graded
// product with its unit, and the two consistency batteries.
//
// Reference values used below, all derived by hand:
//
// * Radicals.  A field and Mat₂(F₂) are semisimple: every nonzero element of
//   a field is invertible and Mat₂ is simple, so no nonzero element generates
//   a nilpotent ideal.  In the upper-triangular algebra T on signature (1,1)
//   exactly the multiples of the off-diagonal unit e12 do (e12² = 0 and
//   ideal(e12) = span{e12}); adding any diagonal part creates an idempotent
//   in the generated ideal.  In F₂[x]/(x²) the radical is (x), with
//   nilpotency degree 2.
//
// * Classes over F₂.  A module is a plain vector space, so there is exactly
//   one class per dimension; the only unital map F₂ → Mat_n sends 1 to the
//   identity.
//
// * Classes over T = T(1,1)(F₂).  Dimension 1: the two simples S1 (e11 acts
//   as 1) and S2 (e22 acts as 1); e12 must act as 0 since its square is 0.
//   Dimension 2: the three direct sums S1⊕S1, S1⊕S2, S2⊕S2 plus the one
//   indecomposable P = row space of {e11, e12} under right multiplication,
//   whose radical filtration is (2,1,0) — seven classes up to dimension 2.
//   Dimension 3 (Krull–Schmidt): S1³, S1²⊕S2, S1⊕S2², S2³, P⊕S1, P⊕S2 — six
//   more, thirteen in total up to dimension 3.
//
// * Subspace counts over F₂ by the q-binomial formula
//   Π_{i<k}(q^{n−i}−1)/(q^{k−i}−1): [2 1] = 3, [3 1] = [3 2] = 7,
//   [4 1] = [4 3] = 15, [4 2] = 35.  The formula is evaluated independently
//   in this file and compared against the exhaustive submodule scan.
//
// * Path-algebra constants.  P has exactly one invariant line, spanned by
//   the image of e12; it is isomorphic to S2 and the quotient to S1, so
//   g^P_{S1,S2} = 1 and g^P_{S2,S1} = 0.  In S1⊕S2 only the two coordinate
//   lines are invariant (a mixed line is moved by the diagonal idempotents),
//   giving [S1]·[S2] = [P] + [S1⊕S2] but [S2]·[S1] = [S1⊕S2].  Scalar
//   actions give [S1]² = 3·[S1⊕S1] and [S2]² = 3·[S2⊕S2] — the three lines
//   of F₂².
//
// * Gluing battery.  Signatures of total size ≤ 4 with at least two blocks:
//   (1,1); (1,1,1), (1,2), (2,1); (1,1,1,1), (1,1,2), (1,2,1), (1,3),
//   (2,1,1), (2,2), (3,1) — eleven signatures, and with one case per merge
//   position 17 cases in total.
//
// * Triple counts.  Over F₂ at bound 3 there is one class per dimension
//   0..3, so the dimension-compatible triples are the 20 solutions of
//   a+b+c ≤ 3.  Over T at bound 2 the classes count 1/2/4 by dimension,
//   giving 1 + 3·2 + 3·4 + 3·4 = 31 triples; at bound 3 (classes 1/2/4/6)
//   the count is 1 + 6 + 12 + 8 + 12 + 48 + 18 = 105.

#include <catch2/catch_amalgamated.hpp>

#include <cstddef>
#include <map>
#include <vector>

#include "ncm/algebra.hpp"
#include "ncm/budget.hpp"
#include "ncm/errors.hpp"
#include "ncm/field.hpp"
#include "ncm/hall.hpp"
#include "ncm/la.hpp"
#include "ncm/module.hpp"

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

unsigned long long qpow(unsigned long long q, unsigned long long e) {
  unsigned long long r = 1;
  while (e-- > 0) r *= q;
  return r;
}

// q-binomial coefficient [n k]_q by the product formula (exact division).
unsigned long long gauss(unsigned long long n, unsigned long long k,
                         unsigned long long q) {
  unsigned long long num = 1, den = 1;
  for (unsigned long long i = 0; i < k; ++i) {
    num *= qpow(q, n - i) - 1;
    den *= qpow(q, k - i) - 1;
  }
  return num / den;
}

template <ScalarField F, typename Pred>
const ModuleClass<F>& class_where(const std::vector<ModuleClass<F>>& classes,
                                  Pred&& pred) {
  for (const auto& c : classes)
    if (pred(c)) return c;
  FAIL("no class matches the predicate");
  return classes.front();
}

template <ScalarField F>
std::size_t count_dim(const std::vector<ModuleClass<F>>& classes,
                      std::size_t d) {
  std::size_t n = 0;
  for (const auto& c : classes)
    if (c.rep.dim == d) ++n;
  return n;
}

}  // namespace

TEST_CASE("the radical is exactly the elements generating nilpotent ideals") {
  FpField f2(2);
  Budget b(1 << 20);

  SECTION("semisimple algebras have zero radical") {
    CHECK(radical_rows(field_algebra(f2), b).empty());
    CHECK(radical_rows(matrix_algebra(f2, 2), b).empty());
  }

  SECTION("the triangular algebra's radical is the off-diagonal unit") {
    auto t = triangular_algebra(f2, {1, 1});
    auto rad = radical_rows(t, b);
    REQUIRE(rad.size() == 1);
    CHECK(rad[0] == vec(f2, {0, 1, 0}));
    auto deg = nilpotency_degree(*t, rad);
    REQUIRE(deg.has_value());
    CHECK(*deg == 2);
  }

  SECTION("dual numbers have radical (x)") {
    auto dual = poly_quotient_algebra(f2, vec(f2, {0, 0}));
    auto rad = radical_rows(dual, b);
    REQUIRE(rad.size() == 1);
    CHECK(rad[0] == vec(f2, {0, 1}));
  }

  SECTION("infinite fields and tiny budgets are refused") {
    QField q;
    Budget bq(1 << 10);
    CHECK_THROWS_MATCHES(radical_rows(field_algebra(q), bq), Error,
                         has_code(ErrorCode::Unsupported));
    auto t = triangular_algebra(f2, {1, 1});
    Budget tiny(1);
    CHECK_THROWS_MATCHES(radical_rows(t, tiny), Error,
                         has_code(ErrorCode::BudgetExceeded));
  }
}

TEST_CASE("vector-space classes are classified by dimension alone") {
  FpField f2(2);
  auto a = field_algebra(f2);
  Budget b(1 << 22);

  SECTION("bound zero yields only the zero module") {
    auto classes = enumerate_module_classes(a, 0, b);
    REQUIRE(classes.size() == 1);
    CHECK(classes[0].rep.dim == 0);
    CHECK(classes[0].id == 0);
    CHECK(classes[0].fingerprint == std::vector<std::size_t>{0});
  }

  SECTION("one class per dimension, the unit acting as the identity") {
    auto classes = enumerate_module_classes(a, 3, b);
    REQUIRE(classes.size() == 4);
    for (std::size_t n = 0; n <= 3; ++n) {
      CHECK(classes[n].id == n);
      CHECK(classes[n].rep.dim == n);
      if (n > 0) {
        CHECK(classes[n].fingerprint == std::vector<std::size_t>{n, 0});
        REQUIRE(classes[n].rep.act.size() == 1);
        CHECK(classes[n].rep.act[0] == Mat<FpField>::identity(f2, n));
      }
    }
    // the enumeration is deterministic
    Budget b2(1 << 22);
    auto again = enumerate_module_classes(a, 3, b2);
    REQUIRE(again.size() == classes.size());
    for (std::size_t i = 0; i < classes.size(); ++i) {
      CHECK(again[i].fingerprint == classes[i].fingerprint);
      CHECK(again[i].rep.act == classes[i].rep.act);
    }
  }
}

TEST_CASE("path-algebra classes: two simples, one glued pair, their sums") {
  FpField f2(2);
  auto t = triangular_algebra(f2, {1, 1});  // basis e11, e12, e22
  Budget b(1 << 22);

  auto classes = enumerate_module_classes(t, 2, b);
  REQUIRE(classes.size() == 7);
  CHECK(count_dim(classes, 0) == 1);
  CHECK(count_dim(classes, 1) == 2);
  CHECK(count_dim(classes, 2) == 4);

  const auto& s1 = class_where(classes, [](const ModuleClass<FpField>& c) {
    return c.rep.dim == 1 && rank(c.rep.act[0]) == 1;
  });
  const auto& s2 = class_where(classes, [](const ModuleClass<FpField>& c) {
    return c.rep.dim == 1 && rank(c.rep.act[2]) == 1;
  });
  CHECK(s1.id != s2.id);
  CHECK(s1.fingerprint == std::vector<std::size_t>{1, 0});
  CHECK(s2.fingerprint == std::vector<std::size_t>{1, 0});

  SECTION("the simples share a fingerprint but admit no intertwiner") {
    Budget biso(1 << 16);
    CHECK_FALSE(find_isomorphism(s1.rep, s2.rep, biso).has_value());
  }

  SECTION("exactly one dimension-2 class has a nontrivial radical series") {
    std::size_t glued = 0;
    for (const auto& c : classes)
      if (c.fingerprint == std::vector<std::size_t>{2, 1, 0}) ++glued;
    CHECK(glued == 1);
    const auto& p = class_where(classes, [](const ModuleClass<FpField>& c) {
      return c.fingerprint == std::vector<std::size_t>{2, 1, 0};
    });
    // on P both diagonal idempotents act with rank one and the arrow acts
    // nontrivially
    CHECK(rank(p.rep.act[0]) == 1);
    CHECK(rank(p.rep.act[1]) == 1);
    CHECK(rank(p.rep.act[2]) == 1);
    // the direct sums are separated by the rank of the first idempotent
    CHECK(class_where(classes,
                      [](const ModuleClass<FpField>& c) {
                        return c.rep.dim == 2 && rank(c.rep.act[0]) == 2;
                      })
              .fingerprint == std::vector<std::size_t>{2, 0});
    CHECK(class_where(classes,
                      [](const ModuleClass<FpField>& c) {
                        return c.rep.dim == 2 && rank(c.rep.act[2]) == 2;
                      })
              .fingerprint == std::vector<std::size_t>{2, 0});
  }

  SECTION("dimension three adds the six Krull-Schmidt combinations") {
    Budget b3(1 << 23);
    auto classes3 = enumerate_module_classes(t, 3, b3);
    CHECK(classes3.size() == 13);
    CHECK(count_dim(classes3, 3) == 6);
    // exactly two of them contain the glued pair as a summand
    std::size_t with_radical = 0;
    for (const auto& c : classes3)
      if (c.fingerprint == std::vector<std::size_t>{3, 1, 0}) ++with_radical;
    CHECK(with_radical == 2);
  }
}

TEST_CASE("subspace counts match the q-binomial formula") {
  FpField f2(2);
  auto a = field_algebra(f2);
  Budget b(1 << 22);

  auto table = hall_table(a, 4, b);
  REQUIRE(table.classes.size() == 5);
  for (std::size_t n = 0; n <= 4; ++n) CHECK(table.classes[n].rep.dim == n);

  SECTION("every graded constant is a Gaussian binomial") {
    CHECK(table.coefficient(1, 1, 2) == 3);
    CHECK(table.coefficient(1, 2, 3) == 7);
    CHECK(table.coefficient(2, 1, 3) == 7);
    CHECK(table.coefficient(2, 2, 4) == 35);
    CHECK(table.coefficient(1, 3, 4) == 15);
    CHECK(table.coefficient(3, 1, 4) == 15);
    for (std::size_t m = 0; m <= 4; ++m)
      for (std::size_t n = 0; m + n <= 4; ++n)
        CHECK(table.coefficient(m, n, m + n) == gauss(m + n, n, 2));
  }

  SECTION("the zero class is a strict two-sided unit") {
    for (const auto& c : table.classes) {
      const std::map<std::size_t, std::size_t> expect{{c.id, 1}};
      CHECK(table.product(0, c.id) == expect);
      CHECK(table.product(c.id, 0) == expect);
    }
  }

  SECTION("off-grading counts vanish by exhaustion, not by fiat") {
    Budget bd(1 << 20);
    CHECK(hall_number(table.classes[2], table.classes[1], table.classes[2],
                      bd) == 0);
    CHECK(hall_number(table.classes[1], table.classes[1], table.classes[1],
                      bd) == 0);
    CHECK(hall_number(table.classes[2], table.classes[1], table.classes[1],
                      bd) == 3);
  }
}

TEST_CASE("the path-algebra product is noncommutative exactly as derived") {
  FpField f2(2);
  auto t = triangular_algebra(f2, {1, 1});
  Budget b(1 << 23);

  auto table = hall_table(t, 2, b);
  REQUIRE(table.classes.size() == 7);
  const auto& cls = table.classes;
  const auto& s1 = class_where(cls, [](const ModuleClass<FpField>& c) {
    return c.rep.dim == 1 && rank(c.rep.act[0]) == 1;
  });
  const auto& s2 = class_where(cls, [](const ModuleClass<FpField>& c) {
    return c.rep.dim == 1 && rank(c.rep.act[2]) == 1;
  });
  const auto& p = class_where(cls, [](const ModuleClass<FpField>& c) {
    return c.fingerprint == std::vector<std::size_t>{2, 1, 0};
  });
  const auto& s11 = class_where(cls, [](const ModuleClass<FpField>& c) {
    return c.rep.dim == 2 && rank(c.rep.act[0]) == 2;
  });
  const auto& s22 = class_where(cls, [](const ModuleClass<FpField>& c) {
    return c.rep.dim == 2 && rank(c.rep.act[2]) == 2;
  });
  const auto& s12 = class_where(cls, [&](const ModuleClass<FpField>& c) {
    return c.rep.dim == 2 && c.id != p.id && c.id != s11.id && c.id != s22.id;
  });

  SECTION("the glued pair appears in one order only") {
    Budget bh(1 << 20);
    CHECK(hall_number(p, s1, s2, bh) == 1);
    CHECK(hall_number(p, s2, s1, bh) == 0);
    const std::map<std::size_t, std::size_t> forward{{p.id, 1}, {s12.id, 1}};
    const std::map<std::size_t, std::size_t> backward{{s12.id, 1}};
    CHECK(table.product(s1.id, s2.id) == forward);
    CHECK(table.product(s2.id, s1.id) == backward);
    CHECK(table.product(s1.id, s1.id) ==
          std::map<std::size_t, std::size_t>{{s11.id, 3}});
    CHECK(table.product(s2.id, s2.id) ==
          std::map<std::size_t, std::size_t>{{s22.id, 3}});
  }

  SECTION("the free product function agrees with the table") {
    Budget bp(1 << 20);
    CHECK(hall_product(s1, s2, cls, bp) == table.product(s1.id, s2.id));
    CHECK(hall_product(s2, s1, cls, bp) == table.product(s2.id, s1.id));
  }

  SECTION("the opposite convention transposes the factors") {
    Budget b2(1 << 23);
    auto flipped = hall_table(t, 2, b2, HallConvention::SubIsFirst);
    for (const auto& m : cls)
      for (const auto& n : cls) {
        if (m.rep.dim + n.rep.dim > 2) continue;
        for (const auto& l : cls)
          CHECK(flipped.coefficient(m.id, n.id, l.id) ==
                table.coefficient(n.id, m.id, l.id));
      }
    Budget bh(1 << 20);
    CHECK(hall_number(p, s2, s1, bh, HallConvention::SubIsFirst) == 1);
    CHECK(hall_number(p, s1, s2, bh, HallConvention::SubIsFirst) == 0);
  }
}

TEST_CASE("associativity and the triangular gluing identities hold together") {
  FpField f2(2);

  SECTION("classical subspace counting is associative") {
    Budget b(1 << 22);
    auto report = segal_checks(field_algebra(f2), 3, b);
    CHECK(report.ok());
    CHECK(report.ring_cases == 17);
    CHECK(report.ring_failures == 0);
    CHECK(report.assoc_triples == 20);
    CHECK(report.assoc_failures == 0);
    CHECK(report.failures.empty());
    CHECK(report.table.classes.size() == 4);
  }

  SECTION("the path algebra is associative through dimension three") {
    auto t = triangular_algebra(f2, {1, 1});
    Budget b2(1 << 22);
    auto at2 = segal_checks(t, 2, b2);
    CHECK(at2.ok());
    CHECK(at2.assoc_triples == 31);
    CHECK(at2.failures.empty());

    Budget b3(1 << 24);
    auto at3 = segal_checks(t, 3, b3);
    CHECK(at3.ok());
    CHECK(at3.assoc_triples == 105);
    CHECK(at3.table.classes.size() == 13);
  }

  SECTION("the gluing battery also passes over F₃") {
    FpField f3(3);
    Budget b(1 << 22);
    auto report = segal_checks(field_algebra(f3), 2, b);
    CHECK(report.ok());
    CHECK(report.ring_cases == 17);
    CHECK(report.table.coefficient(1, 1, 2) == gauss(2, 1, 3));
  }
}

TEST_CASE("resource limits and mixed algebras are refused") {
  FpField f2(2);
  auto a = field_algebra(f2);
  auto t = triangular_algebra(f2, {1, 1});

  SECTION("budgets bound the enumeration") {
    Budget tiny(1);
    CHECK_THROWS_MATCHES(enumerate_module_classes(a, 2, tiny), Error,
                         has_code(ErrorCode::BudgetExceeded));
  }

  SECTION("infinite fields are unsupported") {
    QField q;
    Budget b(1 << 10);
    CHECK_THROWS_MATCHES(enumerate_module_classes(field_algebra(q), 1, b),
                         Error, has_code(ErrorCode::Unsupported));
  }

  SECTION("classes over different algebras do not mix") {
    Budget b(1 << 22);
    auto over_field = enumerate_module_classes(a, 1, b);
    auto over_path = enumerate_module_classes(t, 1, b);
    Budget bh(1 << 16);
    CHECK_THROWS_MATCHES(
        hall_number(over_field[1], over_path[1], over_path[2], bh), Error,
        has_code(ErrorCode::AlgebraMismatch));
    CHECK_THROWS_MATCHES(
        hall_product(over_field[1], over_field[1], over_path, bh), Error,
        has_code(ErrorCode::AlgebraMismatch));
  }
}
