#pragma once

// Exact scalar arithmetic.
//
// Two field contexts are provided:
//   * FpField  — the prime field F_p (p prime), elements stored as canonical
//                residues.  Only prime fields are needed here, not F_q.
//   * QField   — the rationals, backed by boost::multiprecision::cpp_rational.
//
// A context is a small value type that mints elements (zero/one/from string),
// so generic code is written against the Field concept below and never sees
// which arithmetic it is running on.  Elements carry enough information to be
// combined with operators directly; mixing residues of different moduli is a
// logic error and asserts.

#include <boost/multiprecision/cpp_int.hpp>

#include <cassert>
#include <cstdint>
#include <string>

#include "ncm/errors.hpp"

namespace ncm {

// ---------------------------------------------------------------------------
// F_p

struct FpElem {
  std::uint64_t v = 0;  // canonical residue in [0, p)
  std::uint32_t p = 0;  // modulus (0 only for default-constructed garbage)

  friend bool operator==(const FpElem& a, const FpElem& b) {
    assert(a.p == b.p);
    return a.v == b.v;
  }
  friend bool operator!=(const FpElem& a, const FpElem& b) { return !(a == b); }
  friend bool operator<(const FpElem& a, const FpElem& b) {
    assert(a.p == b.p);
    return a.v < b.v;
  }

  friend FpElem operator+(const FpElem& a, const FpElem& b) {
    assert(a.p == b.p && a.p != 0);
    std::uint64_t s = a.v + b.v;
    if (s >= a.p) s -= a.p;
    return {s, a.p};
  }
  friend FpElem operator-(const FpElem& a, const FpElem& b) {
    assert(a.p == b.p && a.p != 0);
    std::uint64_t s = a.v + a.p - b.v;
    if (s >= a.p) s -= a.p;
    return {s, a.p};
  }
  friend FpElem operator-(const FpElem& a) {
    assert(a.p != 0);
    return {a.v == 0 ? 0 : a.p - a.v, a.p};
  }
  friend FpElem operator*(const FpElem& a, const FpElem& b) {
    assert(a.p == b.p && a.p != 0);
    return {(a.v * b.v) % a.p, a.p};
  }
  FpElem& operator+=(const FpElem& o) { return *this = *this + o; }
  FpElem& operator-=(const FpElem& o) { return *this = *this - o; }
  FpElem& operator*=(const FpElem& o) { return *this = *this * o; }
};

class FpField {
 public:
  using Elem = FpElem;

  explicit FpField(std::uint32_t p) : p_(p) {
    require(is_prime(p), ErrorCode::BadField,
            "characteristic " + std::to_string(p) + " is not prime");
  }

  std::uint32_t characteristic() const { return p_; }
  bool finite() const { return true; }
  std::uint64_t size() const { return p_; }

  Elem zero() const { return {0, p_}; }
  Elem one() const { return {1 % p_, p_}; }
  Elem from_int(long long n) const {
    long long r = n % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return {static_cast<std::uint64_t>(r), p_};
  }
  // Enumeration support: the i-th element, 0 <= i < size().
  Elem elem_at(std::uint64_t i) const {
    assert(i < p_);
    return {i, p_};
  }
  std::uint64_t index_of(const Elem& e) const { return e.v; }

  bool is_zero(const Elem& e) const { return e.v == 0; }

  Elem inv(const Elem& e) const {
    require(e.v != 0, ErrorCode::BadDimension, "division by zero in F_p");
    // extended Euclid on (v, p)
    long long t = 0, newt = 1;
    long long r = static_cast<long long>(p_), newr = static_cast<long long>(e.v);
    while (newr != 0) {
      long long q = r / newr;
      long long tmp = t - q * newt;
      t = newt; newt = tmp;
      tmp = r - q * newr;
      r = newr; newr = tmp;
    }
    if (t < 0) t += p_;
    return {static_cast<std::uint64_t>(t), p_};
  }

  // Scalars in files are decimal strings; "a/b" is accepted when b is
  // invertible mod p.
  Elem parse(const std::string& s) const {
    auto slash = s.find('/');
    if (slash == std::string::npos) return from_int(parse_int(s));
    Elem num = from_int(parse_int(s.substr(0, slash)));
    Elem den = from_int(parse_int(s.substr(slash + 1)));
    return num * inv(den);
  }
  std::string str(const Elem& e) const { return std::to_string(e.v); }

  friend bool operator==(const FpField& a, const FpField& b) {
    return a.p_ == b.p_;
  }

  static bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }

 private:
  static long long parse_int(const std::string& s) {
    require(!s.empty(), ErrorCode::ParseError, "empty scalar");
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &pos);
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError, "bad scalar '" + s + "'");
    }
    require(pos == s.size(), ErrorCode::ParseError, "bad scalar '" + s + "'");
    return v;
  }

  std::uint32_t p_;
};

// ---------------------------------------------------------------------------
// Q

struct QElem {
  boost::multiprecision::cpp_rational v;

  friend bool operator==(const QElem& a, const QElem& b) { return a.v == b.v; }
  friend bool operator!=(const QElem& a, const QElem& b) { return a.v != b.v; }
  friend bool operator<(const QElem& a, const QElem& b) { return a.v < b.v; }
  friend QElem operator+(const QElem& a, const QElem& b) { return {a.v + b.v}; }
  friend QElem operator-(const QElem& a, const QElem& b) { return {a.v - b.v}; }
  friend QElem operator-(const QElem& a) { return {-a.v}; }
  friend QElem operator*(const QElem& a, const QElem& b) { return {a.v * b.v}; }
  QElem& operator+=(const QElem& o) { v += o.v; return *this; }
  QElem& operator-=(const QElem& o) { v -= o.v; return *this; }
  QElem& operator*=(const QElem& o) { v *= o.v; return *this; }
};

class QField {
 public:
  using Elem = QElem;

  std::uint32_t characteristic() const { return 0; }
  bool finite() const { return false; }
  std::uint64_t size() const {
    fail(ErrorCode::Unsupported, "Q is not a finite field");
  }

  Elem zero() const { return {0}; }
  Elem one() const { return {1}; }
  Elem from_int(long long n) const { return {n}; }
  Elem elem_at(std::uint64_t) const {
    fail(ErrorCode::Unsupported, "cannot enumerate Q");
  }
  std::uint64_t index_of(const Elem&) const {
    fail(ErrorCode::Unsupported, "cannot enumerate Q");
  }

  bool is_zero(const Elem& e) const { return e.v == 0; }
  Elem inv(const Elem& e) const {
    require(e.v != 0, ErrorCode::BadDimension, "division by zero in Q");
    return {1 / e.v};
  }

  Elem parse(const std::string& s) const {
    try {
      return {boost::multiprecision::cpp_rational(s)};
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError, "bad scalar '" + s + "'");
    }
  }
  std::string str(const Elem& e) const { return e.v.str(); }

  friend bool operator==(const QField&, const QField&) { return true; }
};

// ---------------------------------------------------------------------------
// The concept generic code is written against.

template <class F>
concept ScalarField = requires(const F f, const typename F::Elem e) {
  { f.zero() } -> std::same_as<typename F::Elem>;
  { f.one() } -> std::same_as<typename F::Elem>;
  { f.inv(e) } -> std::same_as<typename F::Elem>;
  { f.is_zero(e) } -> std::same_as<bool>;
  { f.characteristic() };
  { e + e } -> std::same_as<typename F::Elem>;
  { e - e } -> std::same_as<typename F::Elem>;
  { e * e } -> std::same_as<typename F::Elem>;
};

static_assert(ScalarField<FpField>);
static_assert(ScalarField<QField>);

}  // namespace ncm
