#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace coringlab {

using Rational = boost::multiprecision::cpp_rational;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when values from incompatible scalar domains are combined.
struct TypeError : Error {
  using Error::Error;
};

// Raised when an internal consistency invariant fails; indicates a bug, not bad input.
struct InternalError : Error {
  using Error::Error;
};

bool is_prime(long long n);

// Exact scalar: an integer literal, an arbitrary-precision rational, or a
// residue mod a prime.  Integer literals unify with either of the other two
// kinds (so Eigen's Scalar(0)/Scalar(1) work over any field); rationals and
// residues never mix.
class Scalar {
 public:
  enum class Kind { Int, Rat, Mod };

  Scalar() : Scalar(0) {}
  Scalar(int v) : Scalar(static_cast<long long>(v)) {}
  Scalar(long long v) : kind_(Kind::Int), q_(v) {}

  static Scalar rational(Rational q);
  static Scalar mod(long long v, long long p);

  Kind kind() const { return kind_; }
  const Rational& rat() const;
  long long residue() const;
  long long modulus() const;

  bool is_zero() const;
  bool is_one() const;

  Scalar operator-() const;
  Scalar inverse() const;

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  std::string str() const;

 private:
  Kind kind_;
  Rational q_;       // value for Int / Rat
  long long r_ = 0;  // residue for Mod, normalized into [0, p)
  long long p_ = 0;  // modulus for Mod

  static void unify(Scalar& a, Scalar& b);
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

// Scalar domain tag: the rationals or a prime field.
struct Field {
  enum class Kind { Q, Fp };

  Kind kind = Kind::Q;
  long long p = 0;

  static Field QQ() { return Field{Kind::Q, 0}; }
  static Field GF(long long p);

  bool operator==(const Field& o) const { return kind == o.kind && p == o.p; }
  bool operator!=(const Field& o) const { return !(*this == o); }

  Scalar zero() const { return promote(Scalar(0)); }
  Scalar one() const { return promote(Scalar(1)); }
  Scalar from_long(long long v) const { return promote(Scalar(v)); }

  // Retags an Int literal as a field element; rejects elements of the other field.
  Scalar promote(const Scalar& s) const;

  std::string str() const;
};

Scalar parse_scalar(const std::string& text, const Field& field);

}  // namespace coringlab

namespace Eigen {

template <typename T>
struct NumTraits;

template <>
struct NumTraits<coringlab::Scalar> {
  using Real = coringlab::Scalar;
  using NonInteger = coringlab::Scalar;
  using Literal = coringlab::Scalar;
  using Nested = coringlab::Scalar;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 30,
    MulCost = 60,
  };
  static inline Real epsilon() { return coringlab::Scalar(0); }
  static inline Real dummy_precision() { return coringlab::Scalar(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
