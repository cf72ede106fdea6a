#include "coringlab/scalar.hpp"

#include <ostream>
#include <sstream>

namespace coringlab {

namespace {

using u128 = unsigned __int128;

long long mulmod(long long a, long long b, long long m) {
  return static_cast<long long>(static_cast<u128>(a) * static_cast<u128>(b) % static_cast<u128>(m));
}

long long powmod(long long a, long long e, long long m) {
  long long r = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

// Inverse mod p by the extended Euclidean algorithm.
long long invmod(long long a, long long p) {
  long long old_r = a, r = p;
  long long old_s = 1, s = 0;
  while (r != 0) {
    long long q = old_r / r;
    long long t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1 && old_r != -1) throw Error("element has no inverse mod " + std::to_string(p));
  long long inv = old_s % p;
  if (old_r == -1) inv = -inv;
  if (inv < 0) inv += p;
  return inv;
}

long long norm_residue(long long v, long long p) {
  long long r = v % p;
  if (r < 0) r += p;
  return r;
}

}  // namespace

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long q : {2LL, 3LL, 5LL, 7LL, 11LL, 13LL, 17LL, 19LL, 23LL, 29LL, 31LL, 37LL}) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  // Deterministic Miller-Rabin for 64-bit inputs.
  long long d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (long long a : {2LL, 3LL, 5LL, 7LL, 11LL, 13LL, 17LL, 19LL, 23LL, 29LL, 31LL, 37LL}) {
    long long x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 0; i < s - 1; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Scalar Scalar::rational(Rational q) {
  Scalar s;
  s.kind_ = Kind::Rat;
  s.q_ = std::move(q);
  return s;
}

Scalar Scalar::mod(long long v, long long p) {
  if (p < 2) throw Error("modulus must be at least 2, got " + std::to_string(p));
  Scalar s;
  s.kind_ = Kind::Mod;
  s.q_ = 0;
  s.p_ = p;
  s.r_ = norm_residue(v, p);
  return s;
}

const Rational& Scalar::rat() const {
  if (kind_ == Kind::Mod) throw TypeError("scalar is not rational: " + str());
  return q_;
}

long long Scalar::residue() const {
  if (kind_ != Kind::Mod) throw TypeError("scalar is not a modular residue: " + str());
  return r_;
}

long long Scalar::modulus() const {
  if (kind_ != Kind::Mod) throw TypeError("scalar is not a modular residue: " + str());
  return p_;
}

bool Scalar::is_zero() const {
  if (kind_ == Kind::Mod) return r_ == 0;
  return q_ == 0;
}

bool Scalar::is_one() const {
  if (kind_ == Kind::Mod) return r_ == 1;
  return q_ == 1;
}

void Scalar::unify(Scalar& a, Scalar& b) {
  if (a.kind_ == b.kind_) {
    if (a.kind_ == Kind::Mod && a.p_ != b.p_) {
      throw TypeError("mixed scalar kinds: cannot combine " + a.str() + " with " + b.str());
    }
    return;
  }
  if (a.kind_ == Kind::Int) {
    if (b.kind_ == Kind::Rat) {
      a.kind_ = Kind::Rat;
    } else {
      long long v = static_cast<long long>(boost::multiprecision::numerator(a.q_) %
                                           boost::multiprecision::cpp_int(b.p_));
      a = Scalar::mod(v, b.p_);
    }
    return;
  }
  if (b.kind_ == Kind::Int) {
    unify(b, a);
    return;
  }
  throw TypeError("mixed scalar kinds: cannot combine " + a.str() + " with " + b.str());
}

Scalar Scalar::operator-() const {
  if (kind_ == Kind::Mod) return Scalar::mod(p_ - r_, p_);
  Scalar s = *this;
  s.q_ = -s.q_;
  return s;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw Error("division by zero");
  if (kind_ == Kind::Mod) return Scalar::mod(invmod(r_, p_), p_);
  Scalar s;
  s.kind_ = Kind::Rat;
  s.q_ = Rational(1) / q_;
  return s;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  Scalar b = o;
  unify(*this, b);
  if (kind_ == Kind::Mod) {
    r_ = norm_residue(r_ + b.r_, p_);
  } else {
    q_ += b.q_;
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  Scalar b = o;
  unify(*this, b);
  if (kind_ == Kind::Mod) {
    r_ = norm_residue(r_ - b.r_ + p_, p_);
  } else {
    q_ -= b.q_;
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  Scalar b = o;
  unify(*this, b);
  if (kind_ == Kind::Mod) {
    r_ = mulmod(r_, b.r_, p_);
  } else {
    q_ *= b.q_;
  }
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  Scalar b = o;
  unify(*this, b);
  if (b.is_zero()) throw Error("division by zero");
  if (kind_ == Kind::Mod) {
    r_ = mulmod(r_, invmod(b.r_, p_), p_);
  } else {
    kind_ = Kind::Rat;  // integer literals divide into rationals
    q_ /= b.q_;
  }
  return *this;
}

bool Scalar::operator==(const Scalar& o) const {
  Scalar a = *this, b = o;
  unify(a, b);
  if (a.kind_ == Kind::Mod) return a.r_ == b.r_;
  return a.q_ == b.q_;
}

std::string Scalar::str() const {
  std::ostringstream os;
  if (kind_ == Kind::Mod) {
    os << r_ << " mod " << p_;
  } else {
    os << q_;
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

Field Field::GF(long long p) {
  if (!is_prime(p)) throw Error("GF modulus must be prime, got " + std::to_string(p));
  return Field{Kind::Fp, p};
}

Scalar Field::promote(const Scalar& s) const {
  switch (s.kind()) {
    case Scalar::Kind::Int: {
      if (kind == Kind::Q) return Scalar::rational(s.rat());
      long long v = static_cast<long long>(boost::multiprecision::numerator(s.rat()) %
                                           boost::multiprecision::cpp_int(p));
      return Scalar::mod(v, p);
    }
    case Scalar::Kind::Rat:
      if (kind != Kind::Q) {
        throw TypeError("mixed scalar kinds: rational " + s.str() + " in " + str());
      }
      return s;
    case Scalar::Kind::Mod:
      if (kind != Kind::Fp || s.modulus() != p) {
        throw TypeError("mixed scalar kinds: " + s.str() + " in " + str());
      }
      return s;
  }
  throw InternalError("unreachable scalar kind");
}

std::string Field::str() const {
  if (kind == Kind::Q) return "QQ";
  return "GF(" + std::to_string(p) + ")";
}

namespace {

std::string strip(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool parse_ll(const std::string& s, long long& out) {
  if (s.empty()) return false;
  size_t i = 0;
  if (s[0] == '-' || s[0] == '+') i = 1;
  if (i == s.size()) return false;
  for (size_t j = i; j < s.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) return false;
  }
  try {
    out = std::stoll(s);
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

}  // namespace

Scalar parse_scalar(const std::string& text, const Field& field) {
  const std::string t = strip(text);
  if (t.empty()) throw Error("empty scalar literal");

  const size_t mod_pos = t.find(" mod ");
  if (mod_pos != std::string::npos) {
    long long v = 0, p = 0;
    if (!parse_ll(strip(t.substr(0, mod_pos)), v) || !parse_ll(strip(t.substr(mod_pos + 5)), p)) {
      throw Error("invalid scalar literal '" + text + "'");
    }
    if (field.kind != Field::Kind::Fp || p != field.p) {
      throw Error("scalar '" + text + "' does not belong to " + field.str());
    }
    return Scalar::mod(v, p);
  }

  const size_t slash = t.find('/');
  if (slash != std::string::npos) {
    long long num = 0, den = 0;
    if (!parse_ll(strip(t.substr(0, slash)), num) || !parse_ll(strip(t.substr(slash + 1)), den)) {
      throw Error("invalid scalar literal '" + text + "'");
    }
    if (field.kind != Field::Kind::Q) {
      throw Error("scalar '" + text + "' does not belong to " + field.str());
    }
    if (den == 0) throw Error("zero denominator in scalar literal '" + text + "'");
    return Scalar::rational(Rational(num) / Rational(den));
  }

  long long v = 0;
  if (!parse_ll(t, v)) throw Error("invalid scalar literal '" + text + "'");
  return field.from_long(v);
}

}  // namespace coringlab
