#ifndef PLG_FIELD_HPP
#define PLG_FIELD_HPP

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "plg/error.hpp"

namespace plg {

// A coefficient domain: either GF(p) for a prime p, or the rationals.
struct FieldSpec {
  enum class Kind { prime, rational };

  Kind kind = Kind::rational;
  std::int64_t p = 0;  // modulus when kind == prime, otherwise 0

  static FieldSpec prime(std::int64_t p);
  static FieldSpec rationals() { return FieldSpec{Kind::rational, 0}; }

  bool is_prime() const { return kind == Kind::prime; }
  bool operator==(const FieldSpec& o) const { return kind == o.kind && p == o.p; }
  bool operator!=(const FieldSpec& o) const { return !(*this == o); }
  std::string describe() const;
};

// Exact field element.  Prime-field values are machine-word residues in
// [0, p); rationals are arbitrary-precision, kept canonical (reduced,
// positive denominator) by GMP.
class Scalar {
 public:
  Scalar() : field_(FieldSpec::rationals()) {}  // rational zero

  static Scalar zero(const FieldSpec& f) { return of(f, 0); }
  static Scalar one(const FieldSpec& f) { return of(f, 1); }
  static Scalar of(const FieldSpec& f, std::int64_t value);
  static Scalar rational(const mpq_class& q);
  static Scalar rational(std::int64_t num, std::int64_t den);

  const FieldSpec& field() const { return field_; }
  bool is_zero() const;
  bool is_one() const;

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;  // fails on zero divisor
  Scalar operator-() const;
  Scalar inverse() const;

  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  // Sign of a rational value (-1, 0, +1).  For prime fields: 0 iff zero,
  // else +1 (there is no order to report).
  int sign() const;

  const mpq_class& rat() const;   // rational scalars only
  std::int64_t residue() const;   // prime-field scalars only

  std::string str() const;

 private:
  Scalar(const FieldSpec& f) : field_(f) {}
  void check_same(const Scalar& o) const;

  FieldSpec field_;
  std::int64_t res_ = 0;  // prime-field residue
  mpq_class q_ = 0;       // rational value
};

// Parses "n" or "n/d" (rationals) or an integer reduced mod p (prime field).
Scalar parse_scalar(const FieldSpec& f, const std::string& text);

}  // namespace plg

#endif
