#include "plg/field.hpp"

#include <cctype>

namespace plg {

namespace {

bool is_prime_u64(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::int64_t mod_reduce(std::int64_t v, std::int64_t p) {
  std::int64_t r = v % p;
  return r < 0 ? r + p : r;
}

// Extended Euclid; returns x with a*x == 1 (mod p).
std::int64_t mod_inverse(std::int64_t a, std::int64_t p) {
  std::int64_t old_r = a, r = p, old_s = 1, s = 0;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  return mod_reduce(old_s, p);
}

}  // namespace

FieldSpec FieldSpec::prime(std::int64_t p) {
  if (p > (std::int64_t{1} << 31) - 1)
    fail(Errc::invalid_input, "prime modulus too large for machine-word residues");
  if (!is_prime_u64(p)) fail(Errc::invalid_input, "modulus " + std::to_string(p) + " is not prime");
  return FieldSpec{Kind::prime, p};
}

std::string FieldSpec::describe() const {
  return is_prime() ? "GF(" + std::to_string(p) + ")" : "Q";
}

Scalar Scalar::of(const FieldSpec& f, std::int64_t value) {
  Scalar s(f);
  if (f.is_prime()) {
    s.res_ = mod_reduce(value, f.p);
  } else {
    s.q_ = static_cast<long>(value);
  }
  return s;
}

Scalar Scalar::rational(const mpq_class& q) {
  Scalar s(FieldSpec::rationals());
  s.q_ = q;
  s.q_.canonicalize();
  return s;
}

Scalar Scalar::rational(std::int64_t num, std::int64_t den) {
  if (den == 0) fail(Errc::invalid_input, "rational with zero denominator");
  Scalar s(FieldSpec::rationals());
  s.q_ = mpq_class(static_cast<long>(num), static_cast<long>(den));
  s.q_.canonicalize();
  return s;
}

bool Scalar::is_zero() const { return field_.is_prime() ? res_ == 0 : q_ == 0; }
bool Scalar::is_one() const { return field_.is_prime() ? res_ == 1 % field_.p : q_ == 1; }

void Scalar::check_same(const Scalar& o) const {
  if (field_ != o.field_)
    fail(Errc::precondition, "mixed-field arithmetic: " + field_.describe() + " vs " + o.field_.describe());
}

Scalar Scalar::operator+(const Scalar& o) const {
  check_same(o);
  Scalar s(field_);
  if (field_.is_prime())
    s.res_ = mod_reduce(res_ + o.res_, field_.p);
  else
    s.q_ = q_ + o.q_;
  return s;
}

Scalar Scalar::operator-(const Scalar& o) const {
  check_same(o);
  Scalar s(field_);
  if (field_.is_prime())
    s.res_ = mod_reduce(res_ - o.res_, field_.p);
  else
    s.q_ = q_ - o.q_;
  return s;
}

Scalar Scalar::operator*(const Scalar& o) const {
  check_same(o);
  Scalar s(field_);
  if (field_.is_prime()) {
    // p < 2^31, so the product of two residues fits in a uint64.
    std::uint64_t prod = static_cast<std::uint64_t>(res_) * static_cast<std::uint64_t>(o.res_);
    s.res_ = static_cast<std::int64_t>(prod % static_cast<std::uint64_t>(field_.p));
  } else {
    s.q_ = q_ * o.q_;
  }
  return s;
}

Scalar Scalar::inverse() const {
  if (is_zero()) fail(Errc::precondition, "inverse of zero");
  Scalar s(field_);
  if (field_.is_prime())
    s.res_ = mod_inverse(res_, field_.p);
  else
    s.q_ = 1 / q_;
  return s;
}

Scalar Scalar::operator/(const Scalar& o) const {
  check_same(o);
  return *this * o.inverse();
}

Scalar Scalar::operator-() const {
  Scalar s(field_);
  if (field_.is_prime())
    s.res_ = mod_reduce(-res_, field_.p);
  else
    s.q_ = -q_;
  return s;
}

bool Scalar::operator==(const Scalar& o) const {
  if (field_ != o.field_) return false;
  return field_.is_prime() ? res_ == o.res_ : q_ == o.q_;
}

int Scalar::sign() const {
  if (field_.is_prime()) return res_ == 0 ? 0 : 1;
  return sgn(q_);
}

const mpq_class& Scalar::rat() const {
  if (field_.is_prime()) fail(Errc::precondition, "rat() on a prime-field scalar");
  return q_;
}

std::int64_t Scalar::residue() const {
  if (!field_.is_prime()) fail(Errc::precondition, "residue() on a rational scalar");
  return res_;
}

std::string Scalar::str() const {
  if (field_.is_prime()) return std::to_string(res_);
  return q_.get_str();
}

Scalar parse_scalar(const FieldSpec& f, const std::string& text) {
  if (text.empty()) fail(Errc::invalid_input, "empty scalar token");
  for (char c : text)
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '-' && c != '+' && c != '/')
      fail(Errc::invalid_input, "bad scalar token '" + text + "'");
  if (f.is_prime()) {
    if (text.find('/') != std::string::npos)
      fail(Errc::invalid_input, "fraction not allowed over " + f.describe() + ": '" + text + "'");
    try {
      return Scalar::of(f, std::stoll(text));
    } catch (const std::exception&) {
      fail(Errc::invalid_input, "bad integer token '" + text + "'");
    }
  }
  mpq_class q;
  if (q.set_str(text, 10) != 0)
    fail(Errc::invalid_input, "bad rational token '" + text + "'");
  if (q.get_den() == 0) fail(Errc::invalid_input, "zero denominator in '" + text + "'");
  return Scalar::rational(q);
}

}  // namespace plg
