#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace divstab {

// Exact rational scalar. GMP keeps the invariants we need: reduced
// fraction, positive denominator, arbitrary-precision parts.
using Rational = mpq_class;

// Exact conversion: every finite double is a dyadic rational.
inline Rational rational_from_double(double v) {
  Rational r;
  mpq_set_d(r.get_mpq_t(), v);
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

// mpq_class(num, den) does not reduce; this does.
inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Parses "n" or "n/d" with optional leading '-'. Throws on malformed input.
inline Rational rational_parse(const std::string& s) {
  Rational r;
  if (r.set_str(s, 10) != 0) {
    throw std::invalid_argument("bad rational literal: '" + s + "'");
  }
  r.canonicalize();
  if (r.get_den() <= 0) {
    throw std::invalid_argument("nonpositive denominator in: '" + s + "'");
  }
  return r;
}

inline int sign_of(const Rational& r) { return sgn(r); }

}  // namespace divstab
