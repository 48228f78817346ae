#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace qten {

using Rational = mpq_class;

// Canonical "p" or "p/q" string, denominator positive and coprime.
std::string to_string(const Rational& q);

// Accepts optional sign, "p" or "p/q", base 10. Throws std::invalid_argument.
Rational parse_rational(const std::string& s);

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Exact: every finite double is a dyadic rational.
inline Rational rational_from_double(double x) { return Rational(x); }

inline int sign_of(const Rational& q) { return sgn(q); }

// Exact k-th root in Q when one exists (negative allowed for odd k).
std::optional<Rational> rational_root(const Rational& q, unsigned k);

}  // namespace qten
