#include "qtensor/rational.hpp"

#include <stdexcept>

namespace qten {

std::string to_string(const Rational& q) {
  return q.get_str();
}

Rational parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  // mpq_set_str tolerates some junk (e.g. trailing text); validate shape first.
  std::size_t pos = 0;
  auto digits = [&](std::size_t start) {
    std::size_t i = start;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
    return i;
  };
  if (s[pos] == '+' || s[pos] == '-') ++pos;
  std::size_t num_end = digits(pos);
  if (num_end == pos) throw std::invalid_argument("bad rational literal: " + s);
  pos = num_end;
  if (pos != s.size()) {
    if (s[pos] != '/') throw std::invalid_argument("bad rational literal: " + s);
    ++pos;
    std::size_t den_end = digits(pos);
    if (den_end == pos || den_end != s.size())
      throw std::invalid_argument("bad rational literal: " + s);
  }
  Rational q;
  if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
    throw std::invalid_argument("bad rational literal: " + s);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

std::optional<Rational> rational_root(const Rational& q, unsigned k) {
  if (k == 0) return std::nullopt;
  if (k == 1) return q;
  if (sgn(q) == 0) return Rational(0);
  if (sgn(q) < 0 && k % 2 == 0) return std::nullopt;
  mpz_class num = q.get_num();
  mpz_class den = q.get_den();
  bool negate = false;
  if (sgn(num) < 0) {
    negate = true;
    num = -num;
  }
  mpz_class rn, rd;
  bool exact_n = mpz_root(rn.get_mpz_t(), num.get_mpz_t(), k) != 0;
  bool exact_d = mpz_root(rd.get_mpz_t(), den.get_mpz_t(), k) != 0;
  if (!exact_n || !exact_d) return std::nullopt;
  Rational r(negate ? mpz_class(-rn) : rn, rd);
  r.canonicalize();
  return r;
}

}  // namespace qten
