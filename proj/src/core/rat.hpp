#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dlab {

using Rat = mpq_class;
using Int = mpz_class;

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline Rat rat(long num, long den = 1) {
  Rat q(num, den);
  q.canonicalize();
  return q;
}

// Accepts "p", "p/q" and plain decimal integers, base 10.
inline Rat rat_parse(const std::string& s) {
  Rat q;
  if (q.set_str(s, 10) != 0) throw Error("bad rational literal: " + s);
  q.canonicalize();
  return q;
}

inline std::string rat_str(const Rat& q) { return q.get_str(); }

inline Int factorial(unsigned n) {
  Int f = 1;
  for (unsigned k = 2; k <= n; ++k) f *= k;
  return f;
}

inline Int binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  Int b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

inline Int double_factorial_odd(unsigned n) {  // (n)!! for odd n, 1 for n<=0
  Int f = 1;
  for (long k = n; k >= 1; k -= 2) f *= k;
  return f;
}

inline Rat rat_pow(const Rat& q, long e) {
  if (e == 0) return 1;
  Rat r;
  if (e > 0) {
    mpz_pow_ui(r.get_num_mpz_t(), q.get_num_mpz_t(), e);
    mpz_pow_ui(r.get_den_mpz_t(), q.get_den_mpz_t(), e);
  } else {
    if (q == 0) throw Error("rat_pow: zero to negative power");
    mpz_pow_ui(r.get_num_mpz_t(), q.get_den_mpz_t(), -e);
    mpz_pow_ui(r.get_den_mpz_t(), q.get_num_mpz_t(), -e);
  }
  r.canonicalize();
  return r;
}

}  // namespace dlab
