#include "bigfloat.hpp"

#include <cstdio>
#include <cstdlib>

namespace dlab {

std::string BigFloat::to_hex() const {
  char* s = nullptr;
  mpfr_asprintf(&s, "%Ra", x_);
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

BigFloat BigFloat::from_hex(const std::string& s, mpfr_prec_t prec) {
  BigFloat r(PrecTag{}, prec);
  if (mpfr_set_str(r.x_, s.c_str(), 0, MPFR_RNDN) != 0)
    throw Error("BigFloat: bad hex-float literal: " + s);
  return r;
}

std::string BigFloat::to_decimal(int digits) const {
  char* s = nullptr;
  mpfr_asprintf(&s, "%.*Rg", digits, x_);
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

}  // namespace dlab
