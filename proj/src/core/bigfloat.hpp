#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

#include "rat.hpp"

namespace dlab {

// Arbitrary-precision float on MPFR, value-semantic. Precision travels with
// the value; binary ops use the wider operand's precision.
class BigFloat {
 public:
  static constexpr mpfr_prec_t kDefaultPrec = 256;

  struct PrecTag {};
  BigFloat() { mpfr_init2(x_, kDefaultPrec); mpfr_set_zero(x_, 1); }
  BigFloat(PrecTag, mpfr_prec_t prec) { mpfr_init2(x_, prec); mpfr_set_zero(x_, 1); }
  static BigFloat with_prec(mpfr_prec_t prec) { return BigFloat(PrecTag{}, prec); }
  BigFloat(long v, mpfr_prec_t prec = kDefaultPrec) {
    mpfr_init2(x_, prec);
    mpfr_set_si(x_, v, MPFR_RNDN);
  }
  BigFloat(const Rat& q, mpfr_prec_t prec = kDefaultPrec) {
    mpfr_init2(x_, prec);
    mpfr_set_q(x_, q.get_mpq_t(), MPFR_RNDN);
  }
  BigFloat(const BigFloat& o) { mpfr_init2(x_, mpfr_get_prec(o.x_)); mpfr_set(x_, o.x_, MPFR_RNDN); }
  BigFloat(BigFloat&& o) noexcept { mpfr_init2(x_, 2); mpfr_swap(x_, o.x_); }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) {
      mpfr_set_prec(x_, mpfr_get_prec(o.x_));
      mpfr_set(x_, o.x_, MPFR_RNDN);
    }
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept {
    if (this != &o) mpfr_swap(x_, o.x_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(x_); }

  mpfr_prec_t prec() const { return mpfr_get_prec(x_); }
  bool is_zero() const { return mpfr_zero_p(x_); }
  int sign() const { return mpfr_sgn(x_); }
  double to_double() const { return mpfr_get_d(x_, MPFR_RNDN); }

  friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
    BigFloat r(PrecTag{}, wider(a, b)); mpfr_add(r.x_, a.x_, b.x_, MPFR_RNDN); return r;
  }
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
    BigFloat r(PrecTag{}, wider(a, b)); mpfr_sub(r.x_, a.x_, b.x_, MPFR_RNDN); return r;
  }
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
    BigFloat r(PrecTag{}, wider(a, b)); mpfr_mul(r.x_, a.x_, b.x_, MPFR_RNDN); return r;
  }
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
    BigFloat r(PrecTag{}, wider(a, b)); mpfr_div(r.x_, a.x_, b.x_, MPFR_RNDN); return r;
  }
  BigFloat operator-() const { BigFloat r(PrecTag{}, prec()); mpfr_neg(r.x_, x_, MPFR_RNDN); return r; }
  BigFloat& operator+=(const BigFloat& o) { mpfr_add(x_, x_, o.x_, MPFR_RNDN); return *this; }
  BigFloat& operator-=(const BigFloat& o) { mpfr_sub(x_, x_, o.x_, MPFR_RNDN); return *this; }
  BigFloat& operator*=(const BigFloat& o) { mpfr_mul(x_, x_, o.x_, MPFR_RNDN); return *this; }
  BigFloat& operator/=(const BigFloat& o) { mpfr_div(x_, x_, o.x_, MPFR_RNDN); return *this; }

  friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.x_, b.x_) == 0; }
  friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.x_, b.x_) < 0; }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.x_, b.x_) > 0; }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.x_, b.x_) <= 0; }
  friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.x_, b.x_) >= 0; }

  friend BigFloat abs(const BigFloat& a) { BigFloat r(PrecTag{}, a.prec()); mpfr_abs(r.x_, a.x_, MPFR_RNDN); return r; }
  friend BigFloat sqrt(const BigFloat& a) { BigFloat r(PrecTag{}, a.prec()); mpfr_sqrt(r.x_, a.x_, MPFR_RNDN); return r; }
  friend BigFloat log(const BigFloat& a) { BigFloat r(PrecTag{}, a.prec()); mpfr_log(r.x_, a.x_, MPFR_RNDN); return r; }
  friend BigFloat exp(const BigFloat& a) { BigFloat r(PrecTag{}, a.prec()); mpfr_exp(r.x_, a.x_, MPFR_RNDN); return r; }
  friend BigFloat pow_int(const BigFloat& a, long e) {
    BigFloat r(PrecTag{}, a.prec()); mpfr_pow_si(r.x_, a.x_, e, MPFR_RNDN); return r;
  }

  // Hex-float text, bit-exact round trip.
  std::string to_hex() const;
  static BigFloat from_hex(const std::string& s, mpfr_prec_t prec = kDefaultPrec);
  std::string to_decimal(int digits = 40) const;

  mpfr_ptr raw() { return x_; }
  mpfr_srcptr raw() const { return x_; }

 private:
  static mpfr_prec_t wider(const BigFloat& a, const BigFloat& b) {
    return a.prec() > b.prec() ? a.prec() : b.prec();
  }
  mpfr_t x_;
};

}  // namespace dlab
