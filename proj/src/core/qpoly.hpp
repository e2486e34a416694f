#pragma once

#include <vector>

#include "rat.hpp"

namespace dlab {

// Dense univariate polynomial over Q, lowest degree first.
class QPoly {
 public:
  QPoly() = default;
  explicit QPoly(std::vector<Rat> c) : c_(std::move(c)) { trim(); }
  static QPoly constant(const Rat& v) { return QPoly(std::vector<Rat>{v}); }
  static QPoly monomial(const Rat& v, size_t deg) {
    std::vector<Rat> c(deg + 1, Rat(0));
    c[deg] = v;
    return QPoly(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const Rat& coeff(size_t k) const {
    static const Rat z(0);
    return k < c_.size() ? c_[k] : z;
  }
  const std::vector<Rat>& coeffs() const { return c_; }

  friend QPoly operator+(const QPoly& a, const QPoly& b);
  friend QPoly operator-(const QPoly& a, const QPoly& b);
  friend QPoly operator*(const QPoly& a, const QPoly& b);
  QPoly operator-() const;
  QPoly scaled(const Rat& s) const;

  QPoly derivative() const;
  Rat eval(const Rat& x) const;

  // Taylor coefficients at x0 up to order n inclusive.
  std::vector<Rat> taylor(const Rat& x0, int n) const;

  friend bool operator==(const QPoly& a, const QPoly& b) { return a.c_ == b.c_; }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rat> c_;
};

// Exact division helpers across the codebase.
QPoly qpoly_gcd(QPoly a, QPoly b);
// Divides assuming exact divisibility, throws otherwise.
QPoly qpoly_div_exact(const QPoly& a, const QPoly& b);

}  // namespace dlab
