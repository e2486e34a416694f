#pragma once

#include <vector>

#include "qpoly.hpp"
#include "rat.hpp"

namespace dlab {

// Finite sums of e^{c*x} * num(x)/den(x) with rational c and rational-coefficient
// polynomials; closed under d/dx and linear combination, exact at rational points.
class RatExpFunction {
 public:
  struct Term {
    Rat rate;   // c in e^{c x}
    QPoly num;
    QPoly den;
  };

  RatExpFunction() = default;
  static RatExpFunction term(const Rat& rate, QPoly num, QPoly den);

  const std::vector<Term>& terms() const { return terms_; }
  bool structurally_zero() const { return terms_.empty(); }

  RatExpFunction derivative() const;
  RatExpFunction operator+(const RatExpFunction& o) const;
  RatExpFunction scaled(const Rat& s) const;

  // value decomposed as sum over distinct rates: pairs (rate, rational value)
  std::vector<std::pair<Rat, Rat>> eval_by_rate(const Rat& x) const;
  // plain rational value, requires a single common rate (or zero function)
  Rat eval_rational_part(const Rat& x) const;

 private:
  void push(Term t);
  std::vector<Term> terms_;
};

// ---- dense truncated jets (Taylor coefficients) in several variables --------

struct JetLayout {
  std::vector<int> order;  // max derivative order per variable, inclusive
  std::vector<int> stride;
  int size = 1;
  explicit JetLayout(std::vector<int> ord) : order(std::move(ord)) {
    stride.resize(order.size());
    for (size_t i = 0; i < order.size(); ++i) {
      stride[i] = size;
      size *= order[i] + 1;
    }
  }
};

class Jet {
 public:
  Jet(const JetLayout* layout) : layout_(layout), c_(layout->size, Rat(0)) {}
  static Jet constant(const JetLayout* l, const Rat& v) {
    Jet j(l);
    j.c_[0] = v;
    return j;
  }
  // x0 + delta_i
  static Jet variable(const JetLayout* l, size_t var, const Rat& x0);

  const Rat& at(const std::vector<int>& degs) const;
  Rat& at(const std::vector<int>& degs);
  const Rat& scalar() const { return c_[0]; }

  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a, const Jet& b);
  friend Jet operator*(const Jet& a, const Jet& b);
  Jet scaled(const Rat& s) const;
  Jet recip() const;  // requires nonzero scalar part

  // d^k/d delta_var^k extracted as point derivative (k! * coefficient)
  Rat point_derivative(size_t var, int k) const;

  const JetLayout* layout() const { return layout_; }

 private:
  const JetLayout* layout_;
  std::vector<Rat> c_;
};

// evaluate a polynomial on a jet argument
Jet qpoly_on_jet(const QPoly& p, const Jet& x);

// jet of e^{rate * delta_var} (the e^{rate*x0} factor is NOT included)
Jet exp_shift_jet(const JetLayout* l, size_t var, const Rat& rate);

}  // namespace dlab
