#include "qpoly.hpp"

#include <algorithm>

namespace dlab {

QPoly operator+(const QPoly& a, const QPoly& b) {
  std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()), Rat(0));
  for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
  return QPoly(std::move(c));
}

QPoly operator-(const QPoly& a, const QPoly& b) {
  std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()), Rat(0));
  for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
  return QPoly(std::move(c));
}

QPoly operator*(const QPoly& a, const QPoly& b) {
  if (a.is_zero() || b.is_zero()) return QPoly();
  std::vector<Rat> c(a.c_.size() + b.c_.size() - 1, Rat(0));
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return QPoly(std::move(c));
}

QPoly QPoly::operator-() const {
  std::vector<Rat> c(c_);
  for (auto& v : c) v = -v;
  return QPoly(std::move(c));
}

QPoly QPoly::scaled(const Rat& s) const {
  if (s == 0) return QPoly();
  std::vector<Rat> c(c_);
  for (auto& v : c) v *= s;
  return QPoly(std::move(c));
}

QPoly QPoly::derivative() const {
  if (c_.size() <= 1) return QPoly();
  std::vector<Rat> c(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) c[i - 1] = c_[i] * Rat(static_cast<long>(i));
  return QPoly(std::move(c));
}

Rat QPoly::eval(const Rat& x) const {
  Rat v(0);
  for (size_t i = c_.size(); i-- > 0;) v = v * x + c_[i];
  return v;
}

std::vector<Rat> QPoly::taylor(const Rat& x0, int n) const {
  // repeated synthetic division by (x - x0)
  std::vector<Rat> out(n + 1, Rat(0));
  std::vector<Rat> cur(c_);
  for (int k = 0; k <= n; ++k) {
    if (cur.empty()) break;
    std::vector<Rat> q(cur.size() > 1 ? cur.size() - 1 : 0, Rat(0));
    Rat carry(0), rem(0);
    for (size_t i = cur.size(); i-- > 0;) {
      Rat v = cur[i] + carry * x0;
      if (i > 0) {
        q[i - 1] = v;
        carry = v;
      } else {
        rem = v;
      }
    }
    out[k] = rem;
    cur = std::move(q);
  }
  return out;
}

QPoly qpoly_gcd(QPoly a, QPoly b) {
  auto monic = [](QPoly p) {
    if (p.is_zero()) return p;
    return p.scaled(Rat(1) / p.coeff(p.degree()));
  };
  a = monic(a);
  b = monic(b);
  while (!b.is_zero()) {
    // remainder of a by b
    QPoly r = a;
    while (!r.is_zero() && r.degree() >= b.degree()) {
      Rat f = r.coeff(r.degree()) / b.coeff(b.degree());
      r = r - (b * QPoly::monomial(f, r.degree() - b.degree()));
    }
    a = b;
    b = monic(r);
  }
  return monic(a);
}

QPoly qpoly_div_exact(const QPoly& a, const QPoly& b) {
  if (b.is_zero()) throw Error("QPoly division by zero");
  QPoly r = a;
  std::vector<Rat> q(a.is_zero() ? 0 : std::max(0, a.degree() - b.degree() + 1), Rat(0));
  while (!r.is_zero() && r.degree() >= b.degree()) {
    Rat f = r.coeff(r.degree()) / b.coeff(b.degree());
    size_t d = r.degree() - b.degree();
    q[d] = f;
    r = r - (b * QPoly::monomial(f, d));
  }
  if (!r.is_zero()) throw Error("QPoly division not exact");
  return QPoly(std::move(q));
}

}  // namespace dlab
