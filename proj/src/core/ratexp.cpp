#include "ratexp.hpp"

#include <algorithm>
#include <functional>

namespace dlab {

RatExpFunction RatExpFunction::term(const Rat& rate, QPoly num, QPoly den) {
  if (den.is_zero()) throw Error("RatExpFunction: zero denominator");
  RatExpFunction f;
  f.push({rate, std::move(num), std::move(den)});
  return f;
}

void RatExpFunction::push(Term t) {
  if (t.num.is_zero()) return;
  QPoly g = qpoly_gcd(t.num, t.den);
  if (g.degree() > 0) {
    t.num = qpoly_div_exact(t.num, g);
    t.den = qpoly_div_exact(t.den, g);
  }
  for (auto& u : terms_) {
    if (u.rate == t.rate && u.den == t.den) {
      u.num = u.num + t.num;
      if (u.num.is_zero()) {
        std::swap(u, terms_.back());
        terms_.pop_back();
      }
      return;
    }
  }
  terms_.push_back(std::move(t));
}

RatExpFunction RatExpFunction::derivative() const {
  RatExpFunction out;
  for (const auto& t : terms_) {
    // (e^{cx} n/d)' = e^{cx} (c n d + n' d - n d') / d^2
    QPoly num = t.num.scaled(t.rate) * t.den + t.num.derivative() * t.den -
                t.num * t.den.derivative();
    out.push({t.rate, std::move(num), t.den * t.den});
  }
  return out;
}

RatExpFunction RatExpFunction::operator+(const RatExpFunction& o) const {
  RatExpFunction out(*this);
  for (const auto& t : o.terms_) out.push(t);
  return out;
}

RatExpFunction RatExpFunction::scaled(const Rat& s) const {
  RatExpFunction out;
  if (s == 0) return out;
  for (const auto& t : terms_) out.push({t.rate, t.num.scaled(s), t.den});
  return out;
}

std::vector<std::pair<Rat, Rat>> RatExpFunction::eval_by_rate(const Rat& x) const {
  std::vector<std::pair<Rat, Rat>> out;
  for (const auto& t : terms_) {
    Rat dv = t.den.eval(x);
    if (dv == 0) throw Error("RatExpFunction: pole hit at evaluation point");
    Rat v = t.num.eval(x) / dv;
    bool found = false;
    for (auto& [r, acc] : out)
      if (r == t.rate) {
        acc += v;
        found = true;
      }
    if (!found) out.emplace_back(t.rate, v);
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const auto& p) { return p.second == 0; }),
            out.end());
  return out;
}

Rat RatExpFunction::eval_rational_part(const Rat& x) const {
  auto vals = eval_by_rate(x);
  if (vals.empty()) return Rat(0);
  if (vals.size() > 1) throw Error("RatExpFunction: mixed exponential rates at evaluation");
  return vals[0].second;
}

// ---- jets -------------------------------------------------------------------

Jet Jet::variable(const JetLayout* l, size_t var, const Rat& x0) {
  Jet j(l);
  j.c_[0] = x0;
  if (l->order[var] >= 1) j.c_[l->stride[var]] = Rat(1);
  return j;
}

const Rat& Jet::at(const std::vector<int>& degs) const {
  int idx = 0;
  for (size_t i = 0; i < degs.size(); ++i) idx += degs[i] * layout_->stride[i];
  return c_[idx];
}

Rat& Jet::at(const std::vector<int>& degs) {
  int idx = 0;
  for (size_t i = 0; i < degs.size(); ++i) idx += degs[i] * layout_->stride[i];
  return c_[idx];
}

Jet operator+(const Jet& a, const Jet& b) {
  Jet r(a.layout_);
  for (int i = 0; i < a.layout_->size; ++i) r.c_[i] = a.c_[i] + b.c_[i];
  return r;
}

Jet operator-(const Jet& a, const Jet& b) {
  Jet r(a.layout_);
  for (int i = 0; i < a.layout_->size; ++i) r.c_[i] = a.c_[i] - b.c_[i];
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  const JetLayout* l = a.layout_;
  Jet r(l);
  size_t nv = l->order.size();
  std::vector<int> da(nv), db(nv);
  // iterate over all index pairs whose component sums stay in range
  std::function<void(size_t, int, int)> rec = [&](size_t v, int ia, int ib) {
    if (v == nv) {
      if (a.c_[ia] == 0 || b.c_[ib] == 0) return;
      int idx = 0;
      for (size_t i = 0; i < nv; ++i) idx += (da[i] + db[i]) * l->stride[i];
      r.c_[idx] += a.c_[ia] * b.c_[ib];
      return;
    }
    for (int x = 0; x <= l->order[v]; ++x) {
      for (int y = 0; x + y <= l->order[v]; ++y) {
        da[v] = x;
        db[v] = y;
        rec(v + 1, ia + x * l->stride[v], ib + y * l->stride[v]);
      }
    }
  };
  rec(0, 0, 0);
  return r;
}

Jet Jet::scaled(const Rat& s) const {
  Jet r(layout_);
  for (int i = 0; i < layout_->size; ++i) r.c_[i] = c_[i] * s;
  return r;
}

Jet Jet::recip() const {
  if (c_[0] == 0) throw Error("Jet::recip: zero constant part");
  // Newton-free: 1/(c0 (1+u)) = (1/c0) sum (-u)^k; u is nilpotent
  Rat ic0 = Rat(1) / c_[0];
  Jet u = scaled(ic0);
  u.c_[0] = Rat(0);
  Jet r = Jet::constant(layout_, Rat(1));
  Jet pw = Jet::constant(layout_, Rat(1));
  int kmax = 0;
  for (size_t v = 0; v < layout_->order.size(); ++v) kmax += layout_->order[v];
  for (int k = 1; k <= kmax; ++k) {
    pw = pw * u;
    bool zero = true;
    for (int i = 0; i < layout_->size; ++i)
      if (pw.c_[i] != 0) {
        zero = false;
        break;
      }
    if (zero) break;
    r = (k % 2) ? r - pw : r + pw;
  }
  return r.scaled(ic0);
}

Rat Jet::point_derivative(size_t var, int k) const {
  std::vector<int> degs(layout_->order.size(), 0);
  degs[var] = k;
  return at(degs) * Rat(factorial(k));
}

Jet qpoly_on_jet(const QPoly& p, const Jet& x) {
  Jet r = Jet::constant(x.layout(), Rat(0));
  for (size_t i = p.coeffs().size(); i-- > 0;) {
    r = r * x;
    Rat c = p.coeff(i);
    if (c != 0) {
      Jet cc = Jet::constant(x.layout(), c);
      r = r + cc;
    }
  }
  return r;
}

Jet exp_shift_jet(const JetLayout* l, size_t var, const Rat& rate) {
  Jet r = Jet::constant(l, Rat(1));
  Rat f(1);
  std::vector<int> degs(l->order.size(), 0);
  for (int k = 1; k <= l->order[var]; ++k) {
    f *= rate / k;
    degs[var] = k;
    r.at(degs) = f;
  }
  return r;
}

}  // namespace dlab
