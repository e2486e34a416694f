#pragma once

#include <map>
#include <string>
#include <utility>

#include "rat.hpp"

namespace dlab {

// Polynomials in the formal parameters beta, gamma with rational coefficients.
class ParamPoly {
 public:
  using Key = std::pair<unsigned, unsigned>;  // (beta exponent, gamma exponent)

  ParamPoly() = default;
  explicit ParamPoly(const Rat& c) {
    if (c != 0) terms_[{0, 0}] = c;
  }
  static ParamPoly term(const Rat& c, unsigned be, unsigned ge) {
    ParamPoly p;
    if (c != 0) p.terms_[{be, ge}] = c;
    return p;
  }

  bool is_zero() const { return terms_.empty(); }
  const std::map<Key, Rat>& terms() const { return terms_; }

  void add_term(unsigned be, unsigned ge, const Rat& c) {
    if (c == 0) return;
    auto it = terms_.find({be, ge});
    if (it == terms_.end()) {
      terms_[{be, ge}] = c;
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  ParamPoly& operator+=(const ParamPoly& o) {
    for (const auto& [k, v] : o.terms_) add_term(k.first, k.second, v);
    return *this;
  }
  ParamPoly& operator-=(const ParamPoly& o) {
    for (const auto& [k, v] : o.terms_) add_term(k.first, k.second, -v);
    return *this;
  }
  friend ParamPoly operator+(ParamPoly a, const ParamPoly& b) { return a += b; }
  friend ParamPoly operator-(ParamPoly a, const ParamPoly& b) { return a -= b; }
  friend ParamPoly operator*(const ParamPoly& a, const ParamPoly& b) {
    ParamPoly r;
    for (const auto& [ka, va] : a.terms_)
      for (const auto& [kb, vb] : b.terms_)
        r.add_term(ka.first + kb.first, ka.second + kb.second, va * vb);
    return r;
  }
  ParamPoly operator-() const {
    ParamPoly r;
    for (const auto& [k, v] : terms_) r.terms_[k] = -v;
    return r;
  }
  ParamPoly scaled(const Rat& s) const {
    ParamPoly r;
    if (s == 0) return r;
    for (const auto& [k, v] : terms_) r.terms_[k] = v * s;
    return r;
  }

  friend bool operator==(const ParamPoly& a, const ParamPoly& b) { return a.terms_ == b.terms_; }

  // Swap beta <-> gamma.
  ParamPoly swapped() const {
    ParamPoly r;
    for (const auto& [k, v] : terms_) r.terms_[{k.second, k.first}] = v;
    return r;
  }

  Rat eval(const Rat& beta, const Rat& gamma) const;
  std::string str() const;  // e.g. "1/2*b^2*g + 3"

 private:
  std::map<Key, Rat> terms_;
};

}  // namespace dlab
