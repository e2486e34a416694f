#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "bigfloat.hpp"
#include "param_poly.hpp"
#include "rat.hpp"

namespace dlab {

// ---- ring glue -------------------------------------------------------------

template <class R>
struct RingTraits;

template <>
struct RingTraits<Rat> {
  static Rat zero() { return Rat(0); }
  static Rat one() { return Rat(1); }
  static bool is_zero(const Rat& v) { return v == 0; }
  static bool is_negligible(const Rat& v) { return v == 0; }
  static Rat from_rat(const Rat& q) { return q; }
  static std::string str(const Rat& v) { return rat_str(v); }
  static nlohmann::json to_json(const Rat& v) { return rat_str(v); }
  static Rat from_json(const nlohmann::json& j) { return rat_parse(j.get<std::string>()); }
};

template <>
struct RingTraits<BigFloat> {
  static BigFloat zero() { return BigFloat(0L); }
  static BigFloat one() { return BigFloat(1L); }
  static bool is_zero(const BigFloat& v) { return v.is_zero(); }
  // absolute threshold for convergence checks; quantities here are O(1)
  static bool is_negligible(const BigFloat& v) {
    static const BigFloat eps(Rat(1, Int(1) << 160));
    return abs(v) < eps;
  }
  static BigFloat from_rat(const Rat& q) { return BigFloat(q); }
  static std::string str(const BigFloat& v) { return v.to_decimal(30); }
  static nlohmann::json to_json(const BigFloat& v) { return v.to_hex(); }
  static BigFloat from_json(const nlohmann::json& j) { return BigFloat::from_hex(j.get<std::string>()); }
};

template <>
struct RingTraits<ParamPoly> {
  static ParamPoly zero() { return ParamPoly(); }
  static ParamPoly one() { return ParamPoly(Rat(1)); }
  static bool is_zero(const ParamPoly& v) { return v.is_zero(); }
  static bool is_negligible(const ParamPoly& v) { return v.is_zero(); }
  static ParamPoly from_rat(const Rat& q) { return ParamPoly(q); }
  static std::string str(const ParamPoly& v) { return v.str(); }
  static nlohmann::json to_json(const ParamPoly& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [k, c] : v.terms())
      arr.push_back({{"b", k.first}, {"g", k.second}, {"c", rat_str(c)}});
    return arr;
  }
  static ParamPoly from_json(const nlohmann::json& j) {
    ParamPoly p;
    for (const auto& t : j)
      p.add_term(t.at("b").get<unsigned>(), t.at("g").get<unsigned>(),
                 rat_parse(t.at("c").get<std::string>()));
    return p;
  }
};

// ---- variables -------------------------------------------------------------

struct Var {
  std::string name;
  int weight = 1;
};

class VarTable {
 public:
  explicit VarTable(std::vector<Var> vars) : vars_(std::move(vars)) {}
  size_t size() const { return vars_.size(); }
  const Var& var(size_t i) const { return vars_[i]; }
  int index_of(const std::string& name) const {
    for (size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i].name == name) return static_cast<int>(i);
    return -1;
  }

 private:
  std::vector<Var> vars_;
};

using VarTablePtr = std::shared_ptr<const VarTable>;

inline VarTablePtr make_vars(std::vector<Var> vars) {
  return std::make_shared<const VarTable>(std::move(vars));
}

// t_1..t_D with weight(t_r)=r, optional extras appended.
inline VarTablePtr time_vars(int D, const std::string& prefix = "t") {
  std::vector<Var> v;
  for (int r = 1; r <= D; ++r) v.push_back({prefix + std::to_string(r), r});
  return make_vars(std::move(v));
}

using Mono = std::vector<uint8_t>;  // exponent per variable

// ---- truncated weighted-degree series --------------------------------------

template <class R>
class Series {
 public:
  using Traits = RingTraits<R>;

  Series(VarTablePtr vars, int max_weight) : vars_(std::move(vars)), max_weight_(max_weight) {}

  static Series constant(VarTablePtr vars, int D, R c) {
    Series s(std::move(vars), D);
    if (!Traits::is_zero(c)) s.terms_[Mono(s.vars_->size(), 0)] = std::move(c);
    return s;
  }
  static Series zero(VarTablePtr vars, int D) { return Series(std::move(vars), D); }
  static Series one(VarTablePtr vars, int D) { return constant(std::move(vars), D, Traits::one()); }
  static Series variable(VarTablePtr vars, int D, size_t idx) {
    Series s(vars, D);
    if (s.vars_->var(idx).weight <= D) {
      Mono m(vars->size(), 0);
      m[idx] = 1;
      s.terms_[m] = Traits::one();
    }
    return s;
  }

  const VarTablePtr& vars() const { return vars_; }
  int max_weight() const { return max_weight_; }
  const std::map<Mono, R>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }

  int mono_weight(const Mono& m) const {
    int w = 0;
    for (size_t i = 0; i < m.size(); ++i) w += m[i] * vars_->var(i).weight;
    return w;
  }

  void add_term(const Mono& m, const R& c) {
    if (Traits::is_zero(c) || mono_weight(m) > max_weight_) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_[m] = c;
    } else {
      it->second += c;
      if (Traits::is_zero(it->second)) terms_.erase(it);
    }
  }

  R coeff(const Mono& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Traits::zero() : it->second;
  }
  R constant_term() const { return coeff(Mono(vars_->size(), 0)); }

  int min_weight() const {  // weight of lowest term; max_weight_+1 if zero
    int w = max_weight_ + 1;
    for (const auto& [m, c] : terms_) {
      int mw = mono_weight(m);
      if (mw < w) w = mw;
    }
    return w;
  }

  // like min_weight, but ignores numerically negligible coefficients
  int min_significant_weight() const {
    int w = max_weight_ + 1;
    for (const auto& [m, c] : terms_) {
      if (Traits::is_negligible(c)) continue;
      int mw = mono_weight(m);
      if (mw < w) w = mw;
    }
    return w;
  }

  Series truncated(int W) const {
    Series out(vars_, W);
    for (const auto& [m, c] : terms_)
      if (mono_weight(m) <= W) out.terms_[m] = c;
    return out;
  }

  Series& operator+=(const Series& o) {
    check_compat(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Series& operator-=(const Series& o) {
    check_compat(o);
    for (const auto& [m, c] : o.terms_) {
      R neg = Traits::zero();
      neg -= c;
      add_term(m, neg);
    }
    return *this;
  }
  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  Series operator-() const {
    Series out(vars_, max_weight_);
    for (const auto& [m, c] : terms_) {
      R neg = Traits::zero();
      neg -= c;
      out.terms_[m] = std::move(neg);
    }
    return out;
  }

  friend Series operator*(const Series& a, const Series& b) {
    a.check_compat(b);
    Series out(a.vars_, a.max_weight_);
    for (const auto& [ma, ca] : a.terms_) {
      int wa = a.mono_weight(ma);
      for (const auto& [mb, cb] : b.terms_) {
        if (wa + b.mono_weight(mb) > a.max_weight_) continue;
        Mono m(ma);
        for (size_t i = 0; i < m.size(); ++i) m[i] += mb[i];
        out.add_term(m, ca * cb);
      }
    }
    return out;
  }

  Series scaled(const R& s) const {
    Series out(vars_, max_weight_);
    if (Traits::is_zero(s)) return out;
    for (const auto& [m, c] : terms_) {
      R v = c * s;
      if (!Traits::is_zero(v)) out.terms_[m] = std::move(v);
    }
    return out;
  }
  Series scaled_rat(const Rat& q) const { return scaled(Traits::from_rat(q)); }

  Series pow(unsigned e) const {
    Series out = one(vars_, max_weight_);
    Series base = *this;
    while (e) {
      if (e & 1) out = out * base;
      base = base * base;
      e >>= 1;
    }
    return out;
  }

  // formal exp; requires (negligible) zero constant term
  Series exp() const {
    if (!Traits::is_negligible(constant_term())) throw Error("series exp: nonzero constant term");
    Series out = one(vars_, max_weight_);
    Series pw = one(vars_, max_weight_);
    Int kfact = 1;
    int mv = min_significant_weight();
    int kmax = mv > max_weight_ ? 0 : max_weight_ / (mv > 0 ? mv : 1);
    for (int k = 1; k <= kmax; ++k) {
      pw = pw * (*this);
      kfact *= k;
      if (pw.is_zero()) break;
      out += pw.scaled(Traits::from_rat(Rat(1) / Rat(kfact)));
    }
    return out;
  }

  // formal log; requires constant term 1 (up to numeric negligibility)
  Series log() const {
    R c0 = constant_term();
    R one_r = Traits::one();
    one_r -= c0;
    if (!Traits::is_negligible(one_r)) throw Error("series log: constant term is not 1");
    Series v = *this - one(vars_, max_weight_);
    Series out = zero(vars_, max_weight_);
    Series pw = one(vars_, max_weight_);
    int mv = v.min_significant_weight();
    int kmax = mv > max_weight_ ? 0 : max_weight_ / (mv > 0 ? mv : 1);
    for (int k = 1; k <= kmax; ++k) {
      pw = pw * v;
      if (pw.is_zero()) break;
      Rat sign = (k % 2) ? Rat(1, k) : Rat(-1, k);
      out += pw.scaled(Traits::from_rat(sign));
    }
    return out;
  }

  // multiplicative inverse; requires invertible constant term (field rings)
  Series inverse() const {
    R c0 = constant_term();
    if (Traits::is_zero(c0)) throw Error("series inverse: zero constant term");
    R ic0 = Traits::one();
    ic0 = ic0 / c0;
    Series v = one(vars_, max_weight_) - scaled(ic0);  // v = 1 - a/c0, min weight >= 1
    Series out = one(vars_, max_weight_);
    Series pw = one(vars_, max_weight_);
    int mv = v.min_significant_weight();
    int kmax = mv > max_weight_ ? 0 : max_weight_ / (mv > 0 ? mv : 1);
    for (int k = 1; k <= kmax; ++k) {
      pw = pw * v;
      if (pw.is_zero()) break;
      out += pw;
    }
    return out.scaled(ic0);
  }

  // formal partial derivative; output truncation drops by the variable weight
  Series diff(size_t idx) const {
    if (idx >= vars_->size()) throw Error("series diff: unknown variable");
    int w = vars_->var(idx).weight;
    Series out(vars_, max_weight_ - w);
    for (const auto& [m, c] : terms_) {
      if (m[idx] == 0) continue;
      Mono d(m);
      d[idx] -= 1;
      R v = c * Traits::from_rat(Rat(static_cast<long>(m[idx])));
      out.add_term(d, v);
    }
    return out;
  }

  // substitute each variable by an image series on a target table
  static Series substitute(const Series& src, VarTablePtr target, int D,
                           const std::vector<Series>& images) {
    if (images.size() != src.vars_->size()) throw Error("substitute: image count mismatch");
    Series out = zero(target, D);
    for (const auto& [m, c] : src.terms_) {
      Series term = constant(target, D, c);
      for (size_t i = 0; i < m.size() && !term.is_zero(); ++i)
        if (m[i]) term = term * images[i].pow(m[i]);
      out += term;
    }
    return out;
  }

  nlohmann::json to_json() const {
    nlohmann::json vars = nlohmann::json::array();
    nlohmann::json weights = nlohmann::json::array();
    for (size_t i = 0; i < vars_->size(); ++i) {
      vars.push_back(vars_->var(i).name);
      weights.push_back(vars_->var(i).weight);
    }
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [m, c] : terms_) {
      nlohmann::json e = nlohmann::json::array();
      for (auto x : m) e.push_back(static_cast<int>(x));
      terms.push_back({{"exp", e}, {"coeff", Traits::to_json(c)}});
    }
    return {{"vars", vars}, {"weights", weights}, {"max_weight", max_weight_}, {"terms", terms}};
  }

  static Series from_json(const nlohmann::json& j) {
    std::vector<Var> vars;
    const auto& names = j.at("vars");
    const auto& weights = j.at("weights");
    for (size_t i = 0; i < names.size(); ++i)
      vars.push_back({names[i].get<std::string>(), weights[i].get<int>()});
    Series s(make_vars(std::move(vars)), j.at("max_weight").get<int>());
    for (const auto& t : j.at("terms")) {
      Mono m;
      for (const auto& e : t.at("exp")) m.push_back(static_cast<uint8_t>(e.get<int>()));
      s.add_term(m, Traits::from_json(t.at("coeff")));
    }
    return s;
  }

  friend bool operator==(const Series& a, const Series& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (const auto& [m, c] : a.terms_) {
      auto it = b.terms_.find(m);
      if (it == b.terms_.end()) return false;
      R d = c;
      d -= it->second;
      if (!Traits::is_zero(d)) return false;
    }
    return true;
  }

 private:
  void check_compat(const Series& o) const {
    if (vars_.get() != o.vars_.get() || max_weight_ != o.max_weight_)
      throw Error("series: variable table / truncation mismatch");
  }

  VarTablePtr vars_;
  int max_weight_;
  std::map<Mono, R> terms_;
};

// ---- Newton solver over series ---------------------------------------------

// Solves residual(x) = 0 order by order starting from the weight-0 seeds.
// jac0 is the weight-0 Jacobian d residual_i / d x_j at the seed; it must be
// invertible in the coefficient field. Each sweep gains at least one weight.
template <class R>
std::vector<Series<R>> newton_solve(
    const std::function<std::vector<Series<R>>(const std::vector<Series<R>>&)>& residual,
    const std::vector<std::vector<R>>& jac0, const std::vector<R>& seeds, VarTablePtr vars,
    int D) {
  using Traits = RingTraits<R>;
  const size_t n = seeds.size();
  if (jac0.size() != n) throw Error("newton_solve: jacobian shape mismatch");

  // invert jac0 by Gauss-Jordan
  std::vector<std::vector<R>> a(jac0);
  std::vector<std::vector<R>> inv(n, std::vector<R>(n, Traits::zero()));
  for (size_t i = 0; i < n; ++i) inv[i][i] = Traits::one();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && Traits::is_zero(a[piv][col])) ++piv;
    if (piv == n) throw Error("newton_solve: singular weight-0 Jacobian");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    R d = a[col][col];
    for (size_t j = 0; j < n; ++j) {
      a[col][j] = a[col][j] / d;
      inv[col][j] = inv[col][j] / d;
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == col || Traits::is_zero(a[r][col])) continue;
      R f = a[r][col];
      for (size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }

  std::vector<Series<R>> x;
  x.reserve(n);
  for (size_t i = 0; i < n; ++i) x.push_back(Series<R>::constant(vars, D, seeds[i]));

  for (int sweep = 0; sweep <= D + 1; ++sweep) {
    auto F = residual(x);
    if (F.size() != n) throw Error("newton_solve: residual arity mismatch");
    int fw = D + 1;
    for (const auto& f : F) fw = std::min(fw, f.min_significant_weight());
    if (fw > D) return x;  // residual vanishes to truncation order
    if (sweep == D + 1) throw Error("newton_solve: no convergence (order reached: " +
                                    std::to_string(fw) + ")");
    for (size_t i = 0; i < n; ++i) {
      Series<R> delta = Series<R>::zero(vars, D);
      for (size_t j = 0; j < n; ++j) delta += F[j].truncated(D).scaled(inv[i][j]);
      x[i] -= delta;
    }
  }
  return x;
}

}  // namespace dlab
