#pragma once

#include <map>
#include <vector>

#include "rat.hpp"
#include "ratexp.hpp"
#include "series.hpp"

namespace dlab {

// ---- Laurent series in a single scale variable ------------------------------

template <class C>
struct LaurentOps;

template <>
struct LaurentOps<Rat> {
  static bool is_zero(const Rat& v) { return v == 0; }
  static Rat inv(const Rat& v) { return Rat(1) / v; }
};

template <>
struct LaurentOps<Series<Rat>> {
  static bool is_zero(const Series<Rat>& v) { return v.is_zero(); }
  static Series<Rat> inv(const Series<Rat>& v) { return v.inverse(); }
};

// coefficients of eps^{lead+k}; entries at exponent >= order are untracked
template <class C>
struct Laurent {
  int lead = 0;
  int order = 0;  // exclusive upper bound of validity
  std::vector<C> c;
  C zero;

  explicit Laurent(C z, int ord) : order(ord), zero(std::move(z)) {}

  static Laurent monomial(C z, const C& v, int exponent, int ord) {
    Laurent l(std::move(z), ord);
    l.lead = exponent;
    if (exponent < ord) l.c.push_back(v);
    return l;
  }

  bool is_zero() const {
    for (const auto& v : c)
      if (!LaurentOps<C>::is_zero(v)) return false;
    return true;
  }

  const C& coeff(int exponent) const {
    if (exponent < lead || exponent >= lead + static_cast<int>(c.size())) return zero;
    return c[exponent - lead];
  }

  void normalize() {
    while (!c.empty() && LaurentOps<C>::is_zero(c.front())) {
      c.erase(c.begin());
      ++lead;
    }
    while (!c.empty() && LaurentOps<C>::is_zero(c.back())) c.pop_back();
    if (lead + static_cast<int>(c.size()) > order)
      c.resize(static_cast<size_t>(std::max(0, order - lead)), zero);
  }

  int min_exponent() const { return c.empty() ? order : lead; }

  friend Laurent operator+(const Laurent& a, const Laurent& b) {
    Laurent r(a.zero, std::min(a.order, b.order));
    r.lead = std::min(a.lead, b.lead);
    int hi = std::min(r.order, std::max(a.lead + static_cast<int>(a.c.size()),
                                        b.lead + static_cast<int>(b.c.size())));
    for (int e = r.lead; e < hi; ++e) r.c.push_back(a.coeff(e) + b.coeff(e));
    r.normalize();
    return r;
  }
  friend Laurent operator-(const Laurent& a, const Laurent& b) {
    Laurent r(a.zero, std::min(a.order, b.order));
    r.lead = std::min(a.lead, b.lead);
    int hi = std::min(r.order, std::max(a.lead + static_cast<int>(a.c.size()),
                                        b.lead + static_cast<int>(b.c.size())));
    for (int e = r.lead; e < hi; ++e) r.c.push_back(a.coeff(e) - b.coeff(e));
    r.normalize();
    return r;
  }
  Laurent scaled(const C& s) const {
    Laurent r(zero, order);
    r.lead = lead;
    for (const auto& v : c) r.c.push_back(v * s);
    r.normalize();
    return r;
  }

  friend Laurent operator*(const Laurent& a, const Laurent& b) {
    // truncation: validity limited by each factor's order against the other's lead
    int ord = std::min(a.order + b.lead, b.order + a.lead);
    Laurent r(a.zero, ord);
    r.lead = a.lead + b.lead;
    int len = std::max(0, ord - r.lead);
    r.c.assign(len, a.zero);
    for (size_t i = 0; i < a.c.size(); ++i) {
      if (LaurentOps<C>::is_zero(a.c[i])) continue;
      for (size_t j = 0; j < b.c.size(); ++j) {
        int e = a.lead + static_cast<int>(i) + b.lead + static_cast<int>(j);
        if (e - r.lead >= len) break;
        r.c[e - r.lead] = r.c[e - r.lead] + a.c[i] * b.c[j];
      }
    }
    r.normalize();
    return r;
  }

  Laurent inverse() const {
    Laurent a(*this);
    a.normalize();
    if (a.c.empty()) throw Error("Laurent inverse of zero");
    // 1/(c0 eps^lead (1+u)) with u of positive valuation
    C ic0 = LaurentOps<C>::inv(a.c[0]);
    int n = a.order - a.lead;  // relative orders to produce
    std::vector<C> u(a.c.size(), zero);
    for (size_t i = 1; i < a.c.size(); ++i) u[i] = a.c[i] * ic0;
    std::vector<C> inv(n, zero);
    if (n > 0) inv[0] = ic0;
    // geometric series: inv_rel = ic0 * sum (-u)^k, computed by convolution recurrence
    // r_k = -sum_{j=1..k} u_j r_{k-j}, r_0 = 1; then scale by ic0
    std::vector<C> r(n, zero);
    if (n > 0) {
      // r uses the normalized u with leading 1
      r[0] = a.c[0] * ic0;  // = 1
      for (int k = 1; k < n; ++k) {
        C acc = zero;
        for (int j = 1; j <= k && j < static_cast<int>(u.size()); ++j)
          acc = acc + u[j] * r[k - j];
        C z = zero;
        r[k] = z - acc;
      }
      for (int k = 0; k < n; ++k) inv[k] = r[k] * ic0;
    }
    Laurent out(zero, a.order - 2 * a.lead);
    out.lead = -a.lead;
    out.c = std::move(inv);
    out.normalize();
    return out;
  }
};

template <class C>
Laurent<C> laurent_det(std::vector<std::vector<Laurent<C>>> m) {
  size_t n = m.size();
  if (n == 0) throw Error("laurent_det: empty matrix");
  if (n == 1) return m[0][0];
  // Laplace along the first column
  Laurent<C> out(m[0][0].zero, m[0][0].order);
  bool first = true;
  for (size_t r = 0; r < n; ++r) {
    std::vector<std::vector<Laurent<C>>> minor;
    for (size_t i = 0; i < n; ++i) {
      if (i == r) continue;
      std::vector<Laurent<C>> row;
      for (size_t j = 1; j < n; ++j) row.push_back(m[i][j]);
      minor.push_back(std::move(row));
    }
    Laurent<C> term = m[r][0] * laurent_det(minor);
    if (r % 2 == 1) {
      Laurent<C> z(term.zero, term.order);
      term = z - term;
    }
    if (first) {
      out = term;
      first = false;
    } else {
      out = out + term;
    }
  }
  return out;
}

// ---- kernels -----------------------------------------------------------------

// integral_0^inf x^m e^{-N x xi} dx = m!/(N xi)^{m+1}
Rat gamma_moment_value(int m, const Rat& xi, const Rat& N);

// Laurent in xi': c[m] is the coefficient of xi'^{-m}. exact=false marks an
// asymptotic tail (Clean variant), valid order-by-order only.
struct KernelXi {
  std::map<int, Rat> c;
  bool exact = true;
  Rat shift = 0;  // xi' = xi - shift
};

// f(xi) = integral_0^inf e^{-N x xi} x^q (1-x)^p dx, p >= 0 integer
KernelXi kernel_two_log(int q, int p, const Rat& N);

// f(xi') = integral_0^inf x^q e^{-N x xi'} e^{-(p/2) x^2} dx expanded to
// m_max inverse powers; strict kernels have shift 0, loose shift beta = -p/N.
KernelXi kernel_clean(int q, int p, const Rat& N, bool strict, int m_max);

KernelXi kernel_derivative(const KernelXi& f);
Rat kernel_eval(const KernelXi& f, const Rat& xi);  // exact kernels only

// det || f^{(i1-1)}(xi_{i2}) || / Delta(xi) at distinct rational points
Rat wronskian_ratio(const KernelXi& f, const std::vector<Rat>& xis);

// ---- partition-function assemblies (series in the Miwa scale eps) -----------

// TwoLog: lambda_i = eps*lam_hat_i (alphaN = #points), exponents q=(gamma-alpha)N,
// p=-beta N. Exact polynomial in eps up to eps_order; normalized to constant 1.
struct GkmAssembly {
  Laurent<Rat> z;          // e^F after prefactors and normalization
  Rat raw_constant;        // eps^0 coefficient before normalization
  int min_power_raw;       // lowest eps power before normalization (bug if < 0)
};
GkmAssembly gkm_partition_two_log(int q, int p, const Rat& N,
                                  const std::vector<Rat>& lam_hat, int eps_order);

GkmAssembly gkm_partition_clean(int q, int p, const Rat& N, bool strict,
                                const std::vector<Rat>& lam_hat, int eps_order);

// TwoProfile: kernel f(lt) = integral x^{xq} e^{-N x lt + N sum (t_m/m) x^m},
// xq = N(beta-gamma) >= 0, #points = gamma N; prefactor prod |lambda|^{-2 beta N}.
// Result: Laurent in eps with Series<Rat> coefficients in times t_1..t_D.
struct GkmAssemblyTwoProfile {
  Laurent<Series<Rat>> z;
  Series<Rat> raw_constant;
  int min_power_raw;
  VarTablePtr tvars;
};
GkmAssemblyTwoProfile gkm_partition_two_profile(int xq, const Rat& N, int beta_n,
                                                const std::vector<Rat>& lam_hat, int D_times,
                                                int eps_order);

// ---- two-log tau function on the Miwa locus ----------------------------------

// normalized eps-series of prod lt_i^{gammaN} det||(d/dlt + Ntil)^{i1-1} R(lt_{i2})||/Delta(lt)
// with lt_i = lam_hat_i / eps; R is the rational part of the (-1,inf) kernel.
Laurent<Rat> two_log_tau_eps(int q, int p, long Ntil, long gamma_n,
                             const std::vector<Rat>& lam_hat, int eps_order);

// ---- Schwinger-Dyson exact residual check ------------------------------------

struct SdCheckResult {
  std::vector<Rat> residuals;  // one per lambda-tilde point, exactly zero expected
  bool all_zero;
};
SdCheckResult sd_equation_check(const Rat& alpha, const Rat& beta, const Rat& gamma,
                                const Rat& N, const std::vector<Rat>& lambdas_tilde);

}  // namespace dlab
