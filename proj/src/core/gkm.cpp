#include "gkm.hpp"

#include <algorithm>
#include <functional>

namespace dlab {

Rat gamma_moment_value(int m, const Rat& xi, const Rat& N) {
  if (m < 0) throw Error("gamma_moment: negative power");
  return Rat(factorial(m)) / rat_pow(N * xi, m + 1);
}

KernelXi kernel_two_log(int q, int p, const Rat& N) {
  if (q < 0 || p < 0) throw Error("kernel_two_log: exponents must be nonnegative integers");
  KernelXi f;
  f.exact = true;
  f.shift = 0;
  for (int j = 0; j <= p; ++j) {
    Rat c = Rat(binomial(p, j)) * Rat(factorial(q + j)) / rat_pow(N, q + j + 1);
    if (j % 2) c = -c;
    f.c[q + j + 1] += c;
  }
  return f;
}

KernelXi kernel_clean(int q, int p, const Rat& N, bool strict, int m_max) {
  if (q < 0 || p < 1) throw Error("kernel_clean: need q >= 0, p >= 1");
  KernelXi f;
  f.exact = false;
  f.shift = strict ? Rat(0) : -Rat(p) / N;  // beta = -p/N
  Rat fac(1);
  for (int m = 0;; ++m) {
    int pw = q + 2 * m + 1;
    if (pw > m_max) break;
    if (m > 0) fac *= Rat(-p, 2) / Rat(m);
    f.c[pw] += fac * Rat(factorial(q + 2 * m)) / rat_pow(N, pw);
  }
  return f;
}

KernelXi kernel_derivative(const KernelXi& f) {
  KernelXi d;
  d.exact = f.exact;
  d.shift = f.shift;
  for (const auto& [m, c] : f.c) d.c[m + 1] = c * Rat(-m);
  return d;
}

Rat kernel_eval(const KernelXi& f, const Rat& xi) {
  if (!f.exact) throw Error("kernel_eval: asymptotic kernel has no pointwise value");
  Rat xip = xi - f.shift;
  if (xip == 0) throw Error("kernel_eval: evaluation at the shifted origin");
  Rat out(0);
  for (const auto& [m, c] : f.c) out += c * rat_pow(xip, -m);
  return out;
}

namespace {

Rat vandermonde(const std::vector<Rat>& xs) {
  Rat v(1);
  for (size_t i = 0; i < xs.size(); ++i)
    for (size_t j = i + 1; j < xs.size(); ++j) v *= (xs[j] - xs[i]);
  return v;
}

Rat det_rat_local(std::vector<std::vector<Rat>> a) {
  size_t n = a.size();
  Rat det(1);
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return Rat(0);
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det *= a[col][col];
    Rat inv = Rat(1) / a[col][col];
    for (size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      Rat f = a[r][col] * inv;
      for (size_t j = col; j < n; ++j) a[r][j] -= f * a[col][j];
    }
  }
  return det;
}

}  // namespace

Rat wronskian_ratio(const KernelXi& f, const std::vector<Rat>& xis) {
  size_t n = xis.size();
  if (n == 0) throw Error("wronskian_ratio: no points");
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (xis[i] == xis[j]) throw Error("wronskian_ratio: coincident points");
  std::vector<KernelXi> tower{f};
  for (size_t k = 1; k < n; ++k) tower.push_back(kernel_derivative(tower.back()));
  std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n));
  for (size_t r = 0; r < n; ++r)
    for (size_t c = 0; c < n; ++c) m[r][c] = kernel_eval(tower[r], xis[c]);
  return det_rat_local(m) / vandermonde(xis);
}

// ---- assemblies ---------------------------------------------------------------

namespace {

using LQ = Laurent<Rat>;

// 1/xi' as an eps-series where xi = eps^{-2} lam^{-2} and xi' = xi - shift:
// 1/xi' = sum_{i>=0} shift^i lam^{2i+2} eps^{2i+2}
LQ xi_prime_inverse(const Rat& lam, const Rat& shift, int ord) {
  LQ u(Rat(0), ord);
  u.lead = 2;
  Rat lam2 = lam * lam;
  Rat term = lam2;
  for (int e = 2; e < ord; e += 2) {
    u.c.push_back(term);
    if (e + 2 < ord) u.c.push_back(Rat(0));
    term *= shift * lam2;
  }
  u.normalize();
  return u;
}

LQ kernel_entry_eps(const KernelXi& f, const Rat& lam, int ord) {
  LQ u = xi_prime_inverse(lam, f.shift, ord);
  LQ acc(Rat(0), ord);
  // powers u^m for the m present in f
  int mmax = f.c.empty() ? 0 : f.c.rbegin()->first;
  LQ pw = LQ::monomial(Rat(0), Rat(1), 0, ord);
  for (int m = 1; m <= mmax; ++m) {
    pw = pw * u;
    auto it = f.c.find(m);
    if (it != f.c.end()) acc = acc + pw.scaled(it->second);
  }
  return acc;
}

GkmAssembly assemble_one_field(const KernelXi& f0, int gamma_n,
                               const std::vector<Rat>& lam_hat, int eps_order) {
  int n = static_cast<int>(lam_hat.size());
  int ord = eps_order + 1;
  std::vector<KernelXi> tower{f0};
  for (int k = 1; k < n; ++k) tower.push_back(kernel_derivative(tower.back()));

  // entries need extra validity headroom: determinant mixes leads, and the
  // final prefactor shifts everything up by 2*gamma_n*n
  int ord_work = ord + 2 * gamma_n * n + 4 * n;
  std::vector<std::vector<LQ>> m;
  for (int r = 0; r < n; ++r) {
    std::vector<LQ> row;
    for (int c = 0; c < n; ++c) row.push_back(kernel_entry_eps(tower[r], lam_hat[c], ord_work));
    m.push_back(std::move(row));
  }
  LQ det = laurent_det(m);

  // Delta(xi) with xi_j = eps^{-2} lam_j^{-2}; shifts cancel in differences
  LQ delta = LQ::monomial(Rat(0), Rat(1), 0, ord_work);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      LQ diff(Rat(0), ord_work);
      diff.lead = -2;
      diff.c.push_back(rat_pow(lam_hat[j], -2) - rat_pow(lam_hat[i], -2));
      delta = delta * diff;
    }

  LQ z = det * delta.inverse();
  // prefactor prod xi_i^{gamma N} = eps^{-2 gamma_n n} prod lam_i^{-2 gamma_n}
  Rat pref(1);
  for (const auto& l : lam_hat) pref *= rat_pow(l, -2 * gamma_n);
  z = z * LQ::monomial(Rat(0), pref, -2 * gamma_n * n, ord_work);

  GkmAssembly out{LQ(Rat(0), ord), Rat(0), 0};
  z.normalize();
  if (z.order < ord) throw Error("gkm assembly: validity order shortfall, raise headroom");
  out.min_power_raw = z.min_exponent();
  out.raw_constant = z.coeff(0);
  if (out.min_power_raw < 0)
    throw Error("gkm assembly: negative eps powers survive the prefactor (lead " +
                std::to_string(out.min_power_raw) + ")");
  if (out.raw_constant == 0) throw Error("gkm assembly: vanishing constant term");
  z = z.scaled(Rat(1) / out.raw_constant);
  // final truncation to the requested order
  LQ zf(Rat(0), ord);
  zf.lead = z.lead;
  for (int e = z.lead; e < ord; ++e) zf.c.push_back(z.coeff(e));
  zf.normalize();
  out.z = zf;
  return out;
}

}  // namespace

GkmAssembly gkm_partition_two_log(int q, int p, const Rat& N, const std::vector<Rat>& lam_hat,
                                  int eps_order) {
  int n = static_cast<int>(lam_hat.size());
  if (n == 0) throw Error("gkm_partition_two_log: need alpha N >= 1 points");
  return assemble_one_field(kernel_two_log(q, p, N), q + n, lam_hat, eps_order);
}

GkmAssembly gkm_partition_clean(int q, int p, const Rat& N, bool strict,
                                const std::vector<Rat>& lam_hat, int eps_order) {
  int n = static_cast<int>(lam_hat.size());
  if (n == 0) throw Error("gkm_partition_clean: need alpha N >= 1 points");
  int m_max = eps_order / 2 + q + n + 4;
  return assemble_one_field(kernel_clean(q, p, N, strict, m_max), q + n, lam_hat, eps_order);
}

// ---- TwoProfile ----------------------------------------------------------------

namespace {

using LS = Laurent<Series<Rat>>;

struct TimeMonomial {
  Mono mono;
  int weight;
  Rat base;  // prod (N/m)^{mu_m} / mu_m!
};

std::vector<TimeMonomial> time_monomials(int D, const Rat& N) {
  std::vector<TimeMonomial> out;
  Mono m(D, 0);
  std::function<void(int, int)> rec = [&](int k, int wleft) {
    if (k > D) {
      TimeMonomial tm;
      tm.mono = m;
      tm.weight = D - wleft;
      tm.base = Rat(1);
      for (int j = 1; j <= D; ++j) {
        for (int c = 0; c < m[j - 1]; ++c) tm.base *= N / Rat(j);
        tm.base /= Rat(factorial(m[j - 1]));
      }
      out.push_back(tm);
      return;
    }
    for (int c = 0; c * k <= wleft; ++c) {
      m[k - 1] = static_cast<uint8_t>(c);
      rec(k + 1, wleft - c * k);
    }
    m[k - 1] = 0;
    return;
  };
  rec(1, D);
  return out;
}

}  // namespace

GkmAssemblyTwoProfile gkm_partition_two_profile(int xq, const Rat& N, int beta_n,
                                                const std::vector<Rat>& lam_hat, int D_times,
                                                int eps_order) {
  int n = static_cast<int>(lam_hat.size());
  if (n == 0) throw Error("gkm_partition_two_profile: need gamma N >= 1 points");
  if (xq < 0) throw Error("gkm_partition_two_profile: need N(beta-gamma) >= 0");
  if (beta_n != xq + n)
    throw Error("gkm_partition_two_profile: beta N must equal N(beta-gamma) + gamma N");

  auto tvars = time_vars(D_times);
  auto szero = Series<Rat>::zero(tvars, D_times);
  int ord = eps_order + 1;
  int ord_work = ord + 2 * beta_n * n + 4 * n;
  auto monos = time_monomials(D_times, N);

  // entry for derivative order k at point lam: sum over monomials mu of
  // base * (xq+W)!/N^{xq+W+1} * (-1)^k (m)(m+1)...(m+k-1) * lam^{2(m+k)} eps^{2(m+k)} t^mu
  // with m = xq + W + 1
  auto entry = [&](int k, const Rat& lam) {
    LS e(szero, ord_work);
    e.lead = 0;
    e.c.assign(std::max(0, ord_work), szero);
    for (const auto& tm : monos) {
      int m = xq + tm.weight + 1;
      Rat c = tm.base * Rat(factorial(xq + tm.weight)) / rat_pow(N, m);
      for (int i = 0; i < k; ++i) c *= Rat(-(m + i));
      int epow = 2 * (m + k);
      if (epow >= ord_work) continue;
      c *= rat_pow(lam, epow);
      Series<Rat> s = szero;
      s.add_term(tm.mono, c);
      e.c[epow] = e.c[epow] + s;
    }
    e.normalize();
    return e;
  };

  std::vector<std::vector<LS>> m;
  for (int r = 0; r < n; ++r) {
    std::vector<LS> row;
    for (int c = 0; c < n; ++c) row.push_back(entry(r, lam_hat[c]));
    m.push_back(std::move(row));
  }
  LS det = laurent_det(m);

  LS delta = LS::monomial(szero, Series<Rat>::one(tvars, D_times), 0, ord_work);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      LS diff(szero, ord_work);
      diff.lead = -2;
      diff.c.push_back(Series<Rat>::constant(tvars, D_times,
                                             rat_pow(lam_hat[j], -2) - rat_pow(lam_hat[i], -2)));
      delta = delta * diff;
    }

  LS z = det * delta.inverse();
  Rat pref(1);
  for (const auto& l : lam_hat) pref *= rat_pow(l, -2 * beta_n);
  z = z * LS::monomial(szero, Series<Rat>::constant(tvars, D_times, pref), -2 * beta_n * n,
                       ord_work);
  z.normalize();
  if (z.order < ord)
    throw Error("gkm two-profile assembly: validity order shortfall, raise headroom");

  GkmAssemblyTwoProfile out{LS(szero, ord), szero, 0, tvars};
  out.min_power_raw = z.min_exponent();
  if (out.min_power_raw < 0)
    throw Error("gkm two-profile assembly: negative eps powers survive the prefactor");
  out.raw_constant = z.coeff(0);
  Rat c0 = out.raw_constant.constant_term();
  if (c0 == 0) throw Error("gkm two-profile assembly: vanishing constant term");
  // the eps^0 slot must be t-free for the e^F structure to hold
  if (out.raw_constant.term_count() > 1)
    throw Error("gkm two-profile assembly: time-dependent eps^0 coefficient");
  z = z.scaled(Series<Rat>::constant(tvars, D_times, Rat(1) / c0));
  LS zf(szero, ord);
  zf.lead = z.lead;
  for (int e = z.lead; e < ord; ++e) zf.c.push_back(z.coeff(e));
  zf.normalize();
  out.z = zf;
  return out;
}

// ---- two-log tau on the Miwa locus ----------------------------------------------

Laurent<Rat> two_log_tau_eps(int q, int p, long Ntil, long gamma_n,
                             const std::vector<Rat>& lam_hat, int eps_order) {
  int n = static_cast<int>(lam_hat.size());
  if (n != Ntil) throw Error("two_log_tau_eps: need exactly Ntil points");
  int ord = eps_order + 1;
  int ord_work = ord + static_cast<int>(gamma_n) * n + 2 * n;

  // rational part of the (-1,inf) kernel: R = sum_j binom(p,j) 2^{p-j} (-1)^j
  // (q+j)! / (Ntil^{q+j+1}) * lt^{-(q+j+1)}
  std::map<int, Rat> R;
  for (int j = 0; j <= p; ++j) {
    Rat c = Rat(binomial(p, j)) * rat_pow(Rat(2), p - j) * Rat(factorial(q + j)) /
            rat_pow(Rat(Ntil), q + j + 1);
    if (j % 2) c = -c;
    R[q + j + 1] += c;
  }

  // ghat_k = (d/dlt + Ntil)^k R, finite Laurent maps
  std::vector<std::map<int, Rat>> ghat{R};
  for (int k = 1; k < n; ++k) {
    std::map<int, Rat> next;
    for (const auto& [m, c] : ghat.back()) {
      next[m + 1] += c * Rat(-m);
      next[m] += c * Rat(Ntil);
    }
    ghat.push_back(std::move(next));
  }

  using LQ = Laurent<Rat>;
  auto entry = [&](int k, const Rat& lam) {
    // lt = lam/eps: lt^{-m} = eps^m lam^{-m}
    LQ e(Rat(0), ord_work);
    e.lead = 0;
    e.c.assign(ord_work, Rat(0));
    for (const auto& [m, c] : ghat[k]) {
      if (m >= ord_work) continue;
      e.c[m] += c * rat_pow(lam, -m);
    }
    e.normalize();
    return e;
  };

  std::vector<std::vector<LQ>> mat;
  for (int r = 0; r < n; ++r) {
    std::vector<LQ> row;
    for (int c = 0; c < n; ++c) row.push_back(entry(r, lam_hat[c]));
    mat.push_back(std::move(row));
  }
  LQ det = laurent_det(mat);

  LQ delta = LQ::monomial(Rat(0), Rat(1), 0, ord_work);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      LQ diff(Rat(0), ord_work);
      diff.lead = -1;
      diff.c.push_back(lam_hat[j] - lam_hat[i]);
      delta = delta * diff;
    }

  LQ z = det * delta.inverse();
  Rat pref(1);
  for (const auto& l : lam_hat) pref *= rat_pow(l, gamma_n);
  z = z * LQ::monomial(Rat(0), pref, -static_cast<int>(gamma_n) * n, ord_work);
  z.normalize();
  if (z.order < ord) throw Error("two_log_tau_eps: validity order shortfall, raise headroom");
  if (z.min_exponent() < 0) throw Error("two_log_tau_eps: negative eps powers");
  Rat c0 = z.coeff(0);
  if (c0 == 0) throw Error("two_log_tau_eps: vanishing constant term");
  z = z.scaled(Rat(1) / c0);
  LQ zf(Rat(0), ord);
  zf.lead = z.lead;
  for (int e = z.lead; e < ord; ++e) zf.c.push_back(z.coeff(e));
  zf.normalize();
  return zf;
}

// ---- Schwinger-Dyson residuals ---------------------------------------------------

namespace {

long rat_to_long(const Rat& q, const char* what) {
  if (q.get_den() != 1) throw Error(std::string(what) + " must be an integer");
  return q.get_num().get_si();
}

Jet jet_det(const std::vector<std::vector<Jet>>& m, const JetLayout* l) {
  size_t n = m.size();
  if (n == 1) return m[0][0];
  Jet out = Jet::constant(l, Rat(0));
  for (size_t r = 0; r < n; ++r) {
    std::vector<std::vector<Jet>> minor;
    for (size_t i = 0; i < n; ++i) {
      if (i == r) continue;
      std::vector<Jet> row;
      for (size_t j = 1; j < n; ++j) row.push_back(m[i][j]);
      minor.push_back(std::move(row));
    }
    Jet term = m[r][0] * jet_det(minor, l);
    out = (r % 2) ? out - term : out + term;
  }
  return out;
}

}  // namespace

SdCheckResult sd_equation_check(const Rat& alpha, const Rat& beta, const Rat& gamma,
                                const Rat& N, const std::vector<Rat>& lambdas_tilde) {
  long Ntil = rat_to_long(alpha * N, "alpha N");
  long p = rat_to_long(-beta * N, "-beta N");
  long q = rat_to_long((gamma - alpha) * N, "(gamma-alpha) N");
  if (Ntil < 1 || p < 0 || q < 0) throw Error("sd_equation_check: exponent regime violated");
  if (static_cast<long>(lambdas_tilde.size()) != Ntil)
    throw Error("sd_equation_check: need alpha N lambda-tilde points");
  for (size_t i = 0; i < lambdas_tilde.size(); ++i) {
    if (lambdas_tilde[i] <= 0) throw Error("sd_equation_check: points must be positive");
    for (size_t j = i + 1; j < lambdas_tilde.size(); ++j)
      if (lambdas_tilde[i] == lambdas_tilde[j])
        throw Error("sd_equation_check: coincident points");
  }
  Rat alpha_til = beta / alpha;
  Rat beta_til = Rat(1) - gamma / alpha;

  // kernel on (-1,inf): f = e^{Ntil lt} num/den
  QPoly den = QPoly::monomial(Rat(1), q + p + 1);
  QPoly num;
  for (long j = 0; j <= p; ++j) {
    Rat c = Rat(binomial(p, j)) * rat_pow(Rat(2), p - j) * Rat(factorial(q + j)) /
            rat_pow(Rat(Ntil), q + j + 1);
    if (j % 2) c = -c;
    num = num + QPoly::monomial(c, p - j);
  }
  std::vector<RatExpFunction> tower{RatExpFunction::term(Rat(Ntil), num, den)};
  for (long k = 1; k < Ntil; ++k) tower.push_back(tower.back().derivative());

  int n = static_cast<int>(Ntil);
  SdCheckResult res;
  res.all_zero = true;
  for (int i1 = 0; i1 < n; ++i1) {
    std::vector<int> ords(n, 1);
    ords[i1] = 2;
    JetLayout layout(ords);

    // Z = det || fhat^{(r)}(lt_c) || / Delta(lt), with the global constant
    // prod e^{Ntil lt_c} factored out of each column
    std::vector<std::vector<Jet>> m;
    for (int r = 0; r < n; ++r) {
      std::vector<Jet> row;
      for (int c = 0; c < n; ++c) {
        Jet x = Jet::variable(&layout, c, lambdas_tilde[c]);
        Jet acc = Jet::constant(&layout, Rat(0));
        for (const auto& t : tower[r].terms()) {
          Jet nj = qpoly_on_jet(t.num, x);
          Jet dj = qpoly_on_jet(t.den, x);
          acc = acc + nj * dj.recip();
        }
        Jet ej = exp_shift_jet(&layout, c, Rat(Ntil));
        row.push_back(ej * acc);
      }
      m.push_back(std::move(row));
    }
    Jet det = jet_det(m, &layout);
    Jet delta = Jet::constant(&layout, Rat(1));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        Jet xi = Jet::variable(&layout, i, lambdas_tilde[i]);
        Jet xj = Jet::variable(&layout, j, lambdas_tilde[j]);
        delta = delta * (xj - xi);
      }
    Jet Z = det * delta.recip();

    Rat z0 = Z.scalar();
    Rat zi1 = Z.point_derivative(i1, 1);
    Rat zi1i1 = Z.point_derivative(i1, 2);

    Rat lt1 = lambdas_tilde[i1];
    Rat Nt2 = Rat(Ntil) * Rat(Ntil);
    Rat resid = -lt1 * zi1i1 / Nt2 + (alpha_til + beta_til - 2) / Rat(Ntil) * zi1 +
                (beta_til - alpha_til + lt1) * z0;
    for (int i2 = 0; i2 < n; ++i2) {
      if (i2 == i1) continue;
      Rat lt2 = lambdas_tilde[i2];
      Rat zi2 = Z.point_derivative(i2, 1);
      resid -= lt2 / (lt2 - lt1) * (zi2 - zi1) / Nt2;
    }
    res.residuals.push_back(resid);
    if (resid != 0) res.all_zero = false;
  }
  return res;
}

}  // namespace dlab
