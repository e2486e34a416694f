#include "virasoro.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "gkm.hpp"

namespace dlab {

namespace {

// t_m * S on the same table/truncation
Series<Rat> times_var(const Series<Rat>& S, int var_idx) {
  Series<Rat> v = Series<Rat>::variable(S.vars(), S.max_weight(), var_idx);
  return v * S;
}

Series<Rat> retrunc(const Series<Rat>& S, int W) { return S.truncated(W); }

}  // namespace

Series<Rat> apply_V(int k, const VFamilyParams& par, const Series<Rat>& Z) {
  if (k < -1) throw Error("apply_V: k >= -1 required");
  int D = Z.max_weight();
  int n_vars = static_cast<int>(Z.vars()->size());
  int out_w = (k >= 0) ? D - k - 1 : D;
  if (out_w < 0) throw Error("apply_V: truncation too small for this k");
  Series<Rat> out = Series<Rat>::zero(Z.vars(), out_w);

  // -sum_{m>=1} m t_m dZ/dt_{m+k}   (for k=-1 the m=1 term hits t_0: dropped)
  for (int m = 1; m <= n_vars; ++m) {
    int tgt = m + k;
    if (tgt < 1 || tgt > n_vars) continue;
    Series<Rat> d = Z.diff(tgt - 1);
    Series<Rat> t = times_var(retrunc(d, D), m - 1);
    out -= retrunc(t, out_w).scaled_rat(Rat(m));
  }
  // -sum_{m=1}^{k-1} d2 Z / dt_m dt_{k-m}
  for (int m = 1; m <= k - 1; ++m) {
    int m2 = k - m;
    if (m > n_vars || m2 > n_vars || m2 < 1) continue;
    out -= retrunc(Z.diff(m - 1).diff(m2 - 1), out_w);
  }
  // -Ntil (alpha~ - beta~ + 1)(1 - d_{k,0} - d_{k,-1}) dZ/dt_k
  if (k >= 1 && k <= n_vars) {
    Rat c = par.Ntil * (par.alpha_til - par.beta_til + 1);
    out -= retrunc(Z.diff(k - 1), out_w).scaled_rat(c);
  }
  // +2 Ntil (1 - d_{k,-1}) dZ/dt_{k+1}
  if (k >= 0 && k + 1 <= n_vars) {
    out += retrunc(Z.diff(k), out_w).scaled_rat(2 * par.Ntil);
  }
  // anomaly +Ntil^2 alpha~ (beta~ - 1) at k=0
  if (k == 0) {
    Rat c = par.Ntil * par.Ntil * par.alpha_til * (par.beta_til - 1);
    out += retrunc(Z, out_w).scaled_rat(c);
  }
  return out;
}

Series<Rat> apply_L1MM(int n, const Rat& M, const Rat& xi2_base, const Series<Rat>& Z) {
  if (n < -1) throw Error("apply_L1MM: n >= -1 required");
  int D = Z.max_weight();
  int n_vars = static_cast<int>(Z.vars()->size());
  // the fixed quadratic base point makes 2 xi2_base d/dxi_{n+2} drop the
  // weight by n+2, which bounds the certified output window
  int out_w = D - n - 2;
  if (out_w < 0) throw Error("apply_L1MM: truncation too small for this n");
  Series<Rat> out = Series<Rat>::zero(Z.vars(), out_w);

  // sum_{m=0}^{n} d2/dxi_m dxi_{n-m} with d/dxi_0 = -M
  if (n == 0) {
    out += retrunc(Z, out_w).scaled_rat(M * M);
  } else if (n >= 1) {
    if (n <= n_vars) out += retrunc(Z.diff(n - 1), out_w).scaled_rat(Rat(-2) * M);
    for (int m = 1; m <= n - 1; ++m) {
      int m2 = n - m;
      if (m > n_vars || m2 > n_vars) continue;
      Series<Rat> d = Z.diff(m - 1).diff(m2 - 1);
      out += retrunc(d, out_w);
    }
  }
  // sum_{m>=1} m xi_m dZ/dxi_{n+m}; xi_2 = xi2_base + s2
  for (int m = 1; m <= n_vars; ++m) {
    int tgt = n + m;
    if (tgt == 0) {
      // m = -n (only n=-1, m=1): m xi_m * (-M) Z
      Series<Rat> t = times_var(retrunc(Z, D), m - 1).scaled_rat(Rat(m) * (-M));
      if (m == 2) t += retrunc(Z, D).scaled_rat(Rat(m) * xi2_base * (-M));
      out += retrunc(t, out_w);
      continue;
    }
    if (tgt < 1 || tgt > n_vars) continue;
    Series<Rat> d = retrunc(Z.diff(tgt - 1), D);
    Series<Rat> t = times_var(d, m - 1).scaled_rat(Rat(m));
    if (m == 2) t += d.scaled_rat(Rat(m) * xi2_base);
    out += retrunc(t, out_w);
  }
  return out;
}

Rat tilde_time_factor(int n, const Rat& alpha) {
  return rat_pow(2 * alpha, n) / Rat(n);
}

namespace {

std::vector<std::vector<Mono>> monomials_by_weight(VarTablePtr vars, int W) {
  std::vector<std::vector<Mono>> out(W + 1);
  Mono m(vars->size(), 0);
  std::function<void(size_t, int)> rec = [&](size_t v, int wleft) {
    if (v == vars->size()) {
      out[W - wleft].push_back(m);
      return;
    }
    int vw = vars->var(v).weight;
    for (int c = 0; c * vw <= wleft; ++c) {
      m[v] = static_cast<uint8_t>(c);
      rec(v + 1, wleft - c * vw);
    }
    m[v] = 0;
  };
  rec(0, W);
  return out;
}

}  // namespace

Series<Rat> reconstruct_two_log_tau(int q, int p, long Ntil, long gamma_n, int W) {
  if (W > Ntil)
    throw Error("reconstruct_two_log_tau: only weights <= number of Miwa points are faithful");
  auto vars = time_vars(W);
  Series<Rat> tau = Series<Rat>::one(vars, W);
  auto mons = monomials_by_weight(vars, W);

  // sample tuples: deterministic distinct positive rationals
  auto tuple_for = [&](int s) {
    std::vector<Rat> lam;
    for (long j = 0; j < Ntil; ++j) lam.push_back(Rat(2 + j) + Rat(s + 1, s + j + 3));
    return lam;
  };

  int n_samples = 0;
  for (int w = 1; w <= W; ++w)
    n_samples = std::max(n_samples, static_cast<int>(mons[w].size()));
  n_samples += 3;

  std::vector<std::vector<Rat>> tuples;
  std::vector<Laurent<Rat>> taus;
  for (int s = 0; s < n_samples; ++s) {
    tuples.push_back(tuple_for(s));
    taus.push_back(two_log_tau_eps(q, p, Ntil, gamma_n, tuples.back(), W));
  }

  for (int w = 1; w <= W; ++w) {
    const auto& ms = mons[w];
    size_t nm = ms.size();
    // rows: samples; columns: monomials; rhs: eps^w coefficient
    std::vector<std::vector<Rat>> A;
    std::vector<Rat> b;
    for (int s = 0; s < n_samples; ++s) {
      std::vector<Rat> row;
      for (const auto& mono : ms) {
        Rat v(1);
        for (int nvar = 1; nvar <= W; ++nvar) {
          int e = mono[nvar - 1];
          if (!e) continue;
          Rat tn(0);  // t~_n on the locus, eps^n stripped
          for (const auto& l : tuples[s]) tn += rat_pow(l, -nvar);
          tn /= Rat(nvar);
          v *= rat_pow(tn, e);
        }
        row.push_back(v);
      }
      A.push_back(std::move(row));
      b.push_back(taus[s].coeff(w));
    }
    // solve the overdetermined exact system by elimination; verify consistency
    std::vector<Rat> x(nm, Rat(0));
    size_t rank = 0;
    std::vector<int> pivot_col;
    for (size_t col = 0; col < nm && rank < A.size(); ++col) {
      size_t piv = rank;
      while (piv < A.size() && A[piv][col] == 0) ++piv;
      if (piv == A.size()) continue;
      std::swap(A[piv], A[rank]);
      std::swap(b[piv], b[rank]);
      Rat d = A[rank][col];
      for (size_t j = 0; j < nm; ++j) A[rank][j] /= d;
      b[rank] /= d;
      for (size_t r = 0; r < A.size(); ++r) {
        if (r == rank || A[r][col] == 0) continue;
        Rat f = A[r][col];
        for (size_t j = 0; j < nm; ++j) A[r][j] -= f * A[rank][j];
        b[r] -= f * b[rank];
      }
      pivot_col.push_back(static_cast<int>(col));
      ++rank;
    }
    if (rank < nm) throw Error("reconstruct_two_log_tau: sample tuples degenerate at weight " +
                               std::to_string(w));
    for (size_t r = 0; r < rank; ++r) x[pivot_col[r]] = b[r];
    for (size_t r = rank; r < A.size(); ++r)
      if (b[r] != 0) throw Error("reconstruct_two_log_tau: inconsistent overdetermined system");
    for (size_t i = 0; i < nm; ++i) tau.add_term(ms[i], x[i]);
  }
  return tau;
}

namespace {

void collect_rows(AnnihilationReport& rep, const Series<Rat>& image, int k, int cert_w) {
  std::map<int, Rat> abs_by_weight;
  for (int w = 0; w <= image.max_weight(); ++w) abs_by_weight[w] = Rat(0);
  for (const auto& [m, c] : image.terms()) {
    int w = image.mono_weight(m);
    abs_by_weight[w] += c > 0 ? c : -c;
  }
  for (const auto& [w, v] : abs_by_weight) {
    bool cert = w <= cert_w;
    rep.rows.push_back({k, w, cert, v});
    if (cert && v != 0) rep.certified_all_zero = false;
  }
}

}  // namespace

AnnihilationReport annihilation_check_v(const Series<Rat>& tau, const VFamilyParams& par,
                                        int k_min, int k_max) {
  AnnihilationReport rep;
  for (int k = k_min; k <= k_max; ++k) {
    Series<Rat> image = apply_V(k, par, tau);
    collect_rows(rep, image, k, image.max_weight());
  }
  return rep;
}

AnnihilationReport annihilation_check_l1mm(const Series<Rat>& Z, const Rat& M,
                                           const Rat& xi2_base, int n_min, int n_max) {
  AnnihilationReport rep;
  for (int n = n_min; n <= n_max; ++n) {
    Series<Rat> image = apply_L1MM(n, M, xi2_base, Z);
    collect_rows(rep, image, n, image.max_weight());
  }
  return rep;
}

std::string AnnihilationReport::to_csv(const std::string& family) const {
  std::ostringstream os;
  os << "family,k,order,certified,residual\n";
  for (const auto& r : rows)
    os << family << "," << r.k << "," << r.order << "," << (r.certified ? 1 : 0) << ","
       << rat_str(r.abs_sum) << "\n";
  return os.str();
}

Rat commutator_defect(int k, int l, const VFamilyParams& par, const Series<Rat>& S) {
  // [V_k, V_l] S vs (l-k) V_{k+l} S on the common certified weight
  Series<Rat> vkl = apply_V(k, par, apply_V(l, par, S));
  Series<Rat> vlk = apply_V(l, par, apply_V(k, par, S));
  Series<Rat> rhs = apply_V(k + l, par, S).scaled_rat(Rat(l - k));
  int W = std::min({vkl.max_weight(), vlk.max_weight(), rhs.max_weight()});
  Series<Rat> lhs = retrunc(vkl, W) - retrunc(vlk, W);
  Series<Rat> diff = lhs - retrunc(rhs, W);
  Rat m(0);
  for (const auto& [mono, c] : diff.terms()) {
    Rat a = c > 0 ? c : -c;
    if (a > m) m = a;
  }
  return m;
}

}  // namespace dlab
