#include "wick.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

namespace dlab {

namespace {

constexpr int kMaxHalfEdges = 16;  // 2,027,025 pairings

// walk nu∘pi cycles; nu given as successor array on half-edges
int face_count(const std::vector<int>& nu, const std::vector<int>& match) {
  int n = static_cast<int>(nu.size());
  std::vector<bool> seen(n, false);
  int faces = 0;
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    ++faces;
    int j = i;
    do {
      seen[j] = true;
      j = nu[match[j]];
    } while (j != i);
  }
  return faces;
}

void pairings_rec(std::vector<int>& match, const std::vector<int>& nu, std::vector<Int>& by_loops) {
  int n = static_cast<int>(match.size());
  int first = -1;
  for (int i = 0; i < n; ++i)
    if (match[i] < 0) {
      first = i;
      break;
    }
  if (first < 0) {
    int f = face_count(nu, match);
    by_loops[f] += 1;
    return;
  }
  for (int j = first + 1; j < n; ++j) {
    if (match[j] >= 0) continue;
    match[first] = j;
    match[j] = first;
    pairings_rec(match, nu, by_loops);
    match[first] = -1;
    match[j] = -1;
  }
}

}  // namespace

QPoly gaussian_trace_moment(const std::vector<int>& powers, const Rat& w) {
  int n = 0;
  for (int k : powers) {
    if (k < 1) throw Error("gaussian_trace_moment: powers must be positive");
    n += k;
  }
  if (n % 2 != 0) return QPoly();
  if (n > kMaxHalfEdges) throw Error("gaussian_trace_moment: more than 16 half-edges");
  if (n == 0) return QPoly::constant(Rat(1));

  std::vector<int> nu(n);
  int base = 0;
  for (int k : powers) {
    for (int i = 0; i < k; ++i) nu[base + i] = base + (i + 1) % k;
    base += k;
  }
  std::vector<int> match(n, -1);
  std::vector<Int> by_loops(n + 2, 0);
  pairings_rec(match, nu, by_loops);

  Rat wpow = rat_pow(w, n / 2);
  std::vector<Rat> coeffs(n + 2, Rat(0));
  int top = 0;
  for (int f = 0; f <= n + 1; ++f) {
    if (by_loops[f] != 0) {
      coeffs[f] = Rat(by_loops[f]) * wpow;
      top = f;
    }
  }
  coeffs.resize(top + 1);
  return QPoly(std::move(coeffs));
}

Int pair_partition_count(int n) {
  if (n % 2 != 0) return 0;
  Int c = 1;
  for (int k = n - 1; k >= 1; k -= 2) c *= k;
  return c;
}

Series<Rat> onematrix_series(const Rat& xi2_base, const Rat& M, int D) {
  if (xi2_base == 0) throw Error("onematrix_series: missing Gaussian part");
  Rat w = Rat(1) / (2 * xi2_base);
  std::vector<Var> vars;
  for (int k = 1; k <= D; ++k)
    vars.push_back({k == 2 ? std::string("s2") : "x" + std::to_string(k), k});
  auto vt = make_vars(std::move(vars));
  Series<Rat> out(vt, D);

  // enumerate multi-indices m_1..m_D with sum k*m_k <= D
  std::vector<int> m(D + 1, 0);
  std::function<void(int, int)> rec = [&](int k, int wleft) {
    if (k > D) {
      std::vector<int> powers;
      Rat factor(1);
      for (int j = 1; j <= D; ++j) {
        for (int c = 0; c < m[j]; ++c) powers.push_back(j);
        if (m[j]) {
          Rat f = rat_pow(Rat(-1), m[j]) / Rat(factorial(m[j]));
          factor *= f;
        }
      }
      QPoly mom = gaussian_trace_moment(powers, w);
      Rat val = mom.eval(M) * factor;
      if (val != 0) {
        Mono mono(D, 0);
        for (int j = 1; j <= D; ++j) mono[j - 1] = static_cast<uint8_t>(m[j]);
        out.add_term(mono, val);
      }
      return;
    }
    for (int c = 0; c * k <= wleft; ++c) {
      m[k] = c;
      rec(k + 1, wleft - c * k);
    }
    m[k] = 0;
  };
  rec(1, D);
  return out;
}

QPoly appell_b(int s) {
  QPoly b0 = QPoly::constant(Rat(1));
  if (s == 0) return b0;
  QPoly b1({Rat(0), Rat(1)});
  if (s == 1) return b1;
  QPoly mu({Rat(0), Rat(1)});
  for (int k = 2; k <= s; ++k) {
    QPoly next = mu * b1 + b0.scaled(Rat(k - 1));
    b0 = std::move(b1);
    b1 = std::move(next);
  }
  return b1;
}

namespace {

Rat det_rat(std::vector<std::vector<Rat>> a) {
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

// polynomial in power sums: multiset of trace powers -> coefficient
using TracePoly = std::map<Partition, Rat>;

TracePoly tp_scale(const TracePoly& a, const Rat& s) {
  TracePoly r;
  if (s == 0) return r;
  for (const auto& [k, v] : a) r[k] = v * s;
  return r;
}

void tp_add(TracePoly& a, const TracePoly& b, const Rat& s = Rat(1)) {
  for (const auto& [k, v] : b) {
    Rat& slot = a[k];
    slot += v * s;
    if (slot == 0) a.erase(k);
  }
}

TracePoly tp_mul(const TracePoly& a, const TracePoly& b) {
  TracePoly r;
  for (const auto& [ka, va] : a)
    for (const auto& [kb, vb] : b) {
      Partition k(ka);
      k.insert(k.end(), kb.begin(), kb.end());
      std::sort(k.rbegin(), k.rend());
      Rat& slot = r[k];
      slot += va * vb;
      if (slot == 0) r.erase(k);
    }
  return r;
}

// elementary symmetric e_k of eigenvalues as TracePoly via Newton's identities
std::vector<TracePoly> elementary_in_traces(int kmax) {
  std::vector<TracePoly> e(kmax + 1);
  e[0][{}] = Rat(1);
  for (int k = 1; k <= kmax; ++k) {
    TracePoly acc;
    for (int i = 1; i <= k; ++i) {
      TracePoly pi;
      pi[Partition{static_cast<uint8_t>(i)}] = Rat(1);
      TracePoly term = tp_mul(e[k - i], pi);
      tp_add(acc, term, (i % 2) ? Rat(1) : Rat(-1));
    }
    e[k] = tp_scale(acc, Rat(1, k));
  }
  return e;
}

Rat tp_expectation(const TracePoly& p, const Rat& M, const Rat& w) {
  Rat out(0);
  for (const auto& [word, c] : p) {
    std::vector<int> powers(word.begin(), word.end());
    out += c * gaussian_trace_moment(powers, w).eval(M);
  }
  return out;
}

}  // namespace

DifferentSizesReport different_sizes_identity(int N, int M, const std::vector<Rat>& mus) {
  if (static_cast<int>(mus.size()) != N) throw Error("different_sizes: need N mu values");
  for (size_t i = 0; i < mus.size(); ++i)
    for (size_t j = i + 1; j < mus.size(); ++j)
      if (mus[i] == mus[j]) throw Error("different_sizes: coincident mu values");

  // determinant side: det || B_{M+j1-1}(mu_{j2}) || / Delta(mu)
  Rat lhs;
  if (N == 0) {
    lhs = Rat(1);
  } else {
    std::vector<std::vector<Rat>> a(N, std::vector<Rat>(N));
    for (int r = 0; r < N; ++r) {
      QPoly b = appell_b(M + r);
      for (int c = 0; c < N; ++c) a[r][c] = b.eval(mus[c]);
    }
    Rat vdm(1);
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j) vdm *= (mus[j] - mus[i]);
    lhs = det_rat(a) / vdm;
  }

  // Wick side: E_{w=-1}[ prod_j det(mu_j - Y) ], Y of size M
  auto e = elementary_in_traces(M);
  TracePoly prod;
  prod[{}] = Rat(1);
  for (int j = 0; j < N; ++j) {
    TracePoly dj;
    for (int k = 0; k <= M; ++k) {
      Rat c = rat_pow(mus[j], M - k) * ((k % 2) ? Rat(-1) : Rat(1));
      tp_add(dj, e[k], c);
    }
    prod = tp_mul(prod, dj);
  }
  Rat rhs = tp_expectation(prod, Rat(M), Rat(-1));

  Rat scale(1);
  for (const auto& mu : mus) scale *= rat_pow(mu, -static_cast<long>(M));
  DifferentSizesReport rep;
  rep.lhs = lhs * scale;
  rep.rhs = rhs * scale;
  rep.residual = rep.lhs - rep.rhs;
  return rep;
}

Rat different_sizes_identity_check(int N, int M, const std::vector<Rat>& mus) {
  return different_sizes_identity(N, M, mus).residual;
}

// ---- Appendix A ------------------------------------------------------------

Rat jacobian_exact_moment(int alpha_n, int gamma_n, const Rat& N, McObservable obs) {
  int n = alpha_n;
  int q = gamma_n - alpha_n;
  if (n < 1 || n > 4 || q < 0) throw Error("jacobian_exact_moment: size violation");
  int s = obs == McObservable::TrRbarR ? 1 : 2;

  // permutations of S_n with signs
  std::vector<std::vector<int>> perms;
  std::vector<int> sgn;
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  do {
    int inv = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (idx[i] > idx[j]) ++inv;
    perms.push_back(idx);
    sgn.push_back(inv % 2 ? -1 : 1);
  } while (std::next_permutation(idx.begin(), idx.end()));

  auto gamma_int = [&](long a) -> Rat {  // integral_0^inf x^a e^{-Nx} dx
    return Rat(factorial(static_cast<unsigned>(a))) / rat_pow(N, a + 1);
  };

  Rat z0(0), zs(0);
  for (size_t p = 0; p < perms.size(); ++p) {
    for (size_t t = 0; t < perms.size(); ++t) {
      Rat sign = Rat(sgn[p] * sgn[t]);
      // base exponents per variable
      std::vector<long> a(n);
      for (int i = 0; i < n; ++i) a[i] = q + perms[p][i] + perms[t][i];
      Rat base(1);
      for (int i = 0; i < n; ++i) base *= gamma_int(a[i]);
      z0 += sign * base;
      // observable sum_i x_i^s inserted
      for (int i = 0; i < n; ++i) {
        Rat term(1);
        for (int j = 0; j < n; ++j) term *= gamma_int(a[j] + (j == i ? s : 0));
        zs += sign * term;
      }
    }
  }
  if (z0 == 0) throw Error("jacobian_exact_moment: degenerate normalization");
  return zs / z0;
}

namespace {

inline uint64_t splitmix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

double mc_uniform(uint64_t seed, uint64_t stream, uint64_t counter) {
  uint64_t x = splitmix64(seed ^ splitmix64(stream ^ splitmix64(counter)));
  return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

McResult jacobian_mc_check(const McConfig& cfg, McObservable obs) {
  int rows = cfg.gamma_n, cols = cfg.alpha_n;
  if (cols < 1 || rows < cols) throw Error("jacobian_mc_check: need gammaN >= alphaN >= 1");
  double Nd = cfg.N.get_d();
  double sigma = std::sqrt(1.0 / (2.0 * Nd));  // per real component

  const uint64_t entries = static_cast<uint64_t>(rows) * cols;
  const uint64_t block = 4096;
  const uint64_t nblocks = (cfg.samples + block - 1) / block;

  struct BlockSum {
    double s = 0, s2 = 0;
    uint64_t n = 0;
  };
  std::vector<BlockSum> sums(nblocks);

  auto run_block = [&](uint64_t b) {
    BlockSum bs;
    uint64_t lo = b * block, hi = std::min<uint64_t>(cfg.samples, lo + block);
    std::vector<std::vector<std::pair<double, double>>> R(rows,
        std::vector<std::pair<double, double>>(cols));
    for (uint64_t s = lo; s < hi; ++s) {
      uint64_t ctr = s * entries * 2;
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
          double u1 = mc_uniform(cfg.seed, 17, ctr++);
          double u2 = mc_uniform(cfg.seed, 17, ctr++);
          double rad = sigma * std::sqrt(-2.0 * std::log(u1));
          R[r][c] = {rad * std::cos(2 * M_PI * u2), rad * std::sin(2 * M_PI * u2)};
        }
      double val = 0;
      if (obs == McObservable::TrRbarR) {
        for (int r = 0; r < rows; ++r)
          for (int c = 0; c < cols; ++c)
            val += R[r][c].first * R[r][c].first + R[r][c].second * R[r][c].second;
      } else {
        // W = R^dagger R (cols x cols), tr W^2 = sum |W_ij|^2
        for (int i = 0; i < cols; ++i)
          for (int j = 0; j < cols; ++j) {
            double re = 0, im = 0;
            for (int r = 0; r < rows; ++r) {
              // W_ij = sum_r conj(R_ri) R_rj
              double ar = R[r][i].first, ai = -R[r][i].second;
              double br = R[r][j].first, bi = R[r][j].second;
              re += ar * br - ai * bi;
              im += ar * bi + ai * br;
            }
            val += re * re + im * im;
          }
      }
      bs.s += val;
      bs.s2 += val * val;
      bs.n += 1;
    }
    sums[b] = bs;
  };

  unsigned nthreads = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<uint64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      uint64_t b = next.fetch_add(1);
      if (b >= nblocks) break;
      run_block(b);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  double s = 0, s2 = 0;
  uint64_t n = 0;
  for (const auto& bs : sums) {  // fixed merge order
    s += bs.s;
    s2 += bs.s2;
    n += bs.n;
  }
  McResult res;
  res.estimate = s / static_cast<double>(n);
  double var = s2 / static_cast<double>(n) - res.estimate * res.estimate;
  res.stderr_est = std::sqrt(var / static_cast<double>(n));
  res.exact = jacobian_exact_moment(cfg.alpha_n, cfg.gamma_n, cfg.N, obs).get_d();
  res.z_score = (res.estimate - res.exact) / res.stderr_est;
  return res;
}

}  // namespace dlab
