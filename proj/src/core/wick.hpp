#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "perm.hpp"
#include "qpoly.hpp"
#include "rat.hpp"
#include "series.hpp"

namespace dlab {

// <tr Y^{k_1} ... tr Y^{k_n}> for the Hermitian Gaussian with propagator
// <Y_ab Y_cd> = w d_ad d_bc. Returned as a polynomial in the matrix size M
// (lowest power first), already scaled by w^{(sum k)/2}. Zero for odd sum.
QPoly gaussian_trace_moment(const std::vector<int>& powers, const Rat& w);

// number of pair partitions of n elements, (n-1)!! for even n
Int pair_partition_count(int n);

// Formal 1MM series about the Gaussian point: variables x1, s2, x3, ..., xD
// (weight k each; s2 is the shift of the quadratic time around xi2_base).
// Z = sum over insertions of prod (-xi_k)^{m_k}/m_k! <...>_w with
// w = 1/(2*xi2_base). M is the (numeric) matrix size.
Series<Rat> onematrix_series(const Rat& xi2_base, const Rat& M, int D);

// Appell family for the e^{-x^2/2} convention:
// integral x^s e^{x mu - x^2/2} dx = sqrt(2 pi) e^{mu^2/2} B_s(mu).
// B_0 = 1, B_1 = mu, B_s = mu B_{s-1} + (s-1) B_{s-2}.
QPoly appell_b(int s);

// The different-sizes determinant identity under the fixed e^{-x^2/2}
// convention: E_{w=-1}[prod_j det(mu_j - Y_{MxM})] minus
// det||B_{M+j1-1}(mu_{j2})|| / Delta(mu), both sides times prod mu_j^{-M}.
// Exact; returns the residual (expected 0).
Rat different_sizes_identity_check(int N, int M, const std::vector<Rat>& mus);

// Both sides separately, for reporting.
struct DifferentSizesReport {
  Rat lhs;  // determinant side
  Rat rhs;  // Wick side
  Rat residual;
};
DifferentSizesReport different_sizes_identity(int N, int M, const std::vector<Rat>& mus);

// ---- Appendix A Monte Carlo ------------------------------------------------

struct McConfig {
  uint64_t samples = 1000000;
  uint64_t seed = 1;
  int alpha_n = 1;  // columns of R
  int gamma_n = 2;  // rows of R
  Rat N = 1;
};

enum class McObservable { TrRbarR, TrRbarRSquared };

struct McResult {
  double estimate = 0;
  double stderr_est = 0;
  double exact = 0;
  double z_score = 0;
};

// exact eigenvalue-measure integral of the observable under
// Delta(x)^2 prod x^{(gamma-alpha)N} e^{-N sum x} on [0,inf)^{alphaN},
// expanded symbolically into Gamma moments (alphaN <= 4)
Rat jacobian_exact_moment(int alpha_n, int gamma_n, const Rat& N, McObservable obs);

McResult jacobian_mc_check(const McConfig& cfg, McObservable obs);

// counter-based deterministic stream, reproducible by (seed, stream, counter)
double mc_uniform(uint64_t seed, uint64_t stream, uint64_t counter);

}  // namespace dlab
