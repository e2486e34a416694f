#pragma once

#include <vector>

#include "rat.hpp"
#include "series.hpp"

namespace dlab {

// Operators act on series in times t_1..t_D, weight(t_n) = n. The derivative
// with respect to t_0 is identically zero in the V family (the printed m=k
// term of the double sum and the k=-1 bracket term cancel with it).
struct VFamilyParams {
  Rat Ntil;       // alpha N
  Rat alpha_til;  // beta / alpha
  Rat beta_til;   // 1 - gamma / alpha
};

// V_k, k >= -1; output certified to weight D - k - 1 (k >= 0), D for k = -1.
Series<Rat> apply_V(int k, const VFamilyParams& par, const Series<Rat>& Z);

// L_n of the 1MM, n >= -1, in times xi_1, xi_2 = xi2_base + s2, xi_3, ...;
// the convention d/dxi_0 = -M. The quadratic base point lowers the grading,
// so the output is certified to weight D - n - 2.
Series<Rat> apply_L1MM(int n, const Rat& M, const Rat& xi2_base, const Series<Rat>& Z);

// time-convention ledger: t~_n = (2 alpha)^n t_n / n for lt = 1/(2 alpha |lambda|^2)
Rat tilde_time_factor(int n, const Rat& alpha);

// tau(t~) of the two-log model reconstructed to monomial weight W from the
// exact determinant form on W-point Miwa tuples; gamma_n is gamma N.
Series<Rat> reconstruct_two_log_tau(int q, int p, long Ntil, long gamma_n, int W);

struct ResidualRow {
  int k;
  int order;        // monomial weight in the image series
  bool certified;   // within the certification window
  Rat abs_sum;      // sum of |coefficients| at this weight (0 iff all vanish)
};

struct AnnihilationReport {
  std::vector<ResidualRow> rows;
  bool certified_all_zero = true;
  std::string to_csv(const std::string& family) const;
};

AnnihilationReport annihilation_check_v(const Series<Rat>& tau, const VFamilyParams& par,
                                        int k_min, int k_max);
AnnihilationReport annihilation_check_l1mm(const Series<Rat>& Z, const Rat& M,
                                           const Rat& xi2_base, int n_min, int n_max);

// max |coeff| difference between [V_k,V_l] S and (l-k) V_{k+l} S up to the
// common certified weight; exact zero expected
Rat commutator_defect(int k, int l, const VFamilyParams& par, const Series<Rat>& S);

}  // namespace dlab
