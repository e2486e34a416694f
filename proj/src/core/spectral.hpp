#pragma once

#include <optional>
#include <vector>

#include "bigfloat.hpp"
#include "dessin_count.hpp"
#include "series.hpp"

namespace dlab {

// Two one-cut regimes. XPicture is the log-potential model in the BBbar
// eigenvalue plane, U'(x)/N = (1-t1) - t2 x - ... (needs beta != gamma, soft
// edge b > 0). Symmetric is the beta == gamma case in the symmetrized
// (singular-value) plane, U'(u)/N = u - sum_r t_r u^{2r-1}, cut [-a, a].
enum class CurveRegime { XPicture, Symmetric };

template <class R>
struct SpectralCurve {
  CurveRegime regime;
  Rat beta, gamma;
  VarTablePtr tvars;
  int D;

  Series<R> s;  // (a+b)/2
  Series<R> p;  // a b
  Series<R> c;  // signed sqrt(ab) from the first constraint (XPicture only)
  Series<R> a, b, halfwidth;

  std::vector<Series<R>> ucoef;  // U'(w)/N = sum_j ucoef[j] w^j

  // large-x expansion data of yhat = (B(x) + e/x) sqrt((x-a)(x-b))
  std::vector<Series<R>> yexp;   // yexp[m] = [x^{-m}] yhat, m = 1..
  std::vector<Series<R>> bpoly;  // B(x) coefficients
  Series<R> epole;               // e = (beta-gamma)/c, zero in Symmetric

  Series<R> eq1_residual, eq2_residual;
};

template <class R>
SpectralCurve<R> solve_branch_points(const Rat& beta, const Rat& gamma, int D,
                                     CurveRegime regime, int extra_orders = 8);

// [w^{-1}] of f(w) w^k / sqrt((w-a)(w-b)) for polynomial f (h-coefficient
// machinery); a, b given through s=(a+b)/2 and p=ab.
template <class R>
Series<R> residue_expansion(const std::vector<Series<R>>& fcoef, const Series<R>& s,
                            const Series<R>& p, int k);

// dF0/dt_r as a series in times, r = 1..r_max
template <class R>
std::vector<Series<R>> genus0_derivatives(const SpectralCurve<R>& curve, int r_max);

// moments (times form), overall factor N stripped
template <class R>
struct MomentPair {
  Series<R> M, J;
};
template <class R>
MomentPair<R> curve_moments(const SpectralCurve<R>& curve, int r);

// F1(t) - F1(0)
template <class R>
Series<R> f1_delta(const SpectralCurve<R>& curve);

// value of -1/24 log[M1 J1 (a-b)^4] at t = 0
BigFloat f1_t0_value(const SpectralCurve<BigFloat>& curve);

// F0(t) - F0(0) by the contour construction (independent of the moment route)
struct F0ContourParts {
  Series<BigFloat> ares, ilogx, zeta, t0;
};
Series<BigFloat> f0_via_contour(const SpectralCurve<BigFloat>& curve,
                                F0ContourParts* parts = nullptr);

// ---- Miwa-form numerics ------------------------------------------------------

struct MiwaCurve {
  BigFloat a, b;
  std::vector<BigFloat> lambdas_tilde;
  Rat alpha, beta, gamma, N;
  BigFloat eq1_residual, eq2_residual;
};

// solve the lambda-tilde-space constraints for the branch points; seeds from
// the large-lambda closed form
MiwaCurve solve_branch_points_miwa(const Rat& alpha, const Rat& beta, const Rat& gamma,
                                   const Rat& N, const std::vector<BigFloat>& lambdas_tilde,
                                   mpfr_prec_t prec = 256);

// moments in the Miwa form (paper normalization, includes N)
std::pair<BigFloat, BigFloat> moments_miwa(const MiwaCurve& mc, int r);

// scale dictionary between the x-plane times form and the lambda-tilde Miwa
// form: M_r(miwa) = (2 alpha)^{r+1} * N * M_r(times, per-N), same for J.
BigFloat moment_scale_times_to_miwa(int r, const Rat& alpha, const Rat& N);

// closed-form genus-zero free energy at the Miwa point, transcribed from the
// printed expression and normalized to vanish for large lambda-tilde. The
// printed formula carries a genuine O(1/lambda-tilde) defect relative to the
// enumeration (leading term (gamma-beta)^2/4 * sum|lambda|^2, verified by
// expanding the printed terms on the large-lambda curve); see f0_miwa_from_curve
// for the corrected value.
BigFloat f0_closed(const MiwaCurve& mc);

// corrected closed genus-zero value at the Miwa point: the contour free energy
// of the times-form curve evaluated at t_r = sum (eps lam)^{2r}, truncation D
BigFloat f0_miwa_from_curve(const Rat& beta, const Rat& gamma, const Rat& eps,
                            const std::vector<Rat>& lam_hat, int D);

// ---- helpers shared with tests -------------------------------------------------

template <class R>
Series<R> series_sqrt(const Series<R>& S, const R& seed);

Series<BigFloat> series_log_pos(const Series<BigFloat>& S);

template <class R>
Series<R> to_ring(const Series<Rat>& src, VarTablePtr vars);

// oracle genus bucket as a plain series in t at numeric (beta, gamma)
Series<Rat> gf_genus_series(const GenFun& gf, int genus, const Rat& beta, const Rat& gamma,
                            VarTablePtr tvars, int D);

}  // namespace dlab
