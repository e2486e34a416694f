#pragma once

#include <map>
#include <string>
#include <vector>

#include "param_poly.hpp"
#include "perm.hpp"
#include "series.hpp"

namespace dlab {

enum class CountFilter { All, CleanStrict, CleanLoose, TwoProfile };

CountFilter count_filter_from_string(const std::string& s);
std::string count_filter_name(CountFilter f);

struct CountCaps {
  int d_max_all = 9;
  int d_max_two_profile = 7;
};

// One monomial bucket of the generating function.
//   chi        Euler characteristic exponent of N (2-2g per connected graph,
//              additive over components in the all-pairs sum)
//   face_type  cycle type of sigma_infinity (the t-monomial)
//   one_type   cycle type of sigma_1 (TwoProfile only, the t-frak monomial)
struct GFKey {
  int chi;
  Partition face_type;
  Partition one_type;
  bool operator<(const GFKey& o) const {
    if (chi != o.chi) return chi < o.chi;
    if (face_type != o.face_type) return face_type < o.face_type;
    return one_type < o.one_type;
  }
  bool operator==(const GFKey& o) const {
    return chi == o.chi && face_type == o.face_type && one_type == o.one_type;
  }
};

// Exact generating function up to degree d_max. Coefficients are polynomials
// in beta (counting sigma_1 cycles) and gamma (counting sigma_0 cycles); in
// TwoProfile mode beta does not appear and sigma_1 cycles become one_type.
struct GenFun {
  int d_max = 0;
  CountFilter filter = CountFilter::All;
  bool connected = true;
  std::map<GFKey, ParamPoly> coeff;

  // genus buckets (connected case; throws if a key has odd 2-chi)
  std::map<int, std::map<GFKey, ParamPoly>> by_genus() const;
};

struct ModelParams {
  Rat N = 1;
  Rat alpha = 1;
  Rat beta = 1;
  Rat gamma = 1;
};

// Eq. (1.1)-style connected sum: weight 1/d! per labeled transitive pair,
// beta^{c(sigma1)} gamma^{c(sigma0)} prod t_{r_i} over cycles r_i of
// sigma_infinity, N^{2-2g} grading in GFKey::chi.
GenFun connected_gf(int d_max, CountFilter filter, const CountCaps& caps = CountCaps());

// Same weights summed over ALL pairs (no transitivity): equals exp of the
// connected sum under the chi-additive grading. Includes the empty graph (1).
GenFun partition_function(int d_max, CountFilter filter, const CountCaps& caps = CountCaps());

// Grading-aware exponential of a connected GenFun (for the identity test).
GenFun gf_exp(const GenFun& connected);

// Swap the roles of beta and gamma in every coefficient.
GenFun gf_swap_params(const GenFun& gf);

// Miwa evaluation: t_r <- sum_i (eps*lambda_i)^{2r}, beta/gamma/N numeric;
// TwoProfile additionally substitutes tfrak_s <- sum_k (eps*mu_k)^{2s} over
// `lambdas_one`. Returns a series in eps, weight(eps)=1, up to eps^{2 d_max}.
Series<Rat> gf_evaluate(const GenFun& gf, const ModelParams& params,
                        const std::vector<Rat>& lambdas,
                        const std::vector<Rat>& lambdas_one = {});

// CSV rows: degree, genus_or_chi, monomial, coefficient (polynomial string).
std::string gf_to_csv(const GenFun& gf);

nlohmann::json gf_to_json(const GenFun& gf);

}  // namespace dlab
