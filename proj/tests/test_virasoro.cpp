#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/virasoro.hpp"
#include "core/wick.hpp"

using namespace dlab;

namespace {

Series<Rat> random_series(VarTablePtr vars, int D, long seed) {
  Series<Rat> s = Series<Rat>::one(vars, D);
  Mono m(vars->size(), 0);
  std::function<void(size_t, int)> rec = [&](size_t v, int wleft) {
    if (v == vars->size()) {
      seed = (seed * 48271) % 2147483647;
      s.add_term(m, Rat(seed % 13 - 6, 1 + seed % 4));
      return;
    }
    int vw = vars->var(v).weight;
    for (int c = 0; c * vw <= wleft; ++c) {
      m[v] = static_cast<uint8_t>(c);
      rec(v + 1, wleft - c * vw);
      m[v] = 0;
    }
  };
  rec(0, D);
  return s;
}

}  // namespace

TEST_CASE("V_0 on the constant series keeps only the anomaly") {
  VFamilyParams par{Rat(3), Rat(1, 2), Rat(1, 3)};
  auto vars = time_vars(4);
  Series<Rat> one = Series<Rat>::one(vars, 4);
  Series<Rat> img = apply_V(0, par, one);
  // Ntil^2 alpha~ (beta~ - 1)
  Rat expect = Rat(9) * Rat(1, 2) * (Rat(1, 3) - 1);
  CHECK(img.constant_term() == expect);
}

TEST_CASE("operators are linear") {
  VFamilyParams par{Rat(2), Rat(-1, 2), Rat(-1, 2)};
  auto vars = time_vars(6);
  auto Z1 = random_series(vars, 6, 5);
  auto Z2 = random_series(vars, 6, 9);
  for (int k : {-1, 0, 1, 2}) {
    auto lhs = apply_V(k, par, Z1.scaled_rat(Rat(3)) + Z2.scaled_rat(Rat(-2)));
    auto rhs = apply_V(k, par, Z1).scaled_rat(Rat(3)) + apply_V(k, par, Z2).scaled_rat(Rat(-2));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("commutator identity [V_k, V_l] = (l-k) V_{k+l} for k, l >= 0") {
  VFamilyParams par{Rat(2), Rat(-1, 2), Rat(-1, 2)};
  auto vars = time_vars(9);
  auto S = random_series(vars, 9, 23);
  for (int k = 0; k <= 2; ++k)
    for (int l = k + 1; l <= 3 - k; ++l) {
      CAPTURE(k);
      CAPTURE(l);
      CHECK(commutator_defect(k, l, par, S) == 0);
    }
  // second parameter set
  VFamilyParams par2{Rat(3), Rat(2, 5), Rat(-1, 7)};
  for (int k : {0, 1, 2})
    for (int l : {1, 2}) {
      if (l <= k) continue;
      CHECK(commutator_defect(k, l, par2, S) == 0);
    }
  // at k = -1 the printed operator (with the t1 d/dt0 terms canceling) cannot
  // reproduce the k=0 anomaly in [V_{-1}, V_1] = 2 V_0; the repair lives in
  // the rho-shifted family, which is out of scope. Document the defect value.
  Rat defect = commutator_defect(-1, 1, par, S);
  CHECK(defect != 0);
}

TEST_CASE("L1MM annihilates the wick one-matrix series") {
  // internal weight 6 certifies residual orders <= 6-n-2 for n <= 3
  for (Rat M : {Rat(1), Rat(2), Rat(3)}) {
    Series<Rat> Z = onematrix_series(Rat(1, 2), M, 6);
    auto rep = annihilation_check_l1mm(Z, M, Rat(1, 2), -1, 3);
    CHECK(rep.certified_all_zero);
    bool has_content = false;
    for (const auto& row : rep.rows)
      if (row.k == 3 && row.certified) has_content = true;
    CHECK(has_content);
  }
  // different gaussian base point
  Series<Rat> Z = onematrix_series(Rat(1, 3), Rat(2), 6);
  auto rep = annihilation_check_l1mm(Z, Rat(2), Rat(1, 3), -1, 3);
  CHECK(rep.certified_all_zero);
}

TEST_CASE("L1MM detects a corrupted series") {
  Series<Rat> Z = onematrix_series(Rat(1, 2), Rat(2), 6);
  Mono m(6, 0);
  m[0] = 2;  // perturb the xi1^2 coefficient
  Z.add_term(m, Rat(1, 7));
  auto rep = annihilation_check_l1mm(Z, Rat(2), Rat(1, 2), 0, 2);
  CHECK_FALSE(rep.certified_all_zero);
}

TEST_CASE("tilde time conversion ledger") {
  // t~_n = (2 alpha)^n t_n / n: for lt = 1/(2 alpha lambda^2),
  // (1/n) lt^{-n} = (2 alpha)^n lambda^{2n} / n
  Rat alpha(3, 2), lambda(2);
  for (int n = 1; n <= 4; ++n) {
    Rat lt = Rat(1) / (2 * alpha * lambda * lambda);
    Rat tilde_time = rat_pow(lt, -n) / Rat(n);
    Rat dessin_time = rat_pow(lambda, 2 * n);  // one Miwa point
    CHECK(tilde_time == tilde_time_factor(n, alpha) * dessin_time);
  }
}

TEST_CASE("reconstructed two-log tau is annihilated by V_k") {
  // criterion-3 fixture at Ntil = 2 (alpha=2, gamma=3, beta=-1, N=1)
  Series<Rat> tau2 = reconstruct_two_log_tau(1, 1, 2, 3, 2);
  CHECK(tau2.constant_term() == 1);
  VFamilyParams p2{Rat(2), Rat(-1, 2), Rat(-1, 2)};
  auto rep = annihilation_check_v(tau2, p2, 1, 1);
  CHECK(rep.certified_all_zero);

  // Ntil = 4 fixture (alpha=4, gamma=5, beta=-1, N=1) certifies k=1..3
  Series<Rat> tau4 = reconstruct_two_log_tau(1, 1, 4, 5, 4);
  VFamilyParams p4{Rat(4), Rat(-1, 4), Rat(-1, 4)};
  auto rep4 = annihilation_check_v(tau4, p4, 1, 3);
  CHECK(rep4.certified_all_zero);

  // k=0 anomaly balance (reported in acceptance; exact here)
  auto rep0 = annihilation_check_v(tau4, p4, 0, 0);
  CHECK(rep0.certified_all_zero);
}

TEST_CASE("corrupted tau fails the V-family check") {
  Series<Rat> tau = reconstruct_two_log_tau(1, 1, 2, 3, 2);
  Mono m(2, 0);
  m[1] = 1;  // t2 coefficient
  tau.add_term(m, Rat(1, 5));
  VFamilyParams p2{Rat(2), Rat(-1, 2), Rat(-1, 2)};
  auto rep = annihilation_check_v(tau, p2, 1, 1);
  CHECK_FALSE(rep.certified_all_zero);
}

TEST_CASE("residual csv table") {
  Series<Rat> Z = onematrix_series(Rat(1, 2), Rat(1), 6);
  auto rep = annihilation_check_l1mm(Z, Rat(1), Rat(1, 2), 0, 1);
  std::string csv = rep.to_csv("L1MM");
  CHECK(csv.find("family,k,order,certified,residual") == 0);
  CHECK(csv.find("L1MM,0,") != std::string::npos);
}
