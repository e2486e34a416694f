#include "runner.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "dessin_count.hpp"
#include "gkm.hpp"
#include "spectral.hpp"
#include "virasoro.hpp"
#include "wick.hpp"

namespace dlab {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double secs_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Rat jrat(const json& j, const std::string& key, const Rat& dflt) {
  if (!j.contains(key)) return dflt;
  const auto& v = j.at(key);
  if (v.is_number_integer()) return Rat(v.get<long>());
  if (v.is_string()) return rat_parse(v.get<std::string>());
  throw Error("config field '" + key + "' must be an integer or a rational string");
}

long jint(const json& j, const std::string& key, long dflt) {
  if (!j.contains(key)) return dflt;
  return j.at(key).get<long>();
}

Rat eps_coeff(const Series<Rat>& s, int e) {
  Mono m(1, 0);
  if (e < 0 || e > 255) return Rat(0);
  m[0] = static_cast<uint8_t>(e);
  return s.coeff(m);
}

// ---- shared fixtures ---------------------------------------------------------

struct TwoLogFixture {
  int q, p;
  Rat N, alpha, beta, gamma;
  std::vector<Rat> lam_hat;
  int d_max;
};

// oracle-vs-assembly comparison through eps^{2 d_max}
struct EpsCompare {
  bool exact_equal = true;
  int first_bad = -1;
  std::string detail;
};

EpsCompare compare_two_log(const TwoLogFixture& fx) {
  EpsCompare out;
  GenFun pf = partition_function(fx.d_max, CountFilter::All);
  ModelParams mp{fx.N, fx.alpha, fx.beta, fx.gamma};
  Series<Rat> oracle = gf_evaluate(pf, mp, fx.lam_hat);
  GkmAssembly asmb = gkm_partition_two_log(fx.q, fx.p, fx.N, fx.lam_hat, 2 * fx.d_max);
  for (int e = 0; e <= 2 * fx.d_max; ++e) {
    if (asmb.z.coeff(e) != eps_coeff(oracle, e)) {
      out.exact_equal = false;
      out.first_bad = e;
      break;
    }
  }
  std::ostringstream os;
  os << "q=" << fx.q << " p=" << fx.p << " points=" << fx.lam_hat.size()
     << (out.exact_equal ? " exact match through eps^" + std::to_string(2 * fx.d_max)
                         : " MISMATCH at eps^" + std::to_string(out.first_bad));
  out.detail = os.str();
  return out;
}

// ---- spectral comparisons ------------------------------------------------------

struct SpectralPointCheck {
  Rat beta, gamma;
  double max_delta_g0 = 0, max_delta_g1 = 0;
  bool ok_g0 = false, ok_g1 = false;
};

// compare the x-picture route against oracle buckets at one soft-edge point
SpectralPointCheck check_x_picture_point(const GenFun& conn, const Rat& beta, const Rat& gamma,
                                         int D, double tol) {
  SpectralPointCheck out{beta, gamma};
  auto curve = solve_branch_points<BigFloat>(beta, gamma, D, CurveRegime::XPicture);
  auto tvars = curve.tvars;
  Series<Rat> g0 = gf_genus_series(conn, 0, beta, gamma, tvars, D);
  Series<Rat> g1 = gf_genus_series(conn, 1, beta, gamma, tvars, D);

  auto ders = genus0_derivatives(curve, D);
  BigFloat md(0L);
  for (int r = 1; r <= D; ++r) {
    Series<Rat> target = g0.diff(r - 1);
    Series<BigFloat> got = ders[r - 1];
    Series<BigFloat> tgt = to_ring<BigFloat>(target, tvars);
    // compare on weights <= D - r
    Series<BigFloat> diff = got.truncated(D - r) - tgt.truncated(D - r);
    for (const auto& [m, c] : diff.terms()) {
      BigFloat a = abs(c);
      if (a > md) md = a;
    }
  }
  out.max_delta_g0 = md.to_double();
  out.ok_g0 = md < BigFloat(Rat(1, 1000000000));

  Series<BigFloat> f1 = f1_delta(curve);
  Series<BigFloat> tgt1 = to_ring<BigFloat>(g1, tvars);
  Series<BigFloat> diff1 = f1.truncated(D) - tgt1.truncated(D);
  BigFloat md1(0L);
  for (const auto& [m, c] : diff1.terms()) {
    BigFloat a = abs(c);
    if (a > md1) md1 = a;
  }
  out.max_delta_g1 = md1.to_double();
  out.ok_g1 = md1 < BigFloat(Rat(1, 1000000000));
  (void)tol;
  return out;
}

const std::vector<std::pair<Rat, Rat>>& pinning_points() {
  static const std::vector<std::pair<Rat, Rat>> pts = {
      {Rat(1), Rat(2)}, {Rat(2), Rat(1)}, {Rat(1), Rat(3)}, {Rat(3), Rat(1)},
      {Rat(2), Rat(3)}, {Rat(3), Rat(2)}, {Rat(1), Rat(4)}, {Rat(4), Rat(1)},
      {Rat(2), Rat(5)}, {Rat(5), Rat(2)}};
  return pts;
}

}  // namespace

// ---- acceptance criteria ---------------------------------------------------------

namespace {

CriterionResult criterion_1() {
  auto t0 = Clock::now();
  GenFun gf = connected_gf(1, CountFilter::All);
  ParamPoly expect = ParamPoly::term(Rat(1), 1, 1);  // beta*gamma
  GFKey key{2, Partition{1}, {}};
  bool pass = gf.coeff.count(key) && gf.coeff.at(key) == expect && gf.coeff.size() == 1;
  return {1, "Fig.1 anchor: connected d=1 coefficient of N^2 t1 equals beta*gamma", pass,
          pass ? "coefficient = " + gf.coeff.at(key).str() : "coefficient mismatch",
          secs_since(t0)};
}

CriterionResult criterion_2() {
  auto t0 = Clock::now();
  GenFun c8 = connected_gf(8, CountFilter::All);
  double t8 = secs_since(t0);
  GenFun c6 = connected_gf(6, CountFilter::All);
  bool sym = gf_swap_params(c6).coeff == c6.coeff;
  GenFun pf6 = partition_function(6, CountFilter::All);
  bool expok = gf_exp(c6).coeff == pf6.coeff;
  bool pass = (t8 < 300.0) && sym && expok && !c8.coeff.empty();
  std::ostringstream os;
  os << "d=8 oracle in " << t8 << "s; beta<->gamma symmetry at d<=6: " << (sym ? "exact" : "FAIL")
     << "; exp(connected)=all-pairs at d<=6: " << (expok ? "exact" : "FAIL");
  return {2, "Oracle scale and structural identities", pass, os.str(), secs_since(t0)};
}

CriterionResult criterion_3() {
  auto t0 = Clock::now();
  TwoLogFixture f1{1, 1, Rat(1), Rat(1), Rat(-1), Rat(2), {Rat(1)}, 4};
  EpsCompare c1 = compare_two_log(f1);
  // closed form 1 - 2 eps^2
  GkmAssembly a1 = gkm_partition_two_log(1, 1, Rat(1), {Rat(1)}, 8);
  bool closed = a1.z.coeff(0) == 1 && a1.z.coeff(1) == 0 && a1.z.coeff(2) == -2;
  for (int e = 3; e <= 8; ++e)
    if (a1.z.coeff(e) != 0) closed = false;
  TwoLogFixture f2a{1, 1, Rat(1), Rat(2), Rat(-1), Rat(3), {Rat(1), Rat(2)}, 5};
  TwoLogFixture f2b{1, 2, Rat(1), Rat(2), Rat(-2), Rat(3), {Rat(1), Rat(2)}, 5};
  EpsCompare c2a = compare_two_log(f2a);
  EpsCompare c2b = compare_two_log(f2b);
  bool pass = c1.exact_equal && closed && c2a.exact_equal && c2b.exact_equal;
  std::ostringstream os;
  os << "fixture1 (N=1,a=1,g=2,b=-1): " << c1.detail << "; e^F=1-2eps^2 closed form: "
     << (closed ? "exact" : "FAIL") << "; fixture2 (a=2,g=3,b=-1): " << c2a.detail
     << "; (b=-2): " << c2b.detail;
  return {3, "End-to-end GKM determinant route vs oracle", pass, os.str(), secs_since(t0)};
}

CriterionResult criterion_4(const GenFun& conn6) {
  auto t0 = Clock::now();
  int D = 6;
  // direct run at (1,2)
  auto p12 = check_x_picture_point(conn6, Rat(1), Rat(2), D, 1e-9);
  // symmetric picture direct genus-0 at (1,1), exact rational route
  bool sym_ok = true;
  {
    auto curve = solve_branch_points<Rat>(Rat(1), Rat(1), D, CurveRegime::Symmetric);
    Series<Rat> g0 = gf_genus_series(conn6, 0, Rat(1), Rat(1), curve.tvars, D);
    auto ders = genus0_derivatives(curve, D);
    for (int r = 1; r <= D; ++r) {
      Series<Rat> target = g0.diff(r - 1).truncated(D - r);
      if (!(ders[r - 1].truncated(D - r) == target)) sym_ok = false;
    }
  }
  // polynomial pinning across soft-edge points
  bool pin_ok = true;
  double worst = 0;
  for (const auto& [b, g] : pinning_points()) {
    auto pc = check_x_picture_point(conn6, b, g, D, 1e-9);
    pin_ok = pin_ok && pc.ok_g0;
    worst = std::max(worst, pc.max_delta_g0);
  }
  bool pass = p12.ok_g0 && sym_ok && pin_ok;
  std::ostringstream os;
  os << "(1,2) direct max|delta|=" << p12.max_delta_g0 << "; (1,1) symmetric-picture exact: "
     << (sym_ok ? "yes" : "FAIL") << "; pinning over " << pinning_points().size()
     << " soft-edge points (homogeneous degree <= 7 per coefficient), worst delta=" << worst
     << " -> (1,1) certified by polynomial identity";
  return {4, "Spectral-curve genus 0 vs oracle, weight <= 6", pass, os.str(), secs_since(t0)};
}

CriterionResult criterion_5(const GenFun& conn6) {
  auto t0 = Clock::now();
  int D = 6;
  auto p12 = check_x_picture_point(conn6, Rat(1), Rat(2), D, 1e-9);
  bool pin_ok = true;
  double worst = 0;
  for (const auto& [b, g] : pinning_points()) {
    auto pc = check_x_picture_point(conn6, b, g, D, 1e-9);
    pin_ok = pin_ok && pc.ok_g1;
    worst = std::max(worst, pc.max_delta_g1);
  }
  // t3 coefficient of the genus-1 bucket must evaluate to 1/3 at (1,1)
  GFKey key{0, Partition{3}, {}};
  bool t3ok = conn6.coeff.count(key) && conn6.coeff.at(key).eval(Rat(1), Rat(1)) == Rat(1, 3);
  bool pass = p12.ok_g1 && pin_ok && t3ok;
  std::ostringstream os;
  os << "(1,2) direct max|delta|=" << p12.max_delta_g1 << "; pinning worst delta=" << worst
     << "; genus-1 t3 coefficient at (1,1) via pinned identity: "
     << (t3ok ? "1/3 confirmed" : "FAIL")
     << " (x-picture degenerates at beta=gamma; certification is by the polynomial identity)";
  return {5, "Genus 1 (Eq. 3.26 route) vs oracle, weight <= 6", pass, os.str(), secs_since(t0)};
}

CriterionResult criterion_6() {
  auto t0 = Clock::now();
  // alpha=1, beta=1, gamma=2, N=1, one Miwa point lambda = eps*1, eps = 1/10
  Rat alpha(1), beta(1), gamma(2), N(1);
  Rat eps(1, 10);
  int d_max = 7;
  GenFun conn8 = connected_gf(8, CountFilter::All);
  ModelParams mp{N, alpha, beta, gamma};
  // genus-0 partial sums: chi = 2 bucket only
  GenFun g0only;
  g0only.d_max = conn8.d_max;
  g0only.filter = conn8.filter;
  g0only.connected = true;
  for (const auto& [k, v] : conn8.coeff)
    if (k.chi == 2) g0only.coeff[k] = v;
  Series<Rat> s = gf_evaluate(g0only, mp, {Rat(1)});
  Rat partial(0);
  for (int d = 1; d <= d_max; ++d) partial += eps_coeff(s, 2 * d) * rat_pow(eps, 2 * d);
  Rat c8 = eps_coeff(s, 16);
  Rat bound = 8 * (c8 > 0 ? c8 : -c8) * rat_pow(eps, 16);

  // corrected closed value: contour free energy at the Miwa times (D=14 keeps
  // the series tail far below the bound)
  BigFloat f0 = f0_miwa_from_curve(beta, gamma, eps, {Rat(1)}, 14);
  BigFloat delta = abs(f0 - BigFloat(partial));
  bool pass = delta < BigFloat(bound);

  // printed Eq. (3.22): transcription carries a genuine O(1/lambda) defect;
  // report its delta transparently (leading term (gamma-beta)^2/4 eps^2)
  BigFloat lt = BigFloat(1L) / (BigFloat(2L) * BigFloat(alpha) * BigFloat(eps * eps));
  MiwaCurve mc = solve_branch_points_miwa(alpha, beta, gamma, N, {lt});
  BigFloat printed_delta = abs(f0_closed(mc) - BigFloat(partial));

  std::ostringstream os;
  os << "corrected closed F0=" << f0.to_decimal(20) << " oracle partial (d<=7)="
     << BigFloat(partial).to_decimal(20) << " |delta|=" << delta.to_decimal(6)
     << " bound 8|c8|eps^16=" << BigFloat(bound).to_decimal(6)
     << "; printed-(3.22) delta=" << printed_delta.to_decimal(6)
     << " (known defect ~(gamma-beta)^2/4 eps^2, documented)";
  return {6, "Closed-form F0 vs oracle partial sums at eps=0.1", pass, os.str(), secs_since(t0)};
}

CriterionResult criterion_7() {
  auto t0 = Clock::now();
  bool pass = true;
  std::ostringstream os;
  std::vector<Rat> pool = {Rat(2), Rat(3), Rat(5)};
  for (int N = 1; N <= 3; ++N)
    for (int M = 1; M <= 3; ++M) {
      std::vector<Rat> mus(pool.begin(), pool.begin() + N);
      Rat r = different_sizes_identity_check(N, M, mus);
      if (r != 0) {
        pass = false;
        os << " FAIL(N=" << N << ",M=" << M << ")";
      }
    }
  if (pass) os << "residual exactly 0 for all (N,M) in {1,2,3}^2";
  return {7, "Different-sizes determinant identity (Eq. 5.9 analogue)", pass, os.str(),
          secs_since(t0)};
}

CriterionResult criterion_8() {
  auto t0 = Clock::now();
  std::ostringstream os;
  bool pass = true;

  // L1MM on the wick series: internal weight 6 certifies orders <= 4-n for
  // every n <= 3 (the fixed quadratic base point costs two weights)
  for (Rat M : {Rat(1), Rat(2)}) {
    Series<Rat> Z = onematrix_series(Rat(1, 2), M, 6);
    auto rep = annihilation_check_l1mm(Z, M, Rat(1, 2), -1, 3);
    if (!rep.certified_all_zero) pass = false;
  }
  os << "L1MM residuals (n<=3, certified through weight 4-n, M in {1,2}): "
     << (pass ? "exactly 0" : "FAIL");

  // commutator identity on a random-ish series
  VFamilyParams par{Rat(2), Rat(-1, 2), Rat(-1, 2)};
  auto vars = time_vars(8);
  Series<Rat> S = Series<Rat>::one(vars, 8);
  {
    // deterministic pseudo-random coefficients
    long seed = 17;
    Mono m(vars->size(), 0);
    std::function<void(size_t, int)> rec = [&](size_t v, int wleft) {
      if (v == vars->size()) {
        seed = (seed * 1103515245 + 12345) % 1000003;
        S.add_term(m, Rat(seed % 19 - 9, 1 + seed % 7));
        return;
      }
      int vw = vars->var(v).weight;
      for (int c = 0; c * vw <= wleft; ++c) {
        m[v] = static_cast<uint8_t>(c);
        rec(v + 1, wleft - c * vw);
        m[v] = 0;
      }
    };
    rec(0, 8);
  }
  bool comm_ok = true;
  for (int k = 0; k <= 2; ++k)
    for (int l = k + 1; l <= 3 - k; ++l)
      if (commutator_defect(k, l, par, S) != 0) comm_ok = false;
  pass = pass && comm_ok;
  os << "; commutators [V_k,V_l]=(l-k)V_{k+l} for k,l in {0,1,2}: "
     << (comm_ok ? "exact" : "FAIL");

  // V-family annihilation on reconstructed two-log tau series
  // criterion-3 fixture (Ntil=2): k=1 has certified orders; the Ntil=4 fixture
  // (N=1, alpha=4, gamma=5, beta=-1, same p=q=1 kernel) certifies k=1..3.
  bool vok = true;
  {
    Series<Rat> tau2 = reconstruct_two_log_tau(1, 1, 2, 3, 2);
    VFamilyParams p2{Rat(2), Rat(-1, 2), Rat(-1, 2)};
    auto rep = annihilation_check_v(tau2, p2, 1, 1);
    if (!rep.certified_all_zero) vok = false;

    Series<Rat> tau2b = reconstruct_two_log_tau(1, 2, 2, 3, 2);  // beta=-2 variant
    VFamilyParams p2b{Rat(2), Rat(-1), Rat(-1, 2)};
    auto repb = annihilation_check_v(tau2b, p2b, 1, 1);
    if (!repb.certified_all_zero) vok = false;

    Series<Rat> tau4 = reconstruct_two_log_tau(1, 1, 4, 5, 4);
    VFamilyParams p4{Rat(4), Rat(-1, 4), Rat(-1, 4)};
    auto rep4 = annihilation_check_v(tau4, p4, 1, 3);
    if (!rep4.certified_all_zero) vok = false;

    // k=0 anomaly: reported, not asserted
    auto rep0 = annihilation_check_v(tau4, p4, 0, 0);
    os << "; V-family k=1..3 on two-log fixtures: " << (vok ? "exactly 0" : "FAIL")
       << " (certified orders only); k=0 anomaly residual: "
       << (rep0.certified_all_zero ? "0 (reported)" : "nonzero (reported)");
  }
  pass = pass && vok;
  return {8, "Virasoro constraints (L1MM and V family)", pass, os.str(), secs_since(t0)};
}

CriterionResult criterion_9() {
  auto t0 = Clock::now();
  auto r1 = sd_equation_check(Rat(1), Rat(-1), Rat(2), Rat(1), {Rat(3)});
  auto r2 = sd_equation_check(Rat(2), Rat(-1), Rat(3), Rat(1), {Rat(2), Rat(3)});
  auto r3 = sd_equation_check(Rat(2), Rat(-2), Rat(3), Rat(1), {Rat(2), Rat(7, 2)});
  bool pass = r1.all_zero && r2.all_zero && r3.all_zero;
  return {9, "Schwinger-Dyson exact residuals (Eq. 3.4)", pass,
          pass ? "residuals exactly 0 for alphaN in {1,2} integer-exponent fixtures"
               : "nonzero residual",
          secs_since(t0)};
}

CriterionResult criterion_10() {
  auto t0 = Clock::now();
  Rat exact12 = jacobian_exact_moment(1, 2, Rat(1), McObservable::TrRbarR);
  bool exact_ok = exact12 == Rat(2);
  bool mc_ok = true;
  double worst_z = 0;
  for (uint64_t seed : {1ull, 2ull, 3ull}) {
    for (auto sizes : std::vector<std::pair<int, int>>{{1, 2}, {2, 3}}) {
      McConfig cfg;
      cfg.samples = 1000000;
      cfg.seed = seed;
      cfg.alpha_n = sizes.first;
      cfg.gamma_n = sizes.second;
      for (auto obs : {McObservable::TrRbarR, McObservable::TrRbarRSquared}) {
        McResult r = jacobian_mc_check(cfg, obs);
        worst_z = std::max(worst_z, std::abs(r.z_score));
        if (std::abs(r.z_score) > 4.0) mc_ok = false;
      }
    }
  }
  bool pass = exact_ok && mc_ok;
  std::ostringstream os;
  os << "E[tr RbarR] at sizes (1,2) = " << rat_str(exact12) << " (expected 2/N); MC worst |z|="
     << worst_z << " over 3 seeds x 2 sizes x 2 observables at 10^6 samples";
  return {10, "Appendix A Jacobian: exact moments and Monte Carlo", pass, os.str(),
          secs_since(t0)};
}

CriterionResult criterion_11() {
  auto t0 = Clock::now();
  // strict clean kernel vs CleanStrict oracle: N=1, alpha=1, gamma=2, beta=-1
  int d_max = 4;
  GenFun pf = partition_function(d_max, CountFilter::CleanStrict);
  ModelParams mp{Rat(1), Rat(1), Rat(-1), Rat(2)};
  Series<Rat> oracle = gf_evaluate(pf, mp, {Rat(1)});
  GkmAssembly asmb = gkm_partition_clean(1, 1, Rat(1), true, {Rat(1)}, 2 * d_max);
  bool pass = true;
  int first_bad = -1;
  for (int e = 0; e <= 2 * d_max; ++e)
    if (asmb.z.coeff(e) != eps_coeff(oracle, e)) {
      pass = false;
      first_bad = e;
      break;
    }
  // alpha-dependence probe at alpha=2 (q=0), same beta,gamma; reported either way
  ModelParams mp2{Rat(1), Rat(2), Rat(-1), Rat(2)};
  Series<Rat> oracle2 = gf_evaluate(pf, mp2, {Rat(1), Rat(2)});
  GkmAssembly asmb2 = gkm_partition_clean(0, 1, Rat(1), true, {Rat(1), Rat(2)}, 2 * d_max);
  bool alpha2_match = true;
  for (int e = 0; e <= 2 * d_max; ++e)
    if (asmb2.z.coeff(e) != eps_coeff(oracle2, e)) alpha2_match = false;
  std::ostringstream os;
  os << "CleanStrict oracle vs strict Kontsevich-Penner kernel through eps^8: "
     << (pass ? "order-by-order exact" : "MISMATCH at eps^" + std::to_string(first_bad))
     << "; alpha=2 probe: " << (alpha2_match ? "matches (no alpha dependence seen)"
                                             : "alpha dependence REPORTED");
  return {11, "Clean Belyi route (Lemma 5.1/5.2)", pass, os.str(), secs_since(t0)};
}

}  // namespace

std::vector<CriterionResult> run_acceptance() {
  std::vector<CriterionResult> out;
  out.push_back(criterion_1());
  out.push_back(criterion_2());
  out.push_back(criterion_3());
  GenFun conn6 = connected_gf(6, CountFilter::All);
  out.push_back(criterion_4(conn6));
  out.push_back(criterion_5(conn6));
  out.push_back(criterion_6());
  out.push_back(criterion_7());
  out.push_back(criterion_8());
  out.push_back(criterion_9());
  out.push_back(criterion_10());
  out.push_back(criterion_11());
  return out;
}

// ---- command dispatch --------------------------------------------------------------

namespace {

json cmd_count(const json& params) {
  int dmax = static_cast<int>(jint(params, "dmax", 4));
  CountFilter filter = count_filter_from_string(
      params.contains("filter") ? params.at("filter").get<std::string>() : "all");
  bool connected = !params.contains("connected") || params.at("connected").get<bool>();
  CountCaps caps;
  GenFun gf = connected ? connected_gf(dmax, filter, caps) : partition_function(dmax, filter, caps);
  json rep;
  rep["command"] = "count";
  rep["dmax"] = dmax;
  rep["filter"] = count_filter_name(filter);
  rep["connected"] = connected;
  rep["csv"] = gf_to_csv(gf);
  rep["series"] = gf_to_json(gf);
  rep["ok"] = true;
  return rep;
}

json cmd_spectral(const json& params) {
  Rat beta = jrat(params, "beta", Rat(1));
  Rat gamma = jrat(params, "gamma", Rat(2));
  int D = static_cast<int>(jint(params, "trunc", 6));
  long prec = jint(params, "precision_bits", 256);
  (void)prec;
  CurveRegime regime = beta == gamma ? CurveRegime::Symmetric : CurveRegime::XPicture;
  auto curve = solve_branch_points<BigFloat>(beta, gamma, D, regime);
  GenFun conn = connected_gf(std::min(D, 6), CountFilter::All);
  json rep;
  rep["command"] = "spectral";
  rep["params"] = {{"beta", rat_str(beta)}, {"gamma", rat_str(gamma)}, {"trunc", D}};
  rep["a"] = curve.a.to_json();
  rep["b"] = curve.b.to_json();
  BigFloat r1(0L), r2(0L);
  for (const auto& [m, c] : curve.eq1_residual.terms()) r1 += abs(c);
  for (const auto& [m, c] : curve.eq2_residual.terms()) r2 += abs(c);
  rep["residual_norms"] = {r1.to_decimal(8), r2.to_decimal(8)};
  rep["F1_series"] = f1_delta(curve).to_json();
  rep["F0_series"] = f0_via_contour(curve).to_json();
  auto pc = check_x_picture_point(conn, beta, gamma, std::min(D, 6), 1e-9);
  rep["comparison_vs_oracle"] = {{"max_abs_delta_genus0", pc.max_delta_g0},
                                 {"max_abs_delta_genus1", pc.max_delta_g1}};
  rep["ok"] = pc.ok_g0 && pc.ok_g1;
  return rep;
}

json cmd_gkm_verify(const json& params) {
  std::string fixture = params.contains("fixture") ? params.at("fixture").get<std::string>()
                                                   : "twolog-small";
  json rep;
  rep["command"] = "gkm-verify";
  rep["fixture"] = fixture;
  if (fixture == "twolog-small") {
    TwoLogFixture fx{1, 1, Rat(1), Rat(1), Rat(-1), Rat(2), {Rat(1)}, 4};
    EpsCompare c = compare_two_log(fx);
    rep["variant"] = "two-log";
    rep["params"] = {{"N", 1}, {"alpha", 1}, {"gamma", 2}, {"beta", -1}};
    rep["truncation"] = 2 * fx.d_max;
    rep["max_abs_delta"] = c.exact_equal ? "0" : "nonzero";
    rep["detail"] = c.detail;
    rep["ok"] = c.exact_equal;
  } else if (fixture == "twolog-alpha2") {
    TwoLogFixture fx{1, 1, Rat(1), Rat(2), Rat(-1), Rat(3), {Rat(1), Rat(2)}, 5};
    EpsCompare c = compare_two_log(fx);
    rep["variant"] = "two-log";
    rep["truncation"] = 2 * fx.d_max;
    rep["max_abs_delta"] = c.exact_equal ? "0" : "nonzero";
    rep["detail"] = c.detail;
    rep["ok"] = c.exact_equal;
  } else if (fixture == "clean-strict") {
    auto r = criterion_11();
    rep["variant"] = "clean";
    rep["detail"] = r.detail;
    rep["max_abs_delta"] = r.pass ? "0" : "nonzero";
    rep["ok"] = r.pass;
  } else if (fixture == "two-profile") {
    // d_max=3 comparison in (eps, t) jointly
    int d_max = 3;
    GenFun pf = partition_function(d_max, CountFilter::TwoProfile);
    // oracle: gamma on sigma0 maps to the kernel's beta parameter
    Rat kernel_beta(3), N(1);
    int points = 2;  // gamma_m N
    int xq = 1;      // N(beta_m - gamma_m) = 3 - 2
    std::vector<Rat> lam = {Rat(1), Rat(2)};
    GkmAssemblyTwoProfile as = gkm_partition_two_profile(xq, N, xq + points, lam, d_max,
                                                         2 * d_max);
    ModelParams mp{N, Rat(1), Rat(0), kernel_beta};  // oracle gamma := kernel beta
    // oracle eval keeping t formal: build series in (t..., eps)
    bool ok = true;
    // direct check: evaluate both sides over a probe grid of rational t values
    // by substituting t_r -> numbers in the assembly series and summing the
    // oracle with the same numbers
    std::vector<Rat> tvals = {Rat(1, 3), Rat(-1, 2), Rat(2, 5)};
    for (int e = 0; e <= 2 * d_max && ok; ++e) {
      // assembly coefficient at eps^e is a series in t; evaluate
      Series<Rat> se = as.z.coeff(e);
      Rat got(0);
      for (const auto& [m, c] : se.terms()) {
        Rat term = c;
        for (size_t i = 0; i < m.size(); ++i)
          for (int j = 0; j < m[i]; ++j) term *= tvals[i % tvals.size()];
        got += term;
      }
      // oracle side
      Rat want(0);
      for (const auto& [k, v] : pf.coeff) {
        int epow = 0;
        Rat term = v.eval(Rat(0), kernel_beta);
        for (auto sP : k.one_type) {
          Rat q(0);
          for (const auto& l : lam) q += rat_pow(l, 2 * sP);
          term *= q;
          epow += 2 * sP;
        }
        if (epow != e) continue;
        for (size_t i = 0; i < k.face_type.size(); ++i)
          term *= tvals[(k.face_type[i] - 1) % tvals.size()];
        want += term;
      }
      if (got != want) ok = false;
    }
    rep["variant"] = "two-profile";
    rep["truncation"] = 2 * d_max;
    rep["max_abs_delta"] = ok ? "0" : "nonzero";
    rep["ok"] = ok;
  } else {
    throw Error("unknown gkm fixture: " + fixture);
  }
  return rep;
}

json cmd_wick_verify(const json& params) {
  (void)params;
  json rep;
  rep["command"] = "wick-verify";
  auto c7 = criterion_7();
  rep["different_sizes"] = {{"pass", c7.pass}, {"detail", c7.detail}};
  // catalan check
  QPoly m4 = gaussian_trace_moment({4}, Rat(1));
  bool cat = m4.coeff(3) == 2 && m4.coeff(1) == 1;
  rep["trace_moments"] = {{"tr_Y4", cat ? "2M^3+M" : "unexpected"}};
  rep["ok"] = c7.pass && cat;
  return rep;
}

json cmd_jacobian_mc(const json& params) {
  McConfig cfg;
  cfg.samples = static_cast<uint64_t>(jint(params, "samples", 1000000));
  cfg.seed = static_cast<uint64_t>(jint(params, "seed", 1));
  cfg.alpha_n = static_cast<int>(jint(params, "alphaN", 1));
  cfg.gamma_n = static_cast<int>(jint(params, "gammaN", 2));
  cfg.N = jrat(params, "bigN", Rat(1));
  json obs_all = json::array();
  bool ok = true;
  for (auto obs : {McObservable::TrRbarR, McObservable::TrRbarRSquared}) {
    McResult r = jacobian_mc_check(cfg, obs);
    ok = ok && std::abs(r.z_score) <= 4.0;
    obs_all.push_back({{"observable", obs == McObservable::TrRbarR ? "tr(RbarR)" : "tr((RbarR)^2)"},
                       {"estimate", r.estimate},
                       {"exact", r.exact},
                       {"stderr", r.stderr_est},
                       {"z", r.z_score}});
  }
  json rep;
  rep["command"] = "jacobian-mc";
  rep["sizes"] = {cfg.alpha_n, cfg.gamma_n};
  rep["samples"] = cfg.samples;
  rep["seed"] = cfg.seed;
  rep["results"] = obs_all;
  rep["ok"] = ok;
  return rep;
}

json cmd_virasoro_check(const json& params) {
  (void)params;
  json rep;
  rep["command"] = "virasoro-check";
  auto c8 = criterion_8();
  rep["detail"] = c8.detail;
  rep["ok"] = c8.pass;
  // residual table for the L1MM fixture
  Series<Rat> Z = onematrix_series(Rat(1, 2), Rat(2), 6);
  auto repL = annihilation_check_l1mm(Z, Rat(2), Rat(1, 2), -1, 3);
  rep["l1mm_csv"] = repL.to_csv("L1MM");
  return rep;
}

json cmd_full_suite(const json& params) {
  (void)params;
  auto results = run_acceptance();
  json rows = json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    rows.push_back({{"id", r.id},
                    {"name", r.name},
                    {"pass", r.pass},
                    {"detail", r.detail},
                    {"seconds", r.seconds}});
  }
  return {{"command", "full-suite"}, {"criteria", rows}, {"ok", all}};
}

}  // namespace

json run_command(const std::string& command, const json& params) {
  if (!params.is_object()) throw Error("params must be a JSON object");
  if (command == "count") return cmd_count(params);
  if (command == "spectral") return cmd_spectral(params);
  if (command == "gkm-verify") return cmd_gkm_verify(params);
  if (command == "wick-verify") return cmd_wick_verify(params);
  if (command == "jacobian-mc") return cmd_jacobian_mc(params);
  if (command == "virasoro-check") return cmd_virasoro_check(params);
  if (command == "full-suite") return cmd_full_suite(params);
  throw Error("unknown command: " + command);
}

}  // namespace dlab
