#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/dessin_count.hpp"

using namespace dlab;

namespace {

ParamPoly bg(const Rat& c, unsigned be, unsigned ge) { return ParamPoly::term(c, be, ge); }

const ParamPoly& coeff_at(const GenFun& gf, int chi, Partition face, Partition one = {}) {
  static const ParamPoly zero;
  auto it = gf.coeff.find(GFKey{chi, std::move(face), std::move(one)});
  return it == gf.coeff.end() ? zero : it->second;
}

}  // namespace

TEST_CASE("degree 1: the Fig.1 term N^2 beta gamma t1") {
  GenFun gf = connected_gf(1, CountFilter::All);
  CHECK(gf.coeff.size() == 1);
  CHECK(coeff_at(gf, 2, {1}) == bg(Rat(1), 1, 1));
}

TEST_CASE("degree 2 genus 0 bucket") {
  GenFun gf = connected_gf(2, CountFilter::All);
  // 1/2 beta gamma t1^2 + 1/2 beta gamma (beta+gamma) t2
  CHECK(coeff_at(gf, 2, {1, 1}) == bg(Rat(1, 2), 1, 1));
  ParamPoly t2 = bg(Rat(1, 2), 2, 1) + bg(Rat(1, 2), 1, 2);
  CHECK(coeff_at(gf, 2, {2}) == t2);
}

TEST_CASE("degree 3 genus 1 t3 bucket") {
  GenFun gf = connected_gf(3, CountFilter::All);
  CHECK(coeff_at(gf, 0, {3}) == bg(Rat(1, 3), 1, 1));
}

TEST_CASE("beta-gamma swap symmetry at d <= 5") {
  GenFun gf = connected_gf(5, CountFilter::All);
  CHECK(gf_swap_params(gf).coeff == gf.coeff);
}

TEST_CASE("weight bookkeeping: face parts sum to the degree and genus bound") {
  GenFun gf = connected_gf(5, CountFilter::All);
  for (const auto& [k, v] : gf.coeff) {
    int d = 0;
    for (auto p : k.face_type) d += p;
    CHECK(d >= 1);
    CHECK(d <= 5);
    // chi = 2-2g and 2-2g >= 3-d
    CHECK((2 - k.chi) % 2 == 0);
    CHECK(k.chi >= 3 - d);
  }
}

TEST_CASE("partition function: empty graph and exponential formula") {
  GenFun pf0 = partition_function(0, CountFilter::All);
  CHECK(pf0.coeff.size() == 1);
  CHECK(coeff_at(pf0, 0, {}) == ParamPoly(Rat(1)));

  GenFun pf1 = partition_function(1, CountFilter::All);
  CHECK(coeff_at(pf1, 2, {1}) == bg(Rat(1), 1, 1));

  GenFun c = connected_gf(4, CountFilter::All);
  GenFun pf = partition_function(4, CountFilter::All);
  CHECK(gf_exp(c).coeff == pf.coeff);
}

TEST_CASE("clean filters") {
  GenFun strict = connected_gf(4, CountFilter::CleanStrict);
  for (const auto& [k, v] : strict.coeff) {
    int d = 0;
    for (auto p : k.face_type) d += p;
    CHECK(d % 2 == 0);  // strict series vanish in odd degree
  }
  // d=2 strict: sigma1 must be the transposition
  GenFun s2 = connected_gf(2, CountFilter::CleanStrict);
  CHECK(coeff_at(s2, 2, {1, 1}) == bg(Rat(1, 2), 1, 1));
  CHECK(coeff_at(s2, 2, {2}) == bg(Rat(1, 2), 1, 2));

  GenFun loose = connected_gf(3, CountFilter::CleanLoose);
  GenFun all = connected_gf(3, CountFilter::All);
  CHECK(loose.coeff.size() <= all.coeff.size());
}

TEST_CASE("two-profile mode replaces beta by the sigma1 profile") {
  GenFun tp = connected_gf(2, CountFilter::TwoProfile);
  // d=1: gamma * t1 * T1
  CHECK(coeff_at(tp, 2, {1}, {1}) == bg(Rat(1), 0, 1));
  // d=2: (id,(12)): gamma^2... sigma0=id has 2 cycles -> gamma^2, sigma1=(12): T2
  CHECK(coeff_at(tp, 2, {2}, {2}) == bg(Rat(1, 2), 0, 2));
  CHECK(coeff_at(tp, 2, {2}, {1, 1}) == bg(Rat(1, 2), 0, 1));
  CHECK(coeff_at(tp, 2, {1, 1}, {2}) == bg(Rat(1, 2), 0, 1));
}

TEST_CASE("evaluation under the Miwa substitution") {
  GenFun gf = connected_gf(2, CountFilter::All);
  // beta gamma t1 at beta=-1, gamma=2, N=1, lambda={1} -> -2 eps^2
  ModelParams mp{Rat(1), Rat(1), Rat(-1), Rat(2)};
  Series<Rat> s = gf_evaluate(gf, mp, {Rat(1)});
  CHECK(s.coeff(Mono{2}) == Rat(-2));

  // t2 with two lambdas {1,1} -> 2 eps^4
  GenFun just_t2;
  just_t2.d_max = 2;
  just_t2.filter = CountFilter::All;
  just_t2.coeff[GFKey{2, {2}, {}}] = ParamPoly(Rat(1));
  ModelParams mp2{Rat(1), Rat(1), Rat(1), Rat(1)};
  Series<Rat> s2 = gf_evaluate(just_t2, mp2, {Rat(1), Rat(1)});
  CHECK(s2.coeff(Mono{4}) == Rat(2));

  GenFun empty;
  empty.d_max = 0;
  Series<Rat> s3 = gf_evaluate(empty, mp2, {Rat(1)});
  CHECK(s3.is_zero());

  CHECK_THROWS_AS(gf_evaluate(gf, mp, {}), Error);
}

TEST_CASE("caps guard") {
  CHECK_THROWS_AS(connected_gf(99, CountFilter::All), Error);
  CountCaps caps;
  caps.d_max_all = 3;
  CHECK_THROWS_AS(connected_gf(4, CountFilter::All, caps), Error);
}

TEST_CASE("csv export shape") {
  GenFun gf = connected_gf(2, CountFilter::All);
  std::string csv = gf_to_csv(gf);
  CHECK(csv.find("degree,chi,genus,monomial,coefficient") == 0);
  CHECK(csv.find("t1") != std::string::npos);
}
