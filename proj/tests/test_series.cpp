#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/series.hpp"

using namespace dlab;

namespace {

Series<Rat> tvar(VarTablePtr v, int D, int r) { return Series<Rat>::variable(v, D, r - 1); }

Rat coeff_of(const Series<Rat>& s, std::vector<uint8_t> exps) {
  Mono m(exps);
  m.resize(s.vars()->size(), 0);
  return s.coeff(m);
}

}  // namespace

TEST_CASE("multiplication with weighted truncation") {
  auto v = time_vars(2);
  auto one = Series<Rat>::one(v, 2);
  auto t1 = tvar(v, 2, 1);
  // (1 + t1)(1 - t1) = 1 - t1^2
  auto prod = (one + t1) * (one - t1);
  CHECK(coeff_of(prod, {0, 0}) == 1);
  CHECK(coeff_of(prod, {1, 0}) == 0);
  CHECK(coeff_of(prod, {2, 0}) == -1);
  // t1 * t2 has weight 3 > 2: truncated away
  auto t2 = tvar(v, 2, 2);
  CHECK((t1 * t2).is_zero());

  auto v3 = time_vars(3);
  auto t1b = tvar(v3, 3, 1);
  auto telescoping = (Series<Rat>::one(v3, 3) + t1b + t1b * t1b) * (Series<Rat>::one(v3, 3) - t1b);
  CHECK(coeff_of(telescoping, {0, 0, 0}) == 1);
  CHECK(coeff_of(telescoping, {1, 0, 0}) == 0);
  CHECK(coeff_of(telescoping, {2, 0, 0}) == 0);
  CHECK(coeff_of(telescoping, {3, 0, 0}) == -1);
}

TEST_CASE("exp and log") {
  auto v = time_vars(3);
  auto zero = Series<Rat>::zero(v, 3);
  CHECK(zero.exp() == Series<Rat>::one(v, 3));

  auto t1 = tvar(v, 3, 1);
  auto e = t1.exp();
  CHECK(coeff_of(e, {0, 0, 0}) == 1);
  CHECK(coeff_of(e, {1, 0, 0}) == 1);
  CHECK(coeff_of(e, {2, 0, 0}) == Rat(1, 2));
  CHECK(coeff_of(e, {3, 0, 0}) == Rat(1, 6));

  // log(1 - 2 t1) = -2t1 - 2t1^2 - 8/3 t1^3
  auto lg = (Series<Rat>::one(v, 3) - t1.scaled_rat(Rat(2))).log();
  CHECK(coeff_of(lg, {1, 0, 0}) == -2);
  CHECK(coeff_of(lg, {2, 0, 0}) == -2);
  CHECK(coeff_of(lg, {3, 0, 0}) == Rat(-8, 3));

  CHECK(e.log() == t1);
  CHECK_THROWS_AS(t1.log(), Error);
  CHECK_THROWS_AS(Series<Rat>::one(v, 3).exp(), Error);
}

TEST_CASE("differentiation") {
  auto v = time_vars(3);
  auto t1 = tvar(v, 3, 1), t2 = tvar(v, 3, 2);
  auto d = (t1 * t1).diff(0);
  CHECK(coeff_of(d, {1, 0, 0}) == 2);
  auto d2 = (t1 * t2).diff(1);
  CHECK(coeff_of(d2, {1, 0, 0}) == 1);
  // derivative of exp(t1) truncates one order lower
  auto e = t1.exp();
  auto de = e.diff(0);
  CHECK(de.max_weight() == 2);
  CHECK(coeff_of(de, {2, 0, 0}) == Rat(1, 2));
  CHECK_THROWS_AS(t1.diff(7), Error);
}

TEST_CASE("newton_solve") {
  auto v = time_vars(2);
  int D = 2;
  // x^2 = 1 + t1, seed 1 -> 1 + t1/2 - t1^2/8
  auto t1 = tvar(v, D, 1);
  auto target = Series<Rat>::one(v, D) + t1;
  std::function<std::vector<Series<Rat>>(const std::vector<Series<Rat>>&)> res =
      [&](const std::vector<Series<Rat>>& x) {
        return std::vector<Series<Rat>>{x[0] * x[0] - target};
      };
  auto sol = newton_solve<Rat>(res, {{Rat(2)}}, {Rat(1)}, v, D);
  CHECK(coeff_of(sol[0], {0, 0}) == 1);
  CHECK(coeff_of(sol[0], {1, 0}) == Rat(1, 2));
  CHECK(coeff_of(sol[0], {2, 0}) == Rat(-1, 8));

  // x y = 1, x - y = t1
  int D1 = 1;
  auto t1b = tvar(v, D1, 1);
  std::function<std::vector<Series<Rat>>(const std::vector<Series<Rat>>&)> res2 =
      [&](const std::vector<Series<Rat>>& x) {
        return std::vector<Series<Rat>>{x[0] * x[1] - Series<Rat>::one(v, D1),
                                        x[0] - x[1] - t1b};
      };
  auto sol2 = newton_solve<Rat>(res2, {{Rat(1), Rat(1)}, {Rat(1), Rat(-1)}}, {Rat(1), Rat(1)}, v,
                                D1);
  CHECK(coeff_of(sol2[0], {1, 0}) == Rat(1, 2));
  CHECK(coeff_of(sol2[1], {1, 0}) == Rat(-1, 2));

  // singular seed Jacobian: x^2 = t1 with seed 0
  std::function<std::vector<Series<Rat>>(const std::vector<Series<Rat>>&)> res3 =
      [&](const std::vector<Series<Rat>>& x) {
        return std::vector<Series<Rat>>{x[0] * x[0] - t1b};
      };
  CHECK_THROWS_AS(newton_solve<Rat>(res3, {{Rat(0)}}, {Rat(0)}, v, D1), Error);
}

TEST_CASE("ring axioms on sampled series") {
  auto v = time_vars(4);
  int D = 4;
  long seed = 5;
  auto randser = [&]() {
    Series<Rat> s(v, D);
    Mono m(v->size(), 0);
    std::function<void(size_t, int)> rec = [&](size_t i, int wleft) {
      if (i == v->size()) {
        seed = (seed * 48271) % 2147483647;
        s.add_term(m, Rat(seed % 11 - 5, 1 + seed % 5));
        return;
      }
      for (int c = 0; c * v->var(i).weight <= wleft; ++c) {
        m[i] = static_cast<uint8_t>(c);
        rec(i + 1, wleft - c * v->var(i).weight);
        m[i] = 0;
      }
    };
    rec(0, D);
    return s;
  };
  auto a = randser(), b = randser(), c = randser();
  CHECK((a * b) * c == a * (b * c));
  CHECK(a * (b + c) == a * b + a * c);
  CHECK(a * b == b * a);
}

TEST_CASE("json round trip is bit exact") {
  auto v = time_vars(3);
  Series<Rat> s(v, 3);
  s.add_term({1, 0, 0}, Rat(22, 7));
  s.add_term({0, 0, 1}, Rat(-5, 3));
  auto j = s.to_json();
  auto back = Series<Rat>::from_json(j);
  CHECK(back == s);

  Series<BigFloat> f(v, 3);
  f.add_term({1, 1, 0}, BigFloat(Rat(1, 3)));
  auto jf = f.to_json();
  auto backf = Series<BigFloat>::from_json(jf);
  BigFloat d = backf.coeff(Mono{1, 1, 0}) - f.coeff(Mono{1, 1, 0});
  CHECK(d.is_zero());
}

TEST_CASE("inverse") {
  auto v = time_vars(3);
  auto t1 = tvar(v, 3, 1);
  auto s = Series<Rat>::one(v, 3) - t1.scaled_rat(Rat(3));
  auto inv = s.inverse();
  CHECK(coeff_of(inv, {2, 0, 0}) == 9);
  CHECK(s * inv == Series<Rat>::one(v, 3));
}
