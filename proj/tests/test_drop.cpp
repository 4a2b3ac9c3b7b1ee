#include <doctest.h>

#include <cmath>
#include <functional>

#include "resodim/drop.hpp"

using namespace resodim;

TEST_CASE("resonant_scale") {
  std::vector<Scalar> t = {Scalar(0), Scalar::exact(1, 2), Scalar::exact(3, 4)};
  std::vector<Scalar> tp = {Scalar(0), Scalar::exact(1, 2)};
  CHECK(resonant_scale(t, tp) == Scalar::exact(3, 2));
  CHECK(resonant_scale(tp, t) == Scalar::exact(2, 3));
  CHECK_THROWS_AS(resonant_scale({Scalar(0)}, tp), DomainError);
  CHECK_THROWS_AS(resonant_scale({Scalar(0), Scalar(0)}, tp), DomainError);
}

TEST_CASE("digit_collision counts exact sums") {
  Scalar q4 = Scalar::exact(1, 4);
  std::vector<Scalar> D = {Scalar(0), Scalar::exact(3, 4)};

  // resonant s = 1 merges the cross terms: {0, 3/4, 3/2}
  DigitSumReport res = digit_collision(D, D, Scalar(1), q4);
  CHECK(res.sum_size == 3);
  CHECK(res.bound ==
        doctest::Approx(std::log(3.0) / std::log(4.0)).epsilon(1e-12));

  // generic s keeps all four sums distinct
  DigitSumReport gen = digit_collision(D, D, Scalar::exact(1, 3), q4);
  CHECK(gen.sum_size == 4);
  CHECK(gen.bound == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<Scalar> E = {Scalar(0), Scalar::exact(2, 3)};
  DigitSumReport tri = digit_collision(E, E, Scalar(1), Scalar::exact(1, 3));
  CHECK(tri.sum_size == 3);
  CHECK(tri.bound == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(digit_collision({}, D, Scalar(1), q4), DomainError);
  CHECK_THROWS_AS(digit_collision(D, D, Scalar(1), Scalar(2)), DomainError);
}

TEST_CASE("representation_threshold matches small closed forms") {
  auto check = [](std::vector<long long> steps, long long g, long long m0) {
    auto [gg, mm] = representation_threshold(steps);
    CHECK(gg == g);
    CHECK(mm == m0);
  };
  check({1}, 1, 1);
  check({2, 3}, 1, 2);   // 1 unreachable, 2 = 1 + g
  check({4, 6}, 2, 4);   // 2 unreachable, 4 = 2 + g
  check({3, 5}, 1, 8);   // Frobenius 7, threshold 8
  check({2}, 2, 2);
  check({5, 7}, 1, 24);  // Frobenius 23
  CHECK_THROWS_AS(representation_threshold({}), DomainError);
  CHECK_THROWS_AS(representation_threshold({0, 2}), DomainError);
}

namespace {
// sum over all step compositions of target of the product of their probs
double brute_hit(long long target, const std::vector<long long>& steps,
                 const std::vector<double>& probs) {
  if (target == 0) return 1.0;
  double total = 0;
  for (std::size_t j = 0; j < steps.size(); ++j)
    if (target >= steps[j])
      total += probs[j] * brute_hit(target - steps[j], steps, probs);
  return total;
}
}  // namespace

TEST_CASE("hit_probability closed form and brute force") {
  std::vector<long long> steps = {1, 2};
  std::vector<Scalar> probs = {Scalar::exact(1, 2), Scalar::exact(1, 2)};
  CHECK(hit_probability(2, steps, probs) == Scalar::exact(3, 4));
  CHECK(hit_probability(0, steps, probs) == Scalar(1));

  std::vector<long long> s2 = {2, 3, 5};
  std::vector<double> p2 = {0.5, 0.3, 0.2};
  std::vector<Scalar> p2s = {Scalar::approx(0.5), Scalar::approx(0.3),
                             Scalar::approx(0.2)};
  for (long long target = 0; target <= 15; ++target) {
    CHECK(hit_probability(target, s2, p2s).dbl() ==
          doctest::Approx(brute_hit(target, s2, p2)).epsilon(1e-12));
  }

  CHECK_THROWS_AS(hit_probability(-1, steps, probs), DomainError);
  CHECK_THROWS_AS(hit_probability(2, steps, {Scalar::exact(1, 2)}),
                  DomainError);
  CHECK_THROWS_AS(
      hit_probability(2, steps, {Scalar::exact(1, 2), Scalar::exact(1, 3)}),
      DomainError);
}

TEST_CASE("make_drop_instance on the exponent pair {1,2}, {1,1}") {
  DropInstance inst =
      make_drop_instance(Scalar::exact(1, 2), {1, 2}, {1, 1});

  CHECK(inst.ell == 2);
  // normalized exponents: a -> {2: 2, 3: 1}, b -> {2: 4}
  REQUIRE(inst.a_exp.size() == 2);
  CHECK(inst.a_exp.at(2) == BigInt(2));
  CHECK(inst.a_exp.at(3) == BigInt(1));
  REQUIRE(inst.b_exp.size() == 1);
  CHECK(inst.b_exp.at(2) == BigInt(4));

  // beta solves 2 x^2 + x^3 = 1 with x = 2^{-beta}: x = (sqrt 5 - 1)/2
  double x = (std::sqrt(5.0) - 1.0) / 2.0;
  CHECK(inst.beta ==
        doctest::Approx(std::log(1.0 / x) / std::log(2.0)).epsilon(1e-10));
  CHECK(inst.betap == doctest::Approx(1.0).epsilon(1e-10));

  CHECK(inst.a == 1);
  CHECK(inst.A == 3);
  CHECK(inst.b == 2);
  CHECK(inst.B == 2);
  CHECK(inst.M0 == 2);
  CHECK(inst.M == 6);
  CHECK(inst.p > 0);
  CHECK(inst.p <= 1);
  CHECK(inst.q > 0);
  CHECK(inst.q < 1);

  double bound = essential_pair_bound(inst);
  CHECK(bound < inst.beta + inst.betap);
  CHECK(bound > inst.beta + inst.betap - 0.05);
}

TEST_CASE("make_drop_instance normalization preserves mass") {
  // sum xi^{beta e} over a normalized multiset stays a probability vector,
  // so beta of the normalized system equals beta of the raw one
  DropInstance inst =
      make_drop_instance(Scalar::exact(1, 3), {1, 1, 2}, {1, 2});
  auto raw_beta = [](double xi, const std::vector<long long>& exps) {
    double lo = 0, hi = 4;
    for (int i = 0; i < 200; ++i) {
      double mid = 0.5 * (lo + hi);
      double sum = 0;
      for (long long e : exps) sum += std::pow(xi, mid * e);
      (sum > 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  CHECK(inst.beta ==
        doctest::Approx(raw_beta(1.0 / 3.0, {1, 1, 2})).epsilon(1e-9));
  CHECK(inst.betap ==
        doctest::Approx(raw_beta(1.0 / 3.0, {1, 2})).epsilon(1e-9));

  // M is a multiple of ab past M0 plus the largest step
  CHECK(inst.M % (inst.a * inst.b) == 0);
  CHECK(inst.M >= inst.M0 + std::max(inst.A, inst.B));
  CHECK(essential_pair_bound(inst) < inst.beta + inst.betap);

  CHECK_THROWS_AS(make_drop_instance(Scalar(2), {1, 2}, {1, 1}), DomainError);
  CHECK_THROWS_AS(make_drop_instance(Scalar::exact(1, 2), {1}, {1, 1}),
                  DomainError);
  CHECK_THROWS_AS(make_drop_instance(Scalar::exact(1, 2), {0, 2}, {1, 1}),
                  DomainError);
}
