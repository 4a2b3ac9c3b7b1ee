#include "resodim/drop.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace resodim {
namespace {

// beta with sum over the multiset of xi^{beta e} = 1
double solve_beta(double xi, const std::map<long long, BigInt>& exps) {
  auto value = [&](double beta) {
    double sum = 0;
    for (const auto& [e, c] : exps)
      sum += c.convert_to<double>() * std::pow(xi, beta * e);
    return sum;
  };
  double lo = 0, hi = 1;
  while (value(hi) > 1.0) hi *= 2;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (value(mid) > 1.0 ? lo : hi) = mid;
    if (hi - lo < 1e-15) break;
  }
  return 0.5 * (lo + hi);
}

std::map<long long, BigInt> to_multiset(const std::vector<long long>& exps) {
  std::map<long long, BigInt> out;
  for (long long e : exps) ++out[e];
  return out;
}

// multiset of sums of `len` draws from base, as polynomial power
std::map<long long, BigInt> power_sum(const std::map<long long, BigInt>& base,
                                      long long len) {
  std::map<long long, BigInt> acc = {{0, BigInt(1)}};
  for (long long i = 0; i < len; ++i) {
    std::map<long long, BigInt> next;
    for (const auto& [ea, ca] : acc)
      for (const auto& [eb, cb] : base) next[ea + eb] += ca * cb;
    acc = std::move(next);
    if (acc.size() > 100'000)
      throw ResourceError("drop: exponent polynomial exceeds budget");
  }
  return acc;
}

// replace the entries at the first two positions of `raw` by their
// word-extensions of length ext_i - 1, keeping the rest
std::map<long long, BigInt> normalize_exponents(
    const std::vector<long long>& raw, long long ext1, long long ext2) {
  std::map<long long, BigInt> base = to_multiset(raw);
  std::map<long long, BigInt> out;
  for (std::size_t i = 2; i < raw.size(); ++i) ++out[raw[i]];
  long long exts[2] = {ext1, ext2};
  for (int i = 0; i < 2; ++i) {
    auto words = power_sum(base, exts[i] - 1);
    for (const auto& [e, c] : words) out[raw[i] + e] += c;
  }
  return out;
}

std::vector<long long> support(const std::map<long long, BigInt>& exps) {
  std::vector<long long> out;
  for (const auto& [e, c] : exps) out.push_back(e);
  return out;
}

// min over reachable overshoot states of the probability of hitting the
// next renewal target exactly
double min_hit_probability(const std::map<long long, BigInt>& exps,
                           long long g, long long max_e, long long M,
                           double xi, double beta) {
  std::vector<long long> steps;
  std::vector<Scalar> probs;
  for (const auto& [e, c] : exps) {
    steps.push_back(e);
    probs.push_back(
        Scalar::approx(c.convert_to<double>() * std::pow(xi, beta * e)));
  }
  double best = 1.0;
  for (long long i = 0; i * g < max_e; ++i) {
    double h = hit_probability(M - i * g, steps, probs).dbl();
    best = std::min(best, h);
  }
  return best;
}

}  // namespace

Scalar resonant_scale(const std::vector<Scalar>& t,
                      const std::vector<Scalar>& tp) {
  if (t.size() < 2 || tp.size() < 2)
    throw DomainError("resonant_scale: need at least 2 translations each");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i] < t[i - 1]) throw DomainError("resonant_scale: t not sorted");
  for (std::size_t i = 1; i < tp.size(); ++i)
    if (tp[i] < tp[i - 1]) throw DomainError("resonant_scale: t' not sorted");
  Scalar num = t.back() - t.front();
  Scalar den = tp.back() - tp.front();
  if (num.sign() == 0 || den.sign() == 0)
    throw DomainError("resonant_scale: degenerate translation set");
  return num / den;
}

DigitSumReport digit_collision(std::vector<Scalar> D, std::vector<Scalar> Dp,
                               const Scalar& s, const Scalar& xi) {
  if (D.empty() || Dp.empty())
    throw DomainError("digit_collision: empty digit set");
  if (!(Scalar(0) < xi && xi < Scalar(1)))
    throw DomainError("digit_collision: xi must lie in (0,1)");
  DigitSumReport rep;
  rep.s = s;
  std::vector<Scalar> sums;
  sums.reserve(D.size() * Dp.size());
  for (const auto& d : D)
    for (const auto& dp : Dp) sums.push_back(d + s * dp);
  std::sort(sums.begin(), sums.end());
  sums.erase(std::unique(sums.begin(), sums.end()), sums.end());
  rep.sum_size = static_cast<long long>(sums.size());
  rep.bound = std::log(static_cast<double>(rep.sum_size)) /
              std::log(1.0 / xi.dbl());

  if (D.size() >= 2 && Dp.size() >= 2) {
    std::vector<Scalar> ds = D, dps = Dp;
    std::sort(ds.begin(), ds.end());
    std::sort(dps.begin(), dps.end());
    if (s == resonant_scale(ds, dps) &&
        rep.sum_size >= static_cast<long long>(D.size() * Dp.size()))
      throw InternalError("digit_collision: resonant scale produced no "
                          "collision");
  }
  rep.D = std::move(D);
  rep.Dp = std::move(Dp);
  return rep;
}

std::pair<long long, long long> representation_threshold(
    const std::vector<long long>& steps) {
  if (steps.empty())
    throw DomainError("representation_threshold: empty step list");
  long long g = 0, maxs = 0;
  for (long long s : steps) {
    if (s < 1)
      throw DomainError("representation_threshold: steps must be positive");
    g = std::gcd(g, s);
    maxs = std::max(maxs, s);
  }
  long long limit = maxs * maxs + maxs + 1;
  std::vector<char> reach(limit + 1, 0);
  reach[0] = 1;
  for (long long m = 1; m <= limit; ++m) {
    for (long long s : steps) {
      if (m >= s && reach[m - s]) {
        reach[m] = 1;
        break;
      }
    }
  }
  long long last_bad = 0;
  for (long long m = g; m <= limit; m += g)
    if (!reach[m]) last_bad = m;
  return {g, last_bad == 0 ? g : last_bad + g};
}

Scalar hit_probability(long long target, const std::vector<long long>& steps,
                       const std::vector<Scalar>& probs) {
  if (target < 0) throw DomainError("hit_probability: target must be >= 0");
  if (steps.size() != probs.size() || steps.empty())
    throw DomainError("hit_probability: steps/probs size mismatch");
  Scalar total(0);
  for (const auto& p : probs) total += p;
  if (std::fabs(total.dbl() - 1.0) > 1e-12)
    throw DomainError("hit_probability: probabilities must sum to 1");
  for (long long s : steps)
    if (s < 1) throw DomainError("hit_probability: steps must be positive");

  std::vector<Scalar> h(target + 1, Scalar(0));
  h[0] = Scalar(1);
  for (long long m = 1; m <= target; ++m) {
    Scalar acc(0);
    for (std::size_t j = 0; j < steps.size(); ++j)
      if (m >= steps[j]) acc += probs[j] * h[m - steps[j]];
    h[m] = acc;
  }
  return h[target];
}

DropInstance make_drop_instance(const Scalar& xi, std::vector<long long> a_exp,
                                std::vector<long long> b_exp,
                                std::vector<Scalar> t,
                                std::vector<Scalar> tp) {
  if (!(Scalar(0) < xi && xi < Scalar(1)))
    throw DomainError("make_drop_instance: xi must lie in (0,1)");
  if (a_exp.size() < 2 || b_exp.size() < 2)
    throw DomainError("make_drop_instance: need at least 2 exponents each");
  for (long long e : a_exp)
    if (e < 1) throw DomainError("make_drop_instance: exponents positive");
  for (long long e : b_exp)
    if (e < 1) throw DomainError("make_drop_instance: exponents positive");

  DropInstance inst;
  inst.xi = xi;
  inst.a_raw = a_exp;
  inst.b_raw = b_exp;
  inst.t = std::move(t);
  inst.tp = std::move(tp);

  long long a1 = a_exp[0], a2 = a_exp[1], b1 = b_exp[0], b2 = b_exp[1];
  inst.ell = a1 * a2 * b1 * b2;
  inst.a_exp = normalize_exponents(a_exp, a2 * b1 * b2, a1 * b1 * b2);
  inst.b_exp = normalize_exponents(b_exp, b2 * a1 * a2, b1 * a1 * a2);

  double xid = xi.dbl();
  inst.beta = solve_beta(xid, inst.a_exp);
  inst.betap = solve_beta(xid, inst.b_exp);

  auto [ga, m0a] = representation_threshold(support(inst.a_exp));
  auto [gb, m0b] = representation_threshold(support(inst.b_exp));
  inst.a = ga;
  inst.b = gb;
  inst.A = inst.a_exp.rbegin()->first;
  inst.B = inst.b_exp.rbegin()->first;
  inst.M0 = std::max(m0a, m0b);

  long long ab = ga * gb;
  long long target = inst.M0 + std::max(inst.A, inst.B);
  inst.M = ((target + ab - 1) / ab) * ab;

  double pa =
      min_hit_probability(inst.a_exp, inst.a, inst.A, inst.M, xid, inst.beta);
  double pb =
      min_hit_probability(inst.b_exp, inst.b, inst.B, inst.M, xid, inst.betap);
  inst.p = std::min(pa, pb);
  if (!(inst.p > 0))
    throw InternalError("make_drop_instance: vanishing hitting probability");
  double inner =
      std::pow(xid, inst.ell * (inst.beta + inst.betap)) * inst.p * inst.p;
  inst.q = inner * inner;
  if (!(inst.q > 0 && inst.q < 1))
    throw InternalError("make_drop_instance: q outside (0,1)");
  return inst;
}

double essential_pair_bound(const DropInstance& inst) {
  double l = std::log(1.0 / inst.xi.dbl());
  double bound = ((inst.beta + inst.betap) * inst.M * l +
                  std::log(1.0 - inst.q)) /
                 (inst.M * l);
  if (!(bound < inst.beta + inst.betap))
    throw InternalError("essential_pair_bound: bound not below beta+beta'");
  return bound;
}

}  // namespace resodim
