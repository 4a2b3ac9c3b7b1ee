#include "resodim/resonance.hpp"

#include <cmath>
#include <map>
#include <numeric>

namespace resodim {
namespace {

// prime exponent vector of a positive rational; nullopt when a factor
// beyond the trial-division bound cannot be matched exactly
std::optional<std::map<BigInt, long long>> prime_exponents(const Rational& r) {
  std::map<BigInt, long long> exps;
  auto accumulate = [&](BigInt n, int sign) -> bool {
    if (n < 0) return false;
    for (BigInt p = 2; p * p <= n && p < 1000000; p == 2 ? p = 3 : p += 2) {
      while (n % p == 0) {
        exps[p] += sign;
        n /= p;
      }
    }
    if (n > 1) {
      if (n >= BigInt(1) << 62) return false;  // unverified large factor
      exps[n] += sign;  // prime or pseudo-prime leftover; exactness checked
                        // by vector proportionality either way
    }
    return true;
  };
  if (!accumulate(numerator(r), +1)) return std::nullopt;
  if (!accumulate(denominator(r), -1)) return std::nullopt;
  for (auto it = exps.begin(); it != exps.end();) {
    if (it->second == 0)
      it = exps.erase(it);
    else
      ++it;
  }
  return exps;
}

// q*ex == p*ey componentwise, reduced; nullopt when not proportional
std::optional<RationalWitness> proportional_witness(
    const std::map<BigInt, long long>& ex,
    const std::map<BigInt, long long>& ey) {
  // zero vectors mean the value 1, excluded by the precondition
  if (ex.empty() || ey.empty()) return std::nullopt;
  long long p = 0, q = 0;
  for (const auto& [prime, e] : ex) {
    auto it = ey.find(prime);
    long long f = (it == ey.end()) ? 0 : it->second;
    if (f == 0) return std::nullopt;  // x has a prime y lacks
    if (p == 0) {
      long long g = std::gcd(std::llabs(e), std::llabs(f));
      p = e / g;
      q = f / g;
      if (q < 0) {
        p = -p;
        q = -q;
      }
    } else if (e * q != f * p) {
      return std::nullopt;
    }
  }
  for (const auto& [prime, f] : ey) {
    (void)f;
    if (ex.find(prime) == ex.end()) return std::nullopt;
  }
  return RationalWitness{p, q};
}

}  // namespace

std::optional<RationalWitness> is_rational_ratio(const Scalar& x,
                                                 const Scalar& y,
                                                 long long q_max, double tol) {
  if (q_max < 1) throw DomainError("is_rational_ratio: q_max must be >= 1");
  if (!(x > Scalar(0)) || !(y > Scalar(0)))
    throw DomainError("is_rational_ratio: inputs must be positive");
  if (x == Scalar(1) || y == Scalar(1))
    throw DomainError("is_rational_ratio: inputs must differ from 1");

  if (x.is_exact() && y.is_exact()) {
    auto ex = prime_exponents(x.rat());
    auto ey = prime_exponents(y.rat());
    if (ex && ey) return proportional_witness(*ex, *ey);
    // fall through to the float search when factoring was inconclusive
  }

  double lx = std::log(x.dbl());
  double ly = std::log(y.dbl());
  double z = lx / ly;
  // continued-fraction convergents h_k / k_k of z
  double frac = z;
  long long h1 = 1, h0 = 0, k1 = 0, k0 = 1;
  for (int iter = 0; iter < 64; ++iter) {
    double a_f = std::floor(frac);
    if (a_f > 9.2e18 || a_f < -9.2e18) break;
    long long a = static_cast<long long>(a_f);
    long long h2 = a * h1 + h0;
    long long k2 = a * k1 + k0;
    if (k2 > q_max || k2 < 0) break;
    if (k2 > 0 && std::fabs(k2 * lx - h2 * ly) <= tol)
      return RationalWitness{h2, k2};
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    double rem = frac - a_f;
    if (rem < 1e-18) break;
    frac = 1.0 / rem;
  }
  return std::nullopt;
}

std::optional<double> arithmetic_lattice(const std::vector<double>& logs,
                                         double tol, long long q_max) {
  if (logs.empty()) throw DomainError("arithmetic_lattice: empty list");
  for (double v : logs)
    if (!(v > 0)) throw DomainError("arithmetic_lattice: entries must be > 0");
  if (logs.size() == 1) return logs[0];

  double base = logs[0];
  // l_i / l_0 = p_i / q_i must be rational for every entry
  std::vector<long long> ps, qs;
  for (std::size_t i = 1; i < logs.size(); ++i) {
    auto w = is_rational_ratio(Scalar::approx(std::exp(logs[i])),
                               Scalar::approx(std::exp(base)), q_max, tol);
    if (!w) return std::nullopt;
    ps.push_back(std::llabs(w->p));
    qs.push_back(std::llabs(w->q));
  }
  // l_0 = m_0 * alpha with m_0 = lcm of the q_i, so every l_i is an
  // integer multiple of alpha = l_0 / m_0
  long long m0 = 1;
  for (long long q : qs) {
    m0 = std::lcm(m0, q);
    if (m0 > q_max) return std::nullopt;
  }
  for (std::size_t i = 0; i < ps.size(); ++i) {
    long long mult = ps[i] * (m0 / qs[i]);
    if (mult > q_max) return std::nullopt;
  }
  return base / static_cast<double>(m0);
}

ResonanceVerdict check_pair(const IFS1D& a, const IFS1D& b, long long q_max,
                            double tol) {
  ResonanceVerdict verdict;
  verdict.denominator_bound = q_max;
  verdict.tolerance = tol;
  verdict.resonant = true;
  for (const auto& fa : a.maps()) {
    for (const auto& fb : b.maps()) {
      auto w = is_rational_ratio(fa.ratio.abs(), fb.ratio.abs(), q_max, tol);
      if (!w) verdict.resonant = false;
      verdict.witnesses.push_back(w);
    }
  }
  // within-system pairs must fit the same lattice as well
  if (verdict.resonant) {
    std::vector<double> logs;
    for (const auto& f : a.maps()) logs.push_back(-std::log(f.ratio.abs().dbl()));
    for (const auto& f : b.maps()) logs.push_back(-std::log(f.ratio.abs().dbl()));
    auto alpha = arithmetic_lattice(logs, tol, q_max);
    if (alpha)
      verdict.lattice_alpha = alpha;
    else
      verdict.resonant = false;
  }
  return verdict;
}

}  // namespace resodim
