#pragma once

#include <map>
#include <vector>

#include "resodim/ifs.hpp"

namespace resodim {

/// Constants of the resonant-pair construction. Exponent multisets are kept
/// symbolically as exponent -> multiplicity maps; the normalization that
/// equalizes the first two exponents of both systems would otherwise
/// materialize exponentially many maps.
struct DropInstance {
  Scalar xi;                            // common base, 0 < xi < 1
  std::vector<long long> a_raw, b_raw;  // input exponent lists
  std::map<long long, BigInt> a_exp, b_exp;  // after the reordering trick
  std::vector<Scalar> t, tp;            // translations (optional)
  double beta = 0, betap = 0;           // sum dimensions: sum xi^{beta a_i} = 1
  long long a = 0, b = 0;               // gcds
  long long A = 0, B = 0;               // maxima
  long long M0 = 0;                     // representation threshold
  long long M = 0;                      // chosen multiple of ab
  long long ell = 0;                    // common exponent after reordering
  double p = 0;                         // min renewal hitting probability
  double q = 0;                         // (xi^{ell(beta+beta')} p^2)^2
};

struct DigitSumReport {
  std::vector<Scalar> D, Dp;
  Scalar s;
  long long sum_size = 0;
  double bound = 0;  // log |D + s D'| / log(1/xi)
};

/// s = (t_n - t_1)/(t'_n' - t'_1) for sorted translation lists.
Scalar resonant_scale(const std::vector<Scalar>& t,
                      const std::vector<Scalar>& tp);

/// Cardinality of {d + s d'} with exact dedup, and the dimension bound.
DigitSumReport digit_collision(std::vector<Scalar> D, std::vector<Scalar> Dp,
                               const Scalar& s, const Scalar& xi);

/// (gcd g, M0): the smallest M0 such that every multiple of g >= M0 is a
/// nonnegative integer combination of the steps.
std::pair<long long, long long> representation_threshold(
    const std::vector<long long>& steps);

/// Probability the renewal walk with the given steps hits the target
/// exactly: h(0) = 1, h(m) = sum_j probs_j h(m - steps_j).
Scalar hit_probability(long long target, const std::vector<long long>& steps,
                       const std::vector<Scalar>& probs);

/// Builds the full instance: reordering normalization, gcds, M0 via the
/// representation DP, M, hitting probabilities, and q.
DropInstance make_drop_instance(const Scalar& xi, std::vector<long long> a_exp,
                                std::vector<long long> b_exp,
                                std::vector<Scalar> t = {},
                                std::vector<Scalar> tp = {});

/// ((beta+beta') M log(1/xi) + log(1-q)) / (M log(1/xi)), strictly below
/// beta + beta'.
double essential_pair_bound(const DropInstance& inst);

}  // namespace resodim
