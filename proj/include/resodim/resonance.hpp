#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "resodim/ifs.hpp"
#include "resodim/scalar.hpp"

namespace resodim {

struct RationalWitness {
  long long p;
  long long q;  // q*log(x) == p*log(y) up to tolerance (exactly in exact mode)
};

struct ResonanceVerdict {
  bool resonant = false;
  // one optional witness per cross pair (j, j'), row-major over (n, n')
  std::vector<std::optional<RationalWitness>> witnesses;
  std::optional<double> lattice_alpha;
  long long denominator_bound = 0;
  double tolerance = 0;
};

/// Looks for (p, q), q <= q_max, with |q*log x - p*log y| <= tol. When both
/// inputs are exact rationals that are integer powers of a common rational,
/// the relation is detected exactly from prime exponents, without logs.
std::optional<RationalWitness> is_rational_ratio(const Scalar& x,
                                                 const Scalar& y,
                                                 long long q_max, double tol);

/// Largest alpha fitting every entry as an integer multiple (<= q_max),
/// within tol; nullopt when the entries are not commensurable at that bound.
std::optional<double> arithmetic_lattice(const std::vector<double>& logs,
                                         double tol, long long q_max);

/// Full algebraic-resonance check across two systems.
ResonanceVerdict check_pair(const IFS1D& a, const IFS1D& b, long long q_max,
                            double tol);

}  // namespace resodim
