#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "resodim/ifs.hpp"
#include "resodim/marstrand.hpp"

namespace resodim {

/// Rotation R(x) = x + alpha (mod beta) driving the tower, with the
/// good-scale set F as open subintervals of [0, beta).
struct RotationState {
  double alpha = 0;  // log M_m
  double beta = 0;   // log(1/r')
  std::vector<std::pair<double, double>> F;
  Scalar r, rp;  // |ratio| of the two systems
  int m = 1;
  Scalar tau;
};

struct MkRow {
  int k = 0;
  int kp = 0;  // largest k' with (r')^{k'} >= r^k
  Scalar M;    // (r')^{k'} / r^k, in [1, 1/r')
  bool resonant = false;  // M == 1 exactly (lattice relation hit)
};

struct WeylReport {
  double measured = 0;
  double expected = 0;  // L(F) / beta
};

struct TowerLevel {
  int j = 0;
  long long K = 0;     // exponent of r' at this level
  double orbit = 0;    // R^j(0)
  bool good = false;   // orbit in F
  long long child_count = 1;  // C_j: children per node toward level j+1
  std::vector<std::pair<Word, Word>> child_template;  // relative words
  long long node_count = 1;
  bool materialized = true;  // pairwise audit ran on explicit nodes
};

struct TowerParams {
  int m = 3;
  double eps = 0.2;
  int levels = 8;
  int theta_steps = 1024;
  long long q_max = 1'000'000;
  double tol = 1e-12;
  std::size_t max_nodes = 200'000;
};

struct TowerReport {
  RotationState state;
  std::vector<TowerLevel> levels;
  WeylReport weyl;
  double certified_slope = 0;   // from measured branching counts
  double theoretical_slope = 0; // closed-form display, informational
  double gamma = 0;             // dim + dim'
};

/// (k, k', M_k) rows for k = 1..k_max.
std::vector<MkRow> mk_sequence(const Scalar& r, const Scalar& rp, int k_max);

/// State for the pair: alpha = log M_m, beta = log(1/r'), F from the
/// Marstrand good-angle sweep of Q_m mapped through log tan.
RotationState make_rotation_state(const IFS1D& left, const IFS1D& right,
                                  const Scalar& tau, const TowerParams& params);

/// Orbit R^j(0), j = 0..steps, by exact exponent bookkeeping.
std::vector<double> rotation_orbit(const RotationState& state, int steps);

/// Fraction of the first `steps` orbit points lying in F, with L(F)/beta.
WeylReport weyl_density(const RotationState& state, int steps);

/// Builds the level tower with exact property audits and the Frostman
/// branching bound.
TowerReport build_tree(const IFS1D& left, const IFS1D& right, const Scalar& tau,
                       const TowerParams& params);

/// Certified lower bound from measured branching counts.
double frostman_bound(const TowerReport& report);

}  // namespace resodim
