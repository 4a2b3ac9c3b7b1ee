#include "resodim/tower.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "resodim/resonance.hpp"

namespace resodim {
namespace {

void check_ratio(const Scalar& r, const char* what) {
  Scalar a = r.abs();
  if (!(Scalar(0) < a && a < Scalar(1)))
    throw DomainError(std::string(what) + ": ratio must lie in (0,1)");
}

// largest K with rp^K >= r^(m*j); float estimate with exact adjudication of
// near-ties when both ratios are rational
long long exponent_K(const Scalar& r, const Scalar& rp, long long mj) {
  long double c = std::log(1.0L / static_cast<long double>(r.dbl())) /
                  std::log(1.0L / static_cast<long double>(rp.dbl()));
  long double t = static_cast<long double>(mj) * c;
  long long k = static_cast<long long>(std::floor(t));
  long double frac = t - static_cast<long double>(k);
  bool near_tie = frac < 1e-9L || frac > 1 - 1e-9L;
  if (near_tie && r.is_exact() && rp.is_exact()) {
    auto ge = [&](long long kk) {
      // rp^kk >= r^mj  <=>  num(rp)^kk den(r)^mj >= den(rp)^kk num(r)^mj
      BigInt lhs = boost::multiprecision::pow(numerator(rp.rat()),
                                              static_cast<unsigned>(kk)) *
                   boost::multiprecision::pow(denominator(r.rat()),
                                              static_cast<unsigned>(mj));
      BigInt rhs = boost::multiprecision::pow(denominator(rp.rat()),
                                              static_cast<unsigned>(kk)) *
                   boost::multiprecision::pow(numerator(r.rat()),
                                              static_cast<unsigned>(mj));
      return lhs >= rhs;
    };
    while (k > 0 && !ge(k)) --k;
    while (ge(k + 1)) ++k;
  }
  return k;
}

double orbit_value(const Scalar& r, const Scalar& rp, int m, long long j) {
  long long K = exponent_K(r, rp, static_cast<long long>(m) * j);
  return static_cast<double>(m) * j * std::log(1.0 / r.dbl()) -
         static_cast<double>(K) * std::log(1.0 / rp.dbl());
}

bool in_F(const RotationState& state, double x) {
  for (const auto& iv : state.F)
    if (iv.first < x && x < iv.second) return true;
  return false;
}

std::vector<Word> words_of_length(std::size_t alphabet, int len) {
  std::vector<Word> out;
  Word w;
  w.indices.assign(len, 0);
  while (true) {
    out.push_back(w);
    int i = len - 1;
    while (i >= 0 && w.indices[i] == static_cast<int>(alphabet) - 1) {
      w.indices[i] = 0;
      --i;
    }
    if (i < 0) break;
    ++w.indices[i];
  }
  return out;
}

void require_unit_hull(const IFS1D& ifs, const char* side) {
  bool ok;
  if (ifs.all_exact()) {
    ok = ifs.hull() == Interval(Scalar(0), Scalar(1));
  } else {
    ok = std::fabs(ifs.hull().lo.dbl()) < 1e-12 &&
         std::fabs(ifs.hull().hi.dbl() - 1.0) < 1e-12;
  }
  if (!ok)
    throw DomainError(std::string("tower: ") + side +
                      " hull must be normalized to [0,1]");
}

struct TemplateEntry {
  Word v, vp;
  Scalar lo, hi;  // projection interval at slope e^tau * M_j
};

}  // namespace

std::vector<MkRow> mk_sequence(const Scalar& r, const Scalar& rp, int k_max) {
  check_ratio(r, "mk_sequence");
  check_ratio(rp, "mk_sequence");
  if (k_max < 1) throw DomainError("mk_sequence: k_max must be >= 1");
  std::vector<MkRow> rows;
  for (int k = 1; k <= k_max; ++k) {
    long long kp = exponent_K(r.abs(), rp.abs(), k);
    MkRow row;
    row.k = k;
    row.kp = static_cast<int>(kp);
    row.M = rp.abs().pow(kp) / r.abs().pow(k);
    if (row.M.is_exact()) {
      row.resonant = row.M == Scalar(1);
    } else {
      row.resonant = std::fabs(std::log(row.M.dbl())) < 1e-12;
    }
    if (row.M < Scalar(1) || !(row.M * rp.abs() < Scalar(1)))
      throw InternalError("mk_sequence: M_k outside [1, 1/r')");
    rows.push_back(std::move(row));
  }
  return rows;
}

RotationState make_rotation_state(const IFS1D& left, const IFS1D& right,
                                  const Scalar& tau,
                                  const TowerParams& params) {
  if (!left.homogeneous() || !right.homogeneous())
    throw DomainError("tower: systems must be homogeneous");
  require_unit_hull(left, "left");
  require_unit_hull(right, "right");
  Scalar r = left.ratio().abs();
  Scalar rp = right.ratio().abs();
  if (rp < r)
    throw DomainError("tower: left ratio must be the smaller of the pair");
  ResonanceVerdict verdict =
      check_pair(left, right, params.q_max, params.tol);
  if (verdict.resonant)
    throw DomainError(
        "tower: pair is algebraically resonant (rational log-ratio); the "
        "rotation orbit would be periodic");

  RotationState state;
  state.r = r;
  state.rp = rp;
  state.m = params.m;
  state.tau = tau;
  state.beta = std::log(1.0 / rp.dbl());
  auto rows = mk_sequence(r, rp, params.m);
  state.alpha = std::log(rows.back().M.dbl());

  // good-scale set: Marstrand good angles of Q_m pulled back through
  // x = log(tan theta) - tau, clipped to [0, beta)
  CellFamily family = product_cells(left, right, params.m);
  double delta = calibrate_delta(family, params.eps, params.theta_steps);
  GoodAngleSet j =
      good_angle_set(family, params.eps, params.theta_steps, delta);
  double tau_d = tau.dbl();
  for (const auto& iv : j.intervals) {
    double t1 = std::max(iv.first, 1e-9);
    double t2 = std::min(iv.second, std::numbers::pi / 2 - 1e-9);
    if (!(t1 < t2)) continue;
    double x1 = std::log(std::tan(t1)) - tau_d;
    double x2 = std::log(std::tan(t2)) - tau_d;
    x1 = std::max(x1, 0.0);
    x2 = std::min(x2, state.beta);
    if (x1 < x2) state.F.push_back({x1, x2});
  }
  std::sort(state.F.begin(), state.F.end());
  return state;
}

std::vector<double> rotation_orbit(const RotationState& state, int steps) {
  if (steps < 1) throw DomainError("rotation_orbit: steps must be >= 1");
  std::vector<double> orbit;
  orbit.reserve(steps + 1);
  for (int j = 0; j <= steps; ++j)
    orbit.push_back(orbit_value(state.r, state.rp, state.m, j));
  return orbit;
}

WeylReport weyl_density(const RotationState& state, int steps) {
  auto orbit = rotation_orbit(state, steps);
  long long hits = 0;
  for (int j = 0; j < steps; ++j)
    if (in_F(state, orbit[j])) ++hits;
  WeylReport rep;
  rep.measured = static_cast<double>(hits) / steps;
  double len = 0;
  for (const auto& iv : state.F) len += iv.second - iv.first;
  rep.expected = len / state.beta;
  return rep;
}

TowerReport build_tree(const IFS1D& left, const IFS1D& right, const Scalar& tau,
                       const TowerParams& params) {
  if (params.levels < 0) throw DomainError("build_tree: levels must be >= 0");
  TowerReport report;
  report.state = make_rotation_state(left, right, tau, params);
  report.gamma = similarity_dimension(left.ratios()) +
                 similarity_dimension(right.ratios());
  const Scalar r = report.state.r;
  const Scalar rp = report.state.rp;
  const int m = params.m;
  bool exact_slope = tau.is_exact() && tau == Scalar(0) && left.all_exact() &&
                     right.all_exact();
  Scalar e_tau =
      exact_slope ? Scalar(1) : Scalar::approx(std::exp(tau.dbl()));

  auto left_words = words_of_length(left.size(), m);
  std::vector<long long> K(params.levels + 1);
  for (int j = 0; j <= params.levels; ++j)
    K[j] = exponent_K(r, rp, static_cast<long long>(m) * j);

  // materialized nodes as (x_lo, y_lo); audits run on sorted projections
  struct NodePos {
    Scalar x, y;
  };
  std::vector<NodePos> nodes = {{Scalar(0), Scalar(0)}};
  bool materialized = true;

  double log_branch_sum = 0;
  double min_good_branch = -1;
  for (int j = 0; j <= params.levels; ++j) {
    TowerLevel level;
    level.j = j;
    level.K = K[j];
    level.orbit = orbit_value(r, rp, m, j);
    level.good = in_F(report.state, level.orbit);
    level.materialized = materialized;
    level.node_count =
        materialized ? static_cast<long long>(nodes.size()) : -1;

    if (j < params.levels) {
      int delta_kp = static_cast<int>(K[j + 1] - K[j]);
      if (delta_kp < 1)
        throw InternalError("build_tree: non-increasing exponent sequence");
      Scalar M = rp.pow(K[j]) / r.pow(static_cast<long>(m) * j);
      Scalar slope = e_tau * M;  // template projection slope
      Scalar w = r.pow(m);
      Scalar h = slope * rp.pow(delta_kp);

      std::vector<TemplateEntry> cands;
      auto right_words = words_of_length(right.size(), delta_kp);
      for (const auto& v : left_words) {
        Scalar x = cylinder(left, v).interval.lo;
        for (const auto& vp : right_words) {
          Scalar y = cylinder(right, vp).interval.lo;
          Scalar lo = x + slope * y;
          cands.push_back({v, vp, lo, lo + w + h});
        }
      }

      std::vector<TemplateEntry> chosen;
      if (level.good) {
        std::sort(cands.begin(), cands.end(),
                  [](const TemplateEntry& a, const TemplateEntry& b) {
                    return a.hi < b.hi;
                  });
        for (auto& c : cands) {
          if (chosen.empty() || c.lo - chosen.back().hi > w)
            chosen.push_back(std::move(c));
        }
      } else {
        chosen.push_back(cands.front());  // word 0^m x 0^delta
      }

      // exact template audits: separation by more than r^m, nesting in the
      // unit template
      for (std::size_t a = 1; a < chosen.size(); ++a) {
        if (!(chosen[a].lo - chosen[a - 1].hi > w))
          throw InternalError("build_tree: template separation audit failed");
      }
      for (const auto& c : chosen) {
        Scalar x = cylinder(left, c.v).interval.lo;
        Scalar y = cylinder(right, c.vp).interval.lo;
        if (x < Scalar(0) || Scalar(1) < x + w || y < Scalar(0) ||
            Scalar(1) < y + rp.pow(delta_kp))
          throw InternalError("build_tree: template nesting audit failed");
      }

      level.child_count = static_cast<long long>(chosen.size());
      for (auto& c : chosen) level.child_template.push_back({c.v, c.vp});
      log_branch_sum += std::log(static_cast<double>(level.child_count));
      if (level.good) {
        double ratio = static_cast<double>(level.child_count) /
                       (params.eps * std::pow(r.dbl(), -m * report.gamma));
        if (min_good_branch < 0 || ratio < min_good_branch)
          min_good_branch = ratio;
      }

      // grow and audit the materialized node list
      if (materialized) {
        std::size_t next = nodes.size() * chosen.size();
        if (next > params.max_nodes) {
          materialized = false;
          nodes.clear();
        } else {
          Scalar xw = r.pow(static_cast<long>(m) * j);
          Scalar yw = rp.pow(K[j]);
          std::vector<NodePos> grown;
          grown.reserve(next);
          for (const auto& n : nodes) {
            for (const auto& c : chosen) {
              grown.push_back({n.x + xw * cylinder(left, c.v).interval.lo,
                               n.y + yw * cylinder(right, c.vp).interval.lo});
            }
          }
          nodes = std::move(grown);
          // level j+1 separation: sorted tau-projections must have gaps
          // greater than r^{m(j+1)}
          Scalar width = r.pow(static_cast<long>(m) * (j + 1)) +
                         e_tau * rp.pow(K[j + 1]);
          std::vector<Scalar> projs;
          projs.reserve(nodes.size());
          for (const auto& n : nodes) projs.push_back(n.x + e_tau * n.y);
          std::sort(projs.begin(), projs.end());
          Scalar sep = r.pow(static_cast<long>(m) * (j + 1));
          for (std::size_t a = 1; a < projs.size(); ++a) {
            if (!(projs[a] - (projs[a - 1] + width) > sep))
              throw InternalError(
                  "build_tree: level separation audit failed at level " +
                  std::to_string(j + 1));
          }
        }
      }
    }
    report.levels.push_back(std::move(level));
  }

  report.weyl = weyl_density(report.state, 100'000);
  if (params.levels > 0) {
    report.certified_slope =
        log_branch_sum /
        (params.levels * m * std::log(1.0 / r.dbl()));
  }
  // informational closed form: (1 - (2L/beta) eps) log(delta1^-1 eps^-1
  // r^{-m gamma}) / (m log(1/r)) with measured stand-ins for L and delta1
  double len_f = 0;
  for (const auto& iv : report.state.F) len_f += iv.second - iv.first;
  double delta1 = min_good_branch > 0 ? std::min(1.0, min_good_branch) : 1.0;
  double inner = std::log(1.0 / delta1) + std::log(1.0 / params.eps) +
                 m * report.gamma * std::log(1.0 / r.dbl());
  report.theoretical_slope =
      std::max(0.0, (1.0 - (2.0 * len_f / report.state.beta) * params.eps)) *
      inner / (m * std::log(1.0 / r.dbl()));
  return report;
}

double frostman_bound(const TowerReport& report) {
  if (report.levels.size() < 4)
    throw DomainError("frostman_bound: need a tree with at least 3 levels");
  double sum = 0;
  int branches = 0;
  for (const auto& level : report.levels) {
    if (level.j + 1 < static_cast<int>(report.levels.size())) {
      sum += std::log(static_cast<double>(level.child_count));
      ++branches;
    }
  }
  return sum / (branches * report.state.m * std::log(1.0 / report.state.r.dbl()));
}

}  // namespace resodim
