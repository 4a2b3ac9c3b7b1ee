#pragma once

#include <cstdint>
#include <vector>

#include "resodim/ifs.hpp"
#include "resodim/interval.hpp"

namespace resodim {

/// Sorted union of disjoint intervals at a generation scale.
struct Cover1D {
  Scalar delta;
  std::vector<Interval> intervals;
  Scalar total_length() const {
    Scalar sum(0);
    for (const auto& iv : intervals) sum += iv.length();
    return sum;
  }
};

struct BoxCountRow {
  int k = 0;
  Scalar delta;
  long long count = 0;
};

struct BoxCountSeries {
  std::vector<BoxCountRow> rows;
};

struct DimensionEstimate {
  double value = 0;
  double stderr_ = 0;
  double max_residual = 0;
  int k_min = 0;
  int k_max = 0;
  bool degenerate = false;
};

struct Budgets {
  std::size_t max_cells = 100'000'000;       // cover cells / cylinders
  std::size_t max_grid = 1'000'000'000;      // grid bitmap bits
  std::size_t max_cover_intervals = 50'000'000;
};

/// Cylinders with diameter in (r_min*delta, delta], refined depth-first and
/// stopped the first time the diameter drops to delta or below.
std::vector<CylinderInterval> cylinders_at_scale(const IFS1D& ifs,
                                                 const Scalar& delta,
                                                 std::size_t max_cells);

/// Merged union of a set of intervals; adjacency below the mode's gap
/// threshold is fused.
Cover1D merge_cover(std::vector<Interval> intervals, const Scalar& delta);

/// Merged union of { I(u) + s*I'(u') } over scale-delta cylinder pairs.
Cover1D sum_cover(const IFS1D& left, const IFS1D& right, const Scalar& s,
                  const Scalar& delta, const Budgets& budgets = {});

/// Grid boxes [j*delta, (j+1)*delta) meeting the cover; grid anchored at 0,
/// an endpoint sitting exactly on a boundary counts the left cell only.
long long box_count(const Cover1D& cover, const Scalar& delta);

/// Box count of the sum set's cylinder-pair cover, streamed without
/// materializing the cover.
long long sum_box_count(const IFS1D& left, const IFS1D& right, const Scalar& s,
                        const Scalar& delta, const Budgets& budgets = {});

/// OLS slope of log N against log(1/delta).
DimensionEstimate estimate_dimension(const BoxCountSeries& series);

struct DimParams {
  int k_min = 6;
  int k_max = 12;
  int skip_coarsest = 2;       // transient regime excluded from regression
  Scalar scale_ratio = Scalar(0);  // delta_k = scale_ratio^k; 0 = auto
  Budgets budgets;
};

struct DimReport {
  Scalar scale_ratio;
  BoxCountSeries series;       // all computed rows
  DimensionEstimate estimate;  // over the regression window
};

/// Scale ladder for a pair of systems: the dominant contraction ratio when
/// both are homogeneous, else 1/2.
Scalar default_scale_ratio(const IFS1D& left, const IFS1D* right);

/// Box dimension of a single attractor.
DimReport dim_single(const IFS1D& ifs, const DimParams& params);

/// Box dimension of K + s K'.
DimReport dim_report(const IFS1D& left, const IFS1D& right, const Scalar& s,
                     const DimParams& params);

}  // namespace resodim
