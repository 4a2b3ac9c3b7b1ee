#pragma once

#include <cstdint>
#include <vector>

#include "resodim/boxdim.hpp"
#include "resodim/ifs.hpp"

namespace resodim {

/// Axis-aligned rectangle or disk in the plane. Projection geometry runs in
/// double precision; angles are irrational multiples of pi in general.
struct Cell {
  enum class Kind { Rect, Disk } kind;
  // rect: corner (x0,y0), size w x h; disk: center (x0,y0), radius w
  double x0 = 0, y0 = 0, w = 0, h = 0;

  static Cell rect(double x0, double y0, double w, double h) {
    return {Kind::Rect, x0, y0, w, h};
  }
  static Cell disk(double cx, double cy, double r) {
    return {Kind::Disk, cx, cy, r, r};
  }
  double center_x() const { return kind == Kind::Rect ? x0 + w / 2 : x0; }
  double center_y() const { return kind == Kind::Rect ? y0 + h / 2 : y0; }
};

struct CellFamily {
  std::vector<Cell> cells;
  double rho = 0;    // separation scale
  double A = 0;      // inscribed/circumscribed disk distortion
  double A1 = 0;     // cardinality constant: |cells| >= rho^-gamma / A1
  double A2 = 0;     // covering constant: disk of radius l meets <= A2 (l/rho)^gamma cells
  double gamma = 0;  // dimension exponent of the family
};

struct GoodAngleSet {
  std::vector<std::pair<double, double>> intervals;  // open, sorted, disjoint
  double eps = 0;
  double delta = 0;
  double bad_measure = 0;  // pi minus the total length of the intervals
  std::size_t threshold = 0;  // subfamily size required for a good angle
};

/// Product cylinders I(u) x I'(u') at depth (k, k'), with k' the largest
/// integer keeping the aspect ratio M_k = (r')^{k'} / r^k in [1, 1/r').
CellFamily product_cells(const IFS1D& left, const IFS1D& right, int k);

/// Exact projection of a cell onto the line through the origin at angle
/// theta, as an interval of signed coordinates.
Interval project_cell(const Cell& cell, double theta);

/// Maximum subfamily with pairwise rho-separated projections (gap strictly
/// greater than rho), by the earliest-right-endpoint greedy sweep. The
/// returned selection is re-audited for pairwise separation before return.
std::vector<std::size_t> separated_subfamily(const CellFamily& family,
                                             double theta);

/// Total length of the union of cell projections at angle theta.
double projection_length(const CellFamily& family, double theta);

/// Sweeps a uniform theta grid over [0, pi); an angle is good when the
/// separated subfamily has size >= eps * delta * |cells|.
GoodAngleSet good_angle_set(const CellFamily& family, double eps,
                            int theta_steps, double delta);

/// Largest delta for which at least (1 - eps) * pi of the grid angles
/// qualify as good.
double calibrate_delta(const CellFamily& family, double eps, int theta_steps);

/// Riesz 1-energy of the normalized uniform measure on the family: exact
/// closed-form near-field term per cell plus center-distance cross terms.
double riesz_energy(const CellFamily& family);

/// Family with every (disk) cell rotated about the origin by phi.
CellFamily rotated(const CellFamily& family, double phi);

}  // namespace resodim
