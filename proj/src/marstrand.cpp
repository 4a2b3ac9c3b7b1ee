#include "resodim/marstrand.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace resodim {
namespace {

constexpr double kPi = std::numbers::pi;

struct Proj {
  double lo, hi;
  std::size_t idx;
};

std::vector<Proj> all_projections(const CellFamily& family, double theta) {
  std::vector<Proj> out;
  out.reserve(family.cells.size());
  for (std::size_t i = 0; i < family.cells.size(); ++i) {
    Interval iv = project_cell(family.cells[i], theta);
    out.push_back({iv.lo.dbl(), iv.hi.dbl(), i});
  }
  return out;
}

}  // namespace

CellFamily product_cells(const IFS1D& left, const IFS1D& right, int k) {
  if (k < 1) throw DomainError("product_cells: k must be >= 1");
  if (!left.homogeneous() || !right.homogeneous())
    throw DomainError(
        "product_cells: systems must be homogeneous; apply homogenize first");
  Scalar r = left.ratio().abs();
  Scalar rp = right.ratio().abs();

  // largest k' with (r')^{k'} >= r^k, so M_k = (r')^{k'} / r^k lies in
  // [1, 1/r'); equal ratios give squares
  Scalar rk = r.pow(k);
  int kp = 0;
  Scalar acc(1);
  while (acc * rp >= rk) {
    acc *= rp;
    ++kp;
    if (kp > 1'000'000)
      throw InternalError("product_cells: runaway aspect search");
  }
  if (kp < 1) throw DomainError("product_cells: k too small for aspect rule");

  auto lc = cylinders_at_scale(left, rk * left.hull().length(), 100'000'000);
  auto rc =
      cylinders_at_scale(right, acc * right.hull().length(), 100'000'000);

  CellFamily fam;
  double w = (rk * left.hull().length()).dbl();
  double h = (acc * right.hull().length()).dbl();
  fam.rho = w;
  double aspect = h / w;
  fam.A = std::max(2.0, std::sqrt(1.0 + aspect * aspect) / 2.0);
  fam.gamma = similarity_dimension(left.ratios()) +
              similarity_dimension(right.ratios());
  fam.cells.reserve(lc.size() * rc.size());
  for (const auto& cu : lc) {
    for (const auto& cv : rc) {
      fam.cells.push_back(
          Cell::rect(cu.interval.lo.dbl(), cv.interval.lo.dbl(), w, h));
    }
  }
  fam.A1 = std::max(
      1.0, std::pow(fam.rho, -fam.gamma) / static_cast<double>(fam.cells.size()));

  // covering constant from a deterministic audit: disks centered at a sample
  // of cell centers, dyadic radii between rho and the family diameter
  double a2 = 1.0;
  std::size_t stride = std::max<std::size_t>(1, fam.cells.size() / 64);
  for (std::size_t i = 0; i < fam.cells.size(); i += stride) {
    double cx = fam.cells[i].center_x();
    double cy = fam.cells[i].center_y();
    for (double ell = 2 * fam.rho; ell < 2.0; ell *= 2) {
      std::size_t hit = 0;
      for (const auto& c : fam.cells) {
        double dx = c.center_x() - cx;
        double dy = c.center_y() - cy;
        if (std::sqrt(dx * dx + dy * dy) <= ell) ++hit;
      }
      a2 = std::max(a2, static_cast<double>(hit) /
                            std::pow(ell / fam.rho, fam.gamma));
    }
  }
  fam.A2 = a2;
  return fam;
}

Interval project_cell(const Cell& cell, double theta) {
  double c = std::cos(theta), s = std::sin(theta);
  double mid = cell.center_x() * c + cell.center_y() * s;
  double half;
  if (cell.kind == Cell::Kind::Rect) {
    half = (cell.w * std::fabs(c) + cell.h * std::fabs(s)) / 2;
  } else {
    half = cell.w;
  }
  return Interval(Scalar::approx(mid - half), Scalar::approx(mid + half));
}

std::vector<std::size_t> separated_subfamily(const CellFamily& family,
                                             double theta) {
  auto projs = all_projections(family, theta);
  std::sort(projs.begin(), projs.end(),
            [](const Proj& a, const Proj& b) { return a.hi < b.hi; });
  std::vector<std::size_t> chosen;
  double last_hi = 0;
  for (const auto& p : projs) {
    if (chosen.empty() || p.lo - last_hi > family.rho) {
      chosen.push_back(p.idx);
      last_hi = p.hi;
    }
  }
  std::sort(chosen.begin(), chosen.end());

  // hard audit, recomputed from scratch: sorted by left endpoint, every
  // interval must clear the running max right endpoint by more than rho,
  // which is equivalent to pairwise separation
  std::vector<std::pair<double, double>> audit;
  audit.reserve(chosen.size());
  for (std::size_t idx : chosen) {
    Interval iv = project_cell(family.cells[idx], theta);
    audit.push_back({iv.lo.dbl(), iv.hi.dbl()});
  }
  std::sort(audit.begin(), audit.end());
  bool first = true;
  double run_hi = 0;
  for (const auto& [lo, hi] : audit) {
    if (!first && !(lo - run_hi > family.rho))
      throw InternalError("separated_subfamily: separation audit failed");
    run_hi = first ? hi : std::max(run_hi, hi);
    first = false;
  }
  return chosen;
}

double projection_length(const CellFamily& family, double theta) {
  auto projs = all_projections(family, theta);
  std::sort(projs.begin(), projs.end(),
            [](const Proj& a, const Proj& b) { return a.lo < b.lo; });
  double total = 0, cur_lo = 0, cur_hi = 0;
  bool open = false;
  for (const auto& p : projs) {
    if (!open) {
      cur_lo = p.lo;
      cur_hi = p.hi;
      open = true;
    } else if (p.lo <= cur_hi) {
      cur_hi = std::max(cur_hi, p.hi);
    } else {
      total += cur_hi - cur_lo;
      cur_lo = p.lo;
      cur_hi = p.hi;
    }
  }
  if (open) total += cur_hi - cur_lo;
  return total;
}

GoodAngleSet good_angle_set(const CellFamily& family, double eps,
                            int theta_steps, double delta) {
  if (!(eps > 0 && eps < 1)) throw DomainError("good_angle_set: eps in (0,1)");
  if (theta_steps < 8) throw DomainError("good_angle_set: theta_steps >= 8");
  GoodAngleSet out;
  out.eps = eps;
  out.delta = delta;
  double need = eps * delta * static_cast<double>(family.cells.size());
  out.threshold = static_cast<std::size_t>(std::ceil(need));
  if (out.threshold == 0) out.threshold = 1;

  double h = kPi / theta_steps;
  int run_start = -1;
  double good_total = 0;
  for (int i = 0; i < theta_steps; ++i) {
    double theta = (i + 0.5) * h;
    bool good = separated_subfamily(family, theta).size() >= out.threshold;
    if (good && run_start < 0) run_start = i;
    if (!good && run_start >= 0) {
      out.intervals.push_back({run_start * h, i * h});
      good_total += (i - run_start) * h;
      run_start = -1;
    }
  }
  if (run_start >= 0) {
    out.intervals.push_back({run_start * h, kPi});
    good_total += (theta_steps - run_start) * h;
  }
  out.bad_measure = kPi - good_total;
  return out;
}

double calibrate_delta(const CellFamily& family, double eps, int theta_steps) {
  if (!(eps > 0 && eps < 1)) throw DomainError("calibrate_delta: eps in (0,1)");
  if (theta_steps < 8) throw DomainError("calibrate_delta: theta_steps >= 8");
  double h = kPi / theta_steps;
  std::vector<std::size_t> sizes;
  sizes.reserve(theta_steps);
  for (int i = 0; i < theta_steps; ++i)
    sizes.push_back(separated_subfamily(family, (i + 0.5) * h).size());
  std::sort(sizes.begin(), sizes.end());
  // allow at most eps * steps bad angles; the threshold is the size at that
  // quantile, and delta follows from size >= eps * delta * n
  std::size_t allowed_bad =
      static_cast<std::size_t>(std::floor(eps * theta_steps));
  std::size_t s = sizes[std::min(allowed_bad, sizes.size() - 1)];
  return static_cast<double>(s) /
         (eps * static_cast<double>(family.cells.size()));
}

double riesz_energy(const CellFamily& family) {
  if (family.cells.size() < 2)
    throw DomainError("riesz_energy: need at least 2 cells");
  std::size_t n = family.cells.size();
  double inv_n2 = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Cell& a = family.cells[i];
    // uniform disk of equal area: mean inverse distance is 16 / (3 pi R)
    double area = a.kind == Cell::Kind::Rect ? a.w * a.h : kPi * a.w * a.w;
    double req = std::sqrt(area / kPi);
    total += inv_n2 * 16.0 / (3.0 * kPi * req);
    for (std::size_t j = i + 1; j < n; ++j) {
      const Cell& b = family.cells[j];
      double dx = a.center_x() - b.center_x();
      double dy = a.center_y() - b.center_y();
      double d = std::sqrt(dx * dx + dy * dy);
      if (d <= 0)
        throw DomainError("riesz_energy: coincident cell centers");
      total += 2.0 * inv_n2 / d;
    }
  }
  return total;
}

CellFamily rotated(const CellFamily& family, double phi) {
  CellFamily out = family;
  double c = std::cos(phi), s = std::sin(phi);
  for (auto& cell : out.cells) {
    if (cell.kind != Cell::Kind::Disk)
      throw DomainError("rotated: only disk families rotate exactly");
    double x = cell.x0 * c - cell.y0 * s;
    double y = cell.x0 * s + cell.y0 * c;
    cell.x0 = x;
    cell.y0 = y;
  }
  return out;
}

}  // namespace resodim
