#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "resodim/marstrand.hpp"

using namespace resodim;

namespace {

constexpr double kPi = std::numbers::pi;

CellFamily manual_family(std::vector<Cell> cells, double rho) {
  CellFamily fam;
  fam.cells = std::move(cells);
  fam.rho = rho;
  fam.gamma = 1.0;
  fam.A = 2.0;
  fam.A1 = 1.0;
  fam.A2 = 1.0;
  return fam;
}

// maximum separated subfamily by exhaustive subset search
std::size_t brute_max(const CellFamily& fam, double theta) {
  std::size_t n = fam.cells.size();
  std::vector<std::pair<double, double>> proj;
  for (const auto& c : fam.cells) {
    Interval iv = project_cell(c, theta);
    proj.push_back({iv.lo.dbl(), iv.hi.dbl()});
  }
  std::size_t best = 0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (!(mask >> i & 1)) continue;
      for (std::size_t j = i + 1; j < n && ok; ++j) {
        if (!(mask >> j & 1)) continue;
        double gap = std::max(proj[j].first - proj[i].second,
                              proj[i].first - proj[j].second);
        if (!(gap > fam.rho)) ok = false;
      }
    }
    if (ok) best = std::max(best, static_cast<std::size_t>(__builtin_popcount(mask)));
  }
  return best;
}

}  // namespace

TEST_CASE("product_cells geometry and constants") {
  IFS1D c4 = central_cantor(Scalar::exact(1, 4));
  IFS1D c3 = central_cantor(Scalar::exact(1, 3));

  CellFamily f1 = product_cells(c4, c3, 1);
  CHECK(f1.cells.size() == 4);
  CHECK(f1.rho == doctest::Approx(0.25));
  CHECK(f1.cells[0].w == doctest::Approx(0.25));
  CHECK(f1.cells[0].h == doctest::Approx(1.0 / 3.0));  // M_1 = 4/3

  CellFamily f2 = product_cells(c4, c3, 2);
  CHECK(f2.cells.size() == 16);
  CHECK(f2.cells[0].h / f2.cells[0].w == doctest::Approx(16.0 / 9.0));

  CellFamily sq = product_cells(c3, c3, 3);
  CHECK(sq.cells[0].w == doctest::Approx(sq.cells[0].h));  // M_k = 1
  CHECK(sq.gamma == doctest::Approx(2 * std::log(2) / std::log(3)));

  IFS1D mixed = IFS1D::with_hull({{Scalar::exact(1, 2), Scalar(0)},
                                  {Scalar::exact(1, 4), Scalar::exact(3, 4)}},
                                 Interval(Scalar(0), Scalar(1)));
  CHECK_THROWS_AS(product_cells(mixed, c3, 2), DomainError);
  CHECK_THROWS_AS(product_cells(c4, c3, 0), DomainError);
}

TEST_CASE("project_cell closed forms") {
  Cell sq = Cell::rect(0, 0, 1, 1);
  Interval p0 = project_cell(sq, 0);
  CHECK(p0.lo.dbl() == doctest::Approx(0));
  CHECK(p0.hi.dbl() == doctest::Approx(1));
  Interval p45 = project_cell(sq, kPi / 4);
  CHECK(p45.lo.dbl() == doctest::Approx(0));
  CHECK(p45.hi.dbl() == doctest::Approx(std::sqrt(2.0)));

  Cell d = Cell::disk(0, 0, 0.3);
  for (double theta : {0.0, 0.7, 2.1}) {
    Interval pd = project_cell(d, theta);
    CHECK(pd.lo.dbl() == doctest::Approx(-0.3));
    CHECK(pd.hi.dbl() == doctest::Approx(0.3));
  }
}

TEST_CASE("separated_subfamily on aligned squares") {
  CellFamily fam = manual_family(
      {Cell::rect(0, 0, 1, 1), Cell::rect(3, 0, 1, 1), Cell::rect(6, 0, 1, 1)},
      1.0);
  CHECK(separated_subfamily(fam, 0).size() == 3);
  CHECK(separated_subfamily(fam, kPi / 2).size() == 1);
}

TEST_CASE("diagonal coincidence in Q_1 of C_{1/4} x C_{1/4}") {
  IFS1D c4 = central_cantor(Scalar::exact(1, 4));
  CellFamily q1 = product_cells(c4, c4, 1);
  REQUIRE(q1.cells.size() == 4);
  auto sel = separated_subfamily(q1, kPi / 4);
  CHECK(sel.size() == 2);
  CHECK(sel.size() == brute_max(q1, kPi / 4));
}

TEST_CASE("greedy equals brute force on random small families") {
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> pos(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 4 + rng() % 12;  // up to 15 cells
    double rho = 0.02 + 0.08 * pos(rng);
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < n; ++i)
      cells.push_back(Cell::disk(pos(rng), pos(rng), rho / 2));
    CellFamily fam = manual_family(std::move(cells), rho);
    double theta = kPi * pos(rng);
    CHECK(separated_subfamily(fam, theta).size() == brute_max(fam, theta));
  }
}

TEST_CASE("projection_length merges overlaps") {
  CellFamily one = manual_family({Cell::rect(0, 0, 1, 1)}, 0.5);
  CHECK(projection_length(one, 0) == doctest::Approx(1.0));

  CellFamily two = manual_family(
      {Cell::rect(0, 0, 1, 1), Cell::rect(5, 0, 1, 1)}, 0.5);
  CHECK(projection_length(two, 0) == doctest::Approx(2.0));

  IFS1D c3 = central_cantor(Scalar::exact(1, 3));
  CellFamily q2 = product_cells(c3, c3, 2);
  double merged = projection_length(q2, kPi / 4);
  double individual = 0;
  for (const auto& c : q2.cells) {
    Interval iv = project_cell(c, kPi / 4);
    individual += iv.hi.dbl() - iv.lo.dbl();
  }
  CHECK(merged < individual);
}

TEST_CASE("good_angle_set basic behavior") {
  CellFamily one = manual_family({Cell::rect(0.4, 0.4, 0.2, 0.2)}, 0.2);
  GoodAngleSet j = good_angle_set(one, 0.5, 64, 0.5);
  REQUIRE(j.intervals.size() == 1);
  CHECK(j.intervals[0].first == doctest::Approx(0.0));
  CHECK(j.intervals[0].second == doctest::Approx(kPi));
  CHECK(j.bad_measure == doctest::Approx(0.0));

  // two cells with coincident horizontal projections: theta near 0 is bad
  // once the threshold demands both cells
  CellFamily stacked = manual_family(
      {Cell::rect(0, 0, 0.2, 0.2), Cell::rect(0, 1, 0.2, 0.2)}, 0.2);
  GoodAngleSet js = good_angle_set(stacked, 0.9, 64, 1.0);
  CHECK(js.threshold == 2);
  bool zero_good = false;
  for (auto& iv : js.intervals)
    if (iv.first <= kPi / 128 && kPi / 128 <= iv.second) zero_good = true;
  CHECK(!zero_good);
  CHECK(js.bad_measure > 0);

  CHECK_THROWS_AS(good_angle_set(one, 1.5, 64, 0.5), DomainError);
  CHECK_THROWS_AS(good_angle_set(one, 0.5, 4, 0.5), DomainError);
}

TEST_CASE("calibrated delta meets the bad-measure budget") {
  IFS1D c4 = central_cantor(Scalar::exact(1, 4));
  CellFamily q3 = product_cells(c4, c4, 3);
  double eps = 0.1;
  double delta = calibrate_delta(q3, eps, 256);
  CHECK(delta > 0);
  GoodAngleSet j = good_angle_set(q3, eps, 256, delta);
  CHECK(j.bad_measure <= eps * kPi + 1e-12);
}

TEST_CASE("rotating a disk family shifts the angle profile") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> pos(-0.5, 0.5);
  std::vector<Cell> cells;
  for (int i = 0; i < 8; ++i)
    cells.push_back(Cell::disk(pos(rng), pos(rng), 0.01));
  CellFamily fam = manual_family(std::move(cells), 0.02);
  double phi = kPi / 8;
  CellFamily rot = rotated(fam, phi);
  for (int i = 0; i < 32; ++i) {
    double theta = kPi * i / 32.0;
    double shifted = std::fmod(theta + phi, kPi);
    CHECK(separated_subfamily(fam, theta).size() ==
          separated_subfamily(rot, shifted).size());
  }
  CellFamily rect = manual_family({Cell::rect(0, 0, 1, 1)}, 0.5);
  CHECK_THROWS_AS(rotated(rect, phi), DomainError);
}

TEST_CASE("riesz energy matches a Monte Carlo oracle for two far disks") {
  double rho = 0.01, d = 1.0;
  CellFamily fam = manual_family(
      {Cell::disk(0, 0, rho), Cell::disk(d, 0, rho)}, rho);
  double computed = riesz_energy(fam);

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto sample_disk = [&](double cx, double cy) {
    while (true) {
      double x = unit(rng), y = unit(rng);
      if (x * x + y * y <= 1.0)
        return std::pair<double, double>{cx + rho * x, cy + rho * y};
    }
  };
  const int trials = 4'000'000;
  double acc = 0;
  for (int t = 0; t < trials; ++t) {
    // pick cells uniformly (measure = average of the two disks)
    double c1 = (rng() & 1) ? d : 0.0;
    double c2 = (rng() & 1) ? d : 0.0;
    auto [x1, y1] = sample_disk(c1, 0);
    auto [x2, y2] = sample_disk(c2, 0);
    double dist = std::hypot(x1 - x2, y1 - y2);
    if (dist > 0) acc += 1.0 / dist;
  }
  double mc = acc / trials;
  CHECK(std::fabs(computed - mc) / mc < 0.01);

  CHECK_THROWS_AS(riesz_energy(manual_family({Cell::disk(0, 0, 1)}, 1)),
                  DomainError);
}
