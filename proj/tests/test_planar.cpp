#include <doctest.h>

#include <cmath>
#include <numbers>

#include "resodim/planar.hpp"

using namespace resodim;
using std::numbers::pi;

namespace {

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

// three maps with zeta = 0.3 at third-root positions, rotating by `angle`
IFS2D triple(double angle, bool reflect = false) {
  std::vector<Similitude2D> maps;
  for (int i = 0; i < 3; ++i) {
    double a = 2 * pi * i / 3;
    maps.push_back({Scalar::exact(3, 10), angle, reflect,
                    Scalar::approx(0.6 * std::cos(a)),
                    Scalar::approx(0.6 * std::sin(a))});
  }
  return IFS2D::create(std::move(maps), 0, 0, 1.0);
}

IFS2D full_square() {
  std::vector<Similitude2D> maps;
  for (double tx : {0.0, 0.5})
    for (double ty : {0.0, 0.5})
      maps.push_back({Scalar::exact(1, 2), 0.0, false, Scalar::approx(tx),
                      Scalar::approx(ty)});
  return IFS2D::create(std::move(maps), 0.5, 0.5, std::sqrt(0.5));
}

}  // namespace

TEST_CASE("dense_rotation_check") {
  CHECK(dense_rotation_check(triple(kGolden * pi)).verdict == Density::dense);
  CHECK(dense_rotation_check(triple(0.0)).verdict == Density::not_dense);
  // rational nonzero rotation: finite up to length 2, left open
  CHECK(dense_rotation_check(triple(pi / 3)).verdict == Density::inconclusive);

  // two reflections whose product rotates by an irrational multiple of pi
  IFS2D mirrors = IFS2D::create(
      {{Scalar::exact(3, 10), 1.0, true, Scalar::approx(0.3),
        Scalar::approx(0.0)},
       {Scalar::exact(3, 10), 1.0 - kGolden * pi, true, Scalar::approx(-0.3),
        Scalar::approx(0.0)}},
      0, 0, 1.0);
  RotationCheck res = dense_rotation_check(mirrors);
  CHECK(res.verdict == Density::dense);
  REQUIRE(res.witness_angle.has_value());
}

TEST_CASE("ball_cover refinement counts and radius band") {
  IFS2D sys = triple(kGolden * pi);
  for (int k = 1; k <= 5; ++k) {
    Scalar delta = Scalar::exact(3, 10).pow(k);
    double d = delta.dbl();
    BallCover cover = ball_cover(sys, Scalar::approx(d));
    CHECK(cover.balls.size() == static_cast<std::size_t>(std::pow(3.0, k)));
    for (const auto& b : cover.balls) {
      CHECK(b.radius == doctest::Approx(d).epsilon(1e-12));
      CHECK(b.word.size() == static_cast<std::size_t>(k));
    }
  }

  BallCover root = ball_cover(sys, Scalar(1));
  REQUIRE(root.balls.size() == 1);
  CHECK(root.balls[0].word.size() == 0);
  CHECK(root.balls[0].radius == doctest::Approx(1.0));

  // mixed ratios stay inside (zeta_min delta, delta]
  IFS2D mixed = IFS2D::create(
      {{Scalar::exact(3, 10), 0.2, false, Scalar::approx(0.5),
        Scalar::approx(0.0)},
       {Scalar::exact(1, 2), 1.1, false, Scalar::approx(-0.4),
        Scalar::approx(0.1)}},
      0, 0, 1.0);
  BallCover band = ball_cover(mixed, Scalar::approx(0.2));
  for (const auto& b : band.balls) {
    CHECK(b.radius > 0.3 * 0.2 - 1e-12);
    CHECK(b.radius <= 0.2 + 1e-12);
  }

  // coincident balls from duplicated maps collapse
  IFS2D dup = IFS2D::create(
      {{Scalar::exact(3, 10), 0.0, false, Scalar::approx(0.5),
        Scalar::approx(0.0)},
       {Scalar::exact(3, 10), 0.0, false, Scalar::approx(0.5),
        Scalar::approx(0.0)},
       {Scalar::exact(3, 10), 0.0, false, Scalar::approx(-0.5),
        Scalar::approx(0.0)}},
      0, 0, 1.0);
  BallCover collapsed = ball_cover(dup, Scalar::approx(0.09));
  CHECK(collapsed.balls.size() == 4);  // words over {0,1} coincide with 0-runs

  CHECK_THROWS_AS(ball_cover(sys, Scalar(2)), DomainError);
  CHECK_THROWS_AS(ball_cover(sys, Scalar(0)), DomainError);
  CHECK_THROWS_AS(ball_cover(sys, Scalar::approx(1e-4), 100), ResourceError);
}

TEST_CASE("projection_profile of a dimension-2 system is flat at 1") {
  ProfileParams params;
  params.k_min = 3;
  params.k_max = 8;
  ProjectionProfile prof = projection_profile(full_square(), 8, params);
  REQUIRE(prof.rows.size() == 8);
  for (const auto& row : prof.rows) {
    CHECK(std::fabs(row.estimate.value - 1.0) < 0.05);
    CHECK(row.estimate.value <= 1.0 + row.estimate.stderr_ + 0.03);
  }
}

TEST_CASE("projection_profile with irrational rotation has no drop") {
  IFS2D sys = triple(kGolden * pi);
  double gamma = std::log(3.0) / std::log(10.0 / 3.0);
  ProfileParams params;
  params.k_min = 4;
  params.k_max = 9;
  params.skip_coarsest = 0;
  ProjectionProfile prof = projection_profile(sys, 8, params);
  // finite-scale slopes trail the limit from the interval fringe; the band
  // tightens as the window deepens
  for (const auto& row : prof.rows) {
    CHECK(std::fabs(row.estimate.value - gamma) < 0.12);
    CHECK(row.estimate.value <= 1.0 + 0.03);
  }
}

TEST_CASE("projection_profile degenerate direction of an axis system") {
  IFS2D axis = IFS2D::create(
      {{Scalar::exact(3, 10), 0.0, false, Scalar::approx(0.0),
        Scalar::approx(0.0)},
       {Scalar::exact(3, 10), 0.0, false, Scalar::approx(0.7),
        Scalar::approx(0.0)}},
      0.5, 0.0, 0.6);
  ProfileParams params;
  params.k_max = 8;
  ProjectionProfile prof = projection_profile(axis, 4, params);
  REQUIRE(prof.rows.size() == 4);
  CHECK(prof.rows[2].xi == doctest::Approx(pi / 2));
  CHECK(std::fabs(prof.rows[2].estimate.value) < 0.05);  // projects to a point
  double cantor = std::log(2.0) / std::log(10.0 / 3.0);
  CHECK(std::fabs(prof.rows[0].estimate.value - cantor) < 0.06);
}

TEST_CASE("rotation covariance shifts the profile") {
  IFS2D sys = triple(kGolden * pi);
  int steps = 4;
  double phi = pi / steps;
  IFS2D rotated = rotate_system(sys, phi);

  // pointwise conjugation check: g(R_phi p) = R_phi f(p) about the center
  for (std::size_t i = 0; i < sys.size(); ++i) {
    double px = 0.37, py = -0.21;
    double rx = std::cos(phi) * px - std::sin(phi) * py;
    double ry = std::sin(phi) * px + std::cos(phi) * py;
    auto [gx, gy] = rotated.map(static_cast<int>(i)).apply(rx, ry);
    auto [fx, fy] = sys.map(static_cast<int>(i)).apply(px, py);
    CHECK(gx == doctest::Approx(std::cos(phi) * fx - std::sin(phi) * fy)
                    .epsilon(1e-9));
    CHECK(gy == doctest::Approx(std::sin(phi) * fx + std::cos(phi) * fy)
                    .epsilon(1e-9));
  }

  ProjectionProfile base = projection_profile(sys, steps);
  ProjectionProfile shifted = projection_profile(rotated, steps);
  for (int j = 0; j < steps; ++j) {
    int src = (j - 1 + steps) % steps;
    CHECK(std::fabs(shifted.rows[j].estimate.value -
                    base.rows[src].estimate.value) < 0.05);
  }
}

TEST_CASE("render_product lattice pair colors coinciding projections") {
  IFS1D c9 = central_cantor(Scalar::exact(1, 9));
  IFS1D c3 = central_cantor(Scalar::exact(1, 3));
  ProductRender ren = render_product(c9, c3, 3);
  CHECK(ren.colored_pairs > 0);

  for (int j = 1; j <= 3; ++j) {
    bool colored = false;
    bool corner = false;
    Scalar w = Scalar::exact(1, 9).pow(j);
    for (const auto& s : ren.squares) {
      if (s.level != j) continue;
      CHECK(s.x.length() == s.y.length());  // lattice levels give squares
      if (s.group >= 0) colored = true;
      if (s.x.lo == Scalar(0) && s.x.hi == w && s.y.hi == Scalar(1) &&
          s.y.lo == Scalar(1) - w && s.group >= 0)
        corner = true;
    }
    CHECK(colored);
    CHECK(corner);  // the corner square pairs with its transpose
  }
  CHECK(ren.svg.find("<svg") == 0);
  CHECK(ren.svg.find("fill=\"black\"") != std::string::npos);
  CHECK(ren.svg.find("fill=\"white\"") != std::string::npos);
}

TEST_CASE("render_product irrational pair has no coincidences") {
  IFS1D c3 = central_cantor(Scalar::exact(1, 3));
  IFS1D c4 = central_cantor(Scalar::exact(1, 4));
  for (int depth : {1, 2}) {
    ProductRender ren = render_product(c3, c4, depth);
    CHECK(ren.colored_pairs == 0);
    for (const auto& s : ren.squares) CHECK(s.group == -1);
  }

  ProductRender outline = render_product(c3, c4, 0);
  CHECK(outline.squares.empty());
  CHECK(outline.svg.find("<rect") != std::string::npos);
}

TEST_CASE("render_svg disk cover") {
  IFS2D sys = triple(kGolden * pi);
  std::string one = render_svg(sys, 0);
  std::string deep = render_svg(sys, 2);
  auto count = [](const std::string& s, const std::string& needle) {
    std::size_t n = 0, pos = 0;
    while ((pos = s.find(needle, pos)) != std::string::npos) {
      ++n;
      pos += needle.size();
    }
    return n;
  };
  CHECK(count(one, "<circle") == 1);
  CHECK(count(deep, "<circle") == 9);
  CHECK(render_svg(sys, 1) == render_svg(sys, 1));  // deterministic bytes
  CHECK_THROWS_AS(render_svg(sys, 30), ResourceError);
}
