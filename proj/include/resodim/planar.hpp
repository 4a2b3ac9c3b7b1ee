#pragma once

#include <optional>
#include <string>
#include <vector>

#include "resodim/boxdim.hpp"
#include "resodim/ifs2d.hpp"

namespace resodim {

struct Ball {
  Word word;
  double cx = 0, cy = 0;
  double radius = 0;
};

/// Refinement of the bounding disk into word images of radius in
/// (zeta_min * delta, delta].
struct BallCover {
  Scalar delta;
  std::vector<Ball> balls;
};

struct ProfileRow {
  double xi = 0;  // direction in [0, pi)
  DimensionEstimate estimate;
};

struct ProjectionProfile {
  std::vector<ProfileRow> rows;
};

enum class Density { dense, not_dense, inconclusive };

struct RotationCheck {
  Density verdict = Density::inconclusive;
  std::vector<double> angles;            // candidate rotation angles examined
  std::optional<double> witness_angle;   // irrational-up-to-q_max candidate
};

struct ProductSquare {
  int level = 0;
  Interval x, y;
  int group = -1;  // coincidence group within the level, -1 when unique
};

struct ProductRender {
  int levels = 0;
  std::vector<ProductSquare> squares;
  long long colored_pairs = 0;
  std::string svg;
};

/// Rotation-angle density of the generated group, decided from generator
/// angles and two-letter products of reflecting generators: dense when some
/// candidate angle over pi has no rational witness at denominator <= q_max,
/// not dense when every candidate is the identity rotation, inconclusive
/// otherwise.
RotationCheck dense_rotation_check(const IFS2D& ifs, long long q_max = 1'000'000,
                                   double tol = 1e-9);

/// Depth-first refinement of the bounding disk until every ball has radius
/// <= delta; nesting inside the parent is audited with 1e-10 slack.
BallCover ball_cover(const IFS2D& ifs, const Scalar& delta,
                     std::size_t max_balls = 10'000'000);

struct ProfileParams {
  int k_min = 2;
  int k_max = 6;
  int skip_coarsest = 1;
  Scalar scale_ratio = Scalar(0);  // delta_k = scale_ratio^k; 0 = dominant zeta
  std::size_t max_balls = 10'000'000;
};

/// Box-dimension estimate of the projection P_xi(E) for each grid direction
/// xi = j pi / xi_steps, from projected ball covers across the scale window.
ProjectionProfile projection_profile(const IFS2D& ifs, int xi_steps,
                                     const ProfileParams& params = {});

/// Conjugation by the rotation R_phi about the bounding-disk center; the
/// attractor rotates by phi, so the projection profile shifts by phi.
IFS2D rotate_system(const IFS2D& ifs, double phi);

/// Level-j cylinder squares of the product of two 1D attractors for
/// j = 1..depth, with exact coinciding-P_{pi/4}-projection detection when a
/// lattice relation makes the cylinders square. Levels advance by the
/// minimal exponent pair with equal widths (1 apiece without a relation).
ProductRender render_product(const IFS1D& left, const IFS1D& right, int depth,
                             long long q_max = 1'000'000, double tol = 1e-12);

/// Disk cover of a 2D attractor at the given word depth, as an SVG document.
std::string render_svg(const IFS2D& ifs, int depth,
                       std::size_t max_balls = 1'000'000);

}  // namespace resodim
