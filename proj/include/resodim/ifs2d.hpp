#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "resodim/ifs.hpp"

namespace resodim {

/// x -> scale * R_angle * O * x + translation, with O the reflection about
/// the x axis when reflect is set.
struct Similitude2D {
  Scalar scale;       // 0 < scale < 1
  double angle = 0;   // radians, normalized to [0, 2 pi)
  bool reflect = false;
  Scalar tx, ty;

  static double normalize_angle(double a) {
    double two_pi = 2 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    if (a < 0) a += two_pi;
    return a;
  }

  std::pair<double, double> apply(double x, double y) const {
    if (reflect) y = -y;
    double c = std::cos(angle), s = std::sin(angle);
    double z = scale.dbl();
    return {z * (c * x - s * y) + tx.dbl(), z * (s * x + c * y) + ty.dbl()};
  }

  /// this after other: O R_a O = R_{-a} drives the angle rule.
  Similitude2D compose(const Similitude2D& other) const {
    Similitude2D out;
    out.scale = scale * other.scale;
    out.reflect = reflect != other.reflect;
    out.angle = normalize_angle(angle + (reflect ? -other.angle : other.angle));
    auto [x, y] = apply(other.tx.dbl(), other.ty.dbl());
    out.tx = Scalar::approx(x);
    out.ty = Scalar::approx(y);
    return out;
  }

  static Similitude2D root() {
    return {Scalar(1), 0.0, false, Scalar(0), Scalar(0)};
  }

  bool is_contraction() const {
    Scalar a = scale.abs();
    return Scalar(0) < a && a < Scalar(1);
  }
};

class IFS2D {
 public:
  /// Requires f_i(B) inside the bounding disk B, with 1e-10 slack.
  static IFS2D create(std::vector<Similitude2D> maps, double cx, double cy,
                      double radius) {
    if (maps.size() < 2) throw DomainError("IFS2D: need at least 2 maps");
    if (!(radius > 0)) throw DomainError("IFS2D: radius must be > 0");
    for (auto& f : maps) {
      if (!f.is_contraction())
        throw DomainError("IFS2D: scale must satisfy 0 < zeta < 1");
      f.angle = Similitude2D::normalize_angle(f.angle);
      auto [x, y] = f.apply(cx, cy);
      double shift = std::hypot(x - cx, y - cy);
      if (shift + f.scale.dbl() * radius > radius + 1e-10)
        throw DomainError("IFS2D: f_i(B) not inside the bounding disk");
    }
    IFS2D out;
    out.maps_ = std::move(maps);
    out.cx_ = cx;
    out.cy_ = cy;
    out.radius_ = radius;
    return out;
  }

  const std::vector<Similitude2D>& maps() const { return maps_; }
  std::size_t size() const { return maps_.size(); }
  const Similitude2D& map(int i) const { return maps_.at(i); }
  double center_x() const { return cx_; }
  double center_y() const { return cy_; }
  double radius() const { return radius_; }

 private:
  IFS2D() = default;
  std::vector<Similitude2D> maps_;
  double cx_ = 0, cy_ = 0, radius_ = 1;
};

inline Similitude2D compose_word(const IFS2D& ifs, const Word& u) {
  Similitude2D acc = Similitude2D::root();
  for (int i : u.indices) {
    if (i < 0 || i >= static_cast<int>(ifs.size()))
      throw DomainError("compose_word: index out of range");
    acc = acc.compose(ifs.map(i));
  }
  return acc;
}

}  // namespace resodim
