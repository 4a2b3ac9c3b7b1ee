#pragma once

#include <vector>

#include "resodim/interval.hpp"
#include "resodim/scalar.hpp"

namespace resodim {

/// x -> ratio*x + translation. A proper similitude has 0 < |ratio| < 1;
/// compositions of the empty word use ratio 1 as the root marker.
struct Similitude1D {
  Scalar ratio;
  Scalar translation;

  Scalar apply(const Scalar& x) const { return ratio * x + translation; }
  Interval apply(const Interval& iv) const {
    return iv.scaled(ratio).translated(translation);
  }
  /// this after other: (this o other)(x) = this(other(x)).
  Similitude1D compose(const Similitude1D& other) const {
    return {ratio * other.ratio, ratio * other.translation + translation};
  }
  Scalar fixed_point() const {
    return translation / (Scalar(1) - ratio);
  }
  static Similitude1D root() { return {Scalar(1), Scalar(0)}; }
  bool is_contraction() const {
    Scalar a = ratio.abs();
    return Scalar(0) < a && a < Scalar(1);
  }
};

/// Finite index sequence identifying a cylinder; indices are 0-based.
struct Word {
  std::vector<int> indices;

  std::size_t size() const { return indices.size(); }
  Word concat(const Word& other) const {
    Word w = *this;
    w.indices.insert(w.indices.end(), other.indices.begin(),
                     other.indices.end());
    return w;
  }
  static Word repeated(int index, std::size_t count) {
    Word w;
    w.indices.assign(count, index);
    return w;
  }
  friend bool operator==(const Word& a, const Word& b) {
    return a.indices == b.indices;
  }
};

class IFS1D {
 public:
  /// Builds a system and computes its hull.
  static IFS1D create(std::vector<Similitude1D> maps);
  /// Builds a system with an explicitly supplied invariant hull.
  static IFS1D with_hull(std::vector<Similitude1D> maps, Interval hull);

  const std::vector<Similitude1D>& maps() const { return maps_; }
  const Interval& hull() const { return hull_; }
  std::size_t size() const { return maps_.size(); }
  const Similitude1D& map(int i) const { return maps_.at(i); }

  bool homogeneous() const;
  /// Common ratio of a homogeneous system.
  Scalar ratio() const;
  bool all_exact() const;
  std::vector<Scalar> ratios() const;

 private:
  IFS1D(std::vector<Similitude1D> maps, Interval hull);
  std::vector<Similitude1D> maps_;
  Interval hull_;
};

struct CylinderInterval {
  Word word;
  Interval interval;  // f_u(hull)
  Scalar ratio;       // signed product of the word's ratios
};

/// The system {a x, a x + (1-a)} on [0,1]; requires 0 < a < 1/2.
IFS1D central_cantor(const Scalar& a);

/// Smallest interval J with f_i(J) subset of J for every map. Closed form
/// when all ratios are positive, fixed-point iteration otherwise.
Interval attractor_hull(const std::vector<Similitude1D>& maps);

/// The beta solving sum |r_i|^beta = 1, by bisection to 1e-13.
double similarity_dimension(const std::vector<Scalar>& ratios);

/// Left-to-right composition f_{u_1} o ... o f_{u_k}; empty word gives the
/// identity root marker.
Similitude1D compose_word(const IFS1D& ifs, const Word& u);

/// Cylinder for the word u.
CylinderInterval cylinder(const IFS1D& ifs, const Word& u);

}  // namespace resodim
