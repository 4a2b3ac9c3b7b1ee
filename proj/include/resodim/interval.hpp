#pragma once

#include "resodim/scalar.hpp"

namespace resodim {

/// Closed interval [lo, hi].
struct Interval {
  Scalar lo;
  Scalar hi;

  Interval() = default;
  Interval(Scalar l, Scalar h) : lo(std::move(l)), hi(std::move(h)) {
    if (hi < lo) throw DomainError("Interval: hi < lo");
  }

  Scalar length() const { return hi - lo; }
  Scalar midpoint() const { return (lo + hi) / Scalar(2); }

  bool contains(const Scalar& x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& other) const {
    return lo <= other.lo && other.hi <= hi;
  }
  bool intersects(const Interval& other) const {
    return !(hi < other.lo || other.hi < lo);
  }

  Interval translated(const Scalar& t) const { return {lo + t, hi + t}; }
  Interval scaled(const Scalar& c) const {
    if (c.sign() >= 0) return {lo * c, hi * c};
    return {hi * c, lo * c};
  }

  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
};

}  // namespace resodim
