#include "resodim/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace resodim {

Scalar parse_scalar(const std::string& text, bool exact_mode) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    std::string num = text.substr(0, slash);
    std::string den = text.substr(slash + 1);
    if (exact_mode) {
      return Scalar::exact(Rational(BigInt(num), BigInt(den)));
    }
    return Scalar::approx(std::stod(num) / std::stod(den));
  }
  auto dot = text.find('.');
  if (dot == std::string::npos && text.find('e') == std::string::npos &&
      text.find('E') == std::string::npos) {
    if (exact_mode) return Scalar::exact(Rational(BigInt(text)));
    return Scalar::approx(std::stod(text));
  }
  if (exact_mode && text.find('e') == std::string::npos &&
      text.find('E') == std::string::npos) {
    // decimal literal as rational over a power of ten
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    bool negative = !digits.empty() && digits[0] == '-';
    if (negative || (!digits.empty() && digits[0] == '+'))
      digits.erase(digits.begin());
    // strip leading zeros so the big-int parser cannot read octal
    std::size_t nz = digits.find_first_not_of('0');
    digits = (nz == std::string::npos) ? "0" : digits.substr(nz);
    long frac_len = static_cast<long>(text.size() - dot - 1);
    BigInt den(1);
    for (long i = 0; i < frac_len; ++i) den *= 10;
    BigInt num(digits);
    if (negative) num = -num;
    return Scalar::exact(Rational(num, den));
  }
  return Scalar::approx(std::stod(text));
}

IFS1D::IFS1D(std::vector<Similitude1D> maps, Interval hull)
    : maps_(std::move(maps)), hull_(std::move(hull)) {}

IFS1D IFS1D::create(std::vector<Similitude1D> maps) {
  if (maps.size() < 2) throw DomainError("IFS1D: need at least 2 maps");
  for (const auto& f : maps) {
    if (!f.is_contraction())
      throw DomainError("IFS1D: ratio must satisfy 0 < |r| < 1");
  }
  Interval hull = attractor_hull(maps);
  return with_hull(std::move(maps), std::move(hull));
}

IFS1D IFS1D::with_hull(std::vector<Similitude1D> maps, Interval hull) {
  if (maps.size() < 2) throw DomainError("IFS1D: need at least 2 maps");
  for (const auto& f : maps) {
    if (!f.is_contraction())
      throw DomainError("IFS1D: ratio must satisfy 0 < |r| < 1");
    Interval image = f.apply(hull);
    if (f.ratio.is_exact() && hull.lo.is_exact()) {
      if (!hull.contains(image)) throw DomainError("IFS1D: f_i(hull) not in hull");
    } else {
      double slack = 1e-12 * std::max(1.0, hull.length().dbl());
      if (image.lo.dbl() < hull.lo.dbl() - slack ||
          image.hi.dbl() > hull.hi.dbl() + slack)
        throw DomainError("IFS1D: f_i(hull) not in hull");
    }
  }
  return IFS1D(std::move(maps), std::move(hull));
}

bool IFS1D::homogeneous() const {
  for (const auto& f : maps_)
    if (f.ratio != maps_.front().ratio) return false;
  return true;
}

Scalar IFS1D::ratio() const {
  if (!homogeneous())
    throw DomainError("IFS1D: ratio() requires a homogeneous system");
  return maps_.front().ratio;
}

bool IFS1D::all_exact() const {
  for (const auto& f : maps_)
    if (!f.ratio.is_exact() || !f.translation.is_exact()) return false;
  return hull_.lo.is_exact() && hull_.hi.is_exact();
}

std::vector<Scalar> IFS1D::ratios() const {
  std::vector<Scalar> out;
  out.reserve(maps_.size());
  for (const auto& f : maps_) out.push_back(f.ratio);
  return out;
}

IFS1D central_cantor(const Scalar& a) {
  if (!(Scalar(0) < a) || !(a < Scalar::exact(1, 2)))
    throw DomainError("central_cantor: a must lie in (0, 1/2)");
  std::vector<Similitude1D> maps = {
      {a, Scalar(0)},
      {a, Scalar(1) - a},
  };
  return IFS1D::with_hull(std::move(maps), Interval(Scalar(0), Scalar(1)));
}

Interval attractor_hull(const std::vector<Similitude1D>& maps) {
  if (maps.size() < 2) throw DomainError("attractor_hull: need at least 2 maps");
  bool all_positive = true;
  for (const auto& f : maps) {
    if (f.ratio.sign() == 0) throw DomainError("attractor_hull: zero ratio");
    if (f.ratio.sign() < 0) all_positive = false;
  }
  if (all_positive) {
    Scalar lo = maps.front().fixed_point();
    Scalar hi = lo;
    for (const auto& f : maps) {
      Scalar p = f.fixed_point();
      if (p < lo) lo = p;
      if (hi < p) hi = p;
    }
    return {lo, hi};
  }
  // Negative ratios: shrink a bounding interval by iteration.
  // Start from a box certain to contain every fixed point with margin.
  double bound = 1.0;
  for (const auto& f : maps) {
    double r = std::fabs(f.ratio.dbl());
    bound = std::max(bound, (std::fabs(f.translation.dbl()) + 1.0) / (1.0 - r));
  }
  double lo = -2 * bound, hi = 2 * bound;
  const int budget = 1000;
  for (int it = 0; it < budget; ++it) {
    double nlo = std::numeric_limits<double>::infinity();
    double nhi = -std::numeric_limits<double>::infinity();
    for (const auto& f : maps) {
      double r = f.ratio.dbl(), t = f.translation.dbl();
      double a = r * lo + t, b = r * hi + t;
      nlo = std::min(nlo, std::min(a, b));
      nhi = std::max(nhi, std::max(a, b));
    }
    if (std::fabs(nlo - lo) < 1e-14 && std::fabs(nhi - hi) < 1e-14) {
      return {Scalar::approx(nlo), Scalar::approx(nhi)};
    }
    lo = nlo;
    hi = nhi;
  }
  throw NumericError("attractor_hull: no convergence within 1000 iterations");
}

double similarity_dimension(const std::vector<Scalar>& ratios) {
  if (ratios.empty()) throw DomainError("similarity_dimension: empty ratio list");
  std::vector<double> r;
  for (const auto& s : ratios) {
    double a = std::fabs(s.dbl());
    if (!(a > 0.0 && a < 1.0))
      throw DomainError("similarity_dimension: |r| must lie in (0,1)");
    r.push_back(a);
  }
  auto value = [&](double beta) {
    double sum = 0;
    for (double a : r) sum += std::pow(a, beta);
    return sum;
  };
  double lo = 0.0, hi = 1.0;
  while (value(hi) > 1.0) hi *= 2;  // sum is strictly decreasing in beta
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (value(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-15) break;
  }
  return 0.5 * (lo + hi);
}

Similitude1D compose_word(const IFS1D& ifs, const Word& u) {
  Similitude1D acc = Similitude1D::root();
  for (int i : u.indices) {
    if (i < 0 || i >= static_cast<int>(ifs.size()))
      throw DomainError("compose_word: index out of range");
    acc = acc.compose(ifs.map(i));
  }
  return acc;
}

CylinderInterval cylinder(const IFS1D& ifs, const Word& u) {
  Similitude1D f = compose_word(ifs, u);
  return {u, f.apply(ifs.hull()), f.ratio};
}

}  // namespace resodim
