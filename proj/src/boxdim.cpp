#include "resodim/boxdim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace resodim {
namespace {

struct Flat {
  Scalar lo;
  Scalar len;
};

std::vector<Flat> flat_cylinders(const IFS1D& ifs, const Scalar& delta,
                                 std::size_t max_cells) {
  auto cyls = cylinders_at_scale(ifs, delta, max_cells);
  std::vector<Flat> out;
  out.reserve(cyls.size());
  for (auto& c : cyls) out.push_back({c.interval.lo, c.interval.length()});
  return out;
}

// one grid cell range; right endpoint on a boundary counts the left cell only
template <typename Int>
void cell_range(Int v_lo, Int v_hi, Int den, Int& c0, Int& c1) {
  auto fdiv = [](Int a, Int b) {
    Int q = a / b;
    if (a % b != 0 && ((a < 0) != (b < 0))) --q;
    return q;
  };
  c0 = fdiv(v_lo, den);
  c1 = fdiv(v_hi, den);
  if (v_hi % den == 0) --c1;
  if (c1 < c0) c1 = c0;  // degenerate interval on a boundary
}

class GridMarker {
 public:
  GridMarker(long long cell_min, long long cell_max, std::size_t max_grid)
      : offset_(cell_min) {
    if (cell_max < cell_min)
      throw InternalError("GridMarker: inverted cell range");
    unsigned long long span =
        static_cast<unsigned long long>(cell_max - cell_min) + 1;
    if (span > max_grid)
      throw ResourceError("box counting grid exceeds max_grid budget (" +
                          std::to_string(max_grid) + " cells)");
    bits_.assign((span + 63) / 64, 0);
  }
  void mark(long long c0, long long c1) {
    for (long long c = c0; c <= c1; ++c) {
      unsigned long long i = static_cast<unsigned long long>(c - offset_);
      bits_[i >> 6] |= (1ull << (i & 63));
    }
  }
  long long count() const {
    long long n = 0;
    for (std::uint64_t w : bits_) n += __builtin_popcountll(w);
    return n;
  }

 private:
  long long offset_;
  std::vector<std::uint64_t> bits_;
};

long long to_ll(const BigInt& v) {
  if (v > std::numeric_limits<long long>::max() ||
      v < std::numeric_limits<long long>::min())
    throw ResourceError("box counting: cell index exceeds 64-bit range");
  return v.convert_to<long long>();
}

}  // namespace

std::vector<CylinderInterval> cylinders_at_scale(const IFS1D& ifs,
                                                 const Scalar& delta,
                                                 std::size_t max_cells) {
  Scalar hull_len = ifs.hull().length();
  if (!(Scalar(0) < delta) || hull_len < delta)
    throw DomainError("cylinders_at_scale: need 0 < delta <= |hull|");
  struct Node {
    Word word;
    Similitude1D f;  // composed map of the word
  };
  std::vector<CylinderInterval> out;
  std::vector<Node> stack;
  stack.push_back({Word{}, Similitude1D::root()});
  while (!stack.empty()) {
    Node cur = std::move(stack.back());
    stack.pop_back();
    Interval image = cur.f.apply(ifs.hull());
    if (image.length() <= delta) {
      out.push_back({std::move(cur.word), std::move(image), cur.f.ratio});
      if (out.size() > max_cells)
        throw ResourceError("cylinders_at_scale: cell budget exceeded (" +
                            std::to_string(max_cells) + ")");
      continue;
    }
    for (int i = static_cast<int>(ifs.size()) - 1; i >= 0; --i) {
      Word w = cur.word;
      w.indices.push_back(i);
      stack.push_back({std::move(w), cur.f.compose(ifs.map(i))});
    }
  }
  return out;
}

Cover1D merge_cover(std::vector<Interval> intervals, const Scalar& delta) {
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  bool exact = delta.is_exact() && !intervals.empty() &&
               intervals.front().lo.is_exact();
  Scalar gap = exact ? Scalar(0) : Scalar::approx(1e-12) * delta;
  Cover1D cover;
  cover.delta = delta;
  for (auto& iv : intervals) {
    if (!cover.intervals.empty() &&
        iv.lo - cover.intervals.back().hi <= gap) {
      if (cover.intervals.back().hi < iv.hi)
        cover.intervals.back().hi = iv.hi;
    } else {
      cover.intervals.push_back(std::move(iv));
    }
  }
  return cover;
}

Cover1D sum_cover(const IFS1D& left, const IFS1D& right, const Scalar& s,
                  const Scalar& delta, const Budgets& budgets) {
  if (!(Scalar(0) < s)) throw DomainError("sum_cover: s must be > 0");
  auto lc = flat_cylinders(left, delta, budgets.max_cells);
  auto rc = flat_cylinders(right, delta, budgets.max_cells);
  std::sort(lc.begin(), lc.end(),
            [](const Flat& a, const Flat& b) { return a.lo < b.lo; });
  std::sort(rc.begin(), rc.end(),
            [](const Flat& a, const Flat& b) { return a.lo < b.lo; });

  bool exact = delta.is_exact() && s.is_exact() && left.all_exact() &&
               right.all_exact();
  Scalar gap = exact ? Scalar(0) : Scalar::approx(1e-12) * delta;

  // k-way merge: one stream per left cylinder, each walking the sorted
  // right list; blocks are sorted by construction
  struct Head {
    Scalar lo;
    std::size_t li, rj;
  };
  auto cmp = [](const Head& a, const Head& b) { return b.lo < a.lo; };
  std::vector<Head> heap;
  heap.reserve(lc.size());
  for (std::size_t i = 0; i < lc.size(); ++i)
    heap.push_back({lc[i].lo + s * rc[0].lo, i, 0});
  std::make_heap(heap.begin(), heap.end(), cmp);

  Cover1D cover;
  cover.delta = delta;
  while (!heap.empty()) {
    std::pop_heap(heap.begin(), heap.end(), cmp);
    Head h = heap.back();
    heap.pop_back();
    Scalar hi = h.lo + lc[h.li].len + s * rc[h.rj].len;
    if (!cover.intervals.empty() &&
        h.lo - cover.intervals.back().hi <= gap) {
      if (cover.intervals.back().hi < hi) cover.intervals.back().hi = hi;
    } else {
      cover.intervals.push_back(Interval(h.lo, hi));
      if (cover.intervals.size() > budgets.max_cover_intervals)
        throw ResourceError("sum_cover: interval budget exceeded (" +
                            std::to_string(budgets.max_cover_intervals) + ")");
    }
    if (h.rj + 1 < rc.size()) {
      heap.push_back({lc[h.li].lo + s * rc[h.rj + 1].lo, h.li, h.rj + 1});
      std::push_heap(heap.begin(), heap.end(), cmp);
    }
  }
  return cover;
}

long long box_count(const Cover1D& cover, const Scalar& delta) {
  if (!(Scalar(0) < delta)) throw DomainError("box_count: delta must be > 0");
  if (cover.intervals.empty()) return 0;
  long long total = 0;
  bool have_last = false;
  long long last = 0;
  for (const auto& iv : cover.intervals) {
    long long c0, c1;
    if (delta.is_exact() && iv.lo.is_exact()) {
      Rational qlo = (iv.lo / delta).rat();
      Rational qhi = (iv.hi / delta).rat();
      BigInt den = boost::multiprecision::lcm(denominator(qlo),
                                              denominator(qhi));
      BigInt b0, b1;
      cell_range<BigInt>(numerator(qlo) * (den / denominator(qlo)),
                         numerator(qhi) * (den / denominator(qhi)), den, b0,
                         b1);
      c0 = to_ll(b0);
      c1 = to_ll(b1);
    } else {
      double qlo = iv.lo.dbl() / delta.dbl();
      double qhi = iv.hi.dbl() / delta.dbl();
      c0 = static_cast<long long>(std::floor(qlo));
      c1 = static_cast<long long>(std::floor(qhi));
      if (qhi == std::floor(qhi)) --c1;
      if (c1 < c0) c1 = c0;
    }
    long long from = have_last ? std::max(c0, last + 1) : c0;
    if (c1 >= from) {
      total += c1 - from + 1;
      last = c1;
      have_last = true;
    }
  }
  return total;
}

long long sum_box_count(const IFS1D& left, const IFS1D& right, const Scalar& s,
                        const Scalar& delta, const Budgets& budgets) {
  if (!(Scalar(0) < s)) throw DomainError("sum_box_count: s must be > 0");
  auto lc = flat_cylinders(left, delta, budgets.max_cells);
  auto rc = flat_cylinders(right, delta, budgets.max_cells);
  bool exact = delta.is_exact() && s.is_exact() && left.all_exact() &&
               right.all_exact();

  if (exact) {
    // scale everything to a common denominator once; the pair loop is then
    // pure integer arithmetic
    BigInt den(1);
    auto fold = [&](const Rational& q) {
      den = boost::multiprecision::lcm(den, denominator(q));
    };
    std::vector<Rational> la, lw, rb, rw;
    for (auto& c : lc) {
      la.push_back((c.lo / delta).rat());
      lw.push_back((c.len / delta).rat());
      fold(la.back());
      fold(lw.back());
    }
    for (auto& c : rc) {
      rb.push_back((s * c.lo / delta).rat());
      rw.push_back((s * c.len / delta).rat());
      fold(rb.back());
      fold(rw.back());
    }
    auto to_int = [&](const Rational& q) {
      return BigInt(numerator(q) * (den / denominator(q)));
    };
    std::vector<BigInt> A, WA, B, WB;
    for (auto& q : la) A.push_back(to_int(q));
    for (auto& q : lw) WA.push_back(to_int(q));
    for (auto& q : rb) B.push_back(to_int(q));
    for (auto& q : rw) WB.push_back(to_int(q));

    BigInt amin = *std::min_element(A.begin(), A.end());
    BigInt amax = *std::max_element(A.begin(), A.end());
    BigInt bmin = *std::min_element(B.begin(), B.end());
    BigInt bmax = *std::max_element(B.begin(), B.end());
    BigInt wmax = *std::max_element(WA.begin(), WA.end()) +
                  *std::max_element(WB.begin(), WB.end());
    BigInt vmin = amin + bmin, vmax = amax + bmax + wmax;

    BigInt lim = BigInt(1) << 62;
    if (den < lim && vmax.convert_to<BigInt>() < lim && -vmin < lim) {
      long long d = to_ll(den);
      BigInt cmin_b, cmax_b, tmp;
      cell_range<BigInt>(vmin, vmin, den, cmin_b, tmp);
      cell_range<BigInt>(vmax, vmax, den, cmax_b, tmp);
      GridMarker grid(to_ll(cmin_b), to_ll(cmax_b) + 1, budgets.max_grid);
      std::vector<long long> a(A.size()), wa(WA.size()), b(B.size()),
          wb(WB.size());
      for (std::size_t i = 0; i < A.size(); ++i) a[i] = to_ll(A[i]);
      for (std::size_t i = 0; i < WA.size(); ++i) wa[i] = to_ll(WA[i]);
      for (std::size_t j = 0; j < B.size(); ++j) b[j] = to_ll(B[j]);
      for (std::size_t j = 0; j < WB.size(); ++j) wb[j] = to_ll(WB[j]);
      for (std::size_t i = 0; i < a.size(); ++i) {
        long long ai = a[i], wi = wa[i];
        for (std::size_t j = 0; j < b.size(); ++j) {
          long long v = ai + b[j];
          long long c0, c1;
          cell_range<long long>(v, v + wi + wb[j], d, c0, c1);
          grid.mark(c0, c1);
        }
      }
      return grid.count();
    }
    // big-integer fallback, same algorithm
    BigInt cmin_b, cmax_b, tmp;
    cell_range<BigInt>(vmin, vmin, den, cmin_b, tmp);
    cell_range<BigInt>(vmax, vmax, den, cmax_b, tmp);
    GridMarker grid(to_ll(cmin_b), to_ll(cmax_b) + 1, budgets.max_grid);
    for (std::size_t i = 0; i < A.size(); ++i) {
      for (std::size_t j = 0; j < B.size(); ++j) {
        BigInt v = A[i] + B[j];
        BigInt c0, c1;
        cell_range<BigInt>(v, v + WA[i] + WB[j], den, c0, c1);
        grid.mark(to_ll(c0), to_ll(c1));
      }
    }
    return grid.count();
  }

  // float path
  double d = delta.dbl(), sv = s.dbl();
  std::vector<double> a, wa, b, wb;
  for (auto& c : lc) {
    a.push_back(c.lo.dbl() / d);
    wa.push_back(c.len.dbl() / d);
  }
  for (auto& c : rc) {
    b.push_back(sv * c.lo.dbl() / d);
    wb.push_back(sv * c.len.dbl() / d);
  }
  double vmin = *std::min_element(a.begin(), a.end()) +
                *std::min_element(b.begin(), b.end());
  double vmax = *std::max_element(a.begin(), a.end()) +
                *std::max_element(b.begin(), b.end()) +
                *std::max_element(wa.begin(), wa.end()) +
                *std::max_element(wb.begin(), wb.end());
  GridMarker grid(static_cast<long long>(std::floor(vmin)) - 1,
                  static_cast<long long>(std::floor(vmax)) + 1,
                  budgets.max_grid);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      double lo = a[i] + b[j];
      double hi = lo + wa[i] + wb[j];
      long long c0 = static_cast<long long>(std::floor(lo));
      long long c1 = static_cast<long long>(std::floor(hi));
      if (hi == std::floor(hi) && c1 > c0) --c1;
      grid.mark(c0, c1);
    }
  }
  return grid.count();
}

DimensionEstimate estimate_dimension(const BoxCountSeries& series) {
  if (series.rows.size() < 3)
    throw DomainError("estimate_dimension: need at least 3 rows");
  DimensionEstimate est;
  est.k_min = series.rows.front().k;
  est.k_max = series.rows.back().k;
  bool all_equal = true;
  for (const auto& row : series.rows)
    if (row.count != series.rows.front().count) all_equal = false;
  if (all_equal) {
    est.value = 0;
    est.stderr_ = std::numeric_limits<double>::infinity();
    est.degenerate = true;
    return est;
  }
  std::size_t n = series.rows.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = -std::log(series.rows[i].delta.dbl());  // log(1/delta)
    ys[i] = std::log(static_cast<double>(series.rows[i].count));
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double dn = static_cast<double>(n);
  double varx = sxx - sx * sx / dn;
  est.value = (sxy - sx * sy / dn) / varx;
  double icept = (sy - est.value * sx) / dn;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = ys[i] - (est.value * xs[i] + icept);
    ss += r * r;
    est.max_residual = std::max(est.max_residual, std::fabs(r));
  }
  est.stderr_ = n > 2 ? std::sqrt(ss / (dn - 2) / varx) : 0;
  return est;
}

Scalar default_scale_ratio(const IFS1D& left, const IFS1D* right) {
  bool hom = left.homogeneous() && (!right || right->homogeneous());
  if (hom) {
    Scalar r = left.ratio().abs();
    if (right) {
      Scalar r2 = right->ratio().abs();
      if (r < r2) r = r2;
    }
    return r;
  }
  return left.all_exact() && (!right || right->all_exact())
             ? Scalar::exact(1, 2)
             : Scalar::approx(0.5);
}

namespace {

DimReport regress(const Scalar& ratio, BoxCountSeries series, int skip) {
  DimReport rep;
  rep.scale_ratio = ratio;
  rep.series = series;
  BoxCountSeries window;
  for (std::size_t i = 0; i < series.rows.size(); ++i)
    if (static_cast<int>(i) >= skip) window.rows.push_back(series.rows[i]);
  rep.estimate = estimate_dimension(window.rows.size() >= 3 ? window : series);
  return rep;
}

}  // namespace

DimReport dim_single(const IFS1D& ifs, const DimParams& params) {
  Scalar ratio = params.scale_ratio;
  if (ratio == Scalar(0)) ratio = default_scale_ratio(ifs, nullptr);
  BoxCountSeries series;
  for (int k = params.k_min; k <= params.k_max; ++k) {
    Scalar delta = ratio.pow(k) * ifs.hull().length();
    auto cyls = cylinders_at_scale(ifs, delta, params.budgets.max_cells);
    std::vector<Interval> ivs;
    ivs.reserve(cyls.size());
    for (auto& c : cyls) ivs.push_back(c.interval);
    long long n = box_count(merge_cover(std::move(ivs), delta), delta);
    series.rows.push_back({k, delta, n});
  }
  return regress(ratio, std::move(series), params.skip_coarsest);
}

DimReport dim_report(const IFS1D& left, const IFS1D& right, const Scalar& s,
                     const DimParams& params) {
  Scalar ratio = params.scale_ratio;
  if (ratio == Scalar(0)) ratio = default_scale_ratio(left, &right);
  BoxCountSeries series;
  for (int k = params.k_min; k <= params.k_max; ++k) {
    Scalar delta = ratio.pow(k);
    long long n = sum_box_count(left, right, s, delta, params.budgets);
    series.rows.push_back({k, delta, n});
  }
  return regress(ratio, std::move(series), params.skip_coarsest);
}

}  // namespace resodim
