#include "resodim/homogenize.hpp"

#include <algorithm>
#include <cmath>

#include "resodim/boxdim.hpp"
#include "resodim/resonance.hpp"

namespace resodim {

PruneResult prune_to_disjoint(const IFS1D& ifs, const Scalar& delta) {
  auto cyls = cylinders_at_scale(ifs, delta, 100'000'000);
  std::sort(cyls.begin(), cyls.end(),
            [](const CylinderInterval& a, const CylinderInterval& b) {
              return a.interval.lo < b.interval.lo;
            });
  std::vector<const CylinderInterval*> chosen;
  for (const auto& c : cyls) {
    if (chosen.empty() || chosen.back()->interval.hi < c.interval.lo)
      chosen.push_back(&c);
  }
  if (chosen.size() < 2)
    throw DomainError(
        "prune_to_disjoint: no two disjoint cylinders at this scale; pick a "
        "smaller delta");
  // exact pairwise-disjointness assertion on the sorted selection
  for (std::size_t i = 1; i < chosen.size(); ++i) {
    if (!(chosen[i - 1]->interval.hi < chosen[i]->interval.lo))
      throw InternalError("prune_to_disjoint: disjointness audit failed");
  }
  std::vector<Similitude1D> maps;
  maps.reserve(chosen.size());
  for (const auto* c : chosen) maps.push_back(compose_word(ifs, c->word));
  PruneResult out{IFS1D::with_hull(std::move(maps), ifs.hull()), 0, 0};
  out.dim_before = similarity_dimension(ifs.ratios());
  out.dim_after = similarity_dimension(out.system.ratios());
  return out;
}

MultisetWords::MultisetWords(const std::vector<long long>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 0) throw DomainError("MultisetWords: negative count");
    for (long long c = 0; c < v[i]; ++c)
      current_.push_back(static_cast<int>(i));
  }
  if (current_.empty()) done_ = true;
}

bool MultisetWords::next(Word& out) {
  if (done_) return false;
  if (!first_) {
    if (!std::next_permutation(current_.begin(), current_.end())) {
      done_ = true;
      return false;
    }
  }
  first_ = false;
  out.indices.assign(current_.begin(), current_.end());
  return true;
}

HomogeneousResult homogeneous_subsystem(const IFS1D& ifs, long long k,
                                        std::size_t max_enumerate) {
  if (k < 1) throw DomainError("homogeneous_subsystem: k must be >= 1");
  for (const auto& f : ifs.maps()) {
    if (!(f.ratio > Scalar(0)))
      throw DomainError("homogeneous_subsystem: ratios must be positive");
  }
  HomogeneousResult result;
  HomogenizeReport& rep = result.report;
  rep.k = k;
  rep.gamma = similarity_dimension(ifs.ratios());
  BigInt total(0);
  for (const auto& f : ifs.maps()) {
    double weight = std::pow(f.ratio.dbl(), rep.gamma);
    long long vi =
        static_cast<long long>(std::ceil(k * weight - 1e-12));
    if (vi < 1) vi = 1;
    rep.v.push_back(vi);
    total += vi;
  }
  BigInt n = boost::multiprecision::cpp_int(1);
  for (BigInt i = 1; i <= total; ++i) n *= i;
  rep.rho = Scalar(1);
  for (std::size_t i = 0; i < rep.v.size(); ++i) {
    BigInt fact(1);
    for (BigInt j = 1; j <= rep.v[i]; ++j) fact *= j;
    n /= fact;
    rep.rho *= ifs.map(static_cast<int>(i))
                   .ratio.pow(static_cast<long>(rep.v[i]));
  }
  rep.N = n;
  // log N via lgamma keeps precision when N overflows double
  double log_n = std::lgamma(total.convert_to<double>() + 1);
  for (long long vi : rep.v) log_n -= std::lgamma(static_cast<double>(vi) + 1);
  rep.tau = log_n / std::log(1.0 / rep.rho.dbl());
  if (rep.tau > rep.gamma + 1e-9)
    throw InternalError("homogeneous_subsystem: tau exceeds gamma");

  if (rep.N <= BigInt(max_enumerate)) {
    std::vector<Similitude1D> maps;
    MultisetWords gen(rep.v);
    Word w;
    while (gen.next(w)) maps.push_back(compose_word(ifs, w));
    result.system = IFS1D::with_hull(std::move(maps), ifs.hull());
  }
  return result;
}

RepairResult repair_irrationality(const IFS1D& ifs_a, const IFS1D& ifs_b,
                                  const IFS1D& hom_a, const IFS1D& hom_b,
                                  long long q_max, double tol) {
  if (!hom_a.homogeneous() || !hom_b.homogeneous())
    throw DomainError("repair_irrationality: inputs must be homogeneous");
  Scalar ra = hom_a.ratio().abs();
  Scalar rb = hom_b.ratio().abs();
  Scalar fa = ifs_a.map(0).ratio.abs();
  Scalar fb = ifs_b.map(0).ratio.abs();

  auto prefix = [](const IFS1D& base, const IFS1D& hom) {
    std::vector<Similitude1D> maps;
    for (const auto& g : hom.maps()) maps.push_back(base.map(0).compose(g));
    return IFS1D::create(std::move(maps));
  };

  struct Option {
    bool pa, pb;
  };
  for (Option opt : {Option{false, false}, Option{true, false},
                     Option{false, true}, Option{true, true}}) {
    Scalar x = opt.pa ? fa * ra : ra;
    Scalar y = opt.pb ? fb * rb : rb;
    if (!is_rational_ratio(x, y, q_max, tol)) {
      RepairResult out{opt.pa ? prefix(ifs_a, hom_a) : hom_a,
                       opt.pb ? prefix(ifs_b, hom_b) : hom_b, true, opt.pa,
                       opt.pb};
      return out;
    }
  }
  return RepairResult{hom_a, hom_b, false, false, false};
}

ReflectionResult remove_reflections(const IFS2D& ifs, int depth) {
  if (depth < 1) throw DomainError("remove_reflections: depth must be >= 1");
  int mirror = -1;
  for (std::size_t i = 0; i < ifs.size(); ++i) {
    if (ifs.map(static_cast<int>(i)).reflect) {
      mirror = static_cast<int>(i);
      break;
    }
  }
  std::vector<double> before;
  // depth-iterated words
  std::vector<Similitude2D> words = {Similitude2D::root()};
  for (int d = 0; d < depth; ++d) {
    std::vector<Similitude2D> grown;
    grown.reserve(words.size() * ifs.size());
    for (const auto& w : words) {
      for (const auto& f : ifs.maps()) grown.push_back(w.compose(f));
    }
    words = std::move(grown);
  }
  std::vector<Scalar> ratios_before;
  for (const auto& w : words) ratios_before.push_back(w.scale);

  std::vector<Similitude2D> fixed;
  for (auto& w : words) {
    if (w.reflect) {
      if (mirror < 0)
        throw InternalError("remove_reflections: reflecting word with no "
                            "reflecting generator");
      fixed.push_back(w.compose(ifs.map(mirror)));
    } else {
      fixed.push_back(std::move(w));
    }
  }
  std::vector<Scalar> ratios_after;
  for (const auto& f : fixed) ratios_after.push_back(f.scale);

  ReflectionResult out{
      IFS2D::create(std::move(fixed), ifs.center_x(), ifs.center_y(),
                    ifs.radius()),
      similarity_dimension(ratios_before), similarity_dimension(ratios_after)};
  return out;
}

}  // namespace resodim
