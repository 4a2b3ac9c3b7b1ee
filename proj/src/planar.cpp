#include "resodim/planar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>

#include "resodim/resonance.hpp"

namespace resodim {
namespace {

using std::numbers::pi;

// continued-fraction search for p/q, q <= q_max, with |q t - p| <= tol; the
// residual is scaled by q so that generic irrationals stay witness-free
bool has_rational_witness(double t, long long q_max, double tol) {
  double x = t;
  long long p_prev = 0, q_prev = 1, p_cur = 1, q_cur = 0;
  for (int i = 0; i < 64; ++i) {
    double a = std::floor(x);
    if (a > 1e17) break;
    long long ai = static_cast<long long>(a);
    long long p_next = ai * p_cur + p_prev;
    long long q_next = ai * q_cur + q_prev;
    if (q_next > q_max) break;
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = p_next;
    q_cur = q_next;
    if (std::fabs(q_cur * t - p_cur) <= tol) return true;
    double frac = x - a;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  return false;
}

double fmt_clip(double v) { return std::fabs(v) < 5e-7 ? 0.0 : v; }

void append_num(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", fmt_clip(v));
  out += buf;
}

}  // namespace

RotationCheck dense_rotation_check(const IFS2D& ifs, long long q_max,
                                   double tol) {
  RotationCheck out;
  for (const auto& f : ifs.maps())
    if (!f.reflect) out.angles.push_back(f.angle);
  for (const auto& f : ifs.maps()) {
    if (!f.reflect) continue;
    for (const auto& g : ifs.maps()) {
      if (g.reflect) out.angles.push_back(f.compose(g).angle);
    }
  }
  bool all_identity = true;
  for (double a : out.angles) {
    if (!has_rational_witness(a / pi, q_max, tol)) {
      out.verdict = Density::dense;
      out.witness_angle = a;
      return out;
    }
    if (std::fabs(a) > tol && std::fabs(a - 2 * pi) > tol)
      all_identity = false;
  }
  out.verdict = all_identity ? Density::not_dense : Density::inconclusive;
  return out;
}

BallCover ball_cover(const IFS2D& ifs, const Scalar& delta,
                     std::size_t max_balls) {
  double d = delta.dbl();
  if (!(d > 0 && d <= ifs.radius()))
    throw DomainError("ball_cover: delta must lie in (0, radius]");
  BallCover out;
  out.delta = delta;

  struct Node {
    Word word;
    Similitude2D acc;
  };
  std::vector<Node> stack = {{Word{}, Similitude2D::root()}};
  double zeta_min = 1;
  for (const auto& f : ifs.maps()) zeta_min = std::min(zeta_min, f.scale.dbl());

  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    auto [cx, cy] = node.acc.apply(ifs.center_x(), ifs.center_y());
    double r = node.acc.scale.dbl() * ifs.radius();
    if (r <= d) {
      if (!(r > zeta_min * d - 1e-10))
        throw InternalError("ball_cover: radius below the stopping band");
      out.balls.push_back({std::move(node.word), cx, cy, r});
      if (out.balls.size() > max_balls)
        throw ResourceError("ball_cover: ball budget exceeded");
      continue;
    }
    for (std::size_t i = 0; i < ifs.size(); ++i) {
      Node child{node.word, node.acc.compose(ifs.map(static_cast<int>(i)))};
      child.word.indices.push_back(static_cast<int>(i));
      auto [ccx, ccy] = child.acc.apply(ifs.center_x(), ifs.center_y());
      double cr = child.acc.scale.dbl() * ifs.radius();
      if (std::hypot(ccx - cx, ccy - cy) + cr > r + 1e-10)
        throw InternalError("ball_cover: child escapes its parent");
      stack.push_back(std::move(child));
    }
  }

  std::sort(out.balls.begin(), out.balls.end(),
            [](const Ball& a, const Ball& b) {
              if (a.cx != b.cx) return a.cx < b.cx;
              if (a.cy != b.cy) return a.cy < b.cy;
              return a.radius < b.radius;
            });
  double eps = 1e-12 * d;
  auto coincident = [eps](const Ball& a, const Ball& b) {
    return std::fabs(a.cx - b.cx) <= eps && std::fabs(a.cy - b.cy) <= eps &&
           std::fabs(a.radius - b.radius) <= eps;
  };
  out.balls.erase(std::unique(out.balls.begin(), out.balls.end(), coincident),
                  out.balls.end());
  return out;
}

ProjectionProfile projection_profile(const IFS2D& ifs, int xi_steps,
                                     const ProfileParams& params) {
  if (xi_steps < 4)
    throw DomainError("projection_profile: need at least 4 directions");
  if (params.k_max - params.k_min + 1 < 3)
    throw DomainError("projection_profile: need at least 3 scales");
  Scalar ratio = params.scale_ratio;
  if (ratio == Scalar(0)) {
    double best = 0;
    for (const auto& f : ifs.maps()) best = std::max(best, f.scale.dbl());
    ratio = Scalar::approx(best);
  }

  std::vector<BoxCountSeries> series(xi_steps);
  for (int k = params.k_min; k <= params.k_max; ++k) {
    Scalar delta = Scalar::approx(std::pow(ratio.dbl(), k) * ifs.radius());
    BallCover cover = ball_cover(ifs, delta, params.max_balls);
    for (int j = 0; j < xi_steps; ++j) {
      double xi = j * pi / xi_steps;
      double ux = std::cos(xi), uy = std::sin(xi);
      std::vector<Interval> ivs;
      ivs.reserve(cover.balls.size());
      for (const auto& b : cover.balls) {
        double mid = b.cx * ux + b.cy * uy;
        ivs.emplace_back(Scalar::approx(mid - b.radius),
                         Scalar::approx(mid + b.radius));
      }
      long long n = box_count(merge_cover(std::move(ivs), delta), delta);
      series[j].rows.push_back({k, delta, n});
    }
  }

  ProjectionProfile out;
  for (int j = 0; j < xi_steps; ++j) {
    BoxCountSeries window;
    for (std::size_t i = 0; i < series[j].rows.size(); ++i)
      if (static_cast<int>(i) >= params.skip_coarsest)
        window.rows.push_back(series[j].rows[i]);
    const BoxCountSeries& used =
        window.rows.size() >= 3 ? window : series[j];
    out.rows.push_back({j * pi / xi_steps, estimate_dimension(used)});
  }
  return out;
}

IFS2D rotate_system(const IFS2D& ifs, double phi) {
  double c = std::cos(phi), s = std::sin(phi);
  double cx = ifs.center_x(), cy = ifs.center_y();
  std::vector<Similitude2D> maps;
  for (const auto& f : ifs.maps()) {
    Similitude2D g = f;
    // R_phi f R_{-phi}: reflections pick up 2 phi, rotations are unchanged
    g.angle = Similitude2D::normalize_angle(f.angle + (f.reflect ? 2 * phi : 0));
    // translation of the conjugate: R_phi(f(R_{-phi}(p)) ) at p = 0 resolves
    // to rotating the image of the rotated origin about the center
    double ox = c * (0 - cx) + s * (0 - cy) + cx;
    double oy = -s * (0 - cx) + c * (0 - cy) + cy;
    auto [fx, fy] = f.apply(ox, oy);
    g.tx = Scalar::approx(c * (fx - cx) - s * (fy - cy) + cx);
    g.ty = Scalar::approx(s * (fx - cx) + c * (fy - cy) + cy);
    maps.push_back(g);
  }
  return IFS2D::create(std::move(maps), cx, cy, ifs.radius());
}

namespace {

struct SvgBuilder {
  std::string body;
  // unit square mapped to a 1000 x 1000 viewport, y flipped
  void rect(const Interval& x, const Interval& y, const std::string& fill,
            const std::string& stroke) {
    body += "<rect x=\"";
    append_num(body, 1000 * x.lo.dbl());
    body += "\" y=\"";
    append_num(body, 1000 * (1 - y.hi.dbl()));
    body += "\" width=\"";
    append_num(body, 1000 * x.length().dbl());
    body += "\" height=\"";
    append_num(body, 1000 * y.length().dbl());
    body += "\" fill=\"" + fill + "\" stroke=\"" + stroke +
            "\" stroke-width=\"1\"/>\n";
  }
  void circle(double cx, double cy, double r) {
    body += "<circle cx=\"";
    append_num(body, 1000 * cx);
    body += "\" cy=\"";
    append_num(body, 1000 * (1 - cy));
    body += "\" r=\"";
    append_num(body, 1000 * r);
    body += "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  }
  std::string finish() const {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
           "width=\"1000\" height=\"1000\" viewBox=\"0 0 1000 1000\">\n" +
           body + "</svg>\n";
  }
};

std::vector<CylinderInterval> level_cylinders(const IFS1D& ifs, int level) {
  std::vector<CylinderInterval> out = {
      {Word{}, ifs.hull(), Scalar(1)}};
  for (int d = 0; d < level; ++d) {
    std::vector<CylinderInterval> next;
    next.reserve(out.size() * ifs.size());
    for (const auto& c : out) {
      for (std::size_t i = 0; i < ifs.size(); ++i) {
        Word w = c.word;
        w.indices.push_back(static_cast<int>(i));
        next.push_back(cylinder(ifs, w));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

ProductRender render_product(const IFS1D& left, const IFS1D& right, int depth,
                             long long q_max, double tol) {
  if (depth < 0) throw DomainError("render_product: depth must be >= 0");
  ProductRender out;
  out.levels = depth;

  // exponent pair with equal cylinder widths, from the log-ratio witness
  long long step_l = 1, step_r = 1;
  if (left.homogeneous() && right.homogeneous()) {
    Scalar ra = left.ratio().abs();
    Scalar rb = right.ratio().abs();
    if (auto w = is_rational_ratio(ra, rb, q_max, tol)) {
      // q log ra = p log rb, so ra^q and rb^p agree
      step_l = w->q;
      step_r = w->p;
    }
  }

  SvgBuilder svg;
  if (depth == 0) {
    svg.rect(left.hull(), right.hull(), "none", "black");
    out.svg = svg.finish();
    return out;
  }

  for (int j = 1; j <= depth; ++j) {
    auto cols = level_cylinders(left, static_cast<int>(j * step_l));
    auto rows = level_cylinders(right, static_cast<int>(j * step_r));
    if (cols.size() * rows.size() > 1'000'000)
      throw ResourceError("render_product: square budget exceeded");

    std::size_t base = out.squares.size();
    for (const auto& cx : cols) {
      for (const auto& cy : rows) {
        out.squares.push_back({j, cx.interval, cy.interval, -1});
      }
    }
    // exact coincidence of P_{pi/4} projections: equal lo-sums and hi-sums
    std::map<std::pair<Scalar, Scalar>, std::vector<std::size_t>> groups;
    for (std::size_t i = base; i < out.squares.size(); ++i) {
      const ProductSquare& s = out.squares[i];
      groups[{s.x.lo + s.y.lo, s.x.hi + s.y.hi}].push_back(i);
    }
    int next_group = 0;
    for (auto& [key, members] : groups) {
      if (members.size() < 2) continue;
      for (std::size_t idx : members) out.squares[idx].group = next_group;
      long long n = static_cast<long long>(members.size());
      out.colored_pairs += n * (n - 1) / 2;
      // first member black, the rest white, after the figure convention
      bool first = true;
      for (std::size_t idx : members) {
        const ProductSquare& s = out.squares[idx];
        svg.rect(s.x, s.y, first ? "black" : "white", "black");
        first = false;
      }
      ++next_group;
    }
    for (std::size_t i = base; i < out.squares.size(); ++i) {
      const ProductSquare& s = out.squares[i];
      if (s.group < 0) svg.rect(s.x, s.y, "none", "#999999");
    }
  }
  out.svg = svg.finish();
  return out;
}

std::string render_svg(const IFS2D& ifs, int depth, std::size_t max_balls) {
  if (depth < 0) throw DomainError("render_svg: depth must be >= 0");
  double words = std::pow(static_cast<double>(ifs.size()), depth);
  if (words > static_cast<double>(max_balls))
    throw ResourceError("render_svg: word budget exceeded");

  std::vector<Similitude2D> level = {Similitude2D::root()};
  for (int d = 0; d < depth; ++d) {
    std::vector<Similitude2D> next;
    next.reserve(level.size() * ifs.size());
    for (const auto& w : level)
      for (const auto& f : ifs.maps()) next.push_back(w.compose(f));
    level = std::move(next);
  }
  SvgBuilder svg;
  for (const auto& w : level) {
    auto [cx, cy] = w.apply(ifs.center_x(), ifs.center_y());
    svg.circle(cx, cy, w.scale.dbl() * ifs.radius());
  }
  return svg.finish();
}

}  // namespace resodim
