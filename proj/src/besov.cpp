#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "blab/error.hpp"
#include "blab/norms.hpp"
#include "blab/parallel.hpp"
#include "blab/quadrature.hpp"
#include "blab/simd.hpp"

namespace blab {

namespace {

struct Panel {
  double lo, hi;
};

// Panels from a to b: geometric (ratio 2) up to `fine`, width `fine` up to `mid`, ratio 1.5 beyond.
std::vector<Panel> radial_panels(double a, double b, double fine, double mid, const std::vector<double>& cuts) {
  std::vector<double> pts{a};
  double r = a;
  while (r < b) {
    double next;
    if (r < fine) next = std::min(2.0 * r, fine);
    else if (r < mid) next = r + fine;
    else next = 1.5 * r;
    r = std::min(next, b);
    pts.push_back(r);
  }
  for (double c : cuts)
    if (c > a && c < b) pts.push_back(c);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<Panel> out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    if (pts[i + 1] > pts[i] * (1.0 + 1e-14)) out.push_back({pts[i], pts[i + 1]});
  return out;
}

struct RadialNode {
  double r, w;
  std::size_t panel;
};

std::vector<RadialNode> radial_nodes(const std::vector<Panel>& panels, int order) {
  const Rule1D& gl = gauss_legendre_cached(order);
  std::vector<RadialNode> out;
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const double h = 0.5 * (panels[p].hi - panels[p].lo);
    for (int i = 0; i < gl.size(); ++i) out.push_back({panels[p].lo + h * (1.0 + gl.nodes[i]), h * gl.weights[i], p});
  }
  return out;
}

// m(B(x, r)) = r^{n+1+2 lambda} F(x_{n+1} / r) for n = 1. F is interpolated in Chebyshev
// form on gamma in [0, 1] and on 1/gamma in [0, 1] (scaled by gamma^{-2 lambda}).
class BallTable {
 public:
  explicit BallTable(const SpaceParams& params) : params_(params) {
    if (params.n == 0) return;
    near_ = fit([&](double g) { return unit(g); });
    far_ = fit([&](double u) { return u == 0.0 ? unit_limit() : unit(1.0 / u) * std::pow(u, 2.0 * params_.lambda); });
  }

  double operator()(Coords x, double r) const {
    if (params_.n == 0) return weighted_interval_measure(std::max(0.0, x[0] - r), x[0] + r, params_.lambda);
    const double g = x[params_.n] / r;
    const double f = g <= 1.0 ? eval(near_, g) : eval(far_, 1.0 / g) * std::pow(g, 2.0 * params_.lambda);
    return std::pow(r, params_.upper_dimension()) * f;
  }

 private:
  static constexpr int nodes = 96;

  double unit(double g) const {
    std::vector<double> c(params_.dim(), 0.0);
    c.back() = g;
    return ball_measure(params_, c, 1.0, 32);
  }
  // gamma -> infinity: F(gamma) gamma^{-2 lambda} tends to the unit ball volume
  double unit_limit() const { return std::pow(std::numbers::pi, 0.5 * params_.dim()) / std::tgamma(0.5 * params_.dim() + 1.0); }

  template <class F>
  std::vector<double> fit(F f) const {
    std::vector<double> vals(nodes), coef(nodes, 0.0);
    for (int k = 0; k < nodes; ++k) vals[k] = f(0.5 + 0.5 * std::cos(std::numbers::pi * (k + 0.5) / nodes));
    for (int j = 0; j < nodes; ++j) {
      for (int k = 0; k < nodes; ++k) coef[j] += vals[k] * std::cos(std::numbers::pi * j * (k + 0.5) / nodes);
      coef[j] *= (j == 0 ? 1.0 : 2.0) / nodes;
    }
    return coef;
  }
  static double eval(const std::vector<double>& c, double t) {
    const double x = 2.0 * t - 1.0;
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t j = c.size(); j-- > 1;) {
      const double b0 = 2.0 * x * b1 - b2 + c[j];
      b2 = b1;
      b1 = b0;
    }
    return x * b1 - b2 + c[0];
  }

  SpaceParams params_;
  std::vector<double> near_, far_;
};

bool in_box(const Box& b, Coords x) { return b.contains_closed(x); }

// Angular intervals of the circle x + r(cos, sin) on which `keep` holds, split at the
// crossings of the lines x_j = c for the given (axis, value) pairs.
std::vector<Panel> circle_arcs(Coords x, double r, const std::vector<std::pair<int, double>>& lines,
                               const std::function<bool(double, double)>& keep) {
  std::vector<double> cuts{0.0, 2.0 * std::numbers::pi};
  for (auto [axis, c] : lines) {
    const double t = (c - x[axis]) / r;
    if (std::abs(t) >= 1.0) continue;
    if (axis == 0) {
      const double a = std::acos(t);
      cuts.push_back(a);
      cuts.push_back(2.0 * std::numbers::pi - a);
    } else {
      const double a = std::asin(t);
      cuts.push_back(a < 0.0 ? a + 2.0 * std::numbers::pi : a);
      cuts.push_back(std::numbers::pi - a);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<Panel> arcs;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] < 1e-15) continue;
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    if (!keep(x[0] + r * std::cos(mid), x[1] + r * std::sin(mid))) continue;
    if (!arcs.empty() && std::abs(arcs.back().hi - cuts[i]) < 1e-15) arcs.back().hi = cuts[i + 1];
    else arcs.push_back({cuts[i], cuts[i + 1]});
  }
  return arcs;
}

struct Accum {
  double i = 0, ii = 0, iii = 0, far = 0, strip = 0;
  std::vector<double> shells;
  void add(const Accum& o) {
    i += o.i;
    ii += o.ii;
    iii += o.iii;
    far += o.far;
    strip += o.strip;
    if (shells.size() < o.shells.size()) shells.resize(o.shells.size(), 0.0);
    for (std::size_t k = 0; k < o.shells.size(); ++k) shells[k] += o.shells[k];
  }
};

}  // namespace

BesovDirectReport besov_norm_direct(const SpaceParams& params, const Symbol& b, double p, const BesovDirectSpec& spec) {
  require(p > params.lower_dimension(), ErrorKind::invalid_input,
          "the Besov norm needs p > n+1; below that only constants have finite norm");
  require(params.n <= 1, ErrorKind::invalid_input, "besov_norm_direct is implemented for n = 0 and n = 1");
  require(spec.collar > 0.0 && spec.radius > 2.0 * spec.collar && spec.order >= 2 && spec.outer_panels >= 1,
          ErrorKind::invalid_input, "invalid Besov truncation spec");
  BesovDirectReport rep;
  if (b.is_constant()) return rep;
  require(b.support().has_value(), ErrorKind::invalid_input, "besov_norm_direct needs a symbol with a support hint");
  const Box& s = *b.support();
  const int d = params.dim();
  const double n_last = s.center()[d - 1];
  const double far = spec.far > 0.0 ? spec.far : 10.0 * n_last;
  double diam = 0.0;
  for (int j = 0; j < d; ++j) diam += s.side(j) * s.side(j);
  diam = std::sqrt(diam);
  const double fine = s.max_side() / 32.0;
  const double h = spec.collar;
  const double tl = 2.0 * params.lambda;
  const BallTable ball_m(params);

  // r panels shared by every outer node, starting at the half collar
  auto panels = radial_panels(0.5 * h, spec.radius, fine, 1.5 * diam, {h, far});
  const auto rn = radial_nodes(panels, spec.order);
  rep.shells.reserve(panels.size());
  for (const auto& pn : panels) rep.shells.push_back({pn.lo, pn.hi, 0.0});

  int levels = 0;
  while ((1 << levels) < spec.outer_panels) ++levels;
  const NodeSet outer = CellRule(params, spec.order).nodes(s, levels);
  std::vector<Accum> acc(outer.size());
  const Rule1D& ga = gauss_legendre_cached(spec.angle_nodes);
  std::vector<std::pair<int, double>> lines;
  if (d == 2) lines = {{0, s.lo[0]}, {0, s.hi[0]}, {1, s.lo[1]}, {1, s.hi[1]}, {1, 0.0}};

  // x in S as ball center, y anywhere: I and III
  auto term_a = [&](std::size_t idx) {
    Accum& a = acc[idx];
    a.shells.assign(panels.size(), 0.0);
    const Coords x = outer.point(idx);
    const double wx = outer.w[idx];
    const double bx = b(x);
    // beyond the farthest corner of S every y is outside S and the shell integral is
    // |b(x)|^p (1/m(lo) - 1/m(hi)), since d/dr m(B(x, r)) is the sphere's weighted measure
    double reach = 0.0;
    for (int mask = 0; mask < (1 << d); ++mask) {
      double r2 = 0.0;
      for (int j = 0; j < d; ++j) {
        const double v = ((mask >> j) & 1 ? s.hi[j] : s.lo[j]) - x[j];
        r2 += v * v;
      }
      reach = std::max(reach, std::sqrt(r2));
    }
    const double bxp = std::pow(std::abs(bx), p);
    for (std::size_t k = 0; k < panels.size(); ++k) {
      const Panel& pn = panels[k];
      if (pn.lo < reach || pn.lo < h) continue;
      const double v = wx * bxp * (1.0 / ball_m(x, pn.lo) - 1.0 / ball_m(x, pn.hi));
      a.iii += v;
      a.shells[k] += v;
      if (pn.lo >= far) a.far += v;
    }
    for (const auto& node : rn) {
      const double r = node.r;
      if (panels[node.panel].lo >= reach && panels[node.panel].lo >= h) continue;
      const double m = ball_m(x, r);
      double in = 0.0, out = 0.0;
      if (d == 1) {
        for (double sgn : {1.0, -1.0}) {
          const double y = x[0] + sgn * r;
          if (y <= 0.0) continue;
          const double yy[1] = {y};
          const double v = std::pow(std::abs(bx - b(yy)), p) * std::pow(y, tl);
          (in_box(s, yy) ? in : out) += v;
        }
      } else {
        const auto arcs = circle_arcs(x, r, {{1, 0.0}}, [](double, double y2) { return y2 > 0.0; });
        for (const auto& arc : arcs) {
          const double ha = 0.5 * (arc.hi - arc.lo);
          for (int k = 0; k < ga.size(); ++k) {
            const double th = arc.lo + ha * (1.0 + ga.nodes[k]);
            const double yy[2] = {x[0] + r * std::cos(th), x[1] + r * std::sin(th)};
            const double v = ha * ga.weights[k] * r * std::pow(std::abs(bx - b(yy)), p) * std::pow(yy[1], tl);
            (in_box(s, yy) ? in : out) += v;
          }
        }
      }
      const double f = wx * node.w / (m * m);
      if (r < h) {
        a.strip += f * (in + out);
        continue;
      }
      a.i += f * in;
      a.iii += f * out;
      a.shells[node.panel] += f * out;
      if (r > far) a.far += f * (in + out);
    }
  };

  // y in S, ball center x outside S: II
  auto term_b = [&](std::size_t idx) {
    Accum& a = acc[idx];
    const Coords y = outer.point(idx);
    const double by = std::pow(std::abs(b(y)), p);
    if (by == 0.0) return;
    const double wy = outer.w[idx];
    if (d == 1) {
      // x = y + r beyond the right edge, x = y - r between 0 and the left edge
      const double yv = y[0];
      const std::pair<double, double> ranges[2] = {{s.hi[0] - yv, spec.radius}, {yv - s.lo[0], std::min(yv, spec.radius)}};
      for (int side = 0; side < 2; ++side) {
        const double lo = std::max(ranges[side].first, 0.5 * h);
        const double hi = ranges[side].second;
        if (hi <= lo) continue;
        const auto pn = radial_panels(lo, hi, std::max(fine, lo), 1.5 * diam, {h, far});
        for (const auto& node : radial_nodes(pn, spec.order)) {
          const double xv = side == 0 ? yv + node.r : yv - node.r;
          const double xx[1] = {xv};
          const double m = ball_m(xx, node.r);
          const double v = wy * node.w * by * std::pow(xv, tl) / (m * m);
          if (node.r < h) a.strip += v;
          else {
            a.ii += v;
            if (node.r > far) a.far += v;
          }
        }
      }
      return;
    }
    auto outside = [&](double x1, double x2) { return x2 > 0.0 && !(x1 >= s.lo[0] && x1 <= s.hi[0] && x2 >= s.lo[1] && x2 <= s.hi[1]); };
    for (const auto& node : rn) {
      const double r = node.r;
      double sum = 0.0;
      for (const auto& arc : circle_arcs(y, r, lines, outside)) {
        const double ha = 0.5 * (arc.hi - arc.lo);
        for (int k = 0; k < ga.size(); ++k) {
          const double th = arc.lo + ha * (1.0 + ga.nodes[k]);
          const double xx[2] = {y[0] + r * std::cos(th), y[1] + r * std::sin(th)};
          const double m = ball_m(xx, r);
          sum += ha * ga.weights[k] * r * std::pow(xx[1], tl) / (m * m);
        }
      }
      const double v = wy * node.w * by * sum;
      if (r < h) a.strip += v;
      else {
        a.ii += v;
        if (r > far) a.far += v;
      }
    }
  };

  parallel_for(outer.size(), term_a);
  parallel_for(outer.size(), term_b);
  Accum total;
  for (const auto& a : acc) total.add(a);
  rep.term_i = total.i;
  rep.term_ii = total.ii;
  rep.term_iii = total.iii;
  rep.far_tail = total.far;
  for (std::size_t k = 0; k < rep.shells.size() && k < total.shells.size(); ++k) rep.shells[k].mass = total.shells[k];
  const double sum = total.i + total.ii + total.iii;
  rep.value = std::pow(sum, 1.0 / p);
  rep.half_collar_value = std::pow(sum + total.strip, 1.0 / p);
  return rep;
}

double besov_dyadic_constant(int n) { return 1.05 * 1.5 * std::sqrt(n + 1.0); }

NormReport besov_norm_dyadic(const SpaceParams& params, const Symbol& b, double p, const AdjacentSystems& systems,
                             const BesovDyadicSpec& spec) {
  require(p > 0.0, ErrorKind::invalid_input, "p must be > 0");
  NormReport rep;
  rep.k_min = systems.k_min();
  rep.k_max = systems.k_max();
  rep.per_system.assign(1, 0.0);
  if (b.is_constant()) return rep;
  const int d = params.dim();
  const double cn = besov_dyadic_constant(params.n);
  const CellRule rule(params, spec.order);
  std::vector<DyadicCube> cubes;
  for (int k = systems.k_min(); k <= systems.k_max(); ++k)
    for (auto& q : systems.cubes(0, k)) cubes.push_back(std::move(q));
  std::vector<double> term(cubes.size(), 0.0);

  auto meets = [](const Box& a, const Box& c) {
    for (int j = 0; j < a.dim(); ++j)
      if (a.hi[j] < c.lo[j] || c.hi[j] < a.lo[j]) return false;
    return true;
  };

  parallel_for(cubes.size(), [&](std::size_t ci) {
    const DyadicCube& q = cubes[ci];
    const auto c = q.center();
    const double rho = cn * q.side();
    std::vector<double> blo(c), bhi(c);
    for (int j = 0; j < d; ++j) {
      blo[j] -= rho;
      bhi[j] += rho;
    }
    blo[d - 1] = std::max(0.0, blo[d - 1]);
    const Box ball_box(blo, bhi);
    const auto& sup = b.support();
    if (sup && !meets(*sup, ball_box) && !meets(*sup, q.box())) return;

    // y rule on the ball: exact split when the ball swallows the support box
    NodeSet ys(d);
    double y_rest = 0.0;  // m(B minus S), where b(y) = 0
    const double mb = ball_measure(params, c, rho);
    bool covers = false;
    if (sup) {
      covers = true;
      for (int mask = 0; mask < (1 << d) && covers; ++mask) {
        double r2 = 0.0;
        for (int j = 0; j < d; ++j) {
          const double v = ((mask >> j) & 1 ? sup->hi[j] : sup->lo[j]) - c[j];
          r2 += v * v;
        }
        covers = r2 < rho * rho;
      }
    }
    if (covers) {
      ys = rule.nodes(*sup, 2);
      y_rest = std::max(0.0, mb - ys.total_weight());
    } else {
      ys = ball_rule(params, c, rho, spec.ball_order);
    }
    const double my = covers ? mb : ys.total_weight();
    std::vector<double> by(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) by[i] = b(ys.point(i));

    // x rule on Q intersected with the support box, b(x) = 0 elsewhere
    Box inner = q.box();
    if (sup)
      for (int j = 0; j < d; ++j) {
        inner.lo[j] = std::max(inner.lo[j], sup->lo[j]);
        inner.hi[j] = std::min(inner.hi[j], sup->hi[j]);
      }
    const double mq = cube_measure(params, q.box());
    double sum = 0.0;
    double x_rest = mq;
    bool inner_ok = true;
    for (int j = 0; j < d; ++j) inner_ok = inner_ok && inner.hi[j] > inner.lo[j];
    if (inner_ok) {
      const NodeSet xs = rule.nodes(inner, 1);
      x_rest = std::max(0.0, mq - cube_measure(params, inner));
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double bx = b(xs.point(i));
        const double s = simd::abs_pow_sum(bx, by, ys.w, p) + y_rest * std::pow(std::abs(bx), p);
        sum += xs.w[i] * s;
      }
    }
    if (x_rest > 0.0) sum += x_rest * simd::abs_pow_sum(0.0, by, ys.w, p);
    term[ci] = sum / (mq * my);
  });

  double all = 0.0, shrunk = 0.0;
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    all += term[i];
    if (cubes[i].generation() > systems.k_min() && cubes[i].generation() < systems.k_max()) shrunk += term[i];
  }
  rep.value = std::pow(all, 1.0 / p);
  rep.per_system[0] = rep.value;
  rep.shrunk_value = std::pow(shrunk, 1.0 / p);
  rep.relative_change = rep.value > 0.0 ? std::abs(rep.value - rep.shrunk_value) / rep.value : 0.0;
  return rep;
}

}  // namespace blab
