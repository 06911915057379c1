#include <algorithm>
#include <cmath>
#include <numbers>

#include "blab/error.hpp"
#include "blab/symbol.hpp"

namespace blab {

namespace {

struct Window {
  std::vector<double> c;
  double rho;

  // phi and d phi / d x_j
  double value(Coords x) const {
    const double s2 = dist2(x) / (rho * rho);
    return s2 < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s2)) : 0.0;
  }
  void grad(Coords x, std::span<double> out) const {
    const double s2 = dist2(x) / (rho * rho);
    const double phi = s2 < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s2)) : 0.0;
    const double f = phi == 0.0 ? 0.0 : -2.0 * phi / ((1.0 - s2) * (1.0 - s2) * rho * rho);
    for (std::size_t j = 0; j < c.size(); ++j) out[j] = f * (x[j] - c[j]);
  }
  double dist2(Coords x) const {
    double s = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) s += (x[j] - c[j]) * (x[j] - c[j]);
    return s;
  }
  Box support() const {
    std::vector<double> lo(c), hi(c);
    for (std::size_t j = 0; j < c.size(); ++j) {
      lo[j] -= rho;
      hi[j] += rho;
    }
    lo.back() = std::max(0.0, lo.back());
    return Box(lo, hi);
  }
};

double dot(const std::vector<double>& a, Coords x, const std::vector<double>& c) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * (x[j] - c[j]);
  return s;
}

}  // namespace

const std::vector<std::string>& symbol_kinds() {
  static const std::vector<std::string> kinds{"constant", "bump", "shifted-bump", "linear-window", "sine-window",
                                              "smoothstep"};
  return kinds;
}

Symbol::Symbol(std::string name, int dim, Value value, Gradient gradient, std::optional<Box> support)
    : name_(std::move(name)), dim_(dim), value_(std::move(value)), gradient_(std::move(gradient)), support_(std::move(support)) {}

void Symbol::gradient(Coords x, std::span<double> out) const {
  require(has_gradient(), ErrorKind::invalid_input, "symbol has no analytic gradient");
  gradient_(x, out);
  for (double& g : out) g *= scale_;
}

Symbol Symbol::scaled(double c) const {
  Symbol s = *this;
  s.scale_ *= c;
  return s;
}

SymbolSpec normalized_spec(const SymbolSpec& in, const SpaceParams& params) {
  SymbolSpec s = in;
  const int d = params.dim();
  const auto& kinds = symbol_kinds();
  if (std::find(kinds.begin(), kinds.end(), s.kind) == kinds.end())
    fail(ErrorKind::config, "unknown symbol kind '" + s.kind + "'");
  require(s.radius > 0.0 && std::isfinite(s.radius), ErrorKind::config, "symbol radius must be > 0");
  require(std::isfinite(s.amplitude) && std::isfinite(s.frequency), ErrorKind::config, "symbol parameters must be finite");
  if (s.center.empty()) {
    s.center.assign(d, 0.0);
    s.center.back() = 2.0 * s.radius;
  }
  if (s.direction.empty()) {
    s.direction.assign(d, 0.0);
    s.direction.front() = 1.0;
  }
  if (s.kind == "shifted-bump" && s.offset.empty()) {
    s.offset.assign(d, 0.0);
    s.offset.back() = 1.25 * s.radius - s.center.back();
  }
  require(static_cast<int>(s.center.size()) == d && static_cast<int>(s.direction.size()) == d, ErrorKind::config,
          "symbol center and direction must have n+1 entries");
  require(s.offset.empty() || static_cast<int>(s.offset.size()) == d, ErrorKind::config,
          "symbol offset must have n+1 entries");
  if (s.kind == "smoothstep") require(s.ramp_hi > s.ramp_lo, ErrorKind::config, "smoothstep ramp needs lo < hi");
  return s;
}

Symbol make_symbol(const SymbolSpec& spec, const SpaceParams& params) {
  const SymbolSpec s = normalized_spec(spec, params);
  const int d = params.dim();
  const double amp = s.amplitude;
  std::vector<double> c = s.center;
  if (s.kind == "shifted-bump")
    for (int j = 0; j < d; ++j) c[j] += s.offset[j];
  const Window win{c, s.radius};

  if (s.kind == "constant") {
    Symbol out(
        s.kind, d, [amp](Coords) { return amp; }, [](Coords, std::span<double> g) { std::fill(g.begin(), g.end(), 0.0); },
        std::nullopt);
    return out.mark_constant();
  }
  if (s.kind == "bump" || s.kind == "shifted-bump") {
    return Symbol(
        s.kind, d, [win, amp](Coords x) { return amp * win.value(x); },
        [win, amp](Coords x, std::span<double> g) {
          win.grad(x, g);
          for (double& v : g) v *= amp;
        },
        win.support());
  }
  if (s.kind == "linear-window") {
    const auto dir = s.direction;
    const double rho = s.radius;
    return Symbol(
        s.kind, d, [win, amp, dir, rho](Coords x) { return amp * dot(dir, x, win.c) / rho * win.value(x); },
        [win, amp, dir, rho](Coords x, std::span<double> g) {
          win.grad(x, g);
          const double lin = dot(dir, x, win.c) / rho;
          const double phi = win.value(x);
          for (std::size_t j = 0; j < g.size(); ++j) g[j] = amp * (lin * g[j] + dir[j] / rho * phi);
        },
        win.support());
  }
  if (s.kind == "sine-window") {
    const auto dir = s.direction;
    const double w = s.frequency * std::numbers::pi / s.radius;
    return Symbol(
        s.kind, d, [win, amp, dir, w](Coords x) { return amp * std::sin(w * dot(dir, x, win.c)) * win.value(x); },
        [win, amp, dir, w](Coords x, std::span<double> g) {
          win.grad(x, g);
          const double arg = w * dot(dir, x, win.c);
          const double phi = win.value(x);
          for (std::size_t j = 0; j < g.size(); ++j)
            g[j] = amp * (std::sin(arg) * g[j] + w * dir[j] * std::cos(arg) * phi);
        },
        win.support());
  }
  // smoothstep in x_1
  const double lo = s.ramp_lo, width = s.ramp_hi - s.ramp_lo;
  return Symbol(
      s.kind, d,
      [amp, lo, width](Coords x) {
        const double t = std::clamp((x[0] - lo) / width, 0.0, 1.0);
        return amp * t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
      },
      [amp, lo, width](Coords x, std::span<double> g) {
        std::fill(g.begin(), g.end(), 0.0);
        const double t = (x[0] - lo) / width;
        if (t > 0.0 && t < 1.0) g[0] = amp * 30.0 * t * t * (1.0 - t) * (1.0 - t) / width;
      },
      std::nullopt);
}

}  // namespace blab
