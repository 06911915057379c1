#include "blab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "blab/error.hpp"
#include "blab/quadrature.hpp"

namespace blab {

namespace {

int parity_sign(int k) { return (k & 1) ? -1 : 1; }

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Raw index of the first cube of generation k whose upper end is above 0.
std::int64_t first_raw(int k, int t) { return floor_div(-static_cast<std::int64_t>(parity_sign(k)) * t, 3); }

double lattice_coord(std::int64_t num, int k) { return std::ldexp(static_cast<double>(num) / 3.0, -k); }

}  // namespace

double cube_measure(const SpaceParams& params, const Box& box) {
  const int d = params.dim();
  require(box.dim() == d, ErrorKind::invalid_input, "box dimension does not match the space");
  double m = 1.0;
  for (int j = 0; j < d; ++j)
    require(box.hi[j] >= box.lo[j], ErrorKind::invalid_input, "box has a negative side length");
  require(box.lo[d - 1] >= 0.0, ErrorKind::invalid_input, "box leaves the half-space");
  for (int j = 0; j + 1 < d; ++j) m *= box.hi[j] - box.lo[j];
  return m * weighted_interval_measure(box.lo[d - 1], box.hi[d - 1], params.lambda);
}

namespace {

// Panel Gauss-Jacobi integral of (gamma + s)^{2 lambda} (1 - s^2)^{n/2} over s in [max(-1, -gamma), 1].
// Both algebraic singular points sit at or below the left end; graded panels resolve their gap.
double ball_profile(int n, double lambda, double gamma, int order) {
  const double hn = 0.5 * n, tl = 2.0 * lambda;
  const bool truncated = gamma < 1.0;
  const double a = truncated ? -gamma : -1.0;
  const double gap = std::abs(1.0 - gamma);
  const double other = a - gap;
  auto f = [&](double s) { return std::pow(std::max(gamma + s, 0.0), tl) * std::pow(std::max(1.0 - s * s, 0.0), hn); };
  // panel [p, q] with weight (q - s)^al (s - p)^be divided out of f
  auto panel = [&](double p, double q, double al, double be) {
    const Rule1D& rule = gauss_jacobi_cached(order, al, be);
    const double h = 0.5 * (q - p);
    double sum = 0.0;
    for (int i = 0; i < rule.size(); ++i) {
      const double s = p + h * (1.0 + rule.nodes[i]);
      sum += rule.weights[i] * f(s) / (std::pow(q - s, al) * std::pow(s - p, be));
    }
    return sum * std::pow(h, 1.0 + al + be);
  };
  const double left_exp = truncated ? tl : hn;
  if (gap < 1e-14) return panel(-1.0, 1.0, hn, tl + hn);
  if (gap >= 0.5) return panel(a, 1.0, hn, left_exp);
  double sum = panel(a, a + gap, 0.0, left_exp);
  double p = a + gap;
  while (p < 0.0) {
    const double q = std::min(p + (p - other), 0.0);
    sum += panel(p, q, 0.0, 0.0);
    p = q;
  }
  return sum + panel(p, 1.0, hn, 0.0);
}

}  // namespace

double ball_measure(const SpaceParams& params, Coords center, double r, int order) {
  require(r > 0.0 && std::isfinite(r), ErrorKind::invalid_input, "ball radius must be > 0");
  require_point(params, center);
  if (params.n == 0) {
    const double x = center[0];
    return weighted_interval_measure(std::max(0.0, x - r), x + r, params.lambda);
  }
  // m = omega_n r^{n+1+2 lambda} int_a^1 (gamma + s)^{2 lambda} (1 - s^2)^{n/2} ds, gamma = x_{n+1} / r
  const double gamma = center[params.n] / r;
  const double omega = std::pow(std::numbers::pi, 0.5 * params.n) / std::tgamma(0.5 * params.n + 1.0);
  return omega * std::pow(r, params.upper_dimension()) * ball_profile(params.n, params.lambda, gamma, order);
}

double ball_measure_model(const SpaceParams& params, Coords center, double r) {
  const double d = params.lower_dimension();
  return std::pow(r, d) * std::pow(center[params.n], 2.0 * params.lambda) + std::pow(r, d + 2.0 * params.lambda);
}

double doubling_ratio(const SpaceParams& params, Coords center, double r, int order) {
  return ball_measure(params, center, 2.0 * r, order) / ball_measure(params, center, r, order);
}

DyadicCube::DyadicCube(int system, std::vector<int> shift, int k, std::vector<std::int64_t> m)
    : system_(system), shift_(std::move(shift)), k_(k), m_(std::move(m)) {
  const int d = dim();
  require(d >= 1 && static_cast<int>(shift_.size()) == d, ErrorKind::invalid_input, "cube index/shift length mismatch");
  require(m_.back() >= 0, ErrorKind::invalid_input, "last lattice index must be >= 0");
  for (int t : shift_) require(t >= 0 && t <= 2, ErrorKind::invalid_input, "shift digits must be in {0,1,2}");
  std::vector<double> lo(d), hi(d);
  const auto raw = raw_index();
  const int s = parity_sign(k_);
  for (int j = 0; j < d; ++j) {
    const std::int64_t num = 3 * raw[j] + s * shift_[j];
    lo[j] = lattice_coord(num, k_);
    hi[j] = lattice_coord(num + 3, k_);
  }
  lo[d - 1] = std::max(0.0, lo[d - 1]);
  require(hi[d - 1] > 0.0, ErrorKind::invalid_input, "cube lies outside the half-space");
  box_ = Box(std::move(lo), std::move(hi));
}

DyadicCube DyadicCube::from_raw(int system, const std::vector<int>& shift, int k, const std::vector<std::int64_t>& raw) {
  std::vector<std::int64_t> m = raw;
  m.back() -= first_raw(k, shift.back());
  return DyadicCube(system, shift, k, std::move(m));
}

DyadicCube DyadicCube::containing(int system, const std::vector<int>& shift, Coords x, int k) {
  const int d = static_cast<int>(x.size());
  require(static_cast<int>(shift.size()) == d, ErrorKind::invalid_input, "shift length mismatch");
  require(x[d - 1] >= 0.0, ErrorKind::invalid_input, "point outside the half-space");
  const int s = parity_sign(k);
  std::vector<std::int64_t> raw(d);
  for (int j = 0; j < d; ++j) {
    const double v = std::ldexp(x[j], k) - s * shift[j] / 3.0;
    raw[j] = static_cast<std::int64_t>(std::floor(v));
    // Guard against rounding at cell faces with the exact lattice numerators.
    for (int guard = 0; guard < 2; ++guard) {
      const double lo = lattice_coord(3 * raw[j] + s * shift[j], k);
      const double hi = lattice_coord(3 * raw[j] + s * shift[j] + 3, k);
      if (x[j] < lo) --raw[j];
      else if (x[j] >= hi) ++raw[j];
      else break;
    }
  }
  raw[d - 1] = std::max(raw[d - 1], first_raw(k, shift[d - 1]));
  return from_raw(system, shift, k, raw);
}

double DyadicCube::side() const { return std::ldexp(1.0, -k_); }

bool DyadicCube::truncated() const {
  const int d = dim();
  return box_.hi[d - 1] - box_.lo[d - 1] < side() * (1.0 - 1e-12);
}

std::vector<std::int64_t> DyadicCube::raw_index() const {
  std::vector<std::int64_t> raw = m_;
  raw.back() += first_raw(k_, shift_.back());
  return raw;
}

std::int64_t DyadicCube::lower_numerator(int j) const {
  return 3 * raw_index()[j] + parity_sign(k_) * shift_[j];
}

DyadicCube DyadicCube::parent() const {
  const auto raw = raw_index();
  const int sp = parity_sign(k_ - 1);
  std::vector<std::int64_t> pr(raw.size());
  for (std::size_t j = 0; j < raw.size(); ++j) pr[j] = floor_div(raw[j] - sp * shift_[j], 2);
  return from_raw(system_, shift_, k_ - 1, pr);
}

std::vector<DyadicCube> DyadicCube::children() const {
  const auto raw = raw_index();
  const int d = dim();
  const int s = parity_sign(k_);
  std::vector<DyadicCube> out;
  for (int mask = 0; mask < (1 << d); ++mask) {
    std::vector<std::int64_t> cr(d);
    for (int j = 0; j < d; ++j) cr[j] = 2 * raw[j] + s * shift_[j] + ((mask >> j) & 1);
    if (cr[d - 1] < first_raw(k_ + 1, shift_[d - 1])) continue;
    out.push_back(from_raw(system_, shift_, k_ + 1, cr));
  }
  return out;
}

DyadicCube DyadicCube::ancestor(int generation) const {
  require(generation <= k_, ErrorKind::invalid_input, "ancestor generation must not exceed the cube's");
  DyadicCube q = *this;
  while (q.k_ > generation) q = q.parent();
  return q;
}

bool DyadicCube::is_ancestor_of(const DyadicCube& other) const {
  if (other.system_ != system_ || other.k_ < k_) return false;
  return other.ancestor(k_) == *this;
}

bool DyadicCube::operator<(const DyadicCube& o) const {
  if (system_ != o.system_) return system_ < o.system_;
  if (k_ != o.k_) return k_ < o.k_;
  return m_ < o.m_;
}

AdjacentSystems::AdjacentSystems(const SpaceParams& params, int kappa, double delta, int k_min, int k_max, Box window)
    : params_(params), kappa_(kappa), delta_(delta), k_min_(k_min), k_max_(k_max), window_(std::move(window)) {
  const int d = params.dim();
  int full = 1;
  for (int j = 0; j < d; ++j) full *= 3;
  require(kappa >= 1 && kappa <= full, ErrorKind::invalid_input, "kappa must be in [1, 3^{n+1}]");
  require(delta == 0.5, ErrorKind::invalid_input, "only delta = 1/2 grids are implemented");
  require(k_min <= k_max, ErrorKind::invalid_input, "empty generation range");
  require(window_.dim() == d, ErrorKind::invalid_input, "window dimension mismatch");
  require(window_.lo[d - 1] >= 0.0, ErrorKind::invalid_input, "window leaves the half-space");
  for (int nu = 0; nu < kappa; ++nu) {
    std::vector<int> t(d);
    int rem = nu;
    for (int j = 0; j < d; ++j) {
      t[j] = rem % 3;
      rem /= 3;
    }
    shifts_.push_back(std::move(t));
  }
}

std::vector<DyadicCube> AdjacentSystems::cubes(int system, int k) const {
  const int d = params_.dim();
  const auto& t = shift(system);
  const int s = parity_sign(k);
  std::vector<std::int64_t> first(d), last(d);
  std::int64_t total = 1;
  for (int j = 0; j < d; ++j) {
    if (window_.hi[j] <= window_.lo[j]) return {};
    const double off = s * t[j] / 3.0;
    first[j] = static_cast<std::int64_t>(std::floor(std::ldexp(window_.lo[j], k) - off));
    last[j] = static_cast<std::int64_t>(std::ceil(std::ldexp(window_.hi[j], k) - off)) - 1;
    if (j == d - 1) first[j] = std::max(first[j], first_raw(k, t[j]));
    if (last[j] < first[j]) return {};
    total *= last[j] - first[j] + 1;
    require(total <= 50'000'000, ErrorKind::invalid_input, "cube enumeration too large for the window");
  }
  std::vector<DyadicCube> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<std::int64_t> raw = first;
  for (std::int64_t flat = 0; flat < total; ++flat) {
    std::int64_t rem = flat;
    for (int j = d - 1; j >= 0; --j) {
      const std::int64_t span = last[j] - first[j] + 1;
      raw[j] = first[j] + rem % span;
      rem /= span;
    }
    DyadicCube q = DyadicCube::from_raw(system, t, k, raw);
    const Box& b = q.box();
    bool meets = true;
    for (int j = 0; j < d; ++j)
      if (b.hi[j] <= window_.lo[j] || b.lo[j] >= window_.hi[j]) meets = false;
    if (meets) out.push_back(std::move(q));
  }
  return out;
}

DyadicCube AdjacentSystems::containing_cube(int system, Coords x, int k) const {
  require_point(params_, x);
  if (system < 0 || system >= kappa_) fail(ErrorKind::invalid_input, "system id out of range");
  if (k < k_min_ || k > k_max_ || !window_.contains(x)) fail(ErrorKind::out_of_window, "point or generation outside the enumerated window");
  return DyadicCube::containing(system, shift(system), x, k);
}

double AdjacentSystems::adjacency_constant() const { return 8.0 * std::sqrt(static_cast<double>(params_.dim())); }

std::optional<DyadicCube> AdjacentSystems::well_containing_cube(Coords x, double r) const {
  require_point(params_, x);
  require(r > 0.0, ErrorKind::invalid_input, "radius must be > 0");
  int k = static_cast<int>(std::floor(-std::log2(r))) - 2;
  while (r > std::ldexp(1.0, -k - 2)) --k;
  while (r <= std::ldexp(1.0, -k - 3)) ++k;
  const int d = params_.dim();
  const double reach = adjacency_constant() * r;
  for (int nu = 0; nu < kappa_; ++nu) {
    DyadicCube q = DyadicCube::containing(nu, shift(nu), x, k);
    const Box& b = q.box();
    bool inside = true;
    double far2 = 0.0;
    for (int j = 0; j < d && inside; ++j) {
      const double lo = (j == d - 1) ? std::max(0.0, x[j] - r) : x[j] - r;
      if (lo < b.lo[j] || x[j] + r > b.hi[j]) inside = false;
      const double f = std::max(x[j] - b.lo[j], b.hi[j] - x[j]);
      far2 += f * f;
    }
    if (inside && std::sqrt(far2) <= reach) return q;
  }
  return std::nullopt;
}

AdjacentSystems build_systems(const SpaceParams& params, int kappa, double delta, int k_min, int k_max, Box window) {
  return AdjacentSystems(params, kappa, delta, k_min, k_max, std::move(window));
}

std::pair<DyadicCube, DyadicCube> corner_subcubes(const DyadicCube& q, std::span<const int> signs) {
  const int d = q.dim();
  require(static_cast<int>(signs.size()) == d, ErrorKind::invalid_input, "signs must have length n+1");
  require(!q.truncated(), ErrorKind::invalid_input, "corner subcubes need an untruncated cube");
  const auto raw = q.raw_index();
  const int s = parity_sign(q.generation());
  std::vector<std::int64_t> a(d), b(d);
  for (int j = 0; j < d; ++j) {
    require(signs[j] == 1 || signs[j] == -1, ErrorKind::invalid_input, "signs must be +1 or -1");
    const std::int64_t base = 4 * raw[j] + s * q.shift()[j];
    a[j] = base + (signs[j] > 0 ? 3 : 0);
    b[j] = base + (signs[j] > 0 ? 0 : 3);
  }
  return {DyadicCube::from_raw(q.system(), q.shift(), q.generation() + 2, a),
          DyadicCube::from_raw(q.system(), q.shift(), q.generation() + 2, b)};
}

void write_cubes_csv(std::ostream& os, const SpaceParams& params, std::span<const DyadicCube> cubes) {
  const int d = params.dim();
  os << "system,k";
  for (int j = 0; j < d; ++j) os << ",m" << j + 1;
  for (int j = 0; j < d; ++j) os << ",lo" << j + 1;
  for (int j = 0; j < d; ++j) os << ",hi" << j + 1;
  os << ",measure\n";
  const auto old = os.precision(17);
  for (const auto& q : cubes) {
    os << q.system() << ',' << q.generation();
    for (auto m : q.index()) os << ',' << m;
    for (double v : q.box().lo) os << ',' << v;
    for (double v : q.box().hi) os << ',' << v;
    os << ',' << cube_measure(params, q.box()) << '\n';
  }
  os.precision(old);
}

}  // namespace blab
