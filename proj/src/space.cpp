#include "blab/space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "blab/error.hpp"

namespace blab {

SpaceParams::SpaceParams(int n_, double lambda_) : n(n_), lambda(lambda_) {
  require(n >= 0, ErrorKind::invalid_input, "space dimension n must be >= 0");
  require(std::isfinite(lambda) && lambda > 0.0, ErrorKind::invalid_input, "lambda must be > 0");
}

Box::Box(std::vector<double> lo_, std::vector<double> hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  require(lo.size() == hi.size() && !lo.empty(), ErrorKind::invalid_input, "box corners must have equal nonzero length");
  for (std::size_t j = 0; j < lo.size(); ++j)
    require(hi[j] >= lo[j], ErrorKind::invalid_input, "box has a negative side length");
}

double Box::max_side() const {
  double s = 0.0;
  for (int j = 0; j < dim(); ++j) s = std::max(s, side(j));
  return s;
}

std::vector<double> Box::center() const {
  std::vector<double> c(lo.size());
  for (std::size_t j = 0; j < lo.size(); ++j) c[j] = 0.5 * (lo[j] + hi[j]);
  return c;
}

bool Box::contains(Coords x) const {
  for (std::size_t j = 0; j < lo.size(); ++j)
    if (x[j] < lo[j] || x[j] >= hi[j]) return false;
  return true;
}

bool Box::contains_closed(Coords x) const {
  for (std::size_t j = 0; j < lo.size(); ++j)
    if (x[j] < lo[j] || x[j] > hi[j]) return false;
  return true;
}

double weighted_interval_measure(double a, double b, double lambda) {
  require(a >= 0.0 && b >= a, ErrorKind::invalid_input, "weighted interval needs 0 <= a <= b");
  const double e = 2.0 * lambda + 1.0;
  if (b == a) return 0.0;
  if (a == 0.0) return std::pow(b, e) / e;
  // b^e - a^e = -b^e expm1(e log(a/b))
  return -std::pow(b, e) * std::expm1(e * std::log(a / b)) / e;
}

double distance_squared(Coords x, Coords y) {
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double d = x[j] - y[j];
    s += d * d;
  }
  return s;
}

double distance(Coords x, Coords y) { return std::sqrt(distance_squared(x, y)); }

double box_distance(const Box& a, const Box& b) {
  double s = 0.0;
  for (int j = 0; j < a.dim(); ++j) {
    const double gap = std::max({0.0, a.lo[j] - b.hi[j], b.lo[j] - a.hi[j]});
    s += gap * gap;
  }
  return std::sqrt(s);
}

void require_point(const SpaceParams& params, Coords x) {
  require(static_cast<int>(x.size()) == params.dim(), ErrorKind::invalid_input, "point has the wrong dimension");
  require(x.back() > 0.0, ErrorKind::invalid_input, "point must satisfy x_{n+1} > 0");
  for (double v : x) require(std::isfinite(v), ErrorKind::invalid_input, "point has a non-finite coordinate");
}

std::string format_coords(Coords x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t j = 0; j < x.size(); ++j) os << (j ? "," : "") << x[j];
  os << ')';
  return os.str();
}

}  // namespace blab
