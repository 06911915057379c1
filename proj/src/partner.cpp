#include <cmath>
#include <limits>

#include "blab/error.hpp"
#include "blab/kernels.hpp"

namespace blab {

namespace {

// Midpoint sample grid of a box, s points per side.
std::vector<double> sample_points(const Box& b, int s) {
  const int d = b.dim();
  std::size_t total = 1;
  for (int j = 0; j < d; ++j) total *= static_cast<std::size_t>(s);
  std::vector<double> pts(total * d);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    for (int j = 0; j < d; ++j) {
      const int c = static_cast<int>(rest % s);
      rest /= s;
      pts[i * d + j] = b.lo[j] + (c + 0.5) * b.side(j) / s;
    }
  }
  return pts;
}

std::optional<DyadicCube> shifted_cube(const DyadicCube& q, int axis, int offset) {
  auto raw = q.raw_index();
  const std::int64_t first = raw.back() - q.index().back();
  raw[axis] += offset;
  if (raw.back() < first) return std::nullopt;
  return DyadicCube::from_raw(q.system(), q.shift(), q.generation(), raw);
}

}  // namespace

std::optional<PartnerResult> partner_in_direction(const RieszKernel& kernel, const DyadicCube& q, int axis,
                                                  int orientation, const PartnerSearchSpec& spec) {
  const int d = q.dim();
  require(d == kernel.params().dim(), ErrorKind::invalid_input, "cube dimension mismatch");
  require(axis >= 0 && axis < d && (orientation == 1 || orientation == -1), ErrorKind::invalid_input,
          "invalid partner direction");
  require(spec.max_separation >= 2 && spec.samples_per_dim >= 1, ErrorKind::invalid_input, "invalid partner search spec");
  const double mq = cube_measure(kernel.params(), q.box());
  const auto xs = sample_points(q.box(), spec.samples_per_dim);
  const std::size_t nx = xs.size() / d;
  for (int sep = 2; sep <= spec.max_separation; ++sep) {
    const auto cand = shifted_cube(q, axis, orientation * sep);
    if (!cand) continue;
    const auto ys = sample_points(cand->box(), spec.samples_per_dim);
    int sign = 0;
    bool ok = true;
    double min_abs = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nx && ok; ++i) {
      for (std::size_t j = 0; j < nx; ++j) {
        const double k = kernel(Coords(xs.data() + i * d, d), Coords(ys.data() + j * d, d));
        const int s = k > 0.0 ? 1 : (k < 0.0 ? -1 : 0);
        if (s == 0 || (sign != 0 && s != sign)) {
          ok = false;
          break;
        }
        sign = s;
        min_abs = std::min(min_abs, std::abs(k));
      }
    }
    if (!ok) continue;
    return PartnerResult{*cand, sign, min_abs * mq, axis, orientation, sep, nx * nx};
  }
  return std::nullopt;
}

PartnerResult find_partner_cube(const RieszKernel& kernel, const DyadicCube& q, const PartnerSearchSpec& spec) {
  const int d = q.dim();
  std::vector<int> axes{kernel.direction() - 1};
  for (int j = 0; j < d; ++j)
    if (j != kernel.direction() - 1) axes.push_back(j);
  for (int axis : axes)
    for (int orientation : {1, -1})
      if (auto r = partner_in_direction(kernel, q, axis, orientation, spec)) return *r;
  fail(ErrorKind::no_partner, "no sign-constant partner cube found");
}

}  // namespace blab
