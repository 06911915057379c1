#include <algorithm>
#include <cmath>

#include "blab/error.hpp"
#include "blab/kernels.hpp"
#include "blab/norms.hpp"
#include "blab/parallel.hpp"
#include "blab/quadrature.hpp"

namespace blab {

double heat_maximal(const SpaceParams& params, const Symbol& b, Coords x, double t, const HeatMaximalSpec& spec) {
  require_point(params, x);
  require(t > 0.0 && std::isfinite(t), ErrorKind::invalid_input, "heat_maximal needs t > 0");
  require(spec.space_samples >= 1 && spec.scale_samples >= 1 && spec.scale_lo > 0.0 && spec.scale_lo <= 1.0 &&
              spec.order >= 1 && spec.levels >= 0 && spec.extent > 0.0,
          ErrorKind::invalid_input, "invalid heat maximal sample spec");
  if (b.is_constant()) return 0.0;
  const int d = params.dim();

  // midpoint grid on the cube around x, kept inside B(x, t) and the half-space
  std::vector<std::vector<double>> ys;
  const int m = spec.space_samples;
  std::vector<int> idx(d, 0);
  for (;;) {
    std::vector<double> y(d);
    double r2 = 0.0;
    for (int j = 0; j < d; ++j) {
      const double u = m == 1 ? 0.0 : -1.0 + (2.0 * idx[j] + 1.0) / m;
      y[j] = x[j] + t * u;
      r2 += t * t * u * u;
    }
    if (r2 < t * t && y[d - 1] > 0.0) ys.push_back(std::move(y));
    int j = 0;
    while (j < d && ++idx[j] == m) idx[j++] = 0;
    if (j == d) break;
  }
  if (ys.empty()) ys.emplace_back(x.begin(), x.end());
  std::vector<double> scales;
  for (int i = 0; i < spec.scale_samples; ++i)
    scales.push_back(spec.scale_samples == 1
                         ? t
                         : t * (spec.scale_lo + (1.0 - spec.scale_lo) * i / (spec.scale_samples - 1.0)));

  const HeatKernel heat(params);
  const CellRule rule(params, spec.order);
  std::vector<KernelDerivative> which;
  for (int j = 0; j < d; ++j) {
    std::vector<int> a(2 * d, 0);
    a[j] = 1;
    which.push_back(KernelDerivative::space(a));
  }
  which.push_back(KernelDerivative::dt());

  const std::size_t count = ys.size() * scales.size();
  std::vector<double> out(count, 0.0);
  parallel_for(count, [&](std::size_t k) {
    const auto& y = ys[k / scales.size()];
    const double s = scales[k % scales.size()];
    const double by = b(y);
    std::vector<double> lo(y), hi(y);
    for (int j = 0; j < d; ++j) {
      lo[j] -= spec.extent * s;
      hi[j] += spec.extent * s;
    }
    lo[d - 1] = std::max(0.0, lo[d - 1]);
    const Box zbox(lo, hi);
    if (by == 0.0 && b.support()) {
      bool meets = true;
      for (int j = 0; j < d; ++j) meets = meets && !(zbox.hi[j] < b.support()->lo[j] || b.support()->hi[j] < zbox.lo[j]);
      if (!meets) return;
    }
    // grad of the constant part vanishes, so subtract b(y) for cancellation
    const NodeSet zs = rule.nodes(zbox, spec.levels);
    std::vector<double> g(d + 1, 0.0);
    for (std::size_t i = 0; i < zs.size(); ++i) {
      const Coords z = zs.point(i);
      const double diff = b(z) - by;
      if (diff == 0.0) continue;
      for (int j = 0; j <= d; ++j) g[j] += zs.w[i] * diff * heat.derivative(s, y, z, which[j]);
    }
    double norm2 = 0.0;
    for (double v : g) norm2 += v * v;
    out[k] = s * std::sqrt(norm2);
  });
  return *std::max_element(out.begin(), out.end());
}

}  // namespace blab
