#include <algorithm>
#include <cmath>
#include <numbers>

#include "blab/error.hpp"
#include "blab/kernels.hpp"
#include "blab/quadrature.hpp"

namespace blab {

SubordinatedRiesz::SubordinatedRiesz(const SpaceParams& params, int ell, const SubordinationSpec& spec,
                                     const ThetaQuadSpec& theta, double diagonal_floor)
    : params_(params), ell_(ell), spec_(spec), heat_(params, theta), floor_(diagonal_floor) {
  require(ell >= 1 && ell <= params.dim(), ErrorKind::invalid_input, "Riesz direction must be in 1..n+1");
  require(spec.panel_nodes >= 2 && spec.panel_width > 0.0 && spec.tolerance > 0.0 && spec.tolerance < 1.0,
          ErrorKind::invalid_input, "invalid subordination spec");
}

double SubordinatedRiesz::operator()(Coords x, Coords y) const {
  require_point(params_, x);
  require_point(params_, y);
  const int d = params_.dim();
  const double r = distance(x, y);
  double scale = 1.0;
  for (int j = 0; j < d; ++j) scale = std::max({scale, std::abs(x[j]), std::abs(y[j])});
  if (!(r >= floor_ * scale)) fail(ErrorKind::singularity, "Riesz kernel evaluated on the diagonal");

  const double a = params_.lambda + 0.5 * params_.n;
  // Below s_min the factor exp(-|x-y|^2 / 4s) is under tolerance; above s_max the
  // integrand decays like s^{-(a+1)} relative to the scale R^2.
  const double big_r = std::max({r, x[d - 1], y[d - 1]});
  const double log_tol = std::log(spec_.tolerance);
  const double tau_lo = std::log(r * r / (-4.0 * log_tol));
  const double tau_hi = std::log(big_r * big_r) - log_tol / a;
  const int panels = static_cast<int>(std::ceil((tau_hi - tau_lo) / spec_.panel_width));
  const double h = (tau_hi - tau_lo) / panels;
  const Rule1D& gl = gauss_legendre_cached(spec_.panel_nodes);

  std::vector<int> alpha(2 * d, 0);
  alpha[ell_ - 1] = 1;
  const auto which = KernelDerivative::space(alpha);
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = tau_lo + p * h;
    for (int i = 0; i < gl.size(); ++i) {
      const double tau = lo + 0.5 * h * (1.0 + gl.nodes[i]);
      const double s = std::exp(tau);
      // ds = s dtau; exp(-s Delta) has kernel H at t = sqrt(s)
      sum += 0.5 * h * gl.weights[i] * std::sqrt(s) * heat_.derivative(std::sqrt(s), x, y, which);
    }
  }
  return sum / std::sqrt(std::numbers::pi);
}

}  // namespace blab
