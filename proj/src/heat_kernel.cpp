#include <cmath>
#include <numbers>

#include "bessel_terms.hpp"
#include "blab/error.hpp"
#include "blab/kernels.hpp"
#include "blab/simd.hpp"

namespace blab {

namespace {

thread_local std::vector<double> tl_v, tl_w;

}  // namespace

double HeatKernel::constant_1d(double lambda) {
  return std::exp(-2.0 * lambda * std::numbers::ln2 - std::lgamma(lambda)) / std::sqrt(std::numbers::pi);
}

HeatKernel::HeatKernel(const SpaceParams& params, const ThetaQuadSpec& spec)
    : params_(params), quad_(params.lambda, spec) {}

double HeatKernel::value_1d(double t, double x, double y) const {
  require(t > 0.0 && x > 0.0 && y > 0.0, ErrorKind::invalid_input, "heat kernel needs t, x, y > 0");
  const double lam = params_.lambda;
  const double s = 4.0 * t * t;
  const double beta = 2.0 * x * y / s;
  const double alpha = (x - y) * (x - y) / s;
  quad_.exponential(beta, tl_v, tl_w);
  const double m0 = simd::exp_moments(tl_v, tl_w, beta, 0)[0];
  return std::exp(std::log(constant_1d(lam)) - (2.0 * lam + 1.0) * std::log(t) - alpha + std::log(m0));
}

double HeatKernel::operator()(double t, Coords x, Coords y) const {
  return derivative(t, x, y, KernelDerivative::space({}));
}

double HeatKernel::derivative(double t, Coords x, Coords y, const KernelDerivative& which) const {
  require(t > 0.0, ErrorKind::invalid_input, "heat kernel needs t > 0");
  require_point(params_, x);
  require_point(params_, y);
  const int d = params_.dim();
  const double a = params_.lambda + 0.5 * params_.n;
  const double s = 4.0 * t * t;
  const double r2 = distance_squared(x, y);
  const double big_b = 2.0 * x[d - 1] * y[d - 1];
  const double beta = big_b / s;
  const double alpha_exp = r2 / s;
  const double log_c = std::log(constant_1d(params_.lambda)) - 0.5 * params_.n * std::log(4.0 * std::numbers::pi);
  const double log_pref = log_c - (2.0 * a + 1.0) * std::log(t) - alpha_exp;
  quad_.exponential(beta, tl_v, tl_w);

  using namespace detail;
  Poly c{0.0, 0.0, 0.0, 0.0};
  int kmax = 0;
  if (which.time) {
    // d/dt of t^{-(2a+1)} exp(-D / 4t^2)
    c = add(lin(-(2.0 * a + 1.0) / t, 0.0), scale(lin(r2, big_b), 1.0 / (2.0 * t * t * t)));
    kmax = 1;
  } else {
    require(which.alpha.empty() || static_cast<int>(which.alpha.size()) == 2 * d, ErrorKind::invalid_input,
            "space multi-index must have length 2(n+1)");
    const auto idx = expand(which.alpha);
    if (idx.size() > 2) fail(ErrorKind::unsupported_order, "heat kernel derivatives are supported up to order 2");
    if (idx.empty()) {
      c = lin(1.0, 0.0);
    } else if (idx.size() == 1) {
      c = scale(d_first(idx[0], d, x, y), -1.0 / s);
      kmax = 1;
    } else {
      const Poly di = d_first(idx[0], d, x, y);
      const Poly dj = d_first(idx[1], d, x, y);
      c = add(scale(mul(di, dj), 1.0 / (s * s)), scale(d_second(idx[0], idx[1], d), -1.0 / s));
      kmax = 2;
    }
  }
  const auto m = simd::exp_moments(tl_v, tl_w, beta, kmax);
  return std::exp(log_pref) * integrate(c, m.m);
}

}  // namespace blab
