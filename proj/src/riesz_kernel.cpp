#include <algorithm>
#include <cmath>
#include <numbers>

#include "bessel_terms.hpp"
#include "blab/error.hpp"
#include "blab/kernels.hpp"
#include "blab/simd.hpp"

namespace blab {

namespace {

thread_local std::vector<double> tl_v, tl_w;

double sup_norm(Coords x) {
  double m = 0.0;
  for (double c : x) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace

RieszKernel::RieszKernel(const SpaceParams& params, int ell, const ThetaQuadSpec& spec, double diagonal_floor)
    : params_(params), ell_(ell), quad_(params.lambda, spec), floor_(diagonal_floor) {
  require(ell >= 1 && ell <= params.dim(), ErrorKind::invalid_input, "Riesz direction must be in 1..n+1");
  require(diagonal_floor > 0.0, ErrorKind::invalid_input, "diagonal floor must be > 0");
  const double a = params.lambda + 0.5 * params.n;
  // a / sqrt(pi) * Gamma(a) 4^a times the heat kernel constant
  const double log_c = std::log(a) - 0.5 * std::log(std::numbers::pi) + std::log(HeatKernel::constant_1d(params.lambda)) -
                       0.5 * params.n * std::log(4.0 * std::numbers::pi) + std::lgamma(a) + a * std::log(4.0);
  c_ = std::exp(log_c);
}

void RieszKernel::check_separation(Coords x, Coords y, double r2) const {
  const double scale = std::max({sup_norm(x), sup_norm(y), 1.0});
  if (!(std::sqrt(r2) >= floor_ * scale)) fail(ErrorKind::singularity, "Riesz kernel evaluated on the diagonal");
}

std::array<double, 2> RieszKernel::theta_moments(double r2, double x_last, double y_last) const {
  const double e = params_.lambda + 0.5 * params_.n + 1.0;
  const double big_b = 2.0 * x_last * y_last;
  quad_.algebraic(r2 / big_b, tl_v, tl_w);
  const auto m = simd::pow_moments(tl_v, tl_w, r2, big_b, e, 1);
  return {m[0], m[1]};
}

double RieszKernel::combine(const std::array<double, 2>& j, double y_last, double diff_ell) const {
  const double inner = diff_ell * j[0] + (ell_ == params_.dim() ? y_last * j[1] : 0.0);
  return -2.0 * c_ * inner;
}

double RieszKernel::reduced(double r2, double x_last, double y_last, double diff_ell) const {
  return combine(theta_moments(r2, x_last, y_last), y_last, diff_ell);
}

double RieszKernel::operator()(Coords x, Coords y) const {
  require_point(params_, x);
  require_point(params_, y);
  const int d = params_.dim();
  const double r2 = distance_squared(x, y);
  check_separation(x, y, r2);
  return reduced(r2, x[d - 1], y[d - 1], x[ell_ - 1] - y[ell_ - 1]);
}

double RieszKernel::derivative(Coords x, Coords y, std::span<const int> alpha, std::span<const int> beta) const {
  require_point(params_, x);
  require_point(params_, y);
  const int d = params_.dim();
  require((alpha.empty() || static_cast<int>(alpha.size()) == d) && (beta.empty() || static_cast<int>(beta.size()) == d),
          ErrorKind::invalid_input, "multi-index length must be n+1");
  std::vector<int> z(2 * d, 0);
  for (std::size_t i = 0; i < alpha.size(); ++i) z[i] = alpha[i];
  for (std::size_t i = 0; i < beta.size(); ++i) z[d + i] = beta[i];
  for (int c : z) require(c >= 0, ErrorKind::invalid_input, "multi-index entries must be >= 0");
  using namespace detail;
  const auto idx = expand(z);
  if (idx.size() > 2) fail(ErrorKind::unsupported_order, "Riesz kernel derivatives are supported up to total order 2");

  const double r2 = distance_squared(x, y);
  check_separation(x, y, r2);
  const double e = params_.lambda + 0.5 * params_.n + 1.0;
  const double big_b = 2.0 * x[d - 1] * y[d - 1];
  quad_.algebraic(r2 / big_b, tl_v, tl_w);
  auto moments = [&](double shift, int kmax) { return simd::pow_moments(tl_v, tl_w, r2, big_b, e + shift, kmax); };

  // K = -c int w D^{-e} g, g = dD/dx_ell
  const int ell = ell_ - 1;
  const Poly g = d_first(ell, d, x, y);
  double total = 0.0;
  if (idx.empty()) {
    total = integrate(g, moments(0.0, 1).m);
  } else if (idx.size() == 1) {
    const int i = idx[0];
    const Poly di = d_first(i, d, x, y);
    total = integrate(scale(mul(di, g), -e), moments(1.0, 2).m) + integrate(d_second(ell, i, d), moments(0.0, 1).m);
  } else {
    const int i = idx[0], j = idx[1];
    const Poly di = d_first(i, d, x, y), dj = d_first(j, d, x, y);
    const Poly gi = d_second(ell, i, d), gj = d_second(ell, j, d);
    const Poly top = scale(mul(mul(di, dj), g), e * (e + 1.0));
    const Poly mid = scale(add(add(mul(d_second(i, j, d), g), mul(di, gj)), mul(dj, gi)), -e);
    total = integrate(top, moments(2.0, 3).m) + integrate(mid, moments(1.0, 2).m);
  }
  return -c_ * total;
}

}  // namespace blab
