#include <algorithm>
#include <cmath>

#include "blab/error.hpp"
#include "blab/kernels.hpp"
#include "blab/quadrature.hpp"

namespace blab {

ThetaQuadrature::ThetaQuadrature(double lambda, const ThetaQuadSpec& spec) : lambda_(lambda), spec_(spec) {
  require(lambda > 0.0, ErrorKind::invalid_input, "lambda must be > 0");
  require(spec.panel_nodes >= 2 && spec.grading > 1.0 && spec.max_panels >= 1, ErrorKind::invalid_input,
          "invalid theta quadrature spec");
  const Rule1D gl = gauss_legendre(spec.panel_nodes);
  const Rule1D left = gauss_jacobi(spec.panel_nodes, 0.0, lambda - 1.0);
  const Rule1D right = gauss_jacobi(spec.panel_nodes, lambda - 1.0, 0.0);
  gl_x_ = gl.nodes;
  gl_w_ = gl.weights;
  left_x_ = left.nodes;
  left_w_ = left.weights;
  right_x_ = right.nodes;
  right_w_ = right.weights;
}

void ThetaQuadrature::left_panel(double len, std::vector<double>& v, std::vector<double>& w) const {
  const double scale = std::pow(0.5 * len, lambda_);
  for (std::size_t i = 0; i < left_x_.size(); ++i) {
    const double x = 0.5 * len * (1.0 + left_x_[i]);
    v.push_back(x);
    w.push_back(scale * left_w_[i] * std::pow(2.0 - x, lambda_ - 1.0));
  }
}

void ThetaQuadrature::middle_panel(double a, double b, std::vector<double>& v, std::vector<double>& w) const {
  const double h = 0.5 * (b - a);
  for (std::size_t i = 0; i < gl_x_.size(); ++i) {
    const double x = a + h * (1.0 + gl_x_[i]);
    v.push_back(x);
    w.push_back(h * gl_w_[i] * std::pow(x * (2.0 - x), lambda_ - 1.0));
  }
}

void ThetaQuadrature::right_panel(std::vector<double>& v, std::vector<double>& w) const {
  const double scale = std::pow(2.0, -lambda_);
  for (std::size_t i = 0; i < right_x_.size(); ++i) {
    const double x = 1.0 + 0.5 * (1.0 + right_x_[i]);
    v.push_back(x);
    w.push_back(scale * right_w_[i] * std::pow(x, lambda_ - 1.0));
  }
}

void ThetaQuadrature::algebraic(double sigma, std::vector<double>& v, std::vector<double>& w) const {
  v.clear();
  w.clear();
  if (sigma >= 1.0) {
    left_panel(1.0, v, w);
  } else {
    left_panel(sigma, v, w);
    double a = sigma;
    for (int p = 0; a < 1.0 && p < spec_.max_panels; ++p) {
      const double b = (p + 1 == spec_.max_panels) ? 1.0 : std::min(1.0, a * spec_.grading);
      middle_panel(a, b, v, w);
      a = b;
    }
  }
  right_panel(v, w);
}

void ThetaQuadrature::exponential(double beta, std::vector<double>& v, std::vector<double>& w) const {
  v.clear();
  w.clear();
  if (beta <= 1.0) {
    left_panel(1.0, v, w);
    right_panel(v, w);
    return;
  }
  const double sigma = 1.0 / beta;
  left_panel(sigma, v, w);
  double a = sigma;
  for (int p = 0; a < 1.0 && beta * a < spec_.exp_cutoff && p < spec_.max_panels; ++p) {
    const double b = std::min(1.0, a + std::min(a * (spec_.grading - 1.0), 4.0 * sigma));
    middle_panel(a, b, v, w);
    a = b;
  }
  if (beta < spec_.exp_cutoff) right_panel(v, w);
}

}  // namespace blab
