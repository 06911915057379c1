#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "blab/geometry.hpp"
#include "blab/space.hpp"

namespace blab {

// Graded panels on v = 1 - cos(theta) in [0, 2]. The weight v^{lambda-1}(2-v)^{lambda-1}
// (from sin^{2 lambda - 1} theta d theta) is absorbed by Gauss-Jacobi rules on the end panels.
struct ThetaQuadSpec {
  int panel_nodes = 10;
  double grading = 2.0;
  int max_panels = 160;
  double exp_cutoff = 46.0;

  ThetaQuadSpec doubled() const {
    ThetaQuadSpec s = *this;
    s.panel_nodes *= 2;
    return s;
  }
};

// v-nodes and weights for one kernel evaluation.
class ThetaQuadrature {
 public:
  ThetaQuadrature(double lambda, const ThetaQuadSpec& spec);

  const ThetaQuadSpec& spec() const { return spec_; }

  // Integrand (sigma + v)^{-e}: panels graded geometrically from sigma.
  void algebraic(double sigma, std::vector<double>& v, std::vector<double>& w) const;
  // Integrand exp(-beta v): panels resolve the decay scale 1/beta up to the cutoff.
  void exponential(double beta, std::vector<double>& v, std::vector<double>& w) const;

 private:
  void left_panel(double len, std::vector<double>& v, std::vector<double>& w) const;
  void middle_panel(double a, double b, std::vector<double>& v, std::vector<double>& w) const;
  void right_panel(std::vector<double>& v, std::vector<double>& w) const;

  double lambda_;
  ThetaQuadSpec spec_;
  std::vector<double> gl_x_, gl_w_, left_x_, left_w_, right_x_, right_w_;
};

// Multi-index over (x_1..x_{n+1}, y_1..y_{n+1}) or a single time derivative.
struct KernelDerivative {
  bool time = false;
  std::vector<int> alpha;

  static KernelDerivative dt() { return {true, {}}; }
  static KernelDerivative space(std::vector<int> a) { return {false, std::move(a)}; }
};

// Kernel of exp(-t^2 Delta_lambda).
class HeatKernel {
 public:
  explicit HeatKernel(const SpaceParams& params, const ThetaQuadSpec& spec = {});

  const SpaceParams& params() const { return params_; }
  const ThetaQuadSpec& spec() const { return quad_.spec(); }

  double value_1d(double t, double x, double y) const;
  double operator()(double t, Coords x, Coords y) const;
  double derivative(double t, Coords x, Coords y, const KernelDerivative& which) const;

  // 2^{-2 lambda} / (Gamma(lambda) sqrt(pi)), the constant of the one-dimensional kernel.
  static double constant_1d(double lambda);

 private:
  SpaceParams params_;
  ThetaQuadrature quad_;
};

// Kernel of d/dx_ell Delta_lambda^{-1/2}. The time integral of the subordination
// formula is done in closed form, leaving one theta integral:
//   K(x,y) = -C int w(v) D^{-(a+1)} d_{x_ell} D dv,  D = |x-y|^2 + 2 x_{n+1} y_{n+1} v,
// with a = lambda + n/2.
class RieszKernel {
 public:
  RieszKernel(const SpaceParams& params, int ell, const ThetaQuadSpec& spec = {}, double diagonal_floor = 1e-8);

  const SpaceParams& params() const { return params_; }
  int direction() const { return ell_; }
  const ThetaQuadSpec& spec() const { return quad_.spec(); }

  double operator()(Coords x, Coords y) const;
  double derivative(Coords x, Coords y, std::span<const int> alpha, std::span<const int> beta) const;

  // Kernel value from |x-y|^2, the last coordinates of x and y, and x_ell - y_ell.
  // Used by matrix assembly to reuse theta integrals across lattice-equivalent pairs.
  double reduced(double r2, double x_last, double y_last, double diff_ell) const;
  // The two theta integrals sum w v^k (r2 + B v)^{-(a+1)}, k = 0, 1, with B = 2 x_last y_last.
  std::array<double, 2> theta_moments(double r2, double x_last, double y_last) const;
  // Kernel value from precomputed theta_moments.
  double combine(const std::array<double, 2>& j, double y_last, double diff_ell) const;

  double constant() const { return c_; }
  double diagonal_floor() const { return floor_; }

 private:
  void check_separation(Coords x, Coords y, double r2) const;

  SpaceParams params_;
  int ell_;
  ThetaQuadrature quad_;
  double floor_;
  double c_;
};

// The same kernel through the literal subordination integral
//   pi^{-1/2} int_0^inf s^{-1/2} d_{x_ell} H_s(x,y) ds,  H_s the kernel of exp(-s Delta),
// on log-spaced panels with Gaussian-decay truncation at small s and a power-tail cutoff at large s.
struct SubordinationSpec {
  int panel_nodes = 8;
  double panel_width = 0.5;  // in log s
  double tolerance = 1e-10;

  SubordinationSpec refined() const {
    SubordinationSpec s = *this;
    s.panel_width *= 0.5;
    return s;
  }
};

class SubordinatedRiesz {
 public:
  SubordinatedRiesz(const SpaceParams& params, int ell, const SubordinationSpec& spec = {},
                    const ThetaQuadSpec& theta = {}, double diagonal_floor = 1e-8);

  double operator()(Coords x, Coords y) const;
  const SubordinationSpec& spec() const { return spec_; }

 private:
  SpaceParams params_;
  int ell_;
  SubordinationSpec spec_;
  HeatKernel heat_;
  double floor_;
};

struct PartnerSearchSpec {
  int max_separation = 8;
  int samples_per_dim = 8;
};

struct PartnerResult {
  DyadicCube q_hat;
  int sign;           // sign of K on Q x Q^
  double witness;     // min |K| * m(Q) over the samples
  int axis;           // 0-based coordinate of the offset
  int orientation;    // +1 or -1
  int separation;     // offset in cells
  std::size_t samples;
};

// Scans offsets M = 2..max_separation along +-e_j, the kernel's own direction first.
PartnerResult find_partner_cube(const RieszKernel& kernel, const DyadicCube& q, const PartnerSearchSpec& spec = {});

std::optional<PartnerResult> partner_in_direction(const RieszKernel& kernel, const DyadicCube& q, int axis,
                                                  int orientation, const PartnerSearchSpec& spec = {});

}  // namespace blab
