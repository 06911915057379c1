#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "blab/geometry.hpp"
#include "blab/space.hpp"

namespace blab {

using MultiIndex = std::vector<int>;

// All multi-indices in dim variables with |beta| <= max_degree, by degree then lexicographic.
std::vector<MultiIndex> multi_indices(int dim, int max_degree);

// int_box x^beta dm_lambda, closed form.
double weighted_moment(const SpaceParams& params, const Box& box, std::span<const int> beta);

// Affine coordinates u_j = (x_j - center_j) / scale_j used for conditioning.
struct LocalFrame {
  std::vector<double> center;
  std::vector<double> scale;

  static LocalFrame of(const Box& box);
  double coord(Coords x, int j) const { return (x[j] - center[j]) / scale[j]; }
};

// int_box u^beta dm_lambda in the frame's coordinates. Exact up to rounding: closed form in the
// flat coordinates, a terminating or geometrically convergent binomial series in the weighted one.
double local_moment(const SpaceParams& params, const Box& box, const LocalFrame& frame, std::span<const int> beta);

// f = sum over pieces 1_piece(x) sum_beta c_{piece,beta} u^beta, u in the frame of the owning cube.
class PiecewisePolynomial {
 public:
  PiecewisePolynomial(Box support, LocalFrame frame, std::vector<Box> pieces, std::vector<MultiIndex> monomials,
                      std::vector<std::vector<double>> coefficients);

  const Box& support() const { return support_; }
  const LocalFrame& frame() const { return frame_; }
  const std::vector<Box>& pieces() const { return pieces_; }
  const std::vector<MultiIndex>& monomials() const { return monomials_; }
  const std::vector<std::vector<double>>& coefficients() const { return coefficients_; }

  double operator()(Coords x) const;
  // Value of the polynomial on one piece, ignoring the indicator.
  double piece_value(std::size_t piece, Coords x) const;
  // Max |f| over a per-piece sample grid that includes the piece corners.
  double sup_norm(int samples_per_side = 9) const;
  // Exact int f u^beta dm in the frame coordinates.
  double local_pairing(const SpaceParams& params, std::span<const int> beta) const;
  // Exact <f, g> when both are polynomial on the same pieces and frame.
  double exact_inner(const SpaceParams& params, const PiecewisePolynomial& g) const;

 private:
  Box support_;
  LocalFrame frame_;
  std::vector<Box> pieces_;
  std::vector<MultiIndex> monomials_;
  std::vector<std::vector<double>> coefficients_;
};

struct AlpertBasis {
  DyadicCube cube;
  int order;  // moments of degree < order vanish
  std::vector<PiecewisePolynomial> elements;
  double gram_condition;  // worst per-child Gram eigenvalue ratio
};

// (2^{n+1} - 1) * #{|beta| <= K - 1} for a cube with all 2^{n+1} children.
std::size_t alpert_dimension(int n, int order);

AlpertBasis build_alpert_basis(const SpaceParams& params, const DyadicCube& q, int order);

// L^2(dm)-orthonormal basis of polynomials of degree < order on a box.
std::vector<PiecewisePolynomial> orthonormal_polynomials(const SpaceParams& params, const Box& box, int order);

using Function = std::function<double(Coords)>;

// <f, h> with a tensor Gauss rule on each piece, refined 2^levels per side.
double wavelet_coefficient(const SpaceParams& params, const Function& f, const PiecewisePolynomial& h, int order = 12,
                           int levels = 0);

// || 1_Q sum_{Q < I <= P} Delta_I f - (E_Q f - 1_Q E_P f) ||_{L^2(dm)}. All integrals use the same
// cells (the children of Q and their translates in P) so the identity is tested, not the quadrature.
double telescoping_check(const SpaceParams& params, const DyadicCube& p, const DyadicCube& q, int order,
                         const Function& f, int rule_order = 0);

// All descendants of q at the given generation.
std::vector<DyadicCube> descendants(const DyadicCube& q, int generation);

void write_basis_json(std::ostream& os, const SpaceParams& params, const AlpertBasis& basis);

}  // namespace blab
