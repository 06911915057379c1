#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "blab/geometry.hpp"
#include "blab/kernels.hpp"
#include "blab/norms.hpp"
#include "blab/symbol.hpp"

namespace blab {

// Uniform cells on a box, resolution cells per side. Node i is the weighted centroid of
// cell i, weight i its exact measure. Cells are ordered with the first coordinate slowest.
class WeightedGrid {
 public:
  WeightedGrid(const SpaceParams& params, Box box, int resolution);

  const SpaceParams& params() const { return params_; }
  const Box& box() const { return box_; }
  int resolution() const { return resolution_; }
  int dim() const { return params_.dim(); }
  std::size_t size() const { return weights_.size(); }

  Coords node(std::size_t i) const { return {nodes_.data() + i * dim(), static_cast<std::size_t>(dim())}; }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  // Per-coordinate cell index of cell i.
  std::vector<int> cell_index(std::size_t i) const;
  Box cell(std::size_t i) const;
  double cell_side(int j) const { return box_.side(j) / resolution_; }
  double total_weight() const;

  WeightedGrid refined() const { return WeightedGrid(params_, box_, 2 * resolution_); }

 private:
  SpaceParams params_;
  Box box_;
  int resolution_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> last_nodes_;  // centroid per cell row of the last coordinate
};

WeightedGrid build_grid(const SpaceParams& params, const Box& box, int resolution);

// Default dense size cap.
constexpr std::size_t default_matrix_cap = 4096;

struct DiscreteOperator {
  WeightedGrid grid;
  Eigen::MatrixXd matrix;  // sqrt(w_i) k(x_i, x_j) sqrt(w_j)
  std::string diagonal_policy;
};

// Kernel values sqrt(w_i) K(x_i, x_j) sqrt(w_j) off the diagonal, kept so that commutators of
// several symbols on one grid share the kernel work. Theta integrals are shared between node
// pairs with the same lattice offset and heights.
class CommutatorAssembler {
 public:
  CommutatorAssembler(const WeightedGrid& grid, const RieszKernel& kernel, std::size_t cap = default_matrix_cap);

  const WeightedGrid& grid() const { return grid_; }
  // [b, R] in symmetrized Nystrom form with zero diagonal.
  DiscreteOperator commutator(const Symbol& b) const;

 private:
  WeightedGrid grid_;
  Eigen::MatrixXd k_;
};

DiscreteOperator commutator_matrix(const Symbol& b, const WeightedGrid& grid, const RieszKernel& kernel,
                                   std::size_t cap = default_matrix_cap);

// sum over distinct cells i != j of int_{C_i} int_{C_j} |b(x) - b(y)|^2 K(x, y)^2 dm dm, tensor Gauss
// of the given order per cell. Independent of the Nystrom matrix; the diagonal cells are excluded as there.
double hilbert_schmidt_direct(const Symbol& b, const WeightedGrid& grid, const RieszKernel& kernel, int order = 4);

// Full spectrum, nonincreasing. Divide-and-conquer SVD without vectors.
std::vector<double> singular_values(const Eigen::MatrixXd& m);
std::vector<double> singular_values(const DiscreteOperator& op);

double schatten_lorentz(std::span<const double> singular_values, const LorentzParams& lp);

enum class NwoMode { kernel, inverse_kernel };

std::string to_string(NwoMode mode);
NwoMode nwo_mode_from_string(const std::string& s);

struct NwoSpec {
  int order = 4;       // vanishing moments of the wavelets
  int depth = 4;       // generations below Q used on each side
  int quad_order = 6;  // Gauss nodes per side on the finest cells

  bool operator==(const NwoSpec&) const = default;
};

struct NwoEntry {
  int k1, k2;          // generation offsets below Q and Q^, -1 for the coarse polynomial tail
  std::size_t cube1, cube2;
  int e1, e2;          // element index within the cube's basis
  double value;
};

struct NwoTable {
  NwoMode mode;
  DyadicCube q, q_hat;
  NwoSpec spec;
  std::vector<NwoEntry> entries;
  std::vector<double> max_by_offset;  // index k1 + k2 over wavelet-wavelet pairs
  double tail_max = 0.0;              // pairs touching the coarse tail
};

// Normalized pairings (m(Q)/m(I1))^{1/2} (m(Q)/m(I2))^{1/2} int int k h1 h2 dm dm with k = K(z, w) on
// Q x Q^ (kernel mode) or m(Q)^{-1} m(Q^)^{-1} K(z, w)^{-1} (inverse mode, K sign-constant on the pair).
NwoTable nwo_coefficients(const RieszKernel& kernel, const DyadicCube& q, const DyadicCube& q_hat, NwoMode mode,
                          const NwoSpec& spec = {});
NwoTable nwo_coefficients(const RieszKernel& kernel, const WhitneyBox& p, NwoMode mode, const NwoSpec& spec = {});

// Least-squares slope of log2(max_by_offset) over offsets [lo, hi].
double nwo_decay_slope(const NwoTable& table, int lo = 0, int hi = -1);

void write_nwo_csv(std::ostream& os, const NwoTable& table);

struct TraceSpec {
  int order = 6;
  int levels = 4;  // cells per side 2^levels on Q and Q^

  bool operator==(const TraceSpec&) const = default;
};

struct TracePairing {
  double trace = 0.0;             // avg_Q avg_Q^ (b(x) - b(y)) s_Q(x)
  double trace_via_kernel = 0.0;  // same quantity assembled from [b, R] and L_Q node by node
  double mo_q = 0.0;              // avg_Q |b - b_Q|
  double mo_hat = 0.0;            // avg_Q^ |b - b_Q^|
  double hat_average = 0.0;       // b_Q^
};

TracePairing trace_pairing(const Symbol& b, const DyadicCube& q, const DyadicCube& q_hat, const RieszKernel& kernel,
                           const TraceSpec& spec = {});

// Row-major little-endian float64 dump plus a JSON sidecar at path + ".json".
void write_matrix(const std::string& path, const DiscreteOperator& op);
Eigen::MatrixXd read_matrix(const std::string& path, std::size_t rows, std::size_t cols);
void write_singular_values_csv(std::ostream& os, std::span<const double> values);

}  // namespace blab
