#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "blab/space.hpp"

namespace blab {

// Exact closed-form dm_lambda measure of a box.
double cube_measure(const SpaceParams& params, const Box& box);

// m(B(center, r) intersected with the half-space). Closed form for n = 0, ball quadrature otherwise.
double ball_measure(const SpaceParams& params, Coords center, double r, int order = 24);

// r^{n+1} x_{n+1}^{2 lambda} + r^{n+1+2 lambda}
double ball_measure_model(const SpaceParams& params, Coords center, double r);

double doubling_ratio(const SpaceParams& params, Coords center, double r, int order = 24);

// Cube of a dyadic grid shifted by (-1)^k t_j / 3 cells in coordinate j, t_j in {0,1,2}.
// Cubes meeting {x_{n+1} = 0} are cut off at the boundary; the last lattice index
// counts from the first cube meeting the open half-space, so it is always >= 0.
class DyadicCube {
 public:
  DyadicCube(int system, std::vector<int> shift, int k, std::vector<std::int64_t> m);

  static DyadicCube containing(int system, const std::vector<int>& shift, Coords x, int k);
  // Index counted on the untruncated lattice.
  static DyadicCube from_raw(int system, const std::vector<int>& shift, int k, const std::vector<std::int64_t>& raw);

  int system() const { return system_; }
  int generation() const { return k_; }
  int dim() const { return static_cast<int>(m_.size()); }
  const std::vector<std::int64_t>& index() const { return m_; }
  const std::vector<int>& shift() const { return shift_; }
  const Box& box() const { return box_; }
  double side() const;
  std::vector<double> center() const { return box_.center(); }
  bool truncated() const;
  bool contains(Coords x) const { return box_.contains(x); }

  std::vector<std::int64_t> raw_index() const;
  // Lower corner of coordinate j is lower_numerator(j) / (3 * 2^k).
  std::int64_t lower_numerator(int j) const;

  DyadicCube parent() const;
  std::vector<DyadicCube> children() const;
  DyadicCube ancestor(int generation) const;
  bool is_ancestor_of(const DyadicCube& other) const;

  bool operator==(const DyadicCube& o) const {
    return system_ == o.system_ && k_ == o.k_ && m_ == o.m_;
  }
  bool operator<(const DyadicCube& o) const;

 private:
  int system_;
  std::vector<int> shift_;
  int k_;
  std::vector<std::int64_t> m_;
  Box box_;
};

// The kappa shifted dyadic grids (base 1/2) restricted to a window and generation range.
class AdjacentSystems {
 public:
  AdjacentSystems(const SpaceParams& params, int kappa, double delta, int k_min, int k_max, Box window);

  const SpaceParams& params() const { return params_; }
  int kappa() const { return kappa_; }
  double delta() const { return delta_; }
  int k_min() const { return k_min_; }
  int k_max() const { return k_max_; }
  const Box& window() const { return window_; }
  const std::vector<int>& shift(int system) const { return shifts_.at(system); }

  // All cubes of the system at generation k meeting the window, in lexicographic index order.
  std::vector<DyadicCube> cubes(int system, int k) const;
  DyadicCube containing_cube(int system, Coords x, int k) const;

  // Every ball with 2^{-k-3} < r <= 2^{-k-2} is inside some generation-k cube Q
  // with Q inside B(x, adjacency_constant() r).
  double adjacency_constant() const;
  std::optional<DyadicCube> well_containing_cube(Coords x, double r) const;

 private:
  SpaceParams params_;
  int kappa_;
  double delta_;
  int k_min_, k_max_;
  Box window_;
  std::vector<std::vector<int>> shifts_;
};

AdjacentSystems build_systems(const SpaceParams& params, int kappa, double delta, int k_min, int k_max, Box window);

struct WhitneyBox {
  DyadicCube q;
  DyadicCube q_hat;
  double side() const { return q.side(); }
  // dist((Q x Q^), diagonal) = dist(Q, Q^) / sqrt(2)
  double distance_to_diagonal() const;
};

struct WhitneyConstants {
  double c1;            // lower distance constant, dist >= c1 * side
  double c2;            // upper distance constant, dist <= c2 * side
  double collar_factor; // uncovered points lie within collar_factor * finest side of the diagonal
};

WhitneyConstants whitney_constants(int n);

// Whitney boxes of W x W minus a diagonal collar. W is a standard-grid cube; boxes go
// down to generation W.generation() + depth.
std::vector<WhitneyBox> whitney_decompose(const SpaceParams& params, const DyadicCube& window, int depth);

bool boxes_touch(const WhitneyBox& a, const WhitneyBox& b);

// Grandchildren A, B of Q with signs_j (x_j - y_j) >= side(Q)/2 for x in A, y in B.
std::pair<DyadicCube, DyadicCube> corner_subcubes(const DyadicCube& q, std::span<const int> signs);

void write_cubes_csv(std::ostream& os, const SpaceParams& params, std::span<const DyadicCube> cubes);

}  // namespace blab
