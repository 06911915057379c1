#include <cmath>

#include "blab/error.hpp"
#include "blab/operators.hpp"

namespace blab {

WeightedGrid::WeightedGrid(const SpaceParams& params, Box box, int resolution)
    : params_(params), box_(std::move(box)), resolution_(resolution) {
  const int d = params_.dim();
  require(box_.dim() == d, ErrorKind::invalid_input, "grid box has the wrong dimension");
  require(resolution_ >= 2, ErrorKind::invalid_input, "grid resolution must be >= 2 cells per side");
  for (int j = 0; j < d; ++j)
    require(box_.side(j) > 0.0 && std::isfinite(box_.side(j)), ErrorKind::invalid_input, "degenerate grid box");
  require(box_.lo[d - 1] >= 0.0, ErrorKind::invalid_input, "grid box leaves the half-space");

  // per-row weighted measure and centroid of the last coordinate
  const double h = box_.side(d - 1) / resolution_;
  std::vector<double> row_mass(resolution_);
  last_nodes_.resize(resolution_);
  for (int i = 0; i < resolution_; ++i) {
    const double a = box_.lo[d - 1] + i * h;
    const double b = i + 1 == resolution_ ? box_.hi[d - 1] : a + h;
    row_mass[i] = weighted_interval_measure(a, b, params_.lambda);
    last_nodes_[i] = weighted_interval_measure(a, b, params_.lambda + 0.5) / row_mass[i];
  }
  std::size_t count = 1;
  for (int j = 0; j < d; ++j) count *= static_cast<std::size_t>(resolution_);
  nodes_.resize(count * d);
  weights_.resize(count);
  for (std::size_t c = 0; c < count; ++c) {
    const auto idx = cell_index(c);
    double w = row_mass[idx[d - 1]];
    for (int j = 0; j + 1 < d; ++j) {
      const double s = cell_side(j);
      nodes_[c * d + j] = box_.lo[j] + (idx[j] + 0.5) * s;
      w *= s;
    }
    nodes_[c * d + d - 1] = last_nodes_[idx[d - 1]];
    weights_[c] = w;
  }
}

std::vector<int> WeightedGrid::cell_index(std::size_t i) const {
  std::vector<int> idx(dim());
  for (int j = dim() - 1; j >= 0; --j) {
    idx[j] = static_cast<int>(i % resolution_);
    i /= resolution_;
  }
  return idx;
}

Box WeightedGrid::cell(std::size_t i) const {
  const auto idx = cell_index(i);
  std::vector<double> lo(dim()), hi(dim());
  for (int j = 0; j < dim(); ++j) {
    lo[j] = box_.lo[j] + idx[j] * cell_side(j);
    hi[j] = idx[j] + 1 == resolution_ ? box_.hi[j] : box_.lo[j] + (idx[j] + 1) * cell_side(j);
  }
  return Box(lo, hi);
}

double WeightedGrid::total_weight() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

WeightedGrid build_grid(const SpaceParams& params, const Box& box, int resolution) {
  return WeightedGrid(params, box, resolution);
}

}  // namespace blab
