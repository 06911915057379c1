#include <cmath>

#include "blab/error.hpp"
#include "blab/operators.hpp"
#include "blab/parallel.hpp"
#include "blab/quadrature.hpp"
#include "blab/simd.hpp"

namespace blab {

CommutatorAssembler::CommutatorAssembler(const WeightedGrid& grid, const RieszKernel& kernel, std::size_t cap)
    : grid_(grid) {
  require(kernel.params() == grid.params(), ErrorKind::invalid_input, "kernel and grid live on different spaces");
  const std::size_t size = grid.size();
  if (size > cap)
    fail(ErrorKind::invalid_input,
         "grid has " + std::to_string(size) + " cells, above the dense matrix cap " + std::to_string(cap));
  const int d = grid.dim();
  const int ell = kernel.direction() - 1;
  k_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
  std::vector<double> sw(size);
  for (std::size_t i = 0; i < size; ++i) sw[i] = std::sqrt(grid.weight(i));

  auto entry = [&](std::size_t i, std::size_t j, const std::array<double, 2>& m) {
    const Coords x = grid.node(i), y = grid.node(j);
    return sw[i] * kernel.combine(m, y[d - 1], x[ell] - y[ell]) * sw[j];
  };

  if (d == 1) {
    // every pair has its own heights; moments are symmetric, so each pair is done once
    parallel_for(size, [&](std::size_t j) {
      const double yj = grid.node(j)[0];
      for (std::size_t i = 0; i < j; ++i) {
        const double xi = grid.node(i)[0];
        const auto m = kernel.theta_moments((xi - yj) * (xi - yj), xi, yj);
        k_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = entry(i, j, m);
        k_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = entry(j, i, m);
      }
    });
    return;
  }

  // key = ((sum_j |offset_j| R^j) R + lower row) R + upper row, over the symmetric height pairs
  const std::size_t res = static_cast<std::size_t>(grid.resolution());
  std::size_t tangential = 1;
  for (int j = 0; j + 1 < d; ++j) tangential *= res;
  const std::size_t keys = tangential * res * res;
  std::vector<std::array<double, 2>> table(keys);
  std::vector<double> heights(res);
  for (std::size_t r = 0; r < res; ++r) heights[r] = grid.node(r)[d - 1];
  std::vector<double> side(d);
  for (int j = 0; j < d; ++j) side[j] = grid.cell_side(j);
  parallel_for(keys, [&](std::size_t key) {
    const std::size_t hi = key % res, lo = (key / res) % res;
    if (lo > hi) return;
    std::size_t t = key / (res * res);
    double r2 = 0.0;
    for (int j = 0; j + 1 < d; ++j) {
      const double off = static_cast<double>(t % res) * side[j];
      r2 += off * off;
      t /= res;
    }
    const double dz = heights[lo] - heights[hi];
    r2 += dz * dz;
    if (r2 == 0.0) return;  // the same cell
    table[key] = kernel.theta_moments(r2, heights[lo], heights[hi]);
  });

  parallel_for(size, [&](std::size_t j) {
    const auto jdx = grid.cell_index(j);
    for (std::size_t i = 0; i < size; ++i) {
      if (i == j) continue;
      const auto idx = grid.cell_index(i);
      std::size_t t = 0, stride = 1;
      for (int c = 0; c + 1 < d; ++c) {
        t += static_cast<std::size_t>(std::abs(idx[c] - jdx[c])) * stride;
        stride *= res;
      }
      const std::size_t a = static_cast<std::size_t>(std::min(idx[d - 1], jdx[d - 1]));
      const std::size_t b = static_cast<std::size_t>(std::max(idx[d - 1], jdx[d - 1]));
      k_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = entry(i, j, table[(t * res + a) * res + b]);
    }
  });
}

DiscreteOperator CommutatorAssembler::commutator(const Symbol& b) const {
  const std::size_t size = grid_.size();
  DiscreteOperator op{grid_, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size)),
                      "zero"};
  if (b.is_constant()) return op;
  std::vector<double> bv(size), ones(size, 1.0);
  for (std::size_t i = 0; i < size; ++i) bv[i] = b(grid_.node(i));
  // column j: (b_i - b_j) k_ij = -(b_j - b_i) k_ij
  parallel_for(size, [&](std::size_t j) {
    const auto col = static_cast<Eigen::Index>(j);
    simd::commutator_row(bv[j], -1.0, bv, ones, {k_.col(col).data(), size}, {op.matrix.col(col).data(), size});
  });
  return op;
}

DiscreteOperator commutator_matrix(const Symbol& b, const WeightedGrid& grid, const RieszKernel& kernel, std::size_t cap) {
  return CommutatorAssembler(grid, kernel, cap).commutator(b);
}

double hilbert_schmidt_direct(const Symbol& b, const WeightedGrid& grid, const RieszKernel& kernel, int order) {
  require(order >= 1, ErrorKind::invalid_input, "quadrature order must be >= 1");
  if (b.is_constant()) return 0.0;
  const CellRule rule(grid.params(), order);
  const std::size_t size = grid.size();
  std::vector<NodeSet> cells;
  cells.reserve(size);
  for (std::size_t i = 0; i < size; ++i) cells.push_back(rule.nodes(grid.cell(i)));
  std::vector<std::vector<double>> bv(size);
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t a = 0; a < cells[i].size(); ++a) bv[i].push_back(b(cells[i].point(a)));

  std::vector<double> rows(size, 0.0);
  parallel_for(size, [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t j = 0; j < size; ++j) {
      if (j == i) continue;
      for (std::size_t a = 0; a < cells[i].size(); ++a)
        for (std::size_t c = 0; c < cells[j].size(); ++c) {
          const double diff = bv[i][a] - bv[j][c];
          if (diff == 0.0) continue;
          const double k = kernel(cells[i].point(a), cells[j].point(c));
          s += cells[i].w[a] * cells[j].w[c] * diff * diff * k * k;
        }
    }
    rows[i] = s;
  });
  double total = 0.0;
  for (double r : rows) total += r;
  return total;
}

}  // namespace blab
