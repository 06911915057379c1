#pragma once

#include <span>
#include <vector>

#include "blab/space.hpp"

namespace blab {

// Nodes and weights on [-1, 1].
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
  int size() const { return static_cast<int>(nodes.size()); }
};

Rule1D gauss_legendre(int m);

// Weight (1 - s)^alpha (1 + s)^beta on [-1, 1], alpha, beta > -1.
Rule1D gauss_jacobi(int m, double alpha, double beta);

// Shared immutable copy; safe to call concurrently.
const Rule1D& gauss_legendre_cached(int m);
const Rule1D& gauss_jacobi_cached(int m, double alpha, double beta);

// Flattened point set with weights: point i occupies x[i*dim .. i*dim+dim).
struct NodeSet {
  int dim = 0;
  std::vector<double> x;
  std::vector<double> w;

  explicit NodeSet(int d = 0) : dim(d) {}
  std::size_t size() const { return w.size(); }
  Coords point(std::size_t i) const { return {x.data() + i * dim, static_cast<std::size_t>(dim)}; }
  void clear() { x.clear(); w.clear(); }
  double total_weight() const;
};

// Tensor Gauss rules on boxes for dm_lambda. The last coordinate carries the
// weight x^{2 lambda}: Gauss-Jacobi on intervals starting at 0, Gauss-Legendre
// times the weight elsewhere.
class CellRule {
 public:
  CellRule(const SpaceParams& params, int order);

  const SpaceParams& params() const { return params_; }
  int order() const { return order_; }

  void append(const Box& cell, NodeSet& out) const;
  // Splits the box into 2^levels pieces per side first.
  void append_refined(const Box& box, int levels, NodeSet& out) const;
  NodeSet nodes(const Box& box, int levels = 0) const;

  // 1-D rule for the weighted coordinate on [a, b], appended to (t, w).
  void weighted_interval(double a, double b, std::vector<double>& t, std::vector<double>& w) const;

 private:
  SpaceParams params_;
  int order_;
  Rule1D gl_;
  Rule1D gj_;
};

// Rule for B(center, r) intersected with the half-space, weight included.
NodeSet ball_rule(const SpaceParams& params, Coords center, double r, int order);

}  // namespace blab
