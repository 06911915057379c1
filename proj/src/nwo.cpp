#include <cmath>
#include <ostream>
#include <string>

#include "blab/error.hpp"
#include "blab/operators.hpp"
#include "blab/parallel.hpp"
#include "blab/quadrature.hpp"
#include "blab/wavelets.hpp"

namespace blab {

namespace {

struct Element {
  int k;
  std::size_t cube;
  int e;
  double norm;  // (m(Q) / m(I))^{1/2}
};

struct Side {
  NodeSet nodes;
  std::vector<Element> elements;
  Eigen::MatrixXd values;  // element x node, weights folded in
};

Side build_side(const SpaceParams& params, const DyadicCube& cube, double m_ref, const NwoSpec& spec) {
  Side s{NodeSet(params.dim()), {}, {}};
  const CellRule rule(params, spec.quad_order);
  for (const auto& f : descendants(cube, cube.generation() + spec.depth + 1)) rule.append(f.box(), s.nodes);

  std::vector<PiecewisePolynomial> funcs;
  for (auto& p : orthonormal_polynomials(params, cube.box(), spec.order)) {
    s.elements.push_back({-1, 0, static_cast<int>(funcs.size()), 1.0});
    funcs.push_back(std::move(p));
  }
  for (int k = 0; k <= spec.depth; ++k) {
    const auto cubes = descendants(cube, cube.generation() + k);
    for (std::size_t c = 0; c < cubes.size(); ++c) {
      auto basis = build_alpert_basis(params, cubes[c], spec.order);
      const double norm = std::sqrt(m_ref / cube_measure(params, cubes[c].box()));
      for (std::size_t e = 0; e < basis.elements.size(); ++e) {
        s.elements.push_back({k, c, static_cast<int>(e), norm});
        funcs.push_back(std::move(basis.elements[e]));
      }
    }
  }
  const auto rows = static_cast<Eigen::Index>(funcs.size()), cols = static_cast<Eigen::Index>(s.nodes.size());
  s.values.resize(rows, cols);
  parallel_for(funcs.size(), [&](std::size_t e) {
    for (Eigen::Index i = 0; i < cols; ++i)
      s.values(static_cast<Eigen::Index>(e), i) = funcs[e](s.nodes.point(static_cast<std::size_t>(i))) * s.nodes.w[i];
  });
  return s;
}

}  // namespace

std::string to_string(NwoMode mode) { return mode == NwoMode::kernel ? "kernel" : "inverse-kernel"; }

NwoMode nwo_mode_from_string(const std::string& s) {
  if (s == "kernel") return NwoMode::kernel;
  if (s == "inverse-kernel") return NwoMode::inverse_kernel;
  fail(ErrorKind::config, "unknown NWO mode '" + s + "' (kernel or inverse-kernel)");
}

NwoTable nwo_coefficients(const RieszKernel& kernel, const DyadicCube& q, const DyadicCube& q_hat, NwoMode mode,
                          const NwoSpec& spec) {
  const SpaceParams& params = kernel.params();
  require(q.dim() == params.dim() && q_hat.dim() == params.dim(), ErrorKind::invalid_input, "cube dimension mismatch");
  require(spec.order >= 1 && spec.order <= 8 && spec.depth >= 0 && spec.quad_order >= 1, ErrorKind::invalid_input,
          "invalid NWO spec");
  require(box_distance(q.box(), q_hat.box()) > 0.0, ErrorKind::singularity, "NWO cubes must be separated");

  // the node-level kernel matrix is dense; 2^((depth+1) dim) cells of quad_order^dim nodes per side
  const double side_nodes = std::pow(2.0, (spec.depth + 1) * params.dim()) * std::pow(spec.quad_order, params.dim());
  if (side_nodes > 12000.0)
    fail(ErrorKind::invalid_input,
         "NWO depth " + std::to_string(spec.depth) + " needs " + std::to_string(static_cast<long>(side_nodes)) +
             " quadrature nodes per cube, above 12000; lower depth or quad_order");

  const double mq = cube_measure(params, q.box()), mh = cube_measure(params, q_hat.box());
  const Side a = build_side(params, q, mq, spec);
  const Side b = build_side(params, q_hat, mq, spec);

  const auto n1 = static_cast<Eigen::Index>(a.nodes.size()), n2 = static_cast<Eigen::Index>(b.nodes.size());
  Eigen::MatrixXd kmat(n1, n2);
  std::vector<int> signs(static_cast<std::size_t>(n2), 0);
  parallel_for(static_cast<std::size_t>(n2), [&](std::size_t j) {
    const Coords w = b.nodes.point(j);
    int sign = 0;
    for (Eigen::Index i = 0; i < n1; ++i) {
      const double k = kernel(a.nodes.point(static_cast<std::size_t>(i)), w);
      if (mode == NwoMode::inverse_kernel) {
        const int sk = k > 0.0 ? 1 : (k < 0.0 ? -1 : 0);
        if (sk == 0 || (sign != 0 && sk != sign)) {
          sign = 2;
          kmat(i, static_cast<Eigen::Index>(j)) = 0.0;
          continue;
        }
        if (sign != 2) sign = sk;
        kmat(i, static_cast<Eigen::Index>(j)) = 1.0 / (k * mq * mh);
      } else {
        kmat(i, static_cast<Eigen::Index>(j)) = k;
      }
    }
    signs[j] = sign;
  });
  if (mode == NwoMode::inverse_kernel) {
    for (int s : signs)
      if (s == 2 || s != signs.front())
        fail(ErrorKind::sign_violation, "kernel changes sign on Q x Q^; the inverse kernel is undefined");
  }

  const Eigen::MatrixXd coef = a.values * kmat * b.values.transpose();

  NwoTable table{mode, q, q_hat, spec, {}, std::vector<double>(2 * spec.depth + 1, 0.0), 0.0};
  table.entries.reserve(static_cast<std::size_t>(coef.size()));
  for (std::size_t i = 0; i < a.elements.size(); ++i)
    for (std::size_t j = 0; j < b.elements.size(); ++j) {
      const Element& ea = a.elements[i];
      const Element& eb = b.elements[j];
      const double v = ea.norm * eb.norm * coef(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      table.entries.push_back({ea.k, eb.k, ea.cube, eb.cube, ea.e, eb.e, v});
      if (ea.k < 0 || eb.k < 0) table.tail_max = std::max(table.tail_max, std::abs(v));
      else {
        double& m = table.max_by_offset[static_cast<std::size_t>(ea.k + eb.k)];
        m = std::max(m, std::abs(v));
      }
    }
  return table;
}

NwoTable nwo_coefficients(const RieszKernel& kernel, const WhitneyBox& p, NwoMode mode, const NwoSpec& spec) {
  return nwo_coefficients(kernel, p.q, p.q_hat, mode, spec);
}

double nwo_decay_slope(const NwoTable& table, int lo, int hi) {
  const int top = static_cast<int>(table.max_by_offset.size()) - 1;
  if (hi < 0 || hi > top) hi = top;
  require(lo >= 0 && lo < hi, ErrorKind::invalid_input, "decay fit needs at least two offsets");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int k = lo; k <= hi; ++k) {
    const double v = table.max_by_offset[static_cast<std::size_t>(k)];
    if (!(v > 0.0)) continue;
    const double y = std::log2(v);
    sx += k;
    sy += y;
    sxx += double(k) * k;
    sxy += k * y;
    ++count;
  }
  require(count >= 2, ErrorKind::numerical, "decay fit has fewer than two nonzero offsets");
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

void write_nwo_csv(std::ostream& os, const NwoTable& table) {
  os << "mode,k1,k2,cube1,cube2,e1,e2,value\n";
  os.precision(17);
  for (const auto& e : table.entries)
    os << to_string(table.mode) << ',' << e.k1 << ',' << e.k2 << ',' << e.cube1 << ',' << e.cube2 << ',' << e.e1 << ','
       << e.e2 << ',' << e.value << '\n';
}

}  // namespace blab
