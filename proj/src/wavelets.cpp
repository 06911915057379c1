#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <ostream>

#include "blab/error.hpp"
#include "blab/quadrature.hpp"
#include "blab/wavelets.hpp"
#include "json.hpp"

namespace blab {

namespace {

using Mat = Eigen::MatrixXd;

Mat gram_matrix(const SpaceParams& params, const Box& box, const LocalFrame& frame, const std::vector<MultiIndex>& mons) {
  const int d = params.dim();
  const int m = static_cast<int>(mons.size());
  Mat g(m, m);
  MultiIndex idx(d);
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      for (int j = 0; j < d; ++j) idx[j] = mons[a][j] + mons[b][j];
      g(a, b) = g(b, a) = local_moment(params, box, frame, idx);
    }
  return g;
}

// Columns are coefficient vectors of an orthonormal basis of the span; returns the eigenvalue ratio.
double orthonormalizer(const Mat& g, Mat& l) {
  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  require(es.info() == Eigen::Success, ErrorKind::numerical, "Gram eigen-decomposition failed");
  const auto& ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  const double bottom = ev.minCoeff();
  if (!(bottom > 1e-14 * top)) fail(ErrorKind::degenerate_measure, "weighted Gram matrix is rank deficient");
  l = es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal();
  return top / bottom;
}

void fix_sign(std::vector<std::vector<double>>& coef) {
  double best = 0.0;
  double sign = 1.0;
  for (const auto& row : coef)
    for (double c : row)
      if (std::abs(c) > best * (1.0 + 1e-12)) {
        best = std::abs(c);
        sign = c < 0.0 ? -1.0 : 1.0;
      }
  for (auto& row : coef)
    for (double& c : row) c *= sign;
}

}  // namespace

std::size_t alpert_dimension(int n, int order) {
  return ((std::size_t{1} << (n + 1)) - 1) * multi_indices(n + 1, order - 1).size();
}

AlpertBasis build_alpert_basis(const SpaceParams& params, const DyadicCube& q, int order) {
  require(order >= 1 && order <= 8, ErrorKind::invalid_input, "moment order must be in 1..8");
  require(q.dim() == params.dim(), ErrorKind::invalid_input, "cube dimension mismatch");
  const auto children = q.children();
  const LocalFrame frame = LocalFrame::of(q.box());
  const auto mons = multi_indices(params.dim(), order - 1);
  const int m = static_cast<int>(mons.size());
  const int c = static_cast<int>(children.size());
  const int total = m * c;

  std::vector<Mat> gram(c), ortho(c);
  double cond = 1.0;
  for (int i = 0; i < c; ++i) {
    gram[i] = gram_matrix(params, children[i].box(), frame, mons);
    cond = std::max(cond, orthonormalizer(gram[i], ortho[i]));
  }
  AlpertBasis basis{q, order, {}, cond};
  if (c <= 1) return basis;

  // Moments of the per-child orthonormal functions against the monomials of degree < order.
  Mat a(m, total);
  for (int i = 0; i < c; ++i) a.block(0, i * m, m, m) = gram[i] * ortho[i];
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (!(s.minCoeff() > 1e-12 * s.maxCoeff())) fail(ErrorKind::degenerate_measure, "moment constraints are rank deficient");
  const Mat z = svd.matrixV().rightCols(total - m);

  // Canonical rotation of the null space: eigenvectors of Z^T diag(1..N) Z, descending.
  Eigen::VectorXd ramp = Eigen::VectorXd::LinSpaced(total, 1.0, static_cast<double>(total));
  Eigen::SelfAdjointEigenSolver<Mat> es(z.transpose() * ramp.asDiagonal() * z);
  const Mat zc = z * es.eigenvectors().rowwise().reverse();

  std::vector<Box> pieces;
  for (const auto& ch : children) pieces.push_back(ch.box());
  for (int e = 0; e < zc.cols(); ++e) {
    std::vector<std::vector<double>> coef(c, std::vector<double>(m));
    for (int i = 0; i < c; ++i) {
      const Eigen::VectorXd v = ortho[i] * zc.col(e).segment(i * m, m);
      for (int k = 0; k < m; ++k) coef[i][k] = v[k];
    }
    fix_sign(coef);
    basis.elements.emplace_back(q.box(), frame, pieces, mons, std::move(coef));
  }
  return basis;
}

std::vector<PiecewisePolynomial> orthonormal_polynomials(const SpaceParams& params, const Box& box, int order) {
  require(order >= 1, ErrorKind::invalid_input, "polynomial order must be >= 1");
  const LocalFrame frame = LocalFrame::of(box);
  const auto mons = multi_indices(params.dim(), order - 1);
  Mat l;
  orthonormalizer(gram_matrix(params, box, frame, mons), l);
  std::vector<PiecewisePolynomial> out;
  for (int e = 0; e < l.cols(); ++e) {
    std::vector<std::vector<double>> coef(1, std::vector<double>(l.rows()));
    for (int k = 0; k < l.rows(); ++k) coef[0][k] = l(k, e);
    out.emplace_back(box, frame, std::vector<Box>{box}, mons, std::move(coef));
  }
  return out;
}

double wavelet_coefficient(const SpaceParams& params, const Function& f, const PiecewisePolynomial& h, int order,
                           int levels) {
  const CellRule rule(params, order);
  double sum = 0.0;
  for (std::size_t p = 0; p < h.pieces().size(); ++p) {
    const NodeSet ns = rule.nodes(h.pieces()[p], levels);
    for (std::size_t i = 0; i < ns.size(); ++i) sum += ns.w[i] * f(ns.point(i)) * h.piece_value(p, ns.point(i));
  }
  return sum;
}

std::vector<DyadicCube> descendants(const DyadicCube& q, int generation) {
  require(generation >= q.generation(), ErrorKind::invalid_input, "descendant generation must not precede the cube's");
  std::vector<DyadicCube> level{q};
  for (int g = q.generation(); g < generation; ++g) {
    std::vector<DyadicCube> next;
    for (const auto& c : level)
      for (auto& ch : c.children()) next.push_back(std::move(ch));
    level = std::move(next);
  }
  return level;
}

double telescoping_check(const SpaceParams& params, const DyadicCube& p, const DyadicCube& q, int order,
                         const Function& f, int rule_order) {
  require(p.is_ancestor_of(q) && !(p == q), ErrorKind::invalid_input, "telescoping needs Q strictly inside P");
  const CellRule rule(params, rule_order > 0 ? rule_order : order + 12);
  NodeSet nodes(params.dim());
  for (const auto& cell : descendants(p, q.generation() + 1)) rule.append(cell.box(), nodes);
  std::vector<double> fv(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) fv[i] = f(nodes.point(i));

  auto pair = [&](const auto& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += nodes.w[i] * fv[i] * g(nodes.point(i));
    return s;
  };

  std::vector<double> diff(nodes.size(), 0.0);
  for (DyadicCube i = q.parent();; i = i.parent()) {
    for (const auto& h : build_alpert_basis(params, i, order).elements) {
      const double c = pair(h);
      for (std::size_t k = 0; k < nodes.size(); ++k) diff[k] += c * h(nodes.point(k));
    }
    if (i == p) break;
  }
  auto project = [&](const Box& box, double sign) {
    for (const auto& e : orthonormal_polynomials(params, box, order)) {
      const double c = pair(e);
      for (std::size_t k = 0; k < nodes.size(); ++k) diff[k] -= sign * c * e(nodes.point(k));
    }
  };
  project(q.box(), 1.0);
  project(p.box(), -1.0);
  double res = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k)
    if (q.contains(nodes.point(k))) res += nodes.w[k] * diff[k] * diff[k];
  return std::sqrt(res);
}

void write_basis_json(std::ostream& os, const SpaceParams& params, const AlpertBasis& basis) {
  using nlohmann::json;
  json j;
  j["n"] = params.n;
  j["lambda"] = params.lambda;
  j["cube"] = {{"system", basis.cube.system()},
               {"k", basis.cube.generation()},
               {"index", basis.cube.index()},
               {"lo", basis.cube.box().lo},
               {"hi", basis.cube.box().hi}};
  j["K"] = basis.order;
  j["gram_condition"] = basis.gram_condition;
  json els = json::array();
  for (const auto& e : basis.elements) {
    json pieces = json::array();
    for (std::size_t p = 0; p < e.pieces().size(); ++p)
      pieces.push_back({{"lo", e.pieces()[p].lo}, {"hi", e.pieces()[p].hi}, {"coefficients", e.coefficients()[p]}});
    els.push_back({{"frame_center", e.frame().center}, {"frame_scale", e.frame().scale},
                   {"monomials", e.monomials()}, {"pieces", pieces}});
  }
  j["elements"] = els;
  os << j.dump(2) << '\n';
}

}  // namespace blab
