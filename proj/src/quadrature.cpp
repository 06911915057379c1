#include "blab/quadrature.hpp"

#include <cmath>
#include <map>
#include <tuple>
#include <memory>
#include <mutex>
#include <numbers>

#include "blab/error.hpp"

namespace blab {

namespace {

// P_m^{(alpha,beta)}(x) and P_{m-1}^{(alpha,beta)}(x) by the three-term recurrence.
void jacobi_eval(int m, double a, double b, double x, double& pm, double& pm1) {
  double p0 = 1.0;
  double p1 = 0.5 * (a - b + (a + b + 2.0) * x);
  if (m == 0) {
    pm = p0;
    pm1 = 0.0;
    return;
  }
  for (int k = 2; k <= m; ++k) {
    const double c = 2.0 * k + a + b;
    const double a1 = 2.0 * k * (k + a + b) * (c - 2.0);
    const double a2 = (c - 1.0) * (a * a - b * b);
    const double a3 = (c - 2.0) * (c - 1.0) * c;
    const double a4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c;
    const double p2 = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
    p0 = p1;
    p1 = p2;
  }
  pm = p1;
  pm1 = p0;
}

double jacobi_derivative(int m, double a, double b, double x, double pm, double pm1) {
  const double c = 2.0 * m + a + b;
  return (m * (a - b - c * x) * pm + 2.0 * (m + a) * (m + b) * pm1) / (c * (1.0 - x * x));
}

}  // namespace

Rule1D gauss_legendre(int m) { return gauss_jacobi(m, 0.0, 0.0); }

Rule1D gauss_jacobi(int m, double alpha, double beta) {
  require(m >= 1, ErrorKind::invalid_input, "quadrature order must be >= 1");
  require(alpha > -1.0 && beta > -1.0, ErrorKind::invalid_input, "Jacobi exponents must exceed -1");
  Rule1D r;
  r.nodes.resize(m);
  r.weights.resize(m);
  const double ab = alpha + beta;
  const double log_norm = (ab + 1.0) * std::log(2.0) + std::lgamma(m + alpha + 1.0) + std::lgamma(m + beta + 1.0) -
                          std::lgamma(m + ab + 1.0) - std::lgamma(m + 1.0);
  // Chebyshev-like initial guesses, deflated Newton for the rest.
  for (int i = 0; i < m; ++i) {
    double x = -std::cos(std::numbers::pi * (i + 0.75 + 0.5 * alpha) / (m + 0.5 + 0.5 * ab));
    if (i > 0) x = std::max(x, r.nodes[i - 1] + 1e-14);
    for (int it = 0; it < 100; ++it) {
      double pm, pm1;
      jacobi_eval(m, alpha, beta, x, pm, pm1);
      const double dp = jacobi_derivative(m, alpha, beta, x, pm, pm1);
      double defl = 0.0;
      for (int j = 0; j < i; ++j) defl += 1.0 / (x - r.nodes[j]);
      const double step = pm / (dp - defl * pm);
      x -= step;
      if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    double pm, pm1;
    jacobi_eval(m, alpha, beta, x, pm, pm1);
    const double dp = jacobi_derivative(m, alpha, beta, x, pm, pm1);
    r.nodes[i] = x;
    r.weights[i] = std::exp(log_norm) / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

const Rule1D& gauss_legendre_cached(int m) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<Rule1D>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[m];
  if (!slot) slot = std::make_unique<Rule1D>(gauss_legendre(m));
  return *slot;
}

const Rule1D& gauss_jacobi_cached(int m, double alpha, double beta) {
  static std::mutex mu;
  static std::map<std::tuple<int, double, double>, std::unique_ptr<Rule1D>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{m, alpha, beta}];
  if (!slot) slot = std::make_unique<Rule1D>(gauss_jacobi(m, alpha, beta));
  return *slot;
}

double NodeSet::total_weight() const {
  double s = 0.0;
  for (double v : w) s += v;
  return s;
}

CellRule::CellRule(const SpaceParams& params, int order)
    : params_(params), order_(order), gl_(gauss_legendre(order)), gj_(gauss_jacobi(order, 0.0, 2.0 * params.lambda)) {}

void CellRule::weighted_interval(double a, double b, std::vector<double>& t, std::vector<double>& w) const {
  const double h = 0.5 * (b - a);
  const double two_l = 2.0 * params_.lambda;
  if (a == 0.0) {
    const double scale = std::pow(h, two_l + 1.0);
    for (int i = 0; i < order_; ++i) {
      t.push_back(h * (1.0 + gj_.nodes[i]));
      w.push_back(scale * gj_.weights[i]);
    }
    return;
  }
  for (int i = 0; i < order_; ++i) {
    const double x = a + h * (1.0 + gl_.nodes[i]);
    t.push_back(x);
    w.push_back(h * gl_.weights[i] * std::pow(x, two_l));
  }
}

void CellRule::append(const Box& cell, NodeSet& out) const {
  const int d = params_.dim();
  require(cell.dim() == d && out.dim == d, ErrorKind::invalid_input, "cell dimension mismatch");
  std::vector<double> tl, wl;
  weighted_interval(cell.lo[d - 1], cell.hi[d - 1], tl, wl);
  // Flat tensor product: index digits over the first n coordinates, then the weighted one.
  std::vector<int> idx(d, 0);
  const std::size_t total = static_cast<std::size_t>(std::pow(order_, d));
  std::vector<double> pt(d);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    double wt = 1.0;
    for (int j = 0; j < d; ++j) {
      idx[j] = static_cast<int>(rem % order_);
      rem /= order_;
    }
    for (int j = 0; j + 1 < d; ++j) {
      const double h = 0.5 * (cell.hi[j] - cell.lo[j]);
      pt[j] = cell.lo[j] + h * (1.0 + gl_.nodes[idx[j]]);
      wt *= h * gl_.weights[idx[j]];
    }
    pt[d - 1] = tl[idx[d - 1]];
    wt *= wl[idx[d - 1]];
    out.x.insert(out.x.end(), pt.begin(), pt.end());
    out.w.push_back(wt);
  }
}

void CellRule::append_refined(const Box& box, int levels, NodeSet& out) const {
  const int d = params_.dim();
  const long per = 1L << levels;
  long total = 1;
  for (int j = 0; j < d; ++j) total *= per;
  Box cell = box;
  for (long flat = 0; flat < total; ++flat) {
    long rem = flat;
    for (int j = 0; j < d; ++j) {
      const long i = rem % per;
      rem /= per;
      const double h = (box.hi[j] - box.lo[j]) / per;
      cell.lo[j] = box.lo[j] + i * h;
      cell.hi[j] = (i + 1 == per) ? box.hi[j] : box.lo[j] + (i + 1) * h;
    }
    append(cell, out);
  }
}

NodeSet CellRule::nodes(const Box& box, int levels) const {
  NodeSet out(params_.dim());
  append_refined(box, levels, out);
  return out;
}

namespace {

// Unit n-ball (unweighted), recursive in the last coordinate.
NodeSet unit_ball(int k, int order) {
  NodeSet out(k);
  if (k == 0) {
    out.w.push_back(1.0);
    return out;
  }
  const NodeSet inner = unit_ball(k - 1, order);
  const double e = 0.5 * (k - 1);
  const Rule1D& r = gauss_jacobi_cached(order, e, e);
  for (int i = 0; i < order; ++i) {
    const double xi = r.nodes[i];
    const double rho = std::sqrt(std::max(0.0, 1.0 - xi * xi));
    for (std::size_t q = 0; q < inner.size(); ++q) {
      for (int j = 0; j < k - 1; ++j) out.x.push_back(rho * inner.x[q * (k - 1) + j]);
      out.x.push_back(xi);
      out.w.push_back(r.weights[i] * inner.w[q]);
    }
  }
  return out;
}

}  // namespace

NodeSet ball_rule(const SpaceParams& params, Coords center, double r, int order) {
  require(r > 0.0, ErrorKind::invalid_input, "ball radius must be > 0");
  const int n = params.n;
  const double c = center[n];
  const double two_l = 2.0 * params.lambda;
  const double half_n = 0.5 * n;
  const NodeSet inner = unit_ball(n, order);
  NodeSet out(n + 1);
  std::vector<double> s_nodes, s_weights;  // weight includes t^{2 lambda} R^{n+1} (1-s^2)^{n/2} ds
  if (c > r) {
    const Rule1D& jr = gauss_jacobi_cached(order, half_n, half_n);
    const double scale = std::pow(r, n + 1.0);
    for (int i = 0; i < order; ++i) {
      const double t = c + r * jr.nodes[i];
      s_nodes.push_back(jr.nodes[i]);
      s_weights.push_back(scale * jr.weights[i] * std::pow(t, two_l));
    }
  } else {
    const double s0 = -c / r;
    const double hs = 0.5 * (1.0 - s0);
    // tangent ball: (1 + s)^{n/2} joins the endpoint weight
    const bool tangent = c == r;
    const Rule1D& jr = gauss_jacobi_cached(order, half_n, tangent ? two_l + half_n : two_l);
    const double scale = std::pow(r, n + 1.0 + two_l) * std::pow(hs, two_l + half_n + 1.0) *
                         (tangent ? std::pow(hs, half_n) : 1.0);
    for (int i = 0; i < order; ++i) {
      const double s = s0 + hs * (1.0 + jr.nodes[i]);
      s_nodes.push_back(s);
      s_weights.push_back(scale * jr.weights[i] * (tangent ? 1.0 : std::pow(1.0 + s, half_n)));
    }
  }
  for (std::size_t i = 0; i < s_nodes.size(); ++i) {
    const double s = s_nodes[i];
    const double t = c + r * s;
    const double rho = r * std::sqrt(std::max(0.0, 1.0 - s * s));
    for (std::size_t q = 0; q < inner.size(); ++q) {
      for (int j = 0; j < n; ++j) out.x.push_back(center[j] + rho * inner.x[q * n + j]);
      out.x.push_back(t);
      out.w.push_back(s_weights[i] * inner.w[q]);
    }
  }
  return out;
}

}  // namespace blab
