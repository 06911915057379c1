#include <cmath>

#include "blab/error.hpp"
#include "blab/operators.hpp"
#include "blab/quadrature.hpp"

namespace blab {

namespace {

double average(const NodeSet& ns, const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) s += ns.w[i] * v[i];
  return s / ns.total_weight();
}

double oscillation(const NodeSet& ns, const std::vector<double>& v) {
  const double avg = average(ns, v);
  double s = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) s += ns.w[i] * std::abs(v[i] - avg);
  return s / ns.total_weight();
}

}  // namespace

TracePairing trace_pairing(const Symbol& b, const DyadicCube& q, const DyadicCube& q_hat, const RieszKernel& kernel,
                           const TraceSpec& spec) {
  const SpaceParams& params = kernel.params();
  require(spec.order >= 1 && spec.levels >= 0, ErrorKind::invalid_input, "invalid trace quadrature spec");
  require(box_distance(q.box(), q_hat.box()) > 0.0, ErrorKind::singularity, "trace pairing needs separated cubes");
  const CellRule rule(params, spec.order);
  const NodeSet xs = rule.nodes(q.box(), spec.levels);
  const NodeSet ys = rule.nodes(q_hat.box(), spec.levels);
  std::vector<double> bx(xs.size()), by(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) bx[i] = b(xs.point(i));
  for (std::size_t j = 0; j < ys.size(); ++j) by[j] = b(ys.point(j));

  TracePairing out;
  out.hat_average = average(ys, by);
  out.mo_q = oscillation(xs, bx);
  out.mo_hat = oscillation(ys, by);
  const double mq = xs.total_weight(), mh = ys.total_weight();
  std::vector<double> sign(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = bx[i] - out.hat_average;
    sign[i] = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
  }

  // Trace(C L) = int int C(x, y) L(y, x), with C = (b(x) - b(y)) K(x, y) and
  // L(y, x) = s_Q(x) K(x, y)^{-1} / (m(Q) m(Q^)) on Q^ x Q
  double direct = 0.0, via = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const double w = xs.w[i] * ys.w[j];
      const double diff = bx[i] - by[j];
      direct += w * diff * sign[i];
      const double k = kernel(xs.point(i), ys.point(j));
      require(k != 0.0, ErrorKind::sign_violation, "kernel vanishes on Q x Q^");
      via += w * (diff * k) * (sign[i] / (k * mq * mh));
    }
  out.trace = direct / (mq * mh);
  out.trace_via_kernel = via;
  return out;
}

}  // namespace blab
