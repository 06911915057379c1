#include <cmath>

#include "blab/error.hpp"
#include "blab/geometry.hpp"

namespace blab {

double WhitneyBox::distance_to_diagonal() const { return box_distance(q.box(), q_hat.box()) / std::sqrt(2.0); }

WhitneyConstants whitney_constants(int n) {
  const double root = std::sqrt(2.0 * (n + 1));
  // Accepted boxes satisfy diam <= dist < 4 diam with diam = root * side.
  return {root / 2.0, 4.0 * root, 2.0 * root};
}

namespace {

void refine(const DyadicCube& q, const DyadicCube& qh, int last_generation, double root, std::vector<WhitneyBox>& out) {
  const double diam = root * q.side();
  const double dist = box_distance(q.box(), qh.box()) / std::sqrt(2.0);
  if (dist >= diam) {
    out.push_back({q, qh});
    return;
  }
  if (q.generation() >= last_generation) return;
  const auto cx = q.children();
  const auto cy = qh.children();
  for (const auto& a : cx)
    for (const auto& b : cy) refine(a, b, last_generation, root, out);
}

}  // namespace

std::vector<WhitneyBox> whitney_decompose(const SpaceParams& params, const DyadicCube& window, int depth) {
  require(window.dim() == params.dim(), ErrorKind::invalid_input, "window dimension mismatch");
  require(window.system() == 0 && !window.truncated(), ErrorKind::invalid_input,
          "Whitney window must be an untruncated standard-grid cube");
  require(depth >= 0 && depth <= 24, ErrorKind::invalid_input, "Whitney depth out of range");
  std::vector<WhitneyBox> out;
  const double root = std::sqrt(2.0 * params.dim());
  // The window pair itself meets the diagonal, so every accepted box has a rejected parent.
  const auto cx = window.children();
  if (depth == 0) return out;
  for (const auto& a : cx)
    for (const auto& b : cx) refine(a, b, window.generation() + depth, root, out);
  return out;
}

bool boxes_touch(const WhitneyBox& a, const WhitneyBox& b) {
  return box_distance(a.q.box(), b.q.box()) == 0.0 && box_distance(a.q_hat.box(), b.q_hat.box()) == 0.0;
}

}  // namespace blab
