#include <algorithm>
#include <cmath>
#include <functional>

#include "blab/error.hpp"
#include "blab/norms.hpp"

namespace blab {

LorentzParams::LorentzParams(double p_, double q_) : p(p_), q(q_) {
  require(p > 0.0 && std::isfinite(p), ErrorKind::invalid_input, "Lorentz p must be finite and > 0");
  require(q > 0.0 && !std::isnan(q), ErrorKind::invalid_input, "Lorentz q must be > 0 or infinity");
}

std::vector<double> nonincreasing_rearrangement(std::span<const double> seq) {
  std::vector<double> a(seq.begin(), seq.end());
  for (double v : a) require(v >= 0.0, ErrorKind::invalid_input, "Lorentz sequence entries must be >= 0");
  std::sort(a.begin(), a.end(), std::greater<>());
  return a;
}

double lorentz_norm(std::span<const double> seq, const LorentzParams& lp) {
  const auto a = nonincreasing_rearrangement(seq);
  if (lp.q_infinite()) {
    double best = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) best = std::max(best, std::pow(static_cast<double>(k + 1), 1.0 / lp.p) * a[k]);
    return best;
  }
  double sum = 0.0;
  const double e = lp.q / lp.p - 1.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == 0.0) break;
    sum += std::pow(a[k], lp.q) * std::pow(static_cast<double>(k + 1), e);
  }
  return std::pow(sum, 1.0 / lp.q);
}

}  // namespace blab
