#include <algorithm>
#include <cmath>
#include <ostream>

#include "blab/error.hpp"
#include "blab/norms.hpp"
#include "blab/parallel.hpp"
#include "blab/quadrature.hpp"

namespace blab {

namespace {

bool boxes_meet(const Box& a, const Box& b) {
  for (int j = 0; j < a.dim(); ++j)
    if (a.hi[j] < b.lo[j] || b.hi[j] < a.lo[j]) return false;
  return true;
}

// b vanishes identically on the box
bool vanishes_on(const Symbol& b, const Box& box) { return b.support() && !boxes_meet(*b.support(), box); }

// Quadrature on the part of the box where b can be nonzero; b = 0 on the rest.
struct Restricted {
  NodeSet nodes;
  double total;    // m(box)
  double outside;  // m(box minus support)
};

Restricted restrict_to_support(const SpaceParams& params, const Symbol& b, const Box& box, const CubeQuadrature& quad) {
  Box inner = box;
  if (b.support())
    for (int j = 0; j < box.dim(); ++j) {
      inner.lo[j] = std::max(box.lo[j], b.support()->lo[j]);
      inner.hi[j] = std::min(box.hi[j], b.support()->hi[j]);
    }
  Restricted r{CellRule(params, quad.order).nodes(inner, quad.levels), cube_measure(params, box), 0.0};
  r.outside = std::max(0.0, r.total - cube_measure(params, inner));
  return r;
}

}  // namespace

double cube_average(const SpaceParams& params, const Symbol& b, const Box& box, const CubeQuadrature& quad) {
  if (b.is_constant()) return b(box.center());
  if (vanishes_on(b, box)) return 0.0;
  const Restricted rs = restrict_to_support(params, b, box, quad);
  double s = 0.0;
  for (std::size_t i = 0; i < rs.nodes.size(); ++i) s += rs.nodes.w[i] * b(rs.nodes.point(i));
  return s / rs.total;
}

double mean_oscillation(const SpaceParams& params, const Symbol& b, const Box& box, double r, const CubeQuadrature& quad) {
  require(r >= 1.0, ErrorKind::invalid_input, "oscillation power must be >= 1");
  if (b.is_constant() || vanishes_on(b, box)) return 0.0;
  const Restricted rs = restrict_to_support(params, b, box, quad);
  const NodeSet& ns = rs.nodes;
  std::vector<double> v(ns.size());
  double s = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    v[i] = b(ns.point(i));
    s += ns.w[i] * v[i];
  }
  const double avg = s / rs.total;
  double acc = rs.outside * std::pow(std::abs(avg), r);
  for (std::size_t i = 0; i < ns.size(); ++i) acc += ns.w[i] * std::pow(std::abs(v[i] - avg), r);
  return std::pow(acc / rs.total, 1.0 / r);
}

std::vector<double> OscillationProfile::values(int system, int k_lo, int k_hi) const {
  std::vector<double> out;
  for (const auto& e : entries)
    if (e.system == system && e.k >= k_lo && e.k <= k_hi) out.push_back(e.value);
  return out;
}

OscillationProfile oscillation_profile(const SpaceParams& params, const Symbol& b, const AdjacentSystems& systems,
                                       double r, const CubeQuadrature& quad, std::vector<int> system_ids) {
  if (system_ids.empty())
    for (int s = 0; s < systems.kappa(); ++s) system_ids.push_back(s);
  for (int s : system_ids) require(s >= 0 && s < systems.kappa(), ErrorKind::invalid_input, "system id out of range");
  std::sort(system_ids.begin(), system_ids.end());
  system_ids.erase(std::unique(system_ids.begin(), system_ids.end()), system_ids.end());

  OscillationProfile prof;
  prof.r = r;
  prof.k_min = systems.k_min();
  prof.k_max = systems.k_max();
  prof.window = systems.window();
  prof.systems = system_ids;
  std::vector<DyadicCube> cubes;
  for (int s : system_ids)
    for (int k = systems.k_min(); k <= systems.k_max(); ++k)
      for (auto& q : systems.cubes(s, k)) cubes.push_back(std::move(q));
  std::vector<double> values(cubes.size());
  parallel_for(cubes.size(), [&](std::size_t i) { values[i] = mean_oscillation(params, b, cubes[i].box(), r, quad); });
  prof.entries.reserve(cubes.size());
  for (std::size_t i = 0; i < cubes.size(); ++i)
    prof.entries.push_back({cubes[i].system(), cubes[i].generation(), cubes[i].index(), values[i]});
  return prof;
}

NormReport osc_norm(const OscillationProfile& profile, const LorentzParams& lp) {
  NormReport rep;
  rep.k_min = profile.k_min;
  rep.k_max = profile.k_max;
  for (int s : profile.systems) {
    const double v = lorentz_norm(profile.values(s, profile.k_min, profile.k_max), lp);
    rep.per_system.push_back(v);
    rep.value += v;
    rep.shrunk_value += lorentz_norm(profile.values(s, profile.k_min + 1, profile.k_max - 1), lp);
  }
  rep.relative_change = rep.value > 0.0 ? std::abs(rep.value - rep.shrunk_value) / rep.value : 0.0;
  return rep;
}

NormReport osc_norm(const SpaceParams& params, const Symbol& b, const AdjacentSystems& systems, const LorentzParams& lp,
                    double r, const CubeQuadrature& quad, std::vector<int> system_ids) {
  return osc_norm(oscillation_profile(params, b, systems, r, quad, std::move(system_ids)), lp);
}

MoPowerReport mo_power_equivalence_report(const SpaceParams& params, const Symbol& b, const AdjacentSystems& systems,
                                          const LorentzParams& lp, const CubeQuadrature& quad,
                                          std::vector<int> system_ids) {
  const auto one = osc_norm(params, b, systems, lp, 1.0, quad, system_ids);
  const auto three = osc_norm(params, b, systems, lp, 3.0, quad, system_ids);
  MoPowerReport rep{one.per_system, three.per_system, 0.0, 0.0};
  bool first = true;
  for (std::size_t i = 0; i < one.per_system.size(); ++i) {
    if (one.per_system[i] == 0.0) continue;
    const double ratio = three.per_system[i] / one.per_system[i];
    rep.ratio_min = first ? ratio : std::min(rep.ratio_min, ratio);
    rep.ratio_max = first ? ratio : std::max(rep.ratio_max, ratio);
    first = false;
  }
  return rep;
}

void write_profile_csv(std::ostream& os, const OscillationProfile& profile) {
  os << "system,k,index,r,mo\n";
  os.precision(17);
  for (const auto& e : profile.entries) {
    os << e.system << ',' << e.k << ',';
    for (std::size_t j = 0; j < e.index.size(); ++j) os << (j ? ":" : "") << e.index[j];
    os << ',' << profile.r << ',' << e.value << '\n';
  }
}

}  // namespace blab
