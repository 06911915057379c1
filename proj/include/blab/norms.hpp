#pragma once

#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "blab/geometry.hpp"
#include "blab/symbol.hpp"

namespace blab {

struct LorentzParams {
  double p = 2.0;
  double q = 2.0;  // infinity allowed

  LorentzParams() = default;
  LorentzParams(double p_, double q_);
  static constexpr double infinity() { return std::numeric_limits<double>::infinity(); }
  bool q_infinite() const { return q == infinity(); }
  bool operator==(const LorentzParams&) const = default;
};

std::vector<double> nonincreasing_rearrangement(std::span<const double> seq);

// (sum_k a*_k^q k^{q/p - 1})^{1/q}, or max_k k^{1/p} a*_k for q = infinity.
double lorentz_norm(std::span<const double> seq, const LorentzParams& params);

// Per-cube tensor rule: the cube is split 2^levels per side, order nodes per side per cell.
struct CubeQuadrature {
  int order = 6;
  int levels = 1;

  bool operator==(const CubeQuadrature&) const = default;
};

double cube_average(const SpaceParams& params, const Symbol& b, const Box& box, const CubeQuadrature& quad = {});

// (avg_Q |b - b_Q|^r dm)^{1/r}
double mean_oscillation(const SpaceParams& params, const Symbol& b, const Box& box, double r,
                        const CubeQuadrature& quad = {});

struct ProfileEntry {
  int system;
  int k;
  std::vector<std::int64_t> index;
  double value;
};

struct OscillationProfile {
  double r = 1.0;
  int k_min = 0, k_max = 0;
  Box window;
  std::vector<int> systems;
  std::vector<ProfileEntry> entries;  // sorted by (system, k, index)

  // MO values of one system restricted to generations [k_lo, k_hi].
  std::vector<double> values(int system, int k_lo, int k_hi) const;
};

// MO^r over every cube of the listed systems (all systems if empty) in the generation range.
OscillationProfile oscillation_profile(const SpaceParams& params, const Symbol& b, const AdjacentSystems& systems,
                                       double r, const CubeQuadrature& quad = {}, std::vector<int> system_ids = {});

struct NormReport {
  double value = 0.0;               // sum over systems
  std::vector<double> per_system;
  double shrunk_value = 0.0;        // generation range shrunk by one on each side
  double relative_change = 0.0;     // |value - shrunk| / value, 0 when value is 0
  int k_min = 0, k_max = 0;
};

NormReport osc_norm(const OscillationProfile& profile, const LorentzParams& lp);
NormReport osc_norm(const SpaceParams& params, const Symbol& b, const AdjacentSystems& systems, const LorentzParams& lp,
                    double r = 1.0, const CubeQuadrature& quad = {}, std::vector<int> system_ids = {});

struct MoPowerReport {
  std::vector<double> norm_r1;  // per system
  std::vector<double> norm_r3;
  double ratio_min = 0.0, ratio_max = 0.0;  // r = 3 over r = 1, 0 when both vanish
};

MoPowerReport mo_power_equivalence_report(const SpaceParams& params, const Symbol& b, const AdjacentSystems& systems,
                                          const LorentzParams& lp, const CubeQuadrature& quad = {},
                                          std::vector<int> system_ids = {});

void write_profile_csv(std::ostream& os, const OscillationProfile& profile);

// Truncated Besov double integral, split into the regions of the support hint S:
// I (x, y in S), II (x outside, y in S), III (x in S, y outside).
struct BesovDirectSpec {
  double collar = 1e-4;      // |x - y| < collar excluded
  double radius = 128.0;     // |x - y| <= radius kept
  double far = 0.0;          // |x - y| > far counted as tail (0: 10 times the support's last coordinate)
  int order = 6;             // Gauss nodes per panel
  int outer_panels = 8;      // per side of the support box
  int angle_nodes = 24;      // per arc, n = 1

  bool operator==(const BesovDirectSpec&) const = default;
};

struct BesovShell {
  double r_lo, r_hi;
  double mass;  // contribution of x in S, y outside S with r in the shell (III)
};

struct BesovDirectReport {
  double value = 0.0;  // p-th root of I + II + III
  double term_i = 0.0, term_ii = 0.0, term_iii = 0.0;  // un-rooted integrals
  double far_tail = 0.0;                               // un-rooted part with |x - y| > far
  double half_collar_value = 0.0;                      // value with the collar halved
  std::vector<BesovShell> shells;
};

BesovDirectReport besov_norm_direct(const SpaceParams& params, const Symbol& b, double p,
                                    const BesovDirectSpec& spec = {});

// 1.05 * 3 sqrt(n+1) / 2: B(c_Q, c_n 2^{-k}) contains the 3x dilate of Q.
double besov_dyadic_constant(int n);

struct BesovDyadicSpec {
  int order = 6;      // per side on Q
  int ball_order = 8;
};

NormReport besov_norm_dyadic(const SpaceParams& params, const Symbol& b, double p, const AdjacentSystems& systems,
                             const BesovDyadicSpec& spec = {});

struct HeatMaximalSpec {
  int space_samples = 3;   // per coordinate of B(x, t)
  int scale_samples = 4;   // s in [scale_lo t, t]
  double scale_lo = 0.5;
  int order = 6;
  int levels = 5;          // cells per side of the z-box: 2^levels
  double extent = 12.0;    // z-box half width in units of s
};

// max s |grad_{(y,s)} exp(-s^2 Delta) b (y)| over the sample grid.
double heat_maximal(const SpaceParams& params, const Symbol& b, Coords x, double t, const HeatMaximalSpec& spec = {});

}  // namespace blab
