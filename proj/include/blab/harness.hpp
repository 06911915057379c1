#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "blab/norms.hpp"
#include "blab/operators.hpp"
#include "blab/symbol.hpp"

namespace blab {

struct GridConfig {
  std::vector<double> lo, hi;  // empty: 4 radii around the first symbol's support
  std::vector<int> resolutions{64, 128};
  std::size_t cap = default_matrix_cap;
  bool operator==(const GridConfig&) const = default;
};

struct SystemsConfig {
  int kappa = 0;  // 0: all 3^{n+1} shifts
  int k_min = 0, k_max = 5;
  std::vector<double> lo, hi;  // window, empty: the grid box
  CubeQuadrature quad{};
  bool operator==(const SystemsConfig&) const = default;
};

struct BesovConfig {
  BesovDirectSpec spec{};
  double widen = 2.0;          // truncation radius factor for the stability row
  double fit_lo = 16.0;        // tail fit uses shells with r_lo >= fit_lo
  double fit_radius = 256.0;   // and a run truncated here
  bool operator==(const BesovConfig&) const = default;
};

struct NwoConfig {
  NwoSpec spec{};
  std::vector<std::string> modes{"kernel", "inverse-kernel"};
  std::vector<int> generations{1, 2, 3};
  std::vector<double> point;  // cube Q contains it at each generation; empty: first symbol's center
  int compare_order = 1;      // 0 disables the moment-order comparison
  int fit_hi = 4;             // slope fit over offsets 0..fit_hi
  bool operator==(const NwoConfig&) const = default;
};

struct VerdictConfig {
  double diverging = 0.25;  // growth per refinement
  double stable = 0.05;     // relative change of the last two values
  int steps = 3;            // refinements inspected for divergence
  bool operator==(const VerdictConfig&) const = default;
};

struct ExpectedVerdict {
  double p = 2.0, q = 2.0;
  std::string verdict;
  bool operator==(const ExpectedVerdict&) const = default;
};

struct KernelJob {
  std::string type = "riesz";  // heat or riesz
  std::vector<double> times{1.0};
  int samples = 100;
  std::vector<double> lo, hi;  // sampling box, empty: [0, 4]^{n+1}
  bool operator==(const KernelJob&) const = default;
};

struct WaveletJob {
  int generation = 0;
  std::vector<double> point;  // empty: (0.5, ..., 0.5)
  int order = 2;
  int system = 0;
  bool operator==(const WaveletJob&) const = default;
};

struct Tolerances {
  double band = 10.0;            // max/min of the equivalence ratio
  double band_drift = 0.2;       // band endpoint change between the two finest resolutions
  double scaling = 1e-8;         // 3b vs 3 * b, relative
  double truncation = 0.01;      // Besov change under widening and collar halving
  double tail_exponent = 0.15;   // relative error of the fitted tail exponent
  double slope = -2.0;           // NWO log2 slope bound
  double zero_offset_spread = 4.0;  // max/min of the offset-0 NWO coefficient across scales
  double mo_ratio_lo = 1.0, mo_ratio_hi = 10.0;
  bool operator==(const Tolerances&) const = default;
};

struct ExperimentConfig {
  std::string experiment = "equivalence";
  SpaceParams space{};
  int riesz_direction = 1;
  std::vector<LorentzParams> lorentz{{2.0, 2.0}};
  std::vector<SymbolSpec> symbols{SymbolSpec{}};
  GridConfig grid{};
  SystemsConfig systems{};
  BesovConfig besov{};
  NwoConfig nwo{};
  VerdictConfig verdict{};
  std::vector<ExpectedVerdict> expected;
  KernelJob kernel{};
  WaveletJob wavelet{};
  Tolerances tolerances{};
  bool scaling_row = true;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string output;  // output directory when --out is not given
  bool operator==(const ExperimentConfig&) const = default;
};

const std::vector<std::string>& experiment_names();

// Strict parse: unknown keys, wrong types and out-of-range values raise config errors.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
// Every field, so that parse(serialize(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

struct ReportRow {
  std::string experiment;
  std::string parameters;  // key=value pairs separated by ';'
  int resolution = 0;      // cells per side, 0 when not grid based
  std::string metric;
  double value = 0.0;
  std::string text;        // replaces the value when set (verdicts, undefined ratios)
};

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Report {
  std::string experiment;
  std::vector<ReportRow> rows;
  std::vector<Check> checks;
  double runtime_seconds = 0.0;

  void add(std::string parameters, int resolution, std::string metric, double value, std::string text = {});
  void check(std::string name, bool passed, std::string detail);
  bool passed() const;
  // First row with the metric and parameters containing every given fragment.
  const ReportRow* find(const std::string& metric, std::initializer_list<std::string> fragments = {}) const;
};

void write_csv(std::ostream& os, const Report& report);
// Checks, runtime and the normalized config.
void write_summary_json(std::ostream& os, const Report& report, const ExperimentConfig& config);
// <dir>/<name>.csv and <dir>/<name>_summary.json; returns the CSV path.
std::string write_report(const std::string& dir, const std::string& name, const Report& report,
                         const ExperimentConfig& config);

// "diverging" if each of the last steps refinements grows by at least the threshold, "stable" if the
// last two values differ by at most the stable fraction, "zero" if all vanish, "undetermined" otherwise.
std::string growth_verdict(std::span<const double> values, const VerdictConfig& v);

Report run_equivalence(const ExperimentConfig& config);
Report run_cutoff(const ExperimentConfig& config);
Report run_bump_membership(const ExperimentConfig& config);
Report run_nwo_decay(const ExperimentConfig& config);
Report run_mo_power(const ExperimentConfig& config);
Report run_experiment(const ExperimentConfig& config);

// Single-module verbs of the CLI. out_dir receives extra artifacts (kernel tables, basis JSON, profiles,
// matrix dumps).
Report run_kernel(const ExperimentConfig& config, const std::string& out_dir);
Report run_wavelet(const ExperimentConfig& config, const std::string& out_dir);
Report run_norm(const ExperimentConfig& config, const std::string& out_dir);
Report run_operator(const ExperimentConfig& config, const std::string& out_dir);

}  // namespace blab
