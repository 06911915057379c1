#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "blab/error.hpp"
#include "blab/harness.hpp"
#include "blab/kernels.hpp"
#include "blab/parallel.hpp"
#include "blab/wavelets.hpp"

namespace blab {

namespace {

constexpr double undefined = std::numeric_limits<double>::quiet_NaN();

class Timer {
 public:
  explicit Timer(Report& r) : r_(r), start_(std::chrono::steady_clock::now()) {}
  ~Timer() { r_.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  Report& r_;
  std::chrono::steady_clock::time_point start_;
};

std::string num(double v) {
  if (v == LorentzParams::infinity()) return "inf";
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string coords(const std::vector<double>& x) {
  std::string s;
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ":" : "") + num(x[i]);
  return s;
}

// Builds "key=value;..." strings.
class Params {
 public:
  Params() = default;
  explicit Params(std::string s) : s_(std::move(s)) {}
  Params& operator()(const std::string& k, const std::string& v) {
    s_ += (s_.empty() ? "" : ";") + k + "=" + v;
    return *this;
  }
  Params& operator()(const std::string& k, double v) { return (*this)(k, num(v)); }
  Params& operator()(const std::string& k, int v) { return (*this)(k, std::to_string(v)); }
  operator std::string() const { return s_; }
  std::string str() const { return s_; }

 private:
  std::string s_;
};

Params space_params(const ExperimentConfig& c) { return Params()("n", c.space.n)("lambda", c.space.lambda); }

std::string symbol_label(const ExperimentConfig& c, std::size_t i) {
  return c.symbols[i].kind + "#" + std::to_string(i);
}

std::vector<Symbol> make_symbols(const ExperimentConfig& c) {
  std::vector<Symbol> out;
  for (const auto& s : c.symbols) out.push_back(make_symbol(s, c.space));
  return out;
}

Box grid_box(const ExperimentConfig& c) {
  if (!c.grid.lo.empty()) return Box(c.grid.lo, c.grid.hi);
  require(!c.symbols.empty(), ErrorKind::config, "grid box needs either grid.lo/hi or a symbol");
  const SymbolSpec s = normalized_spec(c.symbols.front(), c.space);
  std::vector<double> lo(s.center), hi(s.center);
  for (std::size_t j = 0; j < lo.size(); ++j) {
    lo[j] -= 2.0 * s.radius;
    hi[j] += 2.0 * s.radius;
  }
  lo.back() = std::max(0.0, lo.back());
  return Box(lo, hi);
}

AdjacentSystems make_systems(const ExperimentConfig& c) {
  const Box window = c.systems.lo.empty() ? grid_box(c) : Box(c.systems.lo, c.systems.hi);
  int kappa = c.systems.kappa;
  if (kappa == 0) {
    kappa = 1;
    for (int j = 0; j < c.space.dim(); ++j) kappa *= 3;
  }
  return build_systems(c.space, kappa, 0.5, c.systems.k_min, c.systems.k_max, window);
}

double ratio(double a, double b) { return b > 0.0 ? a / b : undefined; }

std::string detail(std::initializer_list<std::pair<const char*, double>> items) {
  std::string s;
  for (const auto& [k, v] : items) s += (s.empty() ? "" : " ") + std::string(k) + "=" + num(v);
  return s;
}

void require_grid(const ExperimentConfig& c) {
  require(!c.grid.resolutions.empty(), ErrorKind::config, "grid.resolutions is empty");
  std::size_t cells = 1;
  for (int j = 0; j < c.space.dim(); ++j) cells *= static_cast<std::size_t>(c.grid.resolutions.back());
  if (cells > c.grid.cap)
    fail(ErrorKind::config, "finest resolution gives " + std::to_string(cells) + " cells, above grid.cap " +
                                std::to_string(c.grid.cap));
}

// min and max over the finite ratios
std::pair<double, double> band(const std::vector<double>& r) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double v : r)
    if (std::isfinite(v) && v > 0.0) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  return {lo, hi};
}

}  // namespace

Report run_equivalence(const ExperimentConfig& c) {
  Report rep;
  rep.experiment = "equivalence";
  Timer timer(rep);
  for (const auto& lp : c.lorentz)
    require(lp.p > 1.0 && lp.q >= 1.0, ErrorKind::config, "equivalence rows need 1 < p < inf and 1 <= q <= inf");
  require(!c.symbols.empty(), ErrorKind::config, "equivalence needs at least one symbol");
  require_grid(c);
  set_thread_count(c.threads);

  std::vector<Symbol> symbols = make_symbols(c);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < symbols.size(); ++i) labels.push_back(symbol_label(c, i));
  const bool scaling = c.scaling_row;
  if (scaling) {
    symbols.push_back(symbols.front().scaled(3.0));
    labels.push_back("3x" + labels.front());
  }
  const AdjacentSystems systems = make_systems(c);
  const RieszKernel kernel(c.space, c.riesz_direction);
  const Box box = grid_box(c);
  const std::size_t ns = symbols.size(), nl = c.lorentz.size(), nr = c.grid.resolutions.size();
  auto besov_row = [&](const LorentzParams& lp) { return lp.p == lp.q && lp.p > c.space.lower_dimension() && c.space.n <= 1; };

  std::vector<std::vector<double>> osc(ns, std::vector<double>(nl)), besov(ns, std::vector<double>(nl, undefined));
  for (std::size_t s = 0; s < ns; ++s) {
    const auto profile = oscillation_profile(c.space, symbols[s], systems, 1.0, c.systems.quad);
    for (std::size_t l = 0; l < nl; ++l) {
      const auto& lp = c.lorentz[l];
      osc[s][l] = osc_norm(profile, lp).value;
      rep.add(Params()("symbol", labels[s])("n", c.space.n)("lambda", c.space.lambda)("p", lp.p)("q", lp.q)(
                  "k_min", systems.k_min())("k_max", systems.k_max())("kappa", systems.kappa()),
              0, "osc", osc[s][l]);
      if (besov_row(lp)) {
        besov[s][l] = besov_norm_direct(c.space, symbols[s], lp.p, c.besov.spec).value;
        rep.add(Params()("symbol", labels[s])("n", c.space.n)("lambda", c.space.lambda)("p", lp.p)(
                    "collar", c.besov.spec.collar)("radius", c.besov.spec.radius),
                0, "besov", besov[s][l]);
      }
    }
  }

  // schatten[r][s][l]
  std::vector<std::vector<std::vector<double>>> sch(nr, std::vector<std::vector<double>>(ns, std::vector<double>(nl)));
  for (std::size_t r = 0; r < nr; ++r) {
    const int res = c.grid.resolutions[r];
    const CommutatorAssembler assembler(WeightedGrid(c.space, box, res), kernel, c.grid.cap);
    for (std::size_t s = 0; s < ns; ++s) {
      const auto sv = singular_values(assembler.commutator(symbols[s]));
      for (std::size_t l = 0; l < nl; ++l) {
        const auto& lp = c.lorentz[l];
        sch[r][s][l] = schatten_lorentz(sv, lp);
        const std::string p = Params()("symbol", labels[s])("n", c.space.n)("lambda", c.space.lambda)("p", lp.p)(
            "q", lp.q)("box", coords(box.lo) + "/" + coords(box.hi))("ell", c.riesz_direction);
        rep.add(p, res, "schatten", sch[r][s][l]);
        rep.add(p, res, "ratio_schatten_osc", ratio(sch[r][s][l], osc[s][l]));
        if (besov_row(lp)) rep.add(p, res, "ratio_schatten_besov", ratio(sch[r][s][l], besov[s][l]));
      }
    }
  }

  // bands over the catalogue (scaled copy excluded), finest and second finest resolution
  const std::size_t base = scaling ? ns - 1 : ns;
  auto collect = [&](std::size_t r, bool with_besov) {
    std::vector<double> out;
    for (std::size_t s = 0; s < base; ++s)
      for (std::size_t l = 0; l < nl; ++l) {
        if (with_besov && !besov_row(c.lorentz[l])) continue;
        out.push_back(ratio(sch[r][s][l], with_besov ? besov[s][l] : osc[s][l]));
      }
    return out;
  };
  for (bool with_besov : {false, true}) {
    const std::string name = with_besov ? "besov" : "osc";
    const auto last = band(collect(nr - 1, with_besov));
    if (!(last.second > 0.0)) continue;  // nothing defined, e.g. constant symbols
    const double width = last.second / last.first;
    const Params p = space_params(c)("against", name);
    rep.add(p, c.grid.resolutions.back(), "band_min", last.first);
    rep.add(p, c.grid.resolutions.back(), "band_max", last.second);
    rep.check("band_" + name, width <= c.tolerances.band, detail({{"max_over_min", width}, {"limit", c.tolerances.band}}));
    if (nr >= 2) {
      const auto prev = band(collect(nr - 2, with_besov));
      const double drift = std::max(std::abs(last.first - prev.first) / prev.first, std::abs(last.second - prev.second) / prev.second);
      rep.add(p, c.grid.resolutions.back(), "band_drift", drift);
      rep.check("band_drift_" + name, drift <= c.tolerances.band_drift,
                detail({{"drift", drift}, {"limit", c.tolerances.band_drift}}));
    }
  }
  if (scaling) {
    double worst = 0.0;
    auto rel = [&](double scaled, double one) {
      if (one == 0.0 && scaled == 0.0) return 0.0;
      return std::abs(scaled - 3.0 * one) / std::abs(3.0 * one);
    };
    for (std::size_t l = 0; l < nl; ++l) {
      worst = std::max(worst, rel(osc[ns - 1][l], osc[0][l]));
      if (besov_row(c.lorentz[l])) worst = std::max(worst, rel(besov[ns - 1][l], besov[0][l]));
      for (std::size_t r = 0; r < nr; ++r) worst = std::max(worst, rel(sch[r][ns - 1][l], sch[r][0][l]));
    }
    rep.add(space_params(c)("symbol", labels.back()), 0, "scaling_error", worst);
    rep.check("scaling", worst <= c.tolerances.scaling, detail({{"relative_error", worst}, {"limit", c.tolerances.scaling}}));
  }
  for (std::size_t s = 0; s < base; ++s)
    if (symbols[s].is_constant()) {
      bool zero = true;
      for (std::size_t l = 0; l < nl; ++l) {
        zero = zero && osc[s][l] == 0.0 && (!besov_row(c.lorentz[l]) || besov[s][l] == 0.0);
        for (std::size_t r = 0; r < nr; ++r) zero = zero && sch[r][s][l] == 0.0;
      }
      rep.check("constant_" + labels[s], zero, "all norms vanish for a constant symbol");
    }
  return rep;
}

Report run_cutoff(const ExperimentConfig& c) {
  Report rep;
  rep.experiment = "cutoff";
  Timer timer(rep);
  require(c.space.n >= 1, ErrorKind::config, "the cut-off experiment needs n >= 1");
  require(!c.symbols.empty(), ErrorKind::config, "cut-off needs a symbol");
  require_grid(c);
  set_thread_count(c.threads);
  const auto symbols = make_symbols(c);
  const RieszKernel kernel(c.space, c.riesz_direction);
  const Box box = grid_box(c);
  const std::size_t ns = symbols.size(), nl = c.lorentz.size(), nr = c.grid.resolutions.size();
  std::vector<std::vector<std::vector<double>>> values(ns, std::vector<std::vector<double>>(nl, std::vector<double>(nr)));
  for (std::size_t r = 0; r < nr; ++r) {
    const int res = c.grid.resolutions[r];
    const CommutatorAssembler assembler(WeightedGrid(c.space, box, res), kernel, c.grid.cap);
    for (std::size_t s = 0; s < ns; ++s) {
      const auto sv = singular_values(assembler.commutator(symbols[s]));
      for (std::size_t l = 0; l < nl; ++l) values[s][l][r] = schatten_lorentz(sv, c.lorentz[l]);
    }
  }
  for (std::size_t s = 0; s < ns; ++s)
    for (std::size_t l = 0; l < nl; ++l) {
      const auto& lp = c.lorentz[l];
      const std::string p = Params()("symbol", symbol_label(c, s))("n", c.space.n)("lambda", c.space.lambda)("p", lp.p)(
          "q", lp.q)("box", coords(box.lo) + "/" + coords(box.hi))("ell", c.riesz_direction);
      for (std::size_t r = 0; r < nr; ++r) {
        rep.add(p, c.grid.resolutions[r], "schatten", values[s][l][r]);
        if (r) rep.add(p, c.grid.resolutions[r], "growth", ratio(values[s][l][r], values[s][l][r - 1]) - 1.0);
      }
      const std::string v = growth_verdict(values[s][l], c.verdict);
      rep.add(Params(p)("diverging", c.verdict.diverging)("stable", c.verdict.stable)("steps", c.verdict.steps),
              c.grid.resolutions.back(), "verdict", 0.0, v);
      for (const auto& e : c.expected)
        if (e.p == lp.p && e.q == lp.q)
          rep.check("verdict_" + symbol_label(c, s) + "_p" + num(lp.p) + "_q" + num(lp.q), v == e.verdict,
                    "got " + v + ", expected " + e.verdict);
    }
  return rep;
}

Report run_bump_membership(const ExperimentConfig& c) {
  Report rep;
  rep.experiment = "bump-membership";
  Timer timer(rep);
  for (const auto& lp : c.lorentz)
    if (!(lp.p > c.space.lower_dimension()))
      fail(ErrorKind::config, "p = " + num(lp.p) + " <= n+1: at and below the cut-off index only constants have finite "
                              "Besov norm, so the bump cannot belong; use p > n+1");
  require(c.space.n <= 1, ErrorKind::config, "the direct Besov integral is implemented for n = 0 and n = 1");
  require(!c.symbols.empty(), ErrorKind::config, "bump-membership needs a symbol");
  set_thread_count(c.threads);
  const auto symbols = make_symbols(c);
  const AdjacentSystems systems = make_systems(c);
  const double predicted = -(2.0 * (c.space.n + 1) + 2.0 * c.space.lambda);
  for (std::size_t s = 0; s < symbols.size(); ++s) {
    const auto profile = oscillation_profile(c.space, symbols[s], systems, 1.0, c.systems.quad);
    for (const auto& lp : c.lorentz) {
      const double p = lp.p;
      const Params base = Params()("symbol", symbol_label(c, s))("n", c.space.n)("lambda", c.space.lambda)("p", p);
      BesovDirectSpec spec = c.besov.spec;
      const BesovDirectReport a = besov_norm_direct(c.space, symbols[s], p, spec);
      spec.radius *= c.besov.widen;
      const BesovDirectReport b = besov_norm_direct(c.space, symbols[s], p, spec);
      const std::string pa = Params(base)("collar", c.besov.spec.collar)("radius", c.besov.spec.radius);
      const std::string pb = Params(base)("collar", c.besov.spec.collar)("radius", spec.radius);
      // inside-inside, inside-outside up to the far split, far tail
      auto terms = [](const BesovDirectReport& r) {
        return std::array<double, 3>{r.term_i, r.term_ii + r.term_iii - r.far_tail, r.far_tail};
      };
      const auto ta = terms(a), tb = terms(b);
      const char* names[3] = {"term_inside", "term_near", "term_far"};
      bool finite = std::isfinite(a.value) && a.value > 0.0;
      double worst_term = 0.0;
      for (int k = 0; k < 3; ++k) {
        rep.add(pa, 0, names[k], ta[k]);
        rep.add(pb, 0, names[k], tb[k]);
        finite = finite && std::isfinite(ta[k]) && std::isfinite(tb[k]);
        // a term that is zero at both radii is trivially stable
        const double change = tb[k] > 0.0 ? std::abs(tb[k] - ta[k]) / tb[k] : (ta[k] == 0.0 ? 0.0 : 1.0);
        rep.add(pb, 0, std::string(names[k]) + "_change", change);
        worst_term = std::max(worst_term, change);
      }
      rep.add(pa, 0, "besov", a.value);
      rep.add(pb, 0, "besov", b.value);
      const double trunc = std::abs(b.value - a.value) / b.value;
      const double collar = std::abs(a.half_collar_value - a.value) / a.value;
      rep.add(pb, 0, "truncation_change", trunc);
      rep.add(Params(pa)("half_collar", c.besov.spec.collar / 2), 0, "collar_change", collar);
      const std::string tag = symbol_label(c, s) + "_p" + num(p);
      rep.check("finite_" + tag, finite, detail({{"besov", a.value}}));
      rep.check("truncation_" + tag, std::max(trunc, worst_term) <= c.tolerances.truncation,
                detail({{"norm_change", trunc}, {"worst_term_change", worst_term}, {"limit", c.tolerances.truncation}}));
      rep.check("collar_" + tag, collar <= c.tolerances.truncation,
                detail({{"change", collar}, {"limit", c.tolerances.truncation}}));

      // far tail exponent from the shell masses of a long truncation
      const double fit_radius = std::max(c.besov.fit_radius, c.besov.spec.radius);
      const bool reuse = fit_radius == spec.radius;
      BesovDirectReport fitted;
      if (!reuse) {
        spec = c.besov.spec;
        spec.radius = fit_radius;
        fitted = besov_norm_direct(c.space, symbols[s], p, spec);
      }
      const BesovDirectReport& f = reuse ? b : fitted;
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      int count = 0;
      for (const auto& sh : f.shells) {
        if (sh.r_lo < c.besov.fit_lo || !(sh.mass > 0.0)) continue;
        const double r = 0.5 * (sh.r_lo + sh.r_hi);
        const double x = std::log(r), y = std::log(sh.mass / (sh.r_hi - sh.r_lo)) - c.space.n * std::log(r);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
      }
      const double slope = count >= 2 ? (count * sxy - sx * sy) / (count * sxx - sx * sx) : undefined;
      const std::string pf = Params(base)("fit_lo", c.besov.fit_lo)("radius", spec.radius)("shells", count);
      rep.add(pf, 0, "tail_exponent", slope);
      rep.add(pf, 0, "tail_exponent_predicted", predicted);
      const double err = std::abs(slope - predicted) / std::abs(predicted);
      rep.check("tail_exponent_" + tag, count >= 2 && err <= c.tolerances.tail_exponent,
                detail({{"fitted", slope}, {"predicted", predicted}, {"relative_error", err}}));

      const double o = osc_norm(profile, LorentzParams(p, LorentzParams::infinity())).value;
      rep.add(Params(base)("q", "inf")("k_min", systems.k_min())("k_max", systems.k_max()), 0, "osc", o);
      rep.check("osc_finite_" + tag, std::isfinite(o) && o > 0.0, detail({{"osc", o}}));
    }
  }
  return rep;
}

Report run_nwo_decay(const ExperimentConfig& c) {
  Report rep;
  rep.experiment = "nwo-decay";
  Timer timer(rep);
  require(!c.nwo.generations.empty() && !c.nwo.modes.empty(), ErrorKind::config, "nwo needs generations and modes");
  require(c.nwo.fit_hi >= 1 && c.nwo.fit_hi <= 2 * c.nwo.spec.depth, ErrorKind::config, "nwo.fit_hi out of range");
  set_thread_count(c.threads);
  const RieszKernel kernel(c.space, c.riesz_direction);
  std::vector<double> point = c.nwo.point;
  if (point.empty()) point = c.symbols.empty() ? std::vector<double>(c.space.dim(), 1.0)
                                               : normalized_spec(c.symbols.front(), c.space).center;
  const std::vector<int> zero(c.space.dim(), 0);
  for (const auto& mode_name : c.nwo.modes) {
    const NwoMode mode = nwo_mode_from_string(mode_name);
    std::vector<double> zero_offset;
    for (int g : c.nwo.generations) {
      const DyadicCube q = DyadicCube::containing(0, zero, point, g);
      const PartnerResult partner = find_partner_cube(kernel, q);
      const NwoTable t = nwo_coefficients(kernel, q, partner.q_hat, mode, c.nwo.spec);
      const Params base = space_params(c)("mode", mode_name)("generation", g)("order", c.nwo.spec.order)(
          "depth", c.nwo.spec.depth)("cube", coords(q.box().lo))("partner", coords(partner.q_hat.box().lo));
      for (std::size_t k = 0; k < t.max_by_offset.size(); ++k)
        rep.add(Params(base)("offset", static_cast<int>(k)), 0, "max_coefficient", t.max_by_offset[k]);
      rep.add(base, 0, "tail_max", t.tail_max);
      const double slope = nwo_decay_slope(t, 0, c.nwo.fit_hi);
      rep.add(Params(base)("fit", "0.." + std::to_string(c.nwo.fit_hi)), 0, "slope", slope);
      rep.check("slope_" + mode_name + "_g" + std::to_string(g), slope <= c.tolerances.slope,
                detail({{"slope", slope}, {"limit", c.tolerances.slope}}));
      zero_offset.push_back(t.max_by_offset[0]);

      if (c.nwo.compare_order > 0 && c.nwo.compare_order != c.nwo.spec.order) {
        NwoSpec low = c.nwo.spec;
        low.order = c.nwo.compare_order;
        const NwoTable tl = nwo_coefficients(kernel, q, partner.q_hat, mode, low);
        const Params lb = space_params(c)("mode", mode_name)("generation", g)("order", low.order)("depth", low.depth);
        bool faster = true;
        for (int k = 0; k <= c.nwo.fit_hi; ++k) {
          rep.add(Params(lb)("offset", k), 0, "max_coefficient", tl.max_by_offset[k]);
          if (k >= 2)
            faster = faster && t.max_by_offset[k] / t.max_by_offset[0] < tl.max_by_offset[k] / tl.max_by_offset[0];
        }
        rep.check("order_comparison_" + mode_name + "_g" + std::to_string(g), faster,
                  "relative decay at offsets >= 2 vs order " + std::to_string(low.order));
      }
    }
    const auto [lo, hi] = band(zero_offset);
    const double spread = hi / lo;
    rep.add(space_params(c)("mode", mode_name), 0, "zero_offset_spread", spread);
    if (zero_offset.size() >= 2)
      rep.check("zero_offset_" + mode_name, spread <= c.tolerances.zero_offset_spread,
                detail({{"max_over_min", spread}, {"limit", c.tolerances.zero_offset_spread}}));
  }
  return rep;
}

Report run_mo_power(const ExperimentConfig& c) {
  Report rep;
  rep.experiment = "mo-power";
  Timer timer(rep);
  set_thread_count(c.threads);
  const auto symbols = make_symbols(c);
  const AdjacentSystems systems = make_systems(c);
  for (std::size_t s = 0; s < symbols.size(); ++s)
    for (const auto& lp : c.lorentz) {
      const MoPowerReport m = mo_power_equivalence_report(c.space, symbols[s], systems, lp, c.systems.quad);
      const Params base = Params()("symbol", symbol_label(c, s))("n", c.space.n)("lambda", c.space.lambda)("p", lp.p)(
          "q", lp.q)("k_min", systems.k_min())("k_max", systems.k_max())("kappa", systems.kappa());
      for (std::size_t i = 0; i < m.norm_r1.size(); ++i) {
        rep.add(Params(base)("system", static_cast<int>(i)), 0, "osc_r1", m.norm_r1[i]);
        rep.add(Params(base)("system", static_cast<int>(i)), 0, "osc_r3", m.norm_r3[i]);
      }
      rep.add(base, 0, "ratio_min", m.ratio_min);
      rep.add(base, 0, "ratio_max", m.ratio_max);
      if (!symbols[s].is_constant())
        rep.check("mo_ratio_" + symbol_label(c, s) + "_p" + num(lp.p),
                  m.ratio_min >= c.tolerances.mo_ratio_lo && m.ratio_max <= c.tolerances.mo_ratio_hi,
                  detail({{"min", m.ratio_min}, {"max", m.ratio_max}}));
    }
  return rep;
}

Report run_experiment(const ExperimentConfig& c) {
  if (c.experiment == "equivalence") return run_equivalence(c);
  if (c.experiment == "cutoff") return run_cutoff(c);
  if (c.experiment == "bump-membership") return run_bump_membership(c);
  if (c.experiment == "nwo-decay") return run_nwo_decay(c);
  if (c.experiment == "mo-power") return run_mo_power(c);
  fail(ErrorKind::config, "unknown experiment '" + c.experiment + "'");
}

Report run_kernel(const ExperimentConfig& c, const std::string& out_dir) {
  Report rep;
  rep.experiment = "kernel";
  Timer timer(rep);
  set_thread_count(c.threads);
  const int d = c.space.dim();
  std::vector<double> lo = c.kernel.lo, hi = c.kernel.hi;
  if (lo.empty()) {
    lo.assign(d, 0.0);
    hi.assign(d, 4.0);
  }
  std::mt19937_64 rng(c.seed);
  std::vector<std::vector<double>> xs, ys;
  for (int i = 0; i < c.kernel.samples; ++i) {
    std::vector<double> x(d), y(d);
    for (int j = 0; j < d; ++j) {
      // half-open draws; the last coordinate stays strictly positive
      x[j] = lo[j] + (hi[j] - lo[j]) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      y[j] = lo[j] + (hi[j] - lo[j]) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    }
    x[d - 1] = std::max(x[d - 1], 1e-6);
    y[d - 1] = std::max(y[d - 1], 1e-6);
    xs.push_back(std::move(x));
    ys.push_back(std::move(y));
  }
  std::filesystem::create_directories(out_dir);
  std::ofstream os(std::filesystem::path(out_dir) / ("kernel_" + c.kernel.type + ".csv"));
  if (!os) fail(ErrorKind::io, "cannot write the kernel table in " + out_dir);
  os.precision(17);
  auto header = [&](bool with_t) {
    if (with_t) os << "t,";
    for (int j = 0; j < d; ++j) os << 'x' << j + 1 << ',';
    for (int j = 0; j < d; ++j) os << 'y' << j + 1 << ',';
    os << "value\n";
  };
  auto line = [&](const double* t, const std::vector<double>& x, const std::vector<double>& y, double v) {
    if (t) os << *t << ',';
    for (double a : x) os << a << ',';
    for (double a : y) os << a << ',';
    os << v << '\n';
  };
  bool ok = true;
  if (c.kernel.type == "heat") {
    header(true);
    const HeatKernel heat(c.space);
    for (double t : c.kernel.times)
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double v = heat(t, xs[i], ys[i]);
        ok = ok && std::isfinite(v) && v >= 0.0;
        line(&t, xs[i], ys[i], v);
        rep.add(space_params(c)("t", t)("x", coords(xs[i]))("y", coords(ys[i])), 0, "heat", v);
      }
    rep.check("heat_nonnegative", ok, "kernel values finite and >= 0");
  } else {
    require(c.kernel.type == "riesz", ErrorKind::config, "kernel.type must be heat or riesz");
    header(false);
    const RieszKernel riesz(c.space, c.riesz_direction);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double v = riesz(xs[i], ys[i]);
      ok = ok && std::isfinite(v);
      line(nullptr, xs[i], ys[i], v);
      const double size = std::abs(v) * ball_measure(c.space, xs[i], distance(xs[i], ys[i]));
      rep.add(space_params(c)("ell", c.riesz_direction)("x", coords(xs[i]))("y", coords(ys[i])), 0, "riesz", v);
      rep.add(space_params(c)("ell", c.riesz_direction)("x", coords(xs[i]))("y", coords(ys[i])), 0, "size_ratio", size);
    }
    rep.check("riesz_finite", ok, "kernel values finite");
  }
  return rep;
}

Report run_wavelet(const ExperimentConfig& c, const std::string& out_dir) {
  Report rep;
  rep.experiment = "wavelet";
  Timer timer(rep);
  const int d = c.space.dim();
  std::vector<double> point = c.wavelet.point;
  if (point.empty()) point.assign(d, 0.5);
  std::vector<int> shift(d, 0);
  if (c.wavelet.system != 0) shift = make_systems(c).shift(c.wavelet.system);
  const DyadicCube q = DyadicCube::containing(c.wavelet.system, shift, point, c.wavelet.generation);
  const AlpertBasis basis = build_alpert_basis(c.space, q, c.wavelet.order);
  double ortho = 0.0, moments = 0.0;
  for (std::size_t a = 0; a < basis.elements.size(); ++a) {
    for (std::size_t b = a; b < basis.elements.size(); ++b)
      ortho = std::max(ortho, std::abs(basis.elements[a].exact_inner(c.space, basis.elements[b]) - (a == b ? 1.0 : 0.0)));
    for (const auto& beta : multi_indices(d, c.wavelet.order - 1))
      moments = std::max(moments, std::abs(basis.elements[a].local_pairing(c.space, beta)));
  }
  const Params p = space_params(c)("order", c.wavelet.order)("generation", c.wavelet.generation)("cube", coords(q.box().lo));
  rep.add(p, 0, "dimension", static_cast<double>(basis.elements.size()));
  rep.add(p, 0, "gram_condition", basis.gram_condition);
  rep.add(p, 0, "orthonormality_error", ortho);
  rep.add(p, 0, "moment_error", moments);
  rep.check("orthonormality", ortho <= 1e-10, detail({{"error", ortho}}));
  rep.check("vanishing_moments", moments <= 1e-10, detail({{"error", moments}}));
  std::filesystem::create_directories(out_dir);
  std::ofstream os(std::filesystem::path(out_dir) / "basis.json");
  if (!os) fail(ErrorKind::io, "cannot write basis.json in " + out_dir);
  write_basis_json(os, c.space, basis);
  return rep;
}

Report run_norm(const ExperimentConfig& c, const std::string& out_dir) {
  Report rep;
  rep.experiment = "norm";
  Timer timer(rep);
  set_thread_count(c.threads);
  const auto symbols = make_symbols(c);
  const AdjacentSystems systems = make_systems(c);
  std::filesystem::create_directories(out_dir);
  for (std::size_t s = 0; s < symbols.size(); ++s) {
    const auto profile = oscillation_profile(c.space, symbols[s], systems, 1.0, c.systems.quad);
    std::ofstream os(std::filesystem::path(out_dir) / ("profile_" + c.symbols[s].kind + "_" + std::to_string(s) + ".csv"));
    if (!os) fail(ErrorKind::io, "cannot write the oscillation profile in " + out_dir);
    write_profile_csv(os, profile);
    for (const auto& lp : c.lorentz) {
      const Params base = Params()("symbol", symbol_label(c, s))("n", c.space.n)("lambda", c.space.lambda)("p", lp.p)(
          "q", lp.q)("k_min", systems.k_min())("k_max", systems.k_max())("kappa", systems.kappa());
      const NormReport o = osc_norm(profile, lp);
      rep.add(base, 0, "osc", o.value);
      rep.add(base, 0, "osc_shrunk", o.shrunk_value);
      if (lp.p == lp.q) {
        const NormReport b = besov_norm_dyadic(c.space, symbols[s], lp.p, systems);
        rep.add(base, 0, "besov_dyadic", b.value);
        if (lp.p > c.space.lower_dimension() && c.space.n <= 1) {
          const double v = besov_norm_direct(c.space, symbols[s], lp.p, c.besov.spec).value;
          rep.add(Params(base)("collar", c.besov.spec.collar)("radius", c.besov.spec.radius), 0, "besov_direct", v);
        }
      }
    }
  }
  rep.check("norms_computed", true, "");
  return rep;
}

Report run_operator(const ExperimentConfig& c, const std::string& out_dir) {
  Report rep;
  rep.experiment = "operator";
  Timer timer(rep);
  require_grid(c);
  set_thread_count(c.threads);
  const auto symbols = make_symbols(c);
  const RieszKernel kernel(c.space, c.riesz_direction);
  const Box box = grid_box(c);
  std::filesystem::create_directories(out_dir);
  for (int res : c.grid.resolutions) {
    const WeightedGrid grid(c.space, box, res);
    const CommutatorAssembler assembler(grid, kernel, c.grid.cap);
    for (std::size_t s = 0; s < symbols.size(); ++s) {
      const DiscreteOperator op = assembler.commutator(symbols[s]);
      const auto sv = singular_values(op);
      const std::string stem = c.symbols[s].kind + "_" + std::to_string(s) + "_r" + std::to_string(res);
      write_matrix((std::filesystem::path(out_dir) / ("commutator_" + stem + ".bin")).string(), op);
      std::ofstream os(std::filesystem::path(out_dir) / ("singular_values_" + stem + ".csv"));
      if (!os) fail(ErrorKind::io, "cannot write singular values in " + out_dir);
      write_singular_values_csv(os, sv);
      const Params p = Params()("symbol", symbol_label(c, s))("n", c.space.n)("lambda", c.space.lambda)(
          "box", coords(box.lo) + "/" + coords(box.hi))("ell", c.riesz_direction);
      rep.add(p, res, "sigma_max", sv.empty() ? 0.0 : sv.front());
      for (const auto& lp : c.lorentz) rep.add(Params(p)("p", lp.p)("q", lp.q), res, "schatten", schatten_lorentz(sv, lp));
      // the direct Hilbert-Schmidt integral is quadratic in the cell count; small grids only
      if (grid.size() <= 512) {
        const double hs = schatten_lorentz(sv, {2.0, 2.0});
        const double direct = std::sqrt(hilbert_schmidt_direct(symbols[s], grid, kernel));
        const double err = direct > 0.0 ? std::abs(hs - direct) / direct : std::abs(hs);
        rep.add(p, res, "hilbert_schmidt_direct", direct);
        rep.check("hilbert_schmidt_" + symbol_label(c, s) + "_r" + std::to_string(res), err <= 0.02,
                  detail({{"matrix", hs}, {"direct", direct}, {"relative_error", err}}));
      }
    }
  }
  if (rep.checks.empty()) rep.check("operators_assembled", true, "");
  return rep;
}

}  // namespace blab
