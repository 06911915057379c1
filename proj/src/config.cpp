#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "blab/error.hpp"
#include "blab/harness.hpp"
#include "json.hpp"

namespace blab {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) { fail(ErrorKind::config, where + ": " + what); }

// Reads the keys of one object; finish() rejects whatever was not read.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) bad(path_, "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  template <class T>
  void get(const std::string& key, T& out) {
    if (!has(key)) return;
    out = convert<T>(j_.at(key), where(key));
  }

  template <class F>
  void object(const std::string& key, F&& f) {
    if (!has(key)) return;
    Reader r(j_.at(key), where(key));
    f(r);
    r.finish();
  }

  template <class F>
  void array(const std::string& key, F&& f) {
    if (!has(key)) return;
    const json& a = j_.at(key);
    if (!a.is_array()) bad(where(key), "expected an array");
    f(a, where(key));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) bad(path_, "unknown key '" + it.key() + "'");
  }

  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  template <class T>
  static T convert(const json& v, const std::string& at) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) bad(at, "expected a boolean");
      return v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) bad(at, "expected a string");
      return v.get<std::string>();
    } else if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) bad(at, "expected a number");
      return v.get<double>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) bad(at, "expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_unsigned()) return v.get<T>();
        if (v.get<std::int64_t>() < 0) bad(at, "expected a nonnegative integer");
      }
      return v.get<T>();
    } else {
      // vectors
      using E = typename T::value_type;
      if (!v.is_array()) bad(at, "expected an array");
      T out;
      for (std::size_t i = 0; i < v.size(); ++i) out.push_back(convert<E>(v[i], at + "[" + std::to_string(i) + "]"));
      return out;
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

double read_q(const json& v, const std::string& at) {
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return LorentzParams::infinity();
    bad(at, "q must be a number or \"inf\"");
  }
  return Reader::convert<double>(v, at);
}

json write_q(double q) { return q == LorentzParams::infinity() ? json("inf") : json(q); }

void read_symbol(Reader& r, SymbolSpec& s) {
  r.get("kind", s.kind);
  r.get("center", s.center);
  r.get("radius", s.radius);
  r.get("amplitude", s.amplitude);
  r.get("direction", s.direction);
  r.get("offset", s.offset);
  r.get("frequency", s.frequency);
  r.get("ramp_lo", s.ramp_lo);
  r.get("ramp_hi", s.ramp_hi);
}

json write_symbol(const SymbolSpec& s) {
  return json{{"kind", s.kind},         {"center", s.center},       {"radius", s.radius},
              {"amplitude", s.amplitude}, {"direction", s.direction}, {"offset", s.offset},
              {"frequency", s.frequency}, {"ramp_lo", s.ramp_lo},     {"ramp_hi", s.ramp_hi}};
}

void validate(const ExperimentConfig& c) {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), c.experiment) == names.end())
    bad("experiment", "unknown experiment '" + c.experiment + "'");
  if (c.space.n < 0 || !(c.space.lambda > 0.0) || !std::isfinite(c.space.lambda))
    bad("space", "need n >= 0 and lambda > 0");
  const int d = c.space.dim();
  if (c.riesz_direction < 1 || c.riesz_direction > d) bad("riesz_direction", "must be in 1..n+1");
  for (const auto& lp : c.lorentz)
    if (!(lp.p > 0.0) || !std::isfinite(lp.p) || !(lp.q > 0.0)) bad("lorentz", "need p > 0 finite and q > 0");
  for (const auto& s : c.symbols) {
    try {
      (void)normalized_spec(s, c.space);
    } catch (const Error& e) {
      bad("symbols", e.what());
    }
  }
  auto box_ok = [&](const std::vector<double>& lo, const std::vector<double>& hi, const char* where) {
    if (lo.empty() && hi.empty()) return;
    if (static_cast<int>(lo.size()) != d || static_cast<int>(hi.size()) != d) bad(where, "box corners need n+1 entries");
    for (int j = 0; j < d; ++j)
      if (!(hi[j] > lo[j])) bad(where, "box needs lo < hi");
    if (lo[d - 1] < 0.0) bad(where, "box leaves the half-space");
  };
  box_ok(c.grid.lo, c.grid.hi, "grid");
  box_ok(c.systems.lo, c.systems.hi, "systems");
  box_ok(c.kernel.lo, c.kernel.hi, "kernel");
  for (std::size_t i = 0; i < c.grid.resolutions.size(); ++i) {
    if (c.grid.resolutions[i] < 2) bad("grid.resolutions", "need >= 2 cells per side");
    if (i && c.grid.resolutions[i] <= c.grid.resolutions[i - 1]) bad("grid.resolutions", "must increase");
  }
  if (c.grid.cap == 0) bad("grid.cap", "must be positive");
  if (c.systems.k_max < c.systems.k_min) bad("systems", "k_max < k_min");
  if (c.systems.quad.order < 1 || c.systems.quad.levels < 0) bad("systems.quad", "invalid quadrature");
  if (c.besov.widen <= 1.0) bad("besov.widen", "must be > 1");
  for (const auto& m : c.nwo.modes) {
    try {
      (void)nwo_mode_from_string(m);
    } catch (const Error& e) {
      bad("nwo.modes", e.what());
    }
  }
  if (!c.nwo.point.empty() && static_cast<int>(c.nwo.point.size()) != d) bad("nwo.point", "needs n+1 entries");
  if (!c.wavelet.point.empty() && static_cast<int>(c.wavelet.point.size()) != d) bad("wavelet.point", "needs n+1 entries");
  if (c.verdict.steps < 1 || !(c.verdict.diverging > 0.0) || !(c.verdict.stable > 0.0)) bad("verdict", "invalid thresholds");
  for (const auto& e : c.expected)
    if (e.verdict != "diverging" && e.verdict != "stable" && e.verdict != "zero")
      bad("expected", "verdict must be diverging, stable or zero");
  if (c.kernel.type != "heat" && c.kernel.type != "riesz") bad("kernel.type", "must be heat or riesz");
  if (c.kernel.samples < 1) bad("kernel.samples", "must be >= 1");
  for (double t : c.kernel.times)
    if (!(t > 0.0)) bad("kernel.times", "must be > 0");
  if (c.threads < 0) bad("threads", "must be >= 0");
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"equivalence", "cutoff", "bump-membership", "nwo-decay", "mo-power"};
  return names;
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::config, std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c;
  Reader r(j, "");
  r.get("experiment", c.experiment);
  r.object("space", [&](Reader& s) {
    s.get("n", c.space.n);
    s.get("lambda", c.space.lambda);
  });
  r.get("riesz_direction", c.riesz_direction);
  r.array("lorentz", [&](const json& a, const std::string& at) {
    c.lorentz.clear();
    for (std::size_t i = 0; i < a.size(); ++i) {
      Reader e(a[i], at + "[" + std::to_string(i) + "]");
      LorentzParams lp;
      e.get("p", lp.p);
      if (e.has("q")) lp.q = read_q(a[i].at("q"), e.where("q"));
      e.finish();
      c.lorentz.push_back(lp);
    }
  });
  r.array("symbols", [&](const json& a, const std::string& at) {
    c.symbols.clear();
    for (std::size_t i = 0; i < a.size(); ++i) {
      Reader e(a[i], at + "[" + std::to_string(i) + "]");
      SymbolSpec s;
      read_symbol(e, s);
      e.finish();
      c.symbols.push_back(s);
    }
  });
  r.object("grid", [&](Reader& g) {
    g.get("lo", c.grid.lo);
    g.get("hi", c.grid.hi);
    g.get("resolutions", c.grid.resolutions);
    g.get("cap", c.grid.cap);
  });
  r.object("systems", [&](Reader& s) {
    s.get("kappa", c.systems.kappa);
    s.get("k_min", c.systems.k_min);
    s.get("k_max", c.systems.k_max);
    s.get("lo", c.systems.lo);
    s.get("hi", c.systems.hi);
    s.get("quad_order", c.systems.quad.order);
    s.get("quad_levels", c.systems.quad.levels);
  });
  r.object("besov", [&](Reader& b) {
    b.get("collar", c.besov.spec.collar);
    b.get("radius", c.besov.spec.radius);
    b.get("far", c.besov.spec.far);
    b.get("order", c.besov.spec.order);
    b.get("outer_panels", c.besov.spec.outer_panels);
    b.get("angle_nodes", c.besov.spec.angle_nodes);
    b.get("widen", c.besov.widen);
    b.get("fit_lo", c.besov.fit_lo);
    b.get("fit_radius", c.besov.fit_radius);
  });
  r.object("nwo", [&](Reader& w) {
    w.get("order", c.nwo.spec.order);
    w.get("depth", c.nwo.spec.depth);
    w.get("quad_order", c.nwo.spec.quad_order);
    w.get("modes", c.nwo.modes);
    w.get("generations", c.nwo.generations);
    w.get("point", c.nwo.point);
    w.get("compare_order", c.nwo.compare_order);
    w.get("fit_hi", c.nwo.fit_hi);
  });
  r.object("verdict", [&](Reader& v) {
    v.get("diverging", c.verdict.diverging);
    v.get("stable", c.verdict.stable);
    v.get("steps", c.verdict.steps);
  });
  r.array("expected", [&](const json& a, const std::string& at) {
    c.expected.clear();
    for (std::size_t i = 0; i < a.size(); ++i) {
      Reader e(a[i], at + "[" + std::to_string(i) + "]");
      ExpectedVerdict ev;
      e.get("p", ev.p);
      if (e.has("q")) ev.q = read_q(a[i].at("q"), e.where("q"));
      e.get("verdict", ev.verdict);
      e.finish();
      c.expected.push_back(ev);
    }
  });
  r.object("kernel", [&](Reader& k) {
    k.get("type", c.kernel.type);
    k.get("times", c.kernel.times);
    k.get("samples", c.kernel.samples);
    k.get("lo", c.kernel.lo);
    k.get("hi", c.kernel.hi);
  });
  r.object("wavelet", [&](Reader& w) {
    w.get("generation", c.wavelet.generation);
    w.get("point", c.wavelet.point);
    w.get("order", c.wavelet.order);
    w.get("system", c.wavelet.system);
  });
  r.object("tolerances", [&](Reader& t) {
    t.get("band", c.tolerances.band);
    t.get("band_drift", c.tolerances.band_drift);
    t.get("scaling", c.tolerances.scaling);
    t.get("truncation", c.tolerances.truncation);
    t.get("tail_exponent", c.tolerances.tail_exponent);
    t.get("slope", c.tolerances.slope);
    t.get("zero_offset_spread", c.tolerances.zero_offset_spread);
    t.get("mo_ratio_lo", c.tolerances.mo_ratio_lo);
    t.get("mo_ratio_hi", c.tolerances.mo_ratio_hi);
  });
  r.get("scaling_row", c.scaling_row);
  r.get("seed", c.seed);
  r.get("threads", c.threads);
  r.get("output", c.output);
  r.finish();
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorKind::io, "cannot open config " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  json j;
  j["experiment"] = c.experiment;
  j["space"] = {{"n", c.space.n}, {"lambda", c.space.lambda}};
  j["riesz_direction"] = c.riesz_direction;
  j["lorentz"] = json::array();
  for (const auto& lp : c.lorentz) j["lorentz"].push_back({{"p", lp.p}, {"q", write_q(lp.q)}});
  j["symbols"] = json::array();
  for (const auto& s : c.symbols) j["symbols"].push_back(write_symbol(s));
  j["grid"] = {{"lo", c.grid.lo}, {"hi", c.grid.hi}, {"resolutions", c.grid.resolutions}, {"cap", c.grid.cap}};
  j["systems"] = {{"kappa", c.systems.kappa},         {"k_min", c.systems.k_min}, {"k_max", c.systems.k_max},
                  {"lo", c.systems.lo},               {"hi", c.systems.hi},       {"quad_order", c.systems.quad.order},
                  {"quad_levels", c.systems.quad.levels}};
  const auto& b = c.besov;
  j["besov"] = {{"collar", b.spec.collar},     {"radius", b.spec.radius},
                {"far", b.spec.far},           {"order", b.spec.order},
                {"outer_panels", b.spec.outer_panels}, {"angle_nodes", b.spec.angle_nodes},
                {"widen", b.widen},            {"fit_lo", b.fit_lo},
                {"fit_radius", b.fit_radius}};
  j["nwo"] = {{"order", c.nwo.spec.order},     {"depth", c.nwo.spec.depth},
              {"quad_order", c.nwo.spec.quad_order}, {"modes", c.nwo.modes},
              {"generations", c.nwo.generations}, {"point", c.nwo.point},
              {"compare_order", c.nwo.compare_order}, {"fit_hi", c.nwo.fit_hi}};
  j["verdict"] = {{"diverging", c.verdict.diverging}, {"stable", c.verdict.stable}, {"steps", c.verdict.steps}};
  j["expected"] = json::array();
  for (const auto& e : c.expected) j["expected"].push_back({{"p", e.p}, {"q", write_q(e.q)}, {"verdict", e.verdict}});
  j["kernel"] = {{"type", c.kernel.type}, {"times", c.kernel.times}, {"samples", c.kernel.samples},
                 {"lo", c.kernel.lo},     {"hi", c.kernel.hi}};
  j["wavelet"] = {{"generation", c.wavelet.generation}, {"point", c.wavelet.point}, {"order", c.wavelet.order},
                  {"system", c.wavelet.system}};
  const auto& t = c.tolerances;
  j["tolerances"] = {{"band", t.band},
                     {"band_drift", t.band_drift},
                     {"scaling", t.scaling},
                     {"truncation", t.truncation},
                     {"tail_exponent", t.tail_exponent},
                     {"slope", t.slope},
                     {"zero_offset_spread", t.zero_offset_spread},
                     {"mo_ratio_lo", t.mo_ratio_lo},
                     {"mo_ratio_hi", t.mo_ratio_hi}};
  j["scaling_row"] = c.scaling_row;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["output"] = c.output;
  return j.dump(2);
}

}  // namespace blab
