#include "kerrepr/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace kerrepr {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument("config: " + what);
}

class Section {
 public:
  Section(const json& j, std::string name) : name_(std::move(name)) {
    if (!j.is_object()) fail("section " + name_ + " must be an object");
    for (const auto& [key, value] : j.items()) entries_.emplace(key, &value);
  }

  ~Section() = default;

  /// call after all reads: anything left is unknown
  void finish() const {
    if (!entries_.empty())
      fail("unknown key in " + name_ + ": " + entries_.begin()->first);
  }

  bool has(const char* key) const { return entries_.count(key) != 0; }

  std::optional<double> number(const char* key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_number()) fail(name_ + "." + key + " must be a number");
    return v->get<double>();
  }

  std::optional<bool> boolean(const char* key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_boolean()) fail(name_ + "." + key + " must be a boolean");
    return v->get<bool>();
  }

  std::optional<std::uint64_t> unsigned_int(const char* key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_number_unsigned())
      fail(name_ + "." + key + " must be a non-negative integer");
    return v->get<std::uint64_t>();
  }

  const json* take(const char* key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    const json* v = it->second;
    entries_.erase(it);
    return v;
  }

  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::map<std::string, const json*> entries_;
};

double db_to_linear(double db) { return std::pow(10.0, -db / 10.0); }

/// linear/dB alternatives: at most one of the two keys
double squeezing_entry(Section& s, const char* linear_key, const char* db_key,
                       double fallback) {
  const bool has_linear = s.has(linear_key);
  const bool has_db = s.has(db_key);
  if (has_linear && has_db)
    fail(s.name() + ": give " + linear_key + " or " + db_key + ", not both");
  if (has_db) {
    const double db = *s.number(db_key);
    if (!std::isfinite(db)) fail(s.name() + "." + db_key + " must be finite");
    return db_to_linear(db);
  }
  if (has_linear) {
    const double v = *s.number(linear_key);
    if (!(v > 0.0)) fail(s.name() + "." + linear_key + " must be positive");
    return v;
  }
  return fallback;
}

void parse_source(const json& j, SourceConfig& out) {
  Section s(j, "source");
  out.v_s_plus = squeezing_entry(s, "v_s_plus", "v_s_db", out.v_s_plus);
  out.v_p_plus = squeezing_entry(s, "v_p_plus", "v_p_db", out.v_p_plus);
  out.v_minus = squeezing_entry(s, "v_minus", "v_minus_db", out.v_minus);
  s.finish();
  if (out.v_s_plus * out.v_minus < 1.0 - 1e-12 ||
      out.v_p_plus * out.v_minus < 1.0 - 1e-12)
    fail("source squeezing violates the uncertainty bound: "
         "v_plus * v_minus must be >= 1");
}

void parse_sagnac(const json& j, SagnacConfig& out) {
  Section s(j, "sagnac");
  auto refl = [&](const char* key, double fallback) {
    const auto v = s.number(key);
    if (!v) return fallback;
    if (!(*v > 0.0 && *v < 1.0))
      fail(std::string("sagnac.") + key + " must lie in (0, 1)");
    return *v;
  };
  out.reflectivity_s = refl("reflectivity_s", out.reflectivity_s);
  out.reflectivity_p = refl("reflectivity_p", out.reflectivity_p);
  if (const auto v = s.number("kappa")) {
    if (!(*v >= 0.0)) fail("sagnac.kappa cannot be negative");
    out.kappa = *v;
  }
  if (const auto v = s.number("loop_loss")) {
    if (!(*v >= 0.0 && *v < 1.0)) fail("sagnac.loop_loss must lie in [0, 1)");
    out.loop_loss = *v;
  }
  if (const auto v = s.number("excess_phase_noise")) {
    if (!(*v >= 0.0)) fail("sagnac.excess_phase_noise cannot be negative");
    out.excess_phase_noise = *v;
  }
  if (const auto v = s.number("phase_bias")) {
    if (!std::isfinite(*v)) fail("sagnac.phase_bias must be finite");
    out.phase_bias = *v;
  }
  s.finish();
}

void parse_entangler(const json& j, EntanglerConfig& out) {
  Section s(j, "entangler");
  const bool has_vis = s.has("visibility");
  const bool has_pct = s.has("visibility_percent");
  if (has_vis && has_pct)
    fail("entangler: give visibility or visibility_percent, not both");
  if (has_pct) {
    const double pct = *s.number("visibility_percent");
    if (!(pct > 0.0 && pct <= 100.0))
      fail("entangler.visibility_percent must lie in (0, 100]");
    out.visibility = pct / 100.0;
  } else if (has_vis) {
    const double vis = *s.number("visibility");
    if (!(vis > 0.0 && vis <= 1.0))
      fail("entangler.visibility must lie in (0, 1]");
    out.visibility = vis;
  }
  if (const auto v = s.number("splitter_reflectivity")) {
    if (!(*v > 0.0 && *v < 1.0))
      fail("entangler.splitter_reflectivity must lie in (0, 1)");
    out.splitter_reflectivity = *v;
  }
  if (const auto v = s.number("eta_det")) {
    if (!(*v > 0.0 && *v <= 1.0)) fail("entangler.eta_det must lie in (0, 1]");
    out.eta_det = *v;
  }
  if (const auto v = s.number("relative_phase")) {
    if (!std::isfinite(*v)) fail("entangler.relative_phase must be finite");
    out.relative_phase = *v;
  }
  if (const auto v = s.boolean("apply_optics")) out.apply_optics = *v;
  s.finish();
}

void parse_detection(const json& j, DetectionConfig& out) {
  Section s(j, "detection");
  if (const auto v = s.number("center_freq_hz")) {
    if (!(*v > 0.0)) fail("detection.center_freq_hz must be positive");
    out.center_freq_hz = *v;
  }
  if (const auto v = s.number("rbw_hz")) {
    if (!(*v > 0.0)) fail("detection.rbw_hz must be positive");
    out.rbw_hz = *v;
  }
  if (const auto v = s.number("electronic_level")) {
    if (!(*v >= 0.0)) fail("detection.electronic_level cannot be negative");
    out.electronic_level = *v;
  }
  s.finish();
}

void parse_uncertainty(const json& j, UncertaintyConfig& out) {
  Section s(j, "uncertainty");
  if (const auto v = s.number("v_sum_plus_err")) {
    if (!(*v > 0.0)) fail("uncertainty.v_sum_plus_err must be positive");
    out.v_sum_plus_err = *v;
  }
  if (const auto v = s.number("v_diff_minus_err")) {
    if (!(*v > 0.0)) fail("uncertainty.v_diff_minus_err must be positive");
    out.v_diff_minus_err = *v;
  }
  s.finish();
}

void parse_run(const json& j, RunSection& out) {
  Section s(j, "run");
  if (const auto v = s.number("energy_pj")) {
    if (!(*v > 0.0)) fail("run.energy_pj must be positive");
    out.energy_pj = *v;
  }
  if (const auto v = s.unsigned_int("seed")) out.seed = *v;
  if (const auto v = s.unsigned_int("scan_steps")) {
    if (*v < 2) fail("run.scan_steps must be at least 2");
    out.scan_steps = static_cast<std::size_t>(*v);
  }
  if (const auto v = s.number("phi_min")) out.phi_min = *v;
  if (const auto v = s.number("phi_max")) out.phi_max = *v;
  if (const auto v = s.number("e_min_pj")) {
    if (!(*v >= 0.0)) fail("run.e_min_pj cannot be negative");
    out.e_min_pj = *v;
  }
  if (const auto v = s.number("e_max_pj")) out.e_max_pj = *v;
  if (const auto v = s.unsigned_int("sweep_steps")) {
    if (*v < 2) fail("run.sweep_steps must be at least 2");
    out.sweep_steps = static_cast<std::size_t>(*v);
  }
  s.finish();
  if (!std::isfinite(out.phi_min) || !std::isfinite(out.phi_max) ||
      !(out.phi_min < out.phi_max))
    fail("run.phi_min must be less than run.phi_max");
  if (!(out.e_min_pj < out.e_max_pj))
    fail("run.e_min_pj must be less than run.e_max_pj");
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("top level must be a JSON object");
  RunConfig out;
  Section top(j, "top level");
  if (const json* v = top.take("source")) parse_source(*v, out.source);
  if (const json* v = top.take("sagnac")) parse_sagnac(*v, out.sagnac);
  if (const json* v = top.take("entangler")) parse_entangler(*v, out.entangler);
  if (const json* v = top.take("detection")) parse_detection(*v, out.detection);
  if (const json* v = top.take("uncertainty"))
    parse_uncertainty(*v, out.uncertainty);
  if (const json* v = top.take("run")) parse_run(*v, out.run);
  top.finish();
  return out;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::string RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["source"] = {{"v_s_plus", source.v_s_plus},
                 {"v_p_plus", source.v_p_plus},
                 {"v_minus", source.v_minus}};
  j["sagnac"] = {{"reflectivity_s", sagnac.reflectivity_s},
                 {"reflectivity_p", sagnac.reflectivity_p},
                 {"kappa", sagnac.kappa},
                 {"loop_loss", sagnac.loop_loss},
                 {"excess_phase_noise", sagnac.excess_phase_noise},
                 {"phase_bias", sagnac.phase_bias}};
  j["entangler"] = {{"splitter_reflectivity", entangler.splitter_reflectivity},
                    {"visibility", entangler.visibility},
                    {"eta_det", entangler.eta_det},
                    {"relative_phase", entangler.relative_phase},
                    {"apply_optics", entangler.apply_optics}};
  j["detection"] = {{"center_freq_hz", detection.center_freq_hz},
                    {"rbw_hz", detection.rbw_hz}};
  if (detection.electronic_level)
    j["detection"]["electronic_level"] = *detection.electronic_level;
  j["uncertainty"] = nlohmann::ordered_json::object();
  if (uncertainty.v_sum_plus_err)
    j["uncertainty"]["v_sum_plus_err"] = *uncertainty.v_sum_plus_err;
  if (uncertainty.v_diff_minus_err)
    j["uncertainty"]["v_diff_minus_err"] = *uncertainty.v_diff_minus_err;
  j["run"] = {{"energy_pj", run.energy_pj},
              {"seed", run.seed},
              {"scan_steps", run.scan_steps},
              {"phi_min", run.phi_min},
              {"phi_max", run.phi_max},
              {"e_min_pj", run.e_min_pj},
              {"e_max_pj", run.e_max_pj},
              {"sweep_steps", run.sweep_steps}};
  return j.dump(2);
}

std::uint64_t RunConfig::hash() const {
  const std::string text = to_json();
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string RunConfig::hash_hex() const {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash()));
  return buf;
}

SagnacParams sagnac_params(const RunConfig& config, char polarization) {
  if (polarization != 's' && polarization != 'p')
    throw std::invalid_argument("polarization must be 's' or 'p'");
  SagnacParams p;
  p.reflectivity = polarization == 's' ? config.sagnac.reflectivity_s
                                       : config.sagnac.reflectivity_p;
  p.kappa = config.sagnac.kappa;
  p.loop_loss = config.sagnac.loop_loss;
  p.excess_phase_noise = config.sagnac.excess_phase_noise;
  p.phase_bias = config.sagnac.phase_bias;
  return p;
}

EntanglerParams entangler_params(const RunConfig& config) {
  EntanglerParams p;
  p.splitter_reflectivity = config.entangler.splitter_reflectivity;
  p.visibility = config.entangler.visibility;
  p.eta_det = config.entangler.eta_det;
  p.relative_phase = config.entangler.relative_phase;
  p.apply_optics = config.entangler.apply_optics;
  return p;
}

AnalysisConfig analysis_config(const RunConfig& config) {
  AnalysisConfig a;
  a.center_freq_hz = config.detection.center_freq_hz;
  a.rbw_hz = config.detection.rbw_hz;
  a.electronic_level = config.detection.electronic_level;
  return a;
}

GaussianState source_beam(const RunConfig& config, char polarization) {
  const double v_plus = polarization == 's'   ? config.source.v_s_plus
                        : polarization == 'p' ? config.source.v_p_plus
                                              : throw std::invalid_argument(
                                                    "polarization must be 's' "
                                                    "or 'p'");
  const double carrier = std::sqrt(config.run.energy_pj / 2.0);
  return GaussianState::squeezed(v_plus, config.source.v_minus, 0.0,
                                 {carrier, 0.0},
                                 std::string(1, polarization));
}

}  // namespace kerrepr
