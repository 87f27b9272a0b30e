#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kerrepr/config.hpp"
#include "kerrepr/criteria.hpp"
#include "kerrepr/entangler.hpp"
#include "kerrepr/interrogator.hpp"
#include "kerrepr/log.hpp"
#include "kerrepr/sagnac.hpp"
#include "kerrepr/spectral.hpp"
#include "kerrepr/trace.hpp"

namespace {

using kerrepr::RunConfig;
using ordered_json = nlohmann::ordered_json;

constexpr double kRegionTwoOnsetPj = 130.0;
const char* const kRegionTwoWarning =
    "input energy above 130 pJ drives the loop into region II where Raman "
    "scattering, not modeled here, competes with the Kerr nonlinearity";

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<double> energy_pj;
  std::optional<std::size_t> steps;
  std::optional<double> phi_min, phi_max;
  std::optional<double> target_v_amp;
  bool from_source = false;
  std::string trace_a, trace_b, trace_shot, trace_dark;
};

RunConfig resolve_config(const Options& opt, bool steps_are_scan) {
  RunConfig cfg;
  if (!opt.config_path.empty()) cfg = RunConfig::load(opt.config_path);
  if (opt.seed) cfg.run.seed = *opt.seed;
  if (opt.energy_pj) {
    if (!(*opt.energy_pj > 0.0))
      throw std::invalid_argument("--energy-pj must be positive");
    cfg.run.energy_pj = *opt.energy_pj;
  }
  if (opt.steps) {
    if (*opt.steps < 2) throw std::invalid_argument("--steps must be at least 2");
    (steps_are_scan ? cfg.run.scan_steps : cfg.run.sweep_steps) = *opt.steps;
  }
  if (opt.phi_min) cfg.run.phi_min = *opt.phi_min;
  if (opt.phi_max) cfg.run.phi_max = *opt.phi_max;
  if (!(cfg.run.phi_min < cfg.run.phi_max))
    throw std::invalid_argument("--phi-min must be below --phi-max");
  if (opt.from_source) cfg.entangler.apply_optics = true;
  return cfg;
}

std::filesystem::path prepare_out(const Options& opt) {
  std::filesystem::path dir(opt.out_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
  std::printf("wrote %s\n", path.string().c_str());
}

std::string csv_with_echo(const RunConfig& cfg, const std::string& csv) {
  std::string line = ordered_json::parse(cfg.to_json()).dump();
  return "# config_hash=" + cfg.hash_hex() + "\n# config=" + line + "\n" + csv;
}

ordered_json artifact_base(const RunConfig& cfg) {
  ordered_json j;
  j["config_hash"] = cfg.hash_hex();
  j["config"] = ordered_json::parse(cfg.to_json());
  return j;
}

std::vector<std::string> energy_warnings(double energy_pj) {
  std::vector<std::string> warnings;
  if (energy_pj > kRegionTwoOnsetPj) {
    warnings.emplace_back(kRegionTwoWarning);
    kerrepr::log_warn(kRegionTwoWarning);
  }
  return warnings;
}

kerrepr::GaussianState entangled_pair(const RunConfig& cfg) {
  kerrepr::GaussianState s = kerrepr::source_beam(cfg, 's');
  kerrepr::GaussianState p = kerrepr::source_beam(cfg, 'p');
  return kerrepr::entangle(s, p, kerrepr::entangler_params(cfg));
}

int cmd_sweep(const Options& opt) {
  RunConfig cfg = resolve_config(opt, false);
  auto dir = prepare_out(opt);
  std::vector<std::string> warnings = energy_warnings(cfg.run.e_max_pj);
  for (char pol : {'s', 'p'}) {
    kerrepr::SweepResult sweep = kerrepr::sweep_energy(
        kerrepr::sagnac_params(cfg, pol), cfg.run.e_min_pj, cfg.run.e_max_pj,
        cfg.run.sweep_steps);
    std::string name = std::string("sweep_") + pol + ".csv";
    write_text(dir / name, csv_with_echo(cfg, sweep.to_csv()));
  }
  return 0;
}

int cmd_entangle(const Options& opt) {
  RunConfig cfg = resolve_config(opt, true);
  auto dir = prepare_out(opt);
  kerrepr::VarianceSet vars = kerrepr::output_variances(entangled_pair(cfg));
  ordered_json j = artifact_base(cfg);
  j["variances"] = ordered_json::parse(vars.to_json());
  j["warnings"] = energy_warnings(cfg.run.energy_pj);
  write_text(dir / "variances.json", j.dump(2) + "\n");
  return 0;
}

int cmd_scan_phase(const Options& opt) {
  RunConfig cfg = resolve_config(opt, true);
  auto dir = prepare_out(opt);
  energy_warnings(cfg.run.energy_pj);
  kerrepr::ScanResult scan = kerrepr::scan_phase(
      entangled_pair(cfg), cfg.run.phi_min, cfg.run.phi_max, cfg.run.scan_steps);
  write_text(dir / "scan_phase.csv", csv_with_echo(cfg, scan.to_csv()));
  return 0;
}

int cmd_analyze(const Options& opt) {
  RunConfig cfg = resolve_config(opt, true);
  auto dir = prepare_out(opt);
  if (opt.trace_a.empty() || opt.trace_shot.empty())
    throw std::invalid_argument("analyze needs --trace-a and --trace-shot");
  kerrepr::TraceRecord signal = kerrepr::load_trace(opt.trace_a);
  kerrepr::TraceRecord shot = kerrepr::load_trace(opt.trace_shot);
  std::optional<kerrepr::TraceRecord> second, dark;
  if (!opt.trace_b.empty()) second = kerrepr::load_trace(opt.trace_b);
  if (!opt.trace_dark.empty()) dark = kerrepr::load_trace(opt.trace_dark);
  kerrepr::AnalysisResult res =
      kerrepr::analyze(signal, shot, dark, second, kerrepr::analysis_config(cfg));
  for (const std::string& w : res.warnings) kerrepr::log_warn(w);
  ordered_json j = artifact_base(cfg);
  j["variances"] = ordered_json::parse(res.variances.to_json());
  j["warnings"] = res.warnings;
  j["any_clamped"] = res.any_clamped;
  write_text(dir / "analysis.json", j.dump(2) + "\n");
  return 0;
}

int cmd_criteria(const Options& opt) {
  RunConfig cfg = resolve_config(opt, true);
  auto dir = prepare_out(opt);
  kerrepr::VarianceSet vars = kerrepr::output_variances(entangled_pair(cfg));
  vars.v_sum_plus_err = cfg.uncertainty.v_sum_plus_err;
  vars.v_diff_minus_err = cfg.uncertainty.v_diff_minus_err;
  kerrepr::CriteriaReport report = kerrepr::evaluate_criteria(vars);
  ordered_json j = artifact_base(cfg);
  j["criteria"] = ordered_json::parse(report.to_json());
  j["warnings"] = energy_warnings(cfg.run.energy_pj);
  write_text(dir / "criteria.json", j.dump(2) + "\n");
  std::printf("%s", report.to_table().c_str());
  return 0;
}

int cmd_calibrate(const Options& opt) {
  RunConfig cfg = resolve_config(opt, true);
  auto dir = prepare_out(opt);
  double target_v = opt.target_v_amp.value_or(cfg.source.v_p_plus);
  kerrepr::SagnacParams params = kerrepr::sagnac_params(cfg, 'p');
  kerrepr::CalibrationResult fit =
      kerrepr::calibrate_kappa(params, cfg.run.energy_pj, target_v);
  ordered_json j = artifact_base(cfg);
  j["calibration"] = {{"kappa", fit.kappa},
                      {"achieved_energy_pj", fit.achieved_energy},
                      {"achieved_v_amp", fit.achieved_v_amp},
                      {"on_target", fit.on_target}};
  j["fragment"] = {{"sagnac", {{"kappa", fit.kappa}}}};
  j["warnings"] = energy_warnings(cfg.run.energy_pj);
  write_text(dir / "calibration.json", j.dump(2) + "\n");
  return 0;
}

void attach_common(CLI::App* sub, Options& opt) {
  sub->add_option("--config", opt.config_path, "JSON configuration file");
  sub->add_option("--out", opt.out_dir, "output directory (default .)");
  sub->add_option("--seed", opt.seed, "random seed recorded in the config echo");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fibre Kerr squeezing and entanglement toolchain"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* sweep = app.add_subcommand(
      "sweep", "energy sweep of the loop squeezer, one CSV per polarization");
  attach_common(sweep, opt);
  sweep->add_option("--steps", opt.steps, "energy grid points");

  CLI::App* entangle = app.add_subcommand(
      "entangle", "variances of the entangled pair as JSON");
  attach_common(entangle, opt);
  entangle->add_option("--energy-pj", opt.energy_pj, "pulse energy, pJ");
  entangle->add_flag("--from-source", opt.from_source,
                     "apply splitter, visibility, and detector imperfections");

  CLI::App* scan = app.add_subcommand(
      "scan-phase", "interrogator phase scan as CSV");
  attach_common(scan, opt);
  scan->add_option("--energy-pj", opt.energy_pj, "pulse energy, pJ");
  scan->add_option("--steps", opt.steps, "phase grid points");
  scan->add_option("--phi-min", opt.phi_min, "scan start, rad");
  scan->add_option("--phi-max", opt.phi_max, "scan end, rad");
  scan->add_flag("--from-source", opt.from_source,
                 "apply splitter, visibility, and detector imperfections");

  CLI::App* analyze = app.add_subcommand(
      "analyze", "shot-normalized band variances of trace files as JSON");
  attach_common(analyze, opt);
  analyze->add_option("--trace-a", opt.trace_a, "signal trace file");
  analyze->add_option("--trace-b", opt.trace_b, "independent second signal trace");
  analyze->add_option("--trace-shot", opt.trace_shot, "shot-noise calibration trace");
  analyze->add_option("--trace-dark", opt.trace_dark, "detector dark trace");

  CLI::App* criteria = app.add_subcommand(
      "criteria", "entanglement criteria report as JSON plus a text table");
  attach_common(criteria, opt);
  criteria->add_option("--energy-pj", opt.energy_pj, "pulse energy, pJ");
  criteria->add_flag("--from-source", opt.from_source,
                     "apply splitter, visibility, and detector imperfections");

  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "fit kappa to the squeezing anchor, emit a config fragment");
  attach_common(calibrate, opt);
  calibrate->add_option("--energy-pj", opt.energy_pj, "anchor energy, pJ");
  calibrate->add_option("--target-v-amp", opt.target_v_amp,
                        "anchor amplitude variance (default: p-beam squeezing)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    nlohmann::json err{{"error", "usage"}, {"message", e.what()}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 1;
  }

  try {
    if (sweep->parsed()) return cmd_sweep(opt);
    if (entangle->parsed()) return cmd_entangle(opt);
    if (scan->parsed()) return cmd_scan_phase(opt);
    if (analyze->parsed()) return cmd_analyze(opt);
    if (criteria->parsed()) return cmd_criteria(opt);
    if (calibrate->parsed()) return cmd_calibrate(opt);
  } catch (const std::invalid_argument& e) {
    nlohmann::json err{{"error", "validation"}, {"message", e.what()}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 1;
  } catch (const std::exception& e) {
    nlohmann::json err{{"error", "runtime"}, {"message", e.what()}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 2;
  }
  return 0;
}
