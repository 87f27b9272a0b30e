#ifndef KERREPR_CONFIG_HPP
#define KERREPR_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "kerrepr/entangler.hpp"
#include "kerrepr/gaussian_state.hpp"
#include "kerrepr/sagnac.hpp"
#include "kerrepr/spectral.hpp"

namespace kerrepr {

/**
 * Run configuration.  Files are JSON objects with the sections below; every
 * key is optional and falls back to the defaults here, unknown keys are
 * rejected at every level.  Squeezing entries accept either a linear
 * variance (`v_s_plus`) or a decibel form (`v_s_db`, mapped through
 * 10^(-dB/10)), never both; `visibility` likewise has a `visibility_percent`
 * alternative.
 */
struct SourceConfig {
  double v_s_plus = 0.40738027780411273;  ///< 3.9 dB amplitude squeezing
  double v_p_plus = 0.38904514499428046;  ///< 4.1 dB amplitude squeezing
  double v_minus = 20.0;                  ///< anti-squeezed partner variance, ~13 dB
};

struct SagnacConfig {
  double reflectivity_s = 0.91;
  double reflectivity_p = 0.90;
  double kappa = 0.064298937;
  double loop_loss = 0.353446157;
  double excess_phase_noise = 0.0;
  double phase_bias = 0.0;
};

struct EntanglerConfig {
  double splitter_reflectivity = 0.515;
  double visibility = 0.96;
  double eta_det = 0.92;
  double relative_phase = 0.0;
  bool apply_optics = false;
};

struct DetectionConfig {
  double center_freq_hz = 10e6;
  double rbw_hz = 300e3;
  std::optional<double> electronic_level;
};

struct UncertaintyConfig {
  std::optional<double> v_sum_plus_err = 0.02;
  std::optional<double> v_diff_minus_err = 0.04;
};

struct RunSection {
  double energy_pj = 110.0;
  std::uint64_t seed = 1;
  std::size_t scan_steps = 151;
  double phi_min = -1.5;
  double phi_max = 1.5;
  double e_min_pj = 0.0;
  double e_max_pj = 200.0;
  std::size_t sweep_steps = 2001;
};

struct RunConfig {
  SourceConfig source;
  SagnacConfig sagnac;
  EntanglerConfig entangler;
  DetectionConfig detection;
  UncertaintyConfig uncertainty;
  RunSection run;

  std::string to_json() const;  ///< canonical echo: linear values, fixed order
  std::uint64_t hash() const;   ///< FNV-1a 64 over the canonical echo
  std::string hash_hex() const;

  static RunConfig from_json_text(const std::string& text);
  static RunConfig load(const std::string& path);
};

/// Loop parameters for one polarization ('s' or 'p').
SagnacParams sagnac_params(const RunConfig& config, char polarization);

EntanglerParams entangler_params(const RunConfig& config);

AnalysisConfig analysis_config(const RunConfig& config);

/// Squeezed input beam for one polarization, carrying half the pulse energy.
GaussianState source_beam(const RunConfig& config, char polarization);

}  // namespace kerrepr

#endif
