#ifndef KERREPR_SPECTRAL_HPP
#define KERREPR_SPECTRAL_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kerrepr/entangler.hpp"
#include "kerrepr/trace.hpp"

namespace kerrepr {

/// One Welch band-variance estimate: mean one-sided PSD over the resolution
/// band times the bandwidth, so white noise of unit per-sample variance
/// returns rbw / (fs / 2).
struct SpectralEstimate {
  double variance = 0.0;
  double stat_err = 0.0;       ///< one-sigma statistical uncertainty
  std::size_t segments = 0;    ///< Welch segments averaged
  std::size_t band_bins = 0;   ///< FFT bins inside the band
};

/// Welch estimate (Hann window, 50% overlap) of the variance of `x` inside
/// the band [f0 - rbw/2, f0 + rbw/2].
SpectralEstimate band_variance(const Eigen::ArrayXd& x, double fs, double f0,
                               double rbw);

/// The four combinations needed for pair analysis, sharing one pass of
/// per-channel FFTs: a+b, a-b, a, b.
struct PairSpectra {
  SpectralEstimate sum, diff, a, b;
};

PairSpectra pair_band_variance(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b,
                               double fs, double f0, double rbw);

/// Shot-normalized ratio with electronic-noise subtraction:
/// (raw - electronic) / (shot - electronic).  The shot reference must exceed
/// the electronic level (the calibration is unusable otherwise); a ratio
/// below `floor` is clamped there and flagged rather than returning a
/// non-positive variance.
struct NormalizedVariance {
  double value = 0.0;
  bool clamped = false;
};

NormalizedVariance subtract_electronic_noise(double raw, double shot,
                                             double electronic,
                                             double floor = 1e-3);

struct AnalysisConfig {
  double center_freq_hz = 10e6;
  double rbw_hz = 300e3;
  /// scalar electronic-noise band variance per channel; sum/diff channels
  /// see twice this value.  Prefer a dark trace when one is available.
  std::optional<double> electronic_level;
  double power_mismatch_tol = 0.05;
};

struct AnalysisResult {
  VarianceSet variances;              ///< amplitude entries with errors
  std::vector<std::string> warnings;
  bool any_clamped = false;
};

/**
 * Shot-normalized amplitude-noise analysis of a signal record against a shot
 * reference.  A power mismatch beyond the tolerance rescales the shot
 * variances linearly and warns.  Electronic noise comes from the dark record
 * when given, otherwise from the scalar config level, otherwise zero.  An
 * optional second signal record contributes an independent estimate that is
 * averaged in.
 */
AnalysisResult analyze(const TraceRecord& signal, const TraceRecord& shot,
                       const std::optional<TraceRecord>& dark = std::nullopt,
                       const std::optional<TraceRecord>& second_signal = std::nullopt,
                       const AnalysisConfig& config = {});

}  // namespace kerrepr

#endif
