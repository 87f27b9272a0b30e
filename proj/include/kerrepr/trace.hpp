#ifndef KERREPR_TRACE_HPP
#define KERREPR_TRACE_HPP

#include <cstdint>
#include <string>

#include <Eigen/Dense>

namespace kerrepr {

/**
 * Two-channel detector record.  The disk format is a CSV with `# key=value`
 * headers followed by the literal column line `t_index,ch_a,ch_b`; numbers
 * are written with nine significant digits, which round-trips stably, so
 * save(load(file)) reproduces the file byte for byte.
 */
struct TraceRecord {
  double sample_rate_hz = 0.0;
  double power_a = 0.0;   ///< mean optical power on detector a, arbitrary units
  double power_b = 0.0;
  std::string label;      ///< free-form tag, single line
  std::uint64_t seed = 0; ///< RNG seed for synthetic records, 0 for measured
  Eigen::ArrayXd ch_a;    ///< photocurrent fluctuation samples
  Eigen::ArrayXd ch_b;
};

std::string serialize_trace(const TraceRecord& record);
TraceRecord parse_trace(const std::string& text);

void save_trace(const TraceRecord& record, const std::string& path);
TraceRecord load_trace(const std::string& path);

/**
 * Programmed white-noise pair synthesis.  Each sample of (ch_a, ch_b) is a
 * zero-mean Gaussian draw whose covariance realizes the normalized targets:
 * Var(a + b) / 2 = shot_level * v_sum and Var(a - b) / 2 = shot_level * v_diff.
 * Targets of (1, 1) produce an uncorrelated shot-noise reference.
 */
struct SynthesisSpec {
  double v_sum = 1.0;            ///< normalized sum-channel target, >= 0
  double v_diff = 1.0;           ///< normalized difference-channel target, >= 0
  double shot_level = 1.0;       ///< per-sample shot variance scale, > 0
  double sample_rate_hz = 21e6;
  std::size_t samples = 1u << 20;
  std::uint64_t seed = 1;
  double power_a = 1.0;
  double power_b = 1.0;
  std::string label = "synthetic";
};

TraceRecord synthesize_trace(const SynthesisSpec& spec);

}  // namespace kerrepr

#endif
