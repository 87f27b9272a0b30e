#ifndef KERREPR_INTERROGATOR_HPP
#define KERREPR_INTERROGATOR_HPP

#include <string>
#include <vector>

#include "kerrepr/gaussian_state.hpp"

namespace kerrepr {

/**
 * Indirect phase interrogation: the pair beams are re-interfered on a 50/50
 * splitter with a controllable phase on the second beam, and the amplitude
 * quadratures of the mixed outputs are detected directly.  At phase zero the
 * mixed amplitude variance carries the phase-difference information of the
 * pair, so the otherwise inaccessible phase-quadrature correlation can be
 * inferred from direct detection alone.
 */
struct InterrogationPoint {
  double phase;     ///< interrogation phase on beam b, rad
  double v_c_amp;   ///< carrier-frame amplitude variance of output c
  double v_d_amp;   ///< same for output d
  double power_c;   ///< output carrier powers, input units
  double power_d;
};

struct ScanResult {
  std::vector<InterrogationPoint> points;
  std::string to_csv() const;  ///< header phi_rad,v_c_amp,v_d_amp,power_c,power_d
};

/// Mix the pair (modes "a", "b") at one interrogation phase.  Throws
/// std::runtime_error when an output port is dark (phase near +/- pi/2 for
/// equal carriers), since direct detection loses its reference there.
InterrogationPoint interrogate(const GaussianState& pair, double phase);

/// Uniform scan over [phi_min, phi_max], inclusive; steps >= 2.
ScanResult scan_phase(const GaussianState& pair, double phi_min, double phi_max,
                      std::size_t steps);

/// Recover the phase-difference variance from one interrogation at phase
/// zero and the directly measured amplitude-sum variance:
/// v_diff_minus = 2 v_c_amp - v_sum_plus.  Throws std::runtime_error when
/// the combination is not positive (inconsistent inputs).
double infer_phase_diff_variance(double v_c_amp, double v_sum_plus);

/// Covariance between the amplitude-sum and phase-difference combinations of
/// the pair: the systematic bias of the zero-phase inference.  Zero for
/// symmetric pairs.
double interrogation_cross_term(const GaussianState& pair);

}  // namespace kerrepr

#endif
