#ifndef KERREPR_SAGNAC_HPP
#define KERREPR_SAGNAC_HPP

#include <string>
#include <vector>

#include "kerrepr/gaussian_state.hpp"

namespace kerrepr {

/**
 * Fibre loop squeezer parameters.  The loop coupler splits the pulse into a
 * strong reflected arm (fraction `reflectivity`) and a weak transmitted arm;
 * both arms acquire a Kerr phase kappa * arm_energy before recombining at the
 * same coupler.
 */
struct SagnacParams {
  double reflectivity = 0.90;        ///< loop coupler reflectivity, in (0, 1)
  double kappa = 0.064298937;        ///< nonlinear phase per unit energy, rad/pJ
  double loop_loss = 0.353446157;    ///< effective intra-loop power loss, in [0, 1)
  double excess_phase_noise = 0.0;   ///< extra phase variance per rad^2 of Kerr phase
  double phase_bias = 0.0;           ///< linear interference offset, rad
};

/// One energy grid point of a squeezing sweep.
struct SweepPoint {
  double energy_pj;
  double v_amp;      ///< carrier-frame amplitude variance, shot-noise units
  double v_phase;    ///< carrier-frame phase variance
  double mean_power; ///< bright-port carrier power, input-energy units
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::string to_csv() const;  ///< header energy_pJ,v_amp,v_phase,mean_power
};

struct CalibrationResult {
  double kappa;            ///< fitted nonlinear coefficient
  double achieved_energy;  ///< first-minimum location after the fit, pJ
  double achieved_v_amp;   ///< depth at that minimum
  bool on_target;          ///< false when the model cannot reach the request
};

/// Both coupler ports after one round trip, modes "bright" and "dark"
/// ordered by carrier power.
GaussianState run_sagnac_ports(const SagnacParams& params, double energy_pj);

/// Bright-port output as a single-mode state (mode "out").
GaussianState run_sagnac(const SagnacParams& params, double energy_pj);

/// Squeezing curve over a uniform energy grid [e_min, e_max], inclusive.
SweepResult sweep_energy(const SagnacParams& params, double e_min_pj,
                         double e_max_pj, std::size_t steps);

/// Fit kappa so the first squeezing minimum lands at target_energy.  The
/// anchor is the deepest point of the first sub-unity stretch of the curve
/// (the squeezing maximum of region I); it is bracketed on a reference grid,
/// refined by golden-section search, and kappa then follows from the exact
/// (kappa, E) -> (kappa/c, cE) scaling.  The depth at the minimum is fixed
/// by the remaining parameters, so the result carries a best-effort flag
/// instead of forcing target_v_amp.
CalibrationResult calibrate_kappa(const SagnacParams& params_except_kappa,
                                  double target_energy_pj, double target_v_amp,
                                  double energy_tol_pj = 5.0,
                                  double v_amp_tol = 0.03);

}  // namespace kerrepr

#endif
