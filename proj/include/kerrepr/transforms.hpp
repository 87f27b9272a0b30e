#ifndef KERREPR_TRANSFORMS_HPP
#define KERREPR_TRANSFORMS_HPP

#include "kerrepr/gaussian_state.hpp"

namespace kerrepr {

/**
 * Linear symplectic map acting on mean and covariance:
 *   mean -> S * mean + displacement,  cov -> S * cov * S^T.
 * Construction checks S * Omega * S^T = Omega to 1e-12.
 */
struct SymplecticTransform {
  Mat matrix;
  Vec displacement;

  explicit SymplecticTransform(Mat m);
  SymplecticTransform(Mat m, Vec d);

  GaussianState apply(const GaussianState& state) const;
};

/// Beamsplitter coupling modes i and j with the 90-degree reflection phase
/// convention:
///   a_out = sqrt(1-R) a_i + i sqrt(R) e^{i theta} a_j   (slot i)
///   b_out = i sqrt(R) a_i + sqrt(1-R) e^{i theta} a_j   (slot j)
/// R in [0, 1]; rel_phase theta acts on the j input.
GaussianState apply_beamsplitter(const GaussianState& state, const ModeLabel& i,
                                 const ModeLabel& j, double reflectivity,
                                 double rel_phase = 0.0);

/// Rotation of one mode's quadrature pair by phi.
GaussianState apply_phase_shift(const GaussianState& state,
                                const ModeLabel& label, double phi);

/// Linearized Kerr interaction at mean nonlinear phase Phi: in the mode's
/// carrier frame dX+ -> dX+, dX- -> dX- + 2 Phi dX+, and the whole mode
/// (mean included) rotates by Phi.  Determinant of the mode block is
/// preserved.  A carrier-free mode shears in the global frame.
GaussianState apply_kerr_shear(const GaussianState& state,
                               const ModeLabel& label, double nonlinear_phase);

/// Vacuum-coupled attenuation with transmission eta in [0, 1]:
/// mode block -> eta C + (1-eta) I, cross blocks scale by sqrt(eta),
/// mean scales by sqrt(eta).
GaussianState apply_loss(const GaussianState& state, const ModeLabel& label,
                         double transmission);

/// Classical noise added to the carrier-frame phase quadrature of one mode
/// (covariance grows by `amount` along that axis).
GaussianState add_phase_noise(const GaussianState& state,
                              const ModeLabel& label, double amount);

/// Symplectic matrices used by the maps above, exposed for verification.
Mat beamsplitter_symplectic(double reflectivity, double rel_phase);
Mat phase_shift_symplectic(double phi);
Mat kerr_shear_symplectic(double carrier_angle, double nonlinear_phase);

}  // namespace kerrepr

#endif
