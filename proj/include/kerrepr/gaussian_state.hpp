#ifndef KERREPR_GAUSSIAN_STATE_HPP
#define KERREPR_GAUSSIAN_STATE_HPP

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace kerrepr {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using ModeLabel = std::string;

/// Which quadrature of a mode, relative to some reference frame.
enum class Quadrature { Amplitude, Phase };

/**
 * Gaussian state over a set of labelled optical modes.
 *
 * Quadrature convention: X+ = A† + A, X- = i(A† - A), so a vacuum mode has
 * unit variance in both quadratures and a coherent amplitude alpha maps to
 * the mean pair (2 Re alpha, 2 Im alpha).  The mean vector and covariance
 * matrix are stored in the interleaved ordering (X+_1, X-_1, X+_2, X-_2, ...).
 *
 * Construction validates symmetry of the covariance (1e-12) and the
 * uncertainty principle: all symplectic eigenvalues >= 1 - 1e-9.
 */
class GaussianState {
public:
  GaussianState(std::vector<ModeLabel> modes, Vec mean, Mat cov);

  /// n-mode vacuum: zero mean, identity covariance.
  static GaussianState vacuum(std::size_t n_modes, std::vector<ModeLabel> labels);

  /// Single-mode (possibly impure) squeezed state with principal-axis
  /// variances v_plus/v_minus rotated by `angle`, displaced to `carrier`.
  /// Requires v_plus * v_minus >= 1.
  static GaussianState squeezed(double v_plus, double v_minus, double angle,
                                std::complex<double> carrier,
                                ModeLabel label = "m");

  std::size_t mode_count() const { return modes_.size(); }
  const std::vector<ModeLabel>& modes() const { return modes_; }
  std::size_t mode_index(const ModeLabel& label) const;  // throws std::out_of_range
  bool has_mode(const ModeLabel& label) const;

  const Vec& mean() const { return mean_; }
  const Mat& cov() const { return cov_; }

  /// Mean field of one mode as a complex amplitude alpha.
  std::complex<double> carrier(const ModeLabel& label) const;
  /// |alpha|^2 of one mode.
  double carrier_power(const ModeLabel& label) const;

  /// Phase angle of the mean field.  Throws if the carrier vanishes.
  double carrier_angle(const ModeLabel& label) const;
  /// Same, but returns 0 for a carrier-free mode (vacuum convention).
  double carrier_angle_or_zero(const ModeLabel& label) const;

  /// Tensor product; mode labels must stay distinct.
  GaussianState tensor(const GaussianState& other) const;

  /// Marginal state of a subset of modes (Gaussian reduction).
  GaussianState reduced(const std::vector<ModeLabel>& keep) const;

  GaussianState relabeled(std::vector<ModeLabel> fresh) const;

  /// Variance of the linear combination sum_k coeffs[k] * quadrature_k.
  /// coeffs must have length 2 * mode_count().
  double quadrature_variance(const Vec& coeffs) const;

  /// 2x2 covariance block of one mode, rotated into its carrier frame
  /// (X+ along the mean field; angle 0 when the carrier vanishes).
  Eigen::Matrix2d carrier_frame_cov(const ModeLabel& label) const;

  /// Length-2n coefficient vector selecting one carrier-frame quadrature of
  /// one mode; composable into quadrature_variance() combinations.
  Vec carrier_quadrature_coeffs(const ModeLabel& label, Quadrature q) const;

  /// Carrier-frame variance of one quadrature of one mode.
  double carrier_variance(const ModeLabel& label, Quadrature q) const;

private:
  std::vector<ModeLabel> modes_;
  Vec mean_;
  Mat cov_;
};

/// Result of rotating a mode into its own carrier frame.
struct CarrierFrame {
  double angle;        ///< phase of the mean field
  GaussianState view;  ///< single-mode state with X+ aligned to the carrier
};

/// Carrier frame of one mode.  Throws std::runtime_error when the mean field
/// vanishes (frame undefined).
CarrierFrame carrier_frame(const GaussianState& state, const ModeLabel& label);

/// Symplectic eigenvalues of a covariance matrix in the (X+, X-) interleaved
/// ordering; all >= 1 for a physical state.
std::vector<double> symplectic_eigenvalues(const Mat& cov);

/// Block-diagonal standard symplectic form for n modes.
Mat symplectic_form(std::size_t n_modes);

}  // namespace kerrepr

#endif
