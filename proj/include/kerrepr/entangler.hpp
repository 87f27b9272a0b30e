#ifndef KERREPR_ENTANGLER_HPP
#define KERREPR_ENTANGLER_HPP

#include <optional>
#include <string>

#include "kerrepr/gaussian_state.hpp"

namespace kerrepr {

/**
 * Parameters of the 50/50 entangling interferometer.  By default the
 * combination is evaluated with ideal optics: the input variances are taken
 * to be the ones observed at the detectors, so adding the real splitter and
 * efficiencies on top would count those imperfections twice.  Setting
 * `apply_optics` enables the imperfect chain for source-plane studies:
 * visibility^2 acts as an efficiency on each input, the splitter uses the
 * configured reflectivity, and each output sees the detector efficiency.
 */
struct EntanglerParams {
  double splitter_reflectivity = 0.515;  ///< power reflectivity of the real splitter
  double visibility = 0.96;              ///< interference visibility, in (0, 1]
  double eta_det = 0.92;                 ///< detector efficiency, in (0, 1]
  double relative_phase = 0.0;           ///< interference phase between the inputs, rad
  bool apply_optics = false;             ///< false: ideal 50/50, unit efficiencies
};

/**
 * Normalized quadrature variances of a beam pair.  Sum/diff entries use the
 * two-beam normalization Var(x_a +/- x_b) / 2 so uncorrelated vacuum gives 1.
 * Absent entries mean "not measured"; errors accompany measured analyses.
 */
struct VarianceSet {
  std::optional<double> v_a_plus, v_a_minus;
  std::optional<double> v_b_plus, v_b_minus;
  std::optional<double> v_sum_plus, v_sum_minus;
  std::optional<double> v_diff_plus, v_diff_minus;
  std::optional<double> v_a_plus_err, v_a_minus_err;
  std::optional<double> v_b_plus_err, v_b_minus_err;
  std::optional<double> v_sum_plus_err, v_sum_minus_err;
  std::optional<double> v_diff_plus_err, v_diff_minus_err;

  std::string to_json() const;             ///< present fields only, sorted keys
  static VarianceSet from_json(const std::string& text);
};

/// Combine two single-mode beams on the entangling splitter.  The result is
/// a two-mode state with modes "a" and "b" (slot order: first input, second
/// input).  Throws std::runtime_error if the inputs carried power but one
/// output port came out dark (carrier frame undefined there).
GaussianState entangle(const GaussianState& first, const GaussianState& second,
                       const EntanglerParams& params = {});

/// Carrier-frame variances of a two-mode pair state with modes "a" and "b":
/// per-beam amplitude/phase plus the four sum/diff combinations.
VarianceSet output_variances(const GaussianState& pair);

}  // namespace kerrepr

#endif
