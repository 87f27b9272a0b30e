#ifndef KERREPR_CRITERIA_HPP
#define KERREPR_CRITERIA_HPP

#include <optional>
#include <string>

#include "kerrepr/entangler.hpp"
#include "kerrepr/gaussian_state.hpp"

namespace kerrepr {

/// Sum criterion for a beam pair: v_sum_plus + v_diff_minus.  Values below 2
/// certify nonseparability of the pair.
double nonseparability(double v_sum_plus, double v_diff_minus);

/// Unity-gain EPR product: the two conditional variances 2 v_sum_plus and
/// 2 v_diff_minus multiplied, i.e. 4 v_sum_plus v_diff_minus.  Below 1 the
/// pair shows the EPR paradox.
double epr_product_unity_gain(double v_sum_plus, double v_diff_minus);

/// Optimal-gain conditional variance V(t|r) = V_t - C^2 / V_r.
double conditional_variance(double v_target, double covariance, double v_reference);

/// Conditional variance of one carrier-frame quadrature of `target` given the
/// same quadrature of `reference`, both modes of `pair`.
double conditional_variance(const GaussianState& pair, const ModeLabel& target,
                            const ModeLabel& reference, Quadrature q);

/// Coherent-state teleportation fidelity reachable with the pair as the
/// shared resource: F = 1 / sqrt((1 + v_sum_plus)(1 + v_diff_minus)).
/// Uncorrelated vacuum gives exactly 1/2, the classical boundary.
double teleportation_fidelity(double v_sum_plus, double v_diff_minus);

/// Evaluation of all criteria with first-order error propagation.
struct CriteriaReport {
  double v_sum_plus = 0.0;
  double v_diff_minus = 0.0;
  std::optional<double> v_sum_plus_err, v_diff_minus_err;

  double nonsep_sum = 0.0;       ///< < 2 certifies nonseparability
  double epr_product = 0.0;      ///< < 1 certifies the EPR paradox
  double fidelity = 0.0;         ///< > 1/2 beats classical teleportation
  std::optional<double> nonsep_sum_err, epr_product_err, fidelity_err;

  bool nonseparable = false;
  bool epr = false;
  bool beats_classical_teleportation = false;

  std::string to_json() const;
  std::string to_table() const;  ///< fixed-width text table
};

/// Build the report from measured (or simulated) variances.  Errors, when
/// present on the inputs, are propagated to every figure assuming
/// independent Gaussian uncertainties.
CriteriaReport evaluate_criteria(const VarianceSet& vars);

}  // namespace kerrepr

#endif
