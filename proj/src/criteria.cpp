#include "kerrepr/criteria.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace kerrepr {

namespace {

void check_variances(double v_sum_plus, double v_diff_minus) {
  if (!(v_sum_plus > 0.0) || !(v_diff_minus > 0.0))
    throw std::invalid_argument("criteria need positive variances");
}

std::string format_fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%8.4f", x);
  return buf;
}

}  // namespace

double nonseparability(double v_sum_plus, double v_diff_minus) {
  check_variances(v_sum_plus, v_diff_minus);
  return v_sum_plus + v_diff_minus;
}

double epr_product_unity_gain(double v_sum_plus, double v_diff_minus) {
  check_variances(v_sum_plus, v_diff_minus);
  return 4.0 * v_sum_plus * v_diff_minus;
}

double conditional_variance(double v_target, double covariance,
                            double v_reference) {
  if (!(v_target > 0.0) || !(v_reference > 0.0))
    throw std::invalid_argument("conditional variance needs positive variances");
  return v_target - covariance * covariance / v_reference;
}

double conditional_variance(const GaussianState& pair, const ModeLabel& target,
                            const ModeLabel& reference, Quadrature q) {
  const Vec t = pair.carrier_quadrature_coeffs(target, q);
  const Vec r = pair.carrier_quadrature_coeffs(reference, q);
  return conditional_variance(pair.quadrature_variance(t),
                              t.dot(pair.cov() * r),
                              pair.quadrature_variance(r));
}

double teleportation_fidelity(double v_sum_plus, double v_diff_minus) {
  check_variances(v_sum_plus, v_diff_minus);
  return 1.0 / std::sqrt((1.0 + v_sum_plus) * (1.0 + v_diff_minus));
}

CriteriaReport evaluate_criteria(const VarianceSet& vars) {
  if (!vars.v_sum_plus || !vars.v_diff_minus)
    throw std::invalid_argument(
        "criteria need both v_sum_plus and v_diff_minus");
  CriteriaReport rep;
  rep.v_sum_plus = *vars.v_sum_plus;
  rep.v_diff_minus = *vars.v_diff_minus;
  rep.v_sum_plus_err = vars.v_sum_plus_err;
  rep.v_diff_minus_err = vars.v_diff_minus_err;

  const double s = rep.v_sum_plus;
  const double d = rep.v_diff_minus;
  rep.nonsep_sum = nonseparability(s, d);
  rep.epr_product = epr_product_unity_gain(s, d);
  rep.fidelity = teleportation_fidelity(s, d);

  if (rep.v_sum_plus_err && rep.v_diff_minus_err) {
    const double es = *rep.v_sum_plus_err;
    const double ed = *rep.v_diff_minus_err;
    rep.nonsep_sum_err = std::sqrt(es * es + ed * ed);
    rep.epr_product_err = 4.0 * std::sqrt(d * d * es * es + s * s * ed * ed);
    // dF/dv = -F / (2 (1 + v)) for each variance
    const double fs = es / (1.0 + s);
    const double fd = ed / (1.0 + d);
    rep.fidelity_err = 0.5 * rep.fidelity * std::sqrt(fs * fs + fd * fd);
  }

  rep.nonseparable = rep.nonsep_sum < 2.0;
  rep.epr = rep.epr_product < 1.0;
  rep.beats_classical_teleportation = rep.fidelity > 0.5;
  return rep;
}

std::string CriteriaReport::to_json() const {
  nlohmann::ordered_json j;
  j["v_sum_plus"] = v_sum_plus;
  if (v_sum_plus_err) j["v_sum_plus_err"] = *v_sum_plus_err;
  j["v_diff_minus"] = v_diff_minus;
  if (v_diff_minus_err) j["v_diff_minus_err"] = *v_diff_minus_err;
  j["nonsep_sum"] = nonsep_sum;
  if (nonsep_sum_err) j["nonsep_sum_err"] = *nonsep_sum_err;
  j["epr_product"] = epr_product;
  if (epr_product_err) j["epr_product_err"] = *epr_product_err;
  j["fidelity"] = fidelity;
  if (fidelity_err) j["fidelity_err"] = *fidelity_err;
  j["nonseparable"] = nonseparable;
  j["epr"] = epr;
  j["beats_classical_teleportation"] = beats_classical_teleportation;
  return j.dump(2);
}

std::string CriteriaReport::to_table() const {
  auto line = [](const std::string& name, double value,
                 const std::optional<double>& err, const std::string& bound,
                 bool pass) {
    std::string row = "  ";
    row += name;
    row.resize(26, ' ');
    row += format_fixed(value);
    if (err) {
      row += " +/-";
      row += format_fixed(*err);
    } else {
      row += std::string(12, ' ');
    }
    row += "  ";
    row += bound;
    row.resize(58, ' ');
    row += pass ? "yes" : "no";
    row += '\n';
    return row;
  };
  std::string text;
  text += "criterion                   value         error  bound       met\n";
  text += "----------------------------------------------------------------\n";
  text += line("amplitude sum", v_sum_plus, v_sum_plus_err, "< 1", v_sum_plus < 1.0);
  text += line("phase difference", v_diff_minus, v_diff_minus_err, "< 1",
               v_diff_minus < 1.0);
  text += line("nonseparability sum", nonsep_sum, nonsep_sum_err, "< 2",
               nonseparable);
  text += line("EPR product", epr_product, epr_product_err, "< 1", epr);
  text += line("teleportation fidelity", fidelity, fidelity_err, "> 0.5",
               beats_classical_teleportation);
  return text;
}

}  // namespace kerrepr
