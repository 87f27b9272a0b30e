#include "kerrepr/entangler.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kerrepr/transforms.hpp"

namespace kerrepr {

namespace {

void check_params(const EntanglerParams& p) {
  if (!(p.splitter_reflectivity > 0.0 && p.splitter_reflectivity < 1.0))
    throw std::invalid_argument("splitter reflectivity must lie in (0, 1)");
  if (!(p.visibility > 0.0 && p.visibility <= 1.0))
    throw std::invalid_argument("visibility must lie in (0, 1]");
  if (!(p.eta_det > 0.0 && p.eta_det <= 1.0))
    throw std::invalid_argument("detector efficiency must lie in (0, 1]");
  if (!std::isfinite(p.relative_phase))
    throw std::invalid_argument("relative phase must be finite");
}

using OptField = std::optional<double> VarianceSet::*;

const std::vector<std::pair<const char*, OptField>>& field_table() {
  static const std::vector<std::pair<const char*, OptField>> table = {
      {"v_a_plus", &VarianceSet::v_a_plus},
      {"v_a_plus_err", &VarianceSet::v_a_plus_err},
      {"v_a_minus", &VarianceSet::v_a_minus},
      {"v_a_minus_err", &VarianceSet::v_a_minus_err},
      {"v_b_plus", &VarianceSet::v_b_plus},
      {"v_b_plus_err", &VarianceSet::v_b_plus_err},
      {"v_b_minus", &VarianceSet::v_b_minus},
      {"v_b_minus_err", &VarianceSet::v_b_minus_err},
      {"v_sum_plus", &VarianceSet::v_sum_plus},
      {"v_sum_plus_err", &VarianceSet::v_sum_plus_err},
      {"v_sum_minus", &VarianceSet::v_sum_minus},
      {"v_sum_minus_err", &VarianceSet::v_sum_minus_err},
      {"v_diff_plus", &VarianceSet::v_diff_plus},
      {"v_diff_plus_err", &VarianceSet::v_diff_plus_err},
      {"v_diff_minus", &VarianceSet::v_diff_minus},
      {"v_diff_minus_err", &VarianceSet::v_diff_minus_err},
  };
  return table;
}

}  // namespace

std::string VarianceSet::to_json() const {
  nlohmann::ordered_json j;
  // emit sorted for stable artifacts
  std::map<std::string, double> present;
  for (const auto& [key, member] : field_table())
    if (this->*member) present[key] = *(this->*member);
  for (const auto& [key, value] : present) j[key] = value;
  return j.dump(2);
}

VarianceSet VarianceSet::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("variance set is not valid JSON: ") +
                                e.what());
  }
  if (!j.is_object())
    throw std::invalid_argument("variance set must be a JSON object");
  VarianceSet out;
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const auto& [name, member] : field_table()) {
      if (key == name) {
        if (!value.is_number())
          throw std::invalid_argument("variance entry " + key +
                                      " must be a number");
        out.*member = value.get<double>();
        known = true;
        break;
      }
    }
    if (!known)
      throw std::invalid_argument("unknown variance entry: " + key);
  }
  return out;
}

GaussianState entangle(const GaussianState& first, const GaussianState& second,
                       const EntanglerParams& params) {
  check_params(params);
  if (first.mode_count() != 1 || second.mode_count() != 1)
    throw std::invalid_argument("entangle takes two single-mode beams");

  GaussianState a = first.relabeled({"a"});
  GaussianState b = second.relabeled({"b"});
  const bool had_carrier =
      a.carrier_power("a") > 0.0 || b.carrier_power("b") > 0.0;

  if (params.apply_optics) {
    const double eta_vis = params.visibility * params.visibility;
    a = apply_loss(a, "a", eta_vis);
    b = apply_loss(b, "b", eta_vis);
  }
  GaussianState pair = a.tensor(b);
  const double refl = params.apply_optics ? params.splitter_reflectivity : 0.5;
  pair = apply_beamsplitter(pair, "a", "b", refl, params.relative_phase);
  if (params.apply_optics) {
    pair = apply_loss(pair, "a", params.eta_det);
    pair = apply_loss(pair, "b", params.eta_det);
  }

  if (had_carrier) {
    const double total = pair.carrier_power("a") + pair.carrier_power("b");
    const double floor = 1e-9 * total;
    if (pair.carrier_power("a") < floor || pair.carrier_power("b") < floor)
      throw std::runtime_error(
          "entangler output port is dark: carrier frame undefined");
  }
  return pair;
}

VarianceSet output_variances(const GaussianState& pair) {
  if (!pair.has_mode("a") || !pair.has_mode("b") || pair.mode_count() != 2)
    throw std::invalid_argument("expected a two-mode pair with modes a and b");
  VarianceSet out;
  const Vec ap = pair.carrier_quadrature_coeffs("a", Quadrature::Amplitude);
  const Vec am = pair.carrier_quadrature_coeffs("a", Quadrature::Phase);
  const Vec bp = pair.carrier_quadrature_coeffs("b", Quadrature::Amplitude);
  const Vec bm = pair.carrier_quadrature_coeffs("b", Quadrature::Phase);
  out.v_a_plus = pair.quadrature_variance(ap);
  out.v_a_minus = pair.quadrature_variance(am);
  out.v_b_plus = pair.quadrature_variance(bp);
  out.v_b_minus = pair.quadrature_variance(bm);
  out.v_sum_plus = pair.quadrature_variance(ap + bp) / 2.0;
  out.v_sum_minus = pair.quadrature_variance(am + bm) / 2.0;
  out.v_diff_plus = pair.quadrature_variance(ap - bp) / 2.0;
  out.v_diff_minus = pair.quadrature_variance(am - bm) / 2.0;
  return out;
}

}  // namespace kerrepr
