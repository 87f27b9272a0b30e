#include "kerrepr/interrogator.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "kerrepr/transforms.hpp"

namespace kerrepr {

namespace {

void check_pair(const GaussianState& pair) {
  if (!pair.has_mode("a") || !pair.has_mode("b") || pair.mode_count() != 2)
    throw std::invalid_argument("expected a two-mode pair with modes a and b");
}

std::string format_g9(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

}  // namespace

InterrogationPoint interrogate(const GaussianState& pair, double phase) {
  check_pair(pair);
  if (!std::isfinite(phase))
    throw std::invalid_argument("interrogation phase must be finite");

  GaussianState mixed = apply_phase_shift(pair, "b", phase);
  mixed = apply_beamsplitter(mixed, "a", "b", 0.5);
  mixed = mixed.relabeled({"c", "d"});

  const double pc = mixed.carrier_power("c");
  const double pd = mixed.carrier_power("d");
  const double floor = 1e-9 * (pc + pd);
  if (pc < floor || pd < floor)
    throw std::runtime_error(
        "interrogator output port is dark: no carrier to detect against");

  InterrogationPoint pt;
  pt.phase = phase;
  pt.v_c_amp = mixed.carrier_variance("c", Quadrature::Amplitude);
  pt.v_d_amp = mixed.carrier_variance("d", Quadrature::Amplitude);
  pt.power_c = pc;
  pt.power_d = pd;
  return pt;
}

ScanResult scan_phase(const GaussianState& pair, double phi_min, double phi_max,
                      std::size_t steps) {
  check_pair(pair);
  if (steps < 2) throw std::invalid_argument("scan needs at least 2 steps");
  if (!(phi_min < phi_max))
    throw std::invalid_argument("scan range must satisfy phi_min < phi_max");

  ScanResult out;
  out.points.reserve(steps);
  const double span = phi_max - phi_min;
  for (std::size_t k = 0; k < steps; ++k) {
    const double phi =
        phi_min + (static_cast<double>(k) * span) / static_cast<double>(steps - 1);
    out.points.push_back(interrogate(pair, phi));
  }
  return out;
}

std::string ScanResult::to_csv() const {
  std::string text = "phi_rad,v_c_amp,v_d_amp,power_c,power_d\n";
  for (const auto& p : points) {
    text += format_g9(p.phase);
    text += ',';
    text += format_g9(p.v_c_amp);
    text += ',';
    text += format_g9(p.v_d_amp);
    text += ',';
    text += format_g9(p.power_c);
    text += ',';
    text += format_g9(p.power_d);
    text += '\n';
  }
  return text;
}

double infer_phase_diff_variance(double v_c_amp, double v_sum_plus) {
  if (!(v_c_amp > 0.0))
    throw std::invalid_argument("interrogated variance must be positive");
  if (!(v_sum_plus > 0.0))
    throw std::invalid_argument("amplitude-sum variance must be positive");
  const double inferred = 2.0 * v_c_amp - v_sum_plus;
  if (!(inferred > 0.0))
    throw std::runtime_error(
        "inferred phase-difference variance is not positive: "
        "inputs are inconsistent");
  return inferred;
}

double interrogation_cross_term(const GaussianState& pair) {
  check_pair(pair);
  const Vec sum = pair.carrier_quadrature_coeffs("a", Quadrature::Amplitude) +
                  pair.carrier_quadrature_coeffs("b", Quadrature::Amplitude);
  const Vec diff = pair.carrier_quadrature_coeffs("a", Quadrature::Phase) -
                   pair.carrier_quadrature_coeffs("b", Quadrature::Phase);
  // Cov(S, D) = s^T C d for zero-mean fluctuation combinations
  return sum.dot(pair.cov() * diff);
}

}  // namespace kerrepr
