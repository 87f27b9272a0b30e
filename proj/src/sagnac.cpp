#include "kerrepr/sagnac.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "kerrepr/transforms.hpp"

namespace kerrepr {

namespace {

void check_params(const SagnacParams& p) {
  if (!(p.reflectivity > 0.0 && p.reflectivity < 1.0))
    throw std::invalid_argument("loop reflectivity must lie in (0, 1)");
  if (!(p.kappa >= 0.0))
    throw std::invalid_argument("kappa must be non-negative");
  if (!(p.loop_loss >= 0.0 && p.loop_loss < 1.0))
    throw std::invalid_argument("loop loss must lie in [0, 1)");
  if (p.excess_phase_noise < 0.0)
    throw std::invalid_argument("excess phase noise must be non-negative");
}

std::string format_g9(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

}  // namespace

GaussianState run_sagnac_ports(const SagnacParams& params, double energy_pj) {
  check_params(params);
  if (energy_pj < 0.0) throw std::invalid_argument("pulse energy must be >= 0");

  // carrier amplitude normalized so |alpha|^2 equals the pulse energy in pJ
  const double alpha = std::sqrt(energy_pj);
  GaussianState state =
      GaussianState::squeezed(1.0, 1.0, 0.0, alpha, "weak")
          .tensor(GaussianState::vacuum(1, {"strong"}));

  // coupler: transmitted fraction stays in the "weak" slot, the reflected
  // (strong) fraction lands in the former vacuum slot
  state = apply_beamsplitter(state, "weak", "strong", params.reflectivity);

  const double phi_weak = params.kappa * (1.0 - params.reflectivity) * energy_pj;
  const double phi_strong = params.kappa * params.reflectivity * energy_pj;
  state = apply_kerr_shear(state, "weak", phi_weak);
  state = apply_kerr_shear(state, "strong", phi_strong);

  if (params.excess_phase_noise > 0.0) {
    state = add_phase_noise(state, "weak",
                            params.excess_phase_noise * phi_weak * phi_weak);
    state = add_phase_noise(state, "strong",
                            params.excess_phase_noise * phi_strong * phi_strong);
  }

  if (params.phase_bias != 0.0)
    state = apply_phase_shift(state, "strong", params.phase_bias);

  if (params.loop_loss > 0.0) {
    state = apply_loss(state, "weak", 1.0 - params.loop_loss);
    state = apply_loss(state, "strong", 1.0 - params.loop_loss);
  }

  state = apply_beamsplitter(state, "weak", "strong", params.reflectivity);

  const bool weak_slot_bright =
      state.carrier_power("weak") >= state.carrier_power("strong");
  const GaussianState ordered =
      weak_slot_bright ? state.reduced({"weak", "strong"})
                       : state.reduced({"strong", "weak"});
  return ordered.relabeled({"bright", "dark"});
}

GaussianState run_sagnac(const SagnacParams& params, double energy_pj) {
  return run_sagnac_ports(params, energy_pj)
      .reduced({"bright"})
      .relabeled({"out"});
}

SweepResult sweep_energy(const SagnacParams& params, double e_min_pj,
                         double e_max_pj, std::size_t steps) {
  check_params(params);
  if (!(e_min_pj >= 0.0 && e_min_pj < e_max_pj))
    throw std::invalid_argument("need 0 <= e_min < e_max");
  if (steps < 2) throw std::invalid_argument("need at least two grid points");

  SweepResult result;
  result.points.resize(steps);
  const double span = e_max_pj - e_min_pj;
  auto evaluate = [&](std::size_t k) {
    const double e =
        e_min_pj + (static_cast<double>(k) * span) / static_cast<double>(steps - 1);
    const GaussianState out = run_sagnac(params, e);
    SweepPoint& pt = result.points[k];
    pt.energy_pj = e;
    pt.v_amp = out.carrier_variance("out", Quadrature::Amplitude);
    pt.v_phase = out.carrier_variance("out", Quadrature::Phase);
    pt.mean_power = out.carrier_power("out");
  };

  // grid points are independent and land at fixed indices, so a bounded
  // worker pool changes nothing about the output
  const std::size_t hw = std::thread::hardware_concurrency();
  const std::size_t workers =
      std::min<std::size_t>(steps, std::clamp<std::size_t>(hw, 1, 8));
  if (workers < 2) {
    for (std::size_t k = 0; k < steps; ++k) evaluate(k);
    return result;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next.fetch_add(1); k < steps; k = next.fetch_add(1))
        evaluate(k);
    });
  }
  for (std::thread& t : pool) t.join();
  return result;
}

std::string SweepResult::to_csv() const {
  std::string csv = "energy_pJ,v_amp,v_phase,mean_power\n";
  for (const SweepPoint& pt : points) {
    csv += format_g9(pt.energy_pj);
    csv += ',';
    csv += format_g9(pt.v_amp);
    csv += ',';
    csv += format_g9(pt.v_phase);
    csv += ',';
    csv += format_g9(pt.mean_power);
    csv += '\n';
  }
  return csv;
}

namespace {

double v_amp_at(const SagnacParams& params, double energy_pj) {
  return run_sagnac(params, energy_pj)
      .carrier_variance("out", Quadrature::Amplitude);
}

/// Golden-section minimization on a bracketing interval.
double golden_min(const SagnacParams& params, double lo, double hi) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = v_amp_at(params, c);
  double fd = v_amp_at(params, d);
  while (b - a > 1e-10 * (std::abs(b) + 1.0)) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = v_amp_at(params, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = v_amp_at(params, d);
    }
  }
  return (a + b) / 2.0;
}

}  // namespace

CalibrationResult calibrate_kappa(const SagnacParams& params_except_kappa,
                                  double target_energy_pj, double target_v_amp,
                                  double energy_tol_pj, double v_amp_tol) {
  check_params(params_except_kappa);
  if (!(target_energy_pj > 0.0))
    throw std::invalid_argument("target energy must be positive");
  if (!(target_v_amp > 0.0 && target_v_amp < 1.0))
    throw std::invalid_argument(
        "target v_amp must lie in (0, 1): no squeezing to calibrate against");

  // Reference curve at kappa = 1: the state depends on kappa and E only
  // through their product, so the energy axis doubles as a total-phase axis.
  SagnacParams ref = params_except_kappa;
  ref.kappa = 1.0;
  const double phi_max = 25.0;
  const std::size_t grid = 2501;

  // Anchor on the deepest point of the first sub-unity stretch (the
  // squeezing maximum of the first region), not on the first local dip:
  // the first region can contain a shallow satellite dip ahead of the
  // actual squeezing maximum.
  const double step = phi_max / static_cast<double>(grid - 1);
  std::vector<double> v(grid);
  for (std::size_t k = 0; k < grid; ++k)
    v[k] = v_amp_at(ref, static_cast<double>(k) * step);
  // strict sub-unity with a roundoff guard: transform chains can return
  // 1 - O(eps) at zero energy
  const double sub_unity = 1.0 - 1e-9;
  std::size_t onset = 0;
  while (onset < grid && !(v[onset] < sub_unity)) ++onset;
  double phi_first = -1.0;
  if (onset < grid) {
    std::size_t end = onset;
    while (end < grid && v[end] < sub_unity) ++end;
    std::size_t best = onset;
    for (std::size_t k = onset; k < end; ++k)
      if (v[k] < v[best]) best = k;
    const double lo = best == 0 ? 0.0 : static_cast<double>(best - 1) * step;
    const double hi = std::min(phi_max, static_cast<double>(best + 1) * step);
    phi_first = golden_min(ref, lo, hi);
  }

  CalibrationResult result{};
  if (phi_first < 0.0) {
    // no squeezing dip anywhere on the reference curve
    result.kappa = params_except_kappa.kappa;
    result.achieved_energy = 0.0;
    result.achieved_v_amp = 1.0;
    result.on_target = false;
    return result;
  }

  result.kappa = phi_first / target_energy_pj;
  SagnacParams fitted = params_except_kappa;
  fitted.kappa = result.kappa;
  result.achieved_energy = golden_min(fitted, 0.9 * target_energy_pj,
                                      1.1 * target_energy_pj);
  result.achieved_v_amp = v_amp_at(fitted, result.achieved_energy);
  result.on_target =
      std::abs(result.achieved_energy - target_energy_pj) <= energy_tol_pj &&
      std::abs(result.achieved_v_amp - target_v_amp) <= v_amp_tol;
  return result;
}

}  // namespace kerrepr
