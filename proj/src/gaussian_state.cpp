#include "kerrepr/gaussian_state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace kerrepr {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kUncertaintyTol = 1e-9;
constexpr double kCarrierTol = 1e-12;

void check_labels(const std::vector<ModeLabel>& modes) {
  if (modes.empty()) throw std::invalid_argument("state needs at least one mode");
  std::unordered_set<ModeLabel> seen;
  for (const auto& m : modes) {
    if (m.empty()) throw std::invalid_argument("empty mode label");
    if (!seen.insert(m).second)
      throw std::invalid_argument("duplicate mode label: " + m);
  }
}

Eigen::Matrix2d rotation2(double angle) {
  Eigen::Matrix2d r;
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

}  // namespace

GaussianState::GaussianState(std::vector<ModeLabel> modes, Vec mean, Mat cov)
    : modes_(std::move(modes)), mean_(std::move(mean)), cov_(std::move(cov)) {
  check_labels(modes_);
  const auto dim = static_cast<Eigen::Index>(2 * modes_.size());
  if (mean_.size() != dim)
    throw std::invalid_argument("mean vector has wrong length");
  if (cov_.rows() != dim || cov_.cols() != dim)
    throw std::invalid_argument("covariance has wrong shape");
  const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
  const double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol * scale)
    throw std::invalid_argument("covariance is not symmetric");
  cov_ = ((cov_ + cov_.transpose()) / 2.0).eval();
  // roundoff in the symplectic spectrum grows with the covariance magnitude
  // (strong shears produce large entries that cancel), so the bound is
  // checked relative to the overall scale
  for (double nu : symplectic_eigenvalues(cov_)) {
    if (nu < 1.0 - kUncertaintyTol * scale)
      throw std::invalid_argument("covariance violates the uncertainty bound");
  }
}

GaussianState GaussianState::vacuum(std::size_t n_modes,
                                    std::vector<ModeLabel> labels) {
  if (labels.size() != n_modes)
    throw std::invalid_argument("label count does not match mode count");
  const auto dim = static_cast<Eigen::Index>(2 * n_modes);
  return GaussianState(std::move(labels), Vec::Zero(dim),
                       Mat::Identity(dim, dim));
}

GaussianState GaussianState::squeezed(double v_plus, double v_minus,
                                      double angle,
                                      std::complex<double> carrier,
                                      ModeLabel label) {
  if (!(v_plus > 0.0) || !(v_minus > 0.0))
    throw std::invalid_argument("quadrature variances must be positive");
  if (v_plus * v_minus < 1.0 - kUncertaintyTol)
    throw std::invalid_argument(
        "v_plus * v_minus < 1 violates the uncertainty bound");
  const Eigen::Matrix2d r = rotation2(angle);
  Eigen::Matrix2d c = r * Eigen::Vector2d(v_plus, v_minus).asDiagonal() * r.transpose();
  Vec mean(2);
  mean << 2.0 * carrier.real(), 2.0 * carrier.imag();
  return GaussianState({std::move(label)}, std::move(mean), c);
}

std::size_t GaussianState::mode_index(const ModeLabel& label) const {
  const auto it = std::find(modes_.begin(), modes_.end(), label);
  if (it == modes_.end()) throw std::out_of_range("unknown mode: " + label);
  return static_cast<std::size_t>(it - modes_.begin());
}

bool GaussianState::has_mode(const ModeLabel& label) const {
  return std::find(modes_.begin(), modes_.end(), label) != modes_.end();
}

std::complex<double> GaussianState::carrier(const ModeLabel& label) const {
  const auto k = static_cast<Eigen::Index>(2 * mode_index(label));
  return {mean_[k] / 2.0, mean_[k + 1] / 2.0};
}

double GaussianState::carrier_power(const ModeLabel& label) const {
  return std::norm(carrier(label));
}

double GaussianState::carrier_angle(const ModeLabel& label) const {
  const auto a = carrier(label);
  if (std::abs(a) < kCarrierTol)
    throw std::runtime_error("carrier frame undefined: mode '" + label +
                             "' has no mean field");
  return std::arg(a);
}

double GaussianState::carrier_angle_or_zero(const ModeLabel& label) const {
  const auto a = carrier(label);
  return std::abs(a) < kCarrierTol ? 0.0 : std::arg(a);
}

GaussianState GaussianState::tensor(const GaussianState& other) const {
  std::vector<ModeLabel> modes = modes_;
  modes.insert(modes.end(), other.modes_.begin(), other.modes_.end());
  const auto na = mean_.size();
  const auto nb = other.mean_.size();
  Vec mean(na + nb);
  mean << mean_, other.mean_;
  Mat cov = Mat::Zero(na + nb, na + nb);
  cov.topLeftCorner(na, na) = cov_;
  cov.bottomRightCorner(nb, nb) = other.cov_;
  return GaussianState(std::move(modes), std::move(mean), std::move(cov));
}

GaussianState GaussianState::reduced(const std::vector<ModeLabel>& keep) const {
  std::vector<Eigen::Index> rows;
  for (const auto& label : keep) {
    const auto k = static_cast<Eigen::Index>(2 * mode_index(label));
    rows.push_back(k);
    rows.push_back(k + 1);
  }
  const auto dim = static_cast<Eigen::Index>(rows.size());
  Vec mean(dim);
  Mat cov(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    mean[r] = mean_[rows[static_cast<std::size_t>(r)]];
    for (Eigen::Index c = 0; c < dim; ++c)
      cov(r, c) = cov_(rows[static_cast<std::size_t>(r)],
                       rows[static_cast<std::size_t>(c)]);
  }
  return GaussianState(keep, std::move(mean), std::move(cov));
}

GaussianState GaussianState::relabeled(std::vector<ModeLabel> fresh) const {
  if (fresh.size() != modes_.size())
    throw std::invalid_argument("relabel count does not match mode count");
  return GaussianState(std::move(fresh), mean_, cov_);
}

double GaussianState::quadrature_variance(const Vec& coeffs) const {
  if (coeffs.size() != mean_.size())
    throw std::invalid_argument("coefficient vector has wrong length");
  return coeffs.dot(cov_ * coeffs);
}

Eigen::Matrix2d GaussianState::carrier_frame_cov(const ModeLabel& label) const {
  const double theta = carrier_angle_or_zero(label);
  const auto k = static_cast<Eigen::Index>(2 * mode_index(label));
  const Eigen::Matrix2d block = cov_.block<2, 2>(k, k);
  const Eigen::Matrix2d r = rotation2(-theta);
  return r * block * r.transpose();
}

Vec GaussianState::carrier_quadrature_coeffs(const ModeLabel& label,
                                             Quadrature q) const {
  const double theta = carrier_angle_or_zero(label);
  const auto k = static_cast<Eigen::Index>(2 * mode_index(label));
  Vec c = Vec::Zero(mean_.size());
  if (q == Quadrature::Amplitude) {
    c[k] = std::cos(theta);
    c[k + 1] = std::sin(theta);
  } else {
    c[k] = -std::sin(theta);
    c[k + 1] = std::cos(theta);
  }
  return c;
}

double GaussianState::carrier_variance(const ModeLabel& label,
                                       Quadrature q) const {
  return quadrature_variance(carrier_quadrature_coeffs(label, q));
}

CarrierFrame carrier_frame(const GaussianState& state, const ModeLabel& label) {
  const double theta = state.carrier_angle(label);  // throws on zero carrier
  const auto alpha = state.carrier(label);
  const Eigen::Matrix2d cf = state.carrier_frame_cov(label);
  Vec mean(2);
  mean << 2.0 * std::abs(alpha), 0.0;
  return CarrierFrame{theta, GaussianState({label}, std::move(mean), cf)};
}

Mat symplectic_form(std::size_t n_modes) {
  const auto dim = static_cast<Eigen::Index>(2 * n_modes);
  Mat omega = Mat::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; k += 2) {
    omega(k, k + 1) = 1.0;
    omega(k + 1, k) = -1.0;
  }
  return omega;
}

std::vector<double> symplectic_eigenvalues(const Mat& cov) {
  if (cov.rows() != cov.cols() || cov.rows() % 2 != 0)
    throw std::invalid_argument("covariance must be square with even size");
  const auto n = static_cast<std::size_t>(cov.rows() / 2);
  const Mat m = symplectic_form(n) * cov;
  Eigen::EigenSolver<Mat> solver(m, /*computeEigenvectors=*/false);
  std::vector<double> mags;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k)
    mags.push_back(std::abs(solver.eigenvalues()[k]));
  // eigenvalues come in +/- i nu pairs; keep one of each
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  std::vector<double> nus;
  for (std::size_t k = 0; k < mags.size(); k += 2) nus.push_back(mags[k]);
  return nus;
}

}  // namespace kerrepr
