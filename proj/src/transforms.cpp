#include "kerrepr/transforms.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace kerrepr {

namespace {

constexpr double kSymplecticTol = 1e-12;

Eigen::Matrix2d realify(std::complex<double> u) {
  // a'_k = sum_j U_kj a_j acts on (X+, X-) as [[Re u, -Im u], [Im u, Re u]]
  Eigen::Matrix2d m;
  m << u.real(), -u.imag(), u.imag(), u.real();
  return m;
}

Eigen::Matrix2d rotation2(double angle) { return realify(std::polar(1.0, angle)); }

/// Expand a 4x4 two-mode block (ordered [mode i, mode j]) into the full
/// 2n x 2n transform acting as identity elsewhere.
Mat embed_pair(const Eigen::Matrix4d& s2, std::size_t n, std::size_t i,
               std::size_t j) {
  Mat s = Mat::Identity(static_cast<Eigen::Index>(2 * n),
                        static_cast<Eigen::Index>(2 * n));
  const auto bi = static_cast<Eigen::Index>(2 * i);
  const auto bj = static_cast<Eigen::Index>(2 * j);
  s.block<2, 2>(bi, bi) = s2.block<2, 2>(0, 0);
  s.block<2, 2>(bi, bj) = s2.block<2, 2>(0, 2);
  s.block<2, 2>(bj, bi) = s2.block<2, 2>(2, 0);
  s.block<2, 2>(bj, bj) = s2.block<2, 2>(2, 2);
  return s;
}

Mat embed_single(const Eigen::Matrix2d& s1, std::size_t n, std::size_t i) {
  Mat s = Mat::Identity(static_cast<Eigen::Index>(2 * n),
                        static_cast<Eigen::Index>(2 * n));
  s.block<2, 2>(static_cast<Eigen::Index>(2 * i),
                static_cast<Eigen::Index>(2 * i)) = s1;
  return s;
}

}  // namespace

SymplecticTransform::SymplecticTransform(Mat m)
    : SymplecticTransform(std::move(m), Vec()) {}

SymplecticTransform::SymplecticTransform(Mat m, Vec d)
    : matrix(std::move(m)), displacement(std::move(d)) {
  if (matrix.rows() != matrix.cols() || matrix.rows() % 2 != 0)
    throw std::invalid_argument("symplectic matrix must be square, even size");
  if (displacement.size() == 0) displacement = Vec::Zero(matrix.rows());
  if (displacement.size() != matrix.rows())
    throw std::invalid_argument("displacement has wrong length");
  const Mat omega = symplectic_form(static_cast<std::size_t>(matrix.rows() / 2));
  const double defect =
      (matrix * omega * matrix.transpose() - omega).cwiseAbs().maxCoeff();
  if (defect > kSymplecticTol)
    throw std::invalid_argument("matrix is not symplectic");
}

GaussianState SymplecticTransform::apply(const GaussianState& state) const {
  if (matrix.rows() != state.mean().size())
    throw std::invalid_argument("transform size does not match state");
  Vec mean = matrix * state.mean() + displacement;
  Mat cov = matrix * state.cov() * matrix.transpose();
  return GaussianState(state.modes(), std::move(mean), std::move(cov));
}

Mat beamsplitter_symplectic(double reflectivity, double rel_phase) {
  if (!(reflectivity >= 0.0 && reflectivity <= 1.0))
    throw std::invalid_argument("reflectivity must lie in [0, 1]");
  const double t = std::sqrt(1.0 - reflectivity);
  const double r = std::sqrt(reflectivity);
  const std::complex<double> i_unit(0.0, 1.0);
  const std::complex<double> ph = std::polar(1.0, rel_phase);
  Eigen::Matrix4d s;
  s.block<2, 2>(0, 0) = realify(t);
  s.block<2, 2>(0, 2) = realify(i_unit * r * ph);
  s.block<2, 2>(2, 0) = realify(i_unit * r);
  s.block<2, 2>(2, 2) = realify(t * ph);
  return s;
}

Mat phase_shift_symplectic(double phi) { return rotation2(phi); }

Mat kerr_shear_symplectic(double carrier_angle, double nonlinear_phase) {
  Eigen::Matrix2d shear = Eigen::Matrix2d::Identity();
  shear(1, 0) = 2.0 * nonlinear_phase;
  return rotation2(carrier_angle + nonlinear_phase) * shear *
         rotation2(-carrier_angle);
}

GaussianState apply_beamsplitter(const GaussianState& state, const ModeLabel& i,
                                 const ModeLabel& j, double reflectivity,
                                 double rel_phase) {
  const std::size_t ki = state.mode_index(i);
  const std::size_t kj = state.mode_index(j);
  if (ki == kj) throw std::invalid_argument("beamsplitter needs two modes");
  const Eigen::Matrix4d s2 = beamsplitter_symplectic(reflectivity, rel_phase);
  return SymplecticTransform(embed_pair(s2, state.mode_count(), ki, kj))
      .apply(state);
}

GaussianState apply_phase_shift(const GaussianState& state,
                                const ModeLabel& label, double phi) {
  const std::size_t k = state.mode_index(label);
  return SymplecticTransform(
             embed_single(rotation2(phi), state.mode_count(), k))
      .apply(state);
}

GaussianState apply_kerr_shear(const GaussianState& state,
                               const ModeLabel& label, double nonlinear_phase) {
  const std::size_t k = state.mode_index(label);
  const double theta = state.carrier_angle_or_zero(label);
  const Eigen::Matrix2d block = kerr_shear_symplectic(theta, nonlinear_phase);
  const Mat s = embed_single(block, state.mode_count(), k);
  // the shear acts on fluctuations only; the mean field just picks up the
  // nonlinear phase as a rotation
  const auto bk = static_cast<Eigen::Index>(2 * k);
  Vec mean = state.mean();
  mean.segment<2>(bk) = rotation2(nonlinear_phase) * mean.segment<2>(bk);
  Mat cov = s * state.cov() * s.transpose();
  return GaussianState(state.modes(), std::move(mean), std::move(cov));
}

GaussianState apply_loss(const GaussianState& state, const ModeLabel& label,
                         double transmission) {
  if (!(transmission >= 0.0 && transmission <= 1.0))
    throw std::invalid_argument("transmission must lie in [0, 1]");
  const auto k = static_cast<Eigen::Index>(2 * state.mode_index(label));
  const double root = std::sqrt(transmission);
  Vec mean = state.mean();
  mean.segment<2>(k) *= root;
  Mat cov = state.cov();
  const Eigen::Index dim = cov.rows();
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      const bool in_r = (r == k || r == k + 1);
      const bool in_c = (c == k || c == k + 1);
      if (in_r && in_c)
        cov(r, c) *= transmission;
      else if (in_r || in_c)
        cov(r, c) *= root;
    }
  }
  cov(k, k) += 1.0 - transmission;
  cov(k + 1, k + 1) += 1.0 - transmission;
  return GaussianState(state.modes(), std::move(mean), std::move(cov));
}

GaussianState add_phase_noise(const GaussianState& state,
                              const ModeLabel& label, double amount) {
  if (amount < 0.0) throw std::invalid_argument("noise must be non-negative");
  const double theta = state.carrier_angle_or_zero(label);
  const auto k = static_cast<Eigen::Index>(2 * state.mode_index(label));
  Vec axis = Vec::Zero(state.mean().size());
  axis[k] = -std::sin(theta);
  axis[k + 1] = std::cos(theta);
  Mat cov = state.cov() + amount * axis * axis.transpose();
  return GaussianState(state.modes(), state.mean(), std::move(cov));
}

}  // namespace kerrepr
