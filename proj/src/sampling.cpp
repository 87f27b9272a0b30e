#include "kerrepr/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace kerrepr {

double NormalSampler::operator()() {
  if (have_cached_) {
    have_cached_ = false;
    return cached_;
  }
  // 53-bit mantissa draws; u1 in (0, 1] keeps the log finite
  const double u1 = 1.0 - std::ldexp(static_cast<double>(engine_() >> 11), -53);
  const double u2 = std::ldexp(static_cast<double>(engine_() >> 11), -53);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  cached_ = radius * std::sin(angle);
  have_cached_ = true;
  return radius * std::cos(angle);
}

Mat mvnormal_samples(const Mat& cov, std::size_t n, std::uint64_t seed) {
  if (cov.rows() != cov.cols())
    throw std::invalid_argument("covariance must be square");
  const double asym = (cov - cov.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9)
    throw std::invalid_argument("covariance must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> eig(cov);
  if (eig.info() != Eigen::Success)
    throw std::invalid_argument("eigendecomposition of covariance failed");
  Vec vals = eig.eigenvalues();
  for (Eigen::Index k = 0; k < vals.size(); ++k) {
    if (vals[k] < -1e-9)
      throw std::invalid_argument(
          "covariance is not positive semidefinite (upstream bug?)");
    vals[k] = std::sqrt(std::max(vals[k], 0.0));
  }
  const Mat root = eig.eigenvectors() * vals.asDiagonal();
  NormalSampler draw(seed);
  const Eigen::Index dim = cov.rows();
  Mat out(static_cast<Eigen::Index>(n), dim);
  Vec z(dim);
  for (Eigen::Index row = 0; row < out.rows(); ++row) {
    for (Eigen::Index k = 0; k < dim; ++k) z[k] = draw();
    out.row(row) = (root * z).transpose();
  }
  return out;
}

Mat sample_fluctuations(const GaussianState& state, std::size_t n,
                        std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("need at least one sample");
  return mvnormal_samples(state.cov(), n, seed);
}

Mat sample_covariance(const Mat& samples) {
  const Eigen::Index n = samples.rows();
  if (n < 2) throw std::invalid_argument("need at least two samples");
  const Eigen::RowVectorXd mean = samples.colwise().mean();
  const Mat centered = samples.rowwise() - mean;
  return centered.transpose() * centered / static_cast<double>(n - 1);
}

}  // namespace kerrepr
