#ifndef KERREPR_SAMPLING_HPP
#define KERREPR_SAMPLING_HPP

#include <cstdint>
#include <random>

#include "kerrepr/gaussian_state.hpp"

namespace kerrepr {

/// Standard-normal stream over mt19937_64 (Box-Muller, no stdlib
/// distribution objects, so the byte stream is identical everywhere).
class NormalSampler {
public:
  explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}
  double operator()();

private:
  std::mt19937_64 engine_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

/// n zero-mean draws with the given covariance, one sample per row.
/// Throws std::invalid_argument when cov is not positive semidefinite.
Mat mvnormal_samples(const Mat& cov, std::size_t n, std::uint64_t seed);

/// Monte-Carlo fluctuation draws for a state (mean not added).
Mat sample_fluctuations(const GaussianState& state, std::size_t n,
                        std::uint64_t seed);

/// Unbiased sample covariance of row-stacked samples.
Mat sample_covariance(const Mat& samples);

}  // namespace kerrepr

#endif
