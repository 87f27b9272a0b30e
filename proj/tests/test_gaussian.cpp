#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "kerrepr/gaussian_state.hpp"
#include "kerrepr/sampling.hpp"
#include "kerrepr/transforms.hpp"

using namespace kerrepr;

namespace {
double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }
}  // namespace

TEST_CASE("vacuum state has identity covariance and zero mean") {
  GaussianState v = GaussianState::vacuum(3, {"a", "b", "c"});
  CHECK(v.mode_count() == 3);
  CHECK(v.mean().norm() == 0.0);
  CHECK(max_abs(v.cov() - Mat::Identity(6, 6)) == 0.0);
  CHECK(v.mode_index("b") == 1);
  CHECK(v.has_mode("c"));
  CHECK_FALSE(v.has_mode("d"));
  CHECK_THROWS_AS(v.mode_index("missing"), std::out_of_range);
  for (double nu : symplectic_eigenvalues(v.cov())) {
    CHECK(std::abs(nu - 1.0) < 1e-12);
  }
}

TEST_CASE("squeezed factory places variances and carrier") {
  GaussianState s = GaussianState::squeezed(0.4, 2.5, 0.0, {1.5, -0.5}, "m");
  CHECK(s.cov()(0, 0) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(s.cov()(1, 1) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(std::abs(s.cov()(0, 1)) < 1e-14);
  CHECK(s.mean()(0) == doctest::Approx(3.0));    // 2 Re alpha
  CHECK(s.mean()(1) == doctest::Approx(-1.0));   // 2 Im alpha
  CHECK(std::abs(s.carrier("m") - std::complex<double>(1.5, -0.5)) < 1e-12);
  CHECK(s.carrier_power("m") == doctest::Approx(2.5).epsilon(1e-12));

  // pure minimum-uncertainty state
  GaussianState pure = GaussianState::squeezed(0.25, 4.0, 0.3, {0.0, 0.0});
  auto nus = symplectic_eigenvalues(pure.cov());
  for (double nu : nus) CHECK(std::abs(nu - 1.0) < 1e-9);

  // product below the uncertainty bound is rejected
  CHECK_THROWS_AS(GaussianState::squeezed(0.5, 1.0, 0.0, {0.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(GaussianState::squeezed(-0.1, 2.0, 0.0, {0.0, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("constructor validates symmetry and physicality") {
  Mat asym(2, 2);
  asym << 1.0, 0.5, -0.5, 1.0;
  CHECK_THROWS_AS(GaussianState({"m"}, Vec::Zero(2), asym),
                  std::invalid_argument);

  CHECK_THROWS_AS(GaussianState({"m"}, Vec::Zero(2), 0.5 * Mat::Identity(2, 2)),
                  std::invalid_argument);

  // validation is scale-relative: a large physical covariance passes
  CHECK_NOTHROW(GaussianState({"m"}, Vec::Zero(2), 1e8 * Mat::Identity(2, 2)));

  // label/size mismatches
  CHECK_THROWS_AS(GaussianState({"m", "n"}, Vec::Zero(2), Mat::Identity(2, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(GaussianState({"m", "m"}, Vec::Zero(4), Mat::Identity(4, 4)),
                  std::invalid_argument);
}

TEST_CASE("symplectic eigenvalues of a thermal state") {
  auto nus = symplectic_eigenvalues(3.0 * Mat::Identity(4, 4));
  REQUIRE(nus.size() == 2);
  for (double nu : nus) CHECK(std::abs(nu - 3.0) < 1e-12);

  Mat omega = symplectic_form(2);
  CHECK(max_abs(omega + omega.transpose()) == 0.0);
  CHECK(max_abs(omega * omega.transpose() - Mat::Identity(4, 4)) == 0.0);
}

TEST_CASE("beamsplitter follows the 90 degree reflection convention") {
  Mat s = beamsplitter_symplectic(0.3, 0.0);
  Mat omega = symplectic_form(2);
  CHECK(max_abs(s * omega * s.transpose() - omega) < 1e-12);

  // carrier routing: a = 1, b = 0, R = 0.5 puts i/sqrt(2) on the second slot
  GaussianState in = GaussianState::squeezed(1.0, 1.0, 0.0, {1.0, 0.0}, "a")
                         .tensor(GaussianState::vacuum(1, {"b"}));
  GaussianState out = apply_beamsplitter(in, "a", "b", 0.5);
  CHECK(std::abs(out.carrier("a") - std::complex<double>(M_SQRT1_2, 0.0)) <
        1e-12);
  CHECK(std::abs(out.carrier("b") - std::complex<double>(0.0, M_SQRT1_2)) <
        1e-12);
  // passive: total carrier power conserved, vacuum stays vacuum
  CHECK(out.carrier_power("a") + out.carrier_power("b") ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(max_abs(out.cov() - Mat::Identity(4, 4)) < 1e-12);

  CHECK_THROWS_AS(apply_beamsplitter(in, "a", "b", 1.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_beamsplitter(in, "a", "a", 0.5),
                  std::invalid_argument);
}

TEST_CASE("equal real carriers give equal output powers at any reflectivity") {
  for (double refl : {0.1, 0.3, 0.5, 0.515, 0.9}) {
    GaussianState in =
        GaussianState::squeezed(1.0, 1.0, 0.0, {2.0, 0.0}, "a")
            .tensor(GaussianState::squeezed(1.0, 1.0, 0.0, {2.0, 0.0}, "b"));
    GaussianState out = apply_beamsplitter(in, "a", "b", refl);
    CHECK(std::abs(out.carrier_power("a") - out.carrier_power("b")) < 1e-12);
  }
}

TEST_CASE("phase shift rotates the carrier and preserves isotropic noise") {
  GaussianState in = GaussianState::squeezed(1.0, 1.0, 0.0, {1.0, 0.0}, "m");
  GaussianState out = apply_phase_shift(in, "m", M_PI / 3.0);
  CHECK(std::abs(out.carrier("m") -
                 std::polar(1.0, M_PI / 3.0)) < 1e-12);
  CHECK(max_abs(out.cov() - Mat::Identity(2, 2)) < 1e-12);
  CHECK(std::abs(out.carrier_angle("m") - M_PI / 3.0) < 1e-12);

  // squeezed noise rotates with the frame: carrier-frame view is invariant
  GaussianState sq = GaussianState::squeezed(0.4, 2.5, 0.0, {2.0, 0.0}, "m");
  GaussianState rot = apply_phase_shift(sq, "m", 0.7);
  CHECK(std::abs(rot.carrier_variance("m", Quadrature::Amplitude) - 0.4) <
        1e-12);
  CHECK(std::abs(rot.carrier_variance("m", Quadrature::Phase) - 2.5) < 1e-12);
}

TEST_CASE("kerr shear on vacuum gives the canonical sheared covariance") {
  GaussianState v = GaussianState::vacuum(1, {"m"});
  GaussianState out = apply_kerr_shear(v, "m", 0.5);
  // the shear itself, then the frame rotation by the nonlinear phase
  Mat sheared(2, 2);
  sheared << 1.0, 1.0, 1.0, 2.0;
  Eigen::Matrix2d rot;
  rot << std::cos(0.5), -std::sin(0.5), std::sin(0.5), std::cos(0.5);
  CHECK(max_abs(out.cov() - rot * sheared * rot.transpose()) < 1e-12);
  CHECK(std::abs(out.cov().determinant() - 1.0) < 1e-12);
  CHECK(std::abs(out.cov().trace() - 3.0) < 1e-12);
  CHECK(out.mean().norm() == 0.0);
}

TEST_CASE("kerr shear rotates the carrier and shears in the carrier frame") {
  const double phi = 0.37;
  GaussianState in = GaussianState::squeezed(1.0, 1.0, 0.0, {3.0, 0.0}, "m");
  GaussianState out = apply_kerr_shear(in, "m", phi);
  CHECK(std::abs(out.carrier_angle("m") - phi) < 1e-12);
  CHECK(out.carrier_power("m") == doctest::Approx(9.0).epsilon(1e-12));
  Eigen::Matrix2d frame = out.carrier_frame_cov("m");
  CHECK(frame(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(frame(0, 1) == doctest::Approx(2.0 * phi).epsilon(1e-12));
  CHECK(frame(1, 1) == doctest::Approx(1.0 + 4.0 * phi * phi).epsilon(1e-12));
  CHECK(frame.determinant() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("loss pulls variances toward vacuum and scales the mean") {
  GaussianState in = GaussianState::squeezed(0.4, 2.5, 0.0, {2.0, 0.0}, "m");
  GaussianState out = apply_loss(in, "m", 0.92);
  CHECK(std::abs(out.cov()(0, 0) - (0.92 * 0.4 + 0.08)) < 1e-12);
  CHECK(std::abs(out.cov()(1, 1) - (0.92 * 2.5 + 0.08)) < 1e-12);
  CHECK(std::abs(out.mean()(0) - std::sqrt(0.92) * 4.0) < 1e-12);

  // vacuum is the fixed point; zero transmission lands exactly on vacuum
  GaussianState vac = GaussianState::vacuum(1, {"m"});
  CHECK(max_abs(apply_loss(vac, "m", 0.3).cov() - Mat::Identity(2, 2)) <
        1e-12);
  GaussianState dead = apply_loss(in, "m", 0.0);
  CHECK(max_abs(dead.cov() - Mat::Identity(2, 2)) < 1e-12);
  CHECK(dead.mean().norm() < 1e-12);
  CHECK_THROWS_AS(apply_loss(in, "m", 1.2), std::invalid_argument);
}

TEST_CASE("phase noise grows only the carrier-frame phase quadrature") {
  GaussianState in = GaussianState::squeezed(0.4, 2.5, 0.3, {2.0, 1.0}, "m");
  GaussianState out = add_phase_noise(in, "m", 0.8);
  CHECK(std::abs(out.carrier_variance("m", Quadrature::Phase) -
                 (in.carrier_variance("m", Quadrature::Phase) + 0.8)) < 1e-12);
  CHECK(std::abs(out.carrier_variance("m", Quadrature::Amplitude) -
                 in.carrier_variance("m", Quadrature::Amplitude)) < 1e-12);
  CHECK_THROWS_AS(add_phase_noise(in, "m", -0.1), std::invalid_argument);
}

TEST_CASE("tensor, reduced, and relabeled round trip") {
  GaussianState a = GaussianState::squeezed(0.4, 2.5, 0.0, {1.0, 0.0}, "a");
  GaussianState b = GaussianState::squeezed(0.7, 1.5, 0.2, {0.0, 1.0}, "b");
  GaussianState ab = a.tensor(b);
  CHECK(ab.mode_count() == 2);
  GaussianState back = ab.reduced({"a"});
  CHECK(max_abs(back.cov() - a.cov()) < 1e-12);
  CHECK((back.mean() - a.mean()).norm() < 1e-12);
  GaussianState swapped = ab.reduced({"b", "a"});
  CHECK(swapped.modes()[0] == "b");
  CHECK(std::abs(swapped.cov()(0, 0) - b.cov()(0, 0)) < 1e-12);

  GaussianState renamed = ab.relabeled({"x", "y"});
  CHECK(renamed.has_mode("x"));
  CHECK_FALSE(renamed.has_mode("a"));
  CHECK(max_abs(renamed.cov() - ab.cov()) == 0.0);

  CHECK_THROWS_AS(a.tensor(a), std::invalid_argument);
  CHECK_THROWS_AS(ab.reduced({"zz"}), std::out_of_range);
  CHECK_THROWS_AS(ab.relabeled({"only_one"}), std::invalid_argument);
}

TEST_CASE("quadrature variance of linear combinations") {
  GaussianState v = GaussianState::vacuum(2, {"a", "b"});
  Vec coeffs = Vec::Zero(4);
  coeffs(0) = 1.0;
  coeffs(2) = 1.0;
  CHECK(v.quadrature_variance(coeffs) == doctest::Approx(2.0).epsilon(1e-14));
  Vec bad = Vec::Zero(3);
  CHECK_THROWS_AS(v.quadrature_variance(bad), std::invalid_argument);

  GaussianState sq = GaussianState::squeezed(0.4, 2.5, 0.0, {1.0, 0.0}, "a");
  Vec amp = sq.carrier_quadrature_coeffs("a", Quadrature::Amplitude);
  CHECK(sq.quadrature_variance(amp) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("carrier frame requires a carrier") {
  GaussianState v = GaussianState::vacuum(1, {"m"});
  CHECK_THROWS_AS(carrier_frame(v, "m"), std::runtime_error);
  CHECK_THROWS_AS(v.carrier_angle("m"), std::runtime_error);
  CHECK(v.carrier_angle_or_zero("m") == 0.0);
  // a carrier-free mode still reports carrier-frame variances (angle 0)
  CHECK(v.carrier_variance("m", Quadrature::Amplitude) == 1.0);

  GaussianState s = GaussianState::squeezed(0.4, 2.5, 0.0, {1.0, 1.0}, "m");
  CarrierFrame frame = carrier_frame(s, "m");
  CHECK(std::abs(frame.angle - M_PI / 4.0) < 1e-12);
  CHECK(std::abs(frame.view.carrier("m").imag()) < 1e-12);
}

TEST_CASE("normal sampler is deterministic per seed") {
  NormalSampler a(42), b(42), c(43);
  bool all_equal = true, any_diff = false;
  for (int k = 0; k < 16; ++k) {
    double x = a(), y = b(), z = c();
    all_equal = all_equal && (x == y);
    any_diff = any_diff || (x != z);
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("multivariate sampling reproduces the covariance") {
  GaussianState s = GaussianState::squeezed(0.4, 2.5, 0.4, {1.0, 0.0}, "a")
                        .tensor(GaussianState::squeezed(0.7, 1.6, -0.2,
                                                        {0.0, 1.0}, "b"));
  const std::size_t n = 200000;
  Mat draws = sample_fluctuations(s, n, 7);
  REQUIRE(draws.rows() == static_cast<Eigen::Index>(n));
  REQUIRE(draws.cols() == 4);
  Mat est = sample_covariance(draws);
  const Mat& truth = s.cov();
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) {
      const double sigma = std::sqrt(
          (truth(i, i) * truth(j, j) + truth(i, j) * truth(i, j)) /
          static_cast<double>(n));
      CHECK(std::abs(est(i, j) - truth(i, j)) < 4.5 * sigma);
    }
  }

  // same seed, same bytes
  Mat again = sample_fluctuations(s, 64, 7);
  Mat first = draws.topRows(64);
  CHECK(max_abs(again - first) == 0.0);

  Mat not_psd(2, 2);
  not_psd << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(mvnormal_samples(not_psd, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_covariance(Mat::Zero(1, 2)), std::invalid_argument);
}

TEST_CASE("symplectic transform validates its matrix") {
  Mat good = phase_shift_symplectic(0.4);
  CHECK_NOTHROW(SymplecticTransform{good});
  Mat bad = Mat::Identity(2, 2) * 2.0;
  CHECK_THROWS_AS(SymplecticTransform{bad}, std::invalid_argument);

  // kerr symplectic preserves the form too
  Mat shear = kerr_shear_symplectic(0.3, 0.8);
  Mat omega = symplectic_form(1);
  CHECK(max_abs(shear * omega * shear.transpose() - omega) < 1e-12);
}
