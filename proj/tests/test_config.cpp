#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "kerrepr/config.hpp"

using kerrepr::RunConfig;

TEST_CASE("defaults carry the published operating point") {
  RunConfig cfg;
  CHECK(std::abs(cfg.source.v_s_plus - 0.40738027780411273) < 1e-15);
  CHECK(std::abs(cfg.source.v_p_plus - 0.38904514499428046) < 1e-15);
  CHECK(cfg.source.v_minus == 20.0);
  CHECK(cfg.sagnac.reflectivity_s == 0.91);
  CHECK(cfg.sagnac.reflectivity_p == 0.90);
  CHECK(std::abs(cfg.sagnac.kappa - 0.064298937) < 1e-12);
  CHECK(std::abs(cfg.sagnac.loop_loss - 0.353446157) < 1e-12);
  CHECK(cfg.entangler.splitter_reflectivity == 0.515);
  CHECK(cfg.entangler.visibility == 0.96);
  CHECK(cfg.entangler.eta_det == 0.92);
  CHECK_FALSE(cfg.entangler.apply_optics);
  CHECK(cfg.detection.center_freq_hz == 10e6);
  CHECK(cfg.detection.rbw_hz == 300e3);
  CHECK_FALSE(cfg.detection.electronic_level.has_value());
  REQUIRE(cfg.uncertainty.v_sum_plus_err.has_value());
  REQUIRE(cfg.uncertainty.v_diff_minus_err.has_value());
  CHECK(*cfg.uncertainty.v_sum_plus_err == 0.02);
  CHECK(*cfg.uncertainty.v_diff_minus_err == 0.04);
  CHECK(cfg.run.energy_pj == 110.0);
  CHECK(cfg.run.seed == 1);
  CHECK(cfg.run.scan_steps == 151);
  CHECK(cfg.run.sweep_steps == 2001);
  CHECK(cfg.run.e_max_pj == 200.0);

  // squeezing defaults expressed in decibels
  CHECK(std::abs(-10.0 * std::log10(cfg.source.v_s_plus) - 3.9) < 1e-12);
  CHECK(std::abs(-10.0 * std::log10(cfg.source.v_p_plus) - 4.1) < 1e-12);
}

TEST_CASE("empty object parses to the defaults") {
  RunConfig cfg = RunConfig::from_json_text("{}");
  CHECK(cfg.to_json() == RunConfig{}.to_json());
  CHECK(cfg.sagnac.reflectivity_s == 0.91);
  CHECK(cfg.entangler.visibility == 0.96);
  CHECK(cfg.run.energy_pj == 110.0);
}

TEST_CASE("decibel entries map through 10^(-dB/10)") {
  RunConfig cfg = RunConfig::from_json_text(R"({"source": {"v_s_db": 3.0}})");
  CHECK(std::abs(cfg.source.v_s_plus - std::pow(10.0, -0.3)) < 1e-15);
  RunConfig anti =
      RunConfig::from_json_text(R"({"source": {"v_minus_db": -13.0}})");
  CHECK(std::abs(anti.source.v_minus - std::pow(10.0, 1.3)) < 1e-12);
}

TEST_CASE("linear and decibel forms are mutually exclusive") {
  CHECK_THROWS_AS(RunConfig::from_json_text(
                      R"({"source": {"v_s_plus": 0.4, "v_s_db": 4.0}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      RunConfig::from_json_text(
          R"({"entangler": {"visibility": 0.9, "visibility_percent": 90}})"),
      std::invalid_argument);
}

TEST_CASE("visibility_percent converts and validates") {
  RunConfig cfg = RunConfig::from_json_text(
      R"({"entangler": {"visibility_percent": 96}})");
  CHECK(cfg.entangler.visibility == doctest::Approx(0.96).epsilon(1e-12));
  CHECK_THROWS_AS(RunConfig::from_json_text(
                      R"({"entangler": {"visibility_percent": 150}})"),
                  std::invalid_argument);
}

TEST_CASE("unknown keys are rejected at every level") {
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"bogus": 1})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"source": {"bogus": 1}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"sagnac": {"bogus": 1}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"entangler": {"bogus": 1}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"detection": {"bogus": 1}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      RunConfig::from_json_text(R"({"uncertainty": {"bogus": 1}})"),
      std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"run": {"bogus": 1}})"),
                  std::invalid_argument);
}

TEST_CASE("range validation") {
  CHECK_THROWS_AS(
      RunConfig::from_json_text(R"({"sagnac": {"reflectivity_s": 1.5}})"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      RunConfig::from_json_text(R"({"entangler": {"eta_det": 0.0}})"),
      std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"detection": {"rbw_hz": 0}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"run": {"energy_pj": -5}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"run": {"scan_steps": 1}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::from_json_text(
                      R"({"run": {"phi_min": 2.0, "phi_max": 1.0}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      RunConfig::from_json_text(R"({"uncertainty": {"v_sum_plus_err": -0.01}})"),
      std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"run": {"seed": -3}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::from_json_text("[1, 2]"), std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::from_json_text("not json"),
                  std::invalid_argument);
}

TEST_CASE("sources violating the uncertainty bound are rejected") {
  // v_plus * v_minus < 1 would be an unphysical input pair
  CHECK_THROWS_AS(RunConfig::from_json_text(
                      R"({"source": {"v_s_plus": 0.4, "v_minus": 2.0}})"),
                  std::invalid_argument);
  CHECK_NOTHROW(RunConfig::from_json_text(
      R"({"source": {"v_s_plus": 0.5, "v_p_plus": 0.5, "v_minus": 2.0}})"));
}

TEST_CASE("echo round trip is idempotent") {
  RunConfig cfg = RunConfig::from_json_text(
      R"({"run": {"energy_pj": 95.0, "seed": 7}, "sagnac": {"kappa": 0.05}})");
  RunConfig again = RunConfig::from_json_text(cfg.to_json());
  CHECK(cfg.to_json() == again.to_json());
  CHECK(cfg.hash() == again.hash());
}

TEST_CASE("hash is deterministic and sensitive") {
  RunConfig a, b;
  CHECK(a.hash() == b.hash());
  CHECK(a.hash_hex().size() == 16);
  b.source.v_minus = 21.0;
  CHECK(a.hash() != b.hash());
}

TEST_CASE("file loading") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "kerrepr_cfg_test.json";
  {
    std::ofstream out(path);
    out << R"({"run": {"energy_pj": 99.5}})";
  }
  RunConfig cfg = RunConfig::load(path.string());
  CHECK(cfg.run.energy_pj == 99.5);
  fs::remove(path);
  CHECK_THROWS_AS(RunConfig::load("/nonexistent/kerrepr.json"),
                  std::runtime_error);
}

TEST_CASE("derived parameter helpers pick the right polarization") {
  RunConfig cfg;
  kerrepr::SagnacParams s = kerrepr::sagnac_params(cfg, 's');
  kerrepr::SagnacParams p = kerrepr::sagnac_params(cfg, 'p');
  CHECK(s.reflectivity == 0.91);
  CHECK(p.reflectivity == 0.90);
  CHECK(s.kappa == cfg.sagnac.kappa);
  CHECK_THROWS_AS(kerrepr::sagnac_params(cfg, 'x'), std::invalid_argument);

  kerrepr::EntanglerParams e = kerrepr::entangler_params(cfg);
  CHECK(e.splitter_reflectivity == 0.515);
  CHECK(e.visibility == 0.96);
  CHECK_FALSE(e.apply_optics);

  kerrepr::AnalysisConfig a = kerrepr::analysis_config(cfg);
  CHECK(a.center_freq_hz == 10e6);
  CHECK(a.rbw_hz == 300e3);
}

TEST_CASE("source beams carry half the pulse energy each") {
  RunConfig cfg;
  kerrepr::GaussianState s = kerrepr::source_beam(cfg, 's');
  kerrepr::GaussianState p = kerrepr::source_beam(cfg, 'p');
  CHECK(std::abs(s.carrier_power("s") - 55.0) < 1e-9);
  CHECK(std::abs(p.carrier_power("p") - 55.0) < 1e-9);
  CHECK(std::abs(s.carrier_variance("s", kerrepr::Quadrature::Amplitude) -
                 cfg.source.v_s_plus) < 1e-12);
  CHECK(std::abs(p.carrier_variance("p", kerrepr::Quadrature::Amplitude) -
                 cfg.source.v_p_plus) < 1e-12);
  CHECK(std::abs(s.carrier_variance("s", kerrepr::Quadrature::Phase) - 20.0) <
        1e-12);
}
