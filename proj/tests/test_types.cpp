#include <doctest.h>

#include "triphoton/design_eval.hpp"
#include "triphoton/errors.hpp"
#include "triphoton/types.hpp"

using namespace triphoton;

TEST_CASE("polar helpers round-trip phases in units of pi") {
    const Complex z = from_polar_pi(2.0, 0.25);
    CHECK(z.real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(z.imag() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(phase_in_pi_units(z) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(phase_in_pi_units(from_polar_pi(1.0, -0.748)) ==
          doctest::Approx(-0.748).epsilon(1e-15));
}

TEST_CASE("polar helpers reject bad magnitudes") {
    CHECK_THROWS_AS(from_polar_pi(-1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(from_polar_pi(std::nan(""), 0.0), ValidationError);
}

TEST_CASE("transfer matrix validates shape and entries") {
    CHECK_THROWS_AS(TransferMatrix(CMatrix(0, 0)), ValidationError);
    CMatrix bad(2, 2);
    bad.setZero();
    bad(0, 0) = Complex(std::nan(""), 0.0);
    CHECK_THROWS_AS(TransferMatrix{bad}, ValidationError);
}

TEST_CASE("unitarity check accepts the balanced splitter and rejects a lossy one") {
    CMatrix bs(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    bs << Complex(s, 0), Complex(0, s), Complex(0, s), Complex(s, 0);
    CHECK(TransferMatrix(bs).is_unitary());
    CHECK(ideal_tritter().is_unitary());
    CHECK_FALSE(example_lossy_tritter().is_unitary(1e-6));
}

TEST_CASE("at_modes uses 1-based labels") {
    const TransferMatrix m = ideal_tritter();
    CHECK(m.at_modes(1, 1) == m.entries()(0, 0));
    CHECK(m.at_modes(3, 2) == m.entries()(2, 1));
    CHECK_THROWS_AS(m.at_modes(0, 1), ValidationError);
    CHECK_THROWS_AS(m.at_modes(1, 4), ValidationError);
}

TEST_CASE("photon configurations sort modes and track occupations") {
    const PhotonConfiguration config{3, 1, 1};
    CHECK(config.total_photons() == 3);
    CHECK(config.modes()[0] == 1);
    CHECK(config.modes()[2] == 3);
    CHECK(config.max_mode() == 3);
    CHECK_FALSE(config.collision_free());
    CHECK(config.occupation_factorial_product() == 2.0);
    CHECK(config.label() == "{1,1,3}");

    const PhotonConfiguration free_config{2, 3, 1};
    CHECK(free_config.collision_free());
    CHECK(free_config.occupation_factorial_product() == 1.0);

    CHECK_THROWS_AS(PhotonConfiguration{0}, ValidationError);
    CHECK_THROWS_AS(PhotonConfiguration(std::vector<int>{}), ValidationError);
}
