#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "cohmodes/dynamics.hpp"
#include "cohmodes/model.hpp"
#include "cohmodes/thermal.hpp"

using namespace cohmodes;

TEST_CASE("parameter validation")
{
    CHECK_NOTHROW(validate_params({1.0, 0.4, 0.3}));
    CHECK_THROWS_AS(validate_params({1.0, 0.5, 0.5}), invalid_params_error);
    CHECK_THROWS_AS(validate_params({1.0, 0.6, 0.0}), invalid_params_error);
    CHECK_THROWS_AS(validate_params({1.0, -0.1, 0.2}), invalid_params_error);
    CHECK_THROWS_AS(validate_params({1.0, 0.0, -0.2}), invalid_params_error);
    CHECK_THROWS_AS(validate_params({0.0, 0.0, 0.0}), invalid_params_error);

    // the hard boundary omega = lambda + mu is rejected even when close
    CHECK_THROWS_AS(validate_params({1.0, 0.4, 0.6 - 1e-10}),
                    invalid_params_error);

    // 2*lambda = omega itself is usable for ground-state quantities (the
    // divergence lives in the center-of-mass/relative transform, not in
    // kappa or Lambda), so boundary-inclusive here:
    CHECK_NOTHROW(validate_params({1.0, 0.5, 0.3}));
    CHECK_THROWS_AS(diagonalize({1.0, 0.5, 0.3}), invalid_params_error);
}

TEST_CASE("validation errors name the violated inequality")
{
    try {
        validate_params({1.0, 0.6, 0.0});
        FAIL("expected invalid_params_error");
    } catch (const invalid_params_error& e) {
        CHECK(std::string(e.what()).find("2*lambda") != std::string::npos);
    }
    try {
        validate_params({1.0, 0.3, 0.8});
        FAIL("expected invalid_params_error");
    } catch (const invalid_params_error& e) {
        CHECK(std::string(e.what()).find("lambda + mu") != std::string::npos);
    }
}

TEST_CASE("diagonalize: uncoupled and frozen reference points")
{
    auto d0 = diagonalize({1.0, 0.0, 0.0});
    CHECK(d0.Lambda_plus == Catch::Approx(1.0).margin(1e-14));
    CHECK(d0.Lambda_minus == Catch::Approx(1.0).margin(1e-14));
    CHECK(d0.kappa1 == Catch::Approx(0.25).margin(1e-14));
    CHECK(d0.kappa2 == Catch::Approx(0.25).margin(1e-14));
    CHECK(d0.r_a == 0.0);
    CHECK(d0.r_b == 0.0);

    auto d1 = diagonalize({1.0, 0.0, 0.5});
    CHECK(d1.Lambda_plus == Catch::Approx(std::sqrt(0.75)).epsilon(1e-14));
    CHECK(d1.Lambda_minus == Catch::Approx(std::sqrt(0.75)).epsilon(1e-14));
    CHECK(d1.kappa1 == Catch::Approx(0.43301270189221924).epsilon(1e-14));
    CHECK(d1.kappa2 == Catch::Approx(0.14433756729740646).epsilon(1e-14));

    // pure exchange coupling: the normal modes are the beam-splitter modes
    // with frequencies omega +/- lambda
    auto d2 = diagonalize({1.0, 0.3, 0.0});
    CHECK(d2.Lambda_plus == Catch::Approx(1.3).epsilon(1e-14));
    CHECK(d2.Lambda_minus == Catch::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("diagonalize: reconstruction against the bare quadratic form")
{
    // The normal-mode frequencies must be the symplectic eigenfrequencies
    // |eig(i Omega G)| of the bare Hamiltonian Hessian.
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double lambda = 0.49 * u(rng);
        const double mu = (1.0 - lambda - 0.02) * u(rng);
        const ModelParams p{1.0, lambda, mu};

        Eigen::Matrix4cd iOG =
            std::complex<double>(0, 1) *
            (symplectic_form_4() * hamiltonian_hessian(p)).cast<std::complex<double>>();
        Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(iOG, false);
        std::array<double, 4> freqs;
        for (int k = 0; k < 4; ++k)
            freqs[(size_t)k] = std::abs(es.eigenvalues()(k));
        std::sort(freqs.begin(), freqs.end());

        REQUIRE(std::abs(freqs[0] - lambda_minus(p)) < 1e-10);
        REQUIRE(std::abs(freqs[3] - lambda_plus(p)) < 1e-10);
    }
}

TEST_CASE("diagonalize: sector identities")
{
    std::mt19937 rng(78);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double lambda = 0.45 * u(rng);
        const double mu = (1.0 - lambda - 0.02) * u(rng);
        auto dg = diagonalize({1.0, lambda, mu});

        // Lambda^2 = theta^2 - 4 zeta^2 per sector
        REQUIRE(dg.Lambda_plus * dg.Lambda_plus ==
                Catch::Approx(dg.theta_plus * dg.theta_plus -
                              4.0 * dg.zeta_plus * dg.zeta_plus)
                    .margin(1e-12));
        REQUIRE(dg.Lambda_minus * dg.Lambda_minus ==
                Catch::Approx(dg.theta_minus * dg.theta_minus -
                              4.0 * dg.zeta_minus * dg.zeta_minus)
                    .margin(1e-12));

        // squeeze angle diagonalizes its sector: tanh(2r) = 2 zeta / theta
        REQUIRE(std::tanh(2.0 * dg.r_a) ==
                Catch::Approx(2.0 * dg.zeta_plus / dg.theta_plus)
                    .margin(1e-12));
        REQUIRE(std::tanh(2.0 * dg.r_b) ==
                Catch::Approx(2.0 * dg.zeta_minus / dg.theta_minus)
                    .margin(1e-12));
    }
}

TEST_CASE("kappa: mu = 0 gives omega/4 independent of lambda")
{
    for (double lambda : {0.0, 0.1, 0.25, 0.3, 0.45}) {
        const auto [k1, k2] = ground_wavefunction_params({1.0, lambda, 0.0});
        CHECK(k1 == Catch::Approx(0.25).margin(1e-14));
        CHECK(k2 == Catch::Approx(0.25).margin(1e-14));
    }
    const auto [k1, k2] = ground_wavefunction_params({2.0, 0.4, 0.0});
    CHECK(k1 == Catch::Approx(0.5).margin(1e-14));
}

TEST_CASE("ground wavefunction is normalized (2-D quadrature)")
{
    // psi(xa, xb) = 2 (k1 k2)^{1/4} / sqrt(pi)
    //               exp(-k1 (xa+xb)^2 - k2 (xa-xb)^2)
    const ModelParams p{1.0, 0.2, 0.3};
    const auto [k1, k2] = ground_wavefunction_params(p);

    std::vector<double> t, w;
    gauss_hermite(48, t, w);
    const double sa = 1.0 / std::sqrt(2.0 * k1); // scale for (xa+xb)
    const double sb = 1.0 / std::sqrt(2.0 * k2); // scale for (xa-xb)
    const double amp2 = 4.0 * std::sqrt(k1 * k2) / M_PI;

    double norm = 0.0;
    for (size_t i = 0; i < t.size(); ++i)
        for (size_t j = 0; j < t.size(); ++j) {
            const double up = sa * t[i], vm = sb * t[j];
            const double psi2 =
                amp2 * std::exp(-2.0 * k1 * up * up - 2.0 * k2 * vm * vm);
            norm += w[i] * w[j] * std::exp(t[i] * t[i] + t[j] * t[j]) * psi2;
        }
    norm *= sa * sb / 2.0; // d(xa)d(xb) = d(u)d(v)/2
    CHECK(norm == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("ground-state covariance matrix")
{
    auto vac = ground_state_covariance({1.0, 0.0, 0.0});
    CHECK(vac.sigma.isApprox(Eigen::Matrix4d::Identity(), 1e-14));

    // mu = 0: off-diagonal blocks identically zero
    auto exch = ground_state_covariance({1.0, 0.3, 0.0});
    CHECK(exch.sigma.isApprox(Eigen::Matrix4d::Identity(), 1e-14));

    auto sq = ground_state_covariance({1.0, 0.0, 0.5});
    CHECK(sq.sigma(0, 2) ==
          Catch::Approx(-0.5773502691896255).epsilon(1e-13));
    CHECK(sq.d.norm() == 0.0);

    // mode-swap symmetry
    CHECK(sq.sigma(0, 0) == sq.sigma(2, 2));
    CHECK(sq.sigma(1, 1) == sq.sigma(3, 3));
    CHECK(sq.sigma(0, 2) == sq.sigma(2, 0));
}

TEST_CASE("ground-state purity across the stability region")
{
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j) {
            const double lambda = 0.45 * i / 19.0;
            const double mu = (1.0 - lambda) * 0.9 * j / 19.0;
            auto spec = symplectic_eigenvalues(
                ground_state_covariance({1.0, lambda, mu}).sigma);
            REQUIRE(std::abs(spec.nu[0] - 1.0) < 1e-9);
            REQUIRE(std::abs(spec.nu[1] - 1.0) < 1e-9);
        }
}

TEST_CASE("ground-state coherence: zero-squeezing null and frozen values")
{
    CHECK(ground_state_coherence({1.0, 0.5, 0.0}) == 0.0);
    CHECK(ground_state_coherence({1.0, 0.0, 0.0}) == 0.0);

    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(0.0, 0.5);
    for (int k = 0; k < 200; ++k)
        REQUIRE(ground_state_coherence({1.0, u(rng), 0.0}) < 1e-12);

    CHECK(ground_state_coherence({1.0, 0.0, 0.5}) ==
          Catch::Approx(0.5564773354157849).epsilon(1e-12));
    CHECK(ground_state_coherence({1.0, 0.3, 0.4}) ==
          Catch::Approx(0.502719578739515).epsilon(1e-12));
}

TEST_CASE("ground-state coherence strictly increases with mu")
{
    for (double lambda : {0.0, 0.1, 0.2, 0.3, 0.4}) {
        double prev = -1.0;
        for (int j = 0; j < 30; ++j) {
            const double mu = (1.0 - lambda) * 0.95 * j / 29.0;
            const double c = ground_state_coherence({1.0, lambda, mu});
            REQUIRE(c > prev);
            prev = c;
        }
    }
}
