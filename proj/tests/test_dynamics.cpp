#include <catch2/catch_amalgamated.hpp>

#include "cohmodes/dynamics.hpp"

using namespace cohmodes;

TEST_CASE("initial displacement map")
{
    // at mu = 0 the normal-frame scaling is trivial for every lambda
    for (double lambda : {0.0, 0.2, 0.45}) {
        const Eigen::Vector4d d =
            normal_to_bare({1.0, lambda, 0.0}, Eigen::Vector4d::Ones());
        CHECK(d(0) == Catch::Approx(std::sqrt(2.0)).margin(1e-14));
        CHECK(d(1) == Catch::Approx(std::sqrt(2.0)).margin(1e-14));
        CHECK(std::abs(d(2)) < 1e-14);
        CHECK(std::abs(d(3)) < 1e-14);
    }
}

TEST_CASE("closed evolution: identity at t = 0 and full revolution")
{
    const InitialCondition init;
    const ModelParams free_modes{1.0, 0.0, 0.0};

    auto s0 = closed_evolution(free_modes, init, 0.0);
    CHECK(s0.sigma.isApprox(Eigen::Matrix4d::Identity(), 1e-14));
    CHECK(s0.d.isApprox(normal_to_bare(free_modes, init.d0), 1e-14));

    auto s1 = closed_evolution(free_modes, init, 2.0 * M_PI);
    CHECK(s1.sigma.isApprox(s0.sigma, 1e-9));
    CHECK(s1.d.isApprox(s0.d, 1e-9));
}

TEST_CASE("closed evolution: purity and sector energies are conserved")
{
    const ModelParams p{1.0, 0.3, 0.2};
    const InitialCondition init;

    // sector energy k <q^2> + b <p^2> is conserved by the elliptic rotation
    auto sector_energy = [&](const TwoModeGaussianState& s, int sign) {
        const double k = 1.0 + sign * (p.lambda + p.mu);
        const double b = 1.0 + sign * (p.lambda - p.mu);
        const double inv2 = 0.5;
        // project onto (X_a +/- X_b)/sqrt(2), (P_a +/- P_b)/sqrt(2)
        const double q2 = inv2 * (s.sigma(0, 0) + s.sigma(2, 2) +
                                  2.0 * sign * s.sigma(0, 2)) +
                          inv2 * std::pow(s.d(0) + sign * s.d(2), 2);
        const double p2 = inv2 * (s.sigma(1, 1) + s.sigma(3, 3) +
                                  2.0 * sign * s.sigma(1, 3)) +
                          inv2 * std::pow(s.d(1) + sign * s.d(3), 2);
        return k * q2 + b * p2;
    };

    const auto ref = closed_evolution(p, init, 0.0);
    const double e_plus = sector_energy(ref, +1);
    const double e_minus = sector_energy(ref, -1);

    for (double t : {0.7, 1.9, 5.3, 17.0}) {
        auto s = closed_evolution(p, init, t);
        auto spec = symplectic_eigenvalues(s.sigma);
        REQUIRE(std::abs(spec.nu[0] - 1.0) < 1e-9);
        REQUIRE(std::abs(spec.nu[1] - 1.0) < 1e-9);
        REQUIRE(sector_energy(s, +1) == Catch::Approx(e_plus).margin(1e-8));
        REQUIRE(sector_energy(s, -1) == Catch::Approx(e_minus).margin(1e-8));
    }
}

TEST_CASE("closed evolution: frozen reference at (0.3, 0.2), t = 1")
{
    const ModelParams p{1.0, 0.3, 0.2};
    const InitialCondition init;

    const Eigen::Vector4d d0 = normal_to_bare(p, init.d0);
    CHECK(d0(0) == Catch::Approx(1.26482396).margin(1e-7));
    CHECK(d0(1) == Catch::Approx(1.58315288).margin(1e-7));
    CHECK(d0(2) == Catch::Approx(0.0438768).margin(1e-7));
    CHECK(d0(3) == Catch::Approx(-0.05491964).margin(1e-7));

    const auto s = closed_evolution(p, init, 1.0);
    CHECK(s.d(0) == Catch::Approx(1.973764615033).margin(1e-10));
    CHECK(s.d(1) == Catch::Approx(-0.158541627835).margin(1e-10));
    CHECK(s.d(2) == Catch::Approx(-0.348774594887).margin(1e-10));
    CHECK(s.d(3) == Catch::Approx(-0.875956134852).margin(1e-10));
    CHECK(s.sigma(0, 0) == Catch::Approx(1.0318673379304473).margin(1e-10));
    CHECK(s.sigma(1, 1) == Catch::Approx(1.0814487460044253).margin(1e-10));
    CHECK(s.sigma(0, 2) == Catch::Approx(-0.2772705739457654).margin(1e-10));
    CHECK(s.sigma(1, 3) == Catch::Approx(0.2531920303800991).margin(1e-10));
}

TEST_CASE("dissipative evolution: gamma = 0 reproduces closed evolution")
{
    const ModelParams p{1.0, 0.3, 0.2};
    const BathParams no_bath{0.0, 1.0};
    const InitialCondition init;

    auto traj = dissipative_evolution(p, no_bath, init, 2.0, 1e-3,
                                      DissipationMode::full, 500);
    for (size_t i = 0; i < traj.times.size(); ++i) {
        const auto closed =
            partial_trace_mode_a(closed_evolution(p, init, traj.times[i]));
        REQUIRE(traj.coherence_series[i] ==
                Catch::Approx(coherence(closed)).margin(1e-8));
        REQUIRE((traj.states[i].sigma - closed.sigma).cwiseAbs().maxCoeff() <
                1e-8);
    }
}

TEST_CASE("dissipative evolution: exact single-mode relaxation")
{
    const ModelParams p{1.0, 0.0, 0.0};
    const BathParams bath{0.1, 1.0};
    const InitialCondition init;
    const double nbar = bath.n_bar(1.0);
    const Eigen::Vector4d d0 = normal_to_bare(p, init.d0);

    auto traj = dissipative_evolution(p, bath, init, 10.0, 1e-3,
                                      DissipationMode::full, 1000);
    for (size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        const double decay = std::exp(-bath.gamma * t / 2.0);
        const double dx =
            decay * (std::cos(t) * d0(0) + std::sin(t) * d0(1));
        const double dp =
            decay * (-std::sin(t) * d0(0) + std::cos(t) * d0(1));
        const double sxx = std::exp(-bath.gamma * t) +
                           (1.0 - std::exp(-bath.gamma * t)) *
                               (2.0 * nbar + 1.0);
        REQUIRE(traj.states[i].d(0) == Catch::Approx(dx).margin(1e-8));
        REQUIRE(traj.states[i].d(1) == Catch::Approx(dp).margin(1e-8));
        REQUIRE(traj.states[i].sigma(0, 0) == Catch::Approx(sxx).margin(1e-8));
        REQUIRE(std::abs(traj.states[i].sigma(0, 1)) < 1e-8);
    }

    // long-time limit: thermal state, coherence 0, fidelity 1
    auto tail = dissipative_evolution(p, bath, init, 250.0, 1e-3,
                                      DissipationMode::full, 2500);
    CHECK(tail.coherence_series.back() < 1e-4);
    CHECK(tail.fidelity_series.back() > 1.0 - 1e-6);
}

TEST_CASE("integrator is 4th order")
{
    // compare against the exact lambda = mu = 0 relaxation at t = 1
    const ModelParams p{1.0, 0.0, 0.0};
    const BathParams bath{0.1, 1.0};
    const InitialCondition init;
    const Eigen::Vector4d d0 = normal_to_bare(p, init.d0);

    auto max_err = [&](double dt) {
        const auto s = dissipative_state(p, bath, init, 1.0, dt);
        const double decay = std::exp(-bath.gamma / 2.0);
        const double dx = decay * (std::cos(1.0) * d0(0) + std::sin(1.0) * d0(1));
        const double dp = decay * (-std::sin(1.0) * d0(0) + std::cos(1.0) * d0(1));
        const double sxx = std::exp(-bath.gamma) +
                           (1.0 - std::exp(-bath.gamma)) *
                               (2.0 * bath.n_bar(1.0) + 1.0);
        return std::max({std::abs(s.d(0) - dx), std::abs(s.d(1) - dp),
                         std::abs(s.sigma(0, 0) - sxx)});
    };
    const double e1 = max_err(0.02);
    const double e2 = max_err(0.01);
    CHECK(e1 / e2 >= 8.0);
}

TEST_CASE("asymptotic state")
{
    const BathParams bath{0.1, 1.0};

    // decoupled: bare thermal state
    auto th = asymptotic_state({1.0, 0.0, 0.0}, bath);
    const double nu = 2.0 * bath.n_bar(1.0) + 1.0;
    CHECK(th.sigma.isApprox(nu * Eigen::Matrix2d::Identity(), 1e-12));

    // coupled: fixed point matches long-time integration
    const ModelParams p{1.0, 0.3, 0.0};
    const InitialCondition init;
    auto fixed = asymptotic_state(p, bath);
    // only mode a couples to the bath, so the effective damping of the
    // hybridized modes is gamma / 2; run long enough for exp(-gamma t / 4)
    auto traj = dissipative_evolution(p, bath, init, 900.0, 1e-3,
                                      DissipationMode::full, 9000);
    const auto& last = traj.states.back();
    CHECK((last.sigma - fixed.sigma).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(last.d.norm() < 1e-6);
    CHECK(gaussian_fidelity(last, fixed) == Catch::Approx(1.0).margin(1e-6));

    CHECK_THROWS_AS(asymptotic_state(p, BathParams{0.0, 1.0}),
                    invalid_params_error);
}

TEST_CASE("fidelity oscillations: coupled vs decoupled")
{
    const BathParams bath{0.1, 1.0};
    const InitialCondition init;

    auto coupled = dissipative_evolution({1.0, 0.45, 0.0}, bath, init, 60.0,
                                         1e-3, DissipationMode::full, 100);
    CHECK(count_local_extrema(coupled.fidelity_series) >= 3);

    auto decoupled = dissipative_evolution({1.0, 0.0, 0.0}, bath, init, 60.0,
                                           1e-3, DissipationMode::full, 100);
    CHECK(count_local_extrema(decoupled.fidelity_series) == 0);
    // monotone increase toward the asymptote
    for (size_t i = 1; i < decoupled.fidelity_series.size(); ++i)
        REQUIRE(decoupled.fidelity_series[i] >=
                decoupled.fidelity_series[i - 1] - 1e-12);
}

TEST_CASE("reduce-then-dissipate mode settles on the bare thermal state")
{
    const ModelParams p{1.0, 0.45, 0.5};
    const BathParams bath{0.1, 1.0};
    const InitialCondition init;
    auto traj = dissipative_evolution(p, bath, init, 500.0, 1e-3,
                                      DissipationMode::reduce_then_dissipate,
                                      1000);
    CHECK(traj.coherence_series.back() < 1e-3);
    CHECK(traj.fidelity_series.back() > 1.0 - 1e-3);
}

TEST_CASE("input validation and extrema counter")
{
    const BathParams bath{0.1, 1.0};
    CHECK_THROWS_AS(dissipative_evolution({1.0, 0.0, 0.0}, bath, {}, 1.0, 0.0),
                    invalid_params_error);
    CHECK_THROWS_AS(dissipative_evolution({1.0, 0.0, 0.0}, bath, {}, 0.5, 1.0),
                    invalid_params_error);

    CHECK(count_local_extrema({0, 1, 0, 1, 0}, 1e-9) == 3);
    CHECK(count_local_extrema({0, 1, 2, 3}, 1e-9) == 0);
    CHECK(count_local_extrema({0, 1, 1 + 1e-8, 2}, 1e-6) == 0);
}
