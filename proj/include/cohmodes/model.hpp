#pragma once

// Two bilinearly coupled bosonic modes,
//
//   H = omega (a^dag a + b^dag b) + lambda (a^dag b + a b^dag)
//                                 + mu (a^dag b^dag + a b),
//
// diagonalized exactly by a center-of-mass/relative rotation followed by a
// single-mode squeeze per sector.  Closed forms for the normal-mode
// frequencies, ground-state exponents, covariance matrix and coherence.

#include <cmath>
#include <sstream>

#include "gaussian.hpp"

namespace cohmodes {

struct ModelParams {
    double omega = 1.0; // mode frequency, sets the unit scale
    double lambda = 0.0; // exchange-of-excitation coupling
    double mu = 0.0;     // two-mode squeezing coupling
};

inline constexpr double kBoundaryTol = 1e-9;

// Stability: lambda, mu >= 0, omega > lambda + mu and 2 lambda <= omega.
// Points within kBoundaryTol of the omega = lambda + mu boundary are
// rejected, not clamped: the ground-state exponents diverge there and a
// clamped value would silently corrupt a sweep.
inline ModelParams validate_params(const ModelParams& p)
{
    std::ostringstream msg;
    if (!(p.omega > 0.0))
        msg << "omega must be positive (omega = " << p.omega << ")";
    else if (p.lambda < 0.0 || p.mu < 0.0)
        msg << "couplings must be non-negative (lambda = " << p.lambda
            << ", mu = " << p.mu << ")";
    else if (2.0 * p.lambda > p.omega + kBoundaryTol)
        msg << "stability violated: 2*lambda < omega required (2*lambda = "
            << 2.0 * p.lambda << ", omega = " << p.omega << ")";
    else if (p.omega - p.lambda - p.mu <= kBoundaryTol)
        msg << "stability violated: omega > lambda + mu required (lambda + mu"
               " = "
            << p.lambda + p.mu << ", omega = " << p.omega << ")";
    if (!msg.str().empty())
        throw invalid_params_error(msg.str());
    return p;
}

// Normal-mode frequencies.  The symmetric (+) and antisymmetric (-) sectors
// see effective couplings omega +/- lambda with squeezing mu, giving
//   Lambda_pm = sqrt((omega +/- lambda)^2 - mu^2)
//             = sqrt((omega +/- lambda + mu)(omega +/- lambda - mu)).
inline double lambda_plus(const ModelParams& p)
{
    return std::sqrt((p.omega + p.lambda + p.mu) * (p.omega + p.lambda - p.mu));
}

inline double lambda_minus(const ModelParams& p)
{
    return std::sqrt((p.omega - p.lambda + p.mu) * (p.omega - p.lambda - p.mu));
}

// Ground-state wavefunction exponents: psi ~ exp(-2 kappa1 x_+^2 / w - ...)
// in the symmetric/antisymmetric position coordinates (natural units).
inline std::pair<double, double> ground_wavefunction_params(const ModelParams& p)
{
    validate_params(p);
    const double k1 = p.omega / 4.0 *
                      std::sqrt((p.omega + p.lambda + p.mu) /
                                (p.omega + p.lambda - p.mu));
    const double k2 = p.omega / 4.0 *
                      std::sqrt((p.omega - p.lambda - p.mu) /
                                (p.omega - p.lambda + p.mu));
    return {k1, k2};
}

struct DiagonalizationResult {
    double omega_plus = 0.0, omega_minus = 0.0; // COM/relative frequencies
    double Lambda_plus = 0.0, Lambda_minus = 0.0; // normal-mode frequencies
    double kappa1 = 0.0, kappa2 = 0.0;            // ground-state exponents
    double theta_plus = 0.0, theta_minus = 0.0;   // sector number couplings
    double zeta_plus = 0.0, zeta_minus = 0.0;     // sector squeeze couplings
    double r_a = 0.0, r_b = 0.0;                  // squeeze angles per sector
    double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0; // rotation coefficients
};

// Full diagonalization chain.  Unlike the quantities above this needs
// omega_minus > 0, i.e. strictly 2 lambda < omega: c3 and c4 diverge on the
// boundary itself.
inline DiagonalizationResult diagonalize(const ModelParams& p)
{
    validate_params(p);
    DiagonalizationResult r;

    const double w = p.omega, l = p.lambda, m = p.mu;
    if (w * (w - 2.0 * l) <= kBoundaryTol)
        throw invalid_params_error(
            "diagonalize requires 2*lambda strictly below omega");

    r.omega_plus = std::sqrt(w * (w + 2.0 * l));
    r.omega_minus = std::sqrt(w * (w - 2.0 * l));
    r.Lambda_plus = lambda_plus(p);
    r.Lambda_minus = lambda_minus(p);
    std::tie(r.kappa1, r.kappa2) = ground_wavefunction_params(p);

    r.theta_plus = (l * l + w * w - l * m + 2.0 * l * w) / r.omega_plus;
    r.theta_minus = (l * l + w * w - l * m - 2.0 * l * w) / r.omega_minus;
    r.zeta_plus = (m - l) * (l + w) / (2.0 * r.omega_plus);
    r.zeta_minus = (m - l) * (l - w) / (2.0 * r.omega_minus);

    const double arg_a =
        (l - m) * (l + w) / (l * l - l * m + 2.0 * l * w + w * w);
    const double arg_b =
        (l - m) * (l - w) / (l * l - l * m - 2.0 * l * w + w * w);
    if (std::abs(arg_a) >= 1.0 || std::abs(arg_b) >= 1.0)
        throw invalid_params_error("squeeze angle argument outside (-1, 1)");
    r.r_a = -0.5 * std::atanh(arg_a);
    r.r_b = -0.5 * std::atanh(arg_b);

    r.c1 = std::sqrt(r.omega_plus / w) + std::sqrt(w / r.omega_plus);
    r.c2 = std::sqrt(r.omega_plus / w) - std::sqrt(w / r.omega_plus);
    r.c3 = std::sqrt(r.omega_minus / w) + std::sqrt(w / r.omega_minus);
    r.c4 = std::sqrt(r.omega_minus / w) - std::sqrt(w / r.omega_minus);
    return r;
}

// Ground-state covariance matrix, dimensionless convention (vacuum = I):
//   sigma_XX = (omega/8)(1/k1 + 1/k2),  sigma_XaXb = (omega/8)(1/k1 - 1/k2),
//   sigma_PP = (2/omega)(k1 + k2),      sigma_PaPb = (2/omega)(k1 - k2).
inline TwoModeGaussianState ground_state_covariance(const ModelParams& p)
{
    const auto [k1, k2] = ground_wavefunction_params(p);
    const double w = p.omega;

    TwoModeGaussianState s;
    s.sigma.setZero();
    s.sigma(0, 0) = s.sigma(2, 2) = w / 8.0 * (1.0 / k1 + 1.0 / k2);
    s.sigma(0, 2) = s.sigma(2, 0) = w / 8.0 * (1.0 / k1 - 1.0 / k2);
    s.sigma(1, 1) = s.sigma(3, 3) = 2.0 / w * (k1 + k2);
    s.sigma(1, 3) = s.sigma(3, 1) = 2.0 / w * (k1 - k2);
    return s;
}

inline double ground_state_coherence(const ModelParams& p)
{
    return coherence(ground_state_covariance(p));
}

} // namespace cohmodes
