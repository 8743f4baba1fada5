#pragma once

// Covariance-matrix algebra for one- and two-mode Gaussian states.
//
// Convention: dimensionless quadratures X = a + a^dag, P = -i(a - a^dag),
// so the vacuum covariance matrix is the identity and a thermal state with
// mean occupation nbar has sigma = (2 nbar + 1) I.  Two-mode quantities are
// ordered (X_a, P_a, X_b, P_b).

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "errors.hpp"

namespace cohmodes {

inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kPurityTol = 1e-9;

struct SingleModeGaussianState {
    Eigen::Vector2d d = Eigen::Vector2d::Zero();
    Eigen::Matrix2d sigma = Eigen::Matrix2d::Identity();
};

struct TwoModeGaussianState {
    Eigen::Vector4d d = Eigen::Vector4d::Zero();
    Eigen::Matrix4d sigma = Eigen::Matrix4d::Identity();
};

struct SymplecticSpectrum {
    std::vector<double> nu; // one per mode, descending
};

// x ln x with the 0 ln 0 := 0 convention.
inline double xlnx(double x)
{
    return x > 0.0 ? x * std::log(x) : 0.0;
}

// Entropy of a single symplectic eigenvalue nu >= 1.
inline double entropy_term(double nu)
{
    return xlnx((nu + 1.0) / 2.0) - xlnx((nu - 1.0) / 2.0);
}

// Entropy of a thermal state with mean occupation eps >= 0 (nats).
inline double thermal_entropy(double eps)
{
    return xlnx(eps + 1.0) - xlnx(eps);
}

namespace detail {

inline void check_covariance_shape(const Eigen::MatrixXd& sigma)
{
    const auto n = sigma.rows();
    if (sigma.cols() != n || (n != 2 && n != 4))
        throw dimension_error("covariance matrix must be 2x2 or 4x4");
    if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol)
        throw dimension_error("covariance matrix is not symmetric");
}

// Symplectic form for n/2 modes, per-mode blocks [[0,1],[-1,0]].
inline Eigen::MatrixXd symplectic_form(Eigen::Index n)
{
    Eigen::MatrixXd Om = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; k += 2) {
        Om(k, k + 1) = 1.0;
        Om(k + 1, k) = -1.0;
    }
    return Om;
}

} // namespace detail

// Moduli of the eigenvalues of i*Omega*sigma, deduplicated to one value per
// mode, descending.  nu = 1 for pure modes, 2 nbar + 1 for thermal ones.
inline SymplecticSpectrum symplectic_eigenvalues(const Eigen::MatrixXd& sigma)
{
    detail::check_covariance_shape(sigma);
    const auto n = sigma.rows();

    Eigen::MatrixXcd iOs =
        std::complex<double>(0.0, 1.0) * detail::symplectic_form(n) * sigma;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(iOs, false);

    std::vector<double> mods(static_cast<size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k)
        mods[static_cast<size_t>(k)] = std::abs(es.eigenvalues()(k));
    std::sort(mods.begin(), mods.end(), std::greater<>());

    // Eigenvalues come in +/- pairs; keep one representative per mode.
    SymplecticSpectrum out;
    for (Eigen::Index m = 0; m < n / 2; ++m) {
        double nu = 0.5 * (mods[static_cast<size_t>(2 * m)] +
                           mods[static_cast<size_t>(2 * m + 1)]);
        if (nu < 1.0 - 1e-6)
            throw unphysical_state_error("symplectic eigenvalue below 1");
        out.nu.push_back(nu);
    }
    return out;
}

// Closed form for 4x4 matrices with the x/p block pattern (entries mixing X
// with P all zero): nu^2 = (Delta +/- sqrt(Delta^2 - 4 det sigma)) / 2.
inline SymplecticSpectrum
symplectic_eigenvalues_closed_form(const Eigen::Matrix4d& sigma)
{
    const double Delta =
        2.0 * (sigma(0, 0) * sigma(1, 1) + sigma(0, 2) * sigma(1, 3));
    const double det = sigma.determinant();
    const double disc = std::sqrt(std::max(Delta * Delta - 4.0 * det, 0.0));
    SymplecticSpectrum out;
    out.nu = {std::sqrt((Delta + disc) / 2.0), std::sqrt((Delta - disc) / 2.0)};
    return out;
}

inline double von_neumann_entropy(const SymplecticSpectrum& spec)
{
    double s = 0.0;
    for (double nu : spec.nu) {
        if (nu < 1.0) {
            if (nu < 1.0 - kPurityTol)
                throw unphysical_state_error("entropy of nu < 1 requested");
            nu = 1.0;
        }
        s += entropy_term(nu);
    }
    return s;
}

inline void validate(const SingleModeGaussianState& s)
{
    symplectic_eigenvalues(s.sigma); // throws on shape/physicality problems
}

inline void validate(const TwoModeGaussianState& s)
{
    symplectic_eigenvalues(s.sigma);
}

// Mean excitation of the thermal reference state matched to a single mode.
inline double mean_excitation(const SingleModeGaussianState& s)
{
    const double eps =
        (s.sigma(0, 0) + s.sigma(1, 1) + s.d(0) * s.d(0) + s.d(1) * s.d(1) -
         2.0) /
        4.0;
    if (eps < -1e-9)
        throw unphysical_state_error("negative mean excitation");
    return std::max(eps, 0.0);
}

inline SingleModeGaussianState
partial_trace_mode_a(const TwoModeGaussianState& s)
{
    SingleModeGaussianState out;
    out.d = s.d.head<2>();
    out.sigma = s.sigma.topLeftCorner<2, 2>();
    return out;
}

inline SingleModeGaussianState
partial_trace_mode_b(const TwoModeGaussianState& s)
{
    SingleModeGaussianState out;
    out.d = s.d.tail<2>();
    out.sigma = s.sigma.bottomRightCorner<2, 2>();
    return out;
}

// Relative-entropy coherence: C = -S(rho) + sum_j S(thermal(eps_j)), where
// eps_j is the mean excitation of mode j's reduced state.  Tiny negative
// results are floating-point noise at the incoherent boundary; clamp to 0.
inline double coherence(const SingleModeGaussianState& s)
{
    const double c = -von_neumann_entropy(symplectic_eigenvalues(s.sigma)) +
                     thermal_entropy(mean_excitation(s));
    if (c < -1e-10)
        throw unphysical_state_error("coherence below the clamp window");
    return std::max(c, 0.0);
}

inline double coherence(const TwoModeGaussianState& s)
{
    const double c = -von_neumann_entropy(symplectic_eigenvalues(s.sigma)) +
                     thermal_entropy(mean_excitation(partial_trace_mode_a(s))) +
                     thermal_entropy(mean_excitation(partial_trace_mode_b(s)));
    if (c < -1e-10)
        throw unphysical_state_error("coherence below the clamp window");
    return std::max(c, 0.0);
}

// Uhlmann fidelity between two single-mode Gaussian states:
//   F = 2 exp(-delta^T (s1+s2)^{-1} delta / 2) / (sqrt(Dt + Lt) - sqrt(Lt)),
//   Dt = det(s1+s2), Lt = (det s1 - 1)(det s2 - 1).
inline double gaussian_fidelity(const SingleModeGaussianState& s1,
                                const SingleModeGaussianState& s2)
{
    const Eigen::Matrix2d sum = s1.sigma + s2.sigma;
    const double Dt = sum.determinant();
    if (Dt < 1e-14)
        throw degeneracy_error("singular sigma1 + sigma2 in fidelity");
    const double Lt = std::max(
        (s1.sigma.determinant() - 1.0) * (s2.sigma.determinant() - 1.0), 0.0);
    const Eigen::Vector2d delta = s1.d - s2.d;
    const double quad = delta.dot(sum.inverse() * delta);
    const double F =
        2.0 * std::exp(-0.5 * quad) / (std::sqrt(Dt + Lt) - std::sqrt(Lt));
    return std::min(F, 1.0);
}

} // namespace cohmodes
