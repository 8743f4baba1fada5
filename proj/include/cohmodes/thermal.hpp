#pragma once

// Steady state of both modes in identical Markovian baths at temperature T:
// a Gibbs state of the normal modes.  Covariance matrix, coherence vs T,
// the exact T -> infinity limit, and the steady-state Wigner function.

#include <array>
#include <cmath>

#include "model.hpp"

namespace cohmodes {

// tanh(Lambda / 2T) with the T = 0 limit handled analytically.
inline double thermal_tanh(double Lambda, double T)
{
    if (T < 0.0)
        throw invalid_params_error("temperature must be non-negative");
    if (T == 0.0)
        return 1.0;
    return std::tanh(Lambda / (2.0 * T));
}

// Ground-state covariance with each normal-mode sector divided by
// tanh(Lambda_pm / 2T); at T = 0 this is the ground state exactly, and the
// symplectic eigenvalues are coth(Lambda_pm / 2T).
inline TwoModeGaussianState steady_state_covariance(const ModelParams& p,
                                                    double T)
{
    const auto [k1, k2] = ground_wavefunction_params(p);
    const double tp = thermal_tanh(lambda_plus(p), T);
    const double tm = thermal_tanh(lambda_minus(p), T);
    const double w = p.omega;

    TwoModeGaussianState s;
    s.sigma.setZero();
    s.sigma(0, 0) = s.sigma(2, 2) = w / 8.0 * (1.0 / (k1 * tp) + 1.0 / (k2 * tm));
    s.sigma(0, 2) = s.sigma(2, 0) = w / 8.0 * (1.0 / (k1 * tp) - 1.0 / (k2 * tm));
    s.sigma(1, 1) = s.sigma(3, 3) = 2.0 / w * (k1 / tp + k2 / tm);
    s.sigma(1, 3) = s.sigma(3, 1) = 2.0 / w * (k1 / tp - k2 / tm);
    return s;
}

inline double steady_coherence(const ModelParams& p, double T)
{
    return coherence(steady_state_covariance(p, T));
}

// Exact T -> infinity limit of the steady coherence.  As T grows every
// sector approaches a classical equipartition state; expanding the coherence
// in 1/T, the divergent pieces of -S(rho) and of the reference entropies
// cancel and the finite remainder is
//
//   C_inf = 2 ln(E omega) + ln(Lambda_+ Lambda_- / omega^2),
//   E = (1/4) [ 1/(w+l+m) + 1/(w-l-m) + 1/(w+l-m) + 1/(w-l+m) ].
//
// E omega -> 1 and Lambda_+ Lambda_- -> omega^2 when lambda = mu = 0, so the
// limit vanishes for uncoupled modes.
inline double coherence_infinite_T(const ModelParams& p)
{
    validate_params(p);
    const double w = p.omega, l = p.lambda, m = p.mu;
    const double E = 0.25 * (1.0 / (w + l + m) + 1.0 / (w - l - m) +
                             1.0 / (w + l - m) + 1.0 / (w - l + m));
    return 2.0 * std::log(E * w) +
           std::log(lambda_plus(p) * lambda_minus(p) / (w * w));
}

// Gaussian widths of the steady-state Wigner function (natural units).
struct EtaFactors {
    double eta1_sq = 0.0; // (x_a + x_b)^2 width
    double eta2_sq = 0.0; // (p_a + p_b)^2 width
    double eta3_sq = 0.0; // (x_a - x_b)^2 width
    double eta4_sq = 0.0; // (p_a - p_b)^2 width
};

inline EtaFactors eta_factors(const ModelParams& p)
{
    const auto [k1, k2] = ground_wavefunction_params(p);
    EtaFactors e;
    e.eta1_sq = 1.0 / (8.0 * k1);
    e.eta2_sq = 2.0 * k1;
    e.eta3_sq = 1.0 / (8.0 * k2);
    e.eta4_sq = 2.0 * k2;
    return e;
}

// Steady-state Wigner function at a phase-space point in natural units
// (positions scaled so the ground state has <x^2> = (1/16)(1/k1 + 1/k2)).
inline double wigner_steady(const ModelParams& p, double T, double x_a,
                            double p_a, double x_b, double p_b)
{
    const EtaFactors e = eta_factors(p);
    const double tp = thermal_tanh(lambda_plus(p), T);
    const double tm = thermal_tanh(lambda_minus(p), T);

    const double xs = x_a + x_b, xd = x_a - x_b;
    const double ps = p_a + p_b, pd = p_a - p_b;
    const double expo = -xs * xs / (4.0 * e.eta1_sq) * tp -
                        ps * ps / (4.0 * e.eta2_sq) * tp -
                        xd * xd / (4.0 * e.eta3_sq) * tm -
                        pd * pd / (4.0 * e.eta4_sq) * tm;
    constexpr double pi = 3.14159265358979323846;
    return tp * tm / (pi * pi) * std::exp(expo);
}

// Covariance matrix implied by the Wigner widths, converted to the
// dimensionless convention.  Must coincide with steady_state_covariance.
inline TwoModeGaussianState wigner_implied_covariance(const ModelParams& p,
                                                      double T)
{
    const EtaFactors e = eta_factors(p);
    const double tp = thermal_tanh(lambda_plus(p), T);
    const double tm = thermal_tanh(lambda_minus(p), T);
    const double w = p.omega;

    // <(x_a +/- x_b)^2> = 2 eta^2 / tanh, so per-mode moments follow from
    // the sum/difference variances.
    const double vxs = 2.0 * e.eta1_sq / tp, vxd = 2.0 * e.eta3_sq / tm;
    const double vps = 2.0 * e.eta2_sq / tp, vpd = 2.0 * e.eta4_sq / tm;

    TwoModeGaussianState s;
    s.sigma.setZero();
    s.sigma(0, 0) = s.sigma(2, 2) = 2.0 * w * (vxs + vxd) / 4.0;
    s.sigma(0, 2) = s.sigma(2, 0) = 2.0 * w * (vxs - vxd) / 4.0;
    s.sigma(1, 1) = s.sigma(3, 3) = 2.0 / w * (vps + vpd) / 4.0;
    s.sigma(1, 3) = s.sigma(3, 1) = 2.0 / w * (vps - vpd) / 4.0;
    return s;
}

// Gauss-Hermite nodes and weights for int exp(-t^2) f(t) dt, by
// Golub-Welsch on the Jacobi matrix.
inline void gauss_hermite(int n, std::vector<double>& nodes,
                          std::vector<double>& weights)
{
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k)
        J(k, k - 1) = J(k - 1, k) = std::sqrt(k / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    constexpr double sqrt_pi = 1.7724538509055160273;
    nodes.resize(static_cast<size_t>(n));
    weights.resize(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        nodes[static_cast<size_t>(k)] = es.eigenvalues()(k);
        const double v0 = es.eigenvectors()(0, k);
        weights[static_cast<size_t>(k)] = sqrt_pi * v0 * v0;
    }
}

// 4-D Gauss-Hermite quadrature of the Wigner function; returns the
// normalization integral (should be 1).  Axis scalings are matched to the
// marginal widths so the quadrature converges geometrically.
inline double wigner_normalization(const ModelParams& p, double T,
                                   int n_nodes = 40)
{
    const EtaFactors e = eta_factors(p);
    const double tp = thermal_tanh(lambda_plus(p), T);
    const double tm = thermal_tanh(lambda_minus(p), T);

    // marginal variances of x_a and p_a under W
    const double vx = (e.eta1_sq / tp + e.eta3_sq / tm) / 2.0;
    const double vp = (e.eta2_sq / tp + e.eta4_sq / tm) / 2.0;
    const std::array<double, 4> scale = {std::sqrt(2.0 * vx),
                                         std::sqrt(2.0 * vp),
                                         std::sqrt(2.0 * vx),
                                         std::sqrt(2.0 * vp)};

    std::vector<double> t, wq;
    gauss_hermite(n_nodes, t, wq);

    double total = 0.0;
    for (int i = 0; i < n_nodes; ++i)
        for (int j = 0; j < n_nodes; ++j)
            for (int k = 0; k < n_nodes; ++k)
                for (int l = 0; l < n_nodes; ++l) {
                    const double xa = scale[0] * t[(size_t)i];
                    const double pa = scale[1] * t[(size_t)j];
                    const double xb = scale[2] * t[(size_t)k];
                    const double pb = scale[3] * t[(size_t)l];
                    const double gauss_weight =
                        std::exp(t[(size_t)i] * t[(size_t)i] +
                                 t[(size_t)j] * t[(size_t)j] +
                                 t[(size_t)k] * t[(size_t)k] +
                                 t[(size_t)l] * t[(size_t)l]);
                    total += wq[(size_t)i] * wq[(size_t)j] * wq[(size_t)k] *
                             wq[(size_t)l] * gauss_weight *
                             wigner_steady(p, T, xa, pa, xb, pb);
                }
    return total * scale[0] * scale[1] * scale[2] * scale[3];
}

} // namespace cohmodes
