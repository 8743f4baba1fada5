#pragma once

// Dynamics with only mode a in contact with a Markovian bath: exact closed
// evolution in the normal-mode frame, RK4 drift-diffusion integration for
// the dissipative case, Lyapunov fixed point, and the coherence/fidelity
// trajectories of the reduced mode.

#include <cmath>
#include <functional>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "gaussian.hpp"
#include "model.hpp"

namespace cohmodes {

struct BathParams {
    double gamma = 0.1; // coupling rate, units of omega; 0 = closed system
    double T = 1.0;     // bath temperature

    double n_bar(double omega) const
    {
        if (T < 0.0 || gamma < 0.0)
            throw invalid_params_error("bath parameters must be non-negative");
        if (T == 0.0)
            return 0.0;
        return 1.0 / std::expm1(omega / T);
    }
};

// Initial quadrature means.  The components are read in the scaled
// normal-mode coordinates (X_+, P_+, X_-, P_-) in which the initial
// identity covariance is the normal-mode vacuum; that makes both normal
// modes beat when the couplings are on, and at mu = 0 the initial reduced
// states coincide for every lambda.
struct InitialCondition {
    Eigen::Vector4d d0 = Eigen::Vector4d::Ones();
};

enum class DissipationMode {
    full,                 // local dissipator on mode a of the coupled pair
    reduce_then_dissipate // closed pair evolution, trace, then damp mode a
};

// Map normal-frame means to bare-mode quadrature means.  The scaled normal
// coordinates absorb the per-sector squeeze factors
//   s_pm = ((omega +/- lambda - mu) / (omega +/- lambda + mu))^{1/4}.
inline Eigen::Vector4d normal_to_bare(const ModelParams& p,
                                      const Eigen::Vector4d& dn)
{
    const double sp = std::pow((p.omega + p.lambda - p.mu) /
                                   (p.omega + p.lambda + p.mu),
                               0.25);
    const double sm = std::pow((p.omega - p.lambda - p.mu) /
                                   (p.omega - p.lambda + p.mu),
                               0.25);
    const double dxp = sp * dn(0), dpp = dn(1) / sp;
    const double dxm = sm * dn(2), dpm = dn(3) / sm;
    const double inv_sqrt2 = 0.70710678118654752440;
    Eigen::Vector4d d;
    d << (dxp + dxm) * inv_sqrt2, (dpp + dpm) * inv_sqrt2,
        (dxp - dxm) * inv_sqrt2, (dpp - dpm) * inv_sqrt2;
    return d;
}

// Quadratic-form matrix of H in dimensionless quadratures:
// H = (omega/2) sum (X^2 + P^2)/2 ... expressed so that the drift is
// A = Omega G.  G couples X_a X_b with lambda + mu and P_a P_b with
// lambda - mu.
inline Eigen::Matrix4d hamiltonian_hessian(const ModelParams& p)
{
    Eigen::Matrix4d G = p.omega * Eigen::Matrix4d::Identity();
    G(0, 2) = G(2, 0) = p.lambda + p.mu;
    G(1, 3) = G(3, 1) = p.lambda - p.mu;
    return G;
}

inline Eigen::Matrix4d symplectic_form_4()
{
    Eigen::Matrix4d Om = Eigen::Matrix4d::Zero();
    Om(0, 1) = 1.0;
    Om(1, 0) = -1.0;
    Om(2, 3) = 1.0;
    Om(3, 2) = -1.0;
    return Om;
}

// Drift matrix A = Omega G - (gamma/2) P_a and diffusion D = gamma(2nbar+1) P_a,
// with P_a the projector onto mode-a quadratures.
inline Eigen::Matrix4d drift_matrix(const ModelParams& p, const BathParams& bath)
{
    Eigen::Matrix4d A = symplectic_form_4() * hamiltonian_hessian(p);
    A(0, 0) -= bath.gamma / 2.0;
    A(1, 1) -= bath.gamma / 2.0;
    return A;
}

inline Eigen::Matrix4d diffusion_matrix(const ModelParams& p,
                                        const BathParams& bath)
{
    Eigen::Matrix4d D = Eigen::Matrix4d::Zero();
    const double d = bath.gamma * (2.0 * bath.n_bar(p.omega) + 1.0);
    D(0, 0) = D(1, 1) = d;
    return D;
}

// Exact closed-system propagator for the means/covariances.  Each sector
// (X_pm, P_pm) rotates with frequency Lambda_pm but elliptically:
//   X' =  cos(L t) X + (b/L) sin(L t) P
//   P' = -(k/L) sin(L t) X + cos(L t) P
// with k = omega +/- (lambda + mu), b = omega +/- (lambda - mu), L = sqrt(k b).
inline Eigen::Matrix4d closed_propagator(const ModelParams& p, double t)
{
    const double inv_sqrt2 = 0.70710678118654752440;
    Eigen::Matrix4d U = Eigen::Matrix4d::Zero(); // bare -> (+,-) sectors
    U(0, 0) = U(0, 2) = inv_sqrt2;
    U(1, 1) = U(1, 3) = inv_sqrt2;
    U(2, 0) = inv_sqrt2;
    U(2, 2) = -inv_sqrt2;
    U(3, 1) = inv_sqrt2;
    U(3, 3) = -inv_sqrt2;

    Eigen::Matrix4d S = Eigen::Matrix4d::Zero();
    for (int sector = 0; sector < 2; ++sector) {
        const double sign = sector == 0 ? 1.0 : -1.0;
        const double k = p.omega + sign * (p.lambda + p.mu);
        const double b = p.omega + sign * (p.lambda - p.mu);
        const double L = std::sqrt(k * b);
        const int o = 2 * sector;
        S(o, o) = std::cos(L * t);
        S(o, o + 1) = b / L * std::sin(L * t);
        S(o + 1, o) = -k / L * std::sin(L * t);
        S(o + 1, o + 1) = std::cos(L * t);
    }
    return U.transpose() * S * U;
}

// Closed evolution of the initial pure Gaussian (identity covariance,
// normal-frame displacement d0) for time t.
inline TwoModeGaussianState closed_evolution(const ModelParams& p,
                                             const InitialCondition& init,
                                             double t)
{
    validate_params(p);
    const Eigen::Matrix4d S = closed_propagator(p, t);
    TwoModeGaussianState s;
    s.d = S * normal_to_bare(p, init.d0);
    s.sigma = S * S.transpose();
    return s;
}

struct Trajectory {
    std::vector<double> times;
    std::vector<SingleModeGaussianState> states; // reduced mode a
    std::vector<double> coherence_series;
    std::vector<double> fidelity_series;
};

// Unique fixed point of A sigma + sigma A^T + D = 0 with d = 0, reduced to
// mode a.  Solved as a 16x16 Kronecker system; decoupled modes leave the
// ancilla sector undamped and singular, so that case uses the bare thermal
// state directly.
inline SingleModeGaussianState asymptotic_state(const ModelParams& p,
                                                const BathParams& bath)
{
    validate_params(p);
    if (bath.gamma <= 0.0)
        throw invalid_params_error("asymptotic state requires gamma > 0");

    SingleModeGaussianState out;
    const double nu = 2.0 * bath.n_bar(p.omega) + 1.0;
    if (p.lambda == 0.0 && p.mu == 0.0) {
        out.sigma = nu * Eigen::Matrix2d::Identity();
        return out;
    }

    const Eigen::Matrix4d A = drift_matrix(p, bath);
    const Eigen::Matrix4d D = diffusion_matrix(p, bath);
    const Eigen::Matrix4d I = Eigen::Matrix4d::Identity();
    Eigen::Matrix<double, 16, 16> K =
        Eigen::kroneckerProduct(I, A) + Eigen::kroneckerProduct(A, I);
    Eigen::Map<const Eigen::Matrix<double, 16, 1>> vecD(D.data());

    Eigen::FullPivLU<Eigen::Matrix<double, 16, 16>> lu(K);
    if (!lu.isInvertible())
        throw degeneracy_error("singular Lyapunov system");
    Eigen::Matrix<double, 16, 1> vec_sigma = lu.solve(-vecD);
    Eigen::Map<Eigen::Matrix4d> sig(vec_sigma.data());

    TwoModeGaussianState full;
    full.sigma = 0.5 * (sig + sig.transpose());
    return partial_trace_mode_a(full);
}

// Asymptote of the reduce-then-dissipate map: bare thermal state of mode a.
inline SingleModeGaussianState thermal_mode_a(const ModelParams& p,
                                              const BathParams& bath)
{
    SingleModeGaussianState s;
    s.sigma = (2.0 * bath.n_bar(p.omega) + 1.0) * Eigen::Matrix2d::Identity();
    return s;
}

namespace detail {

struct FlowState {
    Eigen::Vector4d d;
    Eigen::Matrix4d sigma;
};

// One classical RK4 step of d' = A d, sigma' = A sigma + sigma A^T + D.
inline void rk4_step(const Eigen::Matrix4d& A, const Eigen::Matrix4d& D,
                     double dt, FlowState& st)
{
    auto fd = [&](const Eigen::Vector4d& d) -> Eigen::Vector4d { return A * d; };
    auto fs = [&](const Eigen::Matrix4d& s) -> Eigen::Matrix4d {
        return A * s + s * A.transpose() + D;
    };

    const Eigen::Vector4d k1d = fd(st.d);
    const Eigen::Matrix4d k1s = fs(st.sigma);
    const Eigen::Vector4d k2d = fd(st.d + 0.5 * dt * k1d);
    const Eigen::Matrix4d k2s = fs(st.sigma + 0.5 * dt * k1s);
    const Eigen::Vector4d k3d = fd(st.d + 0.5 * dt * k2d);
    const Eigen::Matrix4d k3s = fs(st.sigma + 0.5 * dt * k2s);
    const Eigen::Vector4d k4d = fd(st.d + dt * k3d);
    const Eigen::Matrix4d k4s = fs(st.sigma + dt * k3s);

    st.d += dt / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    st.sigma += dt / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
    st.sigma = 0.5 * (st.sigma + st.sigma.transpose()).eval();
}

} // namespace detail

// Integrate the dissipative flow and sample the reduced mode-a state,
// its coherence, and its fidelity against the asymptotic state.
// sample_stride: record every that many steps (plus t = 0 and the last step).
inline Trajectory dissipative_evolution(
    const ModelParams& p, const BathParams& bath, const InitialCondition& init,
    double t_max, double dt, DissipationMode mode = DissipationMode::full,
    int sample_stride = 10)
{
    validate_params(p);
    if (dt <= 0.0 || t_max < dt)
        throw invalid_params_error("need dt > 0 and t_max >= dt");

    const long n_steps = std::lround(t_max / dt);
    const SingleModeGaussianState asymptote =
        bath.gamma > 0.0
            ? (mode == DissipationMode::full ? asymptotic_state(p, bath)
                                             : thermal_mode_a(p, bath))
            : SingleModeGaussianState{};

    Trajectory out;
    auto record = [&](double t, const SingleModeGaussianState& s) {
        out.times.push_back(t);
        out.states.push_back(s);
        out.coherence_series.push_back(coherence(s));
        out.fidelity_series.push_back(
            bath.gamma > 0.0 ? gaussian_fidelity(s, asymptote) : 0.0);
    };

    if (mode == DissipationMode::reduce_then_dissipate) {
        // Closed-pair evolution is exact, so sample it directly and apply
        // the single-mode damping map to the reduced state:
        //   d -> e^{-Gt/2} d,  sigma -> e^{-Gt} sigma + (1 - e^{-Gt}) nu I.
        const double nu = 2.0 * bath.n_bar(p.omega) + 1.0;
        for (long i = 0; i <= n_steps; i += sample_stride) {
            const double t = static_cast<double>(i) * dt;
            SingleModeGaussianState s =
                partial_trace_mode_a(closed_evolution(p, init, t));
            const double decay = std::exp(-bath.gamma * t);
            s.d *= std::sqrt(decay);
            s.sigma = decay * s.sigma +
                      (1.0 - decay) * nu * Eigen::Matrix2d::Identity();
            record(t, s);
        }
        return out;
    }

    const Eigen::Matrix4d A = drift_matrix(p, bath);
    const Eigen::Matrix4d D = diffusion_matrix(p, bath);

    detail::FlowState st{normal_to_bare(p, init.d0), Eigen::Matrix4d::Identity()};
    TwoModeGaussianState full;
    for (long i = 0; i <= n_steps; ++i) {
        if (i % sample_stride == 0 || i == n_steps) {
            full.d = st.d;
            full.sigma = st.sigma;
            const auto spec = symplectic_eigenvalues(full.sigma);
            if (spec.nu.back() < 1.0 - 1e-6)
                throw integrator_error(
                    "symplectic eigenvalue drifted below 1; reduce dt");
            record(static_cast<double>(i) * dt, partial_trace_mode_a(full));
        }
        if (i < n_steps)
            detail::rk4_step(A, D, dt, st);
    }
    return out;
}

// Full two-mode state after dissipative evolution (used by oracle checks).
inline TwoModeGaussianState dissipative_state(const ModelParams& p,
                                              const BathParams& bath,
                                              const InitialCondition& init,
                                              double t, double dt)
{
    validate_params(p);
    const Eigen::Matrix4d A = drift_matrix(p, bath);
    const Eigen::Matrix4d D = diffusion_matrix(p, bath);
    detail::FlowState st{normal_to_bare(p, init.d0), Eigen::Matrix4d::Identity()};
    const long n_steps = std::lround(t / dt);
    for (long i = 0; i < n_steps; ++i)
        detail::rk4_step(A, D, dt, st);
    TwoModeGaussianState out;
    out.d = st.d;
    out.sigma = st.sigma;
    return out;
}

// Count strict local extrema of a sampled series, ignoring sub-tolerance
// wiggle.
inline int count_local_extrema(const std::vector<double>& y, double tol = 1e-6)
{
    int count = 0;
    int dir = 0; // sign of the last significant move
    double ref = y.empty() ? 0.0 : y.front();
    for (size_t i = 1; i < y.size(); ++i) {
        const double step = y[i] - ref;
        if (std::abs(step) < tol)
            continue;
        const int s = step > 0.0 ? 1 : -1;
        if (dir != 0 && s != dir)
            ++count;
        dir = s;
        ref = y[i];
    }
    return count;
}

} // namespace cohmodes
