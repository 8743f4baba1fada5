#pragma once

// Brute-force ground truth in a truncated number basis |n_a, n_b>.
// Everything here is deliberately direct: dense symmetric eigensolves via
// LAPACK, banded ladder operators, an RK4 Lindblad stepper.  Used by the
// test suite and the CLI --verify path, never on the hot path.

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <lapacke.h>

#include "dynamics.hpp"
#include "gaussian.hpp"
#include "model.hpp"

namespace cohmodes::fock {

using Complex = std::complex<double>;
using DensityOperator = Eigen::MatrixXcd;

struct FockConfig {
    int cutoff = 40; // max occupation per mode; dimension (cutoff+1)^2

    int n() const { return cutoff + 1; }
    int dim() const { return n() * n(); }
};

inline void check_config(const FockConfig& cfg)
{
    if (cfg.cutoff < 2)
        throw invalid_params_error("Fock cutoff must be at least 2");
}

// --- dense symmetric eigensolvers (LAPACK) -------------------------------

// Lowest eigenpair of a real symmetric matrix.
inline std::pair<double, Eigen::VectorXd>
lowest_eigenpair(const Eigen::MatrixXd& M)
{
    const auto dim = static_cast<lapack_int>(M.rows());
    Eigen::MatrixXd A = M; // dsyevr destroys its input
    Eigen::VectorXd w(dim), z(dim);
    lapack_int m = 0;
    std::vector<lapack_int> isuppz(2);
    const lapack_int info = LAPACKE_dsyevr(
        LAPACK_COL_MAJOR, 'V', 'I', 'L', dim, A.data(), dim, 0.0, 0.0, 1, 1,
        0.0, &m, w.data(), z.data(), dim, isuppz.data());
    if (info != 0 || m != 1)
        throw degeneracy_error("dsyevr failed on the Fock Hamiltonian");
    return {w(0), z};
}

// Full spectrum and eigenvectors of a real symmetric matrix.
inline std::pair<Eigen::VectorXd, Eigen::MatrixXd>
full_eigensystem(const Eigen::MatrixXd& M)
{
    const auto dim = static_cast<lapack_int>(M.rows());
    Eigen::MatrixXd A = M;
    Eigen::VectorXd w(dim);
    const lapack_int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', dim, A.data(), dim, w.data());
    if (info != 0)
        throw degeneracy_error("dsyevd failed");
    return {w, A};
}

// --- operators ------------------------------------------------------------

// Annihilation operator on mode a (row-shift by n) or mode b (shift by 1).
inline Eigen::SparseMatrix<double> annihilation(const FockConfig& cfg, bool mode_a)
{
    const int n = cfg.n(), dim = cfg.dim();
    Eigen::SparseMatrix<double> A(dim, dim);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(dim));
    for (int na = 0; na < n; ++na)
        for (int nb = 0; nb < n; ++nb) {
            const int i = na * n + nb;
            if (mode_a && na > 0)
                trips.emplace_back(i - n, i, std::sqrt(double(na)));
            if (!mode_a && nb > 0)
                trips.emplace_back(i - 1, i, std::sqrt(double(nb)));
        }
    A.setFromTriplets(trips.begin(), trips.end());
    return A;
}

inline Eigen::MatrixXd build_hamiltonian(const ModelParams& p,
                                         const FockConfig& cfg)
{
    validate_params(p);
    check_config(cfg);
    const int n = cfg.n(), dim = cfg.dim();
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
    for (int na = 0; na < n; ++na)
        for (int nb = 0; nb < n; ++nb) {
            const int i = na * n + nb;
            H(i, i) = p.omega * (na + nb);
            if (na + 1 < n && nb > 0) { // a^dag b
                const double v = p.lambda * std::sqrt(double(na + 1) * nb);
                H(i + n - 1, i) += v;
                H(i, i + n - 1) += v;
            }
            if (na + 1 < n && nb + 1 < n) { // a^dag b^dag
                const double v = p.mu * std::sqrt(double(na + 1) * (nb + 1));
                H(i + n + 1, i) += v;
                H(i, i + n + 1) += v;
            }
        }
    return H;
}

// Population in the top two occupation levels of either mode; the oracle
// refuses to vouch for results where this exceeds 1e-6.
inline double truncation_leakage(const Eigen::VectorXd& probs,
                                 const FockConfig& cfg)
{
    const int n = cfg.n();
    double leak = 0.0;
    for (int na = 0; na < n; ++na)
        for (int nb = 0; nb < n; ++nb)
            if (na >= n - 2 || nb >= n - 2)
                leak += probs(na * n + nb);
    return leak;
}

inline constexpr double kLeakageTol = 1e-6;

struct GroundResult {
    double energy = 0.0;
    Eigen::VectorXd psi;
    double leakage = 0.0;
};

inline GroundResult ground_state_fock(const ModelParams& p,
                                      const FockConfig& cfg)
{
    GroundResult g;
    std::tie(g.energy, g.psi) = lowest_eigenpair(build_hamiltonian(p, cfg));
    g.leakage = truncation_leakage(g.psi.cwiseAbs2(), cfg);
    if (g.leakage >= kLeakageTol)
        throw truncation_error("ground state leaks into the top Fock levels");
    return g;
}

// Normal-mode lowering operators alpha, beta expressed in the bare basis:
//   alpha = [(c1 ch(ra) + c2 sh(ra)) (a + b)
//            + (c2 ch(ra) + c1 sh(ra)) (a^dag + b^dag)] / sqrt(8),
// and beta likewise with (c3, c4, rb, a - b).
inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd>
normal_mode_ops(const ModelParams& p, const FockConfig& cfg)
{
    const DiagonalizationResult dg = diagonalize(p);
    const Eigen::MatrixXd a =
        Eigen::MatrixXd(annihilation(cfg, true));
    const Eigen::MatrixXd b =
        Eigen::MatrixXd(annihilation(cfg, false));
    const double s8 = std::sqrt(8.0);

    const double ua = std::cosh(dg.r_a), va = std::sinh(dg.r_a);
    const double ub = std::cosh(dg.r_b), vb = std::sinh(dg.r_b);
    Eigen::MatrixXd alpha =
        ((dg.c1 * ua + dg.c2 * va) * (a + b) +
         (dg.c2 * ua + dg.c1 * va) * (a + b).transpose()) /
        s8;
    Eigen::MatrixXd beta =
        ((dg.c3 * ub + dg.c4 * vb) * (a - b) +
         (dg.c4 * ub + dg.c3 * vb) * (a - b).transpose()) /
        s8;
    return {alpha, beta};
}

// Gibbs state of the normal modes, exp(-(L+ alpha^dag alpha + L- beta^dag
// beta)/T), exponentiated through the eigendecomposition of the (truncated)
// normal-mode number operators.
inline DensityOperator steady_state_fock(const ModelParams& p, double T,
                                         const FockConfig& cfg)
{
    check_config(cfg);
    if (T <= 0.0)
        throw invalid_params_error("steady_state_fock needs T > 0");
    const double Lm = lambda_minus(p);
    const double nbar_minus = 1.0 / std::expm1(Lm / T);
    if (nbar_minus > cfg.cutoff / 10.0)
        throw truncation_error("temperature too high for this Fock cutoff");

    auto [alpha, beta] = normal_mode_ops(p, cfg);
    const Eigen::MatrixXd Hn = lambda_plus(p) * alpha.transpose() * alpha +
                               lambda_minus(p) * beta.transpose() * beta;
    auto [eps, U] = full_eigensystem(0.5 * (Hn + Hn.transpose()));

    Eigen::VectorXd boltz = (-(eps.array() - eps.minCoeff()) / T).exp();
    boltz /= boltz.sum();
    Eigen::MatrixXd rho = U * boltz.asDiagonal() * U.transpose();

    const double leak = truncation_leakage(rho.diagonal(), cfg);
    if (leak >= kLeakageTol)
        throw truncation_error("thermal state leaks into the top Fock levels");
    return rho.cast<Complex>();
}

// --- moments ---------------------------------------------------------------

namespace detail {

// tr(rho Q) for sparse Q, without forming the product.
inline Complex trace_product(const DensityOperator& rho,
                             const Eigen::SparseMatrix<Complex>& Q)
{
    Complex tr(0.0, 0.0);
    for (int k = 0; k < Q.outerSize(); ++k)
        for (Eigen::SparseMatrix<Complex>::InnerIterator it(Q, k); it; ++it)
            tr += rho(it.col(), it.row()) * it.value();
    return tr;
}

} // namespace detail

// Dimensionless quadrature means and covariance matrix of a two-mode state.
inline TwoModeGaussianState moments(const DensityOperator& rho,
                                    const FockConfig& cfg)
{
    const Eigen::SparseMatrix<Complex> a =
        annihilation(cfg, true).cast<Complex>();
    const Eigen::SparseMatrix<Complex> b =
        annihilation(cfg, false).cast<Complex>();
    const Complex im(0.0, 1.0);
    std::vector<Eigen::SparseMatrix<Complex>> quad(4);
    quad[0] = a + Eigen::SparseMatrix<Complex>(a.transpose());
    quad[1] = -im * (a - Eigen::SparseMatrix<Complex>(a.transpose()));
    quad[2] = b + Eigen::SparseMatrix<Complex>(b.transpose());
    quad[3] = -im * (b - Eigen::SparseMatrix<Complex>(b.transpose()));

    TwoModeGaussianState s;
    for (int i = 0; i < 4; ++i)
        s.d(i) = detail::trace_product(rho, quad[i]).real();
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            const Eigen::SparseMatrix<Complex> qij = quad[i] * quad[j];
            const Eigen::SparseMatrix<Complex> qji = quad[j] * quad[i];
            const double sym =
                0.5 * (detail::trace_product(rho, qij).real() +
                       detail::trace_product(rho, qji).real());
            s.sigma(i, j) = s.sigma(j, i) = sym - s.d(i) * s.d(j);
        }
    return s;
}

// Cheaper pure-state version: expectation values against the vector.
inline TwoModeGaussianState moments(const Eigen::VectorXcd& psi,
                                    const FockConfig& cfg)
{
    const Eigen::SparseMatrix<double> a = annihilation(cfg, true);
    const Eigen::SparseMatrix<double> b = annihilation(cfg, false);
    const Complex im(0.0, 1.0);

    auto quad_apply = [&](int which, const Eigen::VectorXcd& v) {
        const auto& op = which < 2 ? a : b;
        Eigen::VectorXcd lower = op * v;
        Eigen::VectorXcd raise = op.transpose() * v;
        return which % 2 == 0 ? Eigen::VectorXcd(lower + raise)
                              : Eigen::VectorXcd(-im * (lower - raise));
    };

    TwoModeGaussianState s;
    std::vector<Eigen::VectorXcd> qv(4);
    for (int i = 0; i < 4; ++i) {
        qv[i] = quad_apply(i, psi);
        s.d(i) = psi.dot(qv[i]).real();
    }
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            const double sym = 0.5 * (qv[i].dot(quad_apply(j, psi)).real() +
                                      qv[j].dot(quad_apply(i, psi)).real());
            s.sigma(i, j) = s.sigma(j, i) = sym - s.d(i) * s.d(j);
        }
    return s;
}

// --- entropies and coherence ------------------------------------------------

inline double entropy_from_probs(const Eigen::VectorXd& p)
{
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p(i) > 1e-300)
            s -= p(i) * std::log(p(i));
    return s;
}

inline double von_neumann_entropy_fock(const DensityOperator& rho)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho,
                                                       Eigen::EigenvaluesOnly);
    return entropy_from_probs(es.eigenvalues().cwiseMax(0.0));
}

// Relative entropy of coherence in the product number basis:
// S(diag rho) - S(rho).  Zero for any diagonal state.
inline double coherence_energy_basis(const DensityOperator& rho)
{
    return std::max(entropy_from_probs(rho.diagonal().real().cwiseMax(0.0)) -
                        von_neumann_entropy_fock(rho),
                    0.0);
}

// Relative entropy to the matched product thermal reference:
// C = S(zeta) - S(rho) with zeta the product of single-mode thermal states
// with the same mean occupations.  S(zeta) has the closed form
// sum_j [(n_j + 1) ln(n_j + 1) - n_j ln n_j].  This is the density-matrix
// realization of the Gaussian measure.
inline std::pair<double, double> mode_occupations(const DensityOperator& rho,
                                                  const FockConfig& cfg)
{
    const int n = cfg.n();
    double na_mean = 0.0, nb_mean = 0.0;
    for (int na = 0; na < n; ++na)
        for (int nb = 0; nb < n; ++nb) {
            const double pop = rho(na * n + nb, na * n + nb).real();
            na_mean += na * pop;
            nb_mean += nb * pop;
        }
    return {na_mean, nb_mean};
}

inline double coherence_thermal_reference(const DensityOperator& rho,
                                          const FockConfig& cfg)
{
    const auto [na, nb] = mode_occupations(rho, cfg);
    return std::max(thermal_entropy(na) + thermal_entropy(nb) -
                        von_neumann_entropy_fock(rho),
                    0.0);
}

// Pure-state overload: S(rho) = 0.
inline double coherence_thermal_reference(const Eigen::VectorXcd& psi,
                                          const FockConfig& cfg)
{
    const int n = cfg.n();
    double na_mean = 0.0, nb_mean = 0.0;
    for (int na = 0; na < n; ++na)
        for (int nb = 0; nb < n; ++nb) {
            const double pop = std::norm(psi(na * n + nb));
            na_mean += na * pop;
            nb_mean += nb * pop;
        }
    return thermal_entropy(na_mean) + thermal_entropy(nb_mean);
}

// --- coherent states ---------------------------------------------------------

inline Eigen::VectorXcd coherent_single(Complex alpha, int cutoff)
{
    Eigen::VectorXcd v(cutoff + 1);
    v(0) = std::exp(-0.5 * std::norm(alpha));
    for (int k = 1; k <= cutoff; ++k)
        v(k) = v(k - 1) * alpha / std::sqrt(double(k));
    return v;
}

// Product coherent state matching dimensionless quadrature means d:
// alpha = (d_X + i d_P) / 2 per mode.
inline Eigen::VectorXcd coherent_product(const Eigen::Vector4d& d,
                                         const FockConfig& cfg)
{
    const Complex aa(0.5 * d(0), 0.5 * d(1));
    const Complex ab(0.5 * d(2), 0.5 * d(3));
    const Eigen::VectorXcd va = coherent_single(aa, cfg.cutoff);
    const Eigen::VectorXcd vb = coherent_single(ab, cfg.cutoff);
    Eigen::VectorXcd psi(cfg.dim());
    for (int na = 0; na < cfg.n(); ++na)
        psi.segment(na * cfg.n(), cfg.n()) = va(na) * vb;
    return psi;
}

// --- dynamics -----------------------------------------------------------------

// Schroedinger RK4 stepper for closed evolution of a pure state.
class UnitaryStepper {
  public:
    UnitaryStepper(const ModelParams& p, const FockConfig& cfg)
        : H_(build_hamiltonian(p, cfg).sparseView().cast<Complex>())
    {
    }

    void step(Eigen::VectorXcd& psi, double dt) const
    {
        const Complex mi(0.0, -1.0);
        const Eigen::VectorXcd k1 = mi * (H_ * psi);
        const Eigen::VectorXcd k2 = mi * (H_ * (psi + 0.5 * dt * k1).eval());
        const Eigen::VectorXcd k3 = mi * (H_ * (psi + 0.5 * dt * k2).eval());
        const Eigen::VectorXcd k4 = mi * (H_ * (psi + dt * k3).eval());
        psi += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        psi /= psi.norm(); // RK4 is not exactly unitary; renormalize
    }

  private:
    Eigen::SparseMatrix<Complex> H_;
};

// RK4 stepper for the local-dissipator Lindblad equation
//   rho' = -i[H, rho] + g1 D[a] rho + g2 D[a^dag] rho,
// g1 = Gamma (nbar+1), g2 = Gamma nbar, written as
//   rho' = C rho + (C rho)^dag + g1 a rho a^dag + g2 a^dag rho a
// with C = -iH - (g1/2) N_a - (g2/2)(N_a + 1), valid for Hermitian rho.
class LindbladStepper {
  public:
    LindbladStepper(const ModelParams& p, const BathParams& bath,
                    const FockConfig& cfg)
        : n_(cfg.n()),
          g1_(bath.gamma * (bath.n_bar(p.omega) + 1.0)),
          g2_(bath.gamma * bath.n_bar(p.omega))
    {
        const Complex mi(0.0, -1.0);
        Eigen::MatrixXcd C = mi * build_hamiltonian(p, cfg).cast<Complex>();
        for (int na = 0; na < n_; ++na)
            for (int nb = 0; nb < n_; ++nb)
                C(na * n_ + nb, na * n_ + nb) +=
                    -0.5 * g1_ * na - 0.5 * g2_ * (na + 1.0);
        C_ = C.sparseView();

        // per-row factor sqrt(na + 1) of the block-shifted jump terms
        const Eigen::Index m = cfg.dim() - n_;
        f_.resize(m);
        for (int na = 0; na + 1 < n_; ++na)
            for (int nb = 0; nb < n_; ++nb)
                f_(na * n_ + nb) = std::sqrt(na + 1.0);

        const Eigen::Index d = cfg.dim();
        for (auto* w : {&k1_, &k2_, &k3_, &k4_, &arg_})
            w->resize(d, d);
    }

    // out = -i[H, rho] + dissipators; rho is assumed Hermitian.  The jump
    // terms a rho a^dag and a^dag rho a are block shifts by one row of
    // Fock indices, scaled by sqrt(na + 1) on both sides.
    void apply_liouvillian(const Eigen::MatrixXcd& rho,
                           Eigen::MatrixXcd& out) const
    {
        const Eigen::Index d = rho.rows(), m = d - n_;
        out.noalias() = C_ * rho;
        for (Eigen::Index j = 0; j < d; ++j) { // out += out^dag, in place
            out(j, j) += std::conj(out(j, j));
            for (Eigen::Index i = j + 1; i < d; ++i) {
                const Complex s = out(i, j) + std::conj(out(j, i));
                out(i, j) = s;
                out(j, i) = std::conj(s);
            }
        }
        if (g1_ != 0.0)
            for (Eigen::Index j = 0; j < m; ++j)
                out.col(j).head(m).array() +=
                    (g1_ * f_(j)) *
                    (f_ * rho.col(n_ + j).segment(n_, m).array());
        if (g2_ != 0.0)
            for (Eigen::Index j = 0; j < m; ++j)
                out.col(n_ + j).segment(n_, m).array() +=
                    (g2_ * f_(j)) * (f_ * rho.col(j).head(m).array());
    }

    void step(Eigen::MatrixXcd& rho, double dt) const
    {
        apply_liouvillian(rho, k1_);
        arg_ = rho + (0.5 * dt) * k1_;
        apply_liouvillian(arg_, k2_);
        arg_ = rho + (0.5 * dt) * k2_;
        apply_liouvillian(arg_, k3_);
        arg_ = rho + dt * k3_;
        apply_liouvillian(arg_, k4_);
        rho += (dt / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    }

  private:
    int n_;
    Eigen::SparseMatrix<Complex> C_;
    Eigen::ArrayXcd f_;
    double g1_, g2_;
    mutable Eigen::MatrixXcd k1_, k2_, k3_, k4_, arg_;
};

// --- single-mode helpers (fidelity oracle) -----------------------------------

inline Eigen::MatrixXcd thermal_rho_single(double nbar, int cutoff)
{
    Eigen::VectorXd p(cutoff + 1);
    const double r = nbar / (nbar + 1.0);
    p(0) = 1.0 / (nbar + 1.0);
    for (int k = 1; k <= cutoff; ++k)
        p(k) = p(k - 1) * r;
    return p.cast<Complex>().asDiagonal();
}

// Uhlmann fidelity between two density matrices:
// F = (tr sqrt(sqrt(r1) r2 sqrt(r1)))^2.
inline double fidelity_fock(const Eigen::MatrixXcd& r1,
                            const Eigen::MatrixXcd& r2)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es1(r1);
    const Eigen::VectorXd sq = es1.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::MatrixXcd root =
        es1.eigenvectors() * sq.cast<Complex>().asDiagonal() *
        es1.eigenvectors().adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es2(root * r2 * root);
    const double tr = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return tr * tr;
}

} // namespace cohmodes::fock
