#ifndef ELLSEL_THETA_HPP
#define ELLSEL_THETA_HPP

#include <complex>
#include <vector>

namespace ellsel
{

using complex = std::complex<double>;

/// Modular parameter tau in the upper half-plane together with the accuracy
/// controls of every theta series evaluated at it.
///
/// The first Jacobi theta function is
///
///   theta_1(t, tau) = -sum_{j in Z} exp(pi i (j+1/2)^2 tau + 2 pi i (j+1/2)(t+1/2))
///                   =  2 sum_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1) pi t),   q = e^{pi i tau}.
///
/// Series are truncated at j in [-J, J-1] with
///   J = ceil(sqrt(ln(1/eps_series) / (pi Im tau)) + |Im t| / Im tau) + 2,
/// widened if needed until the dropped tail is below eps_series times the
/// largest retained term.
class ModularPoint
{
public:
    /// Smallest accepted Im(tau); below it the series lose accuracy too quickly.
    static constexpr double min_imag_tau = 0.05;

    explicit ModularPoint(complex tau, double eps_series = 1e-16, int max_terms = 64);

    complex tau() const noexcept
    {
        return m_tau;
    }
    double eps_series() const noexcept
    {
        return m_eps_series;
    }
    int max_terms() const noexcept
    {
        return m_max_terms;
    }

private:
    complex m_tau;
    double m_eps_series;
    int m_max_terms;
};

/// Index (kappa, m) of a level-kappa theta function; m is stored reduced
/// modulo 2 kappa.
class ThetaLevelIndex
{
public:
    ThetaLevelIndex(int kappa, long m);

    int kappa() const noexcept
    {
        return m_kappa;
    }
    int m() const noexcept
    {
        return m_m;
    }

private:
    int m_kappa;
    int m_m;
};

/// Largest |Im t| (in units of Im tau) accepted by the theta series.
inline constexpr double series_guard = 8.0;

/// order-th t-derivative of theta_1(t, tau), order in 0..3.
complex theta1(complex t, const ModularPoint &mp, int order = 0);

/// Term-wise tau-derivative of the order-th t-derivative of theta_1.
complex theta1_dtau(complex t, const ModularPoint &mp, int order = 0);

/// E(t, tau) = theta_1(t, tau) / theta_1'(0, tau).
complex cap_e(complex t, const ModularPoint &mp);

/// log E(t, tau) on the branch continuous along (0, t] with arg E -> 0 as t -> 0+.
complex log_e_tracked(double t, const ModularPoint &mp);

/// rho = theta_1' / theta_1 (order 0) or its t-derivative (order 1).
complex rho(complex t, const ModularPoint &mp, int order = 0);

/// sigma_lambda(t) = theta_1(lambda - t) theta_1'(0) / (theta_1(lambda) theta_1(t)).
complex sigma(complex lambda, complex t, const ModularPoint &mp);

/// theta_{kappa,m}(lambda, tau) = sum_j exp(2 pi i kappa (j + m/2kappa)^2 tau
///                                          + 2 pi i kappa (j + m/2kappa) lambda).
complex theta_level(const ThetaLevelIndex &idx, complex lambda, const ModularPoint &mp);

/// Everything that depends on tau alone, computed once: the nome coefficients
/// of theta_1, theta_1'(0) and a branch table for log E on the real segment.
///
/// E is factored as E(t) = t (1 - t) R(t) with R smooth and zero-free on
/// [0, 1], R(0) = R(1) = 1 and R(t) = R(1 - t). Integrands that need powers of
/// E near t = 0 or t = 1 use R directly so no cancellation occurs.
class EllipticKernel
{
public:
    explicit EllipticKernel(const ModularPoint &mp);

    const ModularPoint &point() const noexcept
    {
        return m_mp;
    }

    complex theta1(complex t, int order = 0) const;
    complex theta1_prime0() const noexcept
    {
        return m_prime0;
    }

    /// theta_1(x) / x for real x, exact limit theta_1'(0) at x = 0.
    complex theta1_over_x(double x) const;

    /// R(t) given t and its complement 1 - t (both accurate).
    complex reduced_e(double t, double tc) const;

    /// Continuous log R(t) with log R(0) = 0.
    complex log_reduced_e(double t, double tc) const;

    /// Tracked log E(t) = ln t + ln(1 - t) + log R(t).
    complex log_e(double t) const;

    /// log E(t) together with R(t), sharing one series evaluation.
    struct ReducedE {
        complex value;
        complex log;
    };
    ReducedE reduced_e_with_log(double t, double tc) const;

    /// Nodes of the branch table (exposed for tests).
    std::size_t branch_nodes() const noexcept
    {
        return m_branch_t.size();
    }

private:
    complex lookup_log(double x, complex r) const;

    ModularPoint m_mp;
    std::vector<complex> m_coeff; // 2 (-1)^n exp(pi i tau (n+1/2)^2)
    int m_real_terms;              // truncation for real arguments
    complex m_prime0;
    std::vector<double> m_branch_t;
    std::vector<complex> m_branch_r;
    std::vector<complex> m_branch_log;
};

/// Number of paired terms J used for theta_1 at |Im t| = imag_t.
int theta1_terms(const ModularPoint &mp, double imag_t);

} // namespace ellsel

#endif
