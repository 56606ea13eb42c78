#include "ellsel/theta.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ellsel/error.hpp"

namespace ellsel
{

namespace
{

constexpr double pi = std::numbers::pi;
constexpr double lattice_threshold = 1e-10;
constexpr int branch_cells = 256; // cells of width 1/512 on [0, 1/2]

// Log of the magnitude bound of the n-th paired term of the order-th
// derivative, |sin| <= cosh <= e^{k |Im t|}.
double log_term_bound(double imag_tau, double abs_imag_t, int order, int n)
{
    const double k = (2 * n + 1) * pi;
    const double h = n + 0.5;
    return -pi * imag_tau * h * h + k * abs_imag_t + order * std::log(k);
}

int truncation(const ModularPoint &mp, double abs_imag_t, int order)
{
    const double y = mp.tau().imag();
    const double eps = mp.eps_series();
    int terms = static_cast<int>(std::ceil(std::sqrt(std::log(1.0 / eps) / (pi * y)) + abs_imag_t / y)) + 2;
    if (terms > mp.max_terms()) {
        throw Error(ErrorCode::NonConvergent, "theta series needs " + std::to_string(terms)
                                                  + " terms, cap is " + std::to_string(mp.max_terms()));
    }
    double log_max = -INFINITY;
    for (int n = 0; n < terms; ++n) {
        log_max = std::max(log_max, log_term_bound(y, abs_imag_t, order, n));
    }
    const double log_eps = std::log(eps);
    while (true) {
        const double lb = log_term_bound(y, abs_imag_t, order, terms);
        const double lratio = log_term_bound(y, abs_imag_t, order, terms + 1) - lb;
        if (lratio < 0.0) {
            // geometric bound on the dropped tail
            const double log_tail = lb - std::log1p(-std::exp(lratio));
            if (log_tail <= log_eps + log_max) {
                return terms;
            }
        }
        log_max = std::max(log_max, lb);
        if (++terms > mp.max_terms()) {
            throw Error(ErrorCode::NonConvergent, "theta series tail bound not met within max_terms");
        }
    }
}

void check_order(int order)
{
    if (order < 0 || order > 3) {
        throw Error(ErrorCode::InvalidArgument, "derivative order must be in 0..3");
    }
}

void check_guard(complex t, const ModularPoint &mp)
{
    if (!(std::abs(t.imag()) <= series_guard * mp.tau().imag())) {
        throw Error(ErrorCode::InvalidDomain, "|Im t| exceeds the series guard; reduce by quasi-periodicity first");
    }
}

complex nome_coeff(complex tau, int n)
{
    const double h = n + 0.5;
    const complex c = 2.0 * std::exp(complex(0.0, pi) * tau * (h * h));
    return (n % 2 == 0) ? c : -c;
}

// d^order/dt^order sin(k t).
complex sin_derivative(double k, complex t, int order)
{
    const complex arg = k * t;
    const double kp = std::pow(k, order);
    switch (order) {
        case 0:
            return std::sin(arg);
        case 1:
            return kp * std::cos(arg);
        case 2:
            return -kp * std::sin(arg);
        default:
            return -kp * std::cos(arg);
    }
}

template <typename Coeff>
complex theta1_sum(complex t, int order, int terms, Coeff &&coeff)
{
    complex sum = 0.0;
    for (int n = terms - 1; n >= 0; --n) {
        sum += coeff(n) * sin_derivative((2 * n + 1) * pi, t, order);
    }
    return sum;
}

} // namespace

ModularPoint::ModularPoint(complex tau, double eps_series, int max_terms)
    : m_tau(tau), m_eps_series(eps_series), m_max_terms(max_terms)
{
    if (!(tau.imag() > 0.0) || !std::isfinite(tau.real()) || !std::isfinite(tau.imag())) {
        throw Error(ErrorCode::InvalidDomain, "Im(tau) must be positive");
    }
    if (tau.imag() < min_imag_tau) {
        throw Error(ErrorCode::InvalidDomain, "Im(tau) below the supported minimum 0.05");
    }
    if (!(eps_series > 0.0 && eps_series <= 1e-6)) {
        throw Error(ErrorCode::InvalidArgument, "eps_series must lie in (0, 1e-6]");
    }
    if (max_terms < 8) {
        throw Error(ErrorCode::InvalidArgument, "max_terms must be at least 8");
    }
}

ThetaLevelIndex::ThetaLevelIndex(int kappa, long m) : m_kappa(kappa), m_m(0)
{
    if (kappa < 2) {
        throw Error(ErrorCode::InvalidArgument, "theta level kappa must be >= 2");
    }
    const long period = 2L * kappa;
    m_m = static_cast<int>(((m % period) + period) % period);
}

int theta1_terms(const ModularPoint &mp, double imag_t)
{
    return truncation(mp, std::abs(imag_t), 0);
}

complex theta1(complex t, const ModularPoint &mp, int order)
{
    check_order(order);
    check_guard(t, mp);
    const int terms = truncation(mp, std::abs(t.imag()), order);
    return theta1_sum(t, order, terms, [&](int n) { return nome_coeff(mp.tau(), n); });
}

complex theta1_dtau(complex t, const ModularPoint &mp, int order)
{
    check_order(order);
    check_guard(t, mp);
    // the extra (n+1/2)^2 factor is absorbed by two more powers of k in the bound
    const int terms = truncation(mp, std::abs(t.imag()), std::min(order + 2, 5));
    return theta1_sum(t, order, terms, [&](int n) {
        const double h = n + 0.5;
        return complex(0.0, pi * h * h) * nome_coeff(mp.tau(), n);
    });
}

complex cap_e(complex t, const ModularPoint &mp)
{
    const complex d0 = theta1(0.0, mp, 1);
    if (!(std::abs(d0) > 1e-300) || !std::isfinite(std::abs(d0))) {
        throw Error(ErrorCode::DivisionDegenerate, "theta_1'(0) underflows");
    }
    return theta1(t, mp, 0) / d0;
}

complex log_e_tracked(double t, const ModularPoint &mp)
{
    return EllipticKernel(mp).log_e(t);
}

complex rho(complex t, const ModularPoint &mp, int order)
{
    if (order != 0 && order != 1) {
        throw Error(ErrorCode::InvalidArgument, "rho order must be 0 or 1");
    }
    const complex th = theta1(t, mp, 0);
    const complex d0 = theta1(0.0, mp, 1);
    if (std::abs(th) < lattice_threshold * std::abs(d0)) {
        throw Error(ErrorCode::PoleProximity, "t is too close to the lattice Z + tau Z");
    }
    const complex r = theta1(t, mp, 1) / th;
    if (order == 0) {
        return r;
    }
    return theta1(t, mp, 2) / th - r * r;
}

complex sigma(complex lambda, complex t, const ModularPoint &mp)
{
    const complex d0 = theta1(0.0, mp, 1);
    const complex th_lambda = theta1(lambda, mp, 0);
    const complex th_t = theta1(t, mp, 0);
    const double threshold = lattice_threshold * std::abs(d0);
    if (std::abs(th_lambda) < threshold) {
        throw Error(ErrorCode::PoleProximity, "lambda is too close to the lattice Z + tau Z");
    }
    if (std::abs(th_t) < threshold) {
        throw Error(ErrorCode::PoleProximity, "t is too close to the lattice Z + tau Z");
    }
    return theta1(lambda - t, mp, 0) * d0 / (th_lambda * th_t);
}

complex theta_level(const ThetaLevelIndex &idx, complex lambda, const ModularPoint &mp)
{
    check_guard(lambda, mp);
    const double y = mp.tau().imag();
    const double kappa = idx.kappa();
    const double shift = idx.m() / (2.0 * kappa);
    // |term| ~ exp(-2 pi kappa Im(tau) (x - x0)^2) up to a common factor
    const double x0 = -lambda.imag() / (2.0 * y);
    const double width = std::sqrt(std::log(1.0 / mp.eps_series()) / (2.0 * pi * kappa * y));
    const long lo = static_cast<long>(std::floor(x0 - shift - width)) - 2;
    const long hi = static_cast<long>(std::ceil(x0 - shift + width)) + 2;
    if (hi - lo + 1 > 2L * mp.max_terms()) {
        throw Error(ErrorCode::NonConvergent, "level-theta series exceeds max_terms");
    }
    const complex two_pi_i_kappa(0.0, 2.0 * pi * kappa);
    complex sum = 0.0;
    for (long j = lo; j <= hi; ++j) {
        const double x = static_cast<double>(j) + shift;
        sum += std::exp(two_pi_i_kappa * x * (x * mp.tau() + lambda));
    }
    return sum;
}

EllipticKernel::EllipticKernel(const ModularPoint &mp) : m_mp(mp)
{
    const int cap = truncation(mp, series_guard * mp.tau().imag(), 3);
    m_coeff.reserve(static_cast<std::size_t>(cap));
    for (int n = 0; n < cap; ++n) {
        m_coeff.push_back(nome_coeff(mp.tau(), n));
    }
    m_real_terms = truncation(mp, 0.0, 3);
    m_prime0 = theta1(0.0, 1);
    if (!(std::abs(m_prime0) > 1e-300)) {
        throw Error(ErrorCode::DivisionDegenerate, "theta_1'(0) underflows");
    }

    // Track log R along [0, 1/2]; R(t) = R(1 - t) covers the other half.
    m_branch_t.push_back(0.0);
    m_branch_r.push_back(1.0);
    m_branch_log.push_back(0.0);
    constexpr double cell = 0.5 / branch_cells;
    for (int k = 0; k < branch_cells; ++k) {
        const double end = (k + 1 == branch_cells) ? 0.5 : (k + 1) * cell;
        double t = m_branch_t.back();
        while (t < end) {
            double step = end - t;
            while (true) {
                const double tn = (step == end - t) ? end : t + step;
                const complex rn = reduced_e(tn, 1.0 - tn);
                if (!(std::abs(rn) > 1e-12)) {
                    throw Error(ErrorCode::BranchAmbiguous, "E vanishes on the tracking path");
                }
                const complex d = std::log(rn / m_branch_r.back());
                if (std::abs(d.imag()) <= pi / 4) {
                    m_branch_t.push_back(tn);
                    m_branch_r.push_back(rn);
                    m_branch_log.push_back(m_branch_log.back() + d);
                    t = tn;
                    break;
                }
                step *= 0.5;
                if (step < 1e-12) {
                    throw Error(ErrorCode::BranchAmbiguous, "phase of E varies too fast to track");
                }
            }
        }
    }
}

complex EllipticKernel::theta1(complex t, int order) const
{
    check_order(order);
    check_guard(t, m_mp);
    const int terms = (t.imag() == 0.0) ? m_real_terms : truncation(m_mp, std::abs(t.imag()), order);
    return theta1_sum(t, order, terms, [&](int n) { return m_coeff[static_cast<std::size_t>(n)]; });
}

complex EllipticKernel::theta1_over_x(double x) const
{
    complex sum = 0.0;
    for (int n = m_real_terms - 1; n >= 0; --n) {
        const double k = (2 * n + 1) * pi;
        const double s = (x == 0.0) ? k : std::sin(k * x) / x;
        sum += m_coeff[static_cast<std::size_t>(n)] * s;
    }
    return sum;
}

complex EllipticKernel::reduced_e(double t, double tc) const
{
    const double x = std::min(t, tc);
    const double other = std::max(t, tc);
    return theta1_over_x(x) / (m_prime0 * other);
}

complex EllipticKernel::lookup_log(double x, complex r) const
{
    auto it = std::lower_bound(m_branch_t.begin(), m_branch_t.end(), x);
    std::size_t k = static_cast<std::size_t>(it - m_branch_t.begin());
    if (k == m_branch_t.size()) {
        k = m_branch_t.size() - 1;
    } else if (k > 0 && (x - m_branch_t[k - 1]) < (m_branch_t[k] - x)) {
        --k;
    }
    return m_branch_log[k] + std::log(r / m_branch_r[k]);
}

complex EllipticKernel::log_reduced_e(double t, double tc) const
{
    return reduced_e_with_log(t, tc).log;
}

EllipticKernel::ReducedE EllipticKernel::reduced_e_with_log(double t, double tc) const
{
    const complex r = reduced_e(t, tc);
    return {r, lookup_log(std::min(t, tc), r)};
}

complex EllipticKernel::log_e(double t) const
{
    if (!(t > 0.0 && t < 1.0)) {
        throw Error(ErrorCode::InvalidDomain, "log_e_tracked needs t in (0, 1)");
    }
    const double tc = 1.0 - t;
    return std::log(t) + std::log(tc) + log_reduced_e(t, tc);
}

} // namespace ellsel
