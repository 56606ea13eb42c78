#ifndef ELLSEL_ELLIPTIC_SELBERG_HPP
#define ELLSEL_ELLIPTIC_SELBERG_HPP

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ellsel/quadrature.hpp"
#include "ellsel/simplex.hpp"
#include "ellsel/theta.hpp"

namespace ellsel
{

/// Geometric schedule of exponent shifts eps_k = eps0 * ratio^k, k < rungs.
struct EpsLadder {
    double eps0 = 0.04;
    double ratio = 0.5;
    int rungs = 5;
};

/// One evaluation of the elliptic Selberg integral
///
///   J_p(lambda, tau; a) = int_{Delta_p} prod_j E(t_j)^a sigma_lambda(t_j)
///                         prod_{j<k} E(t_j - t_k)^{1/(p+1)}
///                         theta_{2(p+1), p+1}(lambda + sum_j t_j / (p+1)) dt
///
/// and of I_p = J_p(lambda) + (-1)^{p+1} J_p(-lambda). For exponents with a
/// singular axis at a non-positive integer the value is the limit along the
/// ladder a + eps_k.
struct SelbergJob {
    int p = 1;
    complex lambda = 0.3;
    ModularPoint mp{complex(0.0, 1.0)};
    std::optional<complex> a; // default -p/(p+1)
    int quad_level = 0;       // 0: default_level(p)
    EpsLadder ladder;
    double tol = 1e-6;
    int threads = 1;
    int extra_order = 0; // added to every continuation order (at most 3)
    /// Use E(t_k - t_j)^{1/(p+1)}, j < k, continued to negative arguments
    /// with arg = -pi, instead of E(t_j - t_k)^{1/(p+1)}. Multiplies J_p by
    /// exp(-pi i p (p-1) / (2 (p+1))). Off by default.
    bool reversed_differences = false;

    complex exponent() const;
    int level() const;
    /// Throws InvalidArgument / InvalidDomain.
    void validate() const;
    /// lambda real in (0,1), tau = iT with T in [0.5, 4], p <= 2.
    bool in_validated_domain() const;
};

/// Exponents (E(t_j), 1 - t_j, t_j - t_k, 1 - (t_j - t_k)) of the integrand,
/// with the simple poles of sigma_lambda absorbed into the first two.
ChartPowers elliptic_powers(int p, complex a);

/// Axis structure of the integrand under the plain cube map t_j = u_1...u_j.
std::vector<AxisSingularitySpec> axis_exponents(int p, complex a);

/// Integrand of J_p at the cube point u (plain cube map), divided by the
/// declared singular powers (divided = true) or in full.
complex j_integrand(std::span<const double> u, const SelbergJob &job, bool divided = true);

/// J_p at the job's exponent, summed over the charts covering the simplex.
/// Throws ContinuationPole when the exponent sits on a pole.
QuadratureResult j_integral(const SelbergJob &job);

struct IntegralValue {
    complex value{};
    double quad_err = 0.0;
    double extrapolation_err = 0.0;
    long evals = 0;
    bool extrapolated = false;
    std::vector<std::pair<double, complex>> samples; // (eps_k, I_p at a + eps_k)

    double err() const;
};

/// I_p(lambda, tau) at the job's exponent; uses the ladder when needed.
/// Throws ExtrapolationUnstable when the tableau corrections grow.
IntegralValue i_integral(const SelbergJob &job);

/// Whether the exponent needs the eps-ladder (some axis exponent within
/// 1e-6 of a non-positive integer).
bool needs_ladder(int p, complex a);

/// K_p theta_1(lambda, tau)^{p+1}.
complex rhs_eval(const SelbergJob &job);

struct VerificationReport {
    int p = 0;
    complex lambda{};
    complex tau{};
    complex a{};
    int quad_level = 0;
    double tol = 0.0;
    EpsLadder ladder;

    complex lhs{};
    complex rhs{};
    double abs_residual = 0.0;
    double rel_residual = 0.0;
    double quad_err_est = 0.0;
    double extrapolation_err_est = 0.0;
    bool extrapolated = false;
    bool validated_domain = false;
    bool pass = false;
    long evals = 0;
    std::string diagnostic; // empty on success
};

VerificationReport verify_identity(const SelbergJob &job);

struct RatioPoint {
    complex lambda{};
    complex ratio{};
    double err_est = 0.0;
    bool valid = false;
    std::string diagnostic;
};

struct RatioScan {
    std::vector<RatioPoint> points;
    complex mean{};
    double spread = 0.0;  // max |r_i - r_j| / |mean| over valid points
    double rel_std = 0.0; // standard deviation / |mean|
};

/// I_p / theta_1^{p+1} on a grid of lambda; job supplies everything else.
RatioScan ratio_scan(const SelbergJob &job, std::span<const complex> lambdas);

} // namespace ellsel

#endif
