#ifndef ELLSEL_GAMMA_SELBERG_HPP
#define ELLSEL_GAMMA_SELBERG_HPP

#include <complex>

#include "ellsel/quadrature.hpp"

namespace ellsel
{

using complex = std::complex<double>;

/// Parameters (p, alpha, beta, gamma) of the classical Selberg integral
///
///   B_p = int_{Delta_p} prod_j t_j^{alpha-1} (1 - t_j)^{beta-1} prod_{j<k} (t_j - t_k)^{2 gamma}.
struct SelbergClassicalParams {
    int p = 1;
    complex alpha = 1.0;
    complex beta = 1.0;
    complex gamma_exp = 0.0;
};

/// Principal-branch log Gamma(z). Throws PoleAtNonPositiveInteger when z is
/// within 1e-8 of 0, -1, -2, ...
complex log_gamma(complex z);

/// Gamma(z) = exp(log_gamma(z)).
complex gamma_fn(complex z);

/// Closed-form value of B_p(alpha, beta, gamma), assembled in log space.
complex selberg_value(const SelbergClassicalParams &params);

/// The constant
///   c_p = -(2 pi)^{p/2} e^{pi i p/(p+1)} e^{-pi i (p+2)/4} prod_{j=1}^p (1 - e^{-pi i j/(p+1)}).
complex c_constant(int p);

/// K_p = c_p B_p(1/2 + 1/(2(p+1)), -p/(p+1), 1/(2(p+1))).
complex rhs_constant(int p);

/// B_p evaluated by direct cubature of the defining integral (p in {1, 2},
/// real alpha, beta > 0, gamma >= 0). Independent of the gamma function.
/// Throws ToleranceNotReached when the estimated relative error exceeds tol.
QuadratureResult selberg_oracle(int p, double alpha, double beta, double gamma_exp,
                                const QuadOptions &opts = {}, double tol = 1e-9);

} // namespace ellsel

#endif
