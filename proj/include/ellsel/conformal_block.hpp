#ifndef ELLSEL_CONFORMAL_BLOCK_HPP
#define ELLSEL_CONFORMAL_BLOCK_HPP

#include <complex>
#include <functional>

#include "ellsel/theta.hpp"

namespace ellsel
{

/// Value of a candidate u(lambda, tau) with the derivatives the heat
/// equation needs.
struct BlockJet {
    complex u;
    complex u_ll;  // d^2 u / d lambda^2
    complex u_tau; // d u / d tau
};

/// Candidate element of the level-2(p+1) conformal block space.
struct BlockCandidate {
    int p = 1;
    std::function<BlockJet(complex lambda, const ModularPoint &mp)> eval;
};

/// u = theta_1(lambda, tau)^n with derivatives from term-wise series.
/// n = p + 1 is the built-in candidate; other n give deliberately wrong ones.
BlockCandidate theta_power_candidate(int p, int n);
inline BlockCandidate theta_power_candidate(int p)
{
    return theta_power_candidate(p, p + 1);
}

/// [4 pi i (p+1) u_tau - u_ll - p(p+1) rho'(lambda) u] / scale with
/// scale = max(|u_ll|, p(p+1) |u rho'|). Throws PoleProximity near the lattice.
complex heat_residual(const BlockCandidate &cand, complex lambda, const ModularPoint &mp);

/// Relative defects of the laws u(lambda+2) = u(lambda),
/// u(lambda+2tau) = e^{-4 pi i (p+1)(lambda+tau)} u(lambda) and
/// u(-lambda) = (-1)^{p+1} u(lambda).
struct TransformReport {
    double period = 0.0;
    double quasi_period = 0.0;
    double weyl = 0.0;
};

TransformReport transform_checks(const BlockCandidate &cand, complex lambda, const ModularPoint &mp);

} // namespace ellsel

#endif
