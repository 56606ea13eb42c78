#include "ellsel/conformal_block.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ellsel/error.hpp"

namespace ellsel
{

namespace
{

constexpr double pi = std::numbers::pi;

double relative(complex got, complex want)
{
    const double scale = std::max(std::abs(got), std::abs(want));
    return scale == 0.0 ? 0.0 : std::abs(got - want) / scale;
}

} // namespace

BlockCandidate theta_power_candidate(int p, int n)
{
    if (p < 1 || n < 1)
        throw Error(ErrorCode::InvalidArgument, "candidate needs p >= 1 and n >= 1");
    BlockCandidate c;
    c.p = p;
    c.eval = [n](complex lambda, const ModularPoint &mp) {
        const complex th = theta1(lambda, mp, 0);
        const complex d1 = theta1(lambda, mp, 1);
        const complex d2 = theta1(lambda, mp, 2);
        const complex dt = theta1_dtau(lambda, mp, 0);
        const double nd = n;
        BlockJet jet;
        jet.u = std::pow(th, n);
        const complex pow1 = std::pow(th, n - 1);
        jet.u_ll = nd * pow1 * d2;
        if (n >= 2)
            jet.u_ll += nd * (nd - 1.0) * std::pow(th, n - 2) * d1 * d1;
        jet.u_tau = nd * pow1 * dt;
        return jet;
    };
    return c;
}

complex heat_residual(const BlockCandidate &cand, complex lambda, const ModularPoint &mp)
{
    const int p = cand.p;
    const complex rp = rho(lambda, mp, 1);
    const BlockJet jet = cand.eval(lambda, mp);
    const double pp = double(p) * (p + 1);
    const complex lhs = complex(0.0, 4.0 * pi * (p + 1)) * jet.u_tau;
    const complex rhs = jet.u_ll + pp * rp * jet.u;
    const double scale = std::max(std::abs(jet.u_ll), pp * std::abs(jet.u * rp));
    if (!(scale > 0.0))
        throw Error(ErrorCode::DivisionDegenerate, "heat residual scale vanishes");
    return (lhs - rhs) / scale;
}

TransformReport transform_checks(const BlockCandidate &cand, complex lambda, const ModularPoint &mp)
{
    const int p = cand.p;
    const complex tau = mp.tau();
    const complex u = cand.eval(lambda, mp).u;
    TransformReport r;
    r.period = relative(cand.eval(lambda + 2.0, mp).u, u);
    const complex factor = std::exp(complex(0.0, -4.0 * pi * (p + 1)) * (lambda + tau));
    r.quasi_period = relative(cand.eval(lambda + 2.0 * tau, mp).u, factor * u);
    const double parity = (p % 2 == 1) ? 1.0 : -1.0;
    r.weyl = relative(cand.eval(-lambda, mp).u, parity * u);
    return r;
}

} // namespace ellsel
