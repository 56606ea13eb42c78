#include "ellsel/gamma_selberg.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ellsel/error.hpp"
#include "ellsel/simplex.hpp"

namespace ellsel
{

namespace
{

constexpr double pi = std::numbers::pi;

// Lanczos coefficients (g = 607/128, 15 terms).
constexpr double lanczos_cof[14] = {
    57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
    -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
    -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
    .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
    -.261908384015814087e-4, .368991826595316234e-5,
};

complex log_gamma_right(complex z)
{
    complex tmp = z + 5.24218750000000000;
    complex ser = 0.999999999999997092;
    complex y = z;
    for (double c : lanczos_cof) {
        y += 1.0;
        ser += c / y;
    }
    return (z + 0.5) * std::log(tmp) - tmp + std::log(2.5066282746310005 * ser) - std::log(z);
}

// log sin(pi z) for Im z >= 0, continuous in the closed upper half-plane.
complex log_sin_pi_upper(complex z)
{
    const complex i(0.0, 1.0);
    complex w = std::exp(2.0 * pi * i * z);
    return -pi * i * z + std::log(1.0 - w) + complex(-std::numbers::ln2, pi / 2);
}

class Summer
{
public:
    void add(complex x)
    {
        add_part(m_re, m_cre, x.real());
        add_part(m_im, m_cim, x.imag());
    }
    complex value() const
    {
        return {m_re + m_cre, m_im + m_cim};
    }

private:
    static void add_part(double &s, double &c, double x)
    {
        double t = s + x;
        c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
        s = t;
    }
    double m_re = 0.0, m_cre = 0.0, m_im = 0.0, m_cim = 0.0;
};

complex log_gamma_named(complex z, const std::string &name)
{
    try {
        return log_gamma(z);
    } catch (const Error &e) {
        throw Error(e.code(), "Gamma(" + name + ") at a pole");
    }
}

} // namespace

complex log_gamma(complex z)
{
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw Error(ErrorCode::InvalidArgument, "log_gamma argument not finite");
    if (z.real() < 0.5) {
        double n = std::round(z.real());
        if (n <= 0.0 && std::abs(z - n) < 1e-8)
            throw Error(ErrorCode::PoleAtNonPositiveInteger,
                        "log_gamma at z = " + std::to_string(int(n)));
        if (z.imag() < 0.0)
            return std::conj(log_gamma(std::conj(z)));
        return std::log(pi) - log_sin_pi_upper(z) - log_gamma_right(1.0 - z);
    }
    return log_gamma_right(z);
}

complex gamma_fn(complex z)
{
    return std::exp(log_gamma(z));
}

complex selberg_value(const SelbergClassicalParams &params)
{
    const int p = params.p;
    if (p < 1)
        throw Error(ErrorCode::InvalidArgument, "p must be positive");
    const complex a = params.alpha, b = params.beta, g = params.gamma_exp;
    Summer sum;
    for (int j = 0; j < p; ++j) {
        const std::string js = std::to_string(j);
        sum.add(log_gamma_named(1.0 + g + double(j) * g, "1 + gamma + " + js + " gamma"));
        sum.add(log_gamma_named(a + double(j) * g, "alpha + " + js + " gamma"));
        sum.add(log_gamma_named(b + double(j) * g, "beta + " + js + " gamma"));
        sum.add(-log_gamma_named(1.0 + g, "1 + gamma"));
        sum.add(-log_gamma_named(a + b + double(p + j - 1) * g,
                                 "alpha + beta + " + std::to_string(p + j - 1) + " gamma"));
    }
    sum.add(-std::lgamma(double(p + 1)));
    return std::exp(sum.value());
}

complex c_constant(int p)
{
    if (p < 1)
        throw Error(ErrorCode::InvalidArgument, "p must be positive");
    const double n = p + 1;
    complex c = -std::pow(2.0 * pi, p / 2.0) * std::polar(1.0, pi * p / n) *
                std::polar(1.0, -pi * (p + 2) / 4.0);
    for (int j = 1; j <= p; ++j)
        c *= 1.0 - std::polar(1.0, -pi * j / n);
    return c;
}

complex rhs_constant(int p)
{
    const double n = p + 1;
    SelbergClassicalParams params{p, 0.5 + 1.0 / (2.0 * n), -p / n, 1.0 / (2.0 * n)};
    return c_constant(p) * selberg_value(params);
}

QuadratureResult selberg_oracle(int p, double alpha, double beta, double gamma_exp,
                                const QuadOptions &opts, double tol)
{
    if (p != 1 && p != 2)
        throw Error(ErrorCode::InvalidArgument, "selberg_oracle supports p = 1, 2");
    if (!(alpha > 0.0) || !(beta > 0.0) || !(gamma_exp >= 0.0))
        throw Error(ErrorCode::InvalidArgument, "selberg_oracle needs alpha, beta > 0, gamma >= 0");
    ChartPowers powers{alpha - 1.0, beta - 1.0, 2.0 * gamma_exp, 0.0};
    QuadratureResult total;
    double err2 = 0.0;
    for (const auto &chart : simplex_cover(p)) {
        auto specs = chart.axis_specs(powers);
        CubeIntegrand f = [&](std::span<const double> u, std::span<const double> uc) -> complex {
            ChartPoint cp = chart.map(u, uc);
            complex v = smooth_power(cp.jacobian, 1.0);
            for (int j = 0; j < p; ++j)
                v *= smooth_power(cp.t[j], powers.t) * smooth_power(cp.tc[j], powers.tc);
            for (int k = 0; k < pair_count(p); ++k)
                v *= smooth_power(cp.d[k], powers.d);
            return v;
        };
        QuadratureResult r = cube_integrate(f, specs, opts);
        total.value += r.value;
        total.evals += r.evals;
        total.level = r.level;
        err2 += r.err_est * r.err_est;
    }
    total.err_est = std::sqrt(err2);
    if (total.err_est > tol * std::abs(total.value))
        throw Error(ErrorCode::ToleranceNotReached,
                    "selberg_oracle error estimate " + std::to_string(total.err_est));
    return total;
}

} // namespace ellsel
