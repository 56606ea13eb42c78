#include "ellsel/elliptic_selberg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ellsel/error.hpp"
#include "ellsel/gamma_selberg.hpp"

namespace ellsel
{

namespace
{

constexpr double lattice_threshold = 1e-10;
constexpr double ladder_trigger = 1e-6;

// Smooth factor of the J_p integrand at a chart point, for lambda and,
// when sign != 0, plus sign times the same at -lambda.
class SmoothIntegrand
{
public:
    SmoothIntegrand(const EllipticKernel &kernel, int p, complex a, complex lambda, int sign,
                    bool reversed = false)
        : m_kernel(kernel), m_p(p), m_a(a), m_lambda(lambda), m_sign(sign),
          m_level(2 * (p + 1), p + 1)
    {
        if (reversed)
            m_phase = std::polar(1.0, -std::numbers::pi * pair_count(p) / (p + 1));
        m_theta_lambda = kernel.theta1(lambda);
        if (sign != 0)
            m_theta_minus = kernel.theta1(-lambda);
    }

    complex operator()(const ChartPoint &cp) const
    {
        const int p = m_p;
        const complex ea = m_a - 1.0;
        const double gamma = 1.0 / (p + 1);
        complex log_part = 0.0;
        double tsum = 0.0;
        for (int j = 0; j < p; ++j) {
            const auto re = m_kernel.reduced_e_with_log(cp.t[j].value, cp.tc[j].value);
            log_part += ea * (std::log(cp.t[j].smooth) + std::log(cp.tc[j].smooth) + re.log);
            tsum += cp.t[j].value;
        }
        for (int k = 0; k < pair_count(p); ++k) {
            const auto re = m_kernel.reduced_e_with_log(cp.d[k].value, cp.dc[k].value);
            log_part += gamma * (std::log(cp.d[k].smooth) + std::log(cp.dc[k].smooth) + re.log);
        }
        const complex common = m_phase * std::exp(log_part) * cp.jacobian.smooth;

        complex v = lambda_part(cp, m_lambda, m_theta_lambda, tsum);
        if (m_sign != 0)
            v += double(m_sign) * lambda_part(cp, -m_lambda, m_theta_minus, tsum);
        return common * v;
    }

private:
    complex lambda_part(const ChartPoint &cp, complex lambda, complex theta_lambda, double tsum) const
    {
        complex prod = 1.0;
        for (int j = 0; j < m_p; ++j)
            prod *= m_kernel.theta1(lambda - cp.t[j].value) / theta_lambda;
        return prod * theta_level(m_level, lambda + tsum / double(m_p + 1), m_kernel.point());
    }

    const EllipticKernel &m_kernel;
    int m_p;
    complex m_a;
    complex m_lambda;
    int m_sign;
    ThetaLevelIndex m_level;
    complex m_theta_lambda;
    complex m_theta_minus;
    complex m_phase = 1.0;
};

std::vector<AxisSingularitySpec> chart_specs(const SimplexChart &chart, int p, complex a, int extra)
{
    auto specs = chart.axis_specs(elliptic_powers(p, a));
    for (auto &s : specs) {
        s.m_left = std::min(s.m_left + extra, 3);
        s.m_right = std::min(s.m_right + extra, 3);
    }
    return specs;
}

// Integral over the simplex of the smooth integrand, all charts.
QuadratureResult integrate(const SelbergJob &job, const EllipticKernel &kernel, complex a, int sign)
{
    const int p = job.p;
    SmoothIntegrand g(kernel, p, a, job.lambda, sign, job.reversed_differences);
    QuadOptions opts{job.level(), job.threads};
    QuadratureResult total;
    double err2 = 0.0;
    for (const auto &chart : simplex_cover(p)) {
        auto specs = chart_specs(chart, p, a, job.extra_order);
        CubeIntegrand f = [&](std::span<const double> u, std::span<const double> uc) {
            return g(chart.map(u, uc));
        };
        QuadratureResult r = cube_integrate(f, specs, opts);
        total.value += r.value;
        total.evals += r.evals;
        total.level = r.level;
        err2 += r.err_est * r.err_est;
    }
    total.err_est = std::sqrt(err2);
    return total;
}

bool near_nonpositive_integer(complex c)
{
    const double n = std::round(c.real());
    return n <= 0.0 && std::abs(c - n) < ladder_trigger;
}

// Lagrange weights of the interpolant through (eps_k, .) evaluated at 0.
std::vector<double> extrapolation_weights(const std::vector<double> &eps)
{
    std::vector<double> w(eps.size(), 1.0);
    for (std::size_t k = 0; k < eps.size(); ++k)
        for (std::size_t j = 0; j < eps.size(); ++j)
            if (j != k)
                w[k] *= eps[j] / (eps[j] - eps[k]);
    return w;
}

} // namespace

complex SelbergJob::exponent() const
{
    return a ? *a : complex(-double(p) / (p + 1));
}

int SelbergJob::level() const
{
    return quad_level > 0 ? quad_level : default_level(p);
}

void SelbergJob::validate() const
{
    if (p < 1 || p > 3)
        throw Error(ErrorCode::InvalidArgument, "p must be 1, 2 or 3");
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
        throw Error(ErrorCode::InvalidArgument, "lambda not finite");
    if (!(tol > 0.0))
        throw Error(ErrorCode::InvalidArgument, "tol must be positive");
    if (threads < 1)
        throw Error(ErrorCode::InvalidArgument, "threads must be at least 1");
    if (extra_order < 0)
        throw Error(ErrorCode::InvalidArgument, "extra_order must be non-negative");
    if (!(ladder.eps0 > 0.0) || !(ladder.ratio > 0.0 && ladder.ratio < 1.0) || ladder.rungs < 3)
        throw Error(ErrorCode::InvalidArgument, "ladder needs eps0 > 0, 0 < ratio < 1, rungs >= 3");
    const complex d0 = theta1(0.0, mp, 1);
    if (std::abs(theta1(lambda, mp)) <= lattice_threshold * std::abs(d0))
        throw Error(ErrorCode::InvalidDomain, "lambda on lattice");
}

bool SelbergJob::in_validated_domain() const
{
    const complex tau = mp.tau();
    return p <= 2 && lambda.imag() == 0.0 && lambda.real() > 0.0 && lambda.real() < 1.0 &&
           tau.real() == 0.0 && tau.imag() >= 0.5 && tau.imag() <= 4.0;
}

double IntegralValue::err() const
{
    return std::hypot(quad_err, extrapolation_err);
}

ChartPowers elliptic_powers(int p, complex a)
{
    const double gamma = 1.0 / (p + 1);
    return {a - 1.0, a - 1.0, gamma, gamma};
}

std::vector<AxisSingularitySpec> axis_exponents(int p, complex a)
{
    return SimplexChart::cube(p).axis_specs(elliptic_powers(p, a));
}

complex j_integrand(std::span<const double> u, const SelbergJob &job, bool divided)
{
    job.validate();
    const int p = job.p;
    if (int(u.size()) != p)
        throw Error(ErrorCode::InvalidArgument, "cube point dimension differs from p");
    std::array<double, max_dim> uc{};
    for (int i = 0; i < p; ++i) {
        if (!(u[i] > 0.0 && u[i] < 1.0))
            throw Error(ErrorCode::InvalidArgument, "cube point must be interior");
        uc[i] = 1.0 - u[i];
    }
    const std::span<const double> ucs(uc.data(), p);
    EllipticKernel kernel(job.mp);
    const complex a = job.exponent();
    SimplexChart chart = SimplexChart::cube(p);
    complex v = SmoothIntegrand(kernel, p, a, job.lambda, 0, job.reversed_differences)(chart.map(u, ucs));
    if (!divided) {
        const auto specs = chart.axis_specs(elliptic_powers(p, a));
        for (int i = 0; i < p; ++i)
            v *= std::exp((specs[i].c_left - 1.0) * std::log(u[i]) +
                          (specs[i].c_right - 1.0) * std::log(uc[i]));
    }
    return v;
}

QuadratureResult j_integral(const SelbergJob &job)
{
    job.validate();
    EllipticKernel kernel(job.mp);
    return integrate(job, kernel, job.exponent(), 0);
}

bool needs_ladder(int p, complex a)
{
    for (const auto &chart : simplex_cover(p))
        for (const auto &s : chart.axis_specs(elliptic_powers(p, a)))
            if (near_nonpositive_integer(s.c_left) || near_nonpositive_integer(s.c_right))
                return true;
    return false;
}

IntegralValue i_integral(const SelbergJob &job)
{
    job.validate();
    EllipticKernel kernel(job.mp);
    const int sign = (job.p % 2 == 1) ? 1 : -1; // (-1)^{p+1}
    const complex a = job.exponent();
    IntegralValue out;
    if (!needs_ladder(job.p, a)) {
        QuadratureResult r = integrate(job, kernel, a, sign);
        out.value = r.value;
        out.quad_err = r.err_est;
        out.evals = r.evals;
        return out;
    }

    out.extrapolated = true;
    std::vector<double> eps, errs;
    for (int k = 0; k < job.ladder.rungs; ++k) {
        const double e = job.ladder.eps0 * std::pow(job.ladder.ratio, k);
        QuadratureResult r = integrate(job, kernel, a + e, sign);
        out.samples.emplace_back(e, r.value);
        out.evals += r.evals;
        eps.push_back(e);
        errs.push_back(r.err_est);
    }
    Extrapolation ex = richardson_extrapolate(out.samples);
    const auto w = extrapolation_weights(eps);
    double propagated = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        propagated += std::abs(w[k]) * errs[k];
        scale = std::max(scale, std::abs(out.samples[k].second));
    }
    const double noise = 10.0 * propagated + 1e-13 * scale;
    if (ex.last_correction > ex.previous_correction && ex.last_correction > noise)
        throw Error(ErrorCode::ExtrapolationUnstable,
                    "tableau corrections grow: " + std::to_string(ex.previous_correction) + " -> " +
                        std::to_string(ex.last_correction));
    out.value = ex.limit;
    out.quad_err = propagated;
    out.extrapolation_err = ex.err_est;
    return out;
}

complex rhs_eval(const SelbergJob &job)
{
    job.validate();
    return rhs_constant(job.p) * std::pow(theta1(job.lambda, job.mp), job.p + 1);
}

VerificationReport verify_identity(const SelbergJob &job)
{
    VerificationReport rep;
    rep.p = job.p;
    rep.lambda = job.lambda;
    rep.tau = job.mp.tau();
    rep.a = job.exponent();
    rep.quad_level = job.level();
    rep.tol = job.tol;
    rep.ladder = job.ladder;
    try {
        job.validate();
        rep.validated_domain = job.in_validated_domain();
        rep.rhs = rhs_eval(job);
        IntegralValue lhs = i_integral(job);
        rep.lhs = lhs.value;
        rep.quad_err_est = lhs.quad_err;
        rep.extrapolation_err_est = lhs.extrapolation_err;
        rep.extrapolated = lhs.extrapolated;
        rep.evals = lhs.evals;
        rep.abs_residual = std::abs(rep.lhs - rep.rhs);
        rep.rel_residual = rep.abs_residual / std::abs(rep.rhs);
        rep.pass = rep.rel_residual <= job.tol && lhs.err() <= job.tol * std::abs(rep.rhs);
        if (!rep.pass)
            rep.diagnostic = rep.rel_residual > job.tol ? "relative residual above tol"
                                                        : "error estimate above tol";
    } catch (const Error &e) {
        rep.pass = false;
        rep.diagnostic = e.what();
    }
    return rep;
}

RatioScan ratio_scan(const SelbergJob &job, std::span<const complex> lambdas)
{
    RatioScan scan;
    std::vector<complex> good;
    for (complex lambda : lambdas) {
        RatioPoint pt;
        pt.lambda = lambda;
        SelbergJob j = job;
        j.lambda = lambda;
        try {
            IntegralValue iv = i_integral(j);
            const complex th = std::pow(theta1(lambda, j.mp), j.p + 1);
            pt.ratio = iv.value / th;
            pt.err_est = iv.err() / std::abs(th);
            pt.valid = true;
            good.push_back(pt.ratio);
        } catch (const Error &e) {
            pt.diagnostic = e.what();
        }
        scan.points.push_back(pt);
    }
    if (!good.empty()) {
        complex mean = 0.0;
        for (complex r : good)
            mean += r;
        mean /= double(good.size());
        double spread = 0.0, var = 0.0;
        for (complex r : good) {
            var += std::norm(r - mean);
            for (complex s : good)
                spread = std::max(spread, std::abs(r - s));
        }
        scan.mean = mean;
        scan.spread = spread / std::abs(mean);
        scan.rel_std = std::sqrt(var / double(good.size())) / std::abs(mean);
    }
    return scan;
}

} // namespace ellsel
