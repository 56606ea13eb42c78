#include "ellsel/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <string>
#include <thread>

#include "ellsel/error.hpp"

namespace ellsel
{

namespace
{

constexpr double pi = std::numbers::pi;

// Neumaier-compensated complex accumulator.
class Accumulator
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
    static void add_part(double &sum, double &comp, double x)
    {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double m_re = 0.0, m_cre = 0.0, m_im = 0.0, m_cim = 0.0;
};

bool finite(complex z)
{
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// x^{c-1}, exactly 1 when c == 1.
complex power_weight(double x, complex c)
{
    if (c == complex(1.0))
        return 1.0;
    return std::exp((c - 1.0) * std::log(x));
}

// Tanh-sinh abscissa pair on (0,1) at parameter t: (x, 1-x) and the
// derivative of the map.
struct TsNode {
    double x;
    double xc;
    double dx;
};

TsNode ts_node(double t)
{
    double s = pi * std::sinh(std::abs(t));
    double e = std::exp(-s);
    double small = e / (1.0 + e);
    double large = 1.0 / (1.0 + e);
    double dx = pi * std::cosh(t) * small * large;
    if (t < 0)
        return {small, large, dx};
    return {large, small, dx};
}

constexpr double ts_full_range = 6.2;   // nodes reach the floating point endpoints
constexpr double ts_middle_range = 3.6; // bounded integrands: tail below 1e-24

// Chebyshev points on [0,1] of order n, as (y, 1-y), in increasing y.
std::vector<std::pair<double, double>> chebyshev_points(int n)
{
    std::vector<std::pair<double, double>> pts(n);
    for (int i = 0; i < n; ++i) {
        double half = (2 * i + 1) * pi / (4.0 * n);
        double c = std::cos(half), s = std::sin(half);
        // x = cos(2 half), y = (1 + x)/2 = cos^2(half)
        pts[n - 1 - i] = {c * c, s * s};
    }
    return pts;
}

// Weights of int_0^1 y^{c-1} phi(y) dy ~ sum w_i phi(y_i) with phi replaced by
// its interpolant at the Chebyshev points of order n (same order as above).
std::vector<complex> chebyshev_weights(complex c, int n)
{
    auto mu = chebyshev_moments(c, n);
    std::vector<complex> w(n);
    for (int i = 0; i < n; ++i) {
        double theta = (2 * i + 1) * pi / (2.0 * n);
        Accumulator acc;
        acc.add(mu[0]);
        for (int k = 1; k < n; ++k)
            acc.add(2.0 * mu[k] * std::cos(k * theta));
        w[n - 1 - i] = acc.value() / double(n);
    }
    return w;
}

int panel_order(int level)
{
    return 2 * level + 2;
}

int middle_level(int level)
{
    return std::max(level - 2, 0);
}

void check_level(int level)
{
    if (level < 1 || level > 12)
        throw Error(ErrorCode::InvalidArgument, "quadrature level must be in 1..12");
}

void check_poles(complex c, int m, const char *side)
{
    for (int k = 0; k < m; ++k)
        if (std::abs(c + double(k)) < 1e-10)
            throw Error(ErrorCode::ContinuationPole,
                        std::string(side) + " exponent at continuation pole c = " +
                            std::to_string(-k));
}

} // namespace

int default_level(int dim) noexcept
{
    switch (dim) {
        case 1:
            return 7;
        case 2:
            return 6;
        default:
            return 5;
    }
}

void AxisSingularitySpec::validate() const
{
    if (m_left < 0 || m_left > 3 || m_right < 0 || m_right > 3)
        throw Error(ErrorCode::InvalidArgument, "subtraction order must be in 0..3");
    if (c_left.real() + m_left <= 0.0 || c_right.real() + m_right <= 0.0)
        throw Error(ErrorCode::InvalidArgument, "continuation order too small for exponent");
}

int subtraction_order(complex c)
{
    double x = -c.real();
    if (std::abs(x - std::round(x)) < 1e-10)
        x = std::round(x); // c within rounding of a pole counts as the pole
    if (x < 0.0)
        return 0;
    return int(std::floor(x)) + 1;
}

std::vector<complex> chebyshev_moments(complex c, int n)
{
    std::vector<complex> mu(std::max(n, 3));
    mu[0] = 1.0 / c;
    mu[1] = 2.0 / (c + 1.0) - 1.0 / c;
    mu[2] = 8.0 / (c + 2.0) - 8.0 / (c + 1.0) + 1.0 / c;
    for (int k = 2; k + 1 < n; ++k) {
        double kd = k;
        mu[k + 1] = (-2.0 * mu[k] - mu[k - 1] * (kd - c - 1.0) / (kd - 1.0) - 2.0 / (kd * kd - 1.0)) *
                    (kd + 1.0) / (kd + c + 1.0);
    }
    mu.resize(n);
    return mu;
}

namespace
{

template <class Eval>
QuadratureResult tanh_sinh_impl(Eval eval, int level)
{
    check_level(level);
    const double h = std::ldexp(1.0, -level);
    const int kmax = int(std::ceil(ts_full_range / h));
    Accumulator fine, coarse;
    long evals = 0;
    for (int k = -kmax; k <= kmax; ++k) {
        TsNode nd = ts_node(k * h);
        if (nd.x <= 0.0 || nd.xc <= 0.0 || nd.dx == 0.0)
            continue;
        complex v = eval(nd);
        if (!v.real() && !v.imag())
            continue;
        ++evals;
        if (!finite(v))
            throw Error(ErrorCode::NonFinite, "integrand non-finite at u = " + std::to_string(nd.x));
        complex term = v * nd.dx;
        fine.add(h * term);
        if (k % 2 == 0)
            coarse.add(2.0 * h * term);
    }
    QuadratureResult r;
    r.value = fine.value();
    r.err_est = std::abs(r.value - coarse.value());
    r.evals = evals;
    r.level = level;
    return r;
}

} // namespace

QuadratureResult tanh_sinh(const Integrand1D &f, int level)
{
    // Without the complement, nodes that round to 1 carry no information.
    return tanh_sinh_impl(
        [&](const TsNode &nd) -> complex {
            if (nd.x >= 1.0)
                return 0.0;
            return f(nd.x);
        },
        level);
}

QuadratureResult tanh_sinh(const Integrand1DPair &f, int level)
{
    return tanh_sinh_impl([&](const TsNode &nd) { return f(nd.x, nd.xc); }, level);
}

AxisRule::AxisRule(const AxisSingularitySpec &spec, int level) : m_level(level)
{
    spec.validate();
    check_level(level);
    check_poles(spec.c_left, spec.m_left, "left");
    check_poles(spec.c_right, spec.m_right, "right");

    const double H = panel_width;
    const complex cl = spec.c_left, cr = spec.c_right;

    auto add_panels = [&](int n, bool fine) {
        auto pts = chebyshev_points(n);
        auto wl = chebyshev_weights(cl, n);
        auto wr = chebyshev_weights(cr, n);
        complex hl = std::pow(H, cl), hr = std::pow(H, cr);
        for (int i = 0; i < n; ++i) {
            double u = H * pts[i].first;
            double uc = 1.0 - u;
            complex w = hl * wl[i] * power_weight(uc, cr);
            m_nodes.push_back({u, uc, fine ? w : 0.0, fine ? 0.0 : w});
        }
        for (int i = n - 1; i >= 0; --i) {
            double v = H * pts[i].first;
            double u = 1.0 - v;
            complex w = hr * wr[i] * power_weight(u, cl);
            m_nodes.push_back({u, v, fine ? w : 0.0, fine ? 0.0 : w});
        }
    };
    add_panels(panel_order(level), true);
    add_panels(panel_order(level - 1), false);

    const double width = 1.0 - 2.0 * H;
    const double h = std::ldexp(1.0, -middle_level(level));
    const int kmax = int(std::ceil(ts_middle_range / h));
    for (int k = -kmax; k <= kmax; ++k) {
        TsNode nd = ts_node(k * h);
        double u = H + width * nd.x;
        double uc = H + width * nd.xc;
        complex w = width * nd.dx * power_weight(u, cl) * power_weight(uc, cr);
        m_nodes.push_back({u, uc, h * w, (k % 2 == 0) ? 2.0 * h * w : 0.0});
    }
    std::stable_sort(m_nodes.begin(), m_nodes.end(),
                     [](const Node &a, const Node &b) { return a.u < b.u; });
}

QuadratureResult continued_integral(const Integrand1DPair &g, const AxisSingularitySpec &spec,
                                    int level)
{
    AxisRule rule(spec, level);
    Accumulator fine, coarse;
    long evals = 0;
    for (const auto &nd : rule.nodes()) {
        complex v = g(nd.u, nd.uc);
        ++evals;
        if (!finite(v))
            throw Error(ErrorCode::NonFinite, "integrand non-finite at u = " + std::to_string(nd.u));
        fine.add(nd.w_fine * v);
        coarse.add(nd.w_coarse * v);
    }
    QuadratureResult r;
    r.value = fine.value();
    r.err_est = std::abs(r.value - coarse.value());
    r.evals = evals;
    r.level = level;
    return r;
}

namespace
{

struct AxisPartial {
    complex value;
    double err;
    long evals;
};

class CubeRunner
{
public:
    CubeRunner(const CubeIntegrand &f, std::vector<AxisRule> rules) : m_f(f), m_rules(std::move(rules))
    {
    }

    AxisPartial run(int threads) const
    {
        const auto &nodes = m_rules[0].nodes();
        const std::size_t n = nodes.size();
        std::vector<AxisPartial> parts(n);
        const int d = int(m_rules.size());

        auto work = [&](std::size_t begin, std::size_t end, std::exception_ptr &failure,
                        std::size_t &failed_at) {
            std::vector<double> u(d), uc(d);
            for (std::size_t i = begin; i < end; ++i) {
                try {
                    u[0] = nodes[i].u;
                    uc[0] = nodes[i].uc;
                    parts[i] = inner(1, u, uc);
                    if (!finite(parts[i].value))
                        throw Error(ErrorCode::NonFinite,
                                    "integrand non-finite at u = " + std::to_string(u[0]));
                } catch (const Error &e) {
                    failure = std::make_exception_ptr(
                        Error(e.code(), std::string("axis 0: ") + e.what()));
                    failed_at = i;
                    return;
                }
            }
        };

        const int nt = std::max(1, std::min<int>(threads, int(n)));
        std::vector<std::exception_ptr> failures(nt);
        std::vector<std::size_t> failed_at(nt, n);
        if (nt == 1) {
            work(0, n, failures[0], failed_at[0]);
        } else {
            std::vector<std::jthread> pool;
            for (int t = 0; t < nt; ++t) {
                std::size_t b = n * t / nt, e = n * (t + 1) / nt;
                pool.emplace_back([&, b, e, t] { work(b, e, failures[t], failed_at[t]); });
            }
        }
        for (int t = 0; t < nt; ++t)
            if (failures[t])
                std::rethrow_exception(failures[t]);

        return reduce(nodes, parts);
    }

private:
    static AxisPartial reduce(const std::vector<AxisRule::Node> &nodes,
                              const std::vector<AxisPartial> &parts)
    {
        Accumulator fine, coarse;
        double inner_err = 0.0;
        long evals = 0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            fine.add(nodes[i].w_fine * parts[i].value);
            coarse.add(nodes[i].w_coarse * parts[i].value);
            inner_err += std::abs(nodes[i].w_fine) * parts[i].err;
            evals += parts[i].evals;
        }
        complex v = fine.value();
        return {v, std::hypot(std::abs(v - coarse.value()), inner_err), evals};
    }

    AxisPartial inner(int k, std::vector<double> &u, std::vector<double> &uc) const
    {
        if (k == int(m_rules.size()))
            return {m_f(std::span<const double>(u), std::span<const double>(uc)), 0.0, 1};
        const auto &nodes = m_rules[k].nodes();
        std::vector<AxisPartial> parts(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            u[k] = nodes[i].u;
            uc[k] = nodes[i].uc;
            try {
                parts[i] = inner(k + 1, u, uc);
            } catch (const Error &e) {
                throw Error(e.code(), "axis " + std::to_string(k) + ": " + e.what());
            }
            if (!finite(parts[i].value))
                throw Error(ErrorCode::NonFinite, "axis " + std::to_string(k) +
                                                      ": integrand non-finite at u = " +
                                                      std::to_string(u[k]));
        }
        return reduce(nodes, parts);
    }

    const CubeIntegrand &m_f;
    std::vector<AxisRule> m_rules;
};

} // namespace

QuadratureResult cube_integrate(const CubeIntegrand &f, std::span<const AxisSingularitySpec> specs,
                                const QuadOptions &opts)
{
    const int d = int(specs.size());
    if (d < 1 || d > 3)
        throw Error(ErrorCode::InvalidArgument, "cube dimension must be 1, 2 or 3");
    const int level = opts.level > 0 ? opts.level : default_level(d);
    std::vector<AxisRule> rules;
    for (int k = 0; k < d; ++k) {
        try {
            rules.emplace_back(specs[k], level);
        } catch (const Error &e) {
            throw Error(e.code(), "axis " + std::to_string(k) + ": " + e.what());
        }
    }
    CubeRunner runner(f, std::move(rules));
    AxisPartial p = runner.run(opts.threads);
    return {p.value, p.err, p.evals, level};
}

Extrapolation richardson_extrapolate(std::span<const std::pair<double, complex>> samples)
{
    const std::size_t n = samples.size();
    if (n < 3)
        throw Error(ErrorCode::InsufficientSamples, "need at least 3 samples");
    for (std::size_t i = 0; i < n; ++i)
        if (!(samples[i].first > 0.0) || (i > 0 && !(samples[i].first < samples[i - 1].first)))
            throw Error(ErrorCode::NonGeometricSpacing, "eps must be positive and strictly decreasing");
    const double ratio = samples[1].first / samples[0].first;
    for (std::size_t i = 2; i < n; ++i)
        if (std::abs(samples[i].first / samples[i - 1].first - ratio) > 1e-9 * ratio)
            throw Error(ErrorCode::NonGeometricSpacing, "eps ratio is not constant");

    std::vector<std::vector<complex>> P(n, std::vector<complex>(n));
    for (std::size_t i = 0; i < n; ++i) {
        P[i][0] = samples[i].second;
        for (std::size_t j = 1; j <= i; ++j) {
            double ea = samples[i - j].first, eb = samples[i].first;
            P[i][j] = (ea * P[i][j - 1] - eb * P[i - 1][j - 1]) / (ea - eb);
        }
    }
    Extrapolation r;
    r.limit = P[n - 1][n - 1];
    r.last_correction = std::abs(P[n - 1][n - 1] - P[n - 2][n - 2]);
    r.previous_correction = std::abs(P[n - 2][n - 2] - P[n - 3][n - 3]);
    r.err_est = richardson_safety * r.last_correction;
    return r;
}

} // namespace ellsel
