#ifndef ELLSEL_QUADRATURE_HPP
#define ELLSEL_QUADRATURE_HPP

#include <complex>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace ellsel
{

using complex = std::complex<double>;

struct QuadratureResult {
    complex value{};
    double err_est = 0.0; // |fine - coarse|, propagated root-sum-square across axes
    long evals = 0;
    int level = 0;
};

struct QuadOptions {
    int level = 0; // 0 selects default_level(dimension)
    int threads = 1;
};

/// Default per-axis level for a d-dimensional cube integral.
int default_level(int dim) noexcept;

/// Singular structure of one axis: the integrand behaves as
/// u^{c_left-1} near 0 and (1-u)^{c_right-1} near 1, times a smooth factor.
/// m_left / m_right is the continuation order, i.e. the number of Taylor
/// terms that would have to be subtracted for the integral to converge.
struct AxisSingularitySpec {
    complex c_left = 1.0;
    int m_left = 0;
    complex c_right = 1.0;
    int m_right = 0;

    /// Throws InvalidArgument when m is outside 0..3 or Re c + m <= 0.
    void validate() const;
};

/// Smallest admissible continuation order for exponent c.
int subtraction_order(complex c);

/// f(u) on (0,1)
using Integrand1D = std::function<complex(double)>;
/// f(u, 1-u) where the complement is supplied exactly
using Integrand1DPair = std::function<complex(double, double)>;

/// Tanh-sinh rule on (0,1) at step 2^-level. Nodes run until they reach the
/// endpoints in floating point, err_est compares with step 2^{1-level}.
QuadratureResult tanh_sinh(const Integrand1D &f, int level);
QuadratureResult tanh_sinh(const Integrand1DPair &f, int level);

/// Modified moments int_0^1 x^{c-1} T_k(2x-1) dx for k < n.
std::vector<complex> chebyshev_moments(complex c, int n);

/// Quadrature rule for int_0^1 u^{c_left-1} (1-u)^{c_right-1} g(u) du with g
/// smooth, understood as the analytic continuation in c_left, c_right.
///
/// The interval is split at H and 1-H. The end panels interpolate g at
/// Chebyshev points and integrate the interpolant against the exact weight
/// by modified moments, which realises the continuation without sampling
/// g at the endpoint. The middle piece uses tanh-sinh. Every node carries a
/// fine weight and a coarse weight (the same rule one level lower); nodes
/// of only one of the two rules have a zero weight in the other.
class AxisRule
{
public:
    struct Node {
        double u;
        double uc; // 1 - u, computed without cancellation
        complex w_fine;
        complex w_coarse;
    };

    static constexpr double panel_width = 0.25;

    AxisRule(const AxisSingularitySpec &spec, int level);

    const std::vector<Node> &nodes() const noexcept
    {
        return m_nodes;
    }
    int level() const noexcept
    {
        return m_level;
    }

private:
    std::vector<Node> m_nodes;
    int m_level;
};

/// int_0^1 u^{c_left-1} (1-u)^{c_right-1} g(u) du (continued). g receives
/// (u, 1-u). Throws ContinuationPole when |c + k| < 1e-10 for some k below
/// the continuation order, NonFinite on a non-finite sample.
QuadratureResult continued_integral(const Integrand1DPair &g, const AxisSingularitySpec &spec,
                                    int level);

/// F(u, uc) on (0,1)^d with uc[i] = 1 - u[i]. F is the smooth factor only:
/// the singular powers declared in specs are applied by the rule.
using CubeIntegrand = std::function<complex(std::span<const double>, std::span<const double>)>;

/// Nested product rule, outermost axis first. With opts.threads > 1 the
/// nodes of the outermost axis are distributed over threads; the reduction
/// order is fixed so the result does not depend on the thread count.
QuadratureResult cube_integrate(const CubeIntegrand &f, std::span<const AxisSingularitySpec> specs,
                                const QuadOptions &opts);

struct Extrapolation {
    complex limit{};
    double err_est = 0.0;
    double last_correction = 0.0;
    double previous_correction = 0.0;
};

/// Safety factor applied to the last diagonal correction of the tableau.
inline constexpr double richardson_safety = 3.0;

/// Polynomial extrapolation to eps = 0 through all samples (Neville).
/// Samples must number at least 3, with eps strictly decreasing in a
/// constant ratio.
Extrapolation richardson_extrapolate(std::span<const std::pair<double, complex>> samples);

} // namespace ellsel

#endif
