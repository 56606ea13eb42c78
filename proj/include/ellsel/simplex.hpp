#ifndef ELLSEL_SIMPLEX_HPP
#define ELLSEL_SIMPLEX_HPP

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "ellsel/quadrature.hpp"

namespace ellsel
{

inline constexpr int max_dim = 3;

/// A positive quantity written as smooth * prod_i u_i^left[i] (1 - u_i)^right[i]
/// in the chart variables u, with smooth > 0 on the closed chart (away from
/// the corners for the cube chart at p >= 2).
struct FactoredValue {
    double value = 0.0;
    double smooth = 0.0;
    std::array<int, max_dim> left{};
    std::array<int, max_dim> right{};
};

/// Index of the pair (j, k), j < k, among the differences t_j - t_k.
int pair_index(int j, int k);
int pair_count(int p);

/// A point of the ordered simplex 0 <= t_p <= ... <= t_1 <= 1 with the
/// quantities whose powers enter Selberg-type integrands.
struct ChartPoint {
    int p = 0;
    std::array<FactoredValue, max_dim> t;  // t_j
    std::array<FactoredValue, max_dim> tc; // 1 - t_j
    std::array<FactoredValue, max_dim> d;  // t_j - t_k, j < k
    std::array<FactoredValue, max_dim> dc; // 1 - (t_j - t_k)
    FactoredValue jacobian;
};

/// Real powers carried by each quantity in an integrand.
struct ChartPowers {
    std::complex<double> t = 0.0;
    std::complex<double> tc = 0.0;
    std::complex<double> d = 0.0;
    std::complex<double> dc = 0.0;
};

/// Parametrisation of (part of) the ordered simplex by the unit cube.
class SimplexChart
{
public:
    /// t_j = u_1 ... u_j, jacobian prod u_i^{p-i}; covers the whole simplex.
    static SimplexChart cube(int p);

    /// p = 2: triangle (V, M, G) of the barycentric subdivision, with V a
    /// vertex, M the midpoint of an adjacent edge and G the centroid;
    /// t = V + rho ((M - V) + theta (G - M)). index in 0..5.
    static SimplexChart barycentric(int index);

    int dim() const noexcept
    {
        return m_p;
    }

    ChartPoint map(std::span<const double> u, std::span<const double> uc) const;

    /// Singular exponents of prod Q^{powers(Q)} * jacobian along each axis,
    /// with the minimal continuation order.
    std::vector<AxisSingularitySpec> axis_specs(const ChartPowers &powers) const;

private:
    enum class Kind { Cube, Triangle };
    SimplexChart(Kind kind, int p) : m_kind(kind), m_p(p)
    {
    }

    Kind m_kind;
    int m_p;
    std::array<double, 2> m_v{}, m_m{}, m_g{};
};

/// Charts covering the simplex: the cube chart for p = 1 and p = 3, the six
/// barycentric triangles for p = 2.
std::vector<SimplexChart> simplex_cover(int p);

struct CubeImage {
    std::array<double, max_dim> t{};
    double jacobian = 1.0;
};

/// The plain cube map t_j = u_1 ... u_j.
CubeImage simplex_to_cube(std::span<const double> u);

/// The smooth factor of Q^e, i.e. smooth^e, for real positive smooth.
std::complex<double> smooth_power(const FactoredValue &q, std::complex<double> e);

} // namespace ellsel

#endif
