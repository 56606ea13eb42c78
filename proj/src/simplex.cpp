#include "ellsel/simplex.hpp"

#include <cmath>

#include "ellsel/error.hpp"

namespace ellsel
{

int pair_index(int j, int k)
{
    // (0,1) -> 0, (0,2) -> 1, (1,2) -> 2
    return j + k - 1;
}

int pair_count(int p)
{
    return p * (p - 1) / 2;
}

namespace
{

FactoredValue regular(double v)
{
    FactoredValue q;
    q.value = v;
    q.smooth = v;
    return q;
}

// 1 - u_a u_{a+1} ... u_{b-1} without cancellation.
double one_minus_product(std::span<const double> u, std::span<const double> uc, int a, int b)
{
    double comp = 0.0, prod = 1.0;
    for (int i = a; i < b; ++i) {
        comp += prod * uc[i];
        prod *= u[i];
    }
    return comp;
}

// Affine quantity Q on the triangle chart, given its values at V, M, G.
FactoredValue triangle_value(double qv, double qm, double qg, double rho, double theta,
                             double thetac)
{
    FactoredValue q;
    if (qv == 0.0 && qm == 0.0) {
        q.smooth = qg;
        q.left = {1, 1, 0};
    } else if (qv == 0.0) {
        q.smooth = thetac * qm + theta * qg;
        q.left = {1, 0, 0};
    } else {
        q.smooth = qv + rho * ((qm - qv) + theta * (qg - qm));
        q.value = q.smooth;
        return q;
    }
    q.value = q.smooth * rho * (q.left[1] ? theta : 1.0);
    return q;
}

} // namespace

SimplexChart SimplexChart::cube(int p)
{
    if (p < 1 || p > max_dim)
        throw Error(ErrorCode::InvalidArgument, "simplex dimension must be 1, 2 or 3");
    return SimplexChart(Kind::Cube, p);
}

SimplexChart SimplexChart::barycentric(int index)
{
    if (index < 0 || index > 5)
        throw Error(ErrorCode::InvalidArgument, "barycentric triangle index must be in 0..5");
    // vertices A=(0,0), B=(1,0), C=(1,1) in (t1, t2)
    static constexpr double verts[3][2] = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}};
    static constexpr double mids[3][2] = {{0.5, 0.0}, {1.0, 0.5}, {0.5, 0.5}}; // AB, BC, AC
    static constexpr int layout[6][2] = {{0, 0}, {0, 2}, {1, 0}, {1, 1}, {2, 1}, {2, 2}};
    SimplexChart c(Kind::Triangle, 2);
    const auto &v = verts[layout[index][0]];
    const auto &m = mids[layout[index][1]];
    c.m_v = {v[0], v[1]};
    c.m_m = {m[0], m[1]};
    c.m_g = {2.0 / 3.0, 1.0 / 3.0};
    return c;
}

ChartPoint SimplexChart::map(std::span<const double> u, std::span<const double> uc) const
{
    ChartPoint cp;
    cp.p = m_p;
    const int p = m_p;
    if (m_kind == Kind::Cube) {
        double prod = 1.0;
        for (int j = 0; j < p; ++j) {
            prod *= u[j];
            FactoredValue &t = cp.t[j];
            t.value = prod;
            t.smooth = 1.0;
            for (int i = 0; i <= j; ++i)
                t.left[i] = 1;
            if (j == 0) {
                cp.tc[0].value = uc[0];
                cp.tc[0].smooth = 1.0;
                cp.tc[0].right[0] = 1;
            } else {
                cp.tc[j] = regular(one_minus_product(u, uc, 0, j + 1));
            }
        }
        for (int j = 0; j < p; ++j) {
            for (int k = j + 1; k < p; ++k) {
                int idx = pair_index(j, k);
                FactoredValue &d = cp.d[idx];
                if (k == j + 1) {
                    d.smooth = 1.0;
                    d.right[j + 1] = 1;
                    d.value = cp.t[j].value * uc[j + 1];
                } else {
                    d.smooth = one_minus_product(u, uc, j + 1, k + 1);
                    d.value = cp.t[j].value * d.smooth;
                }
                for (int i = 0; i <= j; ++i)
                    d.left[i] = 1;
                cp.dc[idx] = regular(cp.tc[j].value + cp.t[k].value);
            }
        }
        FactoredValue &jac = cp.jacobian;
        jac.smooth = 1.0;
        jac.value = 1.0;
        for (int i = 0; i + 1 < p; ++i) {
            jac.left[i] = p - 1 - i;
            jac.value *= std::pow(u[i], p - 1 - i);
        }
        return cp;
    }

    const double rho = u[0], theta = u[1], thetac = uc[1];
    auto affine = [&](auto q) {
        return triangle_value(q(m_v), q(m_m), q(m_g), rho, theta, thetac);
    };
    using P = std::array<double, 2>;
    cp.t[0] = affine([](const P &x) { return x[0]; });
    cp.t[1] = affine([](const P &x) { return x[1]; });
    cp.tc[0] = affine([](const P &x) { return 1.0 - x[0]; });
    cp.tc[1] = affine([](const P &x) { return 1.0 - x[1]; });
    cp.d[0] = affine([](const P &x) { return x[0] - x[1]; });
    cp.dc[0] = affine([](const P &x) { return 1.0 - x[0] + x[1]; });
    // |det(M - V, G - M)| = 1/6 for every triangle of the subdivision
    cp.jacobian.smooth = 1.0 / 6.0;
    cp.jacobian.left = {1, 0, 0};
    cp.jacobian.value = rho / 6.0;
    return cp;
}

std::vector<AxisSingularitySpec> SimplexChart::axis_specs(const ChartPowers &powers) const
{
    std::array<double, max_dim> mid{}, midc{};
    for (int i = 0; i < m_p; ++i)
        mid[i] = midc[i] = 0.5;
    ChartPoint cp = map(std::span<const double>(mid.data(), m_p), std::span<const double>(midc.data(), m_p));
    std::vector<AxisSingularitySpec> specs(m_p);
    for (int i = 0; i < m_p; ++i) {
        complex cl = 1.0 + double(cp.jacobian.left[i]);
        complex cr = 1.0 + double(cp.jacobian.right[i]);
        for (int j = 0; j < m_p; ++j) {
            cl += powers.t * double(cp.t[j].left[i]) + powers.tc * double(cp.tc[j].left[i]);
            cr += powers.t * double(cp.t[j].right[i]) + powers.tc * double(cp.tc[j].right[i]);
        }
        for (int k = 0; k < pair_count(m_p); ++k) {
            cl += powers.d * double(cp.d[k].left[i]) + powers.dc * double(cp.dc[k].left[i]);
            cr += powers.d * double(cp.d[k].right[i]) + powers.dc * double(cp.dc[k].right[i]);
        }
        specs[i].c_left = cl;
        specs[i].m_left = subtraction_order(cl);
        specs[i].c_right = cr;
        specs[i].m_right = subtraction_order(cr);
    }
    return specs;
}

std::vector<SimplexChart> simplex_cover(int p)
{
    if (p == 2) {
        std::vector<SimplexChart> charts;
        for (int i = 0; i < 6; ++i)
            charts.push_back(SimplexChart::barycentric(i));
        return charts;
    }
    return {SimplexChart::cube(p)};
}

CubeImage simplex_to_cube(std::span<const double> u)
{
    const int p = int(u.size());
    if (p < 1 || p > max_dim)
        throw Error(ErrorCode::InvalidArgument, "simplex dimension must be 1, 2 or 3");
    CubeImage img;
    double prod = 1.0;
    for (int j = 0; j < p; ++j) {
        prod *= u[j];
        img.t[j] = prod;
    }
    for (int i = 0; i + 1 < p; ++i)
        img.jacobian *= std::pow(u[i], p - 1 - i);
    return img;
}

std::complex<double> smooth_power(const FactoredValue &q, std::complex<double> e)
{
    if (e == std::complex<double>(0.0))
        return 1.0;
    return std::exp(e * std::log(q.smooth));
}

} // namespace ellsel
