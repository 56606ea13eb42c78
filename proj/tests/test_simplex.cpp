#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "ellsel/elliptic_selberg.hpp"
#include "ellsel/simplex.hpp"

using namespace ellsel;

namespace
{

double reassemble(const FactoredValue &q, std::span<const double> u, std::span<const double> uc)
{
    double v = q.smooth;
    for (std::size_t i = 0; i < u.size(); ++i)
        v *= std::pow(u[i], q.left[i]) * std::pow(uc[i], q.right[i]);
    return v;
}

double chart_volume(const SimplexChart &chart, int level)
{
    const auto specs = chart.axis_specs({});
    const CubeIntegrand f = [&](std::span<const double> u, std::span<const double> uc) {
        return complex(chart.map(u, uc).jacobian.smooth);
    };
    return cube_integrate(f, specs, {level, 1}).value.real();
}

} // namespace

TEST_CASE("cube map examples")
{
    const std::array<double, 2> corner{1.0, 1.0};
    const auto a = simplex_to_cube(corner);
    CHECK(a.t[0] == 1.0);
    CHECK(a.t[1] == 1.0);
    CHECK(a.jacobian == 1.0);

    const std::array<double, 2> u{0.8, 0.5};
    const auto b = simplex_to_cube(u);
    CHECK(b.t[0] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(b.t[1] == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(b.jacobian == doctest::Approx(0.8).epsilon(1e-15));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const std::array<double, 3> v{uni(rng), uni(rng), uni(rng)};
        const auto c = simplex_to_cube(v);
        CHECK(0.0 <= c.t[2]);
        CHECK(c.t[2] <= c.t[1]);
        CHECK(c.t[1] <= c.t[0]);
        CHECK(c.t[0] <= 1.0);
    }
}

TEST_CASE("pair indexing")
{
    CHECK(pair_count(1) == 0);
    CHECK(pair_count(2) == 1);
    CHECK(pair_count(3) == 3);
    CHECK(pair_index(0, 1) == 0);
    CHECK(pair_index(0, 2) == 1);
    CHECK(pair_index(1, 2) == 2);
}

TEST_CASE("chart volumes")
{
    for (int p = 1; p <= 3; ++p) {
        double vol = 0.0;
        for (const auto &chart : simplex_cover(p))
            vol += chart_volume(chart, 0);
        CHECK(std::abs(vol - 1.0 / std::tgamma(p + 1.0)) < 1e-10);
    }
    for (int k = 0; k < 6; ++k)
        CHECK(std::abs(chart_volume(SimplexChart::barycentric(k), 6) - 1.0 / 12.0) < 1e-12);
}

TEST_CASE("factored values reassemble")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> uni(0.01, 0.99);
    std::vector<SimplexChart> charts = simplex_cover(2);
    charts.push_back(SimplexChart::cube(2));
    charts.push_back(SimplexChart::cube(3));
    for (const auto &chart : charts) {
        const int d = chart.dim();
        for (int i = 0; i < 50; ++i) {
            std::array<double, 3> u{}, uc{};
            for (int k = 0; k < d; ++k) {
                u[k] = uni(rng);
                uc[k] = 1.0 - u[k];
            }
            const std::span<const double> us(u.data(), d), ucs(uc.data(), d);
            const ChartPoint pt = chart.map(us, ucs);
            auto check = [&](const FactoredValue &q) {
                CHECK(q.smooth > 0.0);
                CHECK(std::abs(reassemble(q, us, ucs) - q.value) <= 1e-13 * std::max(1.0, std::abs(q.value)));
            };
            for (int j = 0; j < d; ++j) {
                check(pt.t[j]);
                check(pt.tc[j]);
                CHECK(std::abs(pt.t[j].value + pt.tc[j].value - 1.0) < 1e-14);
            }
            for (int j = 0; j < d; ++j)
                for (int k = j + 1; k < d; ++k) {
                    const int q = pair_index(j, k);
                    check(pt.d[q]);
                    check(pt.dc[q]);
                    CHECK(std::abs(pt.d[q].value - (pt.t[j].value - pt.t[k].value)) < 1e-14);
                    CHECK(pt.d[q].value > 0.0);
                }
            check(pt.jacobian);
        }
    }
}

TEST_CASE("axis exponents of the cube map")
{
    const complex a1 = -0.5;
    auto s1 = axis_exponents(1, a1);
    REQUIRE(s1.size() == 1);
    CHECK(std::abs(s1[0].c_left - a1) < 1e-15);
    CHECK(std::abs(s1[0].c_right - a1) < 1e-15);
    CHECK(s1[0].m_left == 1);

    auto s2 = axis_exponents(2, -2.0 / 3.0);
    REQUIRE(s2.size() == 2);
    CHECK(std::abs(s2[0].c_left + 1.0) < 1e-14);
    CHECK(std::abs(s2[1].c_left + 2.0 / 3.0) < 1e-14);
    CHECK(s2[0].m_left == 2);

    auto s3 = axis_exponents(1, 1.0);
    CHECK(s3[0].m_left == 0);

    // c_left(i) = r a + r (r - 1) / (2 (p + 1)) with r = p - i + 1
    for (int p = 1; p <= 3; ++p) {
        const complex a(0.3, 0.1);
        const auto s = axis_exponents(p, a);
        for (int i = 0; i < p; ++i) {
            const double r = p - i;
            CHECK(std::abs(s[i].c_left - (r * a + r * (r - 1.0) / (2.0 * (p + 1)))) < 1e-14);
        }
    }
}

TEST_CASE("axis exponents match the log-log slope of the integrand")
{
    // p = 1, a = -1/2: |integrand| ~ u^{c-1} at both ends
    SelbergJob job;
    job.p = 1;
    job.a = -0.5;
    for (double side : {0.0, 1.0}) {
        auto at = [&](double h) {
            const std::array<double, 1> u{side == 0.0 ? h : 1.0 - h};
            return std::abs(j_integrand(u, job, false));
        };
        const double slope = std::log(at(1e-6) / at(1e-5)) / std::log(0.1);
        CHECK(std::abs(slope - (-1.5)) < 1e-3);
    }
    // p = 2, a = -2/3: axis 1 (u2 fixed) ~ u1^{-2}, axis 2 ~ u2^{-5/3}
    job.p = 2;
    job.a = -2.0 / 3.0;
    auto at2 = [&](double u1, double u2) {
        const std::array<double, 2> u{u1, u2};
        return std::abs(j_integrand(u, job, false));
    };
    CHECK(std::abs(std::log(at2(1e-6, 0.4) / at2(1e-5, 0.4)) / std::log(0.1) + 2.0) < 1e-3);
    CHECK(std::abs(std::log(at2(0.6, 1e-6) / at2(0.6, 1e-5)) / std::log(0.1) + 5.0 / 3.0) < 1e-3);

    // the divided integrand stays finite near the u1 endpoints
    job.a = -2.0 / 3.0 + 0.04;
    for (double u1 : {1e-4, 1.0 - 1e-4}) {
        const std::array<double, 2> u{u1, 0.5};
        CHECK(std::abs(j_integrand(u, job)) < 1e10);
    }
}
