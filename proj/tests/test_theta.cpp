#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ellsel/error.hpp"
#include "ellsel/theta.hpp"

using namespace ellsel;

namespace
{

constexpr double pi = std::numbers::pi;
const complex I(0.0, 1.0);

double rel(complex got, complex want)
{
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Direct summation of the defining series, j in [-n, n-1].
complex theta1_direct(complex t, complex tau, int n = 10)
{
    complex s = 0.0;
    for (int j = -n; j < n; ++j) {
        const double h = j + 0.5;
        s += std::exp(pi * I * h * h * tau + 2.0 * pi * I * h * (t + 0.5));
    }
    return -s;
}

complex theta_level_direct(int kappa, int m, complex lambda, complex tau)
{
    complex s = 0.0;
    for (int j = -12; j <= 12; ++j) {
        const double x = j + m / (2.0 * kappa);
        s += std::exp(2.0 * pi * I * double(kappa) * x * x * tau + 2.0 * pi * I * double(kappa) * x * lambda);
    }
    return s;
}

} // namespace

TEST_CASE("theta1 reference values")
{
    const ModularPoint mi(I);
    CHECK(rel(theta1(0.5, mi), 0.91357913815611682141) < 1e-14);
    CHECK(rel(theta1(0.0, mi, 1), 2.8486946039877873161) < 1e-14);
    CHECK(rel(theta1(0.3, mi), 0.73719716371868159764) < 1e-14);
    CHECK(rel(theta1(0.45, mi), 0.90216682409043201241) < 1e-14);
    CHECK(rel(theta1(0.15, mi), 0.41230124970091085224) < 1e-14);
    CHECK(rel(theta1(0.3, ModularPoint(2.0 * I)), 0.33635577206042004457) < 1e-14);
    CHECK(rel(theta1({0.2, 0.1}, ModularPoint(complex(0.3, 0.8))),
              {0.57894768692707570819, 0.41211787125239171239}) < 1e-14);
}

TEST_CASE("theta1 basic laws")
{
    const ModularPoint mi(I);
    CHECK(std::abs(theta1(0.0, mi)) <= 1e-14 * std::abs(theta1(0.0, mi, 1)));
    CHECK(rel(theta1(1.3, mi), -theta1(0.3, mi)) < 1e-12);
    CHECK(rel(theta1(0.5, mi), theta1_direct(0.5, I)) < 1e-12);
}

TEST_CASE("theta1 randomized oddness and quasi-periodicity")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(-1.0, 1.0), uy(-0.4, 0.4);
    for (complex tau : {I, complex(0.3, 0.8)}) {
        const ModularPoint mp(tau);
        const double d0 = std::abs(theta1(0.0, mp, 1));
        for (int i = 0; i < 100; ++i) {
            const complex t(ux(rng), uy(rng));
            const complex th = theta1(t, mp);
            CHECK(std::abs(th + theta1(-t, mp)) <= 1e-12 * std::max(std::abs(th), d0));
            const complex q1 = -std::exp(-pi * I * tau - 2.0 * pi * I * t) * th;
            CHECK(rel(theta1(t + tau, mp), q1) < 1e-12);
            const complex q2 = std::exp(-4.0 * pi * I * (t + tau)) * th;
            CHECK(rel(theta1(t + 2.0 * tau, mp), q2) < 1e-12);
        }
    }
}

TEST_CASE("theta1 derivatives")
{
    const ModularPoint mp(complex(0.3, 0.8));
    const double h = 1e-4;
    for (complex t : {complex(0.3, 0.0), complex(0.2, 0.1), complex(-0.7, -0.2)}) {
        for (int k = 0; k < 3; ++k) {
            const complex fd = (theta1(t + h, mp, k) - theta1(t - h, mp, k)) / (2.0 * h);
            CHECK(rel(fd, theta1(t, mp, k + 1)) < 1e-6);
        }
        // heat relation of the kernel
        CHECK(rel(theta1(t, mp, 2), 4.0 * pi * I * theta1_dtau(t, mp)) < 1e-12);
        // term-wise tau derivative against a central difference in tau
        const complex ht = 1e-4 * I;
        const ModularPoint up(mp.tau() + ht), dn(mp.tau() - ht);
        const complex fd_tau = (theta1(t, up) - theta1(t, dn)) / (2.0 * ht);
        CHECK(rel(fd_tau, theta1_dtau(t, mp)) < 1e-6);
    }
}

TEST_CASE("theta1 domain errors")
{
    CHECK_THROWS_AS(ModularPoint(complex(0.0, 0.0)), Error);
    CHECK_THROWS_AS(ModularPoint(complex(0.0, 0.01)), Error);
    CHECK_THROWS_AS(ModularPoint(I, 1e-3), Error);
    const ModularPoint mi(I);
    CHECK_THROWS_AS(theta1(complex(0.0, 9.0), mi), Error);
    CHECK_THROWS_AS(theta1(0.1, mi, 4), Error);
    try {
        theta1(0.1, ModularPoint(complex(0.0, 0.05), 1e-16, 8));
        FAIL("expected NonConvergent");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::NonConvergent);
    }
}

TEST_CASE("E, log E and the branch table")
{
    const ModularPoint mi(I);
    CHECK(std::abs(cap_e(1e-4, mi) / 1e-4 - 1.0) < 1e-7);
    CHECK(rel(cap_e(-0.3, mi), -cap_e(0.3, mi)) < 1e-14);
    CHECK(rel(cap_e(0.5, mi), theta1_direct(0.5, I) / 2.8486946039877873161) < 1e-12);

    const complex l3 = log_e_tracked(1e-3, mi);
    CHECK(std::abs(l3.real() - std::log(1e-3)) < 1e-3);
    CHECK(std::abs(l3.imag()) < 1e-6);
    const complex l5 = log_e_tracked(0.5, mi);
    CHECK(std::abs(l5.imag()) < 1e-10);
    CHECK(rel(std::exp(l5), cap_e(0.5, mi)) < 1e-12);
    CHECK_THROWS_AS(log_e_tracked(0.0, mi), Error);

    // off the imaginary axis the phase is tracked continuously
    const ModularPoint mg(complex(0.3, 0.8));
    const EllipticKernel k(mg);
    CHECK(k.branch_nodes() >= 257);
    complex prev = k.log_e(1e-3);
    for (int i = 1; i < 1000; ++i) {
        const double t = 1e-3 + i * (0.998 / 999.0);
        const complex cur = k.log_e(t);
        CHECK(std::abs(cur.imag() - prev.imag()) < 0.1);
        CHECK(rel(std::exp(cur), cap_e(t, mg)) < 1e-12);
        prev = cur;
    }
    // R(t) = R(1 - t)
    CHECK(rel(k.reduced_e(0.2, 0.8), k.reduced_e(0.8, 0.2)) < 1e-15);
}

TEST_CASE("rho and sigma")
{
    const ModularPoint mi(I);
    CHECK(rel(rho(-0.3, mi), -rho(0.3, mi)) < 1e-12);
    CHECK(std::abs(1e-4 * rho(1e-4, mi) - 1.0) < 1e-7);
    const double h = 1e-4;
    CHECK(rel((rho(0.3 + h, mi) - rho(0.3 - h, mi)) / (2.0 * h), rho(0.3, mi, 1)) < 1e-6);
    CHECK_THROWS_AS(rho(0.0, mi), Error);

    CHECK(std::abs(1e-4 * sigma(0.3, 1e-4, mi) - (1.0 - 1e-4 * rho(0.3, mi))) < 1e-7);
    CHECK(rel(sigma(0.3, 1.25, mi), sigma(0.3, 0.25, mi)) < 1e-12);
    const complex comp = theta1(0.3 - 0.45, mi) * theta1(0.0, mi, 1) / (theta1(0.3, mi) * theta1(0.45, mi));
    CHECK(rel(sigma(0.3, 0.45, mi), comp) < 1e-12);
    CHECK(rel(sigma(0.3, 0.45, mi), -1.7659973028549067019) < 1e-13);
    try {
        sigma(0.0, 0.3, mi);
        FAIL("expected PoleProximity");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::PoleProximity);
    }
}

TEST_CASE("level theta functions")
{
    const ModularPoint mi(I);
    const ThetaLevelIndex i42(4, 2);
    CHECK(rel(theta_level(i42, 0.3, mi), {-0.064237735381203286247, 0.19770565180637119395}) < 1e-13);
    CHECK(rel(theta_level({6, 3}, 0.3, mi), {-0.090141350814860370863, 0.029288699707540388314}) < 1e-13);
    CHECK(rel(theta_level(i42, 2.3, mi), theta_level(i42, 0.3, mi)) < 1e-12);
    CHECK(theta_level({4, 10}, 0.3, mi) == theta_level(i42, 0.3, mi));
    CHECK(ThetaLevelIndex(4, -6).m() == 2);
    CHECK(rel(theta_level(i42, 0.3, mi), theta_level_direct(4, 2, 0.3, I)) < 1e-12);
    CHECK_THROWS_AS(ThetaLevelIndex(1, 0), Error);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (complex tau : {I, complex(0.3, 0.8)}) {
        const ModularPoint mp(tau);
        for (int kappa : {2, 4, 6}) {
            for (int m = 0; m < 2 * kappa; m += 3) {
                const complex lam(u(rng), u(rng) * 0.5);
                const ThetaLevelIndex idx(kappa, m);
                const complex want = std::exp(-2.0 * pi * I * double(kappa) * (lam + tau)) * theta_level(idx, lam, mp);
                CHECK(rel(theta_level(idx, lam + 2.0 * tau, mp), want) < 1e-12);
            }
        }
    }
}
