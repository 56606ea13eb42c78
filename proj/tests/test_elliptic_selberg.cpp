#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "ellsel/elliptic_selberg.hpp"
#include "ellsel/error.hpp"
#include "ellsel/gamma_selberg.hpp"

using namespace ellsel;

namespace
{

constexpr double pi = std::numbers::pi;
const complex I(0.0, 1.0);
const complex K1 = 4.2472965459638786512;
const complex K2(-6.6231235191573109396, -3.823862146661614985);

double rel(complex got, complex want)
{
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

SelbergJob job_for(int p, complex lambda)
{
    SelbergJob job;
    job.p = p;
    job.lambda = lambda;
    return job;
}

} // namespace

TEST_CASE("job validation")
{
    SelbergJob job = job_for(1, 0.0);
    try {
        job.validate();
        FAIL("expected InvalidDomain");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::InvalidDomain);
        CHECK(std::string(e.what()).find("lambda on lattice") != std::string::npos);
    }
    CHECK_THROWS_AS(i_integral(job_for(1, I)), Error);
    CHECK_THROWS_AS(job_for(4, 0.3).validate(), Error);
    CHECK(job_for(1, 0.3).in_validated_domain());
    CHECK(job_for(2, 0.3).in_validated_domain());
    CHECK_FALSE(job_for(3, 0.3).in_validated_domain());
    CHECK_FALSE(job_for(1, complex(0.3, 0.1)).in_validated_domain());
    CHECK(std::abs(job_for(2, 0.3).exponent() + 2.0 / 3.0) < 1e-15);
}

TEST_CASE("integrand is the product of its factors")
{
    SelbergJob job = job_for(1, 0.3);
    job.a = 1.0;
    const ModularPoint &mp = job.mp;
    const double t = 0.5;
    const complex want = cap_e(t, mp) * sigma(0.3, t, mp) * theta_level({4, 2}, 0.3 + t / 2.0, mp);
    const std::array<double, 1> u{t};
    CHECK(rel(j_integrand(u, job, false), want) < 1e-13);

    // p = 2 off the diagonal, plain cube map
    SelbergJob j2 = job_for(2, 0.3);
    j2.a = 0.5;
    const std::array<double, 2> v{0.7, 0.4};
    const double t1 = 0.7, t2 = 0.28;
    const complex want2 = std::sqrt(cap_e(t1, mp) * cap_e(t2, mp)) * sigma(0.3, t1, mp) * sigma(0.3, t2, mp) *
                          std::pow(cap_e(t1 - t2, mp), 1.0 / 3.0) *
                          theta_level({6, 3}, 0.3 + (t1 + t2) / 3.0, mp) * t1;
    CHECK(rel(j_integrand(v, j2, false), want2) < 1e-13);
}

TEST_CASE("convergent region agrees with plain quadrature")
{
    SelbergJob job = job_for(1, 0.3);
    job.a = 1.0;
    const QuadratureResult r = j_integral(job);
    const auto plain = tanh_sinh(
        [&](double t) {
            const std::array<double, 1> u{t};
            return j_integrand(u, job, false);
        },
        8);
    CHECK(rel(r.value, plain.value) < 1e-8);

    SelbergJob near = job;
    near.a = 0.9;
    CHECK(rel(j_integral(near).value, r.value) < 0.25);
}

TEST_CASE("p=1 continuation")
{
    SelbergJob job = job_for(1, 0.3);
    const QuadratureResult r = j_integral(job);
    CHECK(std::isfinite(r.value.real()));
    CHECK(r.err_est < 1e-8 * std::abs(r.value));

    SelbergJob m2 = job;
    m2.extra_order = 1;
    CHECK(rel(j_integral(m2).value, r.value) < 1e-8);

    const IntegralValue iv = i_integral(job);
    CHECK_FALSE(iv.extrapolated);
    const complex th2 = std::pow(theta1(0.3, job.mp), 2);
    CHECK(rel(iv.value / th2, K1) < 1e-6);
    CHECK(rel(rhs_eval(job), K1 * th2) < 1e-14);
}

TEST_CASE("rhs parity and period")
{
    for (int p = 1; p <= 3; ++p) {
        const complex lam(0.3, 0.05);
        const complex r = rhs_eval(job_for(p, lam));
        const double sign = (p % 2 == 1) ? 1.0 : -1.0;
        CHECK(rel(rhs_eval(job_for(p, -lam)), sign * r) < 1e-12);
        CHECK(rel(rhs_eval(job_for(p, lam + 2.0)), r) < 1e-12);
    }
}

TEST_CASE("skew-symmetry of I_p")
{
    for (int p : {1, 2}) {
        for (double lam : {0.2, 0.35}) {
            SelbergJob job = job_for(p, lam);
            job.quad_level = p == 2 ? 5 : 0;
            const IntegralValue plus = i_integral(job);
            job.lambda = -lam;
            const IntegralValue minus = i_integral(job);
            const double sign = (p % 2 == 1) ? 1.0 : -1.0;
            CHECK(std::abs(minus.value - sign * plus.value) <= plus.err() + minus.err() + 1e-14);
        }
    }
}

TEST_CASE("verify_identity p=1")
{
    SelbergJob job = job_for(1, 0.3);
    const VerificationReport rep = verify_identity(job);
    CHECK(rep.pass);
    CHECK(rep.rel_residual < 1e-6);
    CHECK(rep.diagnostic.empty());
    CHECK(rep.validated_domain);

    SelbergJob coarse = job;
    coarse.quad_level = 2;
    const VerificationReport bad = verify_identity(coarse);
    CHECK_FALSE(bad.pass);
    CHECK(bad.quad_err_est > coarse.tol * std::abs(bad.rhs));

    const VerificationReport lat = verify_identity(job_for(1, 0.0));
    CHECK_FALSE(lat.pass);
    CHECK(lat.diagnostic.find("lambda on lattice") != std::string::npos);
}

TEST_CASE("p=2 in the convergent region against a multiprecision oracle")
{
    // I_2(0.3, i) at a = 1 and a = 1/2 from 30-digit nested quadrature of the
    // symmetrised integrand; both are purely imaginary.
    for (auto [a, want] : {std::pair{1.0, 0.02040316940146333515}, std::pair{0.5, 0.19467053659781515055}}) {
        SelbergJob job = job_for(2, 0.3);
        job.a = a;
        const IntegralValue iv = i_integral(job);
        CHECK_FALSE(iv.extrapolated);
        CHECK(rel(iv.value, complex(0.0, want)) < 1e-10);
    }
}

TEST_CASE("p=2 poles need the ladder")
{
    SelbergJob job = job_for(2, 0.3);
    CHECK(needs_ladder(2, job.exponent()));
    CHECK_FALSE(needs_ladder(1, -0.5));
    try {
        j_integral(job);
        FAIL("expected ContinuationPole");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::ContinuationPole);
    }
}

TEST_CASE("p=2 extrapolated value")
{
    SelbergJob job = job_for(2, 0.3);
    const IntegralValue iv = i_integral(job);
    CHECK(iv.extrapolated);
    CHECK(iv.samples.size() == 5);
    const complex ratio = iv.value / std::pow(theta1(0.3, job.mp), 3);

    // With E(t_j - t_k)^{1/3} on the ordered simplex every factor is real
    // positive and the symmetrised integral stays purely imaginary for real a.
    CHECK(std::abs(ratio.real()) < 1e-6 * std::abs(ratio));
    // Modulus agrees with K_2, phase differs by pi/3.
    CHECK(std::abs(std::abs(ratio) / std::abs(K2) - 1.0) < 1e-6);
    const double phase = std::arg(ratio / K2);
    CHECK(std::abs(phase - pi / 3.0) < 1e-6);

    const VerificationReport rep = verify_identity(job);
    CHECK_FALSE(rep.pass);
    CHECK(rep.rel_residual > 0.9);

    SelbergJob rev = job;
    rev.reversed_differences = true;
    rev.tol = 1e-3;
    const VerificationReport ok = verify_identity(rev);
    CHECK(ok.pass);
    CHECK(ok.rel_residual < 1e-6);
}

TEST_CASE("p=2 ladder consistency")
{
    SelbergJob a = job_for(2, 0.3);
    a.quad_level = 5;
    SelbergJob b = a;
    b.ladder.eps0 = 0.03;
    const IntegralValue va = i_integral(a);
    const IntegralValue vb = i_integral(b);
    CHECK(std::abs(va.value - vb.value) <= 3.0 * std::max(va.extrapolation_err, vb.extrapolation_err));
}

TEST_CASE("ratio scan")
{
    const std::array<complex, 4> grid{0.15, 0.25, 0.35, 0.45};
    SelbergJob job = job_for(1, 0.3);
    const RatioScan s1 = ratio_scan(job, grid);
    CHECK(s1.spread <= 1e-5);
    CHECK(s1.rel_std <= 1e-5);
    job.mp = ModularPoint(2.0 * I);
    const RatioScan s2 = ratio_scan(job, grid);
    CHECK(s2.spread <= 1e-5);
    CHECK(rel(s1.mean, K1) < 1e-5);
    CHECK(rel(s2.mean, K1) < 1e-5);

    const std::array<complex, 3> with_zero{0.2, 0.0, 0.4};
    const RatioScan s3 = ratio_scan(job_for(1, 0.3), with_zero);
    CHECK(s3.points[0].valid);
    CHECK_FALSE(s3.points[1].valid);
    CHECK(s3.points[2].valid);
    CHECK(s3.spread <= 1e-5);
}
