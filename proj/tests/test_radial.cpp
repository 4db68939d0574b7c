#include "oracles.hpp"
#include "singlab/errors.hpp"
#include "singlab/radial.hpp"
#include "singlab/regimes.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace singlab;

namespace {

// Root of n^{q-1}(n^{p-q} - γ^q M) r^{2-(p-1)γ} = γ(γ+2-N) at
// (N, p, q, M, n) = (2, 2, 1.6, 1, 1024); mpmath findroot, 30 digits.
constexpr double kSuperRadius = 5.2193536611437704;

void check_shape(const RadialTrajectory& t)
{
    REQUIRE(t.r.size() >= 2);
    CHECK(t.u.size() == t.r.size());
    CHECK(t.du.size() == t.r.size());
    bool increasing = true, finite = true;
    for (std::size_t k = 0; k < t.r.size(); ++k) {
        if (k && !(t.r[k] > t.r[k - 1])) increasing = false;
        if (!std::isfinite(t.u[k]) || !std::isfinite(t.du[k])) finite = false;
    }
    CHECK(increasing);
    CHECK(finite);
}

} // namespace

TEST_SUITE("radial") {

TEST_CASE("zero data stays zero")
{
    const auto t = integrate({3, 3.0, 1.5, 1.0}, 0.1, 0.0, 0.0, 1.0, 1e-10);
    check_shape(t);
    for (double u : t.u) CHECK(u == 0.0);
    CHECK(ko_check(t) == 0.0);
}

TEST_CASE("integrate rejects bad input")
{
    const Params pr{3, 3.0, 1.5, 1.0};
    CHECK_THROWS_AS(integrate(pr, 0.0, 1.0, 0.0, 1.0, 1e-10), ParameterDomainError);
    CHECK_THROWS_AS(integrate(pr, 0.5, NAN, 0.0, 1.0, 1e-10), ParameterDomainError);
    CHECK_THROWS_AS(integrate(pr, 0.5, 1.0, 0.0, 1.0, 0.0), ParameterDomainError);
}

TEST_CASE("separable solution A r^{-α} is tracked on the critical line")
{
    // (N, p, M) = (3, 3, 8): the constant-profile root is A = 4 (dense-scan oracle).
    const auto ref = oracle::dense_scan_roots(3, 3.0, 8.0);
    REQUIRE(ref.size() == 1);
    const double A = ref[0].X;
    CHECK(A == doctest::Approx(4.0).epsilon(1e-12));
    const Params pr{3, 3.0, 1.5, 8.0};
    // Integrated inward over one decade; outward the profile is unstable.
    const auto t = integrate(pr, 1.0, A, -A, 0.1, 1e-12);
    check_shape(t);
    CHECK(t.r.front() == doctest::Approx(0.1));
    double worst = 0.0;
    for (std::size_t k = 0; k < t.r.size(); ++k) worst = std::max(worst, std::abs(t.u[k] * t.r[k] / A - 1.0));
    CHECK(worst <= 1e-6);
    CHECK(ko_check(t) == doctest::Approx(A / std::max(std::pow(8.0, 1.0 / 1.5), 1.0)).epsilon(1e-6));
}

TEST_CASE("KO ratio of an exact separable profile")
{
    RadialTrajectory t;
    t.params = {4, 3.0, 1.5, 0.3};
    const double A = 2.5;
    for (int k = 0; k < 40; ++k) {
        const double r = std::pow(10.0, -3.0 + 3.0 * k / 39.0);
        t.r.push_back(r);
        t.u.push_back(A / r);
        t.du.push_back(-A / (r * r));
    }
    CHECK(ko_check(t) == doctest::Approx(A / std::max(std::pow(0.3, 1.0 / 1.5), 1.0)).epsilon(1e-12));
    t.params.q = 3.0;
    CHECK_THROWS_AS(ko_check(t), ParameterDomainError);
}

TEST_CASE("unbounded inward shot has a finite KO ratio stable under refinement")
{
    const Params pr{3, 3.0, 1.5, 3.0};
    const double A = std::pow(3.0, 2.0 / 3.0);
    const auto a = integrate(pr, 1.0, 0.9 * A, -0.9 * A, 1e-6, 1e-10);
    const auto b = integrate(pr, 1.0, 0.9 * A, -0.9 * A, 1e-6, 5e-11);
    check_shape(a);
    CHECK_FALSE(a.diverged);
    CHECK(a.u.front() > 1e3);
    const double ka = ko_check(a), kb = ko_check(b);
    CHECK(std::isfinite(ka));
    CHECK(std::abs(ka / kb - 1.0) <= 0.1);
}

TEST_CASE("eikonal solution ω₀ r^{-γ} annihilates U^p - M|U'|^q")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double p = 1.1 + 8.9 * U(rng);
        const double q = 1.0 + (std::min(2.0, p) - 1.0) * (0.02 + 0.96 * U(rng));
        const double M = 0.1 + 9.9 * U(rng);
        const Params pr{2, p, q, M};
        const double g = gamma_of(pr), w = *critical_constants(pr).omega0;
        for (int j = 0; j < 50; ++j) {
            const double r = std::pow(10.0, -4.0 + 4.0 * j / 49.0);
            const double u = w * std::pow(r, -g), du = -g * w * std::pow(r, -g - 1.0);
            // Compared in logs: u^p overflows when p is close to q.
            const double la = p * std::log(u), lb = std::log(M) + q * std::log(std::abs(du));
            worst = std::max(worst, std::abs(la - lb) / std::max(1.0, std::abs(la)));
        }
    }
    CHECK(worst <= 1e-13);
}

TEST_CASE("scaling equivariance on the critical line")
{
    // ℓ^α u(ℓ r) solves the radial equation whenever u does.
    const Params pr{3, 3.0, 1.5, 1.2};
    const double a = 1.0, l = 3.0, r0 = 0.3, u0 = 0.5, v0 = -0.2;
    const auto t1 = integrate(pr, r0, u0, v0, 3.0, 1e-12);
    const auto t2 = integrate(pr, r0 / l, std::pow(l, a) * u0, std::pow(l, a + 1.0) * v0, 3.0 / l, 1e-12);
    REQUIRE_FALSE(t1.diverged);
    double worst = 0.0;
    for (std::size_t k = 0; k < t2.r.size(); k += 5) {
        // Interpolate t1 at ℓ r by cubic Hermite.
        const double x = l * t2.r[k];
        auto it = std::lower_bound(t1.r.begin(), t1.r.end(), x);
        if (it == t1.r.begin() || it == t1.r.end()) continue;
        const std::size_t j = std::size_t(it - t1.r.begin());
        const double h = t1.r[j] - t1.r[j - 1], s = (x - t1.r[j - 1]) / h;
        const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s), h01 = s * s * (3 - 2 * s),
                     h11 = s * s * (s - 1);
        const double u = h00 * t1.u[j - 1] + h10 * h * t1.du[j - 1] + h01 * t1.u[j] + h11 * h * t1.du[j];
        worst = std::max(worst, std::abs(std::pow(l, a) * u / t2.u[k] - 1.0));
    }
    CHECK(worst <= 1e-7);
}

TEST_CASE("γ-scaling moves the diffusion term by ℓ^{-(q(p+1)-2p)/(p-q)}")
{
    const Params pr{2, 2.0, 1.6, 1.0};
    const double g = gamma_of(pr), l = 7.0;
    const double factor = std::pow(l, -(pr.q * (pr.p + 1.0) - 2.0 * pr.p) / (pr.p - pr.q));
    const auto t = integrate(pr, 0.5, 1.0, -0.3, 2.0, 1e-12);
    for (std::size_t k = 1; k < t.r.size(); k += 9) {
        const double r = t.r[k], u = t.u[k], du = t.du[k], d2u = radial_rhs(pr, r, u, du);
        const double diff = d2u + (pr.N - 1.0) * du / r;
        const double rest = std::pow(u, pr.p) - pr.M * std::pow(std::abs(du), pr.q);
        // S_ℓ u(s) = ℓ^γ u(ℓ s) at s = r / ℓ.
        const double s = r / l, w = std::pow(l, g) * u, dw = std::pow(l, g + 1.0) * du, d2w = std::pow(l, g + 2.0) * d2u;
        const double diff_l = d2w + (pr.N - 1.0) * dw / s;
        const double rest_l = std::pow(w, pr.p) - pr.M * std::pow(std::abs(dw), pr.q);
        if (std::abs(rest) < 1e-8) continue;
        CHECK((diff_l / rest_l) / (diff / rest) == doctest::Approx(factor).epsilon(1e-6));
    }
}

TEST_CASE("Osserman residual against the direct evaluation")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const int N = 2 + int(4 * U(rng));
        const double p = 1.2 + 4 * U(rng), q = 1.05 + 0.9 * U(rng), M = 3 * U(rng);
        const double a = 0.5 + U(rng), b = 0.2 + 3 * U(rng), lam = 5 * U(rng), rho = a * (0.01 + 0.98 * U(rng));
        const Params pr{N, p, q, M};
        const double got = osserman_residual(pr, a, b, lam, rho), ref = oracle::osserman_direct(N, p, q, M, a, b, lam, rho);
        CHECK(got == doctest::Approx(ref).epsilon(1e-10).scale(1.0));
    }
    CHECK(osserman_check({3, 3.0, 1.5, 1.0}, 1.0, 1.0, 0.0, 64) == 0.0);
    CHECK_THROWS_AS(osserman_check({3, 3.0, 1.5, 1.0}, 1.0, 1.0, 1.0, 8), ParameterDomainError);
}

TEST_CASE("Osserman sweep: minimal λ and the halved exponent")
{
    const Params pr{3, 3.0, 1.5, 1.0};
    const int n = 1000;
    const double rho_max = 0.5 * (1.0 - std::cos((2.0 * (n - 1) + 1.0) * M_PI / (2.0 * n)));
    const double lam_star = oracle::osserman_lambda_closed(rho_max);
    double lam = 1e-2;
    while (osserman_check(pr, 1.0, 1.0, lam, n) < 0.0 && lam < 1e3) lam *= 1.01;
    CHECK(lam >= lam_star);
    CHECK(lam <= lam_star * 1.01);
    CHECK(osserman_check(pr, 1.0, 1.0, lam, n) >= 0.0);

    bool any = false;
    for (double l = 1e-2; l < 1e3; l *= 1.01) any = any || osserman_check(pr, 1.0, 0.5, l, n) >= 0.0;
    CHECK_FALSE(any);
}

TEST_CASE("supersolution radius")
{
    const Params pr{2, 2.0, 1.6, 1.0};
    CHECK_FALSE(supersolution_radius(pr, 100.0));
    const auto r = supersolution_radius(pr, 1024.0);
    REQUIRE(r);
    CHECK(*r == doctest::Approx(kSuperRadius).epsilon(1e-12));

    const double g = gamma_of(pr);
    double prev = INFINITY;
    for (double n : {1e4, 1e6, 1e8, 1e10}) {
        const double lead = std::pow(std::pow(n, pr.p - 1.0) / (g * (g + 2.0 - pr.N)), 1.0 / ((pr.p - 1.0) * g - 2.0));
        const double dev = std::abs(*supersolution_radius(pr, n) / lead - 1.0);
        CHECK(dev < prev);
        prev = dev;
    }
    CHECK(prev < 1e-3);
    CHECK_THROWS_AS(supersolution_radius({2, 2.0, 1.25, 1.0}, 10.0), ParameterDomainError);
    CHECK_THROWS_AS(supersolution_radius({2, 3.5, 1.8, 1.0}, 10.0), ParameterDomainError);
    CHECK_THROWS_AS(supersolution_radius({2, 2.0, 1.6, 0.0}, 10.0), ParameterDomainError);
}

TEST_CASE("log-log fits of exact power laws")
{
    std::vector<double> r, u2, ue;
    const double g = 8.0 / 7.0, w = std::pow(g, g);
    for (int k = 0; k < 30; ++k) {
        r.push_back(std::pow(10.0, -3.0 + 2.0 * k / 29.0));
        u2.push_back(3.0 * std::pow(r.back(), -2.0));
        ue.push_back(w * std::pow(r.back(), -g));
    }
    CHECK(std::abs(fit_loglog_slope(r, u2, 1e-3, 1e-1) + 2.0) <= 1e-10);
    CHECK(std::abs(fit_loglog_slope(r, ue, 1e-3, 1e-1) + g) <= 1e-10);
    CHECK_THROWS_AS(fit_loglog_slope(r, u2, 1e-3, 2e-3), FitError);
    auto bad = u2;
    bad[5] = -1.0;
    CHECK_THROWS_AS(fit_loglog_slope(r, bad, 1e-3, 1e-1), FitError);

    RadialTrajectory t;
    t.params = {2, 2.0, 1.5, 0.0};
    t.r = r;
    t.u = u2;
    t.du.assign(r.size(), 0.0);
    CHECK(fit_blowup_exponent(t, 1e-3, 1e-1) == doctest::Approx(-2.0).epsilon(1e-10));
}

} // TEST_SUITE
