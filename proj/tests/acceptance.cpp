// Acceptance run: one PASS/FAIL line per criterion.  Tolerances and runtime
// budgets are pinned below.  With arguments, only the listed criteria run.

#include "oracles.hpp"
#include "singlab/halfplane.hpp"
#include "singlab/profile.hpp"
#include "singlab/radial.hpp"
#include "singlab/regimes.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace singlab;

namespace {

constexpr double kExponentTol = 1e-12;
constexpr double kConstantTol = 1e-12;
constexpr double kEikonalTol = 1e-12;
constexpr double kRootTol = 1e-9;
constexpr double kProfileResidual = 1e-8;
constexpr double kMssLo = 1.754766, kMssHi = 2.951152;
constexpr double kThresholdTol = 1e-3;
constexpr double kPsiOracleTol = 1e-6;
constexpr double kPsiSymmetryTol = 1e-9;
constexpr double kRingLo = 0.95, kRingHi = 1.05;
constexpr double kSlopeTol = 0.05;
constexpr double kProfileMatch = 0.05;
constexpr double kStabilization = 0.02;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... a)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

Outcome exponent_coincidence()
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(1.0, 10.0);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        double p = U(rng);
        while (p <= 1.0) p = U(rng);
        const auto e = exponents({2, p, q_star_of(p), 1.0});
        worst = std::max({worst, std::abs(e.alpha - e.beta), std::abs(e.alpha - *e.gamma)});
    }
    return {worst <= kExponentTol, fmt("max |α-β|, |α-γ| = %.3g", worst)};
}

Outcome constant_cross_checks()
{
    double worst_id = 0.0, worst_r = 0.0;
    int count = 0;
    for (int N = 2; N <= 10; ++N) {
        const double pc = p_crit_of(N);
        for (int k = 0; k <= 40; ++k) {
            const double p = pc + (10.0 - pc) * k / 40.0;
            const double mss = m_star_star(N, p);
            const double lhs = std::pow(mss / (p + 1.0), (p + 1.0) / p);
            const double rhs = ((N - 1.0) * p - (N + 1.0)) / (2.0 * p);
            worst_id = std::max(worst_id, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
            if (p > pc) worst_r = std::max(worst_r, std::abs(m_star_star_r(N, p, pc) - mss) / std::max(1.0, mss));
            ++count;
        }
    }
    return {worst_id <= kConstantTol && worst_r <= kConstantTol,
            fmt("%d grid points; identity gap %.3g, m**_r endpoint gap %.3g", count, worst_id, worst_r)};
}

Outcome eikonal_identity()
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double p = 1.1 + 8.9 * U(rng);
        const double q = 1.0 + (std::min(2.0, p) - 1.0) * (0.02 + 0.96 * U(rng));
        const double M = 0.1 + 9.9 * U(rng);
        const Params pr{2, p, q, M};
        const double g = gamma_of(pr), w = *critical_constants(pr).omega0;
        for (int j = 0; j < 50; ++j) {
            const double r = std::pow(10.0, -2.0 + 4.0 * j / 49.0);
            // Logs keep U^p representable when p - q is small; the relative residual
            // |U^p - M|U'|^q| / U^p is expm1 of the log gap.
            const double la = p * (std::log(w) - g * std::log(r));
            const double lb = std::log(M) + q * (std::log(g * w) - (g + 1.0) * std::log(r));
            worst = std::max(worst, std::abs(std::expm1(lb - la)));
        }
    }
    return {worst <= kEikonalTol, fmt("max relative residual %.3g over 5000 samples", worst)};
}

Outcome constant_roots()
{
    std::ostringstream d;
    bool ok = true;
    const auto r32 = constant_profile_roots(3, 2.0, 0.0);
    ok = ok && r32.roots.size() == 1 && std::abs(r32.roots[0].X - 2.0) <= 1e-12;
    d << "(3,2,0): " << (r32.roots.empty() ? NAN : r32.roots[0].X);

    const double ms = *m_star(4, 3.0);
    const auto below = constant_profile_roots(4, 3.0, 0.9 * ms);
    const auto below_ref = oracle::dense_scan_roots(4, 3.0, 0.9 * ms);
    ok = ok && below.roots.empty() && below_ref.empty();
    d << "; 0.9m*: " << below.roots.size() << " roots";

    const auto at = constant_profile_roots(4, 3.0, ms);
    const auto at_ref = oracle::dense_scan_roots(4, 3.0, ms);
    const bool at_ok = at.roots.size() == 1 && at.roots[0].multiplicity == 2 && at_ref.size() == 1 &&
                       std::abs(at.roots[0].X - at_ref[0].X) <= kRootTol;
    ok = ok && at_ok;
    d << fmt("; m*: double root %.9f vs oracle %.9f", at.roots.empty() ? NAN : at.roots[0].X,
             at_ref.empty() ? NAN : at_ref[0].X);

    const auto above = constant_profile_roots(4, 3.0, 1.1 * ms);
    const auto above_ref = oracle::dense_scan_roots(4, 3.0, 1.1 * ms);
    bool above_ok = above.roots.size() == 2 && above_ref.size() == 2;
    double gap = 0.0;
    for (std::size_t k = 0; above_ok && k < 2; ++k) gap = std::max(gap, std::abs(above.roots[k].X - above_ref[k].X));
    above_ok = above_ok && gap <= kRootTol;
    ok = ok && above_ok;
    d << fmt("; 1.1m*: %zu roots, oracle gap %.3g", above.roots.size(), gap);
    return {ok, d.str()};
}

Outcome threshold_bracket()
{
    const auto half = [](double M) {
        return make_problem({3, 3.0, 1.5, M}, ProfileVariant::half_sphere_dirichlet);
    };
    const bool none_15 = !solve_min_profile(half(1.5));
    const bool none_mss = !solve_min_profile(half(m_star_star(3, 3.0)));
    const auto at3 = solve_min_profile(half(3.0));
    const bool ok3 = at3 && at3->residual <= kProfileResidual;
    const auto br = existence_threshold(3, 3.0, 1.0, 4.0, kThresholdTol);
    const bool inside = !br.degenerate && br.lo >= kMssLo && br.hi <= kMssHi && br.lo < br.hi;
    return {none_15 && none_mss && ok3 && inside,
            fmt("none at 1.5: %d, none at m**: %d, residual at 3.0: %.3g, bracket [%.6f, %.6f]", none_15, none_mss,
                at3 ? at3->residual : NAN, br.lo, br.hi)};
}

Outcome psi_oracle()
{
    const auto psi = solve_psi(2, 2.0);
    const oracle::ChebyshevPsi ref(2.0, 64);
    const std::size_t n = psi.theta.size();
    double sup = 0.0, asym = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        sup = std::max(sup, std::abs(psi.omega[j] - ref(psi.theta[j])));
        asym = std::max(asym, std::abs(psi.omega[j] - psi.omega[n - 1 - j]));
    }
    return {sup <= kPsiOracleTol && asym <= kPsiSymmetryTol,
            fmt("sup |ψ - collocation| = %.3g, asymmetry %.3g", sup, asym)};
}

bool nodewise_leq(const Field& a, const Field& b, double slack)
{
    for (std::size_t m = 0; m < a.values.size(); ++m)
        if (a.values[m] > b.values[m] + slack * std::max(1.0, std::abs(b.values[m]))) return false;
    return true;
}

Outcome fundamental_solution_check()
{
    const PolarGrid g = default_grid();
    const Params pr{2, 2.0, 1.25, 1.0};
    const auto b = build_barriers(g, pr, 1.0);
    std::vector<Field> its;
    const auto [u1, rep] = solve_full(g, pr, 1.0, b.sub, b.super, HalfplaneOptions{}.tol, {}, &its);
    bool inside = rep.within_bounds;
    for (const auto& f : its) inside = inside && nodewise_leq(b.sub, f, 1e-9) && nodewise_leq(f, b.super, 1e-9);

    const auto d = diagnostics(u1);
    double lo = INFINITY, hi = -INFINITY;
    for (double v : d.near_ring_ratio) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const bool ring = lo >= kRingLo && hi <= kRingHi;

    bool monotone = true;
    Field prev = u1;
    for (double k : {2.0, 4.0, 8.0, 16.0}) {
        auto fs = fundamental_solution(g, pr, k);
        monotone = monotone && nodewise_leq(prev, fs.field, 1e-9);
        prev = std::move(fs.field);
    }
    return {ring && monotone && inside, fmt("ring ratio [%.4f, %.4f], monotone in k: %d, %zu iterates inside [sub, super]: %d",
                                            lo, hi, monotone, its.size(), inside)};
}

Outcome strong_limit_check()
{
    const PolarGrid g = default_grid();
    const Params pr{2, 2.0, 1.25, 1.0};
    const auto s = strong_limit(g, pr, {1.0, 10.0, 100.0, 1000.0});
    const auto d = diagnostics(s.field);
    const double a = alpha_of(pr.p);
    const double slope = d.radial_slope.value_or(NAN);

    // r^α u(r, ·) at r = 30 r_min against ψ, linearly interpolated onto the field's θ nodes.
    const auto psi = solve_psi(2, 2.0);
    const double r = 30.0 * g.r_min;
    auto tr = angular_trace(s.field, r);
    double num = 0.0, den = 0.0;
    for (int j = 0; j < g.n_theta; ++j) {
        const double th = g.theta(j);
        auto it = std::upper_bound(psi.theta.begin(), psi.theta.end(), th);
        const std::size_t m = std::clamp<std::size_t>(std::size_t(it - psi.theta.begin()), 1, psi.theta.size() - 1);
        const double t = (th - psi.theta[m - 1]) / (psi.theta[m] - psi.theta[m - 1]);
        const double ps = (1.0 - t) * psi.omega[m - 1] + t * psi.omega[m];
        num = std::max(num, std::abs(std::pow(r, a) * tr[j] - ps));
        den = std::max(den, ps);
    }
    const double rel = num / den;
    const bool ok = std::abs(slope + a) <= kSlopeTol && rel <= kProfileMatch;
    return {ok, fmt("slope %.4f (target %.1f ± %.2f), profile mismatch %.3f (≤ %.2f), saturation %.3g", slope, -a,
                    kSlopeTol, rel, kProfileMatch, s.saturation)};
}

Outcome osserman_barrier()
{
    const Params pr{3, 3.0, 1.5, 1.0};
    const double b = std::max(alpha_of(pr.p), gamma_of(pr));
    const int n = 1000;
    double lam = 1e-2, found = NAN, min_at = NAN;
    for (; lam <= 1e3; lam *= 1.01) {
        const double v = osserman_check(pr, 1.0, b, lam, n);
        if (v >= 0.0) {
            found = lam;
            min_at = v;
            break;
        }
    }
    bool halved_fails = true;
    for (double l = 1e-2; l <= 1e3; l *= 1.01) halved_fails = halved_fails && osserman_check(pr, 1.0, 0.5 * b, l, n) < 0.0;
    return {std::isfinite(found) && min_at >= 0.0 && halved_fails,
            fmt("b = %g, minimal λ = %.6g with min LŨ = %.3g; halved b fails for every λ: %d", b, found, min_at,
                halved_fails)};
}

Outcome removability_trend()
{
    std::vector<double> rm;
    for (int m = 0; m < 5; ++m) rm.push_back(1e-3 / double(1 << m));
    const auto a = removability_probe(default_grid(), rm, {2, 2.0, 1.25, 1.0}, 1.0);
    const auto b = removability_probe(default_grid(), rm, {2, 3.0, 1.4, 0.1}, 1.0);
    auto list = [](const std::vector<double>& v) {
        std::string s;
        for (double x : v) s += (s.empty() ? "" : " ") + fmt("%.4f", x);
        return s;
    };
    return {a.last_relative_change <= kStabilization && b.monotone_decreasing,
            fmt("non-removable sups [%s], last change %.4f; removable-leaning sups [%s], decreasing: %d",
                list(a.annulus_sup).c_str(), a.last_relative_change, list(b.annulus_sup).c_str(), b.monotone_decreasing)};
}

} // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> all = {
        {1, "exponent coincidence on the critical line", 1, exponent_coincidence},
        {2, "critical constant cross-checks", 1, constant_cross_checks},
        {3, "eikonal identity", 1, eikonal_identity},
        {4, "constant-profile roots", 5, constant_roots},
        {5, "profile threshold bracket", 60, threshold_bracket},
        {6, "ψ oracle agreement", 10, psi_oracle},
        {7, "fundamental solution", 300, fundamental_solution_check},
        {8, "strong-limit blow-up rate", 600, strong_limit_check},
        {9, "Osserman barrier", 5, osserman_barrier},
        {10, "removability trend", 600, removability_trend},
    };
    std::vector<int> selected;
    for (int k = 1; k < argc; ++k) selected.push_back(std::atoi(argv[k]));

    int failed = 0;
    for (const auto& c : all) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = t < c.budget_s;
        const bool pass = o.pass && in_time;
        failed += !pass;
        std::printf("%s #%d %s: %s [%.1f s, budget %.0f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), t,
                    c.budget_s, in_time ? "" : ", over budget");
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
