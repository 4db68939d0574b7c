#include "singlab/regimes.hpp"

#include "singlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace singlab {

namespace {

bool near(double x, double y) { return std::abs(x - y) <= kLineTol * std::max(1.0, std::abs(y)); }

void require_dim_exp(int N, double p)
{
    if (N < 2 || !std::isfinite(p) || !(p > 1.0)) {
        std::ostringstream os;
        os.precision(17);
        os << "(N=" << N << ", p=" << p << "): need N >= 2 and p > 1";
        throw ParameterDomainError(os.str());
    }
}

// (p+1) * (c / (p * d))^{p/(p+1)}: the δ-optimized amplitude bound shared by all M_Np branches.
double amplitude_bound(double p, double c, double d) { return (p + 1.0) * std::pow(c / (p * d), p / (p + 1.0)); }

} // namespace

std::string to_string(Regime r)
{
    switch (r) {
    case Regime::removable: return "removable";
    case Regime::weak_singularity_solvable: return "weak-singularity-solvable";
    case Regime::strong_singularity_absorption: return "strong-singularity-absorption";
    case Regime::strong_singularity_critical: return "strong-singularity-critical";
    case Regime::eikonal_dominated: return "eikonal-dominated";
    case Regime::indeterminate: return "indeterminate";
    }
    return "unknown";
}

bool RegimeReport::has(Regime r) const
{
    return std::any_of(tags.begin(), tags.end(), [r](const RegimeTag& t) { return t.regime == r; });
}

std::vector<std::string> RegimeReport::labels() const
{
    std::vector<std::string> out;
    for (const auto& t : tags) out.push_back(to_string(t.regime));
    return out;
}

double m_star_star(int N, double p)
{
    require_dim_exp(N, p);
    const double pc = p_crit_of(N);
    if (p < pc && !near(p, pc)) throw ParameterDomainError("m** needs p >= (N+1)/(N-1)");
    const double base = std::max(0.0, ((N - 1) * p - (N + 1)) / (2.0 * p));
    return (p + 1.0) * std::pow(base, p / (p + 1.0));
}

double m_star_star_r(int N, double p, double r)
{
    require_dim_exp(N, p);
    const double pc = p_crit_of(N);
    if (!std::isfinite(r) || !(r < p) || (r < pc && !near(r, pc))) {
        std::ostringstream os;
        os.precision(17);
        os << "m**_r needs (N+1)/(N-1) <= r < p, got r=" << r;
        throw ParameterDomainError(os.str());
    }
    return (p + 1.0) * std::pow((p - r) / (p * (r - 1.0)), p / (p + 1.0));
}

double M_Np(int N, double p)
{
    require_dim_exp(N, p);
    const double pc = p_crit_of(N);
    if (p <= pc || near(p, pc)) return 0.0;
    const double a = alpha_of(p);
    const double c = N - 1 + a * (N - 2 - a);
    double best = amplitude_bound(p, c, std::min(1.0, a * a));
    if (p < 3.0) {
        if (a >= 2.0) {
            const double F0 = (a + 2.0) * std::pow(a - 1.0, (a + 1.0) / (a + 2.0));
            best = std::min(best, amplitude_bound(p, c, F0));
        } else {
            best = std::min(best, amplitude_bound(p, c, a * a));
        }
    }
    return best;
}

std::optional<double> m_star(int N, double p)
{
    require_dim_exp(N, p);
    if (N < 3) return std::nullopt;
    const double ps = double(N) / double(N - 2);
    if (!(p > ps) || near(p, ps)) return std::nullopt;
    return (p + 1.0) * std::pow((p * (N - 2) - N) / (2.0 * p), p / (p + 1.0));
}

CriticalConstants critical_constants(const Params& params)
{
    validate(params);
    const int N = params.N;
    const double p = params.p, q = params.q, M = params.M;
    CriticalConstants cc;
    const double pc = p_crit_of(N);
    if (p >= pc || near(p, pc)) cc.m_star_star = m_star_star(N, p);
    cc.M_Np = M_Np(N, p);
    cc.m_star = m_star(N, p);
    if (q < p && M > 0.0) {
        const double g = gamma_of(params);
        cc.omega0 = std::pow(g, g) * std::pow(M, 1.0 / (p - q));
    }
    const double qs = q_star_of(p);
    if (M > 0.0 && q > std::max(double(N) / double(N - 1), qs)) {
        const double beta = (2.0 - q) / (q - 1.0);
        // ξ r^{-β} solves Δu = -M|∇u|^q exactly: (ξβ)^{q-1} = ((N-1)q - N) / (M(q-1)).
        cc.xi_M = std::pow(((N - 1) * q - N) / (M * (q - 1.0)), 1.0 / (q - 1.0)) / beta;
    }
    return cc;
}

RegimeReport classify(const Params& params)
{
    validate(params);
    const int N = params.N;
    const double p = params.p, q = params.q, M = params.M;
    const double pc = p_crit_of(N), qs = q_star_of(p), qb = q_bdry_of(N);

    const bool p_eq = near(p, pc);
    const bool p_lt = p < pc && !p_eq;
    const bool p_gt = p > pc && !p_eq;
    const bool q_on = near(q, qs);
    const bool q_below = q < qs && !q_on;
    const bool q_above = q > qs && !q_on;

    RegimeReport rep;
    auto add = [&rep](Regime r, std::vector<std::string> cites) { rep.tags.push_back({r, std::move(cites)}); };

    std::vector<std::string> remov;
    if (p_eq && q < qb && !near(q, qb)) remov.push_back("Theorem remov (i)");
    if (p_gt && q_below) remov.push_back("Theorem remov (iii)");
    if (p_gt && q_on && M < m_star_star(N, p)) remov.push_back("Theorem remov (iv)");
    if (!remov.empty()) add(Regime::removable, remov);

    if (p_lt && q < qb && !near(q, qb)) add(Regime::weak_singularity_solvable, {"Theorem weak-sing"});

    if (p_lt && (q_below || q_on)) add(Regime::strong_singularity_absorption, {"Theorem souscrit", "Theorem souscrit-i"});

    std::vector<std::string> crit;
    if (p_eq && near(q, qb) && M > 0.0) crit.push_back("Theorem souscrit-2");
    if (p_gt && q_on && M >= M_Np(N, p)) crit.push_back("Theorem exist (iii)");
    if (!crit.empty()) add(Regime::strong_singularity_critical, crit);

    if (q_above && q < std::min(2.0, p) && M > 0.0) add(Regime::eikonal_dominated, {"Theorem soupscrit"});

    if (rep.tags.empty()) {
        if (p_gt && q_on)
            add(Regime::indeterminate, {"Theorem non-ex", "Theorem exist (iii)"});
        else
            add(Regime::indeterminate, {"no theorem hypothesis holds"});
    }
    return rep;
}

double constant_profile_polynomial(int N, double p, double M, double X)
{
    const double a = alpha_of(p);
    const double K = M * std::pow(a, 2.0 * p / (p + 1.0));
    return std::pow(X, p - 1.0) - K * std::pow(X, (p - 1.0) / (p + 1.0)) + a * (N - 2 - a);
}

namespace {

double polynomial_slope(double p, double K, double X)
{
    const double e = (p - 1.0) / (p + 1.0);
    return (p - 1.0) * std::pow(X, p - 2.0) - K * e * std::pow(X, e - 1.0);
}

template <class F>
double bisect(F&& f, double lo, double hi, double flo)
{
    for (int it = 0; it < 200 && hi - lo > 1e-12 * 0.5 * (lo + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Extremum location to full precision; the tangency test needs |P| near roundoff.
template <class F>
double bisect_fine(F&& f, double lo, double hi, double flo)
{
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

ConstantRoots constant_profile_roots(int N, double p, double M)
{
    require_dim_exp(N, p);
    if (!std::isfinite(M) || M < 0.0) throw ParameterDomainError("constant_profile_roots needs M >= 0");
    ConstantRoots out;
    if (N >= 3 && near(p, double(N) / double(N - 2))) out.degenerate = true;

    const double a = alpha_of(p);
    const double K = M * std::pow(a, 2.0 * p / (p + 1.0));
    auto P = [&](double X) { return constant_profile_polynomial(N, p, M, X); };
    auto dP = [&](double X) { return polynomial_slope(p, K, X); };

    constexpr int kProbes = 4096;
    std::vector<double> xs(kProbes), ps(kProbes), ds(kProbes);
    for (int k = 0; k < kProbes; ++k) {
        xs[k] = std::pow(10.0, -8.0 + 16.0 * k / (kProbes - 1));
        ps[k] = P(xs[k]);
        ds[k] = dP(xs[k]);
    }

    std::vector<ConstantRoot> roots;
    for (int k = 0; k + 1 < kProbes; ++k) {
        const double x0 = xs[k], x1 = xs[k + 1];
        const double p0 = ps[k], p1 = ps[k + 1];
        if (p0 == 0.0) {
            roots.push_back({x0, 1});
            continue;
        }
        if ((p0 < 0.0) != (p1 < 0.0) && p1 != 0.0) {
            roots.push_back({bisect(P, x0, x1, p0), 1});
            continue;
        }
        if (p1 == 0.0) continue;  // picked up as the next interval's left probe
        // Same sign at both probes: a tangency or a close root pair can hide inside.
        if ((ds[k] < 0.0) != (ds[k + 1] < 0.0) && ds[k] != 0.0) {
            const double xe = bisect_fine(dP, x0, x1, ds[k]);
            const double pe = P(xe);
            if (std::abs(pe) < 1e-9) {
                roots.push_back({xe, 2});
            } else if ((pe < 0.0) != (p0 < 0.0)) {
                roots.push_back({bisect(P, x0, xe, p0), 1});
                roots.push_back({bisect(P, xe, x1, pe), 1});
            }
        }
    }
    std::sort(roots.begin(), roots.end(), [](const ConstantRoot& l, const ConstantRoot& r) { return l.X < r.X; });
    out.roots = std::move(roots);
    return out;
}

} // namespace singlab
