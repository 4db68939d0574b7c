#include "singlab/profile.hpp"

#include "singlab/ode.hpp"
#include "singlab/regimes.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace singlab {

namespace {

constexpr double kPi = std::numbers::pi;

bool slope_shooting(const ProfileProblem& pb)
{
    return pb.params.N == 2 && pb.variant != ProfileVariant::whole_sphere_constant;
}

struct Sample {
    double t;
    ode::Vec<2> y;
    ode::Vec<2> dy;
};

// Zero of the Hermite interpolant of ω between two accepted states with ω(a) > 0 >= ω(b).
Sample locate_crossing(const Sample& a, const Sample& b)
{
    auto w = [&](double t) { return ode::hermite(a.t, a.y[0], a.dy[0], b.t, b.y[0], b.dy[0], t); };
    double lo = a.t, hi = b.t;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (w(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    Sample s;
    s.t = hi;
    s.y[0] = 0.0;
    s.y[1] = ode::hermite(a.t, a.y[1], a.dy[1], b.t, b.y[1], b.dy[1], hi);
    s.dy = {s.y[1], 0.0};
    return s;
}

} // namespace

ProfileProblem make_problem(const Params& params, ProfileVariant variant)
{
    validate(params);
    ProfileProblem pb;
    pb.params = params;
    pb.variant = variant;
    const int N = params.N;
    const double p = params.p;
    switch (variant) {
    case ProfileVariant::half_sphere_dirichlet:
    case ProfileVariant::whole_sphere_constant:
        if (std::abs(params.q - q_star_of(p)) > 1e-12)
            throw ParameterDomainError(describe(params) + ": the profile equation needs q = 2p/(p+1)");
        break;
    case ProfileVariant::absorption_only_psi:
        if (!(p < p_crit_of(N)))
            throw ParameterDomainError(describe(params) + ": psi needs 1 < p < (N+1)/(N-1)");
        pb.params.M = 0.0;
        pb.params.q = q_star_of(p);
        break;
    }
    // The whole sphere also stops at the equator for N >= 3: the far pole is a
    // singular point of the shooting equation, where any mismatch grows like
    // (π - θ)^{2-N}, and profiles even about the equator lose nothing.
    pb.theta_end = N == 2 ? kPi : 0.5 * kPi;
    return pb;
}

double profile_rhs(const ProfileProblem& pb, double theta, double w, double dw)
{
    const int N = pb.params.N;
    const double p = pb.params.p, M = pb.params.M;
    const double a = alpha_of(p);
    const double c = a * (N - 2 - a);
    double f = c * w + std::pow(std::abs(w), p - 1.0) * w;
    if (M != 0.0) f -= M * std::pow(a * a * w * w + dw * dw, p / (p + 1.0));
    if (N > 2) f -= (N - 2) * dw / std::tan(theta);
    return f;
}

Shot shoot(const ProfileProblem& pb, double omega0, int steps)
{
    if (!std::isfinite(omega0) || omega0 < 0.0) throw ParameterDomainError("shoot needs a finite omega0 >= 0");
    const int N = pb.params.N;
    const double p = pb.params.p, M = pb.params.M;
    const double a = alpha_of(p);
    const double tend = pb.theta_end;

    auto rhs = [&](double t, const ode::Vec<2>& y, ode::Vec<2>& dy) {
        dy[0] = y[1];
        dy[1] = profile_rhs(pb, t, y[0], y[1]);
    };

    Shot shot;
    auto record = [&](const Sample& s) {
        shot.theta.push_back(s.t);
        shot.omega.push_back(s.y[0]);
        shot.domega.push_back(s.y[1]);
    };

    Sample cur;
    if (slope_shooting(pb)) {
        cur.t = 0.0;
        cur.y = {0.0, omega0};
    } else if (N == 2) {
        cur.t = 0.0;
        cur.y = {omega0, 0.0};
    } else {
        const double c = a * (N - 2 - a);
        const double w2 = (c * omega0 + std::pow(omega0, p) -
                           M * std::pow(a, 2.0 * p / (p + 1.0)) * std::pow(omega0, 2.0 * p / (p + 1.0))) /
                          (N - 1);
        record({0.0, {omega0, 0.0}, {0.0, w2}});
        cur.t = kPoleStart;
        cur.y = {omega0, kPoleStart * w2};
    }
    rhs(cur.t, cur.y, cur.dy);

    bool done = false;
    auto watch = [&](double t, const ode::Vec<2>& y, const ode::Vec<2>& dy) {
        const Sample next{t, y, dy};
        if (t == cur.t) return true;
        if (!std::isfinite(y[0]) || std::abs(y[0]) > kProfileCap) {
            shot.diverged = true;
            shot.last_theta = cur.t;
            done = true;
            return false;
        }
        if (cur.y[0] > 0.0 && y[0] <= 0.0 && !(y[0] == 0.0 && t == tend)) {
            const Sample z = locate_crossing(cur, next);
            shot.crossed = true;
            shot.crossing_theta = z.t;
            record(z);
            done = true;
            return false;
        }
        cur = next;
        if (steps == 0) record(cur);
        return true;
    };

    ode::Options opt;
    opt.rtol = kProfileRtol;
    opt.atol = 1e-14;
    ode::Stats stats;
    if (steps == 0) {
        record(cur);
        const auto st = ode::dopri5<2>(rhs, cur.t, cur.y, tend, opt, watch, &stats);
        if (!done && st != ode::Status::reached) {
            shot.diverged = true;
            shot.last_theta = cur.t;
        }
    } else {
        if (slope_shooting(pb) || N == 2) record(cur);
        const double H = tend / steps;
        for (int j = 1; j <= steps && !done; ++j) {
            const double target = j == steps ? tend : j * H;
            if (target <= cur.t) continue;
            opt.h0 = stats.last_h > 0.0 ? std::min(stats.last_h, target - cur.t) : 0.0;
            const auto st = ode::dopri5<2>(rhs, cur.t, cur.y, target, opt, watch, &stats);
            if (done) break;
            if (st != ode::Status::reached) {
                shot.diverged = true;
                shot.last_theta = cur.t;
                break;
            }
            record(cur);
        }
    }

    if (shot.crossed) {
        shot.end_value = -(tend - shot.crossing_theta);
    } else if (shot.diverged) {
        shot.end_value = std::max(cur.y[0], kProfileCap);
    } else {
        shot.end_value = cur.y[0];
        shot.last_theta = cur.t;
    }
    return shot;
}

namespace {

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

ProfileSolution to_solution(const ProfileProblem& pb, const Shot& s, double w0)
{
    ProfileSolution sol;
    sol.theta = s.theta;
    sol.omega = s.omega;
    sol.domega = s.domega;
    sol.shooting_parameter = w0;
    if (slope_shooting(pb)) {
        const std::size_t mid = sol.theta.size() / 2;
        sol.omega_at_pole = sol.omega.empty() ? 0.0 : sol.omega[mid];
    } else {
        sol.omega_at_pole = w0;
    }
    return sol;
}

} // namespace

namespace {

// refine = false keeps the first sampled grid; existence is decided there.
std::optional<ProfileSolution> min_profile(const ProfileProblem& pb, bool refine)
{
    std::vector<double> ws(kScanPoints);
    std::vector<int> sg(kScanPoints);
    int shots = 0;
    for (int k = 0; k < kScanPoints; ++k) {
        ws[k] = std::pow(10.0, -4.0 + 8.0 * k / (kScanPoints - 1));
        sg[k] = sign_of(shoot(pb, ws[k]).end_value);
        ++shots;
    }
    int first = -1, count = 0;
    for (int k = 0; k + 1 < kScanPoints; ++k) {
        if (sg[k] != 0 && sg[k + 1] != 0 && sg[k] != sg[k + 1]) {
            if (first < 0) first = k;
            ++count;
        }
    }
    if (first < 0) return std::nullopt;

    double lo = ws[first], hi = ws[first + 1];
    const int slo = sg[first];
    // Bisected to adjacent doubles: the end value, and with it the symmetry of
    // two-sided profiles, is only as good as the shooting parameter.
    for (;;) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const int sm = sign_of(shoot(pb, mid).end_value);
        ++shots;
        if (sm == 0) {
            lo = hi = mid;
            break;
        }
        if (sm == slo)
            lo = mid;
        else
            hi = mid;
    }

    // Take the endpoint whose shot survives to theta_end; nudge outward if the
    // sampled rerun lands on the crossing side.  The sampling grid is doubled
    // until the difference residual meets kResidualTarget.
    double w = slo > 0 ? lo : hi;
    const double away = slo > 0 ? -1.0 : 1.0;
    std::optional<ProfileSolution> best;
    for (int steps = kSolutionSteps; steps <= kMaxSolutionSteps; steps *= 2) {
        Shot s = shoot(pb, w, steps);
        ++shots;
        for (int it = 0; s.crossed && it < 40; ++it) {
            w *= 1.0 + away * 1e-12 * std::ldexp(1.0, it);
            s = shoot(pb, w, steps);
            ++shots;
        }
        if (s.crossed || s.diverged) break;
        ProfileSolution sol = to_solution(pb, s, w);
        sol.residual = residual(sol, pb);
        const bool good = sol.residual <= kResidualTarget;
        if (!best || sol.residual < best->residual) best = std::move(sol);
        if (good || !refine) break;
    }
    if (!best) return std::nullopt;
    best->shots = shots;
    best->bracket_count = count;
    return best;
}

} // namespace

std::optional<ProfileSolution> solve_min_profile(const ProfileProblem& pb) { return min_profile(pb, true); }

ProfileSolution solve_psi(int N, double p)
{
    Params params{N, p, 0.0, 0.0};
    if (N < 2 || !(p > 1.0) || !(p < p_crit_of(N))) {
        std::ostringstream os;
        os.precision(17);
        os << "psi needs 1 < p < (N+1)/(N-1), got N=" << N << ", p=" << p;
        throw ParameterDomainError(os.str());
    }
    params.q = q_star_of(p);
    const auto pb = make_problem(params, ProfileVariant::absorption_only_psi);
    auto sol = solve_min_profile(pb);
    if (!sol) throw NonconvergenceError("psi: no sign change on the shooting scan");
    return *sol;
}

double residual(const ProfileSolution& sol, const ProfileProblem& pb)
{
    const auto& t = sol.theta;
    const auto& w = sol.omega;
    const std::size_t n = t.size();
    if (n < 3) return 0.0;
    const bool have_slope = sol.domega.size() == n;
    double worst = 0.0;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const double hl = t[j] - t[j - 1], hr = t[j + 1] - t[j];
        double d1, d2;
        if (have_slope) {
            d1 = sol.domega[j];
            d2 = (sol.domega[j + 1] - sol.domega[j - 1]) / (hl + hr);
        } else {
            d1 = (w[j + 1] - w[j - 1]) / (hl + hr);
            d2 = 2.0 * (hl * w[j + 1] - (hl + hr) * w[j] + hr * w[j - 1]) / (hl * hr * (hl + hr));
        }
        const double r = d2 - profile_rhs(pb, t[j], w[j], d1);
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

ThresholdBracket existence_threshold(int N, double p, double M_lo, double M_hi, double tol)
{
    if (N < 2 || !(p > 1.0) || !(M_lo >= 0.0) || !(M_hi > M_lo) || !(tol > 0.0))
        throw ParameterDomainError("existence_threshold needs N >= 2, p > 1, 0 <= M_lo < M_hi, tol > 0");
    const double pc = p_crit_of(N);
    const bool at_crit = std::abs(p - pc) <= 1e-12 * pc;
    if (p > pc && !at_crit) {
        const double lo_c = m_star_star(N, p), hi_c = M_Np(N, p);
        if (M_lo > lo_c * (1.0 + 1e-12) || M_hi < hi_c * (1.0 - 1e-12))
            throw ParameterDomainError("existence_threshold needs M_range to contain [m**, M_Np]");
    }
    Params params{N, p, q_star_of(p), 0.0};
    auto exists = [&](double M) {
        params.M = M;
        return min_profile(make_problem(params, ProfileVariant::half_sphere_dirichlet), false).has_value() ? 1 : 0;
    };

    ThresholdBracket out;
    const int n = kThresholdScanPoints;
    double lo_scan = M_lo;
    if (p <= pc || at_crit) lo_scan = std::max(M_lo, at_crit ? 1e-3 * (M_hi - M_lo) : M_lo);
    for (int k = 0; k < n; ++k) {
        const double M = lo_scan + (M_hi - lo_scan) * k / (n - 1);
        out.scan.M.push_back(M);
        out.scan.exists.push_back(exists(M));
    }
    int first_one = -1;
    for (int k = 0; k < n; ++k)
        if (out.scan.exists[k]) {
            first_one = k;
            break;
        }
    bool monotone = first_one >= 0;
    for (int k = std::max(first_one, 0); monotone && k < n; ++k) monotone = out.scan.exists[k] == 1;
    if (!monotone) throw ThresholdScanError("existence indicator is not a single 0->1 step on the scan", out.scan);

    if (p <= pc || at_crit) {
        if (first_one != 0) throw ThresholdScanError("existence fails at some M although p <= (N+1)/(N-1)", out.scan);
        out.degenerate = true;
        out.open_at_zero = at_crit;
        return out;
    }
    if (first_one == 0) throw ThresholdScanError("existence at the lower end of the range; range misses the threshold", out.scan);

    double lo = out.scan.M[first_one - 1], hi = out.scan.M[first_one];
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (exists(mid))
            hi = mid;
        else
            lo = mid;
    }
    out.lo = lo;
    out.hi = hi;
    return out;
}

} // namespace singlab
