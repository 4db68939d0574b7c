#include "singlab/radial.hpp"

#include "singlab/errors.hpp"
#include "singlab/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace singlab {

double radial_rhs(const Params& params, double r, double u, double du)
{
    const double g = du == 0.0 ? 0.0 : std::pow(std::abs(du), params.q);
    return -(params.N - 1) * du / r + std::pow(std::abs(u), params.p - 1.0) * u - params.M * g;
}

RadialTrajectory integrate(const Params& params, double r0, double u0, double v0, double r1, double tol)
{
    validate(params);
    if (!std::isfinite(r0) || !std::isfinite(r1) || !std::isfinite(u0) || !std::isfinite(v0) || !std::isfinite(tol))
        throw ParameterDomainError("integrate: non-finite input");
    if (!(r0 > 0.0) || !(r1 > 0.0) || r0 == r1 || !(tol > 0.0))
        throw ParameterDomainError("integrate: need r0, r1 > 0, r0 != r1, tol > 0");

    RadialTrajectory tr;
    tr.params = params;
    auto rhs = [&](double r, const ode::Vec<2>& y, ode::Vec<2>& dy) {
        dy[0] = y[1];
        dy[1] = radial_rhs(params, r, y[0], y[1]);
    };
    auto watch = [&](double r, const ode::Vec<2>& y, const ode::Vec<2>&) {
        if (!std::isfinite(y[0]) || !std::isfinite(y[1]) || std::abs(y[0]) > kRadialCap) {
            tr.diverged = true;
            return false;
        }
        tr.r.push_back(r);
        tr.u.push_back(y[0]);
        tr.du.push_back(y[1]);
        return true;
    };
    ode::Options opt;
    opt.rtol = tol;
    opt.atol = tol * 1e-3;
    const auto st = ode::dopri5<2>(rhs, r0, ode::Vec<2>{u0, v0}, r1, opt, watch);
    if (st != ode::Status::reached && st != ode::Status::stopped) tr.diverged = true;
    if (r1 < r0) {
        std::reverse(tr.r.begin(), tr.r.end());
        std::reverse(tr.u.begin(), tr.u.end());
        std::reverse(tr.du.begin(), tr.du.end());
    }
    return tr;
}

double ko_check(const RadialTrajectory& traj)
{
    const Params& pr = traj.params;
    validate(pr);
    if (!(pr.q < pr.p)) throw ParameterDomainError(describe(pr) + ": ko_check needs q < p");
    const double a = alpha_of(pr.p);
    const double g = gamma_of(pr);
    const double amp = pr.M > 0.0 ? std::pow(pr.M, 1.0 / (pr.p - pr.q)) : 0.0;
    double sup = 0.0;
    for (std::size_t i = 0; i < traj.r.size(); ++i) {
        const double env = std::max(amp * std::pow(traj.r[i], -g), std::pow(traj.r[i], -a));
        sup = std::max(sup, traj.u[i] / env);
    }
    return sup;
}

double osserman_residual(const Params& pr, double a, double b, double lambda, double rho)
{
    const int N = pr.N;
    const double p = pr.p, q = pr.q, M = pr.M;
    const double d = a * a - rho * rho;
    const double bracket = std::pow(lambda, p - 1.0) * std::pow(d, 2.0 - b * (p - 1.0)) +
                           2.0 * b * (N - 2.0 * (b + 1.0)) * rho * rho - 2.0 * N * b * a * a -
                           M * std::pow(2.0 * b, q) * std::pow(lambda, q - 1.0) * std::pow(rho, q) *
                               std::pow(d, 2.0 + b - q * (b + 1.0));
    return lambda * std::pow(d, -2.0 - b) * bracket;
}

double osserman_check(const Params& pr, double a, double b, double lambda, int n)
{
    validate(pr);
    if (!(a > 0.0) || !(b > 0.0) || !(lambda >= 0.0) || n < 16)
        throw ParameterDomainError("osserman_check needs a > 0, b > 0, lambda >= 0, n >= 16");
    if (lambda == 0.0) return 0.0;
    double lo = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        const double rho = 0.5 * a * (1.0 - std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * n)));
        lo = std::min(lo, osserman_residual(pr, a, b, lambda, rho));
    }
    return lo;
}

std::optional<double> supersolution_radius(const Params& pr, double n)
{
    validate(pr);
    const double p = pr.p, q = pr.q, M = pr.M;
    const double qs = q_star_of(p);
    if (!(q > qs && q < std::min(2.0, p) && p < p_crit_of(pr.N) && M > 0.0))
        throw ParameterDomainError(describe(pr) + ": supersolution_radius needs 2p/(p+1) < q < min{2,p}, "
                                                  "p < (N+1)/(N-1), M > 0");
    if (!(n > 0.0) || !std::isfinite(n)) throw ParameterDomainError("supersolution_radius needs n > 0");
    const double g = gamma_of(pr);
    const double lead = std::pow(n, p - q) - std::pow(g, q) * M;
    if (!(lead > 0.0)) return std::nullopt;
    const double rhs = g * (g + 2.0 - pr.N);
    return std::pow(rhs / (std::pow(n, q - 1.0) * lead), 1.0 / (2.0 - (p - 1.0) * g));
}

double fit_loglog_slope(const std::vector<double>& r, const std::vector<double>& u, double r_lo, double r_hi)
{
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] < r_lo || r[i] > r_hi) continue;
        if (!(u[i] > 0.0)) {
            std::ostringstream os;
            os.precision(17);
            os << "nonpositive value " << u[i] << " at r=" << r[i] << " inside the fit window";
            throw FitError(os.str());
        }
        xs.push_back(std::log(r[i]));
        ys.push_back(std::log(u[i]));
    }
    const std::size_t n = xs.size();
    if (n < 8) throw FitError("fit window holds fewer than 8 samples");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) throw FitError("fit window spans a single radius");
    return sxy / sxx;
}

double fit_blowup_exponent(const RadialTrajectory& traj, double r_lo, double r_hi)
{
    return fit_loglog_slope(traj.r, traj.u, r_lo, r_hi);
}

} // namespace singlab
