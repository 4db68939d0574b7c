#pragma once

#include "singlab/params.hpp"

#include <optional>
#include <vector>

namespace singlab {

struct RadialTrajectory {
    std::vector<double> r, u, du;  // r strictly increasing
    Params params;
    bool diverged = false;  // integration stopped at |u| > kRadialCap
};

inline constexpr double kRadialCap = 1e12;

// -u'' - (N-1)u'/r + |u|^{p-1}u - M|u'|^q = 0 from (r0, u0, u0' = v0) toward r1.
// r1 < r0 integrates inward; the trajectory is still returned with increasing r.
RadialTrajectory integrate(const Params& params, double r0, double u0, double v0, double r1, double tol);

// u'' from the radial equation.
double radial_rhs(const Params& params, double r, double u, double du);

// sup_r u(r) / max{M^{1/(p-q)} r^{-γ}, r^{-α}}.
double ko_check(const RadialTrajectory& traj);

// min over n Chebyshev points of (0, a) of L Ũ for Ũ = lambda (a² - ρ²)^{-b}.
double osserman_check(const Params& params, double a, double b, double lambda, int n);

// L Ũ at one radius, from the closed-form expansion.
double osserman_residual(const Params& params, double a, double b, double lambda, double rho);

// Radius below which n r^{-γ} is a supersolution; absent when n^{p-q} <= γ^q M.
std::optional<double> supersolution_radius(const Params& params, double n_amp);

// Least-squares slope of log u against log r over samples with r in [r_lo, r_hi].
double fit_blowup_exponent(const RadialTrajectory& traj, double r_lo, double r_hi);
double fit_loglog_slope(const std::vector<double>& r, const std::vector<double>& u, double r_lo, double r_hi);

} // namespace singlab
