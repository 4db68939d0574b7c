#pragma once

#include "singlab/errors.hpp"
#include "singlab/params.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace singlab {

// Log-polar half annulus r_min <= r <= r_max, 0 <= θ <= π.  Both θ = 0 and
// θ = π rows are stored; they carry the zero Dirichlet data.
struct PolarGrid {
    double r_min = 1e-4;
    double r_max = 1.0;
    int n_r = 256;
    int n_theta = 128;

    double ds() const;      // spacing in s = ln r
    double dtheta() const;
    double r(int i) const;
    double theta(int j) const;
    std::size_t size() const { return std::size_t(n_r) * std::size_t(n_theta); }
    std::size_t index(int i, int j) const { return std::size_t(i) * std::size_t(n_theta) + std::size_t(j); }
};

void validate(const PolarGrid& grid);
PolarGrid default_grid();

struct Field {
    PolarGrid grid;
    std::vector<double> values;  // row-major by radius
    Params params;
    double k_mass = 0.0;

    double at(int i, int j) const { return values[grid.index(i, j)]; }
};

struct SolveReport {
    int iterations = 0;
    double final_gap = 0.0;  // max |u_{n+1} - u_n| / max(|u_n|, floor)
    bool ordered = true;     // every iterate <= its predecessor
    bool within_bounds = true;  // every iterate inside [sub, super]
    bool converged = false;
    int factorizations = 0;
    std::optional<std::array<int, 2>> first_violation;
    std::string violation_kind;
};

class HalfplaneSolveError : public Error {
public:
    HalfplaneSolveError(const std::string& what, SolveReport report) : Error(what), report_(std::move(report)) {}
    const SolveReport& report() const { return report_; }

private:
    SolveReport report_;
};

class HalfplaneNonconvergence : public HalfplaneSolveError {
public:
    using HalfplaneSolveError::HalfplaneSolveError;
};

class OrderViolation : public HalfplaneSolveError {
public:
    using HalfplaneSolveError::HalfplaneSolveError;
};

class ConstructionFailure : public Error {
public:
    using Error::Error;
};

enum class GradientScheme { centered, upwind };

struct HalfplaneOptions {
    double tol = 1e-8;
    int max_iterations = 500;
    GradientScheme scheme = GradientScheme::upwind;
    // Relative slack for the order checks; absorbs the linear-solve roundoff.
    double order_slack = 1e-9;
};

// c_N x_N |x|^{-N} with c_N = Γ(N/2) π^{-N/2}.
double poisson_kernel(int N, const std::vector<double>& x);
double poisson_kernel_2d(double r, double theta);

// Dirichlet data: k P₂ on the inner arc, zero on the outer arc and the θ rows.
std::vector<double> boundary_data(const PolarGrid& grid, double k);

// r²(-Δu + u^p - M|∇u|^q) at interior nodes (zero on the boundary).
std::vector<double> scaled_residual(const Field& field, GradientScheme scheme = GradientScheme::upwind);

Field harmonic_majorant(const PolarGrid& grid, double k);

std::pair<Field, SolveReport> solve_absorption(const PolarGrid& grid, double p, double k, double tol,
                                               const HalfplaneOptions& opt = {});

std::pair<Field, SolveReport> solve_full(const PolarGrid& grid, const Params& params, double k, const Field& sub,
                                         const Field& super, double tol, const HalfplaneOptions& opt = {},
                                         std::vector<Field>* iterates = nullptr);

struct Barrier {
    Field sub;
    Field super;
    double C_a = 0.0;
    double c = 0.0;
    int growth_steps = 0;
};

// sub = absorption solution; super = min{k P₂ + C_a, c·envelope} grown until discretely verified.
Barrier build_barriers(const PolarGrid& grid, const Params& params, double k, const HalfplaneOptions& opt = {});

struct FundamentalSolution {
    Field field;
    SolveReport report;
    Barrier barrier;
};

// Requires the weak-singularity-solvable regime.
FundamentalSolution fundamental_solution(const PolarGrid& grid, const Params& params, double k,
                                         const HalfplaneOptions& opt = {});
// Same construction without the regime precondition.
FundamentalSolution fundamental_solution_unchecked(const PolarGrid& grid, const Params& params, double k,
                                                   const HalfplaneOptions& opt = {});

struct StrongLimit {
    Field field;
    double saturation = 0.0;
    std::vector<double> k_list;
    std::vector<double> saturation_trace;  // entry m compares k_list[m] with k_list[m+1]
    std::vector<SolveReport> reports;
};

StrongLimit strong_limit(const PolarGrid& grid, const Params& params, const std::vector<double>& k_list,
                         const HalfplaneOptions& opt = {});

struct Diagnostics {
    std::vector<double> ring_theta, near_ring_ratio;  // (a) on r = 2 r_min
    std::optional<double> radial_slope;               // (b) θ = π/2 over [10, 100] r_min
    std::vector<double> profile_radii;                // (c)
    std::vector<std::vector<double>> rescaled_profiles;
    std::vector<double> profile_theta;
    std::optional<double> ko_ratio;                   // (d)
    std::vector<double> eikonal_m;                    // (e)
    std::vector<double> eikonal_margin;               // max over nodes; negative certifies
};

Diagnostics diagnostics(const Field& field);

// Values along θ at radius r, geometric interpolation between radial nodes.
std::vector<double> angular_trace(const Field& field, double r);
// Values along r at θ = π/2 (mean of the two central rows when n_theta is even).
std::vector<double> midline_trace(const Field& field);

// Sup of the (SS5+++) expression for W_m = m r^{-γ} sin θ on the grid.
double eikonal_subsolution_margin(const PolarGrid& grid, const Params& params, double m);

struct RemovabilityTrend {
    std::vector<double> r_min;
    std::vector<double> annulus_sup;
    std::vector<SolveReport> reports;
    bool monotone_decreasing = false;
    double last_relative_change = 0.0;
};

// Holds ds and dθ of base fixed while r_min shrinks, so n_r grows with the span.
RemovabilityTrend removability_probe(const PolarGrid& base, const std::vector<double>& r_min_list,
                                     const Params& params, double k, const HalfplaneOptions& opt = {});

} // namespace singlab
