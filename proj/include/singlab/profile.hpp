#pragma once

#include "singlab/errors.hpp"
#include "singlab/params.hpp"

#include <optional>
#include <vector>

namespace singlab {

enum class ProfileVariant { half_sphere_dirichlet, absorption_only_psi, whole_sphere_constant };

struct ProfileProblem {
    Params params;
    ProfileVariant variant = ProfileVariant::half_sphere_dirichlet;
    double theta_end = 0.0;
};

// half_sphere_dirichlet and whole_sphere_constant need |q - 2p/(p+1)| <= 1e-12;
// absorption_only_psi needs p < (N+1)/(N-1) and zeroes M.
// theta_end is π for N = 2 and π/2 otherwise (the whole sphere included).
ProfileProblem make_problem(const Params& params, ProfileVariant variant);

struct Shot {
    std::vector<double> theta, omega, domega;
    double end_value = 0.0;
    bool crossed = false;  // ω reached zero before theta_end
    double crossing_theta = 0.0;
    bool diverged = false;  // |ω| exceeded the cap; last_theta is the last valid angle
    double last_theta = 0.0;
};

inline constexpr double kProfileRtol = 1e-10;
inline constexpr double kProfileCap = 1e10;
inline constexpr double kPoleStart = 1e-6;

// N >= 3: omega0 is ω at the pole.  N = 2: ω(0) = 0 and omega0 is the slope ω'(0).
// steps > 0 samples the trajectory on a uniform grid of steps+1 angles over
// [0, theta_end] (truncated at a crossing or blow-up); steps = 0 records the
// integrator's accepted steps.
Shot shoot(const ProfileProblem& problem, double omega0, int steps = 0);

// Right-hand side ω'' of the axisymmetric profile equation.
double profile_rhs(const ProfileProblem& problem, double theta, double w, double dw);

struct ProfileSolution {
    std::vector<double> theta, omega, domega;
    double omega_at_pole = 0.0;
    double shooting_parameter = 0.0;
    double residual = 0.0;
    int shots = 0;
    int bracket_count = 0;
};

inline constexpr int kScanPoints = 512;
inline constexpr int kSolutionSteps = 16384;
// The returned grid is refined by doubling, up to kMaxSolutionSteps, until the
// residual is at most kResidualTarget.
inline constexpr int kMaxSolutionSteps = 1 << 21;
inline constexpr double kResidualTarget = 1e-8;

std::optional<ProfileSolution> solve_min_profile(const ProfileProblem& problem);
ProfileSolution solve_psi(int N, double p);

// Sup norm over interior nodes of the central-difference residual.  When
// domega is present ω'' is differenced from it, otherwise from ω.
double residual(const ProfileSolution& solution, const ProfileProblem& problem);

struct ThresholdScan {
    std::vector<double> M;
    std::vector<int> exists;
};

struct ThresholdBracket {
    double lo = 0.0;
    double hi = 0.0;
    bool degenerate = false;     // existence for every M in range; bracket collapses to 0
    bool open_at_zero = false;   // existence for M > 0 only
    ThresholdScan scan;
};

class ThresholdScanError : public Error {
public:
    ThresholdScanError(const std::string& what, ThresholdScan scan) : Error(what), scan_(std::move(scan)) {}
    const ThresholdScan& scan() const { return scan_; }

private:
    ThresholdScan scan_;
};

inline constexpr int kThresholdScanPoints = 32;

ThresholdBracket existence_threshold(int N, double p, double M_lo, double M_hi, double tol);

} // namespace singlab
