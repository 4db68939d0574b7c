#pragma once

#include <optional>
#include <string>

namespace singlab {

// Problem quadruple for -Δu + |u|^{p-1}u - M|∇u|^q = 0.
struct Params {
    int N = 2;
    double p = 2.0;
    double q = 1.5;
    double M = 0.0;
};

// Throws ParameterDomainError unless N >= 2, p > 1, 1 < q < 2, M >= 0, all finite.
void validate(const Params& params);

struct ExponentSet {
    double alpha = 0.0;
    double beta = 0.0;
    std::optional<double> gamma;
    double q_star = 0.0;
    double p_crit = 0.0;
    double q_bdry = 0.0;
};

// Width of the band around q_star treated as the critical line.
inline constexpr double kCriticalLineBand = 1e-14;

ExponentSet exponents(const Params& params);

// Requires q < p.
double gamma_of(const Params& params);

double alpha_of(double p);
double q_star_of(double p);
double p_crit_of(int N);
double q_bdry_of(int N);

std::string describe(const Params& params);

} // namespace singlab
