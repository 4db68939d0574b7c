#pragma once

#include "singlab/params.hpp"

#include <optional>
#include <string>
#include <vector>

namespace singlab {

struct CriticalConstants {
    std::optional<double> m_star_star;
    double M_Np = 0.0;
    std::optional<double> m_star;
    std::optional<double> omega0;
    std::optional<double> xi_M;
};

enum class Regime {
    removable,
    weak_singularity_solvable,
    strong_singularity_absorption,
    strong_singularity_critical,
    eikonal_dominated,
    indeterminate,
};

std::string to_string(Regime r);

struct RegimeTag {
    Regime regime;
    std::vector<std::string> citations;
};

struct RegimeReport {
    std::vector<RegimeTag> tags;  // ordered by Regime enumerator

    bool has(Regime r) const;
    std::vector<std::string> labels() const;
};

// Relative tolerance used when testing parameters against critical lines.
inline constexpr double kLineTol = 1e-12;

double m_star_star(int N, double p);                 // p >= (N+1)/(N-1)
double m_star_star_r(int N, double p, double r);     // (N+1)/(N-1) <= r < p
double M_Np(int N, double p);
std::optional<double> m_star(int N, double p);       // N >= 3, p > N/(N-2)

CriticalConstants critical_constants(const Params& params);
RegimeReport classify(const Params& params);

// P(X) = X^{p-1} - M α^{2p/(p+1)} X^{(p-1)/(p+1)} + α(N-2-α).
double constant_profile_polynomial(int N, double p, double M, double X);

struct ConstantRoot {
    double X = 0.0;
    int multiplicity = 1;
};

struct ConstantRoots {
    std::vector<ConstantRoot> roots;  // increasing
    // p = N/(N-2): the constant term vanishes and the root count is not asserted.
    bool degenerate = false;
};

ConstantRoots constant_profile_roots(int N, double p, double M);

} // namespace singlab
