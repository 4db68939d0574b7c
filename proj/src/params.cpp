#include "singlab/params.hpp"

#include "singlab/errors.hpp"

#include <cmath>
#include <sstream>

namespace singlab {

void validate(const Params& params)
{
    std::ostringstream why;
    if (params.N < 2) why << "N must be >= 2; ";
    if (!std::isfinite(params.p) || !(params.p > 1.0)) why << "p must be > 1; ";
    if (!std::isfinite(params.q) || !(params.q > 1.0 && params.q < 2.0)) why << "q must lie in (1, 2); ";
    if (!std::isfinite(params.M) || !(params.M >= 0.0)) why << "M must be >= 0; ";
    const std::string msg = why.str();
    if (!msg.empty()) throw ParameterDomainError(describe(params) + ": " + msg.substr(0, msg.size() - 2));
}

double alpha_of(double p) { return 2.0 / (p - 1.0); }
double q_star_of(double p) { return 2.0 * p / (p + 1.0); }
double p_crit_of(int N) { return double(N + 1) / double(N - 1); }
double q_bdry_of(int N) { return double(N + 1) / double(N); }

double gamma_of(const Params& params)
{
    validate(params);
    if (!(params.q < params.p)) throw ParameterDomainError(describe(params) + ": gamma needs q < p");
    const double qs = q_star_of(params.p);
    if (std::abs(params.q - qs) <= kCriticalLineBand) return alpha_of(params.p);
    return params.q / (params.p - params.q);
}

ExponentSet exponents(const Params& params)
{
    validate(params);
    ExponentSet e;
    e.alpha = alpha_of(params.p);
    e.q_star = q_star_of(params.p);
    e.p_crit = p_crit_of(params.N);
    e.q_bdry = q_bdry_of(params.N);
    // On the critical line the three exponents agree exactly; rounding in the
    // separate formulas is larger than 1e-12 when p is close to 1.
    const bool critical = std::abs(params.q - e.q_star) <= kCriticalLineBand;
    e.beta = critical ? e.alpha : (2.0 - params.q) / (params.q - 1.0);
    if (params.q < params.p) e.gamma = critical ? e.alpha : params.q / (params.p - params.q);
    return e;
}

std::string describe(const Params& params)
{
    std::ostringstream os;
    os.precision(17);
    os << "(N=" << params.N << ", p=" << params.p << ", q=" << params.q << ", M=" << params.M << ")";
    return os.str();
}

} // namespace singlab
