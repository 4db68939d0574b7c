#pragma once

// Independent reference computations.  None of these call into the library's
// solvers; they share only the problem statement.

#include <vector>

namespace oracle {

// Positive roots of X^{p-1} - M α^{2p/(p+1)} X^{(p-1)/(p+1)} + α(N-2-α) from a
// log-spaced scan of n points over [1e-8, 1e8].  Sign changes are bisected in
// long double; a tangency is located by golden-section search on the scan's
// local minima and accepted when |P| < 1e-9.
struct ScanRoot {
    double X;
    bool tangent;
};
std::vector<ScanRoot> dense_scan_roots(int N, double p, double M, long n = 1'000'000);

// ψ for N = 2 on (0, π): Chebyshev-Lobatto collocation of ψ'' = α²ψ - ψ^p with
// damped Newton.  Evaluates by barycentric interpolation.
class ChebyshevPsi {
public:
    ChebyshevPsi(double p, int n);
    double operator()(double theta) const;
    double newton_residual() const { return residual_; }

private:
    std::vector<double> x_, v_, w_;
    double residual_ = 0.0;
};

// End-value map of the half-sphere problem at q = 2p/(p+1), N >= 3, integrated
// by classical fixed-step RK4 from a pole Taylor start.  Same sign convention
// as the library: crossings give -(θ_end - θ_c), blow-up gives +1.
double reference_end_value(int N, double p, double M, double omega0, int steps = 200000);

// Smallest positive omega0 at which the reference end-value map changes sign,
// located on the same 512-point log scan and bisected to 1e-12 relative.
double reference_min_shooting(int N, double p, double M);

// L Ũ for Ũ = λ(a² - ρ²)^{-b} from explicit derivatives.
double osserman_direct(int N, double p, double q, double M, double a, double b, double lambda, double rho);

// Threshold λ for (N, p, q, M, a, b) = (3, 3, 1.5, 1, 1, 1) on a node ρ: with
// t = √λ the bracket is t⁴ - 2^{3/2} ρ^{3/2} t - (6 + 2ρ²), which has one
// positive root.
double osserman_lambda_closed(double rho);

} // namespace oracle
