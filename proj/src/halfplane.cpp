#include "singlab/halfplane.hpp"

#include "singlab/radial.hpp"
#include "singlab/regimes.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace singlab {

namespace {

constexpr double kPi = std::numbers::pi;
// Diagonal shift above the exact self-derivative of the upwind gradient term; > 1 keeps the update monotone.
constexpr double kSelfShift = 1.1;

} // namespace

double PolarGrid::ds() const { return std::log(r_max / r_min) / (n_r - 1); }
double PolarGrid::dtheta() const { return kPi / (n_theta - 1); }
double PolarGrid::r(int i) const { return i == n_r - 1 ? r_max : r_min * std::exp(i * ds()); }
double PolarGrid::theta(int j) const { return j == n_theta - 1 ? kPi : j * dtheta(); }

void validate(const PolarGrid& g)
{
    if (!(g.r_min > 0.0) || !(g.r_max > g.r_min) || !std::isfinite(g.r_max) || g.n_r < 32 || g.n_theta < 16) {
        std::ostringstream os;
        os.precision(17);
        os << "invalid grid r=[" << g.r_min << ", " << g.r_max << "], n_r=" << g.n_r << ", n_theta=" << g.n_theta
           << " (need 0 < r_min < r_max, n_r >= 32, n_theta >= 16)";
        throw ParameterDomainError(os.str());
    }
}

PolarGrid default_grid() { return PolarGrid{}; }

double poisson_kernel(int N, const std::vector<double>& x)
{
    if (N < 2 || int(x.size()) != N) throw ParameterDomainError("poisson_kernel needs a point with N >= 2 coordinates");
    if (x.back() < 0.0) throw ParameterDomainError("poisson_kernel needs x_N >= 0");
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    if (r2 == 0.0) throw SingularInputError("poisson_kernel is singular at the origin");
    const double cN = std::tgamma(0.5 * N) * std::pow(kPi, -0.5 * N);
    return cN * x.back() * std::pow(r2, -0.5 * N);
}

double poisson_kernel_2d(double r, double theta) { return std::sin(theta) / (kPi * r); }

std::vector<double> boundary_data(const PolarGrid& g, double k)
{
    std::vector<double> b(g.size(), 0.0);
    for (int j = 1; j + 1 < g.n_theta; ++j) b[g.index(0, j)] = k * poisson_kernel_2d(g.r_min, g.theta(j));
    return b;
}

namespace {

// Interior-node linear algebra for A + diag(Λ), A = -(∂ss + ∂θθ) with the 5-point stencil.
class Stencil {
public:
    explicit Stencil(const PolarGrid& g) : g_(g), ni_(g.n_r - 2), nj_(g.n_theta - 2)
    {
        const double cs = 1.0 / (g.ds() * g.ds()), ct = 1.0 / (g.dtheta() * g.dtheta());
        diag0_ = 2.0 * cs + 2.0 * ct;
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(std::size_t(unknowns()) * 5);
        for (int a = 0; a < ni_; ++a)
            for (int b = 0; b < nj_; ++b) {
                const int m = id(a, b);
                trip.emplace_back(m, m, diag0_);
                if (a > 0) trip.emplace_back(m, id(a - 1, b), -cs);
                if (a + 1 < ni_) trip.emplace_back(m, id(a + 1, b), -cs);
                if (b > 0) trip.emplace_back(m, id(a, b - 1), -ct);
                if (b + 1 < nj_) trip.emplace_back(m, id(a, b + 1), -ct);
            }
        mat_.resize(unknowns(), unknowns());
        mat_.setFromTriplets(trip.begin(), trip.end());
        mat_.makeCompressed();
        diag_ptr_.resize(unknowns());
        for (int c = 0; c < mat_.outerSize(); ++c)
            for (Eigen::SparseMatrix<double>::InnerIterator it(mat_, c); it; ++it)
                if (it.row() == it.col()) diag_ptr_[it.row()] = &it.valueRef();
        ldlt_.analyzePattern(mat_);
    }

    int unknowns() const { return ni_ * nj_; }
    int id(int a, int b) const { return a * nj_ + b; }

    void factor(const std::vector<double>& lambda)
    {
        for (int m = 0; m < unknowns(); ++m) *diag_ptr_[m] = diag0_ + lambda[m];
        ldlt_.factorize(mat_);
        if (ldlt_.info() != Eigen::Success) throw NonconvergenceError("sparse factorization failed");
    }

    // rhs holds interior values; the boundary part of u is folded in here.
    Eigen::VectorXd solve(Eigen::VectorXd rhs, const std::vector<double>& u) const
    {
        const double cs = 1.0 / (g_.ds() * g_.ds()), ct = 1.0 / (g_.dtheta() * g_.dtheta());
        for (int b = 0; b < nj_; ++b) {
            rhs[id(0, b)] += cs * u[g_.index(0, b + 1)];
            rhs[id(ni_ - 1, b)] += cs * u[g_.index(g_.n_r - 1, b + 1)];
        }
        for (int a = 0; a < ni_; ++a) {
            rhs[id(a, 0)] += ct * u[g_.index(a + 1, 0)];
            rhs[id(a, nj_ - 1)] += ct * u[g_.index(a + 1, g_.n_theta - 1)];
        }
        return ldlt_.solve(rhs);
    }

private:
    PolarGrid g_;
    int ni_, nj_;
    double diag0_ = 0.0;
    Eigen::SparseMatrix<double> mat_;
    std::vector<double*> diag_ptr_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
};

struct GradientEval {
    double value = 0.0;  // r^{2-q} |∇_{s,θ} u|^q
    double self_slope = 0.0;  // |∂ value / ∂ u_ij|
};

GradientEval gradient_term(const PolarGrid& g, const std::vector<double>& u, int i, int j, double q, double r,
                           GradientScheme scheme)
{
    const double ds = g.ds(), dt = g.dtheta();
    const double c = u[g.index(i, j)];
    const double us = u[g.index(i + 1, j)], un = u[g.index(i - 1, j)];
    const double ue = u[g.index(i, j + 1)], uw = u[g.index(i, j - 1)];
    double gs, gt;
    const bool upwind = scheme == GradientScheme::upwind;
    if (!upwind) {
        gs = (us - un) / (2.0 * ds);
        gt = (ue - uw) / (2.0 * dt);
    } else {
        gs = std::max({un - c, us - c, 0.0}) / ds;
        gt = std::max({uw - c, ue - c, 0.0}) / dt;
    }
    const double n2 = gs * gs + gt * gt;
    GradientEval ev;
    if (n2 == 0.0) return ev;
    const double scale = std::pow(r, 2.0 - q);
    ev.value = scale * std::pow(n2, 0.5 * q);
    // Centered differences do not involve u_ij; upwind ones decrease with it.
    if (upwind) ev.self_slope = scale * q * std::pow(n2, 0.5 * q - 1.0) * (gs / ds + gt / dt);
    return ev;
}

struct IterationSetup {
    double p = 2.0, q = 1.5, M = 0.0;
    GradientScheme scheme = GradientScheme::centered;
    double tol = 1e-8;
    int max_iterations = 500;
    double slack = 1e-9;
    const std::vector<double>* lower = nullptr;  // sub
    const std::vector<double>* upper = nullptr;  // super
    bool throw_on_order = true;
};

// Monotone iteration (A + Λ) u_{n+1} = Λ u_n - r² u_n^p + M r^{2-q} G(u_n), Λ refreshed from the iterate.
SolveReport iterate(const PolarGrid& g, std::vector<double>& u, const IterationSetup& st, std::vector<Field>* trace,
                    const Field* proto)
{
    Stencil A(g);
    const int ni = g.n_r - 2, nj = g.n_theta - 2;
    std::vector<double> r2(g.n_r), rr(g.n_r);
    for (int i = 0; i < g.n_r; ++i) {
        rr[i] = g.r(i);
        r2[i] = rr[i] * rr[i];
    }
    std::vector<double> lam_cur(A.unknowns(), -1.0), lam_des(A.unknowns());
    std::vector<GradientEval> grad(A.unknowns());
    SolveReport rep;
    double umax = 0.0;
    for (double v : u) umax = std::max(umax, std::abs(v));
    const double floor = std::max(1e-300, 1e-12 * umax);

    auto fail = [&](const char* kind, int i, int j) {
        rep.first_violation = std::array<int, 2>{i, j};
        rep.violation_kind = kind;
        if (st.throw_on_order) {
            std::ostringstream os;
            os << "order violation (" << kind << ") at node (" << i << ", " << j << ") in iteration " << rep.iterations;
            throw OrderViolation(os.str(), rep);
        }
    };

    for (int n = 0; n < st.max_iterations; ++n) {
        bool refactor = lam_cur[0] < 0.0;
        for (int a = 0; a < ni; ++a)
            for (int b = 0; b < nj; ++b) {
                const int m = A.id(a, b);
                const int i = a + 1, j = b + 1;
                const double v = std::max(u[g.index(i, j)], 0.0);
                double lam = r2[i] * st.p * std::pow(v, st.p - 1.0);
                if (st.M != 0.0) {
                    grad[m] = gradient_term(g, u, i, j, st.q, rr[i], st.scheme);
                    lam += kSelfShift * st.M * grad[m].self_slope;
                } else {
                    grad[m] = {};
                }
                lam_des[m] = lam;
                if (lam > lam_cur[m] || (lam_cur[m] - lam) > 0.05 * (lam_cur[m] + 1.0)) refactor = true;
            }
        if (refactor) {
            lam_cur = lam_des;
            A.factor(lam_cur);
            ++rep.factorizations;
        }
        Eigen::VectorXd rhs(A.unknowns());
        for (int a = 0; a < ni; ++a)
            for (int b = 0; b < nj; ++b) {
                const int m = A.id(a, b);
                const int i = a + 1;
                const double v = u[g.index(i, b + 1)];
                rhs[m] = lam_cur[m] * v - r2[i] * std::pow(std::abs(v), st.p - 1.0) * v + st.M * grad[m].value;
            }
        const Eigen::VectorXd x = A.solve(rhs, u);
        ++rep.iterations;

        double gap = 0.0;
        for (int a = 0; a < ni; ++a)
            for (int b = 0; b < nj; ++b) {
                const int i = a + 1, j = b + 1;
                const std::size_t idx = g.index(i, j);
                const double old = u[idx], nw = x[A.id(a, b)];
                const double slack = st.slack * std::max(std::abs(old), floor);
                if (nw > old + slack && rep.ordered) {
                    rep.ordered = false;
                    fail("increase", i, j);
                }
                if (st.lower && nw < (*st.lower)[idx] - slack && rep.within_bounds) {
                    rep.within_bounds = false;
                    fail("below subsolution", i, j);
                }
                if (st.upper && nw > (*st.upper)[idx] + slack && rep.within_bounds) {
                    rep.within_bounds = false;
                    fail("above supersolution", i, j);
                }
                gap = std::max(gap, std::abs(nw - old) / std::max(std::abs(old), floor));
                u[idx] = nw;
            }
        rep.final_gap = gap;
        if (trace && proto) {
            Field f = *proto;
            f.values = u;
            trace->push_back(std::move(f));
        }
        if (gap <= st.tol) {
            rep.converged = true;
            return rep;
        }
    }
    return rep;
}

void check_compatible(const PolarGrid& g, const Field& f, const char* what)
{
    if (f.values.size() != g.size() || f.grid.n_r != g.n_r || f.grid.n_theta != g.n_theta)
        throw ParameterDomainError(std::string(what) + " does not match the grid");
}

Field make_field(const PolarGrid& g, const Params& params, double k, std::vector<double> values)
{
    Field f;
    f.grid = g;
    f.params = params;
    f.k_mass = k;
    f.values = std::move(values);
    return f;
}

} // namespace

std::vector<double> scaled_residual(const Field& f, GradientScheme scheme)
{
    const PolarGrid& g = f.grid;
    const double cs = 1.0 / (g.ds() * g.ds()), ct = 1.0 / (g.dtheta() * g.dtheta());
    const auto& u = f.values;
    const double p = f.params.p, q = f.params.q, M = f.params.M;
    std::vector<double> res(g.size(), 0.0);
    for (int i = 1; i + 1 < g.n_r; ++i) {
        const double r = g.r(i);
        for (int j = 1; j + 1 < g.n_theta; ++j) {
            const double c = u[g.index(i, j)];
            const double lap = cs * (2.0 * c - u[g.index(i + 1, j)] - u[g.index(i - 1, j)]) +
                               ct * (2.0 * c - u[g.index(i, j + 1)] - u[g.index(i, j - 1)]);
            double val = lap + r * r * std::pow(std::abs(c), p - 1.0) * c;
            if (M != 0.0) val -= M * gradient_term(g, u, i, j, q, r, scheme).value;
            res[g.index(i, j)] = val;
        }
    }
    return res;
}

Field harmonic_majorant(const PolarGrid& g, double k)
{
    validate(g);
    Stencil A(g);
    std::vector<double> u = boundary_data(g, k);
    A.factor(std::vector<double>(A.unknowns(), 0.0));
    const Eigen::VectorXd x = A.solve(Eigen::VectorXd::Zero(A.unknowns()), u);
    for (int a = 0; a + 2 < g.n_r; ++a)
        for (int b = 0; b + 2 < g.n_theta; ++b) u[g.index(a + 1, b + 1)] = x[A.id(a, b)];
    Params pr;
    return make_field(g, pr, k, std::move(u));
}

std::pair<Field, SolveReport> solve_absorption(const PolarGrid& g, double p, double k, double tol,
                                               const HalfplaneOptions& opt)
{
    validate(g);
    if (!(p > 1.0) || !(k >= 0.0) || !std::isfinite(k) || !(tol > 0.0))
        throw ParameterDomainError("solve_absorption needs p > 1, k >= 0, tol > 0");
    Field h = harmonic_majorant(g, k);
    h.params = Params{2, p, 1.5, 0.0};
    std::vector<double> u = h.values;
    const std::vector<double> zero(g.size(), 0.0);
    IterationSetup st;
    st.p = p;
    st.M = 0.0;
    st.tol = tol;
    st.max_iterations = opt.max_iterations;
    st.slack = opt.order_slack;
    st.lower = &zero;
    st.upper = &h.values;
    SolveReport rep = iterate(g, u, st, nullptr, nullptr);
    Field out = make_field(g, h.params, k, std::move(u));
    if (!rep.converged) throw HalfplaneNonconvergence("solve_absorption did not converge", rep);
    return {std::move(out), rep};
}

std::pair<Field, SolveReport> solve_full(const PolarGrid& g, const Params& params, double k, const Field& sub,
                                         const Field& super, double tol, const HalfplaneOptions& opt,
                                         std::vector<Field>* iterates)
{
    validate(g);
    validate(params);
    if (params.N != 2) throw ParameterDomainError("the half-plane solver is two-dimensional (N = 2)");
    if (!(k >= 0.0) || !(tol > 0.0)) throw ParameterDomainError("solve_full needs k >= 0, tol > 0");
    check_compatible(g, sub, "subsolution");
    check_compatible(g, super, "supersolution");

    const std::vector<double> bc = boundary_data(g, k);
    Field sup = super, sb = sub;
    sup.params = sb.params = params;
    sup.k_mass = sb.k_mass = k;
    for (int i = 0; i < g.n_r; ++i)
        for (int j = 0; j < g.n_theta; ++j)
            if (i == 0 || i == g.n_r - 1 || j == 0 || j == g.n_theta - 1) {
                sup.values[g.index(i, j)] = bc[g.index(i, j)];
                sb.values[g.index(i, j)] = bc[g.index(i, j)];
            }
    for (std::size_t m = 0; m < g.size(); ++m)
        if (sb.values[m] > sup.values[m] * (1.0 + 1e-12))
            throw ParameterDomainError("solve_full needs sub <= super nodewise");
    const auto rs = scaled_residual(sup, opt.scheme);
    const auto rb = scaled_residual(sb, opt.scheme);
    for (std::size_t m = 0; m < g.size(); ++m) {
        if (rs[m] < 0.0) throw ParameterDomainError("solve_full: super is not a discrete supersolution");
        const double scale = 1e-6 * (std::abs(sb.values[m]) / (g.ds() * g.ds()) + 1e-300);
        if (rb[m] > scale) throw ParameterDomainError("solve_full: sub is not a discrete subsolution");
    }

    std::vector<double> u = sup.values;
    IterationSetup st;
    st.p = params.p;
    st.q = params.q;
    st.M = params.M;
    st.scheme = opt.scheme;
    st.tol = tol;
    st.max_iterations = opt.max_iterations;
    st.slack = opt.order_slack;
    st.lower = &sb.values;
    st.upper = &sup.values;
    const Field proto = make_field(g, params, k, {});
    SolveReport rep = iterate(g, u, st, iterates, &proto);
    Field out = make_field(g, params, k, std::move(u));
    if (!rep.converged) throw HalfplaneNonconvergence("solve_full did not converge in the iteration budget", rep);
    return {std::move(out), rep};
}

namespace {

double envelope(const Params& pr, double r)
{
    const double a = alpha_of(pr.p);
    double env = std::pow(r, -a);
    if (pr.q < pr.p && pr.M > 0.0) env = std::max(env, std::pow(pr.M, 1.0 / (pr.p - pr.q)) * std::pow(r, -gamma_of(pr)));
    return env;
}

} // namespace

Barrier build_barriers(const PolarGrid& g, const Params& params, double k, const HalfplaneOptions& opt)
{
    validate(g);
    validate(params);
    if (params.N != 2) throw ParameterDomainError("the half-plane solver is two-dimensional (N = 2)");
    Barrier b;
    b.sub = solve_absorption(g, params.p, k, std::min(opt.tol, 1e-10), opt).first;
    b.sub.params = params;
    const std::vector<double> bc = boundary_data(g, k);
    double Ca = 1.0, c = 1.0;
    for (int step = 0; step <= 40; ++step) {
        std::vector<double> s = bc;
        std::vector<char> from_kernel(g.size(), 0);
        for (int i = 1; i + 1 < g.n_r; ++i) {
            const double r = g.r(i), env = envelope(params, r);
            for (int j = 1; j + 1 < g.n_theta; ++j) {
                const double a = k * poisson_kernel_2d(r, g.theta(j)) + Ca, e = c * env;
                s[g.index(i, j)] = std::min(a, e);
                from_kernel[g.index(i, j)] = a <= e;
            }
        }
        Field sup = make_field(g, params, k, std::move(s));
        bool grow_a = false, grow_c = false;
        for (std::size_t m = 0; m < g.size(); ++m)
            if (sup.values[m] < b.sub.values[m]) (from_kernel[m] ? grow_a : grow_c) = true;
        if (!grow_a && !grow_c) {
            const auto res = scaled_residual(sup, opt.scheme);
            for (std::size_t m = 0; m < g.size(); ++m)
                if (res[m] < 0.0) (from_kernel[m] ? grow_a : grow_c) = true;
        }
        if (!grow_a && !grow_c) {
            b.super = std::move(sup);
            b.C_a = Ca;
            b.c = c;
            b.growth_steps = step;
            return b;
        }
        if (grow_a) Ca *= 2.0;
        if (grow_c) c *= 2.0;
    }
    throw ConstructionFailure("no discrete supersolution after 40 growth steps for " + describe(params));
}

FundamentalSolution fundamental_solution_unchecked(const PolarGrid& g, const Params& params, double k,
                                                   const HalfplaneOptions& opt)
{
    FundamentalSolution fs;
    fs.barrier = build_barriers(g, params, k, opt);
    auto [f, rep] = solve_full(g, params, k, fs.barrier.sub, fs.barrier.super, opt.tol, opt);
    fs.field = std::move(f);
    fs.report = rep;
    return fs;
}

FundamentalSolution fundamental_solution(const PolarGrid& g, const Params& params, double k,
                                         const HalfplaneOptions& opt)
{
    if (!classify(params).has(Regime::weak_singularity_solvable))
        throw ParameterDomainError(describe(params) + ": fundamental_solution needs the weak-singularity regime");
    if (!(k > 0.0)) throw ParameterDomainError("fundamental_solution needs k > 0");
    return fundamental_solution_unchecked(g, params, k, opt);
}

namespace {

double annulus_gap(const Field& a, const Field& b, double r_lo, double r_hi)
{
    const PolarGrid& g = a.grid;
    double gap = 0.0;
    for (int i = 0; i < g.n_r; ++i) {
        const double r = g.r(i);
        if (r < r_lo * (1 - 1e-12) || r > r_hi * (1 + 1e-12)) continue;
        for (int j = 1; j + 1 < g.n_theta; ++j) {
            const double vb = b.at(i, j);
            if (vb > 0.0) gap = std::max(gap, std::abs(vb - a.at(i, j)) / vb);
        }
    }
    return gap;
}

} // namespace

StrongLimit strong_limit(const PolarGrid& g, const Params& params, const std::vector<double>& k_list,
                         const HalfplaneOptions& opt)
{
    if (!classify(params).has(Regime::weak_singularity_solvable))
        throw ParameterDomainError(describe(params) + ": strong_limit needs the weak-singularity regime");
    if (k_list.size() < 4) throw ParameterDomainError("strong_limit needs at least 4 masses");
    for (std::size_t m = 1; m < k_list.size(); ++m)
        if (!(k_list[m] > k_list[m - 1])) throw ParameterDomainError("strong_limit needs increasing masses");
    if (!(k_list.front() > 0.0) || k_list.back() / k_list.front() < 100.0 * (1 - 1e-12))
        throw ParameterDomainError("strong_limit needs positive masses spanning at least two decades");

    StrongLimit out;
    out.k_list = k_list;
    Field prev;
    for (std::size_t m = 0; m < k_list.size(); ++m) {
        auto fs = fundamental_solution(g, params, k_list[m], opt);
        out.reports.push_back(fs.report);
        if (m > 0) out.saturation_trace.push_back(annulus_gap(prev, fs.field, 10.0 * g.r_min, 100.0 * g.r_min));
        prev = std::move(fs.field);
    }
    out.field = std::move(prev);
    out.saturation = out.saturation_trace.back();
    return out;
}

std::vector<double> angular_trace(const Field& f, double r)
{
    const PolarGrid& g = f.grid;
    const double s = std::log(r / g.r_min) / g.ds();
    int i0 = std::clamp(int(std::floor(s)), 0, g.n_r - 2);
    const double t = s - i0;
    std::vector<double> out(g.n_theta);
    for (int j = 0; j < g.n_theta; ++j) {
        const double a = f.at(i0, j), b = f.at(i0 + 1, j);
        if (t == 0.0)
            out[j] = a;
        else if (a > 0.0 && b > 0.0)
            out[j] = std::exp((1.0 - t) * std::log(a) + t * std::log(b));
        else
            out[j] = (1.0 - t) * a + t * b;
    }
    return out;
}

std::vector<double> midline_trace(const Field& f)
{
    const PolarGrid& g = f.grid;
    std::vector<double> out(g.n_r);
    const int n = g.n_theta;
    for (int i = 0; i < g.n_r; ++i) {
        if (n % 2 == 1)
            out[i] = f.at(i, n / 2);
        else
            out[i] = 0.5 * (f.at(i, n / 2 - 1) + f.at(i, n / 2));
    }
    return out;
}

double eikonal_subsolution_margin(const PolarGrid& g, const Params& pr, double m)
{
    const int N = pr.N;
    const double p = pr.p, q = pr.q, M = pr.M;
    const double gm = gamma_of(pr);
    const double e = (q * (p + 1.0) - 2.0 * p) / (p - q);
    const double lin = gm * gm - (N - 2) * gm + 1.0 - N;
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < g.n_r; ++i) {
        const double re = std::pow(g.r(i), e);
        for (int j = 1; j + 1 < g.n_theta; ++j) {
            const double phi = std::sin(g.theta(j)), dphi = std::cos(g.theta(j));
            const double val = -m * re * lin * phi +
                               std::pow(m, q) * (std::pow(m, p - q) * std::pow(phi, p) -
                                                 M * std::pow(gm * gm * phi * phi + dphi * dphi, 0.5 * q));
            worst = std::max(worst, val);
        }
    }
    return worst;
}

Diagnostics diagnostics(const Field& f)
{
    const PolarGrid& g = f.grid;
    const Params& pr = f.params;
    Diagnostics d;
    const double rr = 2.0 * g.r_min;
    if (f.k_mass > 0.0 && rr <= g.r_max) {
        const auto tr = angular_trace(f, rr);
        for (int j = 1; j + 1 < g.n_theta; ++j) {
            d.ring_theta.push_back(g.theta(j));
            d.near_ring_ratio.push_back(tr[j] / (f.k_mass * poisson_kernel_2d(rr, g.theta(j))));
        }
    }
    if (100.0 * g.r_min <= g.r_max * (1 + 1e-12)) {
        std::vector<double> rs(g.n_r);
        for (int i = 0; i < g.n_r; ++i) rs[i] = g.r(i);
        try {
            d.radial_slope = fit_loglog_slope(rs, midline_trace(f), 10.0 * g.r_min * (1 - 1e-12),
                                              100.0 * g.r_min * (1 + 1e-12));
        } catch (const FitError&) {
        }
    }
    const double a = alpha_of(pr.p);
    for (int j = 0; j < g.n_theta; ++j) d.profile_theta.push_back(g.theta(j));
    for (double mult : {10.0, 30.0, 100.0}) {
        const double r = mult * g.r_min;
        if (r > g.r_max) continue;
        auto tr = angular_trace(f, r);
        for (double& v : tr) v *= std::pow(r, a);
        d.profile_radii.push_back(r);
        d.rescaled_profiles.push_back(std::move(tr));
    }
    if (pr.q < pr.p) {
        double sup = 0.0;
        for (int i = 0; i < g.n_r; ++i) {
            const double env = envelope(pr, g.r(i));
            for (int j = 0; j < g.n_theta; ++j) sup = std::max(sup, f.at(i, j) / env);
        }
        d.ko_ratio = sup;
    }
    const double qs = q_star_of(pr.p);
    if (pr.N == 2 && pr.M > 0.0 && pr.q > qs && pr.q < std::min(2.0, pr.p)) {
        for (double m : {0.01, 0.1, 1.0}) {
            d.eikonal_m.push_back(m);
            d.eikonal_margin.push_back(eikonal_subsolution_margin(g, pr, m));
        }
    }
    return d;
}

RemovabilityTrend removability_probe(const PolarGrid& base, const std::vector<double>& r_min_list,
                                     const Params& params, double k, const HalfplaneOptions& opt)
{
    validate(base);
    if (!(k >= 0.0)) throw ParameterDomainError("removability_probe needs k >= 0");
    for (std::size_t m = 1; m < r_min_list.size(); ++m)
        if (!(r_min_list[m] < r_min_list[m - 1])) throw ParameterDomainError("removability_probe needs decreasing r_min");
    const double ds = base.ds();
    RemovabilityTrend out;
    for (double rm : r_min_list) {
        if (!(rm > 0.0) || !(rm < 0.1)) throw ParameterDomainError("removability_probe needs 0 < r_min < 0.1");
        PolarGrid g = base;
        g.r_min = rm;
        g.n_r = int(std::lround(std::log(g.r_max / rm) / ds)) + 1;
        double sup = 0.0;
        SolveReport rep;
        if (k > 0.0) {
            auto fs = fundamental_solution_unchecked(g, params, k, opt);
            rep = fs.report;
            for (int i = 0; i < g.n_r; ++i) {
                const double r = g.r(i);
                if (r < 0.1 || r > 0.2) continue;
                for (int j = 0; j < g.n_theta; ++j) sup = std::max(sup, fs.field.at(i, j));
            }
        } else {
            rep.converged = true;
        }
        out.r_min.push_back(rm);
        out.annulus_sup.push_back(sup);
        out.reports.push_back(rep);
    }
    const std::size_t n = out.annulus_sup.size();
    out.monotone_decreasing = n >= 2;
    for (std::size_t m = 1; m < n; ++m) out.monotone_decreasing = out.monotone_decreasing && out.annulus_sup[m] < out.annulus_sup[m - 1];
    if (n >= 2 && out.annulus_sup[n - 1] > 0.0)
        out.last_relative_change = std::abs(out.annulus_sup[n - 1] - out.annulus_sup[n - 2]) / out.annulus_sup[n - 1];
    return out;
}

} // namespace singlab
