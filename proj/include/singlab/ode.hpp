#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace singlab::ode {

template <std::size_t D>
using Vec = std::array<double, D>;

struct Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h0 = 0.0;  // 0 selects an automatic first step
    double hmax = 0.0;  // 0 means |t1 - t0|
    long max_steps = 1000000;
};

enum class Status { reached, stopped, step_underflow, too_many_steps, nonfinite };

struct Stats {
    long accepted = 0;
    long rejected = 0;
    double last_h = 0.0;  // size of the last accepted step, reusable as the next h0
};

// Dormand-Prince 5(4) with FSAL and elementary step control.
// rhs(t, y, dy) fills dy; observer(t, y, dy) runs after every accepted step
// (and once at t0) and returns false to stop.  Integrates in either direction.
template <std::size_t D, class Rhs, class Observer>
Status dopri5(Rhs&& rhs, double t0, Vec<D> y, double t1, const Options& opt, Observer&& observer, Stats* stats = nullptr)
{
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;

    const double span = t1 - t0;
    if (span == 0.0) {
        Vec<D> k;
        rhs(t0, y, k);
        observer(t0, y, k);
        return Status::reached;
    }
    const double dir = span > 0 ? 1.0 : -1.0;
    const double hmax = opt.hmax > 0 ? opt.hmax : std::abs(span);

    Vec<D> k1, k2, k3, k4, k5, k6, k7, yt, yn;
    rhs(t0, y, k1);
    for (double v : k1)
        if (!std::isfinite(v)) return Status::nonfinite;
    if (!observer(t0, y, k1)) return Status::stopped;

    double h = opt.h0;
    if (h <= 0.0) {
        double d0 = 0, d1 = 0;
        for (std::size_t i = 0; i < D; ++i) {
            const double sc = opt.atol + opt.rtol * std::abs(y[i]);
            d0 += (y[i] / sc) * (y[i] / sc);
            d1 += (k1[i] / sc) * (k1[i] / sc);
        }
        d0 = std::sqrt(d0 / D);
        d1 = std::sqrt(d1 / D);
        h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h = std::min(h, hmax);
    }

    double t = t0;
    long steps = 0;
    while (true) {
        if (++steps > opt.max_steps) return Status::too_many_steps;
        const double remaining = std::abs(t1 - t);
        const double h_unclipped = h;
        bool last = false;
        if (h >= remaining) {
            h = remaining;
            last = true;
        }
        const double hs = dir * h;
        for (std::size_t i = 0; i < D; ++i) yt[i] = y[i] + hs * a21 * k1[i];
        rhs(t + c2 * hs, yt, k2);
        for (std::size_t i = 0; i < D; ++i) yt[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * hs, yt, k3);
        for (std::size_t i = 0; i < D; ++i) yt[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * hs, yt, k4);
        for (std::size_t i = 0; i < D; ++i)
            yt[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * hs, yt, k5);
        for (std::size_t i = 0; i < D; ++i)
            yt[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        const double tn = last ? t1 : t + hs;
        rhs(t + hs, yt, k6);
        for (std::size_t i = 0; i < D; ++i)
            yn[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(tn, yn, k7);

        double err = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < D; ++i) {
            const double ei = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(yn[i]));
            err += (ei / sc) * (ei / sc);
            finite = finite && std::isfinite(yn[i]) && std::isfinite(k7[i]);
        }
        err = std::sqrt(err / D);
        if (!finite) err = 1e10;

        if (err <= 1.0) {
            t = tn;
            y = yn;
            k1 = k7;
            const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            if (stats) {
                ++stats->accepted;
                stats->last_h = last ? std::max(h_unclipped, std::min(h * fac, hmax)) : std::min(h * fac, hmax);
            }
            if (!observer(t, y, k1)) return Status::stopped;
            if (last) return Status::reached;
            h = std::min(h * fac, hmax);
        } else {
            if (stats) ++stats->rejected;
            h *= std::max(0.2, 0.9 * std::pow(err, -0.25));
        }
        if (h < 1e-14 * std::max(1.0, std::abs(t))) return Status::step_underflow;
    }
}

// Cubic Hermite interpolation on [t0, t1] for one component.
inline double hermite(double t0, double y0, double d0, double t1, double y1, double d1, double t)
{
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
}

} // namespace singlab::ode
