#pragma once

// Scalar per-point kernel shared by the single-point API and the scalar batch
// variant. The AVX2 batch variant mirrors this operation order exactly; keep
// the two in sync.

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace heis::detail {

struct Scaled {
    double s = 0.0;      // power of two, 0 at the origin
    double inv_s = 0.0;
};

/// s = 2^floor(log2 m) with m = max(|x|_inf, sqrt|t|). The exponent is
/// clamped at the normal range so 1/s stays finite for subnormal m.
inline Scaled pick_scale(double m) {
    Scaled sc;
    if (!(m > 0.0)) return sc;
    const int e = std::max(std::ilogb(m), -1022);
    sc.s = std::ldexp(1.0, e);
    sc.inv_s = std::ldexp(1.0, -e);
    return sc;
}

struct Core {
    double A, B, t2, r, W, K, q, sK, sBr, N;  // all in the rescaled frame
};

/// y: rescaled horizontal coordinates read as y(j); tt: rescaled t.
template <class Get>
inline Core core(Get y, int n, double tt) {
    Core c;
    const std::size_t nn = static_cast<std::size_t>(n);
    const double y0 = y(0);
    const double yn = y(nn);
    const double P = y0 * y0 + yn * yn;
    double S = 0.0;
    for (std::size_t j = 1; j < nn; ++j) {
        const double v = y(j);
        S = S + v * v;
    }
    for (std::size_t j = nn + 1; j < 2 * nn; ++j) {
        const double v = y(j);
        S = S + v * v;
    }
    c.A = 0.5 * (P + S);
    c.B = 0.25 * P + 0.5 * S;
    c.t2 = tt * tt;
    c.r = std::sqrt(c.B * c.B + c.t2);
    c.W = c.A * c.B + c.t2 + c.A * c.r;
    c.K = c.W / (c.r * c.r);
    c.q = std::pow(c.K, 1.0 / (4.0 * n));
    c.sK = std::sqrt(c.K);
    c.sBr = std::sqrt(c.B + c.r);
    c.N = ((c.r * c.sK) / c.q) / c.sBr;
    return c;
}

struct Partials {
    double F, T1, T2, T3;
};

inline Partials partials(const Core& c, int n) {
    const double dn = static_cast<double>(n);
    const double A = c.A, B = c.B, t2 = c.t2, r = c.r;
    const double Br = B + r;
    Partials d;
    d.F = 1.0 / (((((4.0 * dn) * r) * r) * r) * c.sBr * c.sK * c.q);
    d.T1 = 0.5 * B * B * A + (B - 0.5 * A) * t2 + 0.5 * r * A * B + (dn - 1.0) * r * r * Br +
           dn * B * r * Br;
    d.T2 = A * B * r + A * B * B + (2.0 * B - A) * t2 + (2.0 * dn - 1.0) * B * r * Br - t2 * r;
    d.T3 = 2.0 * B * (A - B) + A * r +
           (2.0 * dn) * (2.0 * B * B * B + 2.0 * t2 * B + 2.0 * B * B * r + t2 * r) / Br;
    return d;
}

struct PointOut {
    double N;
    double dN_dt;
    double grad_norm_sq;
    double x_dot_grad;
    double x_norm_sq;
};

/// Full evaluation at one point. x(j) reads x_{j+1}; put_dx(j, v) stores
/// d N / d x_{j+1}. At the origin N = 0 and every derivative output is NaN.
template <class GetX, class PutDx>
inline PointOut eval_full(GetX x, double t, int n, PutDx put_dx) {
    const std::size_t nn = static_cast<std::size_t>(n);
    double m = 0.0;
    for (std::size_t j = 0; j < 2 * nn; ++j) m = std::fmax(m, std::fabs(x(j)));
    m = std::fmax(m, std::sqrt(std::fabs(t)));
    const Scaled sc = pick_scale(m);
    PointOut o{};
    if (sc.s == 0.0) {
        const double nan = std::nan("");
        for (std::size_t j = 0; j < 2 * nn; ++j) put_dx(j, nan);
        o.N = 0.0;
        o.dN_dt = o.grad_norm_sq = o.x_dot_grad = nan;
        o.x_norm_sq = 0.0;
        return o;
    }
    const double inv = sc.inv_s;
    auto y = [&](std::size_t j) { return x(j) * inv; };
    const double tt = (t * inv) * inv;
    const Core c = core(y, n, tt);
    const Partials d = partials(c, n);
    const double dtp = (tt * d.F) * d.T3;

    double gns = 0.0, xdg = 0.0, ns = 0.0;
    for (std::size_t j = 0; j < 2 * nn; ++j) {
        const double yj = y(j);
        const double T = (j == 0 || j == nn) ? d.T1 : d.T2;
        const double dj = (yj * d.F) * T;
        double cj;
        if (j == 0) cj = -0.5 * y(nn);
        else if (j == nn) cj = 0.5 * y(0);
        else if (j < nn) cj = -y(j + nn);
        else cj = y(j - nn);
        const double hj = dj + cj * dtp;
        gns = gns + hj * hj;
        xdg = xdg + yj * dj;
        ns = ns + yj * yj;
        put_dx(j, dj);
    }
    o.N = c.N * sc.s;
    o.dN_dt = dtp * inv;
    o.grad_norm_sq = gns;
    o.x_dot_grad = xdg * sc.s;
    o.x_norm_sq = (ns * sc.s) * sc.s;
    return o;
}

}  // namespace heis::detail
