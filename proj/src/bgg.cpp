#include "heis/bgg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "heis/errors.hpp"
#include "heis/norm.hpp"
#include "heis/parallel.hpp"
#include "heis/sampling.hpp"

namespace heis {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// x / sinh(x), even, 1 at 0.
double x_csch(double x) {
    const double a = std::abs(x);
    if (a == 0.0) return 1.0;
    if (a < 20.0) return a / std::sinh(a);
    // log sinh(a) = a - log 2 + log1p(-e^{-2a})
    return std::exp(std::log(a) - a + std::log(2.0) - std::log1p(-std::exp(-2.0 * a)));
}

// x coth(x), even, 1 at 0.
double x_coth(double x) {
    if (x == 0.0) return 1.0;
    return x / std::tanh(x);
}

cplx ipow(cplx z, int k) {
    cplx r(1.0, 0.0);
    for (int i = 0; i < k; ++i) r *= z;
    return r;
}

struct AbtScale {
    double A, B, t;
};

void require_positive_A(double A, const char* who) {
    if (!(A > 0.0)) throw SingularPointError(std::string(who) + ": A must be > 0 (x = 0 diverges)");
}

double r_of(double B, double t) { return std::sqrt(B * B + t * t); }
double w_of(double A, double B, double t) {
    const double r = r_of(B, t);
    return A * B + t * t + A * r;
}

// u^{2n-2} / D^n as (u^2/D)^{n-1} / D to keep intermediate magnitudes O(1).
cplx j_integrand(cplx u2, cplx D, int n) { return ipow(u2 / D, n - 1) / D; }

}  // namespace

double v_of_tau(double tau, int n) {
    if (n < 2) throw ConfigError("v_of_tau: n must be >= 2");
    const double half = x_csch(0.5 * tau);
    const double full = x_csch(tau);
    if (std::abs(tau) < 20.0) return half * std::pow(full, n - 1);
    return std::exp(std::log(half) + (n - 1) * std::log(full));
}

std::complex<double> f_phase(double A, double B, double t, double tau) {
    const double re = 2.0 * x_coth(0.5 * tau) * (A - B) + x_coth(tau) * (2.0 * B - A);
    return {re, -t * tau};
}

double i1_closed(double A, double B, double t) {
    require_positive_A(A, "i1_closed");
    return kPi / (4.0 * A * std::sqrt(w_of(A, B, t)));
}

double im_alpha_sq(double A, double B, double t) {
    require_positive_A(A, "im_alpha_sq");
    return w_of(A, B, t) / (A * A);
}

double i_closed(double A, double B, double t) {
    require_positive_A(A, "i_closed");
    const double r = r_of(B, t);
    if (!(r > 0.0)) throw SingularPointError("i_closed: B = t = 0");
    const double W = w_of(A, B, t);
    return kPi * (B + r) * (B + r) / (8.0 * r * W * std::sqrt(W));
}

double i1_quad(double A, double B, double t, const QuadratureConfig& cfg) {
    require_positive_A(A, "i1_quad");
    const double t2 = t * t;
    auto f = [=](double u) {
        const double u2 = u * u;
        const double a = A * u2 + 2.0 * B;
        return u2 / (a * a + 4.0 * t2 * (1.0 + u2));
    };
    auto tail = [=](double v) {
        const double v2 = v * v;
        const double a = A + 2.0 * B * v2;
        return 1.0 / (a * a + 4.0 * t2 * v2 * (1.0 + v2));
    };
    return integrate_half_line(f, tail, cfg).value;
}

double i2_quad(double A, double B, double t, const QuadratureConfig& cfg) {
    require_positive_A(A, "i2_quad");
    const double t2 = t * t;
    auto f = [=](double u) {
        const double u2 = u * u;
        const double a = A * u2 + 2.0 * B;
        const double d = a * a + 4.0 * t2 * (1.0 + u2);
        return 8.0 * t2 * (1.0 + u2) * u2 / (d * d);
    };
    auto tail = [=](double v) {
        const double v2 = v * v;
        const double a = A + 2.0 * B * v2;
        const double d = a * a + 4.0 * t2 * v2 * (1.0 + v2);
        return 8.0 * t2 * (1.0 + v2) * v2 / (d * d);
    };
    return integrate_half_line(f, tail, cfg).value;
}

double j_integral(double A, double B, double t, int n, const QuadratureConfig& cfg, Contour contour) {
    require_positive_A(A, "j_integral");
    if (n < 2) throw ConfigError("j_integral: n must be >= 2");
    if (contour == Contour::Auto) {
        const bool real_first = std::abs(t) <= 0.3 * A;
        try {
            return j_integral(A, B, t, n, cfg, real_first ? Contour::RealAxis : Contour::Shifted);
        } catch (const QuadratureError&) {
            return j_integral(A, B, t, n, cfg, real_first ? Contour::Shifted : Contour::RealAxis);
        }
    }
    const cplx I(0.0, 1.0);
    if (contour == Contour::RealAxis) {
        auto f = [=](double u) {
            const double u2 = u * u;
            const cplx D = A * u2 + 2.0 * B - 2.0 * I * t * std::sqrt(1.0 + u2);
            return j_integrand(cplx(u2, 0.0), D, n).real();
        };
        auto tail = [=](double v) {
            const double v2 = v * v;
            const cplx D = A + 2.0 * B * v2 - 2.0 * I * t * v * std::sqrt(1.0 + v2);
            return (1.0 / ipow(D, n)).real();
        };
        return integrate_half_line(f, tail, cfg).value;
    }
    // Shifted path: with w = (s + i)/2 and e = exp(-2w), |e| <= 1,
    //   csch w = 2 exp(-w) / (1 - e),  coth w = (1 + e) / (1 - e),
    // coth w = sqrt(1 + u^2) on the principal branch along the whole path,
    // and -du/ds = coth(w) csch(w) / 2.
    const double at = std::abs(t);
    auto f = [=](double s) {
        const cplx w(0.5 * s, 0.5);
        const cplx e = std::exp(-2.0 * w);
        const cplx csch = 2.0 * std::exp(-w) / (1.0 - e);
        const cplx coth = (1.0 + e) / (1.0 - e);
        const cplx u2 = csch * csch;
        const cplx D = A * u2 + 2.0 * B - 2.0 * I * at * coth;
        return (j_integrand(u2, D, n) * (0.5 * coth * csch)).real();
    };
    return integrate_half_line(f, RealFunction{}, cfg).value;
}

double i_quad(double A, double B, double t, const QuadratureConfig& cfg, Contour contour) {
    return j_integral(A, B, t, 2, cfg, contour);
}

double gamma_int(int n) {
    if (n < 1 || n > 21) throw ConfigError("gamma_int: n out of range");
    double g = 1.0;
    for (int k = 2; k < n; ++k) g *= k;
    return g;
}

double fundamental_constant(int n) {
    if (n < 2) throw ConfigError("fundamental_constant: n must be >= 2");
    double prod = 1.0;
    for (int k = 3; k <= n; ++k) prod *= (2.0 * k - 3.0);
    return prod / (2.0 * std::pow(kPi, n - 1) * std::ldexp(1.0, 2 * n));
}

double u_quad(const Point& p, const GroupParams& params, const QuadratureConfig& cfg, Contour contour) {
    const ABPair ab = ab_quantities(p, params);
    if (!(ab.A > 0.0)) throw SingularPointError("u_quad: x = 0 (integral diverges)");
    const int n = params.n();
    return gamma_int(n) / std::pow(2.0 * kPi, n) * j_integral(ab.A, ab.B, p.t, n, cfg, contour);
}

double u_closed(const Point& p, const GroupParams& params) {
    require_dimension(p, params);
    double m = std::sqrt(std::fabs(p.t));
    for (double v : p.x) m = std::fmax(m, std::fabs(v));
    if (!(m > 0.0)) throw SingularPointError("u_closed: origin");
    // Evaluate on delta_{2^-e} p; u is homogeneous of degree -2n.
    const int e = std::max(std::ilogb(m), -1022);
    const Point q = dilate(std::ldexp(1.0, -e), p);
    const ABPair ab = ab_quantities(q, params);
    const double r = r_of(ab.B, q.t);
    const double W = w_of(ab.A, ab.B, q.t);
    const int n = params.n();
    const double val = std::pow((ab.B + r) / W, n) * std::sqrt(W) / r;
    return std::ldexp(fundamental_constant(n) * val, -2 * n * e);
}

BggEval bgg_evaluate(const Point& p, const GroupParams& params, const QuadratureConfig& cfg) {
    const ABPair ab = ab_quantities(p, params);
    BggEval e;
    e.u_quad = u_quad(p, params, cfg);
    e.u_closed = u_closed(p, params);
    e.I1 = i1_quad(ab.A, ab.B, p.t, cfg);
    e.I2 = i2_quad(ab.A, ab.B, p.t, cfg);
    e.I = i_quad(ab.A, ab.B, p.t, cfg);
    e.im_alpha_sq = im_alpha_sq(ab.A, ab.B, p.t);
    return e;
}

BggComparison bgg_compare(const GroupParams& params, std::size_t points, std::uint64_t seed,
                          const QuadratureConfig& cfg, unsigned threads) {
    auto rng = make_rng(seed, 0);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> radius(0.1, 5.0);
    std::uniform_real_distribution<double> tdist(-25.0, 25.0);
    std::vector<Point> pts(points, Point::zero(params));
    for (Point& p : pts) {
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (double& v : p.x) {
                v = g(rng);
                norm2 += v * v;
            }
        } while (norm2 == 0.0);
        const double scale = radius(rng) / std::sqrt(norm2);
        for (double& v : p.x) v *= scale;
        p.t = tdist(rng);
    }
    std::vector<double> err(points, 0.0);
    parallel_for_chunks(points, 8, threads, [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const double uc = u_closed(pts[i], params);
            const double uq = u_quad(pts[i], params, cfg);
            err[i] = std::abs(uq - uc) / std::abs(uc);
        }
    });
    BggComparison out;
    out.n = params.n();
    out.points = points;
    double sum = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < points; ++i) {
        sum += err[i];
        if (err[i] > err[worst]) worst = i;
    }
    if (points > 0) {
        out.max_rel_err = err[worst];
        out.mean_rel_err = sum / static_cast<double>(points);
        out.worst_point = pts[worst];
    }
    return out;
}

}  // namespace heis
