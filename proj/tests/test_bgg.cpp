#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "heis/bgg.hpp"
#include "heis/errors.hpp"
#include "heis/norm.hpp"
#include "heis/sampling.hpp"

using namespace heis;

namespace {

using cld = std::complex<long double>;

// Durand-Kerner on a monic quartic, long double.
std::array<cld, 4> quartic_roots(const std::array<long double, 5>& c) {
    auto p = [&](cld z) { return (((z + c[1]) * z + c[2]) * z + c[3]) * z + c[4]; };
    std::array<cld, 4> z;
    const cld seed(0.4L, 0.9L);
    z[0] = 1;
    for (int i = 1; i < 4; ++i) z[i] = z[i - 1] * seed;
    const long double scale = std::max(1.0L, std::sqrt(std::sqrt(std::abs(c[4]))) + std::abs(c[2]));
    for (auto& v : z) v *= scale;
    for (int it = 0; it < 2000; ++it) {
        long double change = 0;
        for (int i = 0; i < 4; ++i) {
            cld den = 1;
            for (int j = 0; j < 4; ++j)
                if (j != i) den *= z[i] - z[j];
            const cld d = p(z[i]) / den;
            z[i] -= d;
            change = std::max(change, std::abs(d) / (1 + std::abs(z[i])));
        }
        if (change < 1e-19L) break;
    }
    return z;
}

// Upper-half-plane roots of A^2 z^4 + (4AB + 4t^2) z^2 + 4B^2 + 4t^2.
std::array<long double, 2> upper_imag_parts(double A, double B, double t) {
    const long double a2 = (long double)A * A;
    const auto z = quartic_roots({1.0L, 0.0L, (4.0L * A * B + 4.0L * t * t) / a2, 0.0L,
                                  (4.0L * B * B + 4.0L * t * t) / a2});
    std::array<long double, 2> im{};
    int k = 0;
    for (const auto& r : z)
        if (r.imag() > 0 && k < 2) im[k++] = r.imag();
    EXPECT_EQ(k, 2);
    return im;
}

struct Abt {
    double A, B, t;
};

Abt random_abt(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.05, 5.0), ratio(0.0, 1.0), tt(-10.0, 10.0);
    const double B = u(rng);
    const double A = B * (1.0 + ratio(rng));  // B <= A <= 2B
    return {A, B, tt(rng)};
}

// d/dt I1 by a 4th-order central difference.
double di1_dt(double A, double B, double t) {
    const double h = 1e-3 * (1 + std::abs(t));
    return (-i1_closed(A, B, t + 2 * h) + 8 * i1_closed(A, B, t + h) - 8 * i1_closed(A, B, t - h) +
            i1_closed(A, B, t - 2 * h)) /
           (12 * h);
}

}  // namespace

TEST(BggPieces, VOfTau) {
    for (int n : {2, 5}) {
        EXPECT_EQ(v_of_tau(0.0, n), 1.0);
        const double tau = 1.3;
        const double expect = (tau / 2) / std::sinh(tau / 2) * std::pow(tau / std::sinh(tau), n - 1);
        EXPECT_NEAR(v_of_tau(tau, n), expect, 1e-15);
        EXPECT_EQ(v_of_tau(tau, n), v_of_tau(-tau, n));
    }
    // sinh overflows long before the product underflows
    const double tau = 40.0;
    const double v = v_of_tau(tau, 6);
    EXPECT_GT(v, 0.0);
    const double expect = std::log(tau / 2) - tau / 2 + std::log(2.0) + 5 * (std::log(tau) - tau + std::log(2.0));
    EXPECT_NEAR(std::log(v), expect, 1e-12 * std::abs(expect));
    EXPECT_EQ(v_of_tau(1500.0, 6), 0.0);
    EXPECT_THROW(v_of_tau(1.0, 1), ConfigError);
}

TEST(BggPieces, FPhase) {
    EXPECT_NEAR(f_phase(1.5, 1.0, 2.0, 0.0).real(), 1.5, 1e-15);
    EXPECT_EQ(f_phase(1.5, 1.0, 2.0, 0.0).imag(), 0.0);
    const double A = 1.5, B = 1.0, t = 2.0, tau = 0.7;
    const auto f = f_phase(A, B, t, tau);
    EXPECT_NEAR(f.real(), tau / std::tanh(tau / 2) * (A - B) + tau / std::tanh(tau) * (2 * B - A), 1e-14);
    EXPECT_NEAR(f.imag(), -t * tau, 1e-15);
}

TEST(BggPieces, Constants) {
    EXPECT_EQ(gamma_int(1), 1.0);
    EXPECT_EQ(gamma_int(6), 120.0);
    EXPECT_THROW(gamma_int(0), ConfigError);
    const double pi = std::numbers::pi;
    EXPECT_NEAR(fundamental_constant(2), 1.0 / (2 * pi * 16), 1e-18);
    EXPECT_NEAR(fundamental_constant(3), 3.0 / (2 * pi * pi * 64), 1e-18);
    EXPECT_NEAR(fundamental_constant(6), 3.0 * 5 * 7 * 9 / (2 * std::pow(pi, 5) * 4096), 1e-17);
}

TEST(BggPieces, ImAlphaSqMatchesQuarticRoots) {
    auto rng = make_rng(11, 0);
    for (int i = 0; i < 100; ++i) {
        const Abt p = random_abt(rng);
        const auto im = upper_imag_parts(p.A, p.B, p.t);
        const long double mean = 0.5L * (im[0] + im[1]);
        const double oracle = static_cast<double>(mean * mean);
        EXPECT_NEAR(im_alpha_sq(p.A, p.B, p.t), oracle, 1e-10 * oracle);
        // residue sum at the two upper roots
        const double res = static_cast<double>(std::numbers::pi_v<long double> /
                                               (2.0L * p.A * p.A * (im[0] + im[1])));
        EXPECT_NEAR(i1_closed(p.A, p.B, p.t), res, 1e-12 * res);
    }
}

TEST(BggPieces, ClosedFormsAgreeWithQuadrature) {
    QuadratureConfig cfg;
    auto rng = make_rng(12, 0);
    for (int i = 0; i < 100; ++i) {
        const Abt p = random_abt(rng);
        const double i1 = i1_quad(p.A, p.B, p.t, cfg);
        EXPECT_NEAR(i1, i1_closed(p.A, p.B, p.t), 1e-9 * i1);
        const double i2 = i2_quad(p.A, p.B, p.t, cfg);
        const double I = i_quad(p.A, p.B, p.t, cfg);
        EXPECT_NEAR(I, i1 - i2, 1e-6 * std::abs(i1));
        EXPECT_NEAR(i2, -p.t * di1_dt(p.A, p.B, p.t), 1e-6 * std::abs(i1));
        EXPECT_NEAR(I, i_closed(p.A, p.B, p.t), 1e-9 * std::abs(I));
    }
}

TEST(BggPieces, SingularInputs) {
    QuadratureConfig cfg;
    EXPECT_THROW(i1_closed(0.0, 0.0, 1.0), SingularPointError);
    EXPECT_THROW(i1_quad(0.0, 0.0, 1.0, cfg), SingularPointError);
    EXPECT_THROW(j_integral(0.0, 0.0, 1.0, 3, cfg), SingularPointError);
    EXPECT_THROW(j_integral(1.0, 0.5, 1.0, 1, cfg), ConfigError);
}

TEST(BggPieces, ContoursAgreeWhereWellConditioned) {
    QuadratureConfig cfg;
    auto rng = make_rng(13, 0);
    for (int n : {2, 3, 6}) {
        for (int i = 0; i < 20; ++i) {
            // the real-axis route loses digits as |t| approaches A
            Abt p = random_abt(rng);
            p.t = 0.5 * p.A * std::tanh(p.t);
            const double a = j_integral(p.A, p.B, p.t, n, cfg, Contour::Shifted);
            const double b = j_integral(p.A, p.B, p.t, n, cfg, Contour::RealAxis);
            EXPECT_NEAR(a, b, 1e-10 * std::abs(a));
        }
    }
}

TEST(BggU, ClosedMatchesQuadrature) {
    QuadratureConfig cfg;
    for (int n : {2, 3, 6, 8}) {
        GroupParams g(n);
        const BggComparison c = bgg_compare(g, 40, 21 + n, cfg, 2);
        EXPECT_EQ(c.points, 40u);
        EXPECT_LE(c.max_rel_err, 1e-8) << "n=" << n;
        EXPECT_LE(c.mean_rel_err, c.max_rel_err);
    }
}

TEST(BggU, CompareIsThreadInvariant) {
    QuadratureConfig cfg;
    GroupParams g(3);
    const BggComparison a = bgg_compare(g, 16, 5, cfg, 1);
    const BggComparison b = bgg_compare(g, 16, 5, cfg, 4);
    EXPECT_EQ(a.max_rel_err, b.max_rel_err);
    EXPECT_EQ(a.worst_point, b.worst_point);
}

TEST(BggU, ClosedFormTimesNormPower) {
    for (int n : {2, 6}) {
        GroupParams g(n);
        auto rng = make_rng(14, n);
        const double K = fundamental_constant(n);
        for (int i = 0; i < 1000; ++i) {
            const Point p = sample_log_radial(rng, g, -2, 2, 1e-3);
            const double v = u_closed(p, g) * std::pow(norm_N(p, g), 2 * n);
            EXPECT_NEAR(v, K, 1e-12 * K);
        }
    }
}

TEST(BggU, Homogeneity) {
    QuadratureConfig cfg;
    GroupParams g(3);
    const Point p({0.3, -1.1, 0.4, 0.8, 0.2, -0.5}, 1.7);
    const double q = u_quad(p, g, cfg);
    const double c = u_closed(p, g);
    for (double lam : {0.25, 4.0}) {
        const double scale = std::pow(lam, -2 * g.n());
        EXPECT_NEAR(u_quad(dilate(lam, p), g, cfg), scale * q, 1e-10 * scale * q);
        EXPECT_NEAR(u_closed(dilate(lam, p), g), scale * c, 1e-13 * scale * c);
    }
}

TEST(BggU, EvenInT) {
    QuadratureConfig cfg;
    GroupParams g(2);
    const Point p({0.5, 0.1, -0.2, 0.7}, 3.0);
    Point m = p;
    m.t = -3.0;
    EXPECT_EQ(u_closed(p, g), u_closed(m, g));
    EXPECT_NEAR(u_quad(p, g, cfg), u_quad(m, g, cfg), 1e-14 * u_quad(p, g, cfg));
    EXPECT_NEAR(j_integral(1.0, 0.6, 0.4, 2, cfg, Contour::RealAxis),
                j_integral(1.0, 0.6, -0.4, 2, cfg, Contour::RealAxis), 1e-13);
}

TEST(BggU, SingularPoints) {
    QuadratureConfig cfg;
    GroupParams g(2);
    EXPECT_THROW(u_quad(Point({0, 0, 0, 0}, 1), g, cfg), SingularPointError);
    EXPECT_THROW(u_closed(Point::zero(g), g), SingularPointError);
    EXPECT_GT(u_closed(Point({0, 0, 0, 0}, 1), g), 0.0);
}

TEST(BggU, EvaluateBundle) {
    QuadratureConfig cfg;
    GroupParams g(2);
    const Point p({0.5, 0.1, -0.2, 0.7}, 0.8);
    const BggEval e = bgg_evaluate(p, g, cfg);
    EXPECT_NEAR(e.u_quad, e.u_closed, 1e-10 * e.u_closed);
    EXPECT_NEAR(e.I, e.I1 - e.I2, 1e-10 * e.I1);
    const ABPair ab = ab_quantities(p, g);
    EXPECT_EQ(e.im_alpha_sq, im_alpha_sq(ab.A, ab.B, p.t));
}

TEST(BggPieces, AutoContourSmallCentralCoordinate) {
    // |t| << A at n >= 6: the shifted path alone does not converge here
    const QuadratureConfig cfg;
    for (int n : {6, 8, 12}) {
        const GroupParams g(n);
        for (double r : {0.0, 1e-3, 0.03, 0.2, 0.5, 0.7, 2.0}) {
            Point p = Point::zero(g);
            p.x[1] = 2.0;  // A = B = 2
            p.t = r * 2.0;
            const double uc = u_closed(p, g);
            EXPECT_NEAR(u_quad(p, g, cfg), uc, 1e-10 * uc) << n << " " << r;
        }
        Point p = Point::zero(g);
        p.x[1] = 2.0;
        p.t = 0.02;
        EXPECT_THROW(u_quad(p, g, cfg, Contour::Shifted), QuadratureError);
    }
}
