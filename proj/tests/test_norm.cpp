#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "heis/errors.hpp"
#include "heis/fd.hpp"
#include "heis/norm.hpp"
#include "heis/sampling.hpp"

using namespace heis;

namespace {

// Straight transcription of the closed form, no rescaling.
double direct_N(const Point& p, const GroupParams& g) {
    const ABPair ab = ab_quantities(p, g);
    const int n = g.n();
    const double r = std::sqrt(ab.B * ab.B + p.t * p.t);
    return std::pow(ab.B * ab.B + p.t * p.t, 1.0 / (4 * n)) *
           std::pow(ab.A * ab.B + p.t * p.t + ab.A * r, 0.5 - 1.0 / (4 * n)) / std::sqrt(ab.B + r);
}

Point random_point(std::mt19937_64& rng, const GroupParams& g, double w = 3.0) {
    return sample_box(rng, g, w, 1e-3);
}

}  // namespace

TEST(AbQuantities, Values) {
    GroupParams g(2);
    auto ab = ab_quantities(Point({0, 0, 0, 0}, 1), g);
    EXPECT_EQ(ab.A, 0.0);
    EXPECT_EQ(ab.B, 0.0);
    ab = ab_quantities(Point({1, 0, 0, 0}, 0), g);
    EXPECT_DOUBLE_EQ(ab.A, 0.5);
    EXPECT_DOUBLE_EQ(ab.B, 0.25);
    ab = ab_quantities(Point({0, 1, 0, 0}, 0), g);
    EXPECT_DOUBLE_EQ(ab.A, 0.5);
    EXPECT_DOUBLE_EQ(ab.B, 0.5);
    ab = ab_quantities(Point({0, 0, 1, 0}, 0), g);  // x_{n+1}
    EXPECT_DOUBLE_EQ(ab.B, 0.25);
}

TEST(AbQuantities, Ordering) {
    for (int n : {2, 5, 9}) {
        GroupParams g(n);
        std::mt19937_64 rng(n);
        for (int i = 0; i < 1000; ++i) {
            const auto ab = ab_quantities(random_point(rng, g), g);
            EXPECT_LE(ab.B, ab.A * (1 + 1e-15));
            EXPECT_LE(ab.A, 2 * ab.B * (1 + 1e-15));
        }
    }
}

TEST(NormN, KnownValues) {
    GroupParams g2(2);
    EXPECT_NEAR(norm_N(Point({1, 0, 0, 0}, 0), g2), std::pow(2.0, -0.75), 1e-15);
    EXPECT_NEAR(norm_N(Point({1, 0, 0, 0}, 0), g2), 0.5946035575, 1e-10);
    EXPECT_EQ(norm_N(Point::zero(g2), g2), 0.0);
    for (double t : {1e-300, 1e-8, 0.3, 4.0, -9.0, 1e200}) {
        EXPECT_NEAR(norm_N(Point({0, 0, 0, 0}, t), g2), std::sqrt(std::abs(t)), 1e-15 * std::sqrt(std::abs(t)));
    }
    // t = 0: 2^{-1/4n} A^{1/2 - 1/4n} B^{1/4n}
    GroupParams g6(6);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        Point p = random_point(rng, g6);
        p.t = 0;
        const auto ab = ab_quantities(p, g6);
        const double expect = std::pow(2.0, -1.0 / 24) * std::pow(ab.A, 0.5 - 1.0 / 24) * std::pow(ab.B, 1.0 / 24);
        EXPECT_NEAR(norm_N(p, g6), expect, 1e-14 * expect);
    }
}

TEST(NormN, MatchesDirectTranscription) {
    for (int n : {2, 3, 6, 10}) {
        GroupParams g(n);
        std::mt19937_64 rng(17 + n);
        for (int i = 0; i < 2000; ++i) {
            const Point p = random_point(rng, g);
            const double a = norm_N(p, g), b = direct_N(p, g);
            EXPECT_NEAR(a, b, 4e-15 * b);
        }
    }
}

TEST(NormN, Homogeneous) {
    for (int n : {2, 6}) {
        GroupParams g(n);
        std::mt19937_64 rng(23 + n);
        for (int i = 0; i < 10000; ++i) {
            const Point p = random_point(rng, g);
            const double N = norm_N(p, g);
            for (double lam : {0.5, 2.0, 10.0, 0.1, 1e-3}) {
                EXPECT_NEAR(norm_N(dilate(lam, p), g), lam * N, 1e-12 * lam * N);
            }
        }
    }
}

TEST(NormN, ExtremeScales) {
    GroupParams g(3);
    const Point p({0.3, -1.2, 0.5, 2.0, 0.1, -0.7}, 0.9);
    const double N = norm_N(p, g);
    for (double lam : {1e-150, 1e-100, 1e100, 1e150}) {
        const double v = norm_N(dilate(lam, p), g);
        EXPECT_TRUE(std::isfinite(v));
        EXPECT_NEAR(v / lam, N, 1e-14 * N);
    }
}

TEST(NormN, Symmetries) {
    GroupParams g(4);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ang(0, 6.283185307179586);
    for (int i = 0; i < 500; ++i) {
        const Point p = random_point(rng, g);
        const double N = norm_N(p, g);
        Point q = p;
        q.t = -p.t;
        EXPECT_NEAR(norm_N(q, g), N, 1e-14 * N);
        // rotation in the (x_1, x_{n+1}) plane
        const double a = ang(rng);
        q = p;
        q.x[0] = std::cos(a) * p.x[0] - std::sin(a) * p.x[4];
        q.x[4] = std::sin(a) * p.x[0] + std::cos(a) * p.x[4];
        EXPECT_NEAR(norm_N(q, g), N, 1e-14 * N);
        // permutation and sign flips of the other block
        q = p;
        std::swap(q.x[1], q.x[6]);
        q.x[2] = -q.x[2];
        EXPECT_NEAR(norm_N(q, g), N, 1e-14 * N);
        // swap x_1 <-> x_{n+1}
        q = p;
        std::swap(q.x[0], q.x[4]);
        EXPECT_NEAR(norm_N(q, g), N, 1e-14 * N);
    }
}

TEST(NormN, ZeroOnlyAtOrigin) {
    GroupParams g(2);
    EXPECT_EQ(norm_N(Point::zero(g), g), 0.0);
    EXPECT_GT(norm_N(Point({1e-200, 0, 0, 0}, 0), g), 0.0);
    EXPECT_GT(norm_N(Point({0, 0, 0, 0}, 1e-300), g), 0.0);
}

TEST(ExactPartials, CenterLineThrows) {
    GroupParams g(2);
    EXPECT_THROW(exact_partials(Point({0, 0, 0, 0}, 1), g), SingularPointError);
    EXPECT_THROW(x_dot_grad(Point::zero(g), g), SingularPointError);
    EXPECT_THROW(exact_partials(Point({0, 0, 0}, 1), g), DimensionError);
}

TEST(ExactPartials, ZeroTimeDerivativeAtZeroT) {
    GroupParams g(3);
    std::mt19937_64 rng(41);
    for (int i = 0; i < 100; ++i) {
        Point p = random_point(rng, g);
        p.t = 0;
        EXPECT_EQ(exact_partials(p, g).dN_dt, 0.0);
        EXPECT_GE(x_dot_grad(p, g), 0.0);
    }
}

TEST(ExactPartials, FieldsConsistent) {
    for (int n : {2, 6}) {
        GroupParams g(n);
        std::mt19937_64 rng(43 + n);
        for (int i = 0; i < 1000; ++i) {
            const Point p = random_point(rng, g);
            const NormEval e = exact_partials(p, g);
            const auto ab = ab_quantities(p, g);
            EXPECT_EQ(e.A, ab.A);
            EXPECT_EQ(e.B, ab.B);
            EXPECT_DOUBLE_EQ(e.N, norm_N(p, g));
            double s = 0.0, xd = 0.0, xh = 0.0;
            for (std::size_t j = 0; j < e.horiz_grad.size(); ++j) {
                s += e.horiz_grad[j] * e.horiz_grad[j];
                xd += p.x[j] * e.dN_dx[j];
                xh += p.x[j] * e.horiz_grad[j];
            }
            EXPECT_NEAR(e.grad_norm_sq, s, 1e-14 * s);
            EXPECT_NEAR(e.x_dot_grad, xd, 1e-14 * (std::abs(xd) + 1.0));
            EXPECT_NEAR(xh, xd, 1e-13 * (std::abs(xd) + 1.0));
            // pair components: x_j dN/dx_j >= 0
            EXPECT_GE(p.x[0] * e.dN_dx[0], 0.0);
            EXPECT_GE(p.x[n] * e.dN_dx[n], 0.0);
        }
    }
}

TEST(ExactPartials, MatchFiniteDifferences) {
    for (int n : {2, 6}) {
        GroupParams g(n);
        std::mt19937_64 rng(47 + n);
        const ScalarField N = [g](const Point& q) { return norm_N(q, g); };
        for (int i = 0; i < 1000; ++i) {
            const Point p = random_point(rng, g);
            const NormEval e = exact_partials(p, g);
            const auto fd = fd_gradient(N, p, 1e-6 * (1 + p.max_abs()));
            double scale = std::abs(e.dN_dt);
            for (double v : e.dN_dx) scale = std::max(scale, std::abs(v));
            for (std::size_t j = 0; j < e.dN_dx.size(); ++j) EXPECT_NEAR(fd[j], e.dN_dx[j], 1e-6 * scale);
            EXPECT_NEAR(fd.back(), e.dN_dt, 1e-6 * scale);
        }
    }
}

TEST(ExactPartials, Homogeneity) {
    GroupParams g(5);
    std::mt19937_64 rng(53);
    for (int i = 0; i < 200; ++i) {
        const Point p = random_point(rng, g);
        const NormEval e = exact_partials(p, g);
        for (double lam : {0.25, 3.0, 1e5}) {
            const NormEval f = exact_partials(dilate(lam, p), g);
            EXPECT_NEAR(f.x_dot_grad, lam * e.x_dot_grad, 1e-12 * lam * (std::abs(e.x_dot_grad) + e.N));
            EXPECT_NEAR(f.grad_norm_sq, e.grad_norm_sq, 1e-12 * e.grad_norm_sq);
            EXPECT_NEAR(f.dN_dt * lam, e.dN_dt, 1e-12 * (std::abs(e.dN_dt) + e.grad_norm_sq));
        }
    }
}

TEST(ExactPartials, NearCenterLineFinite) {
    GroupParams g(3);
    for (double eps : {1e-3, 1e-8, 1e-14, 1e-100}) {
        const Point p({eps, 0, 0, 0, eps, 0}, 1.0);
        const NormEval e = exact_partials(p, g);
        EXPECT_TRUE(std::isfinite(e.N));
        EXPECT_TRUE(std::isfinite(e.dN_dt));
        // d_t sqrt|t| = 1/2 at t = 1
        EXPECT_NEAR(e.dN_dt, 0.5, 1e-2);
        for (double v : e.dN_dx) EXPECT_TRUE(std::isfinite(v));
    }
}
