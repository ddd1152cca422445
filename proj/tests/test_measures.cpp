#include <gtest/gtest.h>

#include <cmath>

#include "heis/errors.hpp"
#include "heis/fd.hpp"
#include "heis/measures.hpp"
#include "heis/norm.hpp"
#include "heis/sampling.hpp"

using namespace heis;

namespace {

std::vector<MeasureSpec> all_families() {
    return {MeasureSpec::power(4), MeasureSpec::power(6), MeasureSpec::cosh_power(1), MeasureSpec::cosh_power(2),
            MeasureSpec::power_log(3), MeasureSpec::power_log(4.5), MeasureSpec::alpha_power(1, 4, 0.25),
            MeasureSpec::alpha_power(0.3, 6, 0.5)};
}

// 4th-order central difference
template <class F>
double d1(F f, double x, double h) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

}  // namespace

TEST(MeasureSpec, Validation) {
    EXPECT_NO_THROW(MeasureSpec::power(4).validate());
    EXPECT_THROW(MeasureSpec::power(3.9).validate(), ConfigError);
    EXPECT_THROW(MeasureSpec::cosh_power(0.5).validate(), ConfigError);
    EXPECT_THROW(MeasureSpec::power_log(2).validate(), ConfigError);
    EXPECT_THROW(MeasureSpec::alpha_power(0, 4, 0.25).validate(), ConfigError);
    EXPECT_THROW(MeasureSpec::alpha_power(1, 3, 0.25).validate(), ConfigError);
    EXPECT_THROW(MeasureSpec::alpha_power(1, 4, 0.3).validate(), ConfigError);  // beta > (p-3)/p
    EXPECT_NO_THROW(MeasureSpec::alpha_power(1, 6, 0.5).validate());
    EXPECT_THROW(MeasureSpec::power(4, 1.5).validate(), ConfigError);
}

TEST(MeasureSpec, Names) {
    for (Family f : {Family::PowerK, Family::CoshPowerK, Family::PowerKLog, Family::AlphaPowerP}) {
        EXPECT_EQ(parse_family(family_name(f)), f);
    }
    EXPECT_THROW(parse_family("gauss"), ConfigError);
    EXPECT_EQ(MeasureSpec::power(4).label(), "power(k=4) q=2");
}

TEST(GFunctions, HandValues) {
    EXPECT_DOUBLE_EQ(g_prime(MeasureSpec::power(4), 2.0), 32.0);
    EXPECT_DOUBLE_EQ(g_second(MeasureSpec::power(4), 1.0), 12.0);
    const auto c1 = MeasureSpec::cosh_power(1);
    for (double N : {0.3, 1.0, 2.5}) {
        EXPECT_NEAR(g_prime(c1, N), std::sinh(N), 1e-15 * std::cosh(N));
        EXPECT_NEAR(g_second(c1, N), std::cosh(N), 1e-15 * std::cosh(N));
    }
    EXPECT_NEAR(g_prime(MeasureSpec::power_log(3), 1.0), 3 * std::log(2.0) + 0.5, 1e-15);
    EXPECT_DOUBLE_EQ(g_value(MeasureSpec::alpha_power(2, 4, 0.25), 1.5), 2 * std::pow(1.5, 4));
}

TEST(GFunctions, DerivativesMatchFiniteDifferences) {
    for (const auto& s : all_families()) {
        for (double N : log_grid(0.01, 100, 60)) {
            const double gp = g_prime(s, N);
            const double gs = g_second(s, N);
            if (!std::isfinite(g_value(s, N * 1.01)) || !std::isfinite(gs)) continue;
            // step against the scale on which g changes (cosh(N^k) varies on 1/(k N^{k-1}))
            const double h = 1e-3 * std::min(N, std::abs(g_value(s, N) / gp));
            // cosh(N^k) - 1 written without cancellation; the shift does not change g'
            auto g_shifted = [&](double v) {
                if (s.family != Family::CoshPowerK) return g_value(s, v);
                const double sh = std::sinh(0.5 * std::pow(v, s.k));
                return 2 * sh * sh;
            };
            const double fd1 = d1(g_shifted, N, h);
            const double fd2 = d1([&](double v) { return g_prime(s, v); }, N, h);
            EXPECT_NEAR(fd1, gp, 1e-8 * std::abs(gp) + 1e-300) << s.label() << " N=" << N;
            EXPECT_NEAR(fd2, gs, 1e-8 * std::abs(gs) + 1e-8 * std::abs(gp) / N) << s.label() << " N=" << N;
        }
    }
}

TEST(GFunctions, CurvatureRatioAndEta) {
    for (const auto& s : all_families()) {
        for (double N : log_grid(0.5, 3, 20)) {
            const double gp = g_prime(s, N);
            EXPECT_NEAR(g_curvature_ratio(s, N), g_second(s, N) / (gp * gp), 1e-13 * g_second(s, N) / (gp * gp));
            EXPECT_NEAR(eta(s, N), gp / (N * N), 1e-14 * gp / (N * N));
        }
    }
    // no overflow where sinh does
    EXPECT_EQ(g_curvature_ratio(MeasureSpec::cosh_power(2), 100.0), 0.0);
}

TEST(LogDensity, ValuesAndGradient) {
    GroupParams g2(2);
    EXPECT_NEAR(log_density(MeasureSpec::power(4), Point({1, 0, 0, 0}, 0), g2), -0.125, 1e-15);
    EXPECT_EQ(log_density(MeasureSpec::power(4), Point::zero(g2), g2), 0.0);
    EXPECT_EQ(log_density(MeasureSpec::cosh_power(1), Point::zero(g2), g2), -1.0);
    EXPECT_THROW(grad_log_density(MeasureSpec::power(4), Point({0, 0, 0, 0}, 1), g2), SingularPointError);

    for (int n : {2, 6}) {
        GroupParams g(n);
        for (const auto& s : all_families()) {
            auto rng = make_rng(31, n);
            const ScalarField f = [&](const Point& q) { return log_density(s, q, g); };
            for (int i = 0; i < 100; ++i) {
                const Point p = sample_box(rng, g, 1.5, 1e-2);
                const auto ex = grad_log_density(s, p, g);
                const auto fd = fd_gradient(f, p, 1e-6 * (1 + p.max_abs()));
                double scale = 0;
                for (double v : ex) scale = std::max(scale, std::abs(v));
                for (std::size_t j = 0; j < ex.size(); ++j) EXPECT_NEAR(fd[j], ex[j], 1e-6 * scale) << s.label();
            }
        }
    }
}

TEST(Grids, Shapes) {
    const auto lg = log_grid(1, 100, 3);
    EXPECT_EQ(lg[0], 1);
    EXPECT_NEAR(lg[1], 10, 1e-13);
    EXPECT_EQ(lg[2], 100);
    const auto ln = linear_grid(1, 2, 5);
    EXPECT_DOUBLE_EQ(ln[2], 1.5);
    EXPECT_THROW(log_grid(0, 1, 5), ConfigError);
    EXPECT_THROW(linear_grid(1, 2, 1), ConfigError);
}

TEST(UboundCondition, PowerAndCoshFamilies) {
    const auto grid = linear_grid(1, 10, 901);
    auto r = check_ubound_condition(MeasureSpec::power(4), grid);
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.min_margin, 1 - 12.0 / 16.0, 1e-15);  // at N = 1: g'^2 - g'' = 4
    EXPECT_EQ(*r.worst_grid_value, 1.0);
    EXPECT_EQ(r.name, "curvature_condition");

    const auto from_15 = linear_grid(1.5, 10, 851);
    for (double k : {1.0, 2.0}) EXPECT_TRUE(check_ubound_condition(MeasureSpec::cosh_power(k), from_15).pass) << k;
    // at N = 1 the cosh family misses: coth(1)/sinh(1) > 1 for k = 1
    const auto c1 = check_ubound_condition(MeasureSpec::cosh_power(1), grid);
    EXPECT_FALSE(c1.pass);
    EXPECT_NEAR(c1.min_margin, 1 - 1 / (std::tanh(1.0) * std::sinh(1.0)), 1e-14);

    EXPECT_THROW(check_ubound_condition(MeasureSpec::power(4), {0.5, 1.0}), ConfigError);
}

TEST(UboundCondition, PowerLogFailsJustAboveOne) {
    // g = N^3 log(1 + N): g''(1) = 6 log 2 + 11/4 exceeds g'(1)^2 = (3 log 2 + 1/2)^2,
    // so g'' <= g'^2 fails on a short interval above N = 1 and holds after it.
    const auto s = MeasureSpec::power_log(3);
    const double l2 = std::log(2.0);
    const double expect = 1 - (6 * l2 + 2.75) / ((3 * l2 + 0.5) * (3 * l2 + 0.5));
    const auto r = check_ubound_condition(s, linear_grid(1, 10, 9001));
    EXPECT_FALSE(r.pass);
    EXPECT_NEAR(r.min_margin, expect, 1e-14);
    EXPECT_NEAR(r.min_margin, -0.0384, 1e-4);
    EXPECT_TRUE(check_ubound_condition(s, linear_grid(1.02, 10, 8981)).pass);
    for (double k : {4.0, 5.0}) {
        EXPECT_FALSE(check_ubound_condition(MeasureSpec::power_log(k), linear_grid(1, 10, 901)).pass);
        EXPECT_TRUE(check_ubound_condition(MeasureSpec::power_log(k), linear_grid(1.05, 10, 896)).pass);
    }
}

TEST(LsiConditions, AlphaPowerDocumentedGrid) {
    const auto s = MeasureSpec::alpha_power(1, 4, 0.25);
    const auto grid = log_grid(1, 1e6, 2000);
    const double c = lsi_min_c(s, grid);
    const double d = lsi_min_d(s);
    EXPECT_DOUBLE_EQ(d, 0.75);
    // beta = (p-3)/p: N^2 g^beta / g' = N^2 N / (4 N^3) is constant
    EXPECT_NEAR(c, 0.25, 1e-15);
    const auto rs = check_lsi_conditions(s, grid, c, d);
    ASSERT_EQ(rs.size(), 3u);
    EXPECT_EQ(rs[0].name, "derivative_increasing");
    EXPECT_EQ(rs[1].name, "growth_bound");
    EXPECT_EQ(rs[2].name, "curvature_bound");
    for (const auto& r : rs) EXPECT_TRUE(r.pass) << r.name << " " << r.min_margin;
    // d is sharp at N = 1
    EXPECT_NEAR(rs[2].min_margin, 0.0, 1e-15);
    EXPECT_EQ(*rs[2].worst_grid_value, 1.0);
    // shrinking either constant breaks the matching condition
    const auto tight = check_lsi_conditions(s, grid, 0.9 * c, 0.9 * d);
    EXPECT_TRUE(tight[0].pass);
    EXPECT_FALSE(tight[1].pass);
    EXPECT_FALSE(tight[2].pass);
}

TEST(LsiConditions, BelowCriticalBetaConstantSitsAtOne) {
    // beta < (p-3)/p: N^2 g^beta / g' decreases, so the worst point is N = 1
    const auto s = MeasureSpec::alpha_power(2, 6, 0.25);
    const double c_small = lsi_min_c(s, log_grid(1, 10, 200));
    const double c_large = lsi_min_c(s, log_grid(1, 1e3, 200));
    EXPECT_EQ(c_large, c_small);
    EXPECT_NEAR(c_small, std::pow(2.0, 0.25) / 12.0, 1e-15);
    EXPECT_THROW(check_lsi_conditions(MeasureSpec::power(4), {1.0}, 1, 1), ConfigError);
    EXPECT_THROW(lsi_min_d(MeasureSpec::power(4)), ConfigError);
    EXPECT_THROW(check_lsi_conditions(s, {1.0, 2.0}, 0.0, 1.0), ConfigError);
}
