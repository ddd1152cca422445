#include <gtest/gtest.h>

#include "heis/errors.hpp"
#include "heis/verify.hpp"

using namespace heis;

namespace {

VerifyConfig small(std::uint64_t seed) {
    VerifyConfig c;
    c.sampler.n_steps = 22000;
    c.sampler.burn_in = 2000;
    c.sampler.seed = seed;
    c.threads = 2;
    return c;
}

}  // namespace

TEST(ConditionGrid, PerFamily) {
    EXPECT_EQ(condition_grid(MeasureSpec::power(4)).front(), 1.0);
    EXPECT_EQ(condition_grid(MeasureSpec::cosh_power(2)).front(), 1.5);
    const auto lsi = condition_grid(MeasureSpec::alpha_power(1, 4, 0.25));
    EXPECT_EQ(lsi.size(), 2000u);
    EXPECT_NEAR(lsi.back(), 1e6, 1e-6);
}

TEST(VerifyUbound, PowerFamily) {
    GroupParams g(3);
    const CoerciveReport r = verify_ubound(MeasureSpec::power(4), g, small(1));
    EXPECT_EQ(r.kind, "ubound");
    EXPECT_EQ(r.functions.size(), 8u);
    ASSERT_EQ(r.chains.size(), 2u);
    EXPECT_FALSE(r.chains[0].mis_tuned);
    EXPECT_TRUE(r.fit.feasible);
    EXPECT_TRUE(r.conditions[0].pass);
    EXPECT_EQ(r.pass, r.check.feasible);
    EXPECT_TRUE(r.fit_terms[0].lhs_series.empty());
    // the constant function forces D >= mu(eta) on the fit chain
    EXPECT_GE(r.fit.D, r.fit_terms[0].lhs.mean * (1 - 1e-12));
    EXPECT_LE(r.fit.D, 10 * r.fit_terms[0].lhs.mean * (1 + 1e-9));
}

TEST(VerifyUbound, ThreadInvariant) {
    GroupParams g(2);
    auto c1 = small(5);
    auto c4 = small(5);
    c1.threads = 1;
    c4.threads = 4;
    const auto a = verify_ubound(MeasureSpec::cosh_power(1), g, c1);
    const auto b = verify_ubound(MeasureSpec::cosh_power(1), g, c4);
    EXPECT_EQ(a.fit.C, b.fit.C);
    EXPECT_EQ(a.check.max_violation, b.check.max_violation);
}

TEST(VerifyUbound, FailingConditionFailsRun) {
    GroupParams g(2);
    const auto r = verify_ubound(MeasureSpec::power_log(3), g, small(2));
    EXPECT_FALSE(r.conditions[0].pass);
    EXPECT_FALSE(r.pass);
}

TEST(VerifyLsi, AlphaPowerOnly) {
    GroupParams g(3);
    EXPECT_THROW(verify_lsi(MeasureSpec::power(4), g, small(1)), ConfigError);
    const auto r = verify_lsi(MeasureSpec::alpha_power(1, 4, 0.25), g, small(1));
    ASSERT_EQ(r.conditions.size(), 3u);
    for (const auto& c : r.conditions) EXPECT_TRUE(c.pass) << c.name;
    EXPECT_EQ(r.fit_terms[0].lhs.mean, 0.0);
}

TEST(VerifyPoincare, Seeds) {
    GroupParams g(2);
    const PoincareReport r = verify_poincare(MeasureSpec::power(4), g, small(10), 3);
    ASSERT_EQ(r.seeds.size(), 3u);
    EXPECT_EQ(r.seeds[2], 12u);
    EXPECT_EQ(r.ratios[0].size(), 7u);
    EXPECT_TRUE(r.all_finite);
    EXPECT_LE(r.x1_variance_z, 3.0);
    EXPECT_THROW(verify_poincare(MeasureSpec::power(4), g, small(1), 1), ConfigError);
}
