#include <gtest/gtest.h>

#include "alesupg/stabilization.hpp"
#include "test_problems.hpp"

using namespace alesupg;

namespace {

StabilizationConfig config(double delta0, double mu, double c_inv, bool cap) {
    StabilizationConfig c;
    c.delta0 = delta0;
    c.mu = mu;
    c.c_inv = c_inv;
    c.dt_cap_enabled = cap;
    return c;
}

}  // namespace

TEST(DeltaK, NoConvectionNoReaction) { EXPECT_EQ(delta_K(0.1, 0.0, 0.0, 1e-3, 0.01, config(5, 1, 20, true)), 0.0); }

TEST(DeltaK, DiffusionCapBinds) {
    EXPECT_NEAR(delta_K(0.1, 1.0, 0.0, 1.0, 1.0, config(1e6, 1, 10, true)), 5e-5, 1e-18);
}

TEST(DeltaK, StepCapBinds) {
    EXPECT_NEAR(delta_K(0.1, 1.0, 0.0, 1e-6, 0.01, config(5, 1, 20, true)), 0.0025, 1e-18);
    EXPECT_NEAR(delta_K(0.1, 1.0, 0.0, 1e-6, 0.01, config(5, 1, 20, false)), 0.25, 1e-15);
}

TEST(DeltaK, ReactionCapBinds) {
    EXPECT_NEAR(delta_K(0.1, 1.0, 2.0, 1e-6, 1.0, config(5, 1, 20, true)), 1.0 / 8.0, 1e-15);
}

TEST(DeltaK, MonotoneInDelta0AndBoundedByCaps) {
    double last = 0.0;
    for (double d0 : {0.0, 0.1, 0.5, 1.0, 5.0, 10.0, 100.0}) {
        for (double h : {0.01, 0.1, 1.0}) {
            const double d = delta_K(h, 1.3, 0.7, 1e-4, 0.05, config(d0, 1, 20, true));
            EXPECT_GE(d, 0.0);
            EXPECT_LE(d, 0.05 / 4);
            EXPECT_LE(d, h * h / (2e-4 * 400));
            EXPECT_LE(d, 1.0 / (2 * 0.49));
        }
        const double d = delta_K(0.1, 1.3, 0.7, 1e-4, 0.05, config(d0, 1, 20, true));
        EXPECT_GE(d, last);
        last = d;
    }
}

TEST(DeltaK, InvalidArguments) {
    EXPECT_THROW(delta_K(0.0, 1, 0, 1, 1, config(1, 1, 20, true)), NumericalError);
    EXPECT_THROW(delta_K(0.1, 1, 0, 0, 1, config(1, 1, 20, true)), NumericalError);
    EXPECT_THROW(delta_K(0.1, 1, 0, 1, 0, config(1, 1, 20, true)), NumericalError);
    EXPECT_THROW(config(-1, 1, 20, true).validate(), ConfigError);
    EXPECT_THROW(config(1, -1, 20, true).validate(), ConfigError);
    EXPECT_THROW(config(1, 1, 0, true).validate(), ConfigError);
}

TEST(Coercivity, Examples) {
    const auto mesh = testing_support::square(3);
    ProblemSpec p;
    p.c = [](double, const Vec2&) { return 1.0; };
    p.div_b = [](double, const Vec2&) { return 0.0; };
    auto r = check_coercivity_assumption(p, *mesh, mesh->nodes(), 0.0);
    EXPECT_EQ(r.mu, 1.0);
    EXPECT_FALSE(r.violated);

    p.c = [](double, const Vec2&) { return 0.0; };
    r = check_coercivity_assumption(p, *mesh, mesh->nodes(), 0.0);
    EXPECT_EQ(r.mu, 0.0);
    EXPECT_TRUE(r.violated);

    p.c = [](double, const Vec2& x) { return 2.0 + x.x; };
    p.div_b = [](double, const Vec2&) { return 2.0; };
    r = check_coercivity_assumption(p, *mesh, mesh->nodes(), 0.0);
    EXPECT_GT(r.mu, 1.0);
    EXPECT_LT(r.mu, 1.1);
}

TEST(Coercivity, DefaultInverseConstants) {
    EXPECT_EQ(default_c_inv(1), 8.0);
    EXPECT_EQ(default_c_inv(2), 20.0);
}
