#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "cth/catalog.hpp"
#include "cth/cth.hpp"
#include "common.hpp"
#include "oracles.hpp"

using namespace cth;
using testing_support::bessel_context;
using testing_support::jacobi_context;
using testing_support::rel_l2;

TEST(Symbols, SpectralSubstitution) {
    const auto bk = make_bessel_kingman(0.5);
    const auto jac = make_jacobi(0.5, 0.5);
    const auto heat = spectral_symbol(heat_function(0.3, 0.0), bk);
    for (double l : {0.0, 0.5, 2.0}) EXPECT_DOUBLE_EQ(heat.h(l), std::exp(-0.3 * l * l));
    const auto pot = spectral_symbol(bessel_potential_function(0.7, jac.rho()), jac);
    for (double l : {0.0, 0.5, 2.0}) EXPECT_DOUBLE_EQ(pot.h(l), std::pow(1.0 + l * l + 4.0, -0.7));
    const auto one = spectral_symbol(make_spectral_function([](double) { return 1.0; }, "1", 2.0), jac);
    for (double l : {0.0, 3.0}) EXPECT_EQ(one.h(l), 1.0);
    const auto hs = heat_symbol(0.3, jac);
    EXPECT_DOUBLE_EQ(hs.h(1.5), std::exp(-0.3 * (1.5 * 1.5 + 4.0)));
}

TEST(SpectralFunction, Flags) {
    EXPECT_TRUE(heat_function(0.1, 0.0).decreasing);
    EXPECT_TRUE(heat_function(0.1, 0.0).limit_zero);
    const auto flat = make_spectral_function([](double) { return 1.0; }, "1", 0.0);
    EXPECT_TRUE(flat.decreasing);
    EXPECT_FALSE(flat.limit_zero);
    const auto bump = make_spectral_function([](double u) { return u / (1.0 + u * u); }, "bump", 0.0);
    EXPECT_FALSE(bump.decreasing);
    EXPECT_THROW(make_spectral_function([](double u) { return 1.0 / u; }, "pole", 0.0), HypothesisError);
}

TEST(Multiplier, IdentityZeroAndComposition) {
    const auto& ctx = bessel_context(0.5);
    for (const auto& name : gaussian_suite()) {
        const auto f = ctx.sample(named_signal(name));
        const double rt = rel_l2(apply_multiplier(ctx, constant_symbol(1.0), f), f);
        EXPECT_LT(rt, 1e-4) << name;
        for (double v : apply_multiplier(ctx, named_symbol("zero", ctx.model()), f).values) EXPECT_EQ(v, 0.0);

        const auto h1 = named_symbol("bessel:1", ctx.model());
        const auto h2 = named_symbol("gauss:4", ctx.model());
        const Symbol h12{[&](double l) { return h1.h(l) * h2.h(l); }, "product"};
        const auto twice = apply_multiplier(ctx, h1, apply_multiplier(ctx, h2, f));
        const auto once = apply_multiplier(ctx, h12, f);
        EXPECT_LE(rel_l2(twice, once), 2.0 * rt) << name;
    }
}

TEST(Multiplier, Linearity) {
    const auto& ctx = jacobi_context(0.5, 0.5);
    const auto h = named_symbol("rational:2", ctx.model());
    const auto f = ctx.sample(named_signal("xgauss")), g = ctx.sample(named_signal("gauss2cos"));
    auto s = f;
    for (std::size_t i = 0; i < s.size(); ++i) s.values[i] = 3.0 * f.values[i] + g.values[i];
    const auto Tf = apply_multiplier(ctx, h, f), Tg = apply_multiplier(ctx, h, g), Ts = apply_multiplier(ctx, h, s);
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(Ts.values[i], 3.0 * Tf.values[i] + Tg.values[i], 1e-12);
}

TEST(Heat, RadialThreeDimensionalOracle) {
    const auto& ctx = bessel_context(0.5);
    const auto u0 = ctx.sample([](double x) { return std::exp(-0.5 * x * x); });
    for (double t : {0.1, 0.5}) {
        const auto ref = ctx.sample([t](double x) { return oracle::radial_heat_3d(t, x); });
        EXPECT_LT(rel_l2(heat_apply(ctx, t, u0), ref), 1e-4) << "t=" << t;
    }
}

TEST(Heat, ContinuityAtZeroAndSemigroup) {
    const auto& ctx = bessel_context(0.5);
    for (const auto& name : gaussian_suite()) {
        const auto f = ctx.sample(named_signal(name));
        EXPECT_LT(rel_l2(heat_apply(ctx, 1e-6, f), f), 1e-4) << name;
        const double rt = rel_l2(apply_multiplier(ctx, constant_symbol(1.0), f), f);
        const auto st = heat_apply(ctx, 0.2, heat_apply(ctx, 0.1, f));
        EXPECT_LE(rel_l2(st, heat_apply(ctx, 0.3, f)), 2.0 * rt) << name;
    }
    const auto& j = jacobi_context(0.5, 0.5);
    const auto f = j.sample(named_signal("gaussian:1:1"));
    const double rt = rel_l2(apply_multiplier(j, constant_symbol(1.0), f), f);
    EXPECT_LE(rel_l2(heat_apply(j, 0.05, heat_apply(j, 0.15, f)), heat_apply(j, 0.2, f)), 2.0 * rt);
    EXPECT_THROW(heat_apply(j, 0.0, f), std::invalid_argument);
    EXPECT_THROW(heat_apply(j, -1.0, f), std::invalid_argument);
}

TEST(SpectralBound, HeatClosedFormSup) {
    // below the crossover the sup of e^{-t(s^2+rho^2)} s^beta is e^{-t rho^2} (beta/(2 t e))^{beta/2}
    for (const auto& m : {make_bessel_kingman(0.5), make_jacobi(0.5, 0.5), make_jacobi(1.5, 0.5)}) {
        const double p = 4.0 / 3.0, q = 4.0, e = 1.0 / p - 1.0 / q;
        const double beta = 2.0 * (m.a_exponent() + 1.0) * e;
        for (double t : {2.0, 5.0, 20.0}) {
            const double want =
                std::exp(-t * m.rho() * m.rho()) * std::pow(beta / (2.0 * t * std::numbers::e), beta / 2.0);
            const double got = spectral_bound(heat_function(t, m.rho()), m, p, q);
            EXPECT_NEAR(got, want, 1e-6 * want) << m.descriptor() << " t=" << t;
        }
    }
}

TEST(SpectralBound, SmallTimeSlopeOfExactSup) {
    // the exact sup decays like t^{-(alpha+1)(1/p-1/q)} for small t
    for (auto [a, p, q] : {std::tuple{0.5, 4.0 / 3.0, 4.0}, std::tuple{1.5, 1.5, 3.0}}) {
        const auto m = make_bessel_kingman(a);
        const double slope = loglog_slope(1e-3, 1e-1, 9, [&](double t) { return spectral_bound(heat_function(t, 0.0), m, p, q); });
        EXPECT_NEAR(slope, -(a + 1.0) * (1.0 / p - 1.0 / q), 1e-3);
    }
}

TEST(SpectralBound, DenseScanOracle) {
    const auto m = make_bessel_kingman(0.5);
    const auto phi = make_spectral_function([](double u) { return std::min(1.0, 1.0 / u); }, "min(1,1/u)", 0.0);
    ASSERT_TRUE(phi.decreasing);
    ASSERT_TRUE(phi.limit_zero);
    for (auto [p, q] : {std::pair{4.0 / 3.0, 4.0}, std::pair{1.5, 3.0}}) {
        const double e = 1.0 / p - 1.0 / q;
        const double brute = oracle::dense_max(
            [&](double s) { return std::min(1.0, 1.0 / (s * s)) * std::pow(s, 3.0 * e); }, 0.0, 1e3, 1000001);
        EXPECT_NEAR(spectral_bound(phi, m, p, q), brute, 1e-3 * brute);
    }
}

TEST(SpectralBound, MonotoneInPhiAndDegenerateExponent) {
    const auto m = make_jacobi(0.5, 0.5);
    for (double t : {0.01, 0.3, 3.0}) {
        const auto small = heat_function(2.0 * t, m.rho());
        const auto big = heat_function(t, m.rho());
        EXPECT_LE(spectral_bound(small, m, 1.5, 3.0), spectral_bound(big, m, 1.5, 3.0));
        EXPECT_DOUBLE_EQ(spectral_bound(big, m, 2.0, 2.0), std::exp(-t * 4.0));
    }
    const auto flat = make_spectral_function([](double) { return 1.0; }, "1", m.rho());
    EXPECT_THROW(spectral_bound(flat, m, 1.5, 3.0), HypothesisError);
    EXPECT_THROW(spectral_bound(heat_function(1.0, 2.0), m, 2.5, 3.0), std::invalid_argument);
}

TEST(Sobolev, ThresholdFlip) {
    const auto m = make_bessel_kingman(0.5);
    const double p = 4.0 / 3.0, q = 4.0;
    EXPECT_TRUE(sobolev_check(0.8, m, p, q).verdict);
    EXPECT_FALSE(sobolev_check(0.5, m, p, q).verdict);
    const auto zero = sobolev_check(0.0, m, p, q);
    EXPECT_FALSE(zero.verdict);
    EXPECT_FALSE(zero.reason.empty());
    EXPECT_TRUE(sobolev_check(0.0, m, 2.0, 2.0).verdict);
    EXPECT_TRUE(sobolev_check(1.3, m, 2.0, 2.0).verdict);

    // first b on a 0.01 grid with a true verdict sits at the threshold 0.75
    const double threshold = sobolev_check(0.8, m, p, q).threshold;
    EXPECT_DOUBLE_EQ(threshold, 0.75);
    double first_true = NAN;
    for (int k = 50; k <= 100; ++k) {
        const double b = 0.01 * k;
        const bool v = sobolev_check(b, m, p, q).verdict;
        if (v && std::isnan(first_true)) first_true = b;
        if (!std::isnan(first_true)) {
            EXPECT_TRUE(v) << "verdict flips back at b=" << b;
        }
    }
    EXPECT_NEAR(first_true, threshold, 0.011);
}

TEST(HeatBranchBound, BranchSelection) {
    const double p = 4.0 / 3.0, q = 4.0;
    const auto bk = make_bessel_kingman(0.5);
    EXPECT_EQ(heat_branch_bound(bk, 0.5, p, q).branch, "small");
    EXPECT_EQ(heat_branch_bound(bk, 0.75, p, q).branch, "large");
    EXPECT_DOUBLE_EQ(heat_branch_bound(bk, 0.01, p, q).value, std::pow(0.01, -1.5));
    const double t = 2.0;
    EXPECT_DOUBLE_EQ(heat_branch_bound(bk, t, p, q).value, std::exp(-2.25 * 0.25 / t) * std::pow(t, -1.5));
    // a < alpha: the two ranges overlap and the small branch wins
    const auto j = make_jacobi(1.5, 0.5);
    EXPECT_EQ(heat_branch_bound(j, 1.0, p, q).branch, "small");
    EXPECT_EQ(heat_branch_bound(j, 1.3, p, q).branch, "large");
    // a > alpha leaves a window in between
    const auto c = make_custom([](double x) { return x * x; }, [](double x) { return 2.0 / x; }, 0.5, 0.0, 1.0, 1.0);
    EXPECT_EQ(heat_branch_bound(c, 0.8, p, q).branch, "gap-small");
    EXPECT_EQ(heat_branch_bound(c, 0.95, p, q).branch, "gap-large");
    EXPECT_EQ(heat_branch_bound(c, 1.0, p, q).branch, "large");
    EXPECT_THROW(heat_branch_bound(bk, 0.0, p, q), std::invalid_argument);
}

TEST(HeatBranchBound, BranchesAgreeAtCrossover) {
    const double p = 4.0 / 3.0, q = 4.0, e = 0.5;
    for (const auto& m : {make_bessel_kingman(0.5), make_jacobi(0.5, 0.5)}) {
        const double tc = (m.alpha() + 1.0) * e / m.K_crossover();
        const double below = heat_branch_bound(m, tc * (1.0 - 1e-12), p, q).value;
        const double above = heat_branch_bound(m, tc, p, q).value;
        const double r = below / above;
        EXPECT_LT(std::max(r, 1.0 / r), 4.0 * std::exp(tc * m.rho() * m.rho())) << m.descriptor();
    }
}

TEST(HeatCurve, EnvelopeAndSlope) {
    const auto& ctx = bessel_context(0.5);
    const double p = 4.0 / 3.0, q = 4.0;
    std::vector<double> ts;
    for (int k = 0; k <= 8; ++k) ts.push_back(1e-3 * std::pow(100.0, k / 8.0));
    const auto curve = heat_opnorm_curve(ctx, p, q, ts, 42);
    std::vector<double> lx, ly;
    for (const auto& pt : curve) {
        EXPECT_LE(pt.empirical, 10.0 * pt.bound) << "t=" << pt.t;
        lx.push_back(std::log(pt.t));
        ly.push_back(std::log(pt.empirical));
    }
    const double slope = fit_line(lx, ly).slope;
    EXPECT_GE(slope, -2.0 * 1.5 * 0.5 * 1.1);
    EXPECT_THROW(heat_opnorm_curve(ctx, p, q, {0.1, 0.05}, 42), std::invalid_argument);
}

TEST(HeatCurve, JacobiExponentialFactor) {
    const auto& ctx = jacobi_context(0.5, 0.5);
    const double rho2 = 4.0;
    const std::vector<double> ts{1.0, 2.0, 4.0, 8.0};
    const auto curve = heat_opnorm_curve(ctx, 4.0 / 3.0, 4.0, ts, 42);
    const double base = std::log(curve[0].empirical) + ts[0] * rho2;
    for (std::size_t i = 1; i < ts.size(); ++i) {
        const double g = std::log(curve[i].empirical) + ts[i] * rho2 - base;
        EXPECT_LE(g, 2.0 * std::log(ts[i] / ts[0]) + 1.0) << "t=" << ts[i];
    }
}
