#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "cth/cth.hpp"
#include "oracles.hpp"

using namespace cth;

namespace {

std::vector<double> uniform(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return g;
}

} // namespace

TEST(Eigenfn, SincOracle) {
    EigenfunctionEvaluator ev(make_bessel_kingman(0.5));
    EXPECT_NEAR(ev.evaluate(2.0, 1.0), std::sin(2.0) / 2.0, 1e-8);
    const auto xs = uniform(0.0, 10.0, 512);
    for (double l : {0.5, 1.0, 3.0, 4.0}) {
        const auto phi = ev.evaluate_grid(l, xs);
        double worst = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) worst = std::max(worst, std::abs(phi[i] - oracle::sinc_character(l, xs[i])));
        EXPECT_LT(worst, 1e-7) << "lambda=" << l;
    }
}

TEST(Eigenfn, HankelOracleAcrossAlpha) {
    const auto xs = uniform(0.0, 10.0, 401);
    for (double a : {0.0, 0.5, 1.5}) {
        EigenfunctionEvaluator ev(make_bessel_kingman(a));
        for (double l : {0.5, 1.0, 4.0}) {
            const auto phi = ev.evaluate_grid(l, xs);
            double worst = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                worst = std::max(worst, std::abs(phi[i] - hankel_oracle(a, l, xs[i])));
                // the library oracle against an independent power series, where
                // the series has not lost its digits to cancellation
                if (l * xs[i] <= 15.0) {
                    EXPECT_NEAR(hankel_oracle(a, l, xs[i]), oracle::normalized_bessel_series(a, l * xs[i]), 1e-10);
                }
            }
            EXPECT_LT(worst, 1e-7) << "alpha=" << a << " lambda=" << l;
        }
    }
}

TEST(Eigenfn, HankelOracleSpecialValues) {
    EXPECT_NEAR(hankel_oracle(0.5, 1.0, M_PI), 0.0, 1e-14);
    EXPECT_NEAR(hankel_oracle(0.5, 2.0, 1.0), 0.45464871341284085, 1e-14);
    EXPECT_EQ(hankel_oracle(0.0, 1.0, 0.0), 1.0);
}

TEST(Eigenfn, NormalisationAtOrigin) {
    for (const auto& m : {make_bessel_kingman(0.5), make_jacobi(0.5, 0.5), make_jacobi(1.5, 0.5)}) {
        EigenfunctionEvaluator ev(m);
        for (double l : {0.0, 1.0, 10.0}) EXPECT_EQ(ev.evaluate(l, 0.0), 1.0);
    }
}

TEST(Eigenfn, SeriesTaylorCoefficient) {
    EigenfunctionEvaluator ev(make_bessel_kingman(0.5));
    const double l = 3.0;
    for (double x : {1e-3, 0.05}) {
        const double z = l * x;
        const auto s = ev.series(l * l, x);
        // sinc z = 1 - z^2/6 + z^4/120 - ...
        EXPECT_NEAR(s[0], 1.0 - z * z / 6.0 + std::pow(z, 4) / 120.0, 1e-8);
        EXPECT_NEAR(s[1], l * (-z / 3.0 + std::pow(z, 3) / 30.0), 1e-7);
    }
    EXPECT_NEAR(ev.series(l * l, 1e-3)[0], 1.0 - l * l * 1e-6 / 6.0, 1e-12);
}

TEST(Eigenfn, EvenInLambda) {
    const auto xs = uniform(0.0, 8.0, 101);
    for (const auto& m : {make_bessel_kingman(1.5), make_jacobi(0.5, 0.5)}) {
        EigenfunctionEvaluator ev(m);
        for (double l : {0.5, 1.0, 2.0}) {
            const auto a = ev.evaluate_grid(l, xs), b = ev.evaluate_grid(-l, xs);
            for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_EQ(a[i], b[i]);
        }
    }
}

TEST(Eigenfn, BoundedByOne) {
    const auto xs = uniform(0.0, 12.0, 301);
    for (const auto& m : {make_bessel_kingman(0.0), make_bessel_kingman(1.5), make_jacobi(0.5, 0.5),
                          make_jacobi(1.5, 0.5), make_jacobi(0.5, -0.5)}) {
        EigenfunctionEvaluator ev(m);
        for (double l : {0.0, 0.3, 1.0, 5.0, 20.0}) {
            for (double v : ev.evaluate_grid(l, xs)) EXPECT_LE(std::abs(v), 1.0 + 1e-6) << m.descriptor() << " " << l;
        }
    }
}

TEST(Eigenfn, ZeroLambdaFlatModelIsOne) {
    EigenfunctionEvaluator ev(make_bessel_kingman(1.0));
    for (double v : ev.evaluate_grid(0.0, uniform(0.0, 10.0, 200))) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(Eigenfn, JacobiHypergeometricOracle) {
    EigenfunctionEvaluator ev(make_jacobi(0.5, 0.5));
    const auto xs = uniform(0.0, 0.85, 60);
    for (double l : {0.0, 1.0, 3.0}) {
        const auto phi = ev.evaluate_grid(l, xs);
        for (std::size_t i = 0; i < xs.size(); ++i)
            EXPECT_NEAR(phi[i], oracle::jacobi_hypergeometric(0.5, 0.5, l, xs[i]), 1e-6) << "x=" << xs[i];
    }
}

TEST(Eigenfn, IndependentRk4CrossCheck) {
    const auto m = make_jacobi(1.5, 0.5);
    EigenfunctionEvaluator ev(m);
    const auto xs = uniform(0.1, 6.0, 30);
    for (double l : {0.5, 2.0}) {
        const double mu = l * l + m.rho() * m.rho();
        const auto ref = oracle::rk4_character([&](double x) { return m.log_deriv(x); }, m.alpha(), mu, xs);
        const auto got = ev.evaluate_grid(l, xs);
        for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_NEAR(got[i], ref[i], 1e-7);
    }
}

TEST(Eigenfn, SweepMatchesPointwise) {
    EigenfunctionEvaluator ev(make_jacobi(0.5, 0.5));
    const auto xs = uniform(0.0, 5.0, 21);
    const auto sweep = ev.evaluate_grid(2.0, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_NEAR(sweep[i], ev.evaluate(2.0, xs[i]), 1e-9);
}

TEST(Eigenfn, EigenvalueResidual) {
    for (const auto& m : {make_bessel_kingman(0.5), make_jacobi(0.5, 0.5), make_jacobi(1.5, 0.5)}) {
        EigenfunctionEvaluator ev(m);
        const double h = 1e-3;
        const auto xs = uniform(0.2, 8.0, 7801);
        for (double l : {0.5, 2.0, 6.0}) {
            const auto u = ev.evaluate_grid(l, xs);
            const double mu = l * l + m.rho() * m.rho();
            double worst = 0.0;
            for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
                const double d2 = (u[i + 1] - 2 * u[i] + u[i - 1]) / (h * h);
                const double d1 = (u[i + 1] - u[i - 1]) / (2 * h);
                worst = std::max(worst, std::abs(d2 + m.log_deriv(xs[i]) * d1 + mu * u[i]));
            }
            EXPECT_LT(worst, 1e-4 * (1.0 + l * l)) << m.descriptor() << " lambda=" << l;
        }
    }
}

TEST(Eigenfn, ExponentialBound) {
    const auto xs = uniform(0.0, 10.0, 200);
    EXPECT_LE(exp_bound_check(EigenfunctionEvaluator(make_bessel_kingman(0.5)), 1.0, xs), 1.0 + 1e-9);
    const double r1 = exp_bound_check(EigenfunctionEvaluator(make_jacobi(0.5, 0.5)), 1.0, xs);
    const double r0 = exp_bound_check(EigenfunctionEvaluator(make_jacobi(0.5, 0.5)), 0.0, xs);
    EXPECT_TRUE(std::isfinite(r1));
    EXPECT_TRUE(std::isfinite(r0));
    EXPECT_GT(r0, 0.0);
}

TEST(Eigenfn, RejectsBadInput) {
    EigenfunctionEvaluator ev(make_bessel_kingman(0.5));
    EXPECT_THROW(ev.evaluate(1.0, -1.0), std::invalid_argument);
    EXPECT_THROW(ev.evaluate_grid(1.0, std::vector<double>{1.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(EigenfunctionEvaluator(make_bessel_kingman(0.5), 0.0), std::invalid_argument);
    const auto broken = make_custom([](double x) { return x * x; },
                                    [](double x) { return x > 2.0 ? NAN : 2.0 / x; }, 0.5, 0.0, 0.5, 1.0);
    EXPECT_THROW(EigenfunctionEvaluator(broken).evaluate(1.0, 3.0), NumericalError);
}
