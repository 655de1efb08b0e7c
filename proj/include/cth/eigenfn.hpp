#pragma once

// Characters phi_lambda of the hypergroup: the solution of
//   u'' + (A'/A) u' + (lambda^2 + rho^2) u = 0,  u(0) = 1, u'(0) = 0,
// started from a Frobenius series at x0 and continued by adaptive
// Dormand-Prince stepping on w = e^{rho x} u, which stays O(1 + x).

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "cth/errors.hpp"
#include "cth/model.hpp"

namespace cth {

struct OdeTolerances {
    double abs = 1e-10;
    double rel = 1e-10;
};

class EigenfunctionEvaluator {
public:
    explicit EigenfunctionEvaluator(HypergroupModel model, double series_cutoff = 1e-3,
                                    OdeTolerances tol = {})
        : model_(std::move(model)), x0_(series_cutoff), tol_(tol) {
        if (!(x0_ > 0.0)) throw std::invalid_argument("eigenfn: series cutoff must be positive");
    }

    const HypergroupModel& model() const { return model_; }
    double series_cutoff() const { return x0_; }
    const OdeTolerances& tolerances() const { return tol_; }

    /// phi_lambda(x) at a single point.
    double evaluate(double lambda, double x) const {
        const double xs[1] = {x};
        return evaluate_grid(lambda, xs).front();
    }

    /// phi_lambda on an increasing set of points, in one forward sweep.
    std::vector<double> evaluate_grid(double lambda, std::span<const double> xs) const {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (!(xs[i] >= 0.0) || (i > 0 && !(xs[i] > xs[i - 1])))
                throw std::invalid_argument("eigenfn: points must be non-negative and strictly increasing");
        }
        std::vector<double> out(xs.size());
        const double mu = lambda * lambda + model_.rho() * model_.rho();

        std::size_t first_ode = 0;
        while (first_ode < xs.size() && xs[first_ode] <= x0_) {
            out[first_ode] = series(mu, xs[first_ode])[0];
            ++first_ode;
        }
        if (first_ode == xs.size()) return out;

        const double rho = model_.rho();
        const double lam2 = lambda * lambda;
        const HypergroupModel& m = model_;
        bool bad_coefficient = false;
        auto rhs = [&](const State& w, State& dw, double x) {
            const double p = m.log_deriv(x);
            if (!std::isfinite(p)) bad_coefficient = true;
            dw[0] = w[1];
            dw[1] = -(p - 2.0 * rho) * w[1] - (lam2 + 2.0 * rho * rho - rho * p) * w[0];
        };

        const auto u0 = series(mu, x0_);
        const double scale = std::exp(rho * x0_);
        State w{scale * u0[0], scale * (u0[1] + rho * u0[0])};

        std::vector<double> times;
        times.reserve(xs.size() - first_ode + 1);
        times.push_back(x0_);
        times.insert(times.end(), xs.begin() + static_cast<std::ptrdiff_t>(first_ode), xs.end());

        std::size_t k = 0;
        auto observer = [&](const State& s, double x) {
            if (k > 0) out[first_ode + k - 1] = std::exp(-rho * x) * s[0];
            ++k;
        };

        namespace ode = boost::numeric::odeint;
        auto stepper = ode::make_dense_output(tol_.abs, tol_.rel, ode::runge_kutta_dopri5<State>());
        try {
            ode::integrate_times(stepper, rhs, w, times.begin(), times.end(), 0.1 * x0_, observer,
                                 ode::max_step_checker(2000000));
        } catch (const std::exception& e) {
            throw NumericalError(std::string("eigenfn: ODE integration failed: ") + e.what());
        }
        if (bad_coefficient) throw NumericalError("eigenfn: non-finite A'/A encountered");
        for (double v : out)
            if (!std::isfinite(v)) throw NumericalError("eigenfn: non-finite character value");
        return out;
    }

    /// Frobenius polynomial (u, u') at x, valid for small x.
    std::array<double, 2> series(double mu, double x) const {
        const double alpha = model_.alpha();
        const double c2 = -mu / (4.0 * (alpha + 1.0));
        const double c4 = -c2 * (mu + 2.0 * model_.origin_slope()) / (8.0 * (alpha + 2.0));
        const double x2 = x * x;
        return {1.0 + c2 * x2 + c4 * x2 * x2, 2.0 * c2 * x + 4.0 * c4 * x2 * x};
    }

private:
    using State = std::array<double, 2>;
    HypergroupModel model_;
    double x0_;
    OdeTolerances tol_;
};

/// Normalised Bessel character 2^a Gamma(a+1) (lx)^{-a} J_a(lx) of the
/// Bessel-Kingman family with parameter a.
inline double hankel_oracle(double alpha, double lambda, double x) {
    const double z = std::abs(lambda * x);
    if (z < 1e-6) return 1.0 - z * z / (4.0 * (alpha + 1.0));
    return std::exp(alpha * std::log(2.0 / z) + std::lgamma(alpha + 1.0)) * std::cyl_bessel_j(alpha, z);
}

/// max over xs of |phi_lambda(x)| / ((1 + x) e^{-rho x}).
inline double exp_bound_check(const EigenfunctionEvaluator& ev, double lambda,
                              std::span<const double> xs) {
    const auto phi = ev.evaluate_grid(lambda, xs);
    const double rho = ev.model().rho();
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        worst = std::max(worst, std::abs(phi[i]) * std::exp(rho * xs[i]) / (1.0 + xs[i]));
    return worst;
}

} // namespace cth
