#pragma once

#include <cstdint>
#include <functional>

#include "opuc/common.hpp"

namespace opuc {

/// M(z) = (i - z)/(i + z), upper half plane onto the closed disk.
cplx mobius(cplx z);
/// M^{-1}(w) = i (1 - w)/(1 + w); on the circle M^{-1}(e^{i t}) = tan(t/2).
cplx mobius_inv(cplx w);

/// Mesoscopically rescaled test function centered at theta0 with scale
/// exponent gamma in (0,1).
struct ScaledStatistic {
    enum class Kind { poisson, line_function, circle_function };
    Kind kind = Kind::poisson;

    cplx eta;                                      // poisson: Re eta > 0
    std::function<cplx(double)> g;                 // line function, vanishing at infinity
    std::function<cplx(double)> f_angle;           // circle function of the angle in (-pi, pi)
    std::function<cplx(std::int64_t)> eta_of_n;    // optional n-dependent eta

    double gamma = 0.5;
    double theta0 = 0.0;
    std::int64_t n = 1;

    cplx effective_eta() const { return eta_of_n ? eta_of_n(n) : eta; }
    /// omega_n = (1 - eta/n^gamma) e^{i theta0}, strictly inside the disk.
    cplx omega() const;

    void validate() const;
};

ScaledStatistic poisson_scaled(cplx eta, double gamma, double theta0, std::int64_t n);
ScaledStatistic line_scaled(std::function<cplx(double)> g, double gamma, double theta0, std::int64_t n);
ScaledStatistic circle_scaled(std::function<cplx(double)> f_angle, double gamma, double theta0,
                              std::int64_t n);

/// Poisson kernel statistic
/// (1/n^gamma) Re[(e^{i(t-t0)} + (1-eta/n^gamma)) / (e^{i(t-t0)} - (1-eta/n^gamma))].
double poisson_statistic(const ScaledStatistic& s, double theta);

/// Rescaled line/circle statistic g(n^gamma tan((t-t0)/2)); for circle f,
/// g = f o M. Returns f(-1-image) = g(inf) = 0 at t - t0 = pi.
cplx rescaled_statistic(const ScaledStatistic& s, double theta);

/// Evaluate any kind as a complex value.
cplx statistic_value(const ScaledStatistic& s, double theta);

/// Weighted Lipschitz norm sup sqrt(1+x^2) sqrt(1+y^2) |g(x)-g(y)| / |x-y|,
/// approximated on a tan-substituted grid plus a diagonal derivative scan,
/// refined until the change drops below 1e-4.
double weighted_lipschitz_norm(const std::function<cplx(double)>& g, int grid = 4097);

/// Limiting CLT variance sigma_f^2 = (1/4 pi^2) Int ((g(x)-g(y))/(x-y))^2 dx dy
/// for real g = f o M, by tan-substituted tensor Gauss-Legendre.
double sigma_f_squared(const std::function<double(double)>& g, int nodes = 400);

}  // namespace opuc
