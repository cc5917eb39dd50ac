#include "opuc/linstat.hpp"

#include <cmath>

#include "opuc/quadrature.hpp"

namespace opuc {

namespace {
const cplx imag_unit(0.0, 1.0);
}

cplx mobius(cplx z) {
    if (z == -imag_unit) throw validation_error("mobius: pole at z = -i");
    return (imag_unit - z) / (imag_unit + z);
}

cplx mobius_inv(cplx w) {
    if (w == cplx(-1.0, 0.0)) throw validation_error("mobius_inv: pole at w = -1");
    return imag_unit * (1.0 - w) / (1.0 + w);
}

cplx ScaledStatistic::omega() const {
    return (1.0 - effective_eta() / std::pow(static_cast<double>(n), gamma)) * unit_circle(theta0);
}

void ScaledStatistic::validate() const {
    if (!(gamma > 0.0 && gamma < 1.0)) throw validation_error("statistic: gamma in (0,1) required");
    if (n < 1) throw validation_error("statistic: n >= 1 required");
    if (kind == Kind::poisson) {
        cplx e = effective_eta();
        if (!(e.real() > 0.0)) throw validation_error("poisson statistic: Re eta > 0 required");
        if (!(std::abs(1.0 - e / std::pow(static_cast<double>(n), gamma)) < 1.0))
            throw validation_error("poisson statistic: omega_n outside the disk; n below n_min(eta, gamma)");
    } else if (kind == Kind::line_function) {
        if (!g) throw validation_error("statistic: line function missing");
        for (double probe : {1e6, -1e6})
            if (!(std::abs(g(probe)) < 1e-3))
                throw validation_error("line statistic: g does not vanish at infinity");
    } else if (!f_angle) {
        throw validation_error("statistic: circle function missing");
    }
}

ScaledStatistic poisson_scaled(cplx eta, double gamma, double theta0, std::int64_t n) {
    ScaledStatistic s;
    s.kind = ScaledStatistic::Kind::poisson;
    s.eta = eta;
    s.gamma = gamma;
    s.theta0 = theta0;
    s.n = n;
    s.validate();
    return s;
}

ScaledStatistic line_scaled(std::function<cplx(double)> g, double gamma, double theta0,
                            std::int64_t n) {
    ScaledStatistic s;
    s.kind = ScaledStatistic::Kind::line_function;
    s.g = std::move(g);
    s.gamma = gamma;
    s.theta0 = theta0;
    s.n = n;
    s.validate();
    return s;
}

ScaledStatistic circle_scaled(std::function<cplx(double)> f_angle, double gamma, double theta0,
                              std::int64_t n) {
    ScaledStatistic s;
    s.kind = ScaledStatistic::Kind::circle_function;
    s.f_angle = std::move(f_angle);
    s.gamma = gamma;
    s.theta0 = theta0;
    s.n = n;
    s.validate();
    return s;
}

double poisson_statistic(const ScaledStatistic& s, double theta) {
    const double ng = std::pow(static_cast<double>(s.n), s.gamma);
    const cplx r = 1.0 - s.effective_eta() / ng;
    const cplx z = unit_circle(theta - s.theta0);
    return ((z + r) / (z - r)).real() / ng;
}

cplx rescaled_statistic(const ScaledStatistic& s, double theta) {
    const double ng = std::pow(static_cast<double>(s.n), s.gamma);
    const double half = 0.5 * (theta - s.theta0);
    const double c = std::cos(half);
    if (std::abs(c) < 1e-300) {
        // t - t0 = pi: the rescaled argument is at infinity, image -1
        if (s.kind == ScaledStatistic::Kind::circle_function) return s.f_angle(pi);
        return 0.0;
    }
    const double x = ng * std::tan(half);
    if (s.kind == ScaledStatistic::Kind::line_function) return s.g(x);
    cplx w = mobius(cplx(x, 0.0));
    return s.f_angle(std::atan2(w.imag(), w.real()));
}

cplx statistic_value(const ScaledStatistic& s, double theta) {
    if (s.kind == ScaledStatistic::Kind::poisson) return poisson_statistic(s, theta);
    return rescaled_statistic(s, theta);
}

double weighted_lipschitz_norm(const std::function<cplx(double)>& g, int grid) {
    for (double probe : {1e6, -1e6})
        if (!(std::abs(g(probe)) < 1e-3))
            throw validation_error("weighted_lipschitz_norm: g does not vanish at infinity");
    auto estimate = [&](int m) {
        // x = tan(t), t on a uniform open grid in (-pi/2, pi/2)
        std::vector<double> x(static_cast<std::size_t>(m)), w(static_cast<std::size_t>(m));
        std::vector<cplx> gv(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            double t = -0.5 * pi + pi * (i + 0.5) / m;
            x[static_cast<std::size_t>(i)] = std::tan(t);
            w[static_cast<std::size_t>(i)] = std::sqrt(1.0 + x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)]);
            gv[static_cast<std::size_t>(i)] = g(x[static_cast<std::size_t>(i)]);
        }
        double best = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) {
                double v = w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(j)] *
                           std::abs(gv[static_cast<std::size_t>(i)] - gv[static_cast<std::size_t>(j)]) /
                           std::abs(x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)]);
                best = std::max(best, v);
            }
        // diagonal limit: (1 + x^2) |g'(x)| by central differences
        for (int i = 0; i < m; ++i) {
            double xi = x[static_cast<std::size_t>(i)];
            double h = 1e-5 * (1.0 + std::abs(xi));
            double v = (1.0 + xi * xi) * std::abs(g(xi + h) - g(xi - h)) / (2.0 * h);
            best = std::max(best, v);
        }
        return best;
    };
    double prev = estimate(grid / 4 < 64 ? 64 : grid / 4);
    double cur = estimate(grid / 2 < 128 ? 128 : grid / 2);
    for (int m = grid;; m *= 2) {
        double next = estimate(m);
        if (next > 2.0 * prev && next > 2.0 * cur && next > 1e3)
            throw numeric_error("weighted_lipschitz_norm: estimate diverging; g not in L_omega");
        if (std::abs(next - cur) < 1e-4 * std::max(1.0, next)) return next;
        if (m > 64 * grid)
            throw numeric_error("weighted_lipschitz_norm: no convergence (last " +
                                std::to_string(cur) + ", " + std::to_string(next) + ")");
        prev = cur;
        cur = next;
    }
}

double sigma_f_squared(const std::function<double(double)>& g, int nodes) {
    auto value = [&](int m) {
        const GlRule& r = gl_rule(m);
        // x = tan(a), a in (-pi/2, pi/2); integrand ((g(x)-g(y))/(x-y))^2 sec^2 a sec^2 b
        std::vector<double> a(static_cast<std::size_t>(m)), x(static_cast<std::size_t>(m)),
            sec2(static_cast<std::size_t>(m)), gv(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            a[static_cast<std::size_t>(i)] = 0.5 * pi * r.x[static_cast<std::size_t>(i)];
            x[static_cast<std::size_t>(i)] = std::tan(a[static_cast<std::size_t>(i)]);
            double c = std::cos(a[static_cast<std::size_t>(i)]);
            sec2[static_cast<std::size_t>(i)] = 1.0 / (c * c);
            gv[static_cast<std::size_t>(i)] = g(x[static_cast<std::size_t>(i)]);
        }
        double total = 0.0;
        for (int i = 0; i < m; ++i) {
            double row = 0.0;
            for (int j = 0; j < m; ++j) {
                double q;
                double dx = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
                if (std::abs(dx) < 1e-9 * (1.0 + std::abs(x[static_cast<std::size_t>(i)]))) {
                    double h = 1e-6 * (1.0 + std::abs(x[static_cast<std::size_t>(i)]));
                    q = (g(x[static_cast<std::size_t>(i)] + h) - g(x[static_cast<std::size_t>(i)] - h)) / (2.0 * h);
                } else {
                    q = (gv[static_cast<std::size_t>(i)] - gv[static_cast<std::size_t>(j)]) / dx;
                }
                row += r.w[static_cast<std::size_t>(j)] * sec2[static_cast<std::size_t>(j)] * q * q;
            }
            total += r.w[static_cast<std::size_t>(i)] * sec2[static_cast<std::size_t>(i)] * row;
        }
        return total * (0.5 * pi) * (0.5 * pi) / (4.0 * pi * pi);
    };
    double v1 = value(nodes);
    double v2 = value(nodes + nodes / 2);
    if (std::abs(v2 - v1) > std::max(1e-7, 1e-6 * std::abs(v2)))
        throw numeric_error("sigma_f_squared: quadrature not converged (" + std::to_string(v1) +
                            ", " + std::to_string(v2) + ")");
    return v2;
}

}  // namespace opuc
