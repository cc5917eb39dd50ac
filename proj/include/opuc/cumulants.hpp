#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "opuc/linalg.hpp"
#include "opuc/linstat.hpp"
#include "opuc/measures.hpp"
#include "opuc/operators.hpp"

namespace opuc {

struct CumulantReport {
    int order = 0;
    double value = 0.0;
    std::string method;      // trace | mgf | mc | quadrature
    std::string resolution;  // truncation / grid / sample count
    double error_estimate = 0.0;
    std::optional<double> theory;
};

enum class Basis { ggt, cmv };

/// Truncation buffer for mesoscopic statistics: entries of the Cayley
/// transform decay on the scale n^gamma, so the cut at N = n + buffer
/// perturbs restricted traces by an exponentially small amount.
int default_buffer(std::int64_t n, double gamma, double eta_re);

/// (1/n^gamma) Re (M + omega)(M - omega)^{-1} for M the GGT or CMV truncation
/// of size N; omega = (1 - eta/n^gamma) e^{i theta0}.
CMatrix poisson_statistic_operator(const VerblunskySequence& seq, Basis basis, int N,
                                   const ScaledStatistic& stat);

/// Classical cumulant kappa_m of the linear statistic with one-particle
/// operator A (N x N, N > n) by the restricted-trace composition formula.
/// kappa_1 = Tr P A, kappa_2 = Tr(P A Q A P).
CumulantReport cumulant_trace(const CMatrix& a, int n, int m);
CumulantReport cumulant_trace(const OperatorTruncation& a, int n, int m);

/// The t^m-coefficient convention (kappa_m / m!), the form the composition
/// sum produces before rescaling.
double cumulant_trace_tk(const CMatrix& a, int n, int m);

/// Cumulants from the finite determinant generating function
/// det(I + P(e^{tA} - I)P) e^{-t Tr P A}, by central differences with one
/// Richardson extrapolation; orders <= 4.
std::vector<CumulantReport> cumulant_mgf(const CMatrix& a, int n, const std::vector<int>& orders,
                                         double t_base = 0.02);

/// Unbiased k-statistics k_1..k_max with jackknife standard errors.
std::vector<CumulantReport> kstatistics(const std::vector<double>& xs, int max_order);

using statistic_fn = std::function<cplx(double)>;

struct QuadOptions {
    double stat_freq_hint = 64.0;  // Fourier content of the statistic
    double tol = 1e-7;
    int max_refinements = 3;
    double growth = 1.25;  // node growth per refinement
};

/// Var X_f = (1/2) Int Int |f(t) - f(s)|^2 |K_n(t,s)|^2 d(mu) d(mu) by tensor
/// quadrature with the CD-form kernel; atoms enter as exact point cells.
CumulantReport variance_quadrature(const CircleMeasure& mu, const VerblunskySequence& seq,
                                   std::int64_t n, const statistic_fn& f,
                                   const QuadOptions& opts = {});

struct PointSample;  // sampler.hpp

/// Per-sample linear statistics X = sum_i f(theta_i), then k-statistics.
std::vector<CumulantReport> mc_cumulants(const std::vector<PointSample>& samples,
                                         const std::function<double(double)>& f,
                                         const std::vector<int>& orders);

}  // namespace opuc
