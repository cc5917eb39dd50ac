#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "opuc/common.hpp"
#include "opuc/quadrature.hpp"

namespace opuc {

/// Lazily evaluated Verblunsky coefficient sequence with catalog metadata.
/// Evaluators are pure functions of the index; all state is immutable after
/// construction (caches are internally synchronized).
struct VerblunskySequence {
    std::string kind;
    nlohmann::json params;
    std::function<cplx(std::int64_t)> eval;

    /// alpha_k; throws if k < 0 or the value leaves the open unit disk.
    cplx alpha(std::int64_t k) const;
    /// rho_k = sqrt(1 - |alpha_k|^2), in (0, 1].
    double rho(std::int64_t k) const;
};

struct Atom {
    double angle;
    double mass;
};

/// Probability measure on the circle: d(mu) = weight(theta) dtheta/(2 pi) on the
/// support arcs plus point masses. weight is already normalized.
struct CircleMeasure {
    std::string name;
    std::function<double(double)> weight;
    std::vector<ArcSpec> support;
    std::vector<Atom> atoms;
    double normalization = 1.0;  // factor applied to the raw density

    bool has_atoms() const { return !atoms.empty(); }
    bool full_circle_smooth() const;
    double density_mass(double rel_tol = 1e-11) const;  // integral of weight dtheta/2pi
    double total_mass(double rel_tol = 1e-11) const;
};

struct CatalogEntry {
    VerblunskySequence seq;
    std::optional<CircleMeasure> measure;
};

/// Catalog kinds: cue | geronimus | bernstein-szego | single-moment |
/// inserted-mass-point | hua-pickrell | perturbed | explicit-list.
CatalogEntry make_catalog(const std::string& kind, const nlohmann::json& params = {});
CatalogEntry make_catalog_spec(const nlohmann::json& spec);
/// Bare id or JSON object string.
CatalogEntry parse_measure_spec(const std::string& spec);

/// c_k = Int exp(-i k theta) d(mu), k = 0..K. c_0 must come out as 1.
std::vector<cplx> trig_moments(const CircleMeasure& mu, int K, double rel_tol = 1e-11);

/// Recover alpha_0..alpha_{K-1} from moments c_0..c_K (Szego/Levinson
/// recursion on the monic polynomials). Throws naming the failing order when
/// the moment matrix is not numerically positive definite.
std::vector<cplx> levinson(const std::vector<cplx>& moments, int K);

/// Monic Jacobi recurrence coefficients on [-2,2] for the Szego image of the
/// Hua-Pickrell measure: weight (2-x)^(delta-1/2) (2+x)^(-1/2).
struct JacobiCoefficients {
    double delta;
    double a(std::int64_t k) const;  // off-diagonal, k >= 1
    double b(std::int64_t k) const;  // diagonal, k >= 1
};
std::pair<double, double> jacobi_coefficients(double delta, std::int64_t k);

/// Real Verblunsky coefficients of the Hua-Pickrell measure via the u-recursion.
std::vector<double> hua_pickrell_alphas(double delta, std::int64_t count);

}  // namespace opuc
