#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "opuc/common.hpp"

namespace opuc {

inline constexpr int schema_version = 1;
inline constexpr const char* software_version = "opuc-meso 0.1.0";

/// Serializable experiment description; round-trips through JSON unchanged.
struct ExperimentConfig {
    nlohmann::json measure;            // catalog spec
    nlohmann::json measure0;           // comparison measure (universality mode)
    nlohmann::json statistic;          // statistic spec
    std::vector<std::int64_t> n_grid;
    double gamma = 0.5;
    double theta0 = 0.0;
    cplx eta{1.0, 0.0};
    std::uint64_t seed = 0;
    std::int64_t count = 0;
    std::string mode;                  // sweep: clt | universality
    std::string out;
    int grid = 0;
    int workers = 0;
    double tol = 0.0;

    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
};

cplx parse_complex(const std::string& s);
std::string format_complex(cplx z);
std::uint64_t config_hash(const nlohmann::json& j);

/// CLI driver; exit 0 on success, 2 on validation/usage errors, 3 on
/// numerical degeneracy.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace opuc
