#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "quatgreen/ensemble.hpp"

namespace quatgreen {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Command { Density, Borderline, Holo, McVerify, Selftest };

std::string command_name(Command c);
/// Throws ConfigError for unknown names.
Command command_from_name(const std::string& name);

struct RunConfig {
    Command command = Command::Density;
    EnsembleSpec ens_h = Semicircle{1.0};
    EnsembleSpec ens_hp = Semicircle{1.0};
    /// x0, x1, y0, y1; absent means the automatic box.
    std::optional<std::array<double, 4>> bbox;
    int nx = 101;
    int ny = 101;
    std::string out;
    std::uint64_t seed = 1;
    int n = 256;
    int n_samples = 1;
    int workers = 0;
    double tol = 1e-12;  ///< borderline vertex bracket tolerance
    bool gue_special = false;
    bool holomorphic = true;
    bool richardson = false;  ///< (4 D_h - D_2h) / 3 density stencil
    std::vector<int> criteria;  ///< selftest subset; empty = all
};

/**
 * Overlays the keys of `j` on `base`. Accepted keys: ensemble_h, ensemble_hp,
 * bbox, grid ([nx, ny]), out, seed, n, samples, workers, tol, gue_special,
 * holomorphic, richardson, criteria. Anything else throws ConfigError.
 */
RunConfig merge_config_json(RunConfig base, const nlohmann::json& j);

/// Parse-time checks shared by every command (sizes, ranges, ensembles).
void validate(const RunConfig& cfg);

nlohmann::json to_json(const RunConfig& cfg);

/// "x0,x1,y0,y1"
std::array<double, 4> parse_bbox(const std::string& text);
/// "NX,NY"
std::pair<int, int> parse_grid(const std::string& text);

}  // namespace quatgreen
