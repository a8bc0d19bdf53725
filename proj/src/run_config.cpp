#include "quatgreen/run_config.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "quatgreen/ensemble_json.hpp"
#include "quatgreen/errors.hpp"
#include "quatgreen/mc_oracle.hpp"

namespace quatgreen {

namespace {

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    if (!text.empty() && text.back() == ',') parts.emplace_back();
    return parts;
}

// Locale-independent full-string parse.
template <class T>
T parse_number(const std::string& s, const char* what) {
    T v{};
    const char* b = s.data();
    const char* e = s.data() + s.size();
    while (b < e && *b == ' ') ++b;
    while (e > b && e[-1] == ' ') --e;
    const auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e || b == e) throw ConfigError(fmt::format("cannot parse {} from '{}'", what, s));
    return v;
}

template <class T>
T get_as(const nlohmann::json& j, const char* key) {
    try {
        return j.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(fmt::format("config field '{}' has the wrong type", key));
    }
}

// Integers must be JSON integers: 10.5 or -1 for a seed are errors, not truncations.
long long get_integer(const nlohmann::json& j, const char* key, long long lo, long long hi) {
    if (!j.is_number_integer()) throw ConfigError(fmt::format("config field '{}' must be an integer", key));
    if (j.is_number_unsigned() ? j.get<std::uint64_t>() > static_cast<std::uint64_t>(hi) : j.get<long long>() < lo ||
                                                                                            j.get<long long>() > hi)
        throw ConfigError(fmt::format("config field '{}' is out of range", key));
    return j.is_number_unsigned() ? static_cast<long long>(j.get<std::uint64_t>()) : j.get<long long>();
}

int get_int(const nlohmann::json& j, const char* key) {
    return static_cast<int>(get_integer(j, key, std::numeric_limits<int>::min(), std::numeric_limits<int>::max()));
}

}  // namespace

std::string command_name(Command c) {
    switch (c) {
        case Command::Density: return "density";
        case Command::Borderline: return "borderline";
        case Command::Holo: return "holo";
        case Command::McVerify: return "mc-verify";
        case Command::Selftest: return "selftest";
    }
    return "unknown";
}

Command command_from_name(const std::string& name) {
    for (Command c : {Command::Density, Command::Borderline, Command::Holo, Command::McVerify, Command::Selftest})
        if (command_name(c) == name) return c;
    throw ConfigError(fmt::format("unknown command '{}'", name));
}

RunConfig merge_config_json(RunConfig cfg, const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    static const std::set<std::string> known = {"ensemble_h", "ensemble_hp", "bbox",    "grid",
                                                "out",        "seed",        "n",       "samples",
                                                "workers",    "tol",         "gue_special", "holomorphic",
                                                "richardson", "criteria"};
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) throw ConfigError(fmt::format("unknown config field '{}'", key));

    if (j.contains("ensemble_h")) cfg.ens_h = ensemble_from_json(j["ensemble_h"]);
    if (j.contains("ensemble_hp")) cfg.ens_hp = ensemble_from_json(j["ensemble_hp"]);
    if (j.contains("bbox") && j["bbox"].is_null()) {
        cfg.bbox.reset();
    } else if (j.contains("bbox")) {
        const auto v = get_as<std::vector<double>>(j["bbox"], "bbox");
        if (v.size() != 4) throw ConfigError("bbox needs four numbers [x0, x1, y0, y1]");
        cfg.bbox = std::array<double, 4>{v[0], v[1], v[2], v[3]};
    }
    if (j.contains("grid")) {
        if (!j["grid"].is_array() || j["grid"].size() != 2) throw ConfigError("grid needs two integers [nx, ny]");
        cfg.nx = get_int(j["grid"][0], "grid");
        cfg.ny = get_int(j["grid"][1], "grid");
    }
    if (j.contains("out")) cfg.out = get_as<std::string>(j["out"], "out");
    if (j.contains("seed")) {
        const auto& s = j["seed"];
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
            throw ConfigError("config field 'seed' must be a non-negative integer");
        cfg.seed = s.get<std::uint64_t>();
    }
    if (j.contains("n")) cfg.n = get_int(j["n"], "n");
    if (j.contains("samples")) cfg.n_samples = get_int(j["samples"], "samples");
    if (j.contains("workers")) cfg.workers = get_int(j["workers"], "workers");
    if (j.contains("tol")) cfg.tol = get_as<double>(j["tol"], "tol");
    if (j.contains("gue_special")) cfg.gue_special = get_as<bool>(j["gue_special"], "gue_special");
    if (j.contains("holomorphic")) cfg.holomorphic = get_as<bool>(j["holomorphic"], "holomorphic");
    if (j.contains("richardson")) cfg.richardson = get_as<bool>(j["richardson"], "richardson");
    if (j.contains("criteria")) {
        if (!j["criteria"].is_array()) throw ConfigError("criteria must be an array of integers");
        cfg.criteria.clear();
        for (const auto& c : j["criteria"]) cfg.criteria.push_back(get_int(c, "criteria"));
    }
    return cfg;
}

void validate(const RunConfig& cfg) {
    validate(cfg.ens_h);
    validate(cfg.ens_hp);
    if (cfg.bbox) {
        const auto& b = *cfg.bbox;
        for (double v : b)
            if (!std::isfinite(v)) throw ConfigError("bbox entries must be finite");
        if (!(b[0] < b[1]) || !(b[2] < b[3])) throw ConfigError("bbox needs x0 < x1 and y0 < y1");
    }
    if (cfg.nx < 8 || cfg.ny < 8) throw ConfigError(fmt::format("grid must be at least 8x8, got {}x{}", cfg.nx, cfg.ny));
    if (cfg.workers < 0) throw ConfigError("workers must be >= 0");
    if (!(cfg.tol > 0.0 && cfg.tol < 1.0)) throw ConfigError("tol must lie in (0, 1)");
    if (cfg.gue_special && !(std::holds_alternative<Semicircle>(cfg.ens_h) && std::get<Semicircle>(cfg.ens_h).r == 1.0))
        throw ConfigError("gue_special needs ensemble_h = semicircle with r = 1");
    if (cfg.command == Command::McVerify) validate(SampleConfig{cfg.n, cfg.n_samples, cfg.seed, cfg.ens_h, cfg.ens_hp});
    for (int id : cfg.criteria)
        if (id < 1 || id > 10) throw ConfigError(fmt::format("no acceptance criterion {}", id));
}

nlohmann::json to_json(const RunConfig& cfg) {
    nlohmann::json j = {{"command", command_name(cfg.command)},
                        {"ensemble_h", ensemble_to_json(cfg.ens_h)},
                        {"ensemble_hp", ensemble_to_json(cfg.ens_hp)},
                        {"grid", {cfg.nx, cfg.ny}},
                        {"out", cfg.out},
                        {"seed", cfg.seed},
                        {"n", cfg.n},
                        {"samples", cfg.n_samples},
                        {"workers", cfg.workers},
                        {"tol", cfg.tol},
                        {"gue_special", cfg.gue_special},
                        {"holomorphic", cfg.holomorphic},
                        {"richardson", cfg.richardson},
                        {"criteria", cfg.criteria}};
    j["bbox"] = cfg.bbox ? nlohmann::json(*cfg.bbox) : nlohmann::json(nullptr);
    return j;
}

std::array<double, 4> parse_bbox(const std::string& text) {
    const auto parts = split_commas(text);
    if (parts.size() != 4) throw ConfigError(fmt::format("--bbox expects x0,x1,y0,y1, got '{}'", text));
    std::array<double, 4> b{};
    for (int k = 0; k < 4; ++k) b[k] = parse_number<double>(parts[k], "bbox");
    return b;
}

std::pair<int, int> parse_grid(const std::string& text) {
    const auto parts = split_commas(text);
    if (parts.size() != 2) throw ConfigError(fmt::format("--grid expects NX,NY, got '{}'", text));
    return {parse_number<int>(parts[0], "grid"), parse_number<int>(parts[1], "grid")};
}

}  // namespace quatgreen
