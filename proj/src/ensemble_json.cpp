#include "quatgreen/ensemble_json.hpp"

#include <set>

#include <fmt/format.h>

#include "quatgreen/errors.hpp"

namespace quatgreen {

namespace {

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key)) throw ConfigError(fmt::format("{}: unknown field '{}'", where, key));
    }
}

double number(const nlohmann::json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(fmt::format("{}: missing field '{}'", where, key));
    if (!j.at(key).is_number()) throw ConfigError(fmt::format("{}: field '{}' must be a number", where, key));
    return j.at(key).get<double>();
}

}  // namespace

EnsembleSpec ensemble_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("ensemble must be a JSON object");
    if (!j.contains("kind") || !j.at("kind").is_string()) throw ConfigError("ensemble: missing string field 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    EnsembleSpec ens;
    if (kind == "semicircle") {
        reject_unknown(j, {"kind", "r"}, kind);
        ens = Semicircle{number(j, "r", kind)};
    } else if (kind == "wishart") {
        reject_unknown(j, {"kind", "c", "r"}, kind);
        ens = Wishart{number(j, "c", kind), number(j, "r", kind)};
    } else if (kind == "two_atoms") {
        reject_unknown(j, {"kind", "mu"}, kind);
        ens = TwoPoint{number(j, "mu", kind)};
    } else if (kind == "atoms") {
        reject_unknown(j, {"kind", "atoms"}, kind);
        if (!j.contains("atoms") || !j.at("atoms").is_array()) throw ConfigError("atoms: field 'atoms' must be an array");
        Atoms a;
        for (const auto& item : j.at("atoms")) {
            if (!item.is_object()) throw ConfigError("atoms: each atom must be an object");
            reject_unknown(item, {"lambda", "weight"}, "atom");
            a.atoms.push_back({number(item, "lambda", "atom"), number(item, "weight", "atom")});
        }
        ens = std::move(a);
    } else {
        throw ConfigError(fmt::format("unknown ensemble kind '{}'", kind));
    }
    validate(ens);
    return ens;
}

nlohmann::json ensemble_to_json(const EnsembleSpec& ens) {
    nlohmann::json j;
    j["kind"] = kind_name(ens);
    if (const auto* e = std::get_if<Semicircle>(&ens)) {
        j["r"] = e->r;
    } else if (const auto* e = std::get_if<Wishart>(&ens)) {
        j["c"] = e->c;
        j["r"] = e->r;
    } else if (const auto* e = std::get_if<TwoPoint>(&ens)) {
        j["mu"] = e->mu;
    } else if (const auto* e = std::get_if<Atoms>(&ens)) {
        j["atoms"] = nlohmann::json::array();
        for (const auto& at : e->atoms) j["atoms"].push_back({{"lambda", at.lambda}, {"weight", at.weight}});
    }
    return j;
}

}  // namespace quatgreen
