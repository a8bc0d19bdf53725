// quatgreen: spectral densities, borderlines and Monte Carlo checks for X = H + iH'.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "quatgreen/acceptance.hpp"
#include "quatgreen/borderline.hpp"
#include "quatgreen/errors.hpp"
#include "quatgreen/grid.hpp"
#include "quatgreen/mc_oracle.hpp"
#include "quatgreen/run_config.hpp"

using namespace quatgreen;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitSelftest = 3;

struct Flags {
    std::string config;
    std::optional<std::string> out, bbox, grid;
    std::optional<std::uint64_t> seed;
    std::optional<int> n, samples, workers;
    std::optional<double> tol;
    bool gue_special = false;
    bool no_holomorphic = false;
    bool richardson = false;
    std::vector<int> criteria;
};

void add_flags(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "JSON config file (flags override its fields)");
    sub->add_option("--out", f.out, "output path");
    sub->add_option("--bbox", f.bbox, "x0,x1,y0,y1");
    sub->add_option("--grid", f.grid, "NX,NY");
    sub->add_option("--seed", f.seed, "RNG seed");
    sub->add_option("--n", f.n, "matrix size");
    sub->add_option("--samples", f.samples, "number of sampled matrices");
    sub->add_option("--workers", f.workers, "worker threads (0 = all cores)");
    sub->add_option("--tol", f.tol, "borderline vertex bracket tolerance");
    sub->add_flag("--gue-special", f.gue_special, "semicircle(1)-specialised solver for H");
    sub->add_flag("--no-holomorphic", f.no_holomorphic, "skip the holomorphic branch");
    sub->add_flag("--richardson", f.richardson, "Richardson-extrapolated density stencil");
    sub->add_option("--criterion", f.criteria, "selftest criterion id (repeatable)");
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path));
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("config '{}' is not valid JSON: {}", path, e.what()));
    }
}

RunConfig resolve(Command cmd, const Flags& f) {
    RunConfig cfg;
    cfg.command = cmd;
    if (!f.config.empty()) cfg = merge_config_json(cfg, read_json_file(f.config));
    if (f.out) cfg.out = *f.out;
    if (f.bbox) cfg.bbox = parse_bbox(*f.bbox);
    if (f.grid) std::tie(cfg.nx, cfg.ny) = parse_grid(*f.grid);
    if (f.seed) cfg.seed = *f.seed;
    if (f.n) cfg.n = *f.n;
    if (f.samples) cfg.n_samples = *f.samples;
    if (f.workers) cfg.workers = *f.workers;
    if (f.tol) cfg.tol = *f.tol;
    if (f.gue_special) cfg.gue_special = true;
    if (f.no_holomorphic) cfg.holomorphic = false;
    if (f.richardson) cfg.richardson = true;
    if (!f.criteria.empty()) cfg.criteria = f.criteria;
    validate(cfg);
    return cfg;
}

std::string output_path(const RunConfig& cfg, const char* fallback) { return cfg.out.empty() ? fallback : cfg.out; }

json provenance(const RunConfig& cfg) { return {{"version", kToolVersion}, {"config", to_json(cfg)}}; }

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError(fmt::format("cannot write '{}'", path));
    return os;
}

void write_json(const std::string& path, const json& j) {
    auto os = open_out(path);
    os << j.dump(2) << '\n';
}

GridSpec grid_for(const RunConfig& cfg, const BorderlineOptions& bo) {
    if (cfg.bbox) {
        const auto& b = *cfg.bbox;
        GridSpec spec{b[0], b[1], b[2], b[3], cfg.nx, cfg.ny};
        validate(spec);
        return spec;
    }
    return borderline_auto(cfg.ens_h, cfg.ens_hp, cfg.nx, cfg.ny, bo).grid;
}

BorderlineOptions borderline_options(const RunConfig& cfg) {
    BorderlineOptions bo;
    bo.workers = cfg.workers;
    bo.tol = cfg.tol;
    return bo;
}

void warn(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << json{{"warning", w}}.dump() << '\n';
}

int run_density(const RunConfig& cfg) {
    const auto spec = grid_for(cfg, borderline_options(cfg));
    auto grid = solve_grid(cfg.ens_h, cfg.ens_hp, spec, {cfg.workers, cfg.holomorphic, cfg.gue_special});
    if (cfg.richardson) density(grid, true);
    const auto path = output_path(cfg, "density.csv");
    json header = provenance(cfg);
    header["grid"] = {spec.x0, spec.x1, spec.y0, spec.y1, spec.nx, spec.ny};
    {
        auto os = open_out(path);
        write_csv(grid, os, &header);
    }
    const auto s = summarize(grid);
    json summary = provenance(cfg);
    summary["grid"] = header["grid"];
    summary["csv"] = path;
    summary["mass"] = s.mass;
    summary["mass_nodes"] = s.mass_nodes;
    summary["rho_min"] = s.rho_min;
    summary["rho_max"] = s.rho_max;
    summary["nonholomorphic_cells"] = s.nonholomorphic_cells;
    summary["outside_cells"] = s.outside_cells;
    summary["max_imag_rho"] = s.max_imag_rho;
    summary["warnings"] = grid.warnings;
    write_json(path + ".summary.json", summary);
    warn(grid.warnings);
    return 0;
}

int run_borderline(const RunConfig& cfg) {
    const auto bo = borderline_options(cfg);
    BorderlineCurve bl;
    if (cfg.bbox) {
        bl = borderline(cfg.ens_h, cfg.ens_hp, grid_for(cfg, bo), bo);
    } else {
        bl = borderline_auto(cfg.ens_h, cfg.ens_hp, cfg.nx, cfg.ny, bo);
    }
    json j = to_json(bl);
    j.update(provenance(cfg));
    j["grid"] = {bl.grid.x0, bl.grid.x1, bl.grid.y0, bl.grid.y1, bl.grid.nx, bl.grid.ny};
    write_json(output_path(cfg, "borderline.json"), j);
    if (!bl.all_closed()) warn({"some borderline curves do not close inside the box"});
    return 0;
}

int run_holo(const RunConfig& cfg) {
    const auto spec = grid_for(cfg, borderline_options(cfg));
    const auto grid = solve_grid(cfg.ens_h, cfg.ens_hp, spec, {cfg.workers, true, cfg.gue_special});
    auto os = open_out(output_path(cfg, "holo.csv"));
    json header = provenance(cfg);
    header["grid"] = {spec.x0, spec.x1, spec.y0, spec.y1, spec.nx, spec.ny};
    os << "# " << header.dump() << '\n';
    os << "x,y,re_g,im_g,branch\n";
    for (const auto& c : grid.cells) {
        const bool holo = c.sol.branch == Branch::Holomorphic;
        const double nan = NonHoloSolution::kNaN;
        os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{}\n", c.x, c.y, holo ? c.sol.G.real() : nan,
                          holo ? c.sol.G.imag() : nan, branch_name(c.sol.branch));
    }
    warn(grid.warnings);
    return 0;
}

int run_mc_verify(const RunConfig& cfg) {
    const auto bo = borderline_options(cfg);
    const auto spec = grid_for(cfg, bo);
    auto grid = solve_grid(cfg.ens_h, cfg.ens_hp, spec, {cfg.workers, false, cfg.gue_special});
    const GridSpec fine{spec.x0, spec.x1, spec.y0, spec.y1, 2 * spec.nx - 1, 2 * spec.ny - 1};
    const auto bl = borderline(cfg.ens_h, cfg.ens_hp, fine, bo);
    McOptions mo;
    mo.workers = cfg.workers;
    const auto rep = run_comparison(SampleConfig{cfg.n, cfg.n_samples, cfg.seed, cfg.ens_h, cfg.ens_hp}, grid, bl, mo);
    json j = to_json(rep);
    j.update(provenance(cfg));
    j["grid"] = {spec.x0, spec.x1, spec.y0, spec.y1, spec.nx, spec.ny};
    write_json(output_path(cfg, "mc_report.json"), j);
    warn(rep.warnings);
    return 0;
}

int run_selftest(const RunConfig& cfg) {
    AcceptanceOptions ao;
    ao.workers = cfg.workers == 0 ? 1 : cfg.workers;
    ao.seed = cfg.seed == 1 ? ao.seed : cfg.seed;
    std::vector<CriterionResult> results;
    bool ok = true;
    std::vector<int> ids = cfg.criteria;
    if (ids.empty())
        for (int k = 1; k <= kCriteriaCount; ++k) ids.push_back(k);
    for (int id : ids) {
        results.push_back(run_criterion(id, ao));
        std::cout << format_line(results.back()) << std::endl;
        ok = ok && results.back().pass;
    }
    if (!cfg.out.empty()) {
        json j = provenance(cfg);
        j["criteria"] = to_json(results);
        j["all_pass"] = ok;
        write_json(cfg.out, j);
    }
    return ok ? 0 : kExitSelftest;
}

int fail(int code, const std::string& kind, const std::string& message) {
    std::cerr << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Eigenvalue densities of X = H + iH' from the quaternionic addition law"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);
    Flags flags;
    const std::pair<const char*, const char*> subs[] = {
        {"density", "density grid (CSV) and summary JSON"},
        {"borderline", "borderline curves (JSON)"},
        {"holo", "holomorphic Green's function on a grid (CSV)"},
        {"mc-verify", "Monte Carlo comparison report (JSON)"},
        {"selftest", "acceptance suite; exit 0 iff all criteria pass"}};
    for (const auto& [name, help] : subs) add_flags(app.add_subcommand(name, help), flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(kExitConfig, "config", e.what());
    }

    try {
        const Command cmd = command_from_name(app.get_subcommands().front()->get_name());
        const RunConfig cfg = resolve(cmd, flags);
        switch (cmd) {
            case Command::Density: return run_density(cfg);
            case Command::Borderline: return run_borderline(cfg);
            case Command::Holo: return run_holo(cfg);
            case Command::McVerify: return run_mc_verify(cfg);
            case Command::Selftest: return run_selftest(cfg);
        }
    } catch (const ConfigError& e) {
        return fail(kExitConfig, e.kind(), e.what());
    } catch (const Error& e) {
        return fail(kExitNumerical, e.kind(), e.what());
    } catch (const std::exception& e) {
        return fail(kExitNumerical, "internal", e.what());
    }
    return 0;
}
