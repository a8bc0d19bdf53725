#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "quatgreen/ensemble.hpp"
#include "quatgreen/solver.hpp"

namespace quatgreen {

/// Node grid over [x0, x1] x [y0, y1] with endpoints included.
struct GridSpec {
    double x0 = -2.0;
    double x1 = 2.0;
    double y0 = -2.0;
    double y1 = 2.0;
    int nx = 101;
    int ny = 101;

    double dx() const { return (x1 - x0) / (nx - 1); }
    double dy() const { return (y1 - y0) / (ny - 1); }
    double x(int i) const { return x0 + i * dx(); }
    double y(int j) const { return y0 + j * dy(); }
};

/// Throws ConfigError for nx or ny < 8, empty or non-finite ranges.
void validate(const GridSpec& spec);

struct GridCell {
    double x = 0.0;  ///< evaluation point (jittered off singular lines)
    double y = 0.0;
    NonHoloSolution sol;
    /// Formal non-holomorphic continuation used for contouring and
    /// finite differences; NaN where no candidate with positive products exists.
    cplx formal_G{NonHoloSolution::kNaN, NonHoloSolution::kNaN};
    double formal_C = NonHoloSolution::kNaN;
    /// Finite-difference density of formal_G (NaN where formal_G is missing).
    double formal_rho = NonHoloSolution::kNaN;
    double rho = 0.0;  ///< formal_rho inside the domain, 0 elsewhere
};

struct SpectralGrid {
    GridSpec spec;
    std::vector<GridCell> cells;  ///< row-major, index j * nx + i
    double max_imag_rho = 0.0;    ///< max |Im| of the density stencil on interior cells
    std::vector<std::string> warnings;

    GridCell& at(int i, int j) { return cells[static_cast<std::size_t>(j) * spec.nx + i]; }
    const GridCell& at(int i, int j) const { return cells[static_cast<std::size_t>(j) * spec.nx + i]; }
};

struct GridOptions {
    int workers = 0;  ///< 0 = hardware concurrency
    bool holomorphic = true;
    /// Use the semicircle(1)-specialised solver for the non-holomorphic branch.
    bool gue_special = false;
};

int resolve_workers(int requested);

/// Runs fn(k) for k in [0, n) on `workers` threads (k-order independent).
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

/**
 * Pass 1 (parallel) records all admissible candidates per node; pass 2 picks
 * among several by continuity with already-selected neighbours; pass 3 fills
 * the holomorphic branch by flood fill from continuation seeds. Nodes on a
 * singular line are shifted by half a cell.
 */
SpectralGrid solve_grid(const EnsembleSpec& ens_h, const EnsembleSpec& ens_hp, const GridSpec& spec,
                        const GridOptions& opts = {});

/// rho = Re[(1/pi) * (1/2)(d/dx + i d/dy) G] by central differences of the
/// formal non-holomorphic G (one-sided at the grid edge or next to missing
/// nodes); 0 off the domain. With `richardson`, nodes whose +-2 stencil is
/// available use (4 D_h - D_2h) / 3 instead.
void density(SpectralGrid& grid, bool richardson = false);

struct DensitySummary {
    /// Cut-cell quadrature: squares crossed by the borderline are integrated
    /// on a sub-grid with bilinear C and formal density.
    double mass = 0.0;
    double mass_nodes = 0.0;  ///< plain node sum of rho * dx * dy
    double rho_min = 0.0;
    double rho_max = 0.0;
    int nonholomorphic_cells = 0;
    int outside_cells = 0;
    double max_imag_rho = 0.0;
};

DensitySummary summarize(const SpectralGrid& grid);

/// Columns x,y,re_g,im_g,c,rho,branch,m. `header`, when non-null, is written
/// first as a single '# ' comment line.
void write_csv(const SpectralGrid& grid, std::ostream& os, const nlohmann::json* header = nullptr);

}  // namespace quatgreen
