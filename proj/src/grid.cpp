#include "quatgreen/grid.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <numbers>
#include <optional>
#include <ostream>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "quatgreen/errors.hpp"

namespace quatgreen {

namespace {

bool on_singular_line(const EnsembleSpec& ens_h, const EnsembleSpec& ens_hp, double x, double y) {
    try {
        shifted_blue_coeffs(ens_h, x);
        shifted_blue_coeffs(ens_hp, y);
        return false;
    } catch (const DegenerateError&) {
        return true;
    }
}

struct NodeWork {
    std::vector<NonHoloSolution> admissible;
    std::optional<NonHoloSolution> formal;
    bool failed = false;
};

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

void validate(const GridSpec& s) {
    if (s.nx < 8 || s.ny < 8) throw ConfigError(fmt::format("grid too coarse: {}x{} (minimum 8x8)", s.nx, s.ny));
    if (!std::isfinite(s.x0) || !std::isfinite(s.x1) || !std::isfinite(s.y0) || !std::isfinite(s.y1) ||
        !(s.x1 > s.x0) || !(s.y1 > s.y0)) {
        throw ConfigError(fmt::format("invalid bbox [{}, {}] x [{}, {}]", s.x0, s.x1, s.y0, s.y1));
    }
}

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
    workers = std::min(resolve_workers(workers), std::max(n, 1));
    if (workers <= 1) {
        for (int k = 0; k < n; ++k) fn(k);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex err_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int k = next++; k < n; k = next++) {
                try {
                    fn(k);
                } catch (...) {
                    std::lock_guard lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

SpectralGrid solve_grid(const EnsembleSpec& ens_h, const EnsembleSpec& ens_hp, const GridSpec& spec,
                        const GridOptions& opts) {
    validate(spec);
    SpectralGrid grid;
    grid.spec = spec;
    const int nx = spec.nx, ny = spec.ny;
    grid.cells.resize(static_cast<std::size_t>(nx) * ny);
    std::vector<NodeWork> work(grid.cells.size());

    // Pass 1: independent per-node candidates.
    parallel_for(ny, opts.workers, [&](int j) {
        for (int i = 0; i < nx; ++i) {
            GridCell& cell = grid.at(i, j);
            double x = spec.x(i), y = spec.y(j);
            if (on_singular_line(ens_h, ens_hp, x, y)) {
                if (on_singular_line(ens_h, ens_hp, x, y + 0.5 * spec.dy())) {
                    x += 0.5 * spec.dx();
                    if (on_singular_line(ens_h, ens_hp, x, y)) y += 0.5 * spec.dy();
                } else {
                    y += 0.5 * spec.dy();
                }
            }
            cell.x = x;
            cell.y = y;
            NodeWork& nw = work[static_cast<std::size_t>(j) * nx + i];
            try {
                auto cands = nonholo_candidates(ens_h, ens_hp, cplx(x, y));
                if (!cands.empty()) nw.formal = cands.front();
                if (opts.gue_special) {
                    auto s = solve_gue_special(ens_hp, cplx(x, y), SolveOptions{false});
                    if (s.branch == Branch::NonHolomorphic) nw.admissible.push_back(s);
                } else {
                    for (auto& c : cands)
                        if (c.branch == Branch::NonHolomorphic) nw.admissible.push_back(c);
                }
            } catch (const Error&) {
                nw.failed = true;
            }
        }
    });

    // Pass 2: continuity selection among several admissible candidates.
    int failed = 0;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            GridCell& cell = grid.at(i, j);
            NodeWork& nw = work[static_cast<std::size_t>(j) * nx + i];
            if (nw.failed) ++failed;
            if (!nw.admissible.empty()) {
                std::size_t pick = 0;
                if (nw.admissible.size() > 1) {
                    std::optional<cplx> ref;
                    if (i > 0 && grid.at(i - 1, j).sol.branch == Branch::NonHolomorphic) ref = grid.at(i - 1, j).sol.G;
                    else if (j > 0 && grid.at(i, j - 1).sol.branch == Branch::NonHolomorphic) ref = grid.at(i, j - 1).sol.G;
                    if (ref) {
                        double best = std::abs(nw.admissible[0].G - *ref);
                        for (std::size_t k = 1; k < nw.admissible.size(); ++k) {
                            const double d = std::abs(nw.admissible[k].G - *ref);
                            if (d < best) {
                                best = d;
                                pick = k;
                            }
                        }
                    }
                }
                cell.sol = nw.admissible[pick];
                if (!opts.gue_special) {
                    cell.formal_G = cell.sol.G;
                    cell.formal_C = cell.sol.C;
                } else if (nw.formal) {
                    cell.formal_G = nw.formal->G;
                    cell.formal_C = nw.formal->C;
                }
            } else {
                cell.sol = NonHoloSolution{};
                cell.sol.branch = Branch::Holomorphic;
                cell.sol.C = 0.0;
                if (nw.formal) {
                    cell.formal_G = nw.formal->G;
                    cell.formal_C = nw.formal->C;
                }
            }
        }
    }
    if (failed > 0) grid.warnings.push_back(fmt::format("{} nodes failed in the non-holomorphic solve", failed));

    // Pass 3: holomorphic branch by flood fill from continuation seeds.
    if (opts.holomorphic) {
        const HolomorphicSolver solver(ens_h, ens_hp);
        const EnsembleSpec gue = Semicircle{1.0};
        const HolomorphicSolver gue_solver(gue, ens_hp);
        const HolomorphicSolver& hs = opts.gue_special ? gue_solver : solver;
        std::vector<std::optional<HoloState>> state(grid.cells.size());
        std::vector<char> tried(grid.cells.size(), 0);
        auto idx = [nx](int i, int j) { return static_cast<std::size_t>(j) * nx + i; };
        int outside = 0;
        for (int j0 = 0; j0 < ny; ++j0) {
            for (int i0 = 0; i0 < nx; ++i0) {
                const std::size_t k0 = idx(i0, j0);
                if (grid.cells[k0].sol.branch != Branch::Holomorphic || state[k0] || tried[k0]) continue;
                tried[k0] = 1;
                try {
                    state[k0] = hs.solve(cplx(grid.cells[k0].x, grid.cells[k0].y));
                } catch (const Error&) {
                    continue;
                }
                std::deque<std::pair<int, int>> queue{{i0, j0}};
                while (!queue.empty()) {
                    const auto [i, j] = queue.front();
                    queue.pop_front();
                    const HoloState& st = *state[idx(i, j)];
                    const int di[4] = {1, -1, 0, 0};
                    const int dj[4] = {0, 0, 1, -1};
                    for (int d = 0; d < 4; ++d) {
                        const int ni = i + di[d], nj = j + dj[d];
                        if (ni < 0 || nj < 0 || ni >= nx || nj >= ny) continue;
                        const std::size_t nk = idx(ni, nj);
                        if (grid.cells[nk].sol.branch != Branch::Holomorphic || state[nk]) continue;
                        const cplx from(grid.cells[idx(i, j)].x, grid.cells[idx(i, j)].y);
                        const cplx to(grid.cells[nk].x, grid.cells[nk].y);
                        auto r = hs.refine(to, st);
                        if (!r) r = hs.continue_path(from, st, to, false);
                        if (r) {
                            state[nk] = r;
                            queue.emplace_back(ni, nj);
                        }
                    }
                }
            }
        }
        for (std::size_t k = 0; k < grid.cells.size(); ++k) {
            GridCell& cell = grid.cells[k];
            if (cell.sol.branch != Branch::Holomorphic) continue;
            if (state[k]) {
                cell.sol.G = state[k]->A;
            } else {
                cell.sol.branch = Branch::Outside;
                ++outside;
            }
        }
        if (outside > 0) grid.warnings.push_back(fmt::format("{} nodes have no holomorphic continuation", outside));
    }

    density(grid);
    return grid;
}

void density(SpectralGrid& grid, bool richardson) {
    validate(grid.spec);
    const int nx = grid.spec.nx, ny = grid.spec.ny;
    grid.max_imag_rho = 0.0;
    auto usable = [&](int i, int j) { return i >= 0 && j >= 0 && i < nx && j < ny && finite(grid.at(i, j).formal_G); };
    auto nonholo = [&](int i, int j) {
        return i >= 0 && j >= 0 && i < nx && j < ny && grid.at(i, j).sol.branch == Branch::NonHolomorphic;
    };
    auto diff = [&](int ia, int ja, int ib, int jb, bool along_x) -> cplx {
        const GridCell& a = grid.at(ia, ja);
        const GridCell& b = grid.at(ib, jb);
        const double h = along_x ? (b.x - a.x) : (b.y - a.y);
        return (b.formal_G - a.formal_G) / h;
    };
    // Derivative along (di, dj) at step k nodes; one-sided at edges or next to missing nodes.
    auto derivative = [&](int i, int j, int di, int dj, int k) -> cplx {
        const bool along_x = di != 0;
        const bool lo = usable(i - k * di, j - k * dj), hi = usable(i + k * di, j + k * dj);
        if (lo && hi) return diff(i - k * di, j - k * dj, i + k * di, j + k * dj, along_x);
        if (hi) return diff(i, j, i + k * di, j + k * dj, along_x);
        if (lo) return diff(i - k * di, j - k * dj, i, j, along_x);
        return 0.0;
    };
    auto central = [&](int i, int j, int di, int dj, int k) {
        return usable(i - k * di, j - k * dj) && usable(i + k * di, j + k * dj);
    };
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            GridCell& c = grid.at(i, j);
            c.rho = 0.0;
            c.formal_rho = NonHoloSolution::kNaN;
            if (!finite(c.formal_G)) continue;

            cplx gx = derivative(i, j, 1, 0, 1), gy = derivative(i, j, 0, 1, 1);
            if (richardson) {
                if (central(i, j, 1, 0, 1) && central(i, j, 1, 0, 2)) gx = (4.0 * gx - derivative(i, j, 1, 0, 2)) / 3.0;
                if (central(i, j, 0, 1, 1) && central(i, j, 0, 1, 2)) gy = (4.0 * gy - derivative(i, j, 0, 1, 2)) / 3.0;
            }

            const cplx val = (0.5 / std::numbers::pi) * (gx + cplx(0.0, 1.0) * gy);
            c.formal_rho = val.real();
            if (c.sol.branch != Branch::NonHolomorphic) continue;
            c.rho = val.real();
            if (nonholo(i - 1, j) && nonholo(i + 1, j) && nonholo(i, j - 1) && nonholo(i, j + 1)) {
                grid.max_imag_rho = std::max(grid.max_imag_rho, std::abs(val.imag()));
            }
        }
    }
    if (grid.max_imag_rho > 1e-6) {
        grid.warnings.push_back(fmt::format("density stencil imaginary part {:.3g} exceeds 1e-6", grid.max_imag_rho));
    }
}

namespace {

// Integral of rho over one grid square; squares cut by C = 0 use a sub-grid
// with bilinear C and formal density.
double square_mass(const SpectralGrid& grid, int i, int j) {
    const GridCell* corner[4] = {&grid.at(i, j), &grid.at(i + 1, j), &grid.at(i, j + 1), &grid.at(i + 1, j + 1)};
    double c[4], r[4];
    int inside = 0;
    for (int k = 0; k < 4; ++k) {
        const bool in = corner[k]->sol.branch == Branch::NonHolomorphic;
        inside += in ? 1 : 0;
        c[k] = std::isfinite(corner[k]->formal_C) ? corner[k]->formal_C : (in ? -1.0 : 1.0);
        r[k] = std::isfinite(corner[k]->formal_rho) ? corner[k]->formal_rho : corner[k]->rho;
    }
    const double area = grid.spec.dx() * grid.spec.dy();
    if (inside == 0) return 0.0;
    if (inside == 4) return 0.25 * (r[0] + r[1] + r[2] + r[3]) * area;
    constexpr int kSub = 16;
    double sum = 0.0;
    for (int b = 0; b < kSub; ++b) {
        const double v = (b + 0.5) / kSub;
        for (int a = 0; a < kSub; ++a) {
            const double u = (a + 0.5) / kSub;
            const double w[4] = {(1 - u) * (1 - v), u * (1 - v), (1 - u) * v, u * v};
            double cv = 0.0, rv = 0.0;
            for (int k = 0; k < 4; ++k) {
                cv += w[k] * c[k];
                rv += w[k] * r[k];
            }
            if (cv < 0.0) sum += rv;
        }
    }
    return sum * area / (kSub * kSub);
}

}  // namespace

DensitySummary summarize(const SpectralGrid& grid) {
    DensitySummary s;
    s.rho_min = std::numeric_limits<double>::infinity();
    s.rho_max = -std::numeric_limits<double>::infinity();
    const double area = grid.spec.dx() * grid.spec.dy();
    for (const auto& c : grid.cells) {
        s.mass_nodes += c.rho * area;
        s.rho_min = std::min(s.rho_min, c.rho);
        s.rho_max = std::max(s.rho_max, c.rho);
        if (c.sol.branch == Branch::NonHolomorphic) ++s.nonholomorphic_cells;
        if (c.sol.branch == Branch::Outside) ++s.outside_cells;
    }
    for (int j = 0; j + 1 < grid.spec.ny; ++j)
        for (int i = 0; i + 1 < grid.spec.nx; ++i) s.mass += square_mass(grid, i, j);
    s.max_imag_rho = grid.max_imag_rho;
    return s;
}

void write_csv(const SpectralGrid& grid, std::ostream& os, const nlohmann::json* header) {
    if (header) os << "# " << header->dump() << '\n';
    os << "x,y,re_g,im_g,c,rho,branch,m\n";
    for (const auto& c : grid.cells) {
        os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{:.17g}\n", c.x, c.y, c.sol.G.real(),
                          c.sol.G.imag(), c.sol.C, c.rho, branch_name(c.sol.branch), c.sol.m);
    }
}

}  // namespace quatgreen
