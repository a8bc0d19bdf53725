#pragma once

#include <vector>

#include <json.hpp>

#include "quatgreen/contour.hpp"
#include "quatgreen/ensemble.hpp"
#include "quatgreen/grid.hpp"

namespace quatgreen {

struct BorderlineCurve {
    std::vector<Polyline> curves;
    GridSpec grid;  ///< node grid the curves were traced on

    bool all_closed() const;
};

struct BorderlineOptions {
    int workers = 0;
    /// Bracket width (relative to the edge length) at which vertex refinement stops.
    double tol = 1e-12;
    /// Doublings of the automatic bounding box before giving up on closing.
    int max_expansions = 4;
};

/// Formal C field on the nodes of `spec` (NaN where no candidate exists).
NodeField formal_c_field(const EnsembleSpec& ens_h, const EnsembleSpec& ens_hp, const GridSpec& spec, int workers = 0);

/// Zero level set of C by marching squares; saddles are resolved with C at the
/// cell centre and crossings are refined on the formal C along each edge.
BorderlineCurve borderline(const EnsembleSpec& ens_h, const EnsembleSpec& ens_hp, const GridSpec& spec,
                           const BorderlineOptions& opts = {});

/// Bounding box from the Hermitian supports padded by 3.
GridSpec default_bbox(const EnsembleSpec& ens_h, const EnsembleSpec& ens_hp, int nx, int ny);

/// Starts from default_bbox and doubles it about its centre until every curve closes.
BorderlineCurve borderline_auto(const EnsembleSpec& ens_h, const EnsembleSpec& ens_hp, int nx, int ny,
                                const BorderlineOptions& opts = {});

/// {"curves": [{"closed": bool, "points": [[x, y], ...]}]}
nlohmann::json to_json(const BorderlineCurve& curve);

}  // namespace quatgreen
