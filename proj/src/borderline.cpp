#include "quatgreen/borderline.hpp"

#include <cmath>
#include <cstdint>

#include <boost/math/tools/toms748_solve.hpp>

#include "quatgreen/errors.hpp"
#include "quatgreen/solver.hpp"

namespace quatgreen {

namespace {

double formal_c(const EnsembleSpec& ens_h, const EnsembleSpec& ens_hp, double x, double y) {
    try {
        const auto s = formal_solution(ens_h, ens_hp, cplx(x, y));
        return s ? s->C : NonHoloSolution::kNaN;
    } catch (const Error&) {
        return NonHoloSolution::kNaN;
    }
}

}  // namespace

bool BorderlineCurve::all_closed() const {
    for (const auto& c : curves)
        if (!c.closed) return false;
    return true;
}

NodeField formal_c_field(const EnsembleSpec& ens_h, const EnsembleSpec& ens_hp, const GridSpec& spec, int workers) {
    validate(spec);
    NodeField f;
    for (int i = 0; i < spec.nx; ++i) f.xs.push_back(spec.x(i));
    for (int j = 0; j < spec.ny; ++j) f.ys.push_back(spec.y(j));
    f.values.assign(static_cast<std::size_t>(spec.nx) * spec.ny, 0.0);
    parallel_for(spec.ny, workers, [&](int j) {
        for (int i = 0; i < spec.nx; ++i)
            f.values[static_cast<std::size_t>(j) * spec.nx + i] = formal_c(ens_h, ens_hp, f.xs[i], f.ys[j]);
    });
    return f;
}

BorderlineCurve borderline(const EnsembleSpec& ens_h, const EnsembleSpec& ens_hp, const GridSpec& spec,
                           const BorderlineOptions& opts) {
    const NodeField field = formal_c_field(ens_h, ens_hp, spec, opts.workers);

    ContourOptions co;
    co.centre_value = [&](double x, double y) { return formal_c(ens_h, ens_hp, x, y); };
    co.refine = [&](const Point2& a, const Point2& b, double va, double vb) -> Point2 {
        auto at = [&](double t) { return Point2{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])}; };
        auto f = [&](double t) {
            const Point2 p = at(t);
            return formal_c(ens_h, ens_hp, p[0], p[1]);
        };
        if (std::isfinite(va) && std::isfinite(vb) && (va < 0.0) != (vb < 0.0) && va != 0.0 && vb != 0.0) {
            try {
                std::uintmax_t iters = 100;
                const double tol = opts.tol;
                auto stop = [tol](double lo, double hi) { return std::abs(hi - lo) <= tol; };
                const auto r = boost::math::tools::toms748_solve(f, 0.0, 1.0, va, vb, stop, iters);
                return at(0.5 * (r.first + r.second));
            } catch (const std::exception&) {
                // fall through to bisection on the sign
            }
        }
        double lo = 0.0, hi = 1.0;
        const bool lo_in = va < 0.0;
        for (int it = 0; it < 60 && hi - lo > opts.tol; ++it) {
            const double mid = 0.5 * (lo + hi);
            if ((f(mid) < 0.0) == lo_in) lo = mid;
            else hi = mid;
        }
        return at(0.5 * (lo + hi));
    };

    BorderlineCurve out;
    out.grid = spec;
    out.curves = marching_squares(field, co);
    return out;
}

GridSpec default_bbox(const EnsembleSpec& ens_h, const EnsembleSpec& ens_hp, int nx, int ny) {
    const Interval sh = support(ens_h);
    const Interval shp = support(ens_hp);
    return GridSpec{sh.lo - 3.0, sh.hi + 3.0, shp.lo - 3.0, shp.hi + 3.0, nx, ny};
}

BorderlineCurve borderline_auto(const EnsembleSpec& ens_h, const EnsembleSpec& ens_hp, int nx, int ny,
                                const BorderlineOptions& opts) {
    GridSpec spec = default_bbox(ens_h, ens_hp, nx, ny);
    BorderlineCurve curve = borderline(ens_h, ens_hp, spec, opts);
    for (int k = 0; k < opts.max_expansions && !curve.all_closed(); ++k) {
        const double cx = 0.5 * (spec.x0 + spec.x1), cy = 0.5 * (spec.y0 + spec.y1);
        const double hx = spec.x1 - spec.x0, hy = spec.y1 - spec.y0;
        spec.x0 = cx - hx;
        spec.x1 = cx + hx;
        spec.y0 = cy - hy;
        spec.y1 = cy + hy;
        curve = borderline(ens_h, ens_hp, spec, opts);
    }
    return curve;
}

nlohmann::json to_json(const BorderlineCurve& curve) {
    nlohmann::json curves = nlohmann::json::array();
    for (const auto& c : curve.curves) {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& p : c.points) pts.push_back({p[0], p[1]});
        curves.push_back({{"closed", c.closed}, {"points", pts}});
    }
    return {{"curves", curves}};
}

}  // namespace quatgreen
