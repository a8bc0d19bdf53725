#pragma once

#include <array>
#include <functional>
#include <vector>

namespace quatgreen {

using Point2 = std::array<double, 2>;

struct Polyline {
    std::vector<Point2> points;
    bool closed = false;  ///< last point connects back to the first (not repeated)
};

/// Sampled scalar field on a node grid, row-major (j * nx + i).
struct NodeField {
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> values;

    double at(std::size_t i, std::size_t j) const { return values[j * xs.size() + i]; }
};

struct ContourOptions {
    /// Value at the centre of a saddle cell; default is the mean of the corners.
    std::function<double(double, double)> centre_value;
    /// Places the vertex on the edge (a, b) given the corner values; default
    /// is linear interpolation.
    std::function<Point2(const Point2&, const Point2&, double, double)> refine;
};

/**
 * Marching squares for the zero level set. A node counts as "inside" when its
 * value is < 0; NaN counts as outside. Segments are chained into polylines;
 * chains that reach the grid boundary stay open.
 */
std::vector<Polyline> marching_squares(const NodeField& field, const ContourOptions& opts = {});

}  // namespace quatgreen
