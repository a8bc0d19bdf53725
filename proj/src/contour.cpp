#include "quatgreen/contour.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace quatgreen {

namespace {

bool inside(double v) { return v < 0.0; }

Point2 lerp_zero(const Point2& a, const Point2& b, double va, double vb) {
    double t = 0.5;
    if (std::isfinite(va) && std::isfinite(vb) && va != vb) t = va / (va - vb);
    t = std::clamp(t, 0.0, 1.0);
    return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
}

}  // namespace

std::vector<Polyline> marching_squares(const NodeField& f, const ContourOptions& opts) {
    const std::size_t nx = f.xs.size(), ny = f.ys.size();
    if (nx < 2 || ny < 2) return {};

    // Edge ids: horizontal edge (i,j)-(i+1,j) -> j*(nx-1)+i; vertical edge
    // (i,j)-(i,j+1) -> H + j*nx + i.
    const std::size_t H = (nx - 1) * ny;
    auto h_edge = [&](std::size_t i, std::size_t j) { return j * (nx - 1) + i; };
    auto v_edge = [&](std::size_t i, std::size_t j) { return H + j * nx + i; };

    std::unordered_map<std::size_t, Point2> vertex;
    auto edge_point = [&](std::size_t id) -> const Point2& {
        auto it = vertex.find(id);
        if (it != vertex.end()) return it->second;
        std::size_t i0, j0, i1, j1;
        if (id < H) {
            j0 = j1 = id / (nx - 1);
            i0 = id % (nx - 1);
            i1 = i0 + 1;
        } else {
            const std::size_t k = id - H;
            j0 = k / nx;
            i0 = i1 = k % nx;
            j1 = j0 + 1;
        }
        const Point2 a{f.xs[i0], f.ys[j0]}, b{f.xs[i1], f.ys[j1]};
        const double va = f.at(i0, j0), vb = f.at(i1, j1);
        const Point2 p = opts.refine ? opts.refine(a, b, va, vb) : lerp_zero(a, b, va, vb);
        return vertex.emplace(id, p).first->second;
    };

    // Each edge touches at most two segments.
    std::vector<std::array<std::size_t, 2>> segs;
    std::unordered_map<std::size_t, std::vector<std::size_t>> by_edge;
    auto add = [&](std::size_t e0, std::size_t e1) {
        by_edge[e0].push_back(segs.size());
        by_edge[e1].push_back(segs.size());
        segs.push_back({e0, e1});
    };

    for (std::size_t j = 0; j + 1 < ny; ++j) {
        for (std::size_t i = 0; i + 1 < nx; ++i) {
            const double v0 = f.at(i, j), v1 = f.at(i + 1, j), v2 = f.at(i + 1, j + 1), v3 = f.at(i, j + 1);
            const int code = (inside(v0) ? 1 : 0) | (inside(v1) ? 2 : 0) | (inside(v2) ? 4 : 0) | (inside(v3) ? 8 : 0);
            const std::size_t bottom = h_edge(i, j), right = v_edge(i + 1, j), top = h_edge(i, j + 1),
                              left = v_edge(i, j);
            switch (code) {
                case 0:
                case 15: break;
                case 1:
                case 14: add(left, bottom); break;
                case 2:
                case 13: add(bottom, right); break;
                case 3:
                case 12: add(left, right); break;
                case 4:
                case 11: add(right, top); break;
                case 6:
                case 9: add(bottom, top); break;
                case 7:
                case 8: add(left, top); break;
                case 5:
                case 10: {
                    double c;
                    if (opts.centre_value) {
                        c = opts.centre_value(0.5 * (f.xs[i] + f.xs[i + 1]), 0.5 * (f.ys[j] + f.ys[j + 1]));
                    } else {
                        c = 0.25 * (v0 + v1 + v2 + v3);
                    }
                    const bool centre_in = inside(c);
                    // code 5: corners 0 and 2 inside.
                    if ((code == 5) == centre_in) {
                        add(left, top);
                        add(bottom, right);
                    } else {
                        add(left, bottom);
                        add(right, top);
                    }
                    break;
                }
                default: break;
            }
        }
    }

    std::vector<char> used(segs.size(), 0);
    std::vector<Polyline> out;
    auto other_seg = [&](std::size_t edge, std::size_t seg) -> std::ptrdiff_t {
        for (std::size_t s : by_edge[edge])
            if (s != seg && !used[s]) return static_cast<std::ptrdiff_t>(s);
        return -1;
    };
    auto walk = [&](std::size_t seg, std::size_t from_edge, std::vector<std::size_t>& edges) {
        std::size_t cur = seg;
        std::size_t at = from_edge;
        while (true) {
            used[cur] = 1;
            const std::size_t next_edge = segs[cur][0] == at ? segs[cur][1] : segs[cur][0];
            edges.push_back(next_edge);
            const auto nxt = other_seg(next_edge, cur);
            if (nxt < 0) return next_edge;
            cur = static_cast<std::size_t>(nxt);
            at = next_edge;
        }
    };

    for (std::size_t s = 0; s < segs.size(); ++s) {
        if (used[s]) continue;
        std::vector<std::size_t> fwd{segs[s][0]};
        const std::size_t end = walk(s, segs[s][0], fwd);
        Polyline pl;
        if (end == segs[s][0] && fwd.size() > 2) {
            fwd.pop_back();
            pl.closed = true;
        } else {
            // Open chain: extend backwards from the starting edge.
            std::vector<std::size_t> back;
            const auto prev = other_seg(segs[s][0], s);
            if (prev >= 0) {
                back.push_back(segs[s][0]);
                walk(static_cast<std::size_t>(prev), segs[s][0], back);
                back.erase(back.begin());
                std::reverse(back.begin(), back.end());
                back.insert(back.end(), fwd.begin(), fwd.end());
                fwd = std::move(back);
            }
        }
        for (std::size_t e : fwd) pl.points.push_back(edge_point(e));
        out.push_back(std::move(pl));
    }
    return out;
}

}  // namespace quatgreen
