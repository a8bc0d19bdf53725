#include "quatgreen/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>
#include <fmt/format.h>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "quatgreen/errors.hpp"

namespace quatgreen {

namespace {

constexpr double kPi = std::numbers::pi;

// Fisher-Yates driven by the stateless uniform stream.
void shuffle(std::vector<double>& v, const NormalStream& perm) {
    for (std::size_t k = v.size(); k > 1; --k) {
        const double u = perm.uniforms(k).second;
        const auto j = std::min(static_cast<std::size_t>(u * static_cast<double>(k)), k - 1);
        std::swap(v[k - 1], v[j]);
    }
}

// Multiplicities round(w n), fixed up by largest remainder so they sum to n.
std::vector<int> atom_counts(const std::vector<double>& weights, int n) {
    std::vector<int> counts(weights.size());
    std::vector<std::pair<double, std::size_t>> rem;
    int total = 0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        const double exact = weights[k] * n;
        counts[k] = static_cast<int>(std::floor(exact));
        total += counts[k];
        rem.emplace_back(exact - counts[k], k);
    }
    std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; total < n; ++k, ++total) ++counts[rem[k % rem.size()].second];
    return counts;
}

CMatrix diagonal_sample(const std::vector<double>& values, const std::vector<double>& weights, int n,
                        const NormalStream& perm) {
    const auto counts = atom_counts(weights, n);
    std::vector<double> diag;
    diag.reserve(n);
    for (std::size_t k = 0; k < values.size(); ++k) diag.insert(diag.end(), counts[k], values[k]);
    shuffle(diag, perm);
    CMatrix h = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) h(i, i) = diag[i];
    return h;
}

double point_segment(const Point2& p, const Point2& a, const Point2& b) {
    const double ux = b[0] - a[0], uy = b[1] - a[1];
    const double len2 = ux * ux + uy * uy;
    double t = len2 > 0.0 ? ((p[0] - a[0]) * ux + (p[1] - a[1]) * uy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p[0] - a[0] - t * ux, p[1] - a[1] - t * uy);
}

double directed_hausdorff(const std::vector<Polyline>& from, const std::vector<Polyline>& to) {
    double worst = 0.0;
    for (const auto& pl : from)
        for (const auto& p : pl.points) worst = std::max(worst, distance_to_polylines(p, to));
    return worst;
}

struct SampleResult {
    std::vector<cplx> eig;
    std::vector<double> ovl;
};

}  // namespace

void validate(const SampleConfig& cfg) {
    if (cfg.n < 2) throw ConfigError(fmt::format("n must be >= 2, got {}", cfg.n));
    if (cfg.n_samples < 1) throw ConfigError(fmt::format("samples must be >= 1, got {}", cfg.n_samples));
    if (static_cast<long long>(cfg.n) * cfg.n_samples > kSampleBudget)
        throw ConfigError(fmt::format("n * samples = {} exceeds the budget {}",
                                      static_cast<long long>(cfg.n) * cfg.n_samples, kSampleBudget));
    validate(cfg.ens_h);
    validate(cfg.ens_hp);
}

int effective_size(const SampleConfig& cfg, std::vector<std::string>* warnings) {
    const bool two_point =
        std::holds_alternative<TwoPoint>(cfg.ens_h) || std::holds_alternative<TwoPoint>(cfg.ens_hp);
    if (two_point && cfg.n % 2 == 1) {
        if (warnings) warnings->push_back(fmt::format("two_atoms needs even n; using n = {}", cfg.n - 1));
        return cfg.n - 1;
    }
    return cfg.n;
}

CMatrix sample_hermitian(const EnsembleSpec& ens, int n, const NormalStream& stream, const NormalStream& perm) {
    return std::visit(
        [&](const auto& e) -> CMatrix {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, Semicircle>) {
                CMatrix h(n, n);
                const double diag = std::sqrt(e.r / n), off = std::sqrt(e.r / (2.0 * n));
                for (int j = 0; j < n; ++j) {
                    for (int i = 0; i <= j; ++i) {
                        const auto [a, b] = stream.normals(static_cast<std::uint64_t>(i) * n + j);
                        if (i == j) {
                            h(i, i) = diag * a;
                        } else {
                            h(i, j) = off * cplx(a, b);
                            h(j, i) = std::conj(h(i, j));
                        }
                    }
                }
                return h;
            } else if constexpr (std::is_same_v<T, Wishart>) {
                const int p = std::max(1, static_cast<int>(std::lround(e.r * n)));
                CMatrix a(n, p);
                for (int k = 0; k < p; ++k)
                    for (int i = 0; i < n; ++i) {
                        const auto [u, v] = stream.normals(static_cast<std::uint64_t>(i) * p + k);
                        a(i, k) = cplx(u, v) * std::numbers::sqrt2 * 0.5;
                    }
                CMatrix h(n, n);
                h.noalias() = a * a.adjoint();
                h *= -e.c / n;
                return h;
            } else if constexpr (std::is_same_v<T, TwoPoint>) {
                return diagonal_sample({e.mu, -e.mu}, {0.5, 0.5}, n, perm);
            } else {
                std::vector<double> values, weights;
                for (const auto& at : e.atoms) {
                    values.push_back(at.lambda);
                    weights.push_back(at.weight);
                }
                return diagonal_sample(values, weights, n, perm);
            }
        },
        ens);
}

CMatrix sample_x(const SampleConfig& cfg, int n, std::uint32_t sample) {
    const CMatrix h = sample_hermitian(cfg.ens_h, n, NormalStream(cfg.seed, sample, kTagH),
                                       NormalStream(cfg.seed, sample, kTagPermuteH));
    const CMatrix hp = sample_hermitian(cfg.ens_hp, n, NormalStream(cfg.seed, sample, kTagHp),
                                        NormalStream(cfg.seed, sample, kTagPermuteHp));
    return h + cplx(0.0, 1.0) * hp;
}

std::vector<double> hermitian_eigenvalues(CMatrix h) {
    const int n = static_cast<int>(h.rows());
    std::vector<double> w(n);
    const int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'U', n, h.data(), n, w.data());
    if (info != 0) throw NumericalError(fmt::format("zheevd failed (info = {}, n = {})", info, n));
    return w;
}

cplx empirical_stieltjes(const std::vector<double>& eig, cplx z) {
    cplx s = 0.0;
    for (double l : eig) s += 1.0 / (z - l);
    return s / static_cast<double>(eig.size());
}

WishartCalibration calibrate_wishart(const Wishart& w, std::uint64_t seed, int n) {
    WishartCalibration cal;
    cal.scale = -w.c;
    cal.aspect = w.r;
    const auto sup = support(EnsembleSpec{w});
    const double mid = 0.5 * (sup.lo + sup.hi);
    const double half = std::max(0.5 * (sup.hi - sup.lo), 0.5 * w.c);
    const std::vector<cplx> offsets = {{0, 3}, {1.5, 1}, {-1.5, 1}, {2.5, 0.5}, {-2.5, 0.5}};
    // Tag outside the ones used by the comparison run.
    const NormalStream stream(seed, 0xffffffffu, 0x57u);
    const auto eig = hermitian_eigenvalues(sample_hermitian(EnsembleSpec{w}, n, stream, stream));
    for (const auto& o : offsets) {
        const cplx z = mid + half * o;
        cal.points.push_back(z);
        const cplx ref = green(EnsembleSpec{w}, z);
        cal.max_rel_err = std::max(cal.max_rel_err, std::abs(empirical_stieltjes(eig, z) - ref) / std::abs(ref));
    }
    cal.validated = cal.max_rel_err < 0.02;
    return cal;
}

EigenData eig_full(const CMatrix& x) {
    const int n = static_cast<int>(x.rows());
    CMatrix a = x;
    EigenData ed;
    ed.eigenvalues.resize(n);
    ed.right.resize(n, n);
    const int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, a.data(), n, ed.eigenvalues.data(), nullptr, 1,
                                   ed.right.data(), n);
    if (info != 0)
        throw NumericalError(fmt::format("zgeev did not converge (info = {}, n = {}, |X|_F = {:.6g})", info, n,
                                         x.norm()));
    Eigen::PartialPivLU<CMatrix> lu(ed.right);
    ed.left = lu.inverse();
    const double cond_est = ed.right.norm() * ed.left.norm();
    if (!std::isfinite(cond_est))
        throw NotDiagonalizableError(fmt::format("eigenvector matrix is singular (n = {})", n));
    return ed;
}

std::vector<double> overlaps(const EigenData& ed) {
    std::vector<double> o(ed.eigenvalues.size());
    for (std::size_t a = 0; a < o.size(); ++a) {
        const auto k = static_cast<Eigen::Index>(a);
        o[a] = ed.left.row(k).squaredNorm() * ed.right.col(k).squaredNorm();
    }
    return o;
}

double reconstruction_residual(const CMatrix& x, const EigenData& ed) {
    const auto n = static_cast<Eigen::Index>(ed.eigenvalues.size());
    Eigen::VectorXcd lam(n);
    for (Eigen::Index k = 0; k < n; ++k) lam(k) = ed.eigenvalues[static_cast<std::size_t>(k)];
    const CMatrix rebuilt = ed.right * lam.asDiagonal() * ed.left;
    return (rebuilt - x).norm() / std::max(1.0, x.norm());
}

double biorthogonality_residual(const EigenData& ed) {
    const auto n = ed.right.rows();
    return (ed.left * ed.right - CMatrix::Identity(n, n)).norm();
}

SchurSpectrum schur_spectrum(CMatrix x, bool with_overlaps) {
    const int n = static_cast<int>(x.rows());
    SchurSpectrum out;
    out.eigenvalues.resize(n);
    std::vector<cplx> tau(std::max(1, n - 1));
    int info = LAPACKE_zgehrd(LAPACK_COL_MAJOR, n, 1, n, x.data(), n, tau.data());
    if (info != 0) throw NumericalError(fmt::format("zgehrd failed (info = {}, n = {})", info, n));
    for (int j = 0; j < n; ++j)
        for (int i = j + 2; i < n; ++i) x(i, j) = 0.0;
    cplx dummy;
    info = LAPACKE_zhseqr(LAPACK_COL_MAJOR, with_overlaps ? 'S' : 'E', 'N', n, 1, n, x.data(), n,
                          out.eigenvalues.data(), &dummy, 1);
    if (info != 0)
        throw NumericalError(fmt::format("zhseqr did not converge (info = {}, n = {}, |H|_F = {:.6g})", info, n,
                                         x.norm()));
    if (!with_overlaps) return out;

    // Eigenvectors of the triangular factor; the unitary Schur basis leaves the
    // overlaps unchanged.
    CMatrix vl(n, n), vr(n, n);
    int m = 0, lwork = -1, lrwork = n;
    cplx wq;
    std::vector<double> rwork(n);
    LAPACK_ztrevc3("B", "A", nullptr, &n, x.data(), &n, vl.data(), &n, vr.data(), &n, &n, &m, &wq, &lwork,
                   rwork.data(), &lrwork, &info);
    lwork = std::max(2 * n, static_cast<int>(wq.real()));
    std::vector<cplx> work(lwork);
    LAPACK_ztrevc3("B", "A", nullptr, &n, x.data(), &n, vl.data(), &n, vr.data(), &n, &n, &m, work.data(), &lwork,
                   rwork.data(), &lrwork, &info);
    if (info != 0) throw NumericalError(fmt::format("ztrevc3 failed (info = {}, n = {})", info, n));
    out.overlaps.resize(n);
    for (int a = 0; a < n; ++a) {
        // u_a vanishes above a and v_a below a, so u_a^H v_a reduces to one term.
        const double uv = std::norm(vl(a, a)) * std::norm(vr(a, a));
        if (uv == 0.0) throw NotDiagonalizableError(fmt::format("defective eigenvalue at index {}", a));
        out.overlaps[a] = vl.col(a).squaredNorm() * vr.col(a).squaredNorm() / uv;
    }
    return out;
}

Histogram2D::Histogram2D(double x0_, double x1_, double y0_, double y1_, int nx_, int ny_)
    : x0(x0_), x1(x1_), y0(y0_), y1(y1_), nx(nx_), ny(ny_), values(static_cast<std::size_t>(nx_) * ny_, 0.0) {}

int Histogram2D::index(cplx z) const {
    const double fx = (z.real() - x0) / (x1 - x0), fy = (z.imag() - y0) / (y1 - y0);
    if (!(fx >= 0.0 && fx <= 1.0 && fy >= 0.0 && fy <= 1.0)) return -1;
    const int i = std::min(nx - 1, static_cast<int>(fx * nx));
    const int j = std::min(ny - 1, static_cast<int>(fy * ny));
    return j * nx + i;
}

Histogram2D overlap_field(const std::vector<cplx>& eig, const std::vector<double>& ovl, int n_matrix,
                          const Histogram2D& layout, int n_samples) {
    Histogram2D h(layout.x0, layout.x1, layout.y0, layout.y1, layout.nx, layout.ny);
    const double norm = 1.0 / (n_samples * h.bin_w() * h.bin_h());
    for (std::size_t a = 0; a < eig.size(); ++a) {
        const int k = h.index(eig[a]);
        if (k >= 0) h.values[k] += ovl[a] / n_matrix * norm;
    }
    return h;
}

bool point_in_polyline(const Point2& p, const Polyline& pl) {
    const auto& v = pl.points;
    bool in = false;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
        if ((v[i][1] > p[1]) != (v[j][1] > p[1]) &&
            p[0] < (v[j][0] - v[i][0]) * (p[1] - v[i][1]) / (v[j][1] - v[i][1]) + v[i][0])
            in = !in;
    }
    return in;
}

double distance_to_polylines(const Point2& p, const std::vector<Polyline>& curves) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : curves) {
        const auto& pts = q.points;
        if (pts.size() == 1) best = std::min(best, point_segment(p, pts[0], pts[0]));
        for (std::size_t k = 0; k + 1 < pts.size(); ++k) best = std::min(best, point_segment(p, pts[k], pts[k + 1]));
        if (q.closed && pts.size() > 2) best = std::min(best, point_segment(p, pts.back(), pts.front()));
    }
    return best;
}

double hausdorff(const std::vector<Polyline>& a, const std::vector<Polyline>& b) {
    if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

McReport run_comparison(const SampleConfig& cfg, const SpectralGrid& grid, const BorderlineCurve& analytic,
                        const McOptions& opts) {
    validate(cfg);
    McReport rep;
    rep.cfg = cfg;
    const int n = effective_size(cfg, &rep.warnings);
    rep.n_effective = n;

    if (const auto* w = std::get_if<Wishart>(&cfg.ens_h)) rep.calibration_h = calibrate_wishart(*w, cfg.seed);
    if (const auto* w = std::get_if<Wishart>(&cfg.ens_hp)) rep.calibration_hp = calibrate_wishart(*w, cfg.seed);
    for (const auto* cal : {&rep.calibration_h, &rep.calibration_hp})
        if (*cal && !(*cal)->validated)
            rep.warnings.push_back(fmt::format("wishart sampler calibration off by {:.3g}", (*cal)->max_rel_err));

    // Sampler sanity check on the Hermitian parts of sample 0.
    {
        const cplx z(0.0, 3.0);
        const double tol = 5.0 / std::sqrt(static_cast<double>(n)) + 0.01;
        const std::pair<const EnsembleSpec*, std::uint32_t> parts[] = {{&cfg.ens_h, kTagH}, {&cfg.ens_hp, kTagHp}};
        for (const auto& [ens, tag] : parts) {
            const auto perm_tag = tag == kTagH ? kTagPermuteH : kTagPermuteHp;
            const auto eig = hermitian_eigenvalues(
                sample_hermitian(*ens, n, NormalStream(cfg.seed, 0, tag), NormalStream(cfg.seed, 0, perm_tag)));
            McReport::Stieltjes st;
            st.z = z;
            st.empirical = empirical_stieltjes(eig, z);
            st.analytic = green(*ens, z);
            st.error = std::abs(st.empirical - st.analytic);
            st.tol = tol;
            st.ok = st.error <= tol;
            if (!st.ok) rep.warnings.push_back(fmt::format("stieltjes check failed: error {:.3g} > {:.3g}", st.error, tol));
            rep.stieltjes.push_back(st);
        }
    }

    std::vector<SampleResult> results(cfg.n_samples);
    parallel_for(cfg.n_samples, opts.workers, [&](int s) {
        const auto spec = schur_spectrum(sample_x(cfg, n, static_cast<std::uint32_t>(s)), opts.overlaps);
        results[s] = {spec.eigenvalues, spec.overlaps};
    });

    const auto& gs = grid.spec;
    rep.density_hist = Histogram2D(gs.x0, gs.x1, gs.y0, gs.y1, opts.coarse_bins, opts.coarse_bins);
    double support_area = 0.0;
    for (const auto& cell : grid.cells)
        if (cell.sol.branch == Branch::NonHolomorphic) support_area += gs.dx() * gs.dy();
    double bin = opts.fine_bin;
    if (bin <= 0.0) {
        const double total = static_cast<double>(n) * cfg.n_samples;
        bin = support_area > 0.0 ? std::clamp(std::sqrt(opts.support_bin_count * support_area / total), 0.02, 0.2) : 0.1;
    }
    rep.support_bin = bin;
    const int fx = std::max(1, static_cast<int>(std::ceil((gs.x1 - gs.x0) / bin - 1e-9)));
    const int fy = std::max(1, static_cast<int>(std::ceil((gs.y1 - gs.y0) / bin - 1e-9)));
    Histogram2D fine(gs.x0, gs.x0 + fx * bin, gs.y0, gs.y0 + fy * bin, fx, fy);
    rep.overlap_hist = Histogram2D(gs.x0, gs.x1, gs.y0, gs.y1, opts.coarse_bins, opts.coarse_bins);

    long long outside = 0;
    rep.imag_min = std::numeric_limits<double>::infinity();
    rep.imag_max = -std::numeric_limits<double>::infinity();
    std::vector<cplx> all_eig;
    std::vector<double> all_ovl;
    for (const auto& r : results) {
        for (std::size_t a = 0; a < r.eig.size(); ++a) {
            const cplx l = r.eig[a];
            rep.imag_min = std::min(rep.imag_min, l.imag());
            rep.imag_max = std::max(rep.imag_max, l.imag());
            const int k = rep.density_hist.index(l);
            if (k < 0) ++outside; else rep.density_hist.values[k] += 1.0;
            const int kf = fine.index(l);
            if (kf >= 0) fine.values[kf] += 1.0;
        }
        all_eig.insert(all_eig.end(), r.eig.begin(), r.eig.end());
        all_ovl.insert(all_ovl.end(), r.ovl.begin(), r.ovl.end());
    }
    rep.n_eigenvalues = static_cast<long long>(all_eig.size());
    const double total = static_cast<double>(rep.n_eigenvalues);
    rep.outside_mass = outside / total;

    // L1 distance: bin-averaged analytic density from the grid nodes in each bin.
    auto& dh = rep.density_hist;
    const double bin_area = dh.bin_w() * dh.bin_h();
    std::vector<double> rho_sum(dh.values.size(), 0.0), rho_cnt(dh.values.size(), 0.0);
    for (const auto& cell : grid.cells) {
        const int k = dh.index({cell.x, cell.y});
        if (k < 0) continue;
        rho_sum[k] += cell.sol.branch == Branch::NonHolomorphic ? cell.rho : 0.0;
        rho_cnt[k] += 1.0;
    }
    double l1 = 0.0;
    for (std::size_t k = 0; k < dh.values.size(); ++k) {
        dh.values[k] /= total * bin_area;
        const double an = rho_cnt[k] > 0 ? rho_sum[k] / rho_cnt[k] : 0.0;
        l1 += std::abs(dh.values[k] - an) * bin_area;
    }
    rep.l1_density = l1 + rep.outside_mass;

    // Empirical support: zero-padded fine histogram thresholded at a fraction of the median occupied bin.
    std::vector<double> occupied;
    for (double v : fine.values)
        if (v > 0) occupied.push_back(v);
    if (!occupied.empty()) {
        std::nth_element(occupied.begin(), occupied.begin() + occupied.size() / 2, occupied.end());
        const double threshold = opts.threshold_fraction * occupied[occupied.size() / 2];
        rep.support_threshold = threshold;
        NodeField field;
        for (int i = -1; i <= fx; ++i) field.xs.push_back(fine.x0 + (i + 0.5) * bin);
        for (int j = -1; j <= fy; ++j) field.ys.push_back(fine.y0 + (j + 0.5) * bin);
        field.values.assign(field.xs.size() * field.ys.size(), threshold);
        for (int j = 0; j < fy; ++j)
            for (int i = 0; i < fx; ++i)
                field.values[static_cast<std::size_t>(j + 1) * field.xs.size() + i + 1] = threshold - fine.at(i, j);
        rep.empirical_support = marching_squares(field);
        const auto& curves = rep.empirical_support;
        for (std::size_t a = 0; a < curves.size(); ++a) {
            bool enclosed = false;
            for (std::size_t b = 0; b < curves.size() && !enclosed; ++b)
                enclosed = b != a && !curves[a].points.empty() && point_in_polyline(curves[a].points.front(), curves[b]);
            ++(enclosed ? rep.empirical_holes : rep.empirical_components);
        }
    }
    rep.support_hausdorff = hausdorff(rep.empirical_support, analytic.curves);

    if (opts.overlaps) {
        rep.overlap_hist = overlap_field(all_eig, all_ovl, n, rep.overlap_hist, cfg.n_samples);
        // Disc about the density centroid with radius tied to the support area.
        double mass = 0.0, area = 0.0;
        cplx centroid = 0.0;
        const double cell_area = gs.dx() * gs.dy();
        for (const auto& cell : grid.cells) {
            if (cell.sol.branch != Branch::NonHolomorphic) continue;
            area += cell_area;
            mass += cell.rho;
            centroid += cell.rho * cplx(cell.x, cell.y);
        }
        if (mass > 0.0 && area > 0.0) {
            rep.centre = centroid / mass;
            rep.centre_radius = opts.centre_disc_fraction * std::sqrt(area / kPi);
            const double disc = kPi * rep.centre_radius * rep.centre_radius;
            double emp = 0.0;
            for (std::size_t a = 0; a < all_eig.size(); ++a)
                if (std::abs(all_eig[a] - rep.centre) < rep.centre_radius) emp += all_ovl[a] / n;
            rep.centre_empirical = emp / (cfg.n_samples * disc);
            double an = 0.0;
            int cnt = 0;
            for (const auto& cell : grid.cells) {
                if (std::abs(cplx(cell.x, cell.y) - rep.centre) >= rep.centre_radius) continue;
                ++cnt;
                if (cell.sol.branch == Branch::NonHolomorphic) an += -(n / kPi) * cell.sol.C;
            }
            if (cnt > 0) {
                rep.centre_analytic = an / cnt;
                if (rep.centre_analytic > 0.0) rep.overlap_center_ratio = rep.centre_empirical / rep.centre_analytic;
            }
        }
    }
    return rep;
}

nlohmann::json to_json(const McReport& r) {
    using nlohmann::json;
    auto cj = [](cplx z) { return json::array({z.real(), z.imag()}); };
    auto num = [](double v) -> json { return std::isfinite(v) ? json(v) : json(nullptr); };
    json j;
    j["n"] = r.cfg.n;
    j["n_effective"] = r.n_effective;
    j["samples"] = r.cfg.n_samples;
    j["seed"] = r.cfg.seed;
    j["n_eigenvalues"] = r.n_eigenvalues;
    j["l1_density"] = r.l1_density;
    j["outside_mass"] = r.outside_mass;
    j["support_hausdorff"] = num(r.support_hausdorff);
    j["support_bin"] = r.support_bin;
    j["support_threshold"] = r.support_threshold;
    j["empirical_components"] = r.empirical_components;
    j["empirical_holes"] = r.empirical_holes;
    j["overlap_center_ratio"] = num(r.overlap_center_ratio);
    j["centre"] = {{"z", cj(r.centre)},
                   {"radius", r.centre_radius},
                   {"empirical", num(r.centre_empirical)},
                   {"analytic", num(r.centre_analytic)}};
    j["imag_range"] = {num(r.imag_min), num(r.imag_max)};
    json st = json::array();
    for (const auto& s : r.stieltjes)
        st.push_back({{"z", cj(s.z)}, {"empirical", cj(s.empirical)}, {"analytic", cj(s.analytic)},
                      {"error", s.error}, {"tol", s.tol}, {"ok", s.ok}});
    j["stieltjes"] = st;
    auto cal_json = [&](const std::optional<WishartCalibration>& c) -> json {
        if (!c) return nullptr;
        json pts = json::array();
        for (auto z : c->points) pts.push_back(cj(z));
        return {{"scale", c->scale}, {"aspect", c->aspect}, {"max_rel_err", c->max_rel_err},
                {"validated", c->validated}, {"points", pts}};
    };
    j["calibration"] = {{"h", cal_json(r.calibration_h)}, {"hp", cal_json(r.calibration_hp)}};
    auto hist_json = [](const Histogram2D& h) {
        return json{{"bbox", {h.x0, h.x1, h.y0, h.y1}}, {"nx", h.nx}, {"ny", h.ny}, {"values", h.values}};
    };
    j["density_hist"] = hist_json(r.density_hist);
    j["overlap_hist"] = hist_json(r.overlap_hist);
    json curves = json::array();
    for (const auto& pl : r.empirical_support) {
        json pts = json::array();
        for (const auto& p : pl.points) pts.push_back({p[0], p[1]});
        curves.push_back({{"closed", pl.closed}, {"points", pts}});
    }
    j["empirical_support"] = curves;
    j["warnings"] = r.warnings;
    return j;
}

}  // namespace quatgreen
