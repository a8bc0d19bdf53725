#include "quatgreen/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "quatgreen/errors.hpp"

namespace quatgreen {

namespace {

constexpr cplx I{0.0, 1.0};

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

struct PolyPair {
    std::vector<RealPoly> h;   // coefficients in g, polynomials in m
    std::vector<RealPoly> hp;  // coefficients in g^I, polynomials in m (shift 1 - m applied)
};

PolyPair shifted_pair(const EnsembleSpec& ens_h, const EnsembleSpec& ens_hp, cplx z) {
    PolyPair p{shifted_blue_coeffs(ens_h, z.real()), shifted_blue_coeffs(ens_hp, z.imag())};
    for (auto& c : p.hp) c = c.compose_affine(1.0, -1.0);
    return p;
}

NonHoloSolution make_candidate(double m, double g_sum, double g_prod, double gI_sum, double gI_prod) {
    NonHoloSolution s;
    s.m = m;
    s.g_sum = g_sum;
    s.g_prod = g_prod;
    s.gI_sum = gI_sum;
    s.gI_prod = gI_prod;
    s.imag_g = std::sqrt(std::max(0.0, g_prod - 0.25 * g_sum * g_sum));
    s.G = 0.5 * cplx(g_sum, -gI_sum);
    s.C = 0.25 * (g_sum * g_sum + gI_sum * gI_sum) - g_prod;
    s.branch = s.C <= 0.0 ? Branch::NonHolomorphic : Branch::Holomorphic;
    return s;
}

std::vector<NonHoloSolution> quadratic_candidates(const PolyPair& p) {
    const RealPoly& c0 = p.h[0];
    const RealPoly& c1 = p.h[1];
    const double c2 = p.h[2].coeff(0);
    const RealPoly& d0 = p.hp[0];
    const RealPoly& d1 = p.hp[1];
    const double d2 = p.hp[2].coeff(0);

    // g_prod(m) = gI_prod(m)  <=>  c0 d2 - d0 c2 = 0
    const RealPoly eq = c0 * d2 - d0 * c2;
    if (eq.is_zero()) throw NumericalError("m-equation vanishes identically");

    std::vector<NonHoloSolution> out;
    for (double m : real_roots(eq)) {
        const double g_sum = -c1(m) / c2;
        const double g_prod = c0(m) / c2;
        const double gI_sum = -d1(m) / d2;
        const double gI_prod = d0(m) / d2;
        if (!(g_prod > 0.0 && gI_prod > 0.0)) continue;
        out.push_back(make_candidate(m, g_sum, g_prod, gI_sum, gI_prod));
    }
    return out;
}

// Higher-degree pairs: scan m = tan(theta) for sign changes of
// |g|^2 - |g^I|^2 over the widest conjugate pairs, then bisect.
std::vector<NonHoloSolution> scanned_candidates(const PolyPair& p) {
    struct Eval {
        bool ok = false;
        ConjugatePair g, gi;
        double diff = 0.0;
    };
    auto eval = [&](double theta) {
        Eval e;
        const double m = std::tan(theta);
        const auto g = conjugate_pair_roots(evaluate_at(p.h, m));
        const auto gi = conjugate_pair_roots(evaluate_at(p.hp, m));
        if (!g || !gi) return e;
        e.ok = true;
        e.g = *g;
        e.gi = *gi;
        e.diff = g->product - gi->product;
        return e;
    };

    constexpr int kSamples = 800;
    const double half_pi = 0.5 * std::numbers::pi;
    std::vector<NonHoloSolution> out;
    double th_prev = -half_pi + std::numbers::pi * 0.5 / kSamples;
    Eval e_prev = eval(th_prev);
    for (int k = 1; k < kSamples; ++k) {
        const double th = -half_pi + std::numbers::pi * (k + 0.5) / kSamples;
        const Eval e = eval(th);
        if (e.ok && e_prev.ok && (e.diff == 0.0 || (e.diff > 0.0) != (e_prev.diff > 0.0))) {
            double lo = th_prev, hi = th;
            Eval e_lo = e_prev;
            bool ok = true;
            for (int it = 0; it < 80 && ok; ++it) {
                const double mid = 0.5 * (lo + hi);
                const Eval e_mid = eval(mid);
                if (!e_mid.ok) {
                    ok = false;
                    break;
                }
                if ((e_mid.diff > 0.0) == (e_lo.diff > 0.0)) {
                    lo = mid;
                    e_lo = e_mid;
                } else {
                    hi = mid;
                }
            }
            if (ok) {
                const double th_root = 0.5 * (lo + hi);
                const Eval r = eval(th_root);
                if (r.ok && std::abs(r.diff) <= 1e-8 * (1.0 + r.g.product)) {
                    out.push_back(make_candidate(std::tan(th_root), r.g.sum, r.g.product, r.gi.sum, r.gi.product));
                }
            }
        }
        th_prev = th;
        e_prev = e;
    }
    return out;
}

std::vector<NonHoloSolution> candidates_once(const EnsembleSpec& ens_h, const EnsembleSpec& ens_hp, cplx z) {
    const PolyPair p = shifted_pair(ens_h, ens_hp, z);
    auto out = (p.h.size() == 3 && p.hp.size() == 3) ? quadratic_candidates(p) : scanned_candidates(p);
    std::sort(out.begin(), out.end(), [](const NonHoloSolution& a, const NonHoloSolution& b) {
        const bool aa = a.branch == Branch::NonHolomorphic;
        const bool ba = b.branch == Branch::NonHolomorphic;
        if (aa != ba) return aa;
        if (aa) return a.imag_g > b.imag_g;
        return a.C < b.C;
    });
    return out;
}

NonHoloSolution holomorphic_solution(cplx G, Branch branch) {
    NonHoloSolution s;
    s.G = G;
    s.C = 0.0;
    s.branch = branch;
    return s;
}

}  // namespace

std::string branch_name(Branch b) {
    switch (b) {
        case Branch::NonHolomorphic: return "nonholomorphic";
        case Branch::Holomorphic: return "holomorphic";
        case Branch::Outside: return "outside";
    }
    return "outside";
}

Quaternion green_quaternion(const NonHoloSolution& s) {
    return {s.G, s.branch == Branch::NonHolomorphic ? std::sqrt(std::max(0.0, -s.C)) : 0.0};
}

std::vector<NonHoloSolution> nonholo_candidates(const EnsembleSpec& ens_h, const EnsembleSpec& ens_hp, cplx z) {
    try {
        return candidates_once(ens_h, ens_hp, z);
    } catch (const DegenerateError&) {
        return candidates_once(ens_h, ens_hp, z + cplx(1e-9, 1e-9));
    }
}

std::optional<NonHoloSolution> formal_solution(const EnsembleSpec& ens_h, const EnsembleSpec& ens_hp, cplx z) {
    auto c = nonholo_candidates(ens_h, ens_hp, z);
    if (c.empty()) return std::nullopt;
    return c.front();
}

bool inside_domain(const EnsembleSpec& ens_h, const EnsembleSpec& ens_hp, cplx z, double tol) {
    try {
        const auto s = formal_solution(ens_h, ens_hp, z);
        return s && s->branch == Branch::NonHolomorphic && s->C < -tol;
    } catch (const Error&) {
        return false;
    }
}

NonHoloSolution solve_general(const EnsembleSpec& ens_h, const EnsembleSpec& ens_hp, cplx z,
                              const SolveOptions& opts) {
    const auto c = nonholo_candidates(ens_h, ens_hp, z);
    if (!c.empty() && c.front().branch == Branch::NonHolomorphic) return c.front();
    if (!opts.holomorphic) return holomorphic_solution(cplx(NonHoloSolution::kNaN, NonHoloSolution::kNaN), Branch::Holomorphic);
    try {
        return holomorphic_solution(solve_holomorphic(ens_h, ens_hp, z), Branch::Holomorphic);
    } catch (const NumericalError&) {
        return holomorphic_solution(cplx(NonHoloSolution::kNaN, NonHoloSolution::kNaN), Branch::Outside);
    }
}

NonHoloSolution solve_gue_special(const EnsembleSpec& ens_hp, cplx z, const SolveOptions& opts) {
    const double x = z.real();
    const double y = z.imag();
    const RelationPoly rel = relation(ens_hp);

    // P_H'(h, m - h) as a polynomial in h with coefficients in m.
    std::vector<RealPoly> hc;
    for (int i = 0; i <= rel.deg_w(); ++i)
        for (int j = 0; j < static_cast<int>(rel.p[i].size()); ++j) {
            const double pij = rel.p[i][j];
            if (pij == 0.0) continue;
            for (int l = 0; l <= j; ++l) {
                if (static_cast<int>(hc.size()) <= i + l) hc.resize(i + l + 1);
                std::vector<double> mono(j - l + 1, 0.0);
                mono[j - l] = pij * binomial(j, l) * ((l % 2) ? -1.0 : 1.0);
                hc[i + l] += RealPoly(std::move(mono));
            }
        }

    // h = a + i v with a = (y + m)/2 and w = v^2: split into R(w) + i v I(w).
    const RealPoly a{0.5 * y, 0.5};
    std::vector<RealPoly> apow{RealPoly{1.0}};
    for (std::size_t k = 1; k < hc.size(); ++k) apow.push_back(apow.back() * a);
    std::vector<RealPoly> R, Im;
    auto add_at = [](std::vector<RealPoly>& v, std::size_t idx, const RealPoly& term) {
        if (v.size() <= idx) v.resize(idx + 1);
        v[idx] += term;
    };
    for (std::size_t k = 0; k < hc.size(); ++k) {
        if (hc[k].is_zero()) continue;
        for (std::size_t l = 0; l <= k; ++l) {
            RealPoly term = hc[k] * apow[k - l] * binomial(static_cast<int>(k), static_cast<int>(l));
            if (l % 2 == 0) {
                add_at(R, l / 2, ((l / 2) % 2) ? -1.0 * term : term);
            } else {
                add_at(Im, (l - 1) / 2, (((l - 1) / 2) % 2) ? -1.0 * term : term);
            }
        }
    }
    auto trim = [](std::vector<RealPoly>& v) {
        while (!v.empty() && v.back().is_zero()) v.pop_back();
    };
    trim(R);
    trim(Im);
    if (R.empty() || Im.empty()) throw NumericalError("h-polynomial has no conjugate-pair structure");

    // Resultant in w eliminates v.
    const int dr = static_cast<int>(R.size()) - 1;
    const int di = static_cast<int>(Im.size()) - 1;
    RealPoly res;
    if (di == 0) {
        res = Im[0];
    } else if (dr == 0) {
        res = R[0];
    } else {
        const int n = dr + di;
        std::vector<std::vector<RealPoly>> syl(n, std::vector<RealPoly>(n));
        for (int row = 0; row < di; ++row)
            for (int k = 0; k <= dr; ++k) syl[row][row + k] = R[dr - k];
        for (int row = 0; row < dr; ++row)
            for (int k = 0; k <= di; ++k) syl[di + row][row + k] = Im[di - k];
        res = poly_determinant(syl);
    }
    if (res.is_zero()) throw NumericalError("m-resultant vanishes identically");

    auto eval_w = [](const std::vector<RealPoly>& v, double m) {
        std::vector<double> c;
        for (const auto& p : v) c.push_back(p(m));
        return RealPoly(std::move(c));
    };

    NonHoloSolution best;
    double best_w = -1.0;
    for (double m : real_roots(res)) {
        const RealPoly Rw = eval_w(R, m);
        const RealPoly Iw = eval_w(Im, m);
        const bool use_im = Iw.degree() >= 1;
        const RealPoly& primary = use_im ? Iw : Rw;
        const RealPoly& other = use_im ? Rw : Iw;
        for (double w : real_roots(primary, 1e-7)) {
            if (!(w > 0.0)) continue;
            double scale = 0.0, wk = 1.0;
            for (double c : other.coeffs()) {
                scale += std::abs(c) * wk;
                wk *= w;
            }
            if (std::abs(other(w)) > 1e-7 * (1.0 + scale)) continue;
            const double C = 0.25 * x * x - w;
            if (C > 0.0 || w <= best_w) continue;
            best_w = w;
            best.m = m;
            best.g_sum = x;
            best.gI_sum = m - y;
            best.g_prod = 0.25 * (x * x + (m - y) * (m - y)) - C;
            best.gI_prod = best.g_prod;
            best.imag_g = std::sqrt(w);
            best.G = 0.5 * cplx(x, y - m);
            best.C = C;
            best.branch = Branch::NonHolomorphic;
        }
    }
    if (best_w > 0.0) return best;
    if (!opts.holomorphic) return holomorphic_solution(cplx(NonHoloSolution::kNaN, NonHoloSolution::kNaN), Branch::Holomorphic);
    try {
        return holomorphic_solution(solve_holomorphic(Semicircle{1.0}, ens_hp, z), Branch::Holomorphic);
    } catch (const NumericalError&) {
        return holomorphic_solution(cplx(NonHoloSolution::kNaN, NonHoloSolution::kNaN), Branch::Outside);
    }
}

// ---------------------------------------------------------------------------

HolomorphicSolver::HolomorphicSolver(EnsembleSpec ens_h, EnsembleSpec ens_hp)
    : h_(std::move(ens_h)), hp_(std::move(ens_hp)), rel_h_(relation(h_)), rel_hp_(relation(hp_)) {
    const Interval sh = support(h_);
    const Interval shp = support(hp_);
    centre_ = cplx(0.5 * (sh.lo + sh.hi), 0.5 * (shp.lo + shp.hi));
    extent_ = 1.0 + std::max({std::abs(sh.lo), std::abs(sh.hi), std::abs(shp.lo), std::abs(shp.hi)});
}

double HolomorphicSolver::residual(cplx z, const HoloState& s) const {
    return std::max({std::abs(rel_h_(s.w1, s.A)), std::abs(rel_hp_(s.w2, I * s.A)),
                     std::abs(s.w1 + I * s.w2 - 1.0 / s.A - z)});
}

std::optional<HoloState> HolomorphicSolver::refine(cplx z, const HoloState& guess) const {
    HoloState s = guess;
    for (int it = 0; it < 40; ++it) {
        const cplx iA = I * s.A;
        Eigen::Vector3cd F(rel_h_(s.w1, s.A), rel_hp_(s.w2, iA), s.w1 + I * s.w2 - 1.0 / s.A - z);
        Eigen::Matrix3cd J;
        J << rel_h_.ds(s.w1, s.A), rel_h_.dw(s.w1, s.A), 0.0,
             I * rel_hp_.ds(s.w2, iA), 0.0, rel_hp_.dw(s.w2, iA),
             1.0 / (s.A * s.A), 1.0, I;
        const Eigen::Vector3cd d = J.fullPivLu().solve(F);
        if (!d.allFinite()) return std::nullopt;
        s.A -= d(0);
        s.w1 -= d(1);
        s.w2 -= d(2);
        if (std::abs(s.A - guess.A) > 0.25 * std::abs(guess.A) + 1e-12) return std::nullopt;
        const double size = 1.0 + std::abs(s.A) + std::abs(s.w1) + std::abs(s.w2);
        if (d.norm() <= 1e-14 * size) return s;
    }
    const double size = 1.0 + std::abs(s.A) + std::abs(s.w1) + std::abs(s.w2);
    if (residual(z, s) <= 1e-10 * size) return s;
    return std::nullopt;
}

std::optional<HoloState> HolomorphicSolver::continue_path(cplx from, HoloState state, cplx to,
                                                          bool check_domain) const {
    const double guard = 1e-6 * (1.0 + std::abs(to));
    double t = 0.0;
    double dt = 0.02;
    const double length = std::abs(to - from);
    while (t < 1.0) {
        // Short steps near the supports so domain checks cannot jump over a thin island.
        const double dist = std::abs(from + t * (to - from) - centre_);
        const double max_len = 0.02 * extent_ + 0.25 * std::max(0.0, dist - 2.0 * extent_);
        const double step = check_domain && length > 0.0 ? std::min(dt, max_len / length) : dt;
        const double tn = std::min(1.0, t + step);
        const cplx p = from + tn * (to - from);
        auto r = refine(p, state);
        if (r && check_domain && std::abs(p - to) > guard && inside_domain(h_, hp_, p)) return std::nullopt;
        if (r) {
            state = *r;
            t = tn;
            dt = std::min(step * 1.5, 0.1);
        } else {
            dt = step * 0.5;
            if (dt < 1e-9) return std::nullopt;
        }
    }
    return state;
}

HoloState HolomorphicSolver::solve(cplx z) const {
    const double R = 4.0 * (1.0 + std::abs(z - centre_) + extent_);
    const cplx base = z - centre_;
    const double theta0 = std::abs(base) > 0.0 ? std::arg(base) : 0.0;
    constexpr int order[8] = {0, 1, -1, 2, -2, 3, -3, 4};
    for (int k : order) {
        const cplx far = z + R * std::polar(1.0, theta0 + k * std::numbers::pi / 4.0);
        HoloState start;
        try {
            const cplx A0 = 1.0 / far;
            start = {A0, blue(h_, A0), blue(hp_, I * A0)};
        } catch (const Error&) {
            continue;
        }
        const auto polished = refine(far, start);
        if (!polished) continue;
        if (auto r = continue_path(far, *polished, z, true)) return *r;
    }
    throw NumericalError(fmt::format("holomorphic continuation failed at z = ({}, {})", z.real(), z.imag()));
}

cplx solve_holomorphic(const EnsembleSpec& ens_h, const EnsembleSpec& ens_hp, cplx z) {
    return HolomorphicSolver(ens_h, ens_hp).solve(z).A;
}

cplx blue_sum(const EnsembleSpec& ens_h, const EnsembleSpec& ens_hp, cplx s) {
    return blue(ens_h, s) + I * blue(ens_hp, I * s) - 1.0 / s;
}

// ---------------------------------------------------------------------------

std::pair<EnsembleSpec, EnsembleSpec> model_ensembles(const ReferenceModel& model) {
    if (const auto* g = std::get_if<GinibreModel>(&model)) return {Semicircle{g->r}, Semicircle{g->rp}};
    if (const auto* s = std::get_if<ScatteringModel>(&model)) return {Semicircle{1.0}, Wishart{s->c, s->r}};
    const auto& p = std::get<PasturModel>(model);
    return {TwoPoint{p.mu}, Semicircle{1.0}};
}

NonHoloSolution closed_form_reference(const ReferenceModel& model, cplx z) {
    const double x = z.real();
    const double y = z.imag();
    NonHoloSolution s;
    if (const auto* g = std::get_if<GinibreModel>(&model)) {
        s.m = g->rp / (g->r + g->rp);
        s.g_sum = x / g->r;
        s.g_prod = (1.0 - s.m) / g->r;
        s.gI_sum = y / g->rp;
        s.gI_prod = s.m / g->rp;
        s.G = 0.5 * cplx(x / g->r, -y / g->rp);
        s.C = 0.25 * (x * x / (g->r * g->r) + y * y / (g->rp * g->rp)) - 1.0 / (g->r + g->rp);
    } else if (const auto* sc = std::get_if<ScatteringModel>(&model)) {
        const double c = sc->c, r = sc->r;
        if (y == 0.0 || y * c == 1.0) throw PoleError("scattering reference on a singular line");
        const double k = c / (y * c - 1.0) - r / y - 1.0 / c;
        s.m = y * c / (y * c - 1.0);
        s.g_sum = x;
        s.g_prod = 1.0 / (1.0 - y * c);
        s.gI_sum = k;
        s.gI_prod = -s.m / (y * c);
        s.G = 0.5 * cplx(x, -k);
        s.C = 0.25 * (x * x + k * k) - 1.0 / (1.0 - y * c);
    } else {
        const double mu = std::get<PasturModel>(model).mu;
        const double d = x * x - mu * mu;
        if (d == 0.0) throw PoleError("pastur reference on x^2 = mu^2");
        const double gs = -2.0 * x - x / d;
        s.m = d + 1.0;
        s.g_sum = gs;
        s.g_prod = s.m;
        s.gI_sum = y;
        s.gI_prod = s.m;
        s.G = cplx(-x - x / (2.0 * d), -0.5 * y);
        s.C = 0.25 * (gs * gs + y * y) - s.m;
    }
    s.imag_g = std::sqrt(std::max(0.0, s.g_prod - 0.25 * s.g_sum * s.g_sum));
    s.branch = s.C <= 0.0 ? Branch::NonHolomorphic : Branch::Holomorphic;
    return s;
}

double closed_form_density(const ReferenceModel& model, cplx z) {
    const double x = z.real();
    const double y = z.imag();
    const double inv4pi = 0.25 / std::numbers::pi;
    if (const auto* g = std::get_if<GinibreModel>(&model)) return inv4pi * (g->r + g->rp) / (g->r * g->rp);
    if (const auto* sc = std::get_if<ScatteringModel>(&model)) {
        const double t = y * sc->c - 1.0;
        return inv4pi * (1.0 - sc->c * sc->c / (t * t) + sc->r / (y * y));
    }
    const double mu = std::get<PasturModel>(model).mu;
    const double d = x * x - mu * mu;
    return inv4pi * ((x * x + mu * mu) / (d * d) - 1.0);
}

double borderline_residual(const ReferenceModel& model, double x, double y) {
    if (const auto* g = std::get_if<GinibreModel>(&model))
        return x * x / (g->r * g->r) + y * y / (g->rp * g->rp) - 4.0 / (g->r + g->rp);
    if (const auto* sc = std::get_if<ScatteringModel>(&model)) {
        const double c = sc->c, r = sc->r;
        const double k = c / (y * c - 1.0) - r / y - 1.0 / c;
        return x * x + k * k - 4.0 / (1.0 - y * c);
    }
    const double mu = std::get<PasturModel>(model).mu;
    const double mu2 = mu * mu, x2 = x * x;
    const double d = x2 - mu2;
    const double num = -4.0 * mu2 * x2 * x2 + x2 * (8.0 * mu2 * mu2 - 4.0 * mu2 - 1.0) + 4.0 * mu2 * mu2 * (1.0 - mu2);
    return y * y - num / (d * d);
}

}  // namespace quatgreen
