#include "quatgreen/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "quatgreen/errors.hpp"

namespace quatgreen {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

cplx eval_row(const std::vector<double>& row, cplx s) {
    cplx acc = 0.0;
    for (auto it = row.rbegin(); it != row.rend(); ++it) acc = acc * s + *it;
    return acc;
}

cplx eval_row_derivative(const std::vector<double>& row, cplx s) {
    cplx acc = 0.0;
    for (std::size_t k = row.size(); k-- > 1;) acc = acc * s + static_cast<double>(k) * row[k];
    return acc;
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Coefficients (ascending) of prod_k (w - roots[k]).
std::vector<double> monic_from_roots(const std::vector<double>& roots) {
    std::vector<double> c{1.0};
    for (double r : roots) {
        std::vector<double> next(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= r * c[i];
        }
        c = std::move(next);
    }
    return c;
}

cplx green_atoms(const Atoms& a, cplx z) {
    cplx acc = 0.0;
    for (const auto& at : a.atoms) {
        if (z == cplx(at.lambda, 0.0)) throw PoleError(fmt::format("green evaluated at atom {}", at.lambda));
        acc += at.weight / (z - at.lambda);
    }
    return acc;
}

// Follows the root of P(w, t*s) = 0 that behaves as 1/(t*s) for small t.
cplx blue_atoms(const Atoms& a, const RelationPoly& rel, cplx s) {
    double mean = 0.0, spread = 0.0;
    for (const auto& at : a.atoms) {
        mean += at.weight * at.lambda;
        spread = std::max(spread, std::abs(at.lambda));
    }
    const double t0 = std::min(1.0, 1e-3 / ((1.0 + spread) * std::abs(s)));
    if (t0 >= 1.0) return 1.0 / s + mean;

    constexpr int kSteps = 200;
    cplx w = 1.0 / (t0 * s) + mean;
    cplx s_prev = t0 * s;
    for (int k = 1; k <= kSteps; ++k) {
        const double t = std::pow(t0, 1.0 - static_cast<double>(k) / kSteps);
        const cplx st = t * s;
        const cplx pred = 1.0 / st + (w - 1.0 / s_prev);
        const auto roots = poly_roots(rel.in_w(st));
        if (roots.empty()) throw NumericalError("blue continuation lost all roots");
        w = *std::min_element(roots.begin(), roots.end(), [&](cplx p, cplx q) {
            return std::abs(p - pred) < std::abs(q - pred);
        });
        s_prev = st;
    }
    return w;
}

}  // namespace

void validate(const EnsembleSpec& ens) {
    std::visit(overloaded{
                   [](const Semicircle& e) {
                       if (!positive_finite(e.r)) throw ConfigError(fmt::format("semicircle: r must be > 0, got {}", e.r));
                   },
                   [](const Wishart& e) {
                       if (!positive_finite(e.c) || !positive_finite(e.r))
                           throw ConfigError(fmt::format("wishart: c and r must be > 0, got c={} r={}", e.c, e.r));
                   },
                   [](const TwoPoint& e) {
                       if (!positive_finite(e.mu)) throw ConfigError(fmt::format("two_atoms: mu must be > 0, got {}", e.mu));
                   },
                   [](const Atoms& e) {
                       if (e.atoms.empty()) throw ConfigError("atoms: empty atom list");
                       double total = 0.0;
                       for (const auto& at : e.atoms) {
                           if (!std::isfinite(at.lambda) || !positive_finite(at.weight))
                               throw ConfigError(fmt::format("atoms: invalid atom ({}, {})", at.lambda, at.weight));
                           total += at.weight;
                       }
                       if (std::abs(total - 1.0) > 1e-12)
                           throw ConfigError(fmt::format("atoms: weights sum to {}, expected 1", total));
                       std::vector<double> ls;
                       for (const auto& at : e.atoms) ls.push_back(at.lambda);
                       std::sort(ls.begin(), ls.end());
                       if (std::adjacent_find(ls.begin(), ls.end()) != ls.end())
                           throw ConfigError("atoms: duplicate atom positions");
                   },
               },
               ens);
}

std::string kind_name(const EnsembleSpec& ens) {
    return std::visit(overloaded{
                          [](const Semicircle&) { return std::string("semicircle"); },
                          [](const Wishart&) { return std::string("wishart"); },
                          [](const TwoPoint&) { return std::string("two_atoms"); },
                          [](const Atoms&) { return std::string("atoms"); },
                      },
                      ens);
}

Interval support(const EnsembleSpec& ens) {
    return std::visit(overloaded{
                          [](const Semicircle& e) {
                              const double a = 2.0 * std::sqrt(e.r);
                              return Interval{-a, a};
                          },
                          [](const Wishart& e) {
                              const double sr = std::sqrt(e.r);
                              const double lo = -e.c * (1.0 + sr) * (1.0 + sr);
                              double hi = -e.c * (1.0 - sr) * (1.0 - sr);
                              if (e.r < 1.0) hi = 0.0;
                              return Interval{lo, hi};
                          },
                          [](const TwoPoint& e) { return Interval{-e.mu, e.mu}; },
                          [](const Atoms& e) {
                              Interval iv{std::numeric_limits<double>::infinity(),
                                          -std::numeric_limits<double>::infinity()};
                              for (const auto& at : e.atoms) {
                                  iv.lo = std::min(iv.lo, at.lambda);
                                  iv.hi = std::max(iv.hi, at.lambda);
                              }
                              return iv;
                          },
                      },
                      ens);
}

cplx green(const EnsembleSpec& ens, cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("green: non-finite argument");
    return std::visit(
        overloaded{
            [&](const Semicircle& e) -> cplx {
                const double a = 2.0 * std::sqrt(e.r);
                if (z.imag() == 0.0) {
                    if (std::abs(z.real()) == a) throw PoleError("green: semicircle band edge");
                    if (std::abs(z.real()) < a) throw DomainError("green: real argument inside the support");
                }
                return 2.0 / (z + std::sqrt(z - a) * std::sqrt(z + a));
            },
            [&](const Wishart& e) -> cplx {
                const double sr = std::sqrt(e.r);
                const double lo = -e.c * (1.0 + sr) * (1.0 + sr);
                const double hi = -e.c * (1.0 - sr) * (1.0 - sr);
                if (z.imag() == 0.0) {
                    if (z.real() == lo || z.real() == hi) throw PoleError("green: wishart band edge");
                    if (z.real() > lo && z.real() < hi) throw DomainError("green: real argument inside the support");
                }
                const cplx den = z + e.c * e.r - e.c + std::sqrt(z - lo) * std::sqrt(z - hi);
                if (den == 0.0) throw PoleError("green: wishart atom at 0");
                return 2.0 / den;
            },
            [&](const TwoPoint& e) -> cplx {
                if (z == cplx(e.mu, 0.0) || z == cplx(-e.mu, 0.0)) throw PoleError("green: evaluated at an atom");
                return 0.5 * (1.0 / (z - e.mu) + 1.0 / (z + e.mu));
            },
            [&](const Atoms& e) -> cplx { return green_atoms(e, z); },
        },
        ens);
}

cplx blue(const EnsembleSpec& ens, cplx s) {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) throw DomainError("blue: non-finite argument");
    if (s == 0.0) throw PoleError("blue: pole at s = 0");
    return std::visit(overloaded{
                          [&](const Semicircle& e) -> cplx { return e.r * s + 1.0 / s; },
                          [&](const Wishart& e) -> cplx {
                              const cplx d = 1.0 + e.c * s;
                              if (d == 0.0) throw PoleError("blue: wishart pole at s = -1/c");
                              return -e.c * e.r / d + 1.0 / s;
                          },
                          [&](const TwoPoint& e) -> cplx {
                              return (1.0 + std::sqrt(1.0 + 4.0 * e.mu * e.mu * s * s)) / (2.0 * s);
                          },
                          [&](const Atoms& e) -> cplx { return blue_atoms(e, relation(ens), s); },
                      },
                      ens);
}

int RelationPoly::deg_s() const {
    int d = -1;
    for (const auto& row : p)
        for (int j = static_cast<int>(row.size()) - 1; j >= 0; --j)
            if (row[j] != 0.0) {
                d = std::max(d, j);
                break;
            }
    return d;
}

cplx RelationPoly::operator()(cplx w, cplx s) const {
    cplx acc = 0.0;
    cplx wi = 1.0;
    for (const auto& row : p) {
        acc += wi * eval_row(row, s);
        wi *= w;
    }
    return acc;
}

cplx RelationPoly::dw(cplx w, cplx s) const {
    cplx acc = 0.0;
    cplx wi = 1.0;
    for (std::size_t i = 1; i < p.size(); ++i) {
        acc += static_cast<double>(i) * wi * eval_row(p[i], s);
        wi *= w;
    }
    return acc;
}

cplx RelationPoly::ds(cplx w, cplx s) const {
    cplx acc = 0.0;
    cplx wi = 1.0;
    for (const auto& row : p) {
        acc += wi * eval_row_derivative(row, s);
        wi *= w;
    }
    return acc;
}

std::vector<cplx> RelationPoly::in_w(cplx s) const {
    std::vector<cplx> c;
    c.reserve(p.size());
    for (const auto& row : p) c.push_back(eval_row(row, s));
    return c;
}

RelationPoly relation(const EnsembleSpec& ens) {
    return std::visit(
        overloaded{
            // r s^2 - w s + 1
            [](const Semicircle& e) { return RelationPoly{{{1.0, 0.0, e.r}, {0.0, -1.0, 0.0}}}; },
            // c w s^2 + w s + (c r - c) s - 1
            [](const Wishart& e) {
                return RelationPoly{{{-1.0, e.c * e.r - e.c, 0.0}, {0.0, 1.0, e.c}}};
            },
            // s w^2 - mu^2 s - w
            [](const TwoPoint& e) {
                return RelationPoly{{{0.0, -e.mu * e.mu}, {-1.0, 0.0}, {0.0, 1.0}}};
            },
            // s prod(w - l_k) - sum_k w_k prod_{j != k}(w - l_j)
            [](const Atoms& e) {
                std::vector<double> ls;
                for (const auto& at : e.atoms) ls.push_back(at.lambda);
                const auto num = monic_from_roots(ls);
                std::vector<double> den(ls.size(), 0.0);
                for (std::size_t k = 0; k < ls.size(); ++k) {
                    std::vector<double> others;
                    for (std::size_t j = 0; j < ls.size(); ++j)
                        if (j != k) others.push_back(ls[j]);
                    const auto part = monic_from_roots(others);
                    for (std::size_t i = 0; i < part.size(); ++i) den[i] += e.atoms[k].weight * part[i];
                }
                RelationPoly rel;
                rel.p.assign(num.size(), {0.0, 0.0});
                for (std::size_t i = 0; i < num.size(); ++i) rel.p[i][1] = num[i];
                for (std::size_t i = 0; i < den.size(); ++i) rel.p[i][0] = -den[i];
                return rel;
            },
        },
        ens);
}

std::vector<RealPoly> shifted_blue_coeffs(const EnsembleSpec& ens, double t) {
    // g^D P(t + m/g, g) = sum_ij p_ij (t g + m)^i g^(D - i + j)
    const RelationPoly rel = relation(ens);
    const int D = rel.deg_w();
    int lowest = std::numeric_limits<int>::max();
    int highest = -1;
    int jmax = -1;
    for (int i = 0; i <= D; ++i)
        for (int j = 0; j < static_cast<int>(rel.p[i].size()); ++j)
            if (rel.p[i][j] != 0.0) {
                lowest = std::min(lowest, D - i + j);
                highest = std::max(highest, D + j);
                jmax = std::max(jmax, j);
            }

    std::vector<RealPoly> out(highest - lowest + 1);
    for (int i = 0; i <= D; ++i)
        for (int j = 0; j < static_cast<int>(rel.p[i].size()); ++j) {
            const double pij = rel.p[i][j];
            if (pij == 0.0) continue;
            for (int k = 0; k <= i; ++k) {
                std::vector<double> mono(i - k + 1, 0.0);
                mono[i - k] = pij * binomial(i, k) * std::pow(t, k);
                out[k + D - i + j - lowest] += RealPoly(std::move(mono));
            }
        }

    double lead = 0.0, scale = 0.0;
    for (int i = 0; i <= D; ++i) {
        if (jmax < static_cast<int>(rel.p[i].size())) {
            const double term = rel.p[i][jmax] * std::pow(t, i);
            lead += term;
            scale += std::abs(term);
        }
    }
    if (std::abs(lead) <= 1e-13 * scale || lead == 0.0) {
        throw DegenerateError(fmt::format("shifted blue polynomial loses its leading term at t = {}", t));
    }
    return out;
}

ShiftedBluePoly evaluate_at(const std::vector<RealPoly>& coeffs, double m) {
    ShiftedBluePoly p;
    p.coeffs.reserve(coeffs.size());
    for (const auto& c : coeffs) p.coeffs.emplace_back(c(m));
    return p;
}

ShiftedBluePoly shifted_blue_poly(const EnsembleSpec& ens, double t, double m) {
    return evaluate_at(shifted_blue_coeffs(ens, t), m);
}

std::optional<SymmetricPair> viete_symmetric(const ShiftedBluePoly& poly) {
    if (poly.degree() != 2 || poly.coeffs[2] == 0.0) return std::nullopt;
    return SymmetricPair{-poly.coeffs[1] / poly.coeffs[2], poly.coeffs[0] / poly.coeffs[2]};
}

std::vector<ConjugatePair> conjugate_pairs(const ShiftedBluePoly& poly, double tol) {
    std::vector<ConjugatePair> out;
    if (poly.degree() == 2 && poly.coeffs[2] != 0.0) {
        const double c2 = poly.coeffs[2].real(), c1 = poly.coeffs[1].real(), c0 = poly.coeffs[0].real();
        const double disc = c1 * c1 - 4.0 * c2 * c0;
        if (disc < 0.0) out.push_back({-c1 / c2, c0 / c2, std::sqrt(-disc) / (2.0 * std::abs(c2))});
        return out;
    }
    std::vector<cplx> real_coeffs;
    for (const auto& c : poly.coeffs) real_coeffs.emplace_back(c.real());
    for (const cplx& r : poly_roots(real_coeffs)) {
        if (r.imag() > tol * (1.0 + std::abs(r))) out.push_back({2.0 * r.real(), std::norm(r), r.imag()});
    }
    std::sort(out.begin(), out.end(), [](const auto& p, const auto& q) { return p.imag > q.imag; });
    return out;
}

std::optional<ConjugatePair> conjugate_pair_roots(const ShiftedBluePoly& poly, double tol) {
    auto pairs = conjugate_pairs(poly, tol);
    if (pairs.empty()) return std::nullopt;
    return pairs.front();
}

}  // namespace quatgreen
