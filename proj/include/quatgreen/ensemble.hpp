#pragma once

#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "quatgreen/polynomial.hpp"

namespace quatgreen {

using cplx = std::complex<double>;

/// Semicircle of radius 2*sqrt(r); B(s) = r*s + 1/s.
struct Semicircle {
    double r = 1.0;
};

/// B(s) = -c*r/(1 + c*s) + 1/s. Support [-c(1+sqrt r)^2, -c(1-sqrt r)^2], plus
/// an atom at 0 of weight 1 - r when r < 1.
struct Wishart {
    double c = 1.0;
    double r = 1.0;
};

/// Deterministic atoms at +mu and -mu with equal weight.
struct TwoPoint {
    double mu = 1.0;
};

struct Atom {
    double lambda = 0.0;
    double weight = 0.0;
};

/// Deterministic spectrum sum_k w_k delta(x - lambda_k), sum w_k = 1.
struct Atoms {
    std::vector<Atom> atoms;
};

using EnsembleSpec = std::variant<Semicircle, Wishart, TwoPoint, Atoms>;

/// Throws ConfigError on non-finite or out-of-range parameters.
void validate(const EnsembleSpec& ens);

std::string kind_name(const EnsembleSpec& ens);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Convex hull of the spectrum (atoms included).
Interval support(const EnsembleSpec& ens);

/// Holomorphic resolvent, G(z) ~ 1/z at infinity. Real z strictly inside a
/// continuous support throws DomainError; atoms and band edges throw PoleError.
cplx green(const EnsembleSpec& ens, cplx z);

/// Functional inverse of green on the branch with B(s) ~ 1/s near s = 0.
/// Throws PoleError at s = 0 and at s = -1/c for Wishart.
cplx blue(const EnsembleSpec& ens, cplx s);

/**
 * Algebraic relation P(w, s) = sum_ij p[i][j] w^i s^j that vanishes on
 * s = G(w), equivalently w = B(s).
 */
struct RelationPoly {
    std::vector<std::vector<double>> p;

    int deg_w() const { return static_cast<int>(p.size()) - 1; }
    int deg_s() const;
    cplx operator()(cplx w, cplx s) const;
    cplx dw(cplx w, cplx s) const;
    cplx ds(cplx w, cplx s) const;
    /// Coefficients in w (ascending) at fixed s.
    std::vector<cplx> in_w(cplx s) const;
};

RelationPoly relation(const EnsembleSpec& ens);

/// Coefficients (ascending in g) of B(g) = t + m/g cleared of denominators,
/// at fixed t and numeric m.
struct ShiftedBluePoly {
    std::vector<cplx> coeffs;
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

/**
 * Same polynomial with m kept symbolic: entry k is the coefficient of g^k as a
 * polynomial in m. Common structural powers of g are divided out, so the
 * constant term is not identically zero. Throws DegenerateError when the
 * leading coefficient vanishes at this t.
 */
std::vector<RealPoly> shifted_blue_coeffs(const EnsembleSpec& ens, double t);

ShiftedBluePoly shifted_blue_poly(const EnsembleSpec& ens, double t, double m);

/// Evaluates a symbolic coefficient vector at m.
ShiftedBluePoly evaluate_at(const std::vector<RealPoly>& coeffs, double m);

struct SymmetricPair {
    cplx sum;
    cplx product;
};

/// Root sum and product of a quadratic; nullopt for any other degree.
std::optional<SymmetricPair> viete_symmetric(const ShiftedBluePoly& poly);

struct ConjugatePair {
    double sum = 0.0;      ///< g + conj(g)
    double product = 0.0;  ///< |g|^2
    double imag = 0.0;     ///< |Im g|
};

/// All non-real conjugate root pairs, largest |Im g| first.
std::vector<ConjugatePair> conjugate_pairs(const ShiftedBluePoly& poly, double tol = 1e-9);

/// Pair with the largest |Im g|; nullopt when every root is real.
std::optional<ConjugatePair> conjugate_pair_roots(const ShiftedBluePoly& poly, double tol = 1e-9);

}  // namespace quatgreen
