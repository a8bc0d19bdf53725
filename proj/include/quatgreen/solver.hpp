#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "quatgreen/ensemble.hpp"
#include "quatgreen/quaternion.hpp"

namespace quatgreen {

enum class Branch { NonHolomorphic, Holomorphic, Outside };

std::string branch_name(Branch b);

/**
 * Solution of B_X(G) = Z at one point z = x + iy. For the non-holomorphic
 * branch g and g^I are the conjugate root pairs of
 *   B_H(g) = x + m/g,  B_H'(g^I) = y + (1 - m)/g^I,
 * G = (g_sum - i gI_sum)/2 and C = (g_sum^2 + gI_sum^2)/4 - g_prod.
 * On the holomorphic branch only G is meaningful and C = 0.
 */
struct NonHoloSolution {
    static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

    double m = kNaN;
    double g_sum = kNaN;
    double g_prod = kNaN;
    double gI_sum = kNaN;
    double gI_prod = kNaN;
    double imag_g = 0.0;  ///< |Im g| of the selected pair
    cplx G{kNaN, kNaN};
    double C = kNaN;
    Branch branch = Branch::Outside;
};

/// Off-diagonal quaternion entry magnitude |b| = sqrt(-C) of G_X(Z) on the
/// non-holomorphic branch.
Quaternion green_quaternion(const NonHoloSolution& s);

/**
 * All real m for which both shifted Blue polynomials have root pairs with
 * positive products (g_prod > 0, gI_prod > 0). Candidates with C <= 0 are
 * non-holomorphic solutions; those with C > 0 continue the C field outside
 * the domain. Sorted: admissible first by decreasing |Im g|, then by
 * increasing C. A vanishing leading coefficient is retried once at
 * z + (1 + i)*1e-9 before DegenerateError propagates.
 */
std::vector<NonHoloSolution> nonholo_candidates(const EnsembleSpec& ens_h, const EnsembleSpec& ens_hp, cplx z);

/// First candidate of nonholo_candidates (the one used for contouring C).
std::optional<NonHoloSolution> formal_solution(const EnsembleSpec& ens_h, const EnsembleSpec& ens_hp, cplx z);

/// True when z has an admissible candidate with C < -tol.
bool inside_domain(const EnsembleSpec& ens_h, const EnsembleSpec& ens_hp, cplx z, double tol = 1e-12);

struct SolveOptions {
    /// Fill G on the holomorphic branch by path continuation.
    bool holomorphic = true;
};

/// Three-step algorithm: candidates in m, admissibility, then G and C.
NonHoloSolution solve_general(const EnsembleSpec& ens_h, const EnsembleSpec& ens_hp, cplx z,
                              const SolveOptions& opts = {});

/**
 * Specialised path for H = semicircle(1): h-pair of G_H'(h) = m - h with
 * h + conj(h) = y + m, G = (z - i m)/2, C = (x^2 + (y + m)^2)/4 - |h|^2.
 * The returned m is the split parameter of this formulation, not the one of
 * solve_general.
 */
NonHoloSolution solve_gue_special(const EnsembleSpec& ens_hp, cplx z, const SolveOptions& opts = {});

/// (A, B_H(A), B_H'(iA)) tracked along continuation paths.
struct HoloState {
    cplx A;
    cplx w1;
    cplx w2;
};

/**
 * Holomorphic branch of B_X(A) = z with B_X(s) = B_H(s) + i B_H'(i s) - 1/s,
 * selected by A ~ 1/z at infinity and continued inward along paths that avoid
 * the non-holomorphic domain.
 */
class HolomorphicSolver {
public:
    HolomorphicSolver(EnsembleSpec ens_h, EnsembleSpec ens_hp);

    /// Far-field start plus straight-line continuation; tries 8 directions.
    /// Throws NumericalError if every path fails.
    HoloState solve(cplx z) const;

    /// Newton polish from a nearby state; nullopt if it does not converge close to `guess`.
    std::optional<HoloState> refine(cplx z, const HoloState& guess) const;

    /// Adaptive continuation from (from, state) to `to`. With `check_domain`
    /// the path is rejected when it enters the non-holomorphic domain.
    std::optional<HoloState> continue_path(cplx from, HoloState state, cplx to, bool check_domain) const;

    /// max |.| of the three defining equations at `s`.
    double residual(cplx z, const HoloState& s) const;

private:
    EnsembleSpec h_, hp_;
    RelationPoly rel_h_, rel_hp_;
    cplx centre_;
    double extent_;
};

cplx solve_holomorphic(const EnsembleSpec& ens_h, const EnsembleSpec& ens_hp, cplx z);

/// Complex Blue's function of X: B_H(s) + i B_H'(i s) - 1/s.
cplx blue_sum(const EnsembleSpec& ens_h, const EnsembleSpec& ens_hp, cplx s);

struct GinibreModel {
    double r = 1.0;
    double rp = 1.0;
};
/// H = semicircle(1), H' = wishart(c, r).
struct ScatteringModel {
    double c = 1.0;
    double r = 1.0;
};
/// H = two atoms at +-mu, H' = semicircle(1).
struct PasturModel {
    double mu = 1.0;
};
using ReferenceModel = std::variant<GinibreModel, ScatteringModel, PasturModel>;

std::pair<EnsembleSpec, EnsembleSpec> model_ensembles(const ReferenceModel& model);

/// Closed-form (formal) solution; branch is NonHolomorphic when C <= 0.
/// Throws PoleError on the singular lines (y = 0 or yc = 1; x^2 = mu^2).
NonHoloSolution closed_form_reference(const ReferenceModel& model, cplx z);

/// Closed-form density inside the domain.
double closed_form_density(const ReferenceModel& model, cplx z);

/// Residual of the closed-form borderline equation at (x, y).
double borderline_residual(const ReferenceModel& model, double x, double y);

}  // namespace quatgreen
