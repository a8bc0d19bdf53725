#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "quatgreen/errors.hpp"
#include "quatgreen/solver.hpp"

using namespace quatgreen;

namespace {

const std::vector<cplx> kProbe = {cplx(0.31, 0.17),  cplx(-0.62, 0.44), cplx(0.05, -0.93), cplx(1.1, 0.23),
                                  cplx(-0.27, -1.21), cplx(0.9, 0.9),   cplx(1.7, -0.3),   cplx(-2.4, 1.9)};

}  // namespace

TEST_CASE("ginibre: G = conj(z)/2 inside, 1/z outside") {
    const EnsembleSpec sc = Semicircle{1.0};
    for (const cplx z : kProbe) {
        const auto sol = solve_general(sc, sc, z);
        const double r2 = std::norm(z);
        CAPTURE(z);
        if (r2 < 2.0) {
            CHECK(sol.branch == Branch::NonHolomorphic);
            CHECK(std::abs(sol.G - std::conj(z) / 2.0) < 1e-10);
            CHECK(sol.C == doctest::Approx(r2 / 4.0 - 0.5).epsilon(1e-10));
        } else {
            CHECK(sol.branch == Branch::Holomorphic);
            CHECK(std::abs(sol.G - 1.0 / z) < 1e-10);
        }
        CHECK(inside_domain(sc, sc, z) == (r2 < 2.0));
    }
    CHECK(closed_form_density(GinibreModel{}, cplx(0.2, 0.1)) == doctest::Approx(1.0 / (2.0 * std::numbers::pi)));
    CHECK(std::abs(borderline_residual(GinibreModel{}, 1.0, 1.0)) < 1e-14);
}

TEST_CASE("general solver agrees with every closed form") {
    const std::vector<ReferenceModel> models = {GinibreModel{1.0, 1.0}, GinibreModel{2.0, 0.5}, ScatteringModel{1.0, 1.0},
                                                ScatteringModel{0.5, 2.0}, PasturModel{0.5}, PasturModel{1.2}};
    for (const auto& model : models) {
        const auto [h, hp] = model_ensembles(model);
        int checked = 0;
        for (double x = -2.05; x <= 2.05; x += 0.3) {
            for (double y = -3.55; y <= 1.05; y += 0.3) {
                const cplx z(x, y);
                NonHoloSolution ref;
                try {
                    ref = closed_form_reference(model, z);
                } catch (const PoleError&) {
                    continue;
                }
                if (ref.branch != Branch::NonHolomorphic || ref.C > -1e-6) continue;
                const auto sol = solve_general(h, hp, z, {false});
                CAPTURE(z);
                CHECK(sol.branch == Branch::NonHolomorphic);
                CHECK(std::abs(sol.G - ref.G) < 1e-8);
                CHECK(std::abs(sol.C - ref.C) < 1e-8);
                ++checked;
            }
        }
        CHECK(checked > 5);
    }
}

TEST_CASE("semicircle special path matches the general solver") {
    for (const EnsembleSpec& hp : {EnsembleSpec{Semicircle{1.0}}, EnsembleSpec{Wishart{1.0, 1.0}}}) {
        for (const cplx z : kProbe) {
            const auto a = solve_general(Semicircle{1.0}, hp, z, {false});
            const auto b = solve_gue_special(hp, z, {false});
            CAPTURE(z);
            CHECK(a.branch == b.branch);
            if (a.branch == Branch::NonHolomorphic) {
                CHECK(std::abs(a.G - b.G) < 1e-8);
                CHECK(std::abs(a.C - b.C) < 1e-8);
            }
        }
    }
}

TEST_CASE("holomorphic branch solves the complex blue equation") {
    const std::vector<std::pair<EnsembleSpec, EnsembleSpec>> pairs = {
        {Semicircle{1.0}, Semicircle{1.0}}, {Semicircle{1.0}, Wishart{1.0, 1.0}}, {TwoPoint{1.2}, Semicircle{1.0}}};
    for (const auto& [h, hp] : pairs) {
        const HolomorphicSolver solver(h, hp);
        for (const cplx z : {cplx(3.0, 0.5), cplx(-2.5, -2.5), cplx(0.2, 4.0), cplx(0.0, -6.0)}) {
            const auto st = solver.solve(z);
            CHECK(solver.residual(z, st) < 1e-10);
            CHECK(std::abs(blue_sum(h, hp, st.A) - z) < 1e-9);
            CHECK(std::abs(st.A - solve_holomorphic(h, hp, z)) < 1e-12);
        }
        // A z - 1 = mean(X)/z + O(1/z^2)
        const cplx far(60.0, 80.0);
        CHECK(std::abs(solver.solve(far).A * far - 1.0) < 2.5 / std::abs(far));
        CHECK(std::abs(solver.solve(far).A - 1.0 / far) < 1e-3);
    }
}

TEST_CASE("pastur 1.2 splits into two islands") {
    const auto [h, hp] = model_ensembles(PasturModel{1.2});
    // Island centres lie inside x = +-mu, away from the singular lines.
    CHECK(inside_domain(h, hp, cplx(0.95, 0.3)));
    CHECK(inside_domain(h, hp, cplx(-0.95, -0.3)));
    CHECK_FALSE(inside_domain(h, hp, cplx(0.0, 0.01)));
    const auto [h5, hp5] = model_ensembles(PasturModel{0.5});
    CHECK(inside_domain(h5, hp5, cplx(0.0, 0.01)));
}

TEST_CASE("closed forms reject singular lines") {
    CHECK_THROWS_AS(closed_form_reference(PasturModel{1.0}, cplx(1.0, 0.3)), PoleError);
    CHECK_THROWS_AS(closed_form_reference(ScatteringModel{1.0, 1.0}, cplx(0.3, 0.0)), PoleError);
}

TEST_CASE("candidate ordering") {
    const EnsembleSpec sc = Semicircle{1.0};
    const auto cands = nonholo_candidates(sc, sc, cplx(0.4, 0.3));
    REQUIRE_FALSE(cands.empty());
    CHECK(cands.front().C <= 0.0);
    for (const auto& c : cands) {
        CHECK(c.g_prod > 0.0);
        CHECK(c.gI_prod > 0.0);
    }
    const auto f = formal_solution(sc, sc, cplx(0.4, 0.3));
    REQUIRE(f);
    CHECK(f->C == doctest::Approx(cands.front().C));
}
