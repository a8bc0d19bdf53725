#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "quatgreen/borderline.hpp"
#include "quatgreen/contour.hpp"
#include "quatgreen/solver.hpp"

using namespace quatgreen;

namespace {

NodeField sample(int n, double lo, double hi, double (*f)(double, double)) {
    NodeField field;
    for (int k = 0; k < n; ++k) {
        field.xs.push_back(lo + (hi - lo) * k / (n - 1));
        field.ys.push_back(lo + (hi - lo) * k / (n - 1));
    }
    for (double y : field.ys)
        for (double x : field.xs) field.values.push_back(f(x, y));
    return field;
}

double max_residual(const BorderlineCurve& bl, const ReferenceModel& model) {
    double worst = 0.0;
    for (const auto& pl : bl.curves)
        for (const auto& p : pl.points) worst = std::max(worst, std::abs(borderline_residual(model, p[0], p[1])));
    return worst;
}

}  // namespace

TEST_CASE("marching squares traces a circle") {
    const auto field = sample(41, -2.0, 2.0, [](double x, double y) { return x * x + y * y - 1.0; });
    const auto curves = marching_squares(field);
    REQUIRE(curves.size() == 1);
    CHECK(curves[0].closed);
    for (const auto& p : curves[0].points) CHECK(std::hypot(p[0], p[1]) == doctest::Approx(1.0).epsilon(5e-3));
}

TEST_CASE("curves cut by the grid edge stay open") {
    const auto field = sample(31, 0.0, 2.0, [](double x, double y) { return x * x + y * y - 1.0; });
    const auto curves = marching_squares(field);
    REQUIRE(curves.size() == 1);
    CHECK_FALSE(curves[0].closed);
}

TEST_CASE("nan nodes count as outside") {
    const auto field = sample(31, -2.0, 2.0, [](double x, double y) {
        return x > 1.0 ? std::nan("") : x * x + y * y - 0.25;
    });
    const auto curves = marching_squares(field);
    REQUIRE(curves.size() == 1);
    CHECK(curves[0].closed);
}

TEST_CASE("saddle resolution follows the centre value") {
    // Diagonal corners negative: joined or separated depending on the centre.
    NodeField field{{0.0, 1.0}, {0.0, 1.0}, {-1.0, 1.0, 1.0, -1.0}};
    ContourOptions joined;
    joined.centre_value = [](double, double) { return -1.0; };
    ContourOptions split;
    split.centre_value = [](double, double) { return 1.0; };
    const auto a = marching_squares(field, joined);
    const auto b = marching_squares(field, split);
    REQUIRE(a.size() == 2);
    REQUIRE(b.size() == 2);
    // Separated corners cut off the negative corners; joined ones cut off the positive corners.
    auto near = [](const std::vector<Polyline>& cs, Point2 corner) {
        for (const auto& c : cs) {
            bool all = true;
            for (const auto& p : c.points) all = all && std::hypot(p[0] - corner[0], p[1] - corner[1]) < 0.75;
            if (all) return true;
        }
        return false;
    };
    CHECK(near(b, {0.0, 0.0}));
    CHECK(near(b, {1.0, 1.0}));
    CHECK(near(a, {1.0, 0.0}));
    CHECK(near(a, {0.0, 1.0}));
}

TEST_CASE("ginibre borderline is the circle of radius sqrt 2") {
    const EnsembleSpec sc = Semicircle{1.0};
    const auto bl = borderline(sc, sc, GridSpec{-2, 2, -2, 2, 61, 61});
    REQUIRE(bl.curves.size() == 1);
    CHECK(bl.all_closed());
    for (const auto& p : bl.curves[0].points) CHECK(std::hypot(p[0], p[1]) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("reference borderlines satisfy their closed forms") {
    SUBCASE("ellipse") {
        const auto [h, hp] = model_ensembles(GinibreModel{2.0, 1.0});
        const auto bl = borderline(h, hp, GridSpec{-3, 3, -2, 2, 91, 61});
        CHECK(bl.all_closed());
        CHECK(max_residual(bl, GinibreModel{2.0, 1.0}) < 1e-6);
    }
    SUBCASE("scattering") {
        const auto [h, hp] = model_ensembles(ScatteringModel{1.0, 1.0});
        const auto bl = borderline(h, hp, GridSpec{-2.2, 2.2, -4.17, 0.23, 71, 71});
        CHECK(bl.all_closed());
        CHECK(max_residual(bl, ScatteringModel{1.0, 1.0}) < 1e-6);
    }
    SUBCASE("pastur") {
        for (double mu : {0.5, 1.2}) {
            const auto [h, hp] = model_ensembles(PasturModel{mu});
            const auto bl = borderline(h, hp, GridSpec{-2.5, 2.5, -2.5, 2.5, 100, 100});
            CAPTURE(mu);
            CHECK(bl.all_closed());
            CHECK(bl.curves.size() == (mu < 1.0 ? 1u : 2u));
            CHECK(max_residual(bl, PasturModel{mu}) < 1e-6);
        }
    }
}

TEST_CASE("automatic box closes every curve") {
    const auto [h, hp] = model_ensembles(ScatteringModel{1.0, 1.0});
    const auto bl = borderline_auto(h, hp, 81, 81);
    CHECK(bl.all_closed());
    CHECK_FALSE(bl.curves.empty());
    const auto box = default_bbox(h, hp, 81, 81);
    CHECK(bl.grid.x1 - bl.grid.x0 >= box.x1 - box.x0);
}

TEST_CASE("formal C field and json layout") {
    const EnsembleSpec sc = Semicircle{1.0};
    const GridSpec spec{-2, 2, -2, 2, 9, 9};
    const auto field = formal_c_field(sc, sc, spec, 1);
    CHECK(field.values.size() == 81u);
    CHECK(field.at(4, 4) == doctest::Approx(-0.5));
    const auto j = to_json(borderline(sc, sc, GridSpec{-2, 2, -2, 2, 21, 21}));
    REQUIRE(j.contains("curves"));
    CHECK(j["curves"][0]["closed"].get<bool>());
    CHECK(j["curves"][0]["points"][0].size() == 2u);
}
