#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "quatgreen/errors.hpp"
#include "quatgreen/mc_oracle.hpp"

using namespace quatgreen;

namespace {

struct Analytic {
    SpectralGrid grid;
    BorderlineCurve curve;
};

Analytic analytic(const EnsembleSpec& h, const EnsembleSpec& hp, const GridSpec& spec) {
    Analytic a{solve_grid(h, hp, spec, {0, false, false}), {}};
    a.curve = borderline(h, hp, spec);
    return a;
}

CMatrix random_matrix(int n, std::uint64_t seed) {
    const NormalStream s(seed, 0, 77);
    CMatrix m(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const auto [a, b] = s.normals(static_cast<std::uint64_t>(j) * n + i);
            m(i, j) = cplx(a, b);
        }
    return m;
}

}  // namespace

TEST_CASE("philox4x32-10 known answers") {
    using A4 = std::array<std::uint32_t, 4>;
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("normal stream moments and independence of keys") {
    const NormalStream s(42, 3, 1);
    double mean = 0.0, var = 0.0;
    constexpr int kCount = 200000;
    for (int k = 0; k < kCount / 2; ++k) {
        const auto [a, b] = s.normals(k);
        mean += a + b;
        var += a * a + b * b;
    }
    mean /= kCount;
    var = var / kCount - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(var - 1.0) < 0.02);
    CHECK(s.normals(5) == NormalStream(42, 3, 1).normals(5));
    CHECK(s.normals(5) != NormalStream(42, 4, 1).normals(5));
    CHECK(s.normals(5) != NormalStream(42, 3, 2).normals(5));
    CHECK(s.normals(5) != NormalStream(43, 3, 1).normals(5));
}

TEST_CASE("sample configuration") {
    CHECK_THROWS_AS(validate(SampleConfig{1, 1, 1, Semicircle{1.0}, Semicircle{1.0}}), ConfigError);
    CHECK_THROWS_AS(validate(SampleConfig{4096, 2048, 1, Semicircle{1.0}, Semicircle{1.0}}), ConfigError);
    std::vector<std::string> warnings;
    CHECK(effective_size(SampleConfig{101, 1, 1, TwoPoint{0.5}, Semicircle{1.0}}, &warnings) == 100);
    CHECK(warnings.size() == 1u);
    CHECK(effective_size(SampleConfig{101, 1, 1, Semicircle{1.0}, Semicircle{1.0}}) == 101);
}

TEST_CASE("hermitian samplers") {
    const NormalStream s(7, 0, kTagH), p(7, 0, kTagPermuteH);
    SUBCASE("semicircle(1) edge at n = 512") {
        const auto e = hermitian_eigenvalues(sample_hermitian(Semicircle{1.0}, 512, s, p));
        CHECK(e.back() >= 1.9);
        CHECK(e.back() <= 2.1);
        CHECK(e.front() <= -1.9);
        CHECK(e.front() >= -2.1);
    }
    SUBCASE("semicircle(4) second moment") {
        const CMatrix h = sample_hermitian(Semicircle{4.0}, 512, s, p);
        CHECK((h - h.adjoint()).norm() == 0.0);
        const double m2 = (h * h).trace().real() / 512.0;
        CHECK(m2 == doctest::Approx(4.0).epsilon(0.3 / 4.0));
    }
    SUBCASE("two atoms split evenly") {
        const auto e = hermitian_eigenvalues(sample_hermitian(TwoPoint{0.5}, 100, s, p));
        CHECK(std::count(e.begin(), e.end(), -0.5) == 50);
        CHECK(std::count(e.begin(), e.end(), 0.5) == 50);
    }
    SUBCASE("wishart is negative definite on the declared support") {
        const Wishart w{1.0, 0.5};
        const auto e = hermitian_eigenvalues(sample_hermitian(w, 400, s, p));
        const auto sup = support(w);
        CHECK(e.back() <= 1e-12);
        CHECK(e.front() >= sup.lo - 0.3);
    }
}

TEST_CASE("empirical stieltjes at 3i") {
    for (const EnsembleSpec& ens : {EnsembleSpec{Semicircle{1.0}}, EnsembleSpec{Wishart{1.0, 1.0}},
                                    EnsembleSpec{TwoPoint{1.2}}}) {
        const int n = 256;
        const auto e = hermitian_eigenvalues(sample_hermitian(ens, n, NormalStream(3, 0, 1), NormalStream(3, 0, 2)));
        const cplx z(0.0, 3.0);
        CAPTURE(kind_name(ens));
        CHECK(std::abs(empirical_stieltjes(e, z) - green(ens, z)) < 5.0 / std::sqrt(double(n)) + 0.01);
    }
}

TEST_CASE("wishart calibration") {
    const auto cal = calibrate_wishart(Wishart{1.0, 1.0}, 11);
    CHECK(cal.validated);
    CHECK(cal.max_rel_err < 0.02);
    CHECK(cal.points.size() == 5u);
}

TEST_CASE("sampling is deterministic") {
    const SampleConfig cfg{64, 3, 99, Semicircle{1.0}, Wishart{1.0, 1.0}};
    CHECK((sample_x(cfg, 64, 1) - sample_x(cfg, 64, 1)).norm() == 0.0);
    CHECK((sample_x(cfg, 64, 1) - sample_x(cfg, 64, 2)).norm() > 1.0);
}

TEST_CASE("eigendecomposition") {
    SUBCASE("diagonal matrix") {
        CMatrix d = CMatrix::Zero(4, 4);
        d.diagonal() << cplx(1, 2), cplx(-3, 0), cplx(0.5, -1), cplx(2, 2);
        const auto ed = eig_full(d);
        const auto o = overlaps(ed);
        for (double v : o) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
        for (int k = 0; k < 4; ++k)
            CHECK(std::any_of(ed.eigenvalues.begin(), ed.eigenvalues.end(),
                              [&](cplx l) { return std::abs(l - d(k, k)) < 1e-14; }));
    }
    SUBCASE("near-Jordan 2x2") {
        const double delta = 1e-4;
        CMatrix x(2, 2);
        x << 0.0, 1.0, delta, 0.0;
        const auto ed = eig_full(x);
        const auto o = overlaps(ed);
        for (const cplx& l : ed.eigenvalues) CHECK(std::abs(std::abs(l) - 0.01) < 1e-12);
        for (double v : o) CHECK(v == doctest::Approx((1 + delta) * (1 + delta) / (4 * delta)).epsilon(1e-8));
    }
    SUBCASE("random 64x64") {
        const CMatrix x = random_matrix(64, 5);
        const auto ed = eig_full(x);
        CHECK(reconstruction_residual(x, ed) < 1e-8);
        CHECK(biorthogonality_residual(ed) < 1e-8);
        for (double v : overlaps(ed)) CHECK(v >= 1.0 - 1e-9);
    }
    SUBCASE("schur route agrees with the full decomposition") {
        const CMatrix x = random_matrix(48, 6);
        const auto ed = eig_full(x);
        const auto o = overlaps(ed);
        const auto sp = schur_spectrum(x, true);
        REQUIRE(sp.eigenvalues.size() == 48u);
        for (std::size_t a = 0; a < sp.eigenvalues.size(); ++a) {
            std::size_t best = 0;
            for (std::size_t b = 1; b < ed.eigenvalues.size(); ++b)
                if (std::abs(ed.eigenvalues[b] - sp.eigenvalues[a]) < std::abs(ed.eigenvalues[best] - sp.eigenvalues[a]))
                    best = b;
            CHECK(std::abs(ed.eigenvalues[best] - sp.eigenvalues[a]) < 1e-10);
            CHECK(sp.overlaps[a] == doctest::Approx(o[best]).epsilon(1e-8));
        }
        CHECK(schur_spectrum(x, false).overlaps.empty());
    }
}

TEST_CASE("overlap field bookkeeping") {
    const Histogram2D layout(-1, 1, -1, 1, 4, 4);
    const std::vector<cplx> eig = {cplx(0.1, 0.1), cplx(-0.6, 0.2), cplx(3.0, 0.0)};
    const std::vector<double> ovl = {2.0, 4.0, 8.0};
    const auto f = overlap_field(eig, ovl, 3, layout);
    double total = 0.0;
    for (double v : f.values) total += v * f.bin_w() * f.bin_h();
    CHECK(total == doctest::Approx((2.0 + 4.0) / 3.0));
    CHECK(layout.index(cplx(3.0, 0.0)) == -1);
}

TEST_CASE("geometry helpers") {
    const Polyline square{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, true};
    CHECK(point_in_polyline({0.5, 0.5}, square));
    CHECK_FALSE(point_in_polyline({1.5, 0.5}, square));
    CHECK(distance_to_polylines({0.5, 2.0}, {square}) == doctest::Approx(1.0));
    const Polyline shifted{{{0, 0.1}, {1, 0.1}, {1, 1.1}, {0, 1.1}}, true};
    CHECK(hausdorff({square}, {shifted}) == doctest::Approx(0.1));
}

TEST_CASE("ginibre centre overlap at N = 256, 50 samples") {
    const EnsembleSpec sc = Semicircle{1.0};
    const auto a = analytic(sc, sc, GridSpec{-2, 2, -2, 2, 81, 81});
    const SampleConfig cfg{256, 50, 2024, sc, sc};
    const auto rep = run_comparison(cfg, a.grid, a.curve);
    // disc mean of -(N/pi) C with C = |z|^2/4 - 1/2
    const double r2 = rep.centre_radius * rep.centre_radius;
    CHECK(rep.centre_analytic == doctest::Approx(256.0 / std::numbers::pi * (0.5 - r2 / 8.0)).epsilon(0.01));
    CHECK(std::abs(rep.overlap_center_ratio - 1.0) < 0.15);
    CHECK(rep.l1_density >= 0.0);
    double mass = 0.0;
    for (double v : rep.density_hist.values) mass += v * rep.density_hist.bin_w() * rep.density_hist.bin_h();
    CHECK(mass + rep.outside_mass == doctest::Approx(1.0).epsilon(1e-9));
    for (const auto& st : rep.stieltjes) CHECK(st.ok);
    double ovl_mass = 0.0;
    for (double v : rep.overlap_hist.values) ovl_mass += v * rep.overlap_hist.bin_w() * rep.overlap_hist.bin_h();
    // sum_a O_a / N per sample is about N/2 for this disc (O ~ N(1 - |z|^2/2))
    CHECK(ovl_mass == doctest::Approx(128.0).epsilon(0.15));
}

TEST_CASE("report does not depend on the worker count") {
    const EnsembleSpec sc = Semicircle{1.0};
    const auto a = analytic(sc, sc, GridSpec{-2, 2, -2, 2, 41, 41});
    const SampleConfig cfg{96, 4, 5, sc, sc};
    McOptions one, four;
    one.workers = 1;
    four.workers = 4;
    CHECK(to_json(run_comparison(cfg, a.grid, a.curve, one)).dump() ==
          to_json(run_comparison(cfg, a.grid, a.curve, four)).dump());
}

TEST_CASE("scattering at n = 1024") {
    const auto [h, hp] = model_ensembles(ScatteringModel{1.0, 1.0});
    const auto a = analytic(h, hp, GridSpec{-2.2, 2.2, -4.17, 0.23, 111, 111});
    McOptions opts;
    opts.overlaps = false;
    const auto rep = run_comparison(SampleConfig{1024, 2, 77, h, hp}, a.grid, a.curve, opts);
    CHECK(rep.imag_max <= 1e-9);
    CHECK(rep.l1_density < 0.08);
    REQUIRE(rep.calibration_hp);
    CHECK(rep.calibration_hp->validated);
}

TEST_CASE("l1 distance shrinks with n") {
    const EnsembleSpec sc = Semicircle{1.0};
    const auto a = analytic(sc, sc, GridSpec{-2, 2, -2, 2, 81, 81});
    McOptions opts;
    opts.overlaps = false;
    std::vector<double> l1;
    for (int n : {128, 256, 512}) l1.push_back(run_comparison(SampleConfig{n, 8, 31, sc, sc}, a.grid, a.curve, opts).l1_density);
    CAPTURE(l1[0]);
    CAPTURE(l1[1]);
    CAPTURE(l1[2]);
    CHECK(l1[1] < l1[0]);
    CHECK(l1[2] < l1[1]);
}
