#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "quatgreen/quaternion_calculus.hpp"
#include "quatgreen/solver.hpp"

using namespace quatgreen;

TEST_CASE("extension reduces to f on diagonal quaternions") {
    const auto f = [](cplx z) { return std::exp(z) / (1.0 + z * z); };
    for (const cplx z : {cplx(0.3, 0.9), cplx(-1.2, 0.4), cplx(2.0, 3.0)}) {
        const auto c = quat_extension_coeffs(f, z);
        const Quaternion v = c.gamma * Quaternion::identity() - c.gamma_prime * Quaternion::diagonal(z).dagger();
        // Real coefficients only hold for real-symmetric f; compare the complex form instead.
        const cplx qb = std::conj(z);
        const cplx gamma = (z * f(z) - qb * f(qb)) / (z - qb), gamma_p = (f(z) - f(qb)) / (z - qb);
        CHECK(std::abs(gamma - gamma_p * qb - f(z)) < 1e-13);
        CHECK(c.imag_residual < 1e-13);
        CHECK(std::abs(v.a() - f(z)) < 1e-12);
    }
}

TEST_CASE("coincident eigenvalues use the derivative limit") {
    const auto f = [](cplx z) { return z * z * z; };
    const auto c = quat_extension_coeffs(f, cplx(1.5, 0.0));
    CHECK(c.gamma_prime == doctest::Approx(3.0 * 1.5 * 1.5).epsilon(1e-8));
    CHECK(c.gamma == doctest::Approx(1.5 * 1.5 * 1.5 + 1.5 * 3.0 * 1.5 * 1.5).epsilon(1e-8));
    const auto near = quat_extension_coeffs(f, cplx(1.5, 1e-7));
    CHECK(near.gamma == doctest::Approx(c.gamma).epsilon(1e-6));
}

TEST_CASE("quaternion green and blue are inverse and covariant") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> nd;
    for (const EnsembleSpec& ens : {EnsembleSpec{Semicircle{1.0}}, EnsembleSpec{Wishart{0.8, 0.5}}}) {
        for (int k = 0; k < 300; ++k) {
            const auto q = quat_from_coords(nd(rng), 2.0 * nd(rng), 2.0 * nd(rng), 2.0 * nd(rng) + 0.5);
            const auto g = qgreen_hermitian(ens, q);
            CHECK(quat_distance(qblue_hermitian(ens, g.value).value, q) < 1e-9 * (1.0 + q.matrix().norm()));
            const auto s = quat_from_coords(nd(rng), nd(rng), nd(rng), nd(rng));
            const auto rot = quat_inv(s) * q * s;
            CHECK(quat_distance(qgreen_hermitian(ens, rot).value, quat_inv(s) * g.value * s) < 1e-9);
        }
    }
}

TEST_CASE("green on a diagonal quaternion is the resolvent") {
    const EnsembleSpec ens = Wishart{1.0, 2.0};
    const cplx z(-1.0, 0.7);
    const auto g = qgreen_hermitian(ens, Quaternion::diagonal(z));
    CHECK(std::abs(g.value.a() - green(ens, z)) < 1e-12);
    CHECK(std::abs(g.value.b()) < 1e-12);
}

TEST_CASE("blue of the sum") {
    const EnsembleSpec h = Semicircle{1.0}, hp = Wishart{1.0, 1.0};
    SUBCASE("diagonal input reduces to the complex blue sum") {
        const cplx s(0.2, -0.3);
        const auto b = qblue_sum(h, hp, Quaternion::diagonal(s));
        CHECK(std::abs(b.a() - blue_sum(h, hp, s)) < 1e-12);
        CHECK(std::abs(b.b()) < 1e-12);
    }
    SUBCASE("non-holomorphic solution maps back to diag(z)") {
        const EnsembleSpec sc = Semicircle{1.0};
        for (const cplx z : {cplx(0.3, 0.2), cplx(-0.5, 0.9), cplx(0.1, -0.4)}) {
            const auto sol = solve_general(sc, sc, z, {false});
            REQUIRE(sol.branch == Branch::NonHolomorphic);
            const auto back = qblue_sum(sc, sc, green_quaternion(sol));
            CHECK(quat_distance(back, Quaternion::diagonal(z)) < 1e-9);
        }
    }
    SUBCASE("scaled blue at g = 0 is the inverse") {
        const auto q = quat_from_coords(0.3, 1.0, -0.2, 0.5);
        CHECK(quat_distance(qblue_scaled(h, 0.0, q), quat_inv(q)) < 1e-15);
    }
}
