#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "quatgreen/errors.hpp"
#include "quatgreen/quaternion.hpp"

using namespace quatgreen;

namespace {

Quaternion random_quat(std::mt19937_64& rng, double scale = 2.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return quat_from_coords(u(rng), u(rng), u(rng), u(rng));
}

}  // namespace

TEST_CASE("matrix layout and coordinates") {
    const auto q = quat_from_coords(1.0, 2.0, 3.0, 4.0);
    CHECK(q.a() == cplx(1.0, 4.0));
    CHECK(q.b() == cplx(2.0, 3.0));
    const Mat2 m = q.matrix();
    CHECK(m(0, 0) == cplx(1.0, 4.0));
    CHECK(m(0, 1) == cplx(0.0, 1.0) * std::conj(q.b()));
    CHECK(m(1, 0) == cplx(0.0, 1.0) * q.b());
    CHECK(m(1, 1) == cplx(1.0, -4.0));
    CHECK(q.det() == doctest::Approx(30.0));
    CHECK(std::abs(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) - q.det()) < 1e-12);
    CHECK(q.trace() == doctest::Approx(2.0));
    CHECK(q.vector_norm() == doctest::Approx(std::sqrt(29.0)));
}

TEST_CASE("multiplication matches the matrix product") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 500; ++k) {
        const auto p = random_quat(rng), q = random_quat(rng);
        const Mat2 pq = p.matrix() * q.matrix();
        CHECK((pq - (p * q).matrix()).norm() < 1e-12);
        CHECK((p.dagger().matrix() - p.matrix().adjoint()).norm() < 1e-14);
    }
    const auto i = Quaternion::i_sigma3();
    CHECK(quat_distance(i * i, -1.0 * Quaternion::identity()) < 1e-15);
}

TEST_CASE("inverse, rotation and eigenvalues over random samples") {
    std::mt19937_64 rng(11);
    double worst_inv = 0.0, worst_rot = 0.0, worst_eig = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const auto q = random_quat(rng);
        worst_inv = std::max(worst_inv, quat_distance(q * quat_inv(q), Quaternion::identity()));
        const auto qi = i_rotate(q);
        worst_rot = std::max({worst_rot, std::abs(qi.det() - q.det()), std::abs(qi.trace() + 2.0 * q.x3())});
        const auto e = quat_eigenvalues(q);
        CHECK(e.q.imag() >= 0.0);
        worst_eig = std::max(worst_eig, std::abs(e.q + e.qbar - q.trace()) + std::abs(std::norm(e.q) - q.det()));
    }
    CHECK(worst_inv < 1e-12);
    CHECK(worst_rot < 1e-12);
    CHECK(worst_eig < 1e-11);
}

TEST_CASE("diagonalizer reconstructs Q") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 200; ++k) {
        const auto q = random_quat(rng);
        const auto d = diagonalize(q);
        Mat2 diag = Mat2::Zero();
        diag(0, 0) = d.eig.q;
        diag(1, 1) = d.eig.qbar;
        CHECK((d.s_inv * diag * d.s - q.matrix()).norm() < 1e-10 * (1.0 + q.matrix().norm()));
        CHECK((d.s * d.s_inv - Mat2::Identity()).norm() < 1e-10);
    }
}

TEST_CASE("degenerate and diagonal quaternions") {
    const auto scalar = quat_from_coords(2.5, 0.0, 0.0, 0.0);
    CHECK(is_degenerate(scalar));
    CHECK_FALSE(is_degenerate(quat_from_coords(2.5, 1e-6, 0.0, 0.0)));
    CHECK_THROWS_AS(diagonalize(scalar), NotDiagonalizableError);
    CHECK_THROWS_AS(diagonalize(Quaternion::diagonal(cplx(1.0, 2.0))), NotDiagonalizableError);
    const auto e = quat_eigenvalues(scalar);
    CHECK(e.q == cplx(2.5, 0.0));
}

TEST_CASE("error paths") {
    CHECK_THROWS_AS(quat_inv(Quaternion{}), SingularError);
    CHECK_THROWS_AS(quat_from_coords(std::nan(""), 0, 0, 0), DomainError);
    CHECK_THROWS_AS(quat_from_coords(0, INFINITY, 0, 0), DomainError);
    Mat2 bad;
    bad << cplx(1, 0), cplx(2, 0), cplx(3, 0), cplx(4, 0);
    CHECK_THROWS_AS(quat_from_matrix(bad), DomainError);
}

TEST_CASE("from_matrix round trip") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 100; ++k) {
        const auto q = random_quat(rng);
        CHECK(quat_distance(quat_from_matrix(q.matrix()), q) < 1e-15);
    }
}
