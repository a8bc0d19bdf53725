#include "quatgreen/quaternion.hpp"

#include <cmath>

#include <fmt/format.h>

#include "quatgreen/errors.hpp"

namespace quatgreen {

namespace {
constexpr cplx I{0.0, 1.0};
}

double Quaternion::vector_norm() const {
    return std::sqrt(std::norm(b_) + a_.imag() * a_.imag());
}

Mat2 Quaternion::matrix() const {
    Mat2 m;
    m << a_, I * std::conj(b_), I * b_, std::conj(a_);
    return m;
}

Quaternion quat_from_coords(double x0, double x1, double x2, double x3) {
    if (!std::isfinite(x0) || !std::isfinite(x1) || !std::isfinite(x2) || !std::isfinite(x3)) {
        throw DomainError(fmt::format("non-finite quaternion coordinates ({}, {}, {}, {})", x0, x1,
                                      x2, x3));
    }
    return {cplx(x0, x3), cplx(x1, x2)};
}

Quaternion quat_mul(const Quaternion& p, const Quaternion& q) {
    // [a1 ib1*][a2 ib2*]   [a1 a2 - b1* b2        ...]
    // [ib1 a1*][ib2 a2*] = [i(b1 a2 + a1* b2)     ...]
    return {p.a() * q.a() - std::conj(p.b()) * q.b(), p.b() * q.a() + std::conj(p.a()) * q.b()};
}

Quaternion quat_inv(const Quaternion& q) {
    const double d = q.det();
    if (!(d > 0.0)) throw SingularError("inverse of a zero quaternion");
    return (1.0 / d) * q.dagger();
}

Quaternion quat_from_matrix(const Mat2& m, double tol) {
    const double scale = std::max(1.0, m.norm());
    const cplx a = m(0, 0);
    const cplx b = -I * m(1, 0);
    const bool ok = std::abs(m(1, 1) - std::conj(a)) <= tol * scale &&
                    std::abs(m(0, 1) - I * std::conj(b)) <= tol * scale;
    if (!ok) throw DomainError("2x2 matrix is not of quaternion form");
    return {a, b};
}

double quat_distance(const Quaternion& p, const Quaternion& q) {
    // ||P - Q||_F = sqrt(2) * sqrt(|da|^2 + |db|^2)
    return std::sqrt(2.0 * (std::norm(p.a() - q.a()) + std::norm(p.b() - q.b())));
}

QuaternionEigenpair quat_eigenvalues(const Quaternion& q) {
    const cplx e{q.x0(), q.vector_norm()};
    return {e, std::conj(e)};
}

bool is_degenerate(const Quaternion& q, double eps) {
    return q.vector_norm() <= eps * (1.0 + std::abs(q.x0()));
}

Quaternion i_rotate(const Quaternion& q) {
    return quat_mul(q, Quaternion::i_sigma3());
}

Diagonalizer diagonalize(const Quaternion& q) {
    if (is_degenerate(q)) {
        throw NotDiagonalizableError("degenerate quaternion x0*1 is already diagonal");
    }
    if (std::abs(q.b()) <= kDegeneracyEps * (1.0 + std::abs(q.a()))) {
        throw NotDiagonalizableError("diagonal quaternion (b = 0) needs no diagonalizer");
    }
    const auto eig = quat_eigenvalues(q);
    const cplx a = q.a();
    const cplx b = q.b();
    // q - a = i(|x| - x3); rewritten to avoid cancellation when x3 > 0.
    const double xn = q.vector_norm();
    const double x3 = q.x3();
    const cplx qa = I * (x3 > 0.0 ? std::norm(b) / (xn + x3) : xn - x3);

    Diagonalizer d;
    d.eig = eig;
    d.s << I * b, qa, eig.qbar - std::conj(a), I * std::conj(b);
    const cplx pref = 1.0 / (eig.q - eig.qbar);
    d.s_inv << pref * I * std::conj(b) / qa, -pref, pref, pref * I * b / qa;
    return d;
}

}  // namespace quatgreen
