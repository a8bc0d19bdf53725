#pragma once

#include <complex>

#include <Eigen/Core>

namespace quatgreen {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

/// Relative cutoff below which |x| (the vector part) counts as zero.
inline constexpr double kDegeneracyEps = 1e-12;

/**
 * Quaternion x0*1 + i*(x1*s1 + x2*s2 + x3*s3) stored as the complex pair
 * (a, b) of its 2x2 representation
 *
 *     Q = [ a      i*conj(b) ]
 *         [ i*b    conj(a)   ]
 *
 * with a = x0 + i*x3 and b = x1 + i*x2.
 */
class Quaternion {
public:
    constexpr Quaternion() = default;
    constexpr Quaternion(cplx a, cplx b) : a_(a), b_(b) {}

    static constexpr Quaternion identity() { return {1.0, 0.0}; }
    /// iσ3 = diag(i, -i)
    static constexpr Quaternion i_sigma3() { return {cplx(0.0, 1.0), 0.0}; }
    /// diag(z, conj(z))
    static constexpr Quaternion diagonal(cplx z) { return {z, 0.0}; }

    constexpr cplx a() const { return a_; }
    constexpr cplx b() const { return b_; }

    double x0() const { return a_.real(); }
    double x1() const { return b_.real(); }
    double x2() const { return b_.imag(); }
    double x3() const { return a_.imag(); }

    /// |x| = sqrt(x1² + x2² + x3²)
    double vector_norm() const;
    double det() const { return std::norm(a_) + std::norm(b_); }
    double trace() const { return 2.0 * a_.real(); }

    Quaternion dagger() const { return {std::conj(a_), -b_}; }
    Mat2 matrix() const;

    Quaternion operator-() const { return {-a_, -b_}; }
    Quaternion& operator+=(const Quaternion& o) {
        a_ += o.a_;
        b_ += o.b_;
        return *this;
    }
    Quaternion& operator-=(const Quaternion& o) {
        a_ -= o.a_;
        b_ -= o.b_;
        return *this;
    }
    Quaternion& operator*=(double s) {
        a_ *= s;
        b_ *= s;
        return *this;
    }

    friend Quaternion operator+(Quaternion p, const Quaternion& q) { return p += q; }
    friend Quaternion operator-(Quaternion p, const Quaternion& q) { return p -= q; }
    friend Quaternion operator*(double s, Quaternion q) { return q *= s; }
    friend Quaternion operator*(Quaternion q, double s) { return q *= s; }

    friend bool operator==(const Quaternion&, const Quaternion&) = default;

private:
    cplx a_{0.0};
    cplx b_{0.0};
};

/// Throws DomainError on non-finite input.
Quaternion quat_from_coords(double x0, double x1, double x2, double x3);

/// Matrix product in the 2x2 representation.
Quaternion quat_mul(const Quaternion& p, const Quaternion& q);
inline Quaternion operator*(const Quaternion& p, const Quaternion& q) { return quat_mul(p, q); }

/// Throws SingularError when det(q) == 0.
Quaternion quat_inv(const Quaternion& q);

/// Builds a quaternion from a 2x2 matrix; throws DomainError if `m` is not of
/// quaternion form within `tol` (relative to its norm).
Quaternion quat_from_matrix(const Mat2& m, double tol = 1e-9);

/// Frobenius distance between the 2x2 representations.
double quat_distance(const Quaternion& p, const Quaternion& q);

struct QuaternionEigenpair {
    cplx q;     ///< x0 + i|x|, Im q >= 0
    cplx qbar;  ///< conj(q)
};

QuaternionEigenpair quat_eigenvalues(const Quaternion& q);

/// True when |x| <= eps * (1 + |x0|), i.e. Q is (numerically) x0 * 1.
bool is_degenerate(const Quaternion& q, double eps = kDegeneracyEps);

/// Q^I = Q * iσ3. Preserves det, maps trace to -2*x3.
Quaternion i_rotate(const Quaternion& q);

/// Similarity S with Q = s_inv * diag(q, conj q) * s.
struct Diagonalizer {
    Mat2 s;
    Mat2 s_inv;
    QuaternionEigenpair eig;
};

/// Explicit diagonalizer S = [[ib, q-a], [conj(q)-conj(a), i conj(b)]].
/// Throws NotDiagonalizableError for degenerate or diagonal (b == 0) input.
Diagonalizer diagonalize(const Quaternion& q);

}  // namespace quatgreen
