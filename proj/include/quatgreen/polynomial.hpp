#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

namespace quatgreen {

using cplx = std::complex<double>;

/// Dense real polynomial, coefficients in ascending degree.
class RealPoly {
public:
    RealPoly() = default;
    RealPoly(std::initializer_list<double> c) : c_(c) {}
    explicit RealPoly(std::vector<double> c) : c_(std::move(c)) {}

    static RealPoly constant(double v) { return RealPoly{v}; }
    /// alpha + beta*m
    static RealPoly affine(double alpha, double beta) { return RealPoly{alpha, beta}; }

    const std::vector<double>& coeffs() const { return c_; }
    double coeff(std::size_t k) const { return k < c_.size() ? c_[k] : 0.0; }
    /// Degree after dropping exact-zero leading coefficients; -1 for the zero polynomial.
    int degree() const;
    bool is_zero() const { return degree() < 0; }

    double operator()(double m) const;
    cplx operator()(cplx m) const;

    RealPoly& operator+=(const RealPoly& o);
    RealPoly& operator-=(const RealPoly& o);
    RealPoly& operator*=(double s);
    friend RealPoly operator+(RealPoly p, const RealPoly& q) { return p += q; }
    friend RealPoly operator-(RealPoly p, const RealPoly& q) { return p -= q; }
    friend RealPoly operator*(RealPoly p, double s) { return p *= s; }
    friend RealPoly operator*(double s, RealPoly p) { return p *= s; }
    friend RealPoly operator*(const RealPoly& p, const RealPoly& q);

    /// p(alpha + beta*m)
    RealPoly compose_affine(double alpha, double beta) const;
    RealPoly pow(int k) const;

private:
    std::vector<double> c_;
};

/// All complex roots of sum_k c[k] x^k. Degree is taken from the last
/// non-zero coefficient; quadratics use the cancellation-free formula,
/// higher degrees the companion matrix followed by Newton polishing.
std::vector<cplx> poly_roots(std::span<const cplx> c);

/// Real roots of p. Roots whose imaginary part is below `imag_tol`*(1+|root|)
/// count as real.
std::vector<double> real_roots(const RealPoly& p, double imag_tol = 1e-9);

cplx poly_eval(std::span<const cplx> c, cplx x);
cplx poly_derivative(std::span<const cplx> c, cplx x);

/// Determinant of a small square matrix of polynomials (cofactor expansion).
RealPoly poly_determinant(const std::vector<std::vector<RealPoly>>& m);

}  // namespace quatgreen
