#include "quatgreen/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "quatgreen/errors.hpp"

namespace quatgreen {

int RealPoly::degree() const {
    for (int k = static_cast<int>(c_.size()) - 1; k >= 0; --k) {
        if (c_[k] != 0.0) return k;
    }
    return -1;
}

double RealPoly::operator()(double m) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * m + *it;
    return acc;
}

cplx RealPoly::operator()(cplx m) const {
    cplx acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * m + *it;
    return acc;
}

RealPoly& RealPoly::operator+=(const RealPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
}

RealPoly& RealPoly::operator-=(const RealPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
}

RealPoly& RealPoly::operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
}

RealPoly operator*(const RealPoly& p, const RealPoly& q) {
    if (p.c_.empty() || q.c_.empty()) return {};
    std::vector<double> r(p.c_.size() + q.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.c_.size(); ++i)
        for (std::size_t j = 0; j < q.c_.size(); ++j) r[i + j] += p.c_[i] * q.c_[j];
    return RealPoly(std::move(r));
}

RealPoly RealPoly::pow(int k) const {
    RealPoly r{1.0};
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
}

RealPoly RealPoly::compose_affine(double alpha, double beta) const {
    // Horner in polynomial arithmetic.
    const RealPoly lin = affine(alpha, beta);
    RealPoly acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * lin + constant(*it);
    return acc;
}

cplx poly_eval(std::span<const cplx> c, cplx x) {
    cplx acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

cplx poly_derivative(std::span<const cplx> c, cplx x) {
    cplx acc = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) acc = acc * x + static_cast<double>(k) * c[k];
    return acc;
}

std::vector<cplx> poly_roots(std::span<const cplx> c) {
    std::size_t n = c.size();
    while (n > 0 && c[n - 1] == 0.0) --n;
    if (n <= 1) return {};
    const int deg = static_cast<int>(n) - 1;

    if (deg == 1) return {-c[0] / c[1]};
    if (deg == 2) {
        const cplx a = c[2], b = c[1], c0 = c[0];
        cplx sq = std::sqrt(b * b - 4.0 * a * c0);
        if (std::real(std::conj(b) * sq) < 0.0) sq = -sq;
        const cplx q = -0.5 * (b + sq);
        if (q == 0.0) return {0.0, 0.0};
        return {q / a, c0 / q};
    }

    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -c[i] / c[deg];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    if (es.info() != Eigen::Success) throw NumericalError("companion eigensolve failed");

    std::vector<cplx> roots(es.eigenvalues().data(), es.eigenvalues().data() + deg);
    const std::span<const cplx> cs(c.data(), n);
    for (auto& r : roots) {
        for (int it = 0; it < 3; ++it) {
            const cplx d = poly_derivative(cs, r);
            if (d == 0.0) break;
            const cplx step = poly_eval(cs, r) / d;
            if (!std::isfinite(std::abs(step)) || std::abs(step) > 1e-3 * (1.0 + std::abs(r))) break;
            r -= step;
        }
    }
    return roots;
}

std::vector<double> real_roots(const RealPoly& p, double imag_tol) {
    const int deg = p.degree();
    if (deg < 1) return {};
    std::vector<cplx> c(deg + 1);
    for (int k = 0; k <= deg; ++k) c[k] = p.coeff(k);

    std::vector<double> out;
    if (deg == 2) {
        // Tangential double roots of the m-polynomial show up as a tiny negative
        // discriminant; accept them as one real root.
        const double a = c[2].real(), b = c[1].real(), c0 = c[0].real();
        const double disc = b * b - 4.0 * a * c0;
        const double scale = b * b + std::abs(4.0 * a * c0);
        if (disc < 0.0) {
            if (-disc <= imag_tol * imag_tol * scale) out.push_back(-b / (2.0 * a));
            return out;
        }
    }
    for (const cplx& r : poly_roots(c)) {
        if (std::abs(r.imag()) <= imag_tol * (1.0 + std::abs(r))) out.push_back(r.real());
    }
    std::sort(out.begin(), out.end());
    return out;
}

RealPoly poly_determinant(const std::vector<std::vector<RealPoly>>& m) {
    const std::size_t n = m.size();
    if (n == 0) return RealPoly{1.0};
    if (n == 1) return m[0][0];
    if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    RealPoly acc;
    for (std::size_t j = 0; j < n; ++j) {
        if (m[0][j].is_zero()) continue;
        std::vector<std::vector<RealPoly>> minor;
        minor.reserve(n - 1);
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<RealPoly> row;
            row.reserve(n - 1);
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            minor.push_back(std::move(row));
        }
        const RealPoly term = m[0][j] * poly_determinant(minor);
        if (j % 2 == 0)
            acc += term;
        else
            acc -= term;
    }
    return acc;
}

}  // namespace quatgreen
