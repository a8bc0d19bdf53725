#pragma once

#include <algorithm>

#include "quatgreen/ensemble.hpp"
#include "quatgreen/quaternion.hpp"

namespace quatgreen {

/// value = gamma*1 - gamma_prime*Q^dagger, with real scalar coefficients.
struct QuatFuncValue {
    Quaternion value;
    double gamma = 0.0;
    double gamma_prime = 0.0;
    /// max |Im| of the complex coefficients before taking the real part.
    double imag_residual = 0.0;
};

/// Relative gap |q - conj q| below which the coincident-eigenvalue limit is used.
inline constexpr double kCoincidentEps = 1e-10;
/// Central-difference step for f' in the coincident-eigenvalue limit.
inline constexpr double kDerivativeStep = 1e-6;

/**
 * Scalar coefficients of the quaternion extension of f at eigenvalues (q, conj q):
 * gamma = (q f(q) - conj(q) f(conj q)) / (q - conj q),
 * gamma_prime = (f(q) - f(conj q)) / (q - conj q).
 * Near coincidence falls back to gamma = f(x0) + x0 f'(x0), gamma_prime = f'(x0).
 */
template <class F>
QuatFuncValue quat_extension_coeffs(F&& f, cplx q);

/// Quaternion Green's function of a Hermitian ensemble.
QuatFuncValue qgreen_hermitian(const EnsembleSpec& ens, const Quaternion& q);

/// Quaternion Blue's function of a Hermitian ensemble.
QuatFuncValue qblue_hermitian(const EnsembleSpec& ens, const Quaternion& q);

/// Blue's function of g*H: diag(g, conj g) * B_H(Q * diag(g, conj g)). For
/// g = 0 returns the inverse of Q.
Quaternion qblue_scaled(const EnsembleSpec& ens, cplx g, const Quaternion& q);

/// Blue's function of X = H + iH' evaluated through the explicit coefficient
/// form: beta_H*1 + beta_H'(q^I)*i sigma3 - (beta'_H + beta'_H'(q^I) + 1/det Q)*Q^dagger.
Quaternion qblue_sum(const EnsembleSpec& ens_h, const EnsembleSpec& ens_hp, const Quaternion& q);

// ---------------------------------------------------------------------------

template <class F>
QuatFuncValue quat_extension_coeffs(F&& f, cplx q) {
    const cplx qb = std::conj(q);
    cplx gamma, gamma_prime;
    if (std::abs(q - qb) < kCoincidentEps * (1.0 + std::abs(q))) {
        const double x0 = q.real();
        const cplx fx = f(cplx(x0, 0.0));
        const cplx df = (f(cplx(x0 + kDerivativeStep, 0.0)) - f(cplx(x0 - kDerivativeStep, 0.0))) /
                        (2.0 * kDerivativeStep);
        gamma = fx + x0 * df;
        gamma_prime = df;
    } else {
        const cplx fq = f(q);
        const cplx fqb = f(qb);
        gamma = (q * fq - qb * fqb) / (q - qb);
        gamma_prime = (fq - fqb) / (q - qb);
    }
    QuatFuncValue v;
    v.gamma = gamma.real();
    v.gamma_prime = gamma_prime.real();
    v.imag_residual = std::max(std::abs(gamma.imag()), std::abs(gamma_prime.imag()));
    return v;
}

}  // namespace quatgreen
