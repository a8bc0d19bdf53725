#include "quatgreen/quaternion_calculus.hpp"

#include "quatgreen/errors.hpp"

namespace quatgreen {

namespace {

QuatFuncValue assemble(QuatFuncValue c, const Quaternion& q) {
    c.value = c.gamma * Quaternion::identity() - c.gamma_prime * q.dagger();
    return c;
}

}  // namespace

QuatFuncValue qgreen_hermitian(const EnsembleSpec& ens, const Quaternion& q) {
    const auto eig = quat_eigenvalues(q);
    return assemble(quat_extension_coeffs([&](cplx s) { return green(ens, s); }, eig.q), q);
}

QuatFuncValue qblue_hermitian(const EnsembleSpec& ens, const Quaternion& q) {
    const auto eig = quat_eigenvalues(q);
    return assemble(quat_extension_coeffs([&](cplx s) { return blue(ens, s); }, eig.q), q);
}

Quaternion qblue_scaled(const EnsembleSpec& ens, cplx g, const Quaternion& q) {
    if (g == 0.0) return quat_inv(q);
    const Quaternion d = Quaternion::diagonal(g);
    return d * qblue_hermitian(ens, q * d).value;
}

Quaternion qblue_sum(const EnsembleSpec& ens_h, const EnsembleSpec& ens_hp, const Quaternion& q) {
    const double det = q.det();
    if (!(det > 0.0)) throw SingularError("qblue_sum at a zero quaternion");
    auto bh = [&](cplx s) { return blue(ens_h, s); };
    auto bhp = [&](cplx s) { return blue(ens_hp, s); };
    const auto h = quat_extension_coeffs(bh, quat_eigenvalues(q).q);
    const auto hp = quat_extension_coeffs(bhp, quat_eigenvalues(i_rotate(q)).q);
    return h.gamma * Quaternion::identity() + hp.gamma * Quaternion::i_sigma3() -
           (h.gamma_prime + hp.gamma_prime + 1.0 / det) * q.dagger();
}

}  // namespace quatgreen
