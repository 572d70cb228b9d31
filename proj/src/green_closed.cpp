#include "rddi/green.hpp"
#include "rddi/errors.hpp"

namespace rddi {

static Eigen::Matrix3cd homogeneous_dyadic(const Eigen::Vector3d& R, cplx k) {
    const double Rn = R.norm();
    const Eigen::Vector3d u = R / Rn;
    const cplx kR = k * Rn;
    const cplx e = std::exp(I * kR) / (4.0 * pi * Rn);
    const cplx A = 1.0 + (I * kR - 1.0) / (kR * kR);
    const cplx B = (3.0 - 3.0 * I * kR - kR * kR) / (kR * kR);
    return e * (A * Eigen::Matrix3cd::Identity() +
                B * (u * u.transpose()).cast<cplx>());
}

GreenTensor vacuum_green(const Eigen::Vector3d& r, const Eigen::Vector3d& rp,
                         double omega) {
    if (!(omega > 0.0)) throw ConfigError("vacuum_green: omega must be positive");
    GreenTensor g;
    g.r = r;
    g.r_prime = rp;
    g.omega = omega;
    g.kind = GreenKind::vacuum;
    const Eigen::Vector3d R = r - rp;
    if (R.norm() < 1e-14) {
        g.imaginary_only = true;
        g.matrix = I * (omega / (6.0 * pi)) * Eigen::Matrix3cd::Identity();
        return g;
    }
    g.matrix = homogeneous_dyadic(R, cplx(omega, 0.0));
    return g;
}

GreenTensor bulk_green(const Eigen::Vector3d& r, const Eigen::Vector3d& rp,
                       double omega, const Material& medium) {
    if (!(omega > 0.0)) throw ConfigError("bulk_green: omega must be positive");
    GreenTensor g;
    g.r = r;
    g.r_prime = rp;
    g.omega = omega;
    g.kind = GreenKind::bulk;
    const cplx n = medium.refractive_index(omega);
    const Eigen::Vector3d R = r - rp;
    if (R.norm() < 1e-14) {
        // absorbing media diverge even in the imaginary part; return the
        // propagating (far-field) contribution and flag it
        g.imaginary_only = true;
        g.matrix = I * (n.real() * omega / (6.0 * pi)) * Eigen::Matrix3cd::Identity();
        return g;
    }
    g.matrix = homogeneous_dyadic(R, n * omega);
    return g;
}

GreenTensor total_green(const Environment& env, const Eigen::Vector3d& r,
                        const Eigen::Vector3d& rp, double omega,
                        const Tolerances& tol) {
    if (env.sphere && env.bulk)
        throw ConfigError("total_green: sphere and bulk environments are exclusive");
    if (env.bulk) {
        GreenTensor g = bulk_green(r, rp, omega, *env.bulk);
        g.kind = GreenKind::total;
        return g;
    }
    GreenTensor g = vacuum_green(r, rp, omega);
    g.kind = GreenKind::total;
    if (env.sphere) {
        GreenTensor sc = sphere_scattering_green(*env.sphere, r, rp, omega, tol);
        if (g.imaginary_only) {
            // coincident points: the tensor stays imaginary-only; callers
            // needing the (finite) scattering real part use the scattering
            // kind directly
            Eigen::Matrix3d im = sc.matrix.imag();
            g.matrix += I * im.cast<cplx>();
        } else {
            g.matrix += sc.matrix;
        }
    }
    return g;
}

} // namespace rddi
