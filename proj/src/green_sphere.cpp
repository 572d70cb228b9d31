#include "rddi/bessel.hpp"
#include "rddi/errors.hpp"
#include "rddi/green.hpp"
#include <cmath>

namespace rddi {

namespace {

// Orthonormal frame with the source direction on +z and the field point in
// the xz half-plane; returns frame->lab rotation and cos(gamma).
struct Frame {
    Eigen::Matrix3d rot;
    double cosg;
};

Frame make_frame(const Eigen::Vector3d& rA, const Eigen::Vector3d& rB) {
    const double ra = rA.norm(), rb = rB.norm();
    Eigen::Vector3d zh = rB / rb;
    double cg = std::clamp(rA.dot(rB) / (ra * rb), -1.0, 1.0);
    Eigen::Vector3d xp = rA / ra - cg * zh;
    Eigen::Vector3d xh;
    if (xp.norm() > 1e-14) {
        xh = xp.normalized();
    } else {
        Eigen::Vector3d t = std::abs(zh.x()) < 0.9 ? Eigen::Vector3d::UnitX()
                                                   : Eigen::Vector3d::UnitY();
        xh = zh.cross(t).normalized();
    }
    Eigen::Vector3d yh = zh.cross(xh);
    Frame f;
    f.rot.col(0) = xh;
    f.rot.col(1) = yh;
    f.rot.col(2) = zh;
    f.cosg = cg;
    return f;
}

struct RadialSet {
    std::vector<Scaled> za, zpa, zb, zpb; // z_l(kr)=Z_l/x and Riccati derivative
};

RadialSet outgoing_pair(double k, double ra, double rb, int L) {
    RadialSet s;
    auto xia = riccati_xi(k * ra, L);
    auto xib = riccati_xi(k * rb, L);
    s.za.resize(L + 1);
    s.zb.resize(L + 1);
    s.zpa.resize(L + 1);
    s.zpb.resize(L + 1);
    for (int l = 0; l <= L; ++l) {
        s.za[l] = s_scale(xia[l], 1.0 / (k * ra));
        s.zb[l] = s_scale(xib[l], 1.0 / (k * rb));
        if (l >= 1) {
            s.zpa[l] = riccati_deriv(xia, l, k * ra);
            s.zpb[l] = riccati_deriv(xib, l, k * rb);
        }
    }
    return s;
}

RadialSet vacuum_split_pair(double k, double ra, double rb, int L) {
    // outgoing at the larger radius, regular at the smaller
    RadialSet s;
    const bool a_out = ra >= rb;
    auto out = riccati_xi(k * (a_out ? ra : rb), L);
    auto reg = riccati_psi(k * (a_out ? rb : ra), L);
    auto& Za = a_out ? out : reg;
    auto& Zb = a_out ? reg : out;
    s.za.resize(L + 1);
    s.zb.resize(L + 1);
    s.zpa.resize(L + 1);
    s.zpb.resize(L + 1);
    for (int l = 0; l <= L; ++l) {
        s.za[l] = s_scale(Za[l], 1.0 / (k * ra));
        s.zb[l] = s_scale(Zb[l], 1.0 / (k * rb));
        if (l >= 1) {
            s.zpa[l] = riccati_deriv(Za, l, k * ra);
            s.zpb[l] = riccati_deriv(Zb, l, k * rb);
        }
    }
    return s;
}

// Multipole sum between exterior points: coefficient arrays cN/cM weight the
// electric/magnetic waves (unit coefficients + split radial set reproduce
// free space).  Returns the frame-coordinates tensor.
Eigen::Matrix3cd series_sum(double k, double ra, double rb, double cosg,
                            const RadialSet& rad, const std::vector<Scaled>& cN,
                            const std::vector<Scaled>& cM, int L, double tail_tol,
                            int* l_converged, double* last_rel) {
    const double sing = std::sqrt(std::max(0.0, 1.0 - cosg * cosg));
    Angular ang = angular_functions(cosg, L);
    const double invk2 = 1.0 / (k * k * ra * rb);

    cplx m00 = 0, m02 = 0, m11 = 0, m20 = 0, m22 = 0;
    double scale_ref = 0.0;
    int quiet = 0;
    *l_converged = 0;
    for (int l = 1; l <= L; ++l) {
        const double tl = 2.0 * l + 1.0;
        const double l2 = double(l) * (l + 1);
        // electric, m=0:   (r^ o z^) and (th^ o z^)
        Scaled base_e = s_scale(s_mul(cN[l], rad.zb[l]), tl * invk2);
        cplx c_rz = s_value(s_mul(base_e, s_scale(rad.za[l], l2 * ang.P[l])));
        cplx c_tz = -s_value(s_mul(base_e, s_scale(rad.zpa[l], ang.P1[l])));
        // magnetic, m=1:   (ph^ o y^) tau, (th^ o x^) pi
        Scaled base_m = s_scale(s_mul(s_mul(cM[l], rad.za[l]), rad.zb[l]), tl / l2);
        cplx cm_tau = s_value(s_scale(base_m, ang.tau[l]));
        cplx cm_pi = s_value(s_scale(base_m, ang.pi[l]));
        // electric, m=1:   (r^ o x^), (th^ o x^), (ph^ o y^)
        Scaled base_n1 = s_scale(s_mul(cN[l], rad.zpb[l]), tl * invk2);
        cplx c_rx = s_value(s_mul(base_n1, s_scale(rad.za[l], ang.P1[l])));
        Scaled dd = s_mul(base_n1, s_scale(rad.zpa[l], 1.0 / l2));
        cplx cn_tau = s_value(s_scale(dd, ang.tau[l]));
        cplx cn_pi = s_value(s_scale(dd, ang.pi[l]));

        m02 += c_rz * sing + c_tz * cosg;
        m22 += c_rz * cosg - c_tz * sing;
        m11 += cm_tau + cn_pi;
        m00 += (cm_pi + cn_tau) * cosg + c_rx * sing;
        m20 += -(cm_pi + cn_tau) * sing + c_rx * cosg;

        const double tn = std::abs(c_rz) + std::abs(c_tz) + std::abs(cm_tau) +
                          std::abs(cm_pi) + std::abs(c_rx) + std::abs(cn_tau) +
                          std::abs(cn_pi);
        scale_ref = std::max(scale_ref, tn);
        *last_rel = scale_ref > 0.0 ? tn / scale_ref : 0.0;
        if (scale_ref > 0.0 && tn < tail_tol * scale_ref && l > k * std::max(ra, rb))
            ++quiet;
        else
            quiet = 0;
        if (quiet >= 8) {
            *l_converged = l;
            break;
        }
    }
    Eigen::Matrix3cd M = Eigen::Matrix3cd::Zero();
    M(0, 0) = m00;
    M(0, 2) = m02;
    M(1, 1) = m11;
    M(2, 0) = m20;
    M(2, 2) = m22;
    return (I * k / (4.0 * pi)) * M;
}

} // namespace

GreenTensor sphere_scattering_green(const SphereGeometry& geo,
                                    const Eigen::Vector3d& r,
                                    const Eigen::Vector3d& rp, double omega,
                                    const Tolerances& tol,
                                    SeriesDiagnostics* diag) {
    if (!(omega > 0.0)) throw ConfigError("sphere green: omega must be positive");
    const double a = geo.radius();
    if (!(a > 0.0)) throw ConfigError("sphere green: diameter must be positive");
    const double ra = r.norm(), rb = rp.norm();
    if (ra <= a || rb <= a)
        throw GeometryError("sphere green: both points must lie outside the sphere");

    const double k = omega;
    const cplx n = geo.material.refractive_index(omega);
    Frame f = make_frame(r, rp);

    const double xmax = k * std::max(ra, rb);
    int L = int(std::ceil(xmax + 4.05 * std::cbrt(xmax) + 12.0));
    Eigen::Matrix3cd Gf;
    int lconv = 0;
    double lastrel = 1.0;
    while (true) {
        if (L > tol.l_max_cap) L = tol.l_max_cap;
        MieCoefficients mc = mie_coefficients(k * a, n, L);
        RadialSet rad = outgoing_pair(k, ra, rb, L);
        Gf = series_sum(k, ra, rb, f.cosg, rad, mc.BN, mc.BM, L, tol.series_tail,
                        &lconv, &lastrel);
        if (lconv > 0) break;
        if (L >= tol.l_max_cap)
            throw ConvergenceError(
                "sphere green: multipole sum not converged at l_max cap " +
                std::to_string(tol.l_max_cap) + " (relative last term " +
                std::to_string(lastrel) +
                "); points may be too close to the surface");
        L *= 2;
    }

    GreenTensor g;
    g.r = r;
    g.r_prime = rp;
    g.omega = omega;
    g.kind = GreenKind::sphere_scattering;
    g.matrix = f.rot * Gf * f.rot.transpose();
    if (diag) {
        diag->l_used = lconv;
        diag->last_rel_term = lastrel;
    }
    return g;
}

Eigen::Matrix3cd vacuum_series_green(const Eigen::Vector3d& r,
                                     const Eigen::Vector3d& rp, double omega,
                                     int lmax) {
    const double k = omega;
    const double ra = r.norm(), rb = rp.norm();
    Frame f = make_frame(r, rp);
    RadialSet rad = vacuum_split_pair(k, ra, rb, lmax);
    std::vector<Scaled> ones(lmax + 1, s_from(cplx(1.0, 0.0)));
    int lconv = 0;
    double lastrel = 0.0;
    Eigen::Matrix3cd Gf = series_sum(k, ra, rb, f.cosg, rad, ones, ones, lmax,
                                     0.0, &lconv, &lastrel);
    return f.rot * Gf * f.rot.transpose();
}

} // namespace rddi
