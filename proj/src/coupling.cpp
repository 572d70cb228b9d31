#include "rddi/coupling.hpp"
#include "rddi/errors.hpp"
#include "rddi/quad.hpp"
#include <algorithm>
#include <cmath>

namespace rddi {

void Atom::validate() const {
    if (!(gamma0 > 0.0)) throw ConfigError("atom: gamma0 must be positive");
    if (!(omega > 0.0) || !(omega_tilde > 0.0))
        throw ConfigError("atom: transition frequency must be positive");
    if (std::abs(dipole.norm() - 1.0) > 1e-9)
        throw ConfigError("atom: dipole direction must be a unit vector");
}

void AtomPair::validate() const {
    A.validate();
    B.validate();
}

namespace {

cplx projection(const Atom& a, const Atom& b, const Eigen::Matrix3cd& G) {
    return (a.dipole.adjoint() * G * b.dipole)(0, 0);
}

// projections through the real and imaginary parts of the tensor, taken
// separately so shift and rate split cleanly even for circular dipoles
struct SplitProj {
    cplx re, im;
};

SplitProj split_at(const Atom& a, const Atom& b, const Environment& env,
                   double w, const Tolerances& tol) {
    GreenTensor g = total_green(env, a.position(), b.position(), w, tol);
    SplitProj s;
    s.im = projection(a, b, Eigen::Matrix3cd(g.matrix.imag().cast<cplx>()));
    if (g.imaginary_only) {
        // coincident points: the divergent free-space real part is absorbed
        // in the bare frequency, but a scatterer still shifts
        s.re = 0.0;
        if (env.sphere) {
            GreenTensor sc = sphere_scattering_green(*env.sphere, a.position(),
                                                     b.position(), w, tol);
            s.re = projection(a, b,
                              Eigen::Matrix3cd(sc.matrix.real().cast<cplx>()));
        }
    } else {
        s.re = projection(a, b, Eigen::Matrix3cd(g.matrix.real().cast<cplx>()));
    }
    return s;
}

// K at an explicit evaluation frequency; dipole magnitudes stay tied to the
// atoms' own (gamma0, omega_tilde).
cplx k_at(const Atom& a, const Atom& b, const Environment& env, double w,
          const Tolerances& tol) {
    SplitProj s = split_at(a, b, env, w, tol);
    return I * w * w * a.dipole_moment() * b.dipole_moment() * (s.re + I * s.im);
}

cplx delta_at(const Atom& a, const Atom& b, const Environment& env, double w,
              const Tolerances& tol) {
    return w * w * a.dipole_moment() * b.dipole_moment() *
           split_at(a, b, env, w, tol).re;
}

// the closed-form solutions assume the shift is insensitive to which atom's
// transition frequency it is evaluated at
bool symmetric_predicate(cplx dA, cplx dB, double threshold) {
    const double scale = std::max(std::abs(dA), std::abs(dB));
    return std::abs(dA - dB) <= threshold * scale;
}

} // namespace

cplx k_coefficient(const Atom& a, const Atom& b, const Environment& env,
                   const Tolerances& tol) {
    a.validate();
    b.validate();
    return k_at(a, b, env, b.omega_tilde, tol);
}

cplx delta_coupling(const Atom& a, const Atom& b, const Environment& env,
                    const Tolerances& tol) {
    a.validate();
    b.validate();
    return delta_at(a, b, env, b.omega_tilde, tol);
}

cplx gamma_coupling(const Atom& a, const Atom& b, const Environment& env,
                    const Tolerances& tol) {
    a.validate();
    b.validate();
    const double w = b.omega_tilde;
    return 2.0 * w * w * a.dipole_moment() * b.dipole_moment() *
           split_at(a, b, env, w, tol).im;
}

double frequency_shift(const Atom& a, const Environment& env,
                       const Tolerances& tol) {
    a.validate();
    if (env.bulk)
        throw ConfigError("frequency_shift: undefined inside an absorbing bulk");
    if (!env.sphere) return 0.0;
    auto shift_at = [&](double w) {
        GreenTensor sc = sphere_scattering_green(*env.sphere, a.position(),
                                                 a.position(), w, tol);
        const double d2 = a.dipole_moment() * a.dipole_moment();
        return w * w * d2 *
               projection(a, a, Eigen::Matrix3cd(sc.matrix.real().cast<cplx>()))
                   .real();
    };
    // one fixed-point pass: shift at the bare frequency, re-evaluated at the
    // shifted one
    const double d1 = shift_at(a.omega);
    if (!(a.omega - d1 > 0.0))
        throw ConvergenceError("frequency_shift: shift exceeds the transition "
                               "frequency");
    const double d2 = shift_at(a.omega - d1);
    if (std::abs(d2 - d1) > 0.5 * std::abs(d1) + 1e-12 * a.omega)
        throw ConvergenceError("frequency_shift: fixed point moved from " +
                               std::to_string(d1) + " to " + std::to_string(d2) +
                               "; shift varies on its own scale");
    return d2;
}

CouplingSet build_coupling_set(const AtomPair& pair, const Environment& env,
                               const std::optional<ResonanceInfo>& res,
                               const Tolerances& tol) {
    pair.validate();
    CouplingSet cs;
    cs.omega_ref = pair.B.omega_tilde;
    const double dd = pair.A.dipole_moment() * pair.B.dipole_moment();
    const double wtA = pair.A.omega_tilde, wtB = pair.B.omega_tilde;
    const SplitProj sAB = split_at(pair.A, pair.B, env, wtB, tol);
    const SplitProj sBA = split_at(pair.B, pair.A, env, wtA, tol);
    cs.delta_AB = wtB * wtB * dd * sAB.re;
    cs.delta_BA = wtA * wtA * dd * sBA.re;
    cs.K_AB = I * wtB * wtB * dd * (sAB.re + I * sAB.im);
    cs.K_BA = I * wtA * wtA * dd * (sBA.re + I * sBA.im);
    const cplx kaa = k_coefficient(pair.A, pair.A, env, tol);
    const cplx kbb = k_coefficient(pair.B, pair.B, env, tol);
    cs.gamma(0, 0) = -2.0 * kaa.real();
    cs.gamma(1, 1) = -2.0 * kbb.real();
    cs.gamma(0, 1) = -2.0 * cs.K_AB.real();
    cs.gamma(1, 0) = -2.0 * cs.K_BA.real();
    cs.symmetric = wtA == wtB ||
                   symmetric_predicate(cs.delta_AB, cs.delta_BA, 1e-3);
    if (res) {
        cs.omega_m = res->omega_m;
        cs.delta_omega_m = res->delta_omega_m;
        // pair rates on resonance set the vacuum Rabi splittings
        const double gaa = -2.0 * k_at(pair.A, pair.A, env, res->omega_m, tol).real();
        const double gab = -2.0 * k_at(pair.A, pair.B, env, res->omega_m, tol).real();
        cs.Omega_plus = std::sqrt(std::max(0.0, 2.0 * (gaa + gab) * res->delta_omega_m));
        cs.Omega_minus = std::sqrt(std::max(0.0, 2.0 * (gaa - gab) * res->delta_omega_m));
        const double om = std::max(cs.Omega_plus, cs.Omega_minus);
        if (om > 10.0 * res->delta_omega_m)
            cs.regime = Regime::strong;
        else if (om < res->delta_omega_m / 3.0)
            cs.regime = Regime::weak;
        else
            cs.regime = Regime::intermediate;
    }
    return cs;
}

SymmetryCheck check_symmetry_condition(const AtomPair& pair,
                                       const Environment& env,
                                       double threshold, const Tolerances& tol) {
    pair.validate();
    if (pair.A.omega_tilde == pair.B.omega_tilde) return {true, 0.0};
    const cplx dA = delta_at(pair.A, pair.B, env, pair.A.omega_tilde, tol);
    const cplx dB = delta_at(pair.A, pair.B, env, pair.B.omega_tilde, tol);
    const double scale = std::max(std::abs(dA), std::abs(dB));
    const double rel = scale > 0.0 ? std::abs(dA - dB) / scale : 0.0;
    return {rel <= threshold, rel};
}

double pv_coupling_oracle(const Atom& a, const Atom& b, const Environment& env,
                          const Tolerances& tol, const PVOptions& opt) {
    a.validate();
    b.validate();
    if (a.dipole.imag().norm() > 1e-12 || b.dipole.imag().norm() > 1e-12)
        throw ConfigError("pv oracle: real dipole orientations required");
    const double wt = b.omega_tilde;
    if (!(wt > opt.omega_min && wt < opt.omega_cut))
        throw ConfigError("pv oracle: omega_tilde outside the integration window");
    const double dd = a.dipole_moment() * b.dipole_moment();
    const Eigen::Vector3d ra = a.position(), rb = b.position();
    const Eigen::Vector3d da = a.dipole.real(), db = b.dipole.real();
    const double Rdir = std::max((ra - rb).norm(), 1e-9);
    const double Rrefl = env.sphere ? ra.norm() + rb.norm() : 0.0;

    auto j_of = [&](const Eigen::Matrix3cd& G) {
        return da.dot(G.imag() * db);
    };
    auto j_total = [&](double w) {
        return w * w * j_of(total_green(env, ra, rb, w, tol).matrix);
    };

    // window edges resolving both the spatial oscillation and any sharp
    // material feature
    const double lpath = std::max(Rdir, Rrefl);
    auto window_edges = [&](double lo, double hi) {
        std::vector<double> e{lo, hi};
        const double step = std::min(pi / lpath, (hi - lo) / 8.0);
        const int np = int((hi - lo) / step);
        for (int i = 1; i <= np; ++i) e.push_back(lo + i * step);
        const Material* mat = env.bulk ? &*env.bulk
                              : env.sphere ? &env.sphere->material
                                           : nullptr;
        if (mat && !mat->is_vacuum() && !mat->is_tabulated() &&
            mat->damping() < step) {
            auto cl = clustered_edges(lo, hi, 1.0, std::max(mat->damping(), 1e-9));
            e.insert(e.end(), cl.begin(), cl.end());
        }
        std::sort(e.begin(), e.end());
        e.erase(std::unique(e.begin(), e.end()), e.end());
        return e;
    };

    // resonant denominator: symmetric bracket around the pole, remainder as
    // ordinary panels
    const double s = std::min(wt - opt.omega_min, opt.omega_cut - wt);
    double val = pv_integral(j_total, wt - s, wt + s, wt, opt.nodes);
    auto res_rest = [&](double w) { return j_total(w) / (w - wt); };
    if (wt - s > opt.omega_min + 1e-12)
        val += integrate_panels(res_rest, window_edges(opt.omega_min, wt - s),
                                opt.nodes);
    if (wt + s < opt.omega_cut - 1e-12)
        val += integrate_panels(res_rest, window_edges(wt + s, opt.omega_cut),
                                opt.nodes);
    // antiresonant denominator over the whole window
    val += integrate_panels([&](double w) { return j_total(w) / (w + wt); },
                            window_edges(opt.omega_min, opt.omega_cut), opt.nodes);

    // tails: each propagation path has its own oscillation period
    auto weight = [wt](double w) { return 1.0 / (w - wt) + 1.0 / (w + wt); };
    if (env.bulk) {
        const Material medium = *env.bulk;
        auto f = [&](double w) {
            return w * w * j_of(bulk_green(ra, rb, w, medium).matrix) * weight(w);
        };
        val += oscillatory_tail(f, opt.omega_cut, two_pi / Rdir, 8, opt.nodes);
    } else {
        auto fv = [&](double w) {
            return w * w * j_of(vacuum_green(ra, rb, w).matrix) * weight(w);
        };
        val += oscillatory_tail(fv, opt.omega_cut, two_pi / Rdir, 8, opt.nodes);
        if (env.sphere) {
            auto fs = [&](double w) {
                return w * w *
                       j_of(sphere_scattering_green(*env.sphere, ra, rb, w, tol)
                                .matrix) *
                       weight(w);
            };
            val += oscillatory_tail(fs, opt.omega_cut, two_pi / Rrefl, 8, opt.nodes);
        }
    }
    return dd * val / pi;
}

double bulk_limit_delta(const AtomPair& pair, const Material& medium,
                        BulkRange range) {
    pair.validate();
    const Atom &a = pair.A, &b = pair.B;
    const double wt = b.omega_tilde;
    const double dd = a.dipole_moment() * b.dipole_moment();
    const Eigen::Vector3d R = a.position() - b.position();
    const double Rn = R.norm();
    if (Rn < 1e-14) throw GeometryError("bulk limit: atoms must be separated");
    const Eigen::Vector3d u = R / Rn;
    const double pa = a.dipole.real().dot(u);
    const double pb = b.dipole.real().dot(u);
    const double pp = a.dipole.real().dot(b.dipole.real());
    if (range == BulkRange::near) {
        // quasistatic screening: G -> (3uu - 1) / (4 pi eps w^2 R^3)
        const cplx inv_eps = 1.0 / medium.permittivity(wt);
        return dd * (3.0 * pa * pb - pp) * inv_eps.real() /
               (4.0 * pi * Rn * Rn * Rn);
    }
    // radiation zone: G -> e^{i n w R} (1 - uu) / (4 pi R)
    const cplx n = medium.refractive_index(wt);
    const cplx phase = std::exp(I * n * wt * Rn);
    return dd * wt * wt * (phase * (pp - pa * pb)).real() / (4.0 * pi * Rn);
}

} // namespace rddi
