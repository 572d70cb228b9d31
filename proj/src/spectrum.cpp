#include "rddi/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rddi/errors.hpp"
#include "rddi/fit.hpp"
#include "rddi/quad.hpp"

namespace rddi {
namespace {

using Eigen::Vector3cd;
using Eigen::Vector3d;

double figure_norm(const EmissionWeights& w) {
    const double wt = w.omega_tilde;
    return 64.0 * pi * w.gamma0 / (3.0 * wt * wt * wt);
}

} // namespace

double figure_normalization(const EmissionWeights& w) { return figure_norm(w); }

namespace {

Vector3cd dipole_vector(const Atom& atom) {
    return atom.dipole * atom.dipole_moment();
}

// panel edges resolving both the spatial oscillation (period 2 pi / distance
// in frequency) and the material features; mode structure narrower than the
// material damping contributes O(strength * width / omega) to the smooth
// integrals here and needs no dedicated resolution
std::vector<double> weight_edges(double lo, double hi, double dist,
                                 const Environment& env) {
    std::vector<double> e{lo, hi};
    const double step =
        std::min(pi / std::max(dist, 1e-6), (hi - lo) / 8.0);
    const int np = static_cast<int>((hi - lo) / step);
    for (int i = 1; i <= np; ++i) e.push_back(lo + i * step);
    const Material* mat = env.bulk     ? &*env.bulk
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
}

Vector3cd im_green_d(const Environment& env, const Vector3d& rd,
                     const Vector3d& ra, double omega, const Vector3cd& d,
                     const Tolerances& tol) {
    return total_green(env, rd, ra, omega, tol).matrix.imag().cast<cplx>() * d;
}

// \int_0^inf Im G(r_d, r_a, w') . d / (w' + w) dw'; no pole, but the
// integrand oscillates with period 2 pi / |r_d - r_a| past the cut, where
// only the (there dominant) free-space part is kept
Vector3cd antiresonant_integral(const Environment& env, const Vector3d& rd,
                                const Vector3d& ra, double omega_tilde,
                                const Vector3cd& d, const Tolerances& tol,
                                const PVOptions& pv) {
    const double dist = (rd - ra).norm();
    const auto edges = weight_edges(pv.omega_min, pv.omega_cut, dist, env);
    const GaussRule& gr = gauss_legendre(tol.quad_base_nodes);
    Vector3cd acc = Vector3cd::Zero();
    for (size_t p = 0; p + 1 < edges.size(); ++p) {
        const double mid = 0.5 * (edges[p] + edges[p + 1]);
        const double half = 0.5 * (edges[p + 1] - edges[p]);
        for (size_t q = 0; q < gr.x.size(); ++q) {
            const double w = mid + half * gr.x[q];
            acc += (half * gr.w[q] / (w + omega_tilde)) *
                   im_green_d(env, rd, ra, w, d, tol);
        }
    }
    const double period = two_pi / std::max(dist, 1e-6);
    const bool complex_dipole = !d.imag().isZero(0.0);
    for (int j = 0; j < 3; ++j) {
        auto tail = [&](bool imag_part) {
            return oscillatory_tail(
                [&](double w) {
                    const cplx v =
                        (vacuum_green(rd, ra, w).matrix.imag().cast<cplx>() * d)(j) /
                        (w + omega_tilde);
                    return imag_part ? v.imag() : v.real();
                },
                pv.omega_cut, period);
        };
        acc[j] += cplx(tail(false), complex_dipole ? tail(true) : 0.0);
    }
    return acc;
}

Vector3cd weight_kk(const Atom& atom, const Vector3d& rd,
                    const Environment& env, const Tolerances& tol,
                    const PVOptions& pv) {
    const Vector3d ra = atom.position();
    const Vector3cd d = dipole_vector(atom);
    const double wt = atom.omega_tilde;
    const GreenTensor g = total_green(env, rd, ra, wt, tol);
    const Vector3cd a = antiresonant_integral(env, rd, ra, wt, d, tol, pv);
    return wt * wt * (-I * (g.matrix * d) + (I / pi) * a);
}

Vector3cd weight_pv(const Atom& atom, const Vector3d& rd,
                    const Environment& env, const Tolerances& tol,
                    const PVOptions& pv) {
    if (!atom.dipole.imag().isZero(0.0))
        throw ConfigError("pv_quadrature weights need a real dipole orientation");
    const double wt = atom.omega_tilde;
    if (wt <= pv.omega_min || wt >= pv.omega_cut)
        throw ConfigError("transition frequency outside the pv window");
    const Vector3d ra = atom.position();
    const Vector3d d = atom.dipole.real() * atom.dipole_moment();
    const double dist = (rd - ra).norm();
    const double period = two_pi / std::max(dist, 1e-6);
    const int nodes = tol.quad_base_nodes;
    const double s = std::min(wt - pv.omega_min, pv.omega_cut - wt);
    Vector3d pvpart;
    for (int j = 0; j < 3; ++j) {
        auto fj = [&](double w) {
            return (total_green(env, rd, ra, w, tol).matrix.imag() * d)(j);
        };
        // pv_integral carries 1/(w - wt); the weight wants 1/(wt - w)
        double val = -pv_integral(fj, wt - s, wt + s, wt, nodes);
        auto rest = [&](double w) { return fj(w) / (wt - w); };
        if (wt - s > pv.omega_min + 1e-12)
            val += integrate_panels(
                rest, weight_edges(pv.omega_min, wt - s, dist, env), nodes);
        if (wt + s < pv.omega_cut - 1e-12)
            val += integrate_panels(
                rest, weight_edges(wt + s, pv.omega_cut, dist, env), nodes);
        val += oscillatory_tail(
            [&](double w) {
                return (vacuum_green(rd, ra, w).matrix.imag() * d)(j) / (wt - w);
            },
            pv.omega_cut, period);
        pvpart[j] = val;
    }
    const Vector3d on_shell = total_green(env, rd, ra, wt, tol).matrix.imag() * d;
    return wt * wt * (on_shell.cast<cplx>() + (I / pi) * pvpart.cast<cplx>());
}

Vector3cd weight_delta(const Atom& atom, const Vector3d& rd,
                       const Environment& env, const Tolerances& tol) {
    const double wt = atom.omega_tilde;
    return wt * wt * im_green_d(env, rd, atom.position(), wt, dipole_vector(atom), tol);
}

void check_frame(const CouplingSet& cs, const EmissionWeights& w) {
    if (std::abs(w.omega_tilde - cs.omega_ref) > 1e-6 * std::abs(cs.omega_ref))
        throw ConfigError("weights and couplings evaluated at different frequencies");
    if (!(w.gamma0 > 0.0)) throw ConfigError("nonpositive gamma0 in weights");
}

void sort_lines(std::vector<SpectralLine>& lines) {
    std::sort(lines.begin(), lines.end(),
              [](const SpectralLine& a, const SpectralLine& b) {
                  return a.position < b.position;
              });
}

} // namespace

Eigen::Vector3cd emission_weight_F(const Atom& atom,
                                   const Eigen::Vector3d& detector_lambda,
                                   const Environment& env, WeightMode mode,
                                   const Tolerances& tol, const PVOptions& pv) {
    atom.validate();
    const Vector3d rd = detector_lambda * two_pi;
    if ((rd - atom.position()).norm() < 1e-9)
        throw ConfigError("detector sits on the atom");
    switch (mode) {
    case WeightMode::kk: return weight_kk(atom, rd, env, tol, pv);
    case WeightMode::pv_quadrature: return weight_pv(atom, rd, env, tol, pv);
    case WeightMode::delta_only: return weight_delta(atom, rd, env, tol);
    }
    throw ConfigError("unknown weight mode");
}

Eigen::Vector3cd emission_weight_W(const Atom& atom,
                                   const Eigen::Vector3d& detector_lambda,
                                   const Environment& env,
                                   const ResonanceInfo& res, double Omega,
                                   const Tolerances& tol) {
    atom.validate();
    if (!(res.omega_m > 0.0) || !(res.delta_omega_m > 0.0))
        throw ConfigError("incomplete resonance data for the pair-line weight");
    if (!(Omega > 0.0))
        throw ConfigError("pair-line weight needs a positive Rabi frequency");
    const Vector3d rd = detector_lambda * two_pi;
    if ((rd - atom.position()).norm() < 1e-9)
        throw ConfigError("detector sits on the atom");
    const double pref = res.omega_m * res.omega_m * res.delta_omega_m / Omega;
    return pref * im_green_d(env, rd, atom.position(), res.omega_m,
                             dipole_vector(atom), tol);
}

EmissionWeights make_weights(const AtomPair& pair,
                             const Eigen::Vector3d& detector_lambda,
                             const Environment& env, const CouplingSet& cs,
                             const std::optional<ResonanceInfo>& res,
                             WeightMode mode, const Tolerances& tol,
                             const PVOptions& pv) {
    pair.validate();
    EmissionWeights w;
    w.detector_lambda = detector_lambda;
    w.omega_tilde = pair.A.omega_tilde;
    w.gamma0 = pair.A.gamma0;
    w.F_A = emission_weight_F(pair.A, detector_lambda, env, mode, tol, pv);
    w.F_B = emission_weight_F(pair.B, detector_lambda, env, mode, tol, pv);
    if (res) {
        const double delta = cs.delta_AB.real();
        const double det_p = std::abs(cs.omega_ref - delta - res->omega_m);
        const double det_m = std::abs(cs.omega_ref + delta - res->omega_m);
        const double Omega = det_p <= det_m ? cs.Omega_plus : cs.Omega_minus;
        if (Omega > 0.0) {
            w.W_A = emission_weight_W(pair.A, detector_lambda, env, *res, Omega, tol);
            w.W_B = emission_weight_W(pair.B, detector_lambda, env, *res, Omega, tol);
        }
    }
    return w;
}

SpectrumResult weak_spectrum(const CouplingSet& cs, const EmissionWeights& w,
                             const std::vector<double>& omega_S) {
    if (omega_S.empty()) throw ConfigError("empty spectral grid");
    if (!cs.symmetric)
        throw RegimeError("doublet form needs a symmetric coupling set");
    check_frame(cs, w);
    const double delta = cs.delta_AB.real();
    if (cs.omega_m > 0.0 && cs.delta_omega_m > 0.0) {
        for (int s : {+1, -1}) {
            const double Om = s > 0 ? cs.Omega_plus : cs.Omega_minus;
            const double det = std::abs(cs.omega_ref - s * delta - cs.omega_m);
            if (Om > 10.0 * cs.delta_omega_m && det <= 0.25 * Om)
                throw RegimeError(
                    "a superposition state rings the narrow mode; "
                    "the doublet form does not apply");
        }
    }
    const double gp = (cs.gamma(0, 0) + cs.gamma(0, 1)).real();
    const double gm = (cs.gamma(0, 0) - cs.gamma(0, 1)).real();
    if (!(gp > 0.0) || !(gm > 0.0))
        throw ConfigError("nonpositive superposition linewidth");
    const Vector3cd Vp = w.F_A + w.F_B;
    const Vector3cd Vm = w.F_A - w.F_B;
    const double nrm = figure_norm(w);
    SpectrumResult sr;
    sr.omega_S = omega_S;
    sr.S.resize(omega_S.size());
    for (size_t i = 0; i < omega_S.size(); ++i) {
        const double dw = omega_S[i] - w.omega_tilde;
        const Vector3cd X = Vp / cplx(dw + delta, 0.5 * gp) +
                            Vm / cplx(dw - delta, 0.5 * gm);
        sr.S[i] = 0.25 * X.squaredNorm() * nrm;
    }
    sr.lines = {{w.omega_tilde - delta, gp, Vp.squaredNorm() * nrm,
                 LineKind::doublet_plus},
                {w.omega_tilde + delta, gm, Vm.squaredNorm() * nrm,
                 LineKind::doublet_minus}};
    sort_lines(sr.lines);
    return sr;
}

SpectrumResult strong_spectrum(const CouplingSet& cs, const ResonanceInfo& res,
                               const EmissionWeights& w,
                               const std::vector<double>& omega_S) {
    if (omega_S.empty()) throw ConfigError("empty spectral grid");
    check_frame(cs, w);
    const StrongSolution sol = classify_strong(cs, res);
    const double s = sol.branch;
    if (w.W_A.isZero(0.0) && w.W_B.isZero(0.0))
        throw ConfigError("emission weights carry no pair-line W fields");
    const Vector3cd Wp = w.W_A + s * w.W_B;
    const Vector3cd Fr = w.F_A - s * w.F_B;
    const bool has_residual = Fr.squaredNorm() > 0.0;
    const double dm = res.delta_omega_m;
    if (has_residual && !(sol.Gamma_other > 0.0))
        throw ConfigError("detuned line has vanishing width but finite weight");
    const double nrm = figure_norm(w);
    SpectrumResult sr;
    sr.omega_S = omega_S;
    sr.S.resize(omega_S.size());
    for (size_t i = 0; i < omega_S.size(); ++i) {
        const double dw = omega_S[i] - w.omega_tilde;
        Vector3cd X =
            Wp * (1.0 / cplx(dw + s * sol.delta + 0.5 * sol.Omega, 0.5 * dm) -
                  1.0 / cplx(dw + s * sol.delta - 0.5 * sol.Omega, 0.5 * dm));
        if (has_residual)
            X += I * Fr / cplx(dw - s * sol.delta, 0.5 * sol.Gamma_other);
        sr.S[i] = 0.25 * X.squaredNorm() * nrm;
    }
    const double wpair = Wp.squaredNorm() * nrm;
    sr.lines.push_back({w.omega_tilde - s * sol.delta - 0.5 * sol.Omega, dm,
                        wpair, LineKind::pair});
    sr.lines.push_back({w.omega_tilde - s * sol.delta + 0.5 * sol.Omega, dm,
                        wpair, LineKind::pair});
    if (has_residual)
        sr.lines.push_back({w.omega_tilde + s * sol.delta, sol.Gamma_other,
                            Fr.squaredNorm() * nrm, LineKind::residual});
    sort_lines(sr.lines);
    return sr;
}

SpectrumResult finite_time_spectrum(const Trajectory& traj,
                                    const EmissionWeights& w,
                                    const std::vector<double>& omega_S,
                                    double T) {
    const size_t n = traj.times.size();
    if (n < 2 || traj.C_A.size() != n || traj.C_B.size() != n)
        throw ConfigError("trajectory too short or inconsistent");
    if (std::abs(traj.times.front()) > 1e-12)
        throw ConfigError("trajectory must start at t = 0");
    if (!(T > 0.0)) throw ConfigError("observation time must be positive");
    if (omega_S.empty()) throw ConfigError("empty spectral grid");

    SpectrumResult sr;
    sr.omega_S = omega_S;
    sr.S.resize(omega_S.size());

    double Tend = T;
    if (T > traj.times.back() * (1.0 + 1e-12)) {
        Tend = traj.times.back();
        sr.truncated = true;
    }
    size_t last = 0;
    while (last + 1 < n && traj.times[last + 1] <= Tend) ++last;
    cplx caT = traj.C_A[last], cbT = traj.C_B[last];
    bool partial = false;
    if (last + 1 < n && Tend > traj.times[last] + 1e-15 * Tend) {
        const double f =
            (Tend - traj.times[last]) / (traj.times[last + 1] - traj.times[last]);
        caT += f * (traj.C_A[last + 1] - traj.C_A[last]);
        cbT += f * (traj.C_B[last + 1] - traj.C_B[last]);
        partial = true;
    }
    if (std::norm(caT) + std::norm(cbT) > 1e-6) sr.truncated = true;

    const double nrm = figure_norm(w);
    for (size_t i = 0; i < omega_S.size(); ++i) {
        const double x = omega_S[i] - w.omega_tilde;
        cplx hatA(0.0, 0.0), hatB(0.0, 0.0);
        cplx ph(1.0, 0.0); // e^{i x t} carried along the segments
        double h_cached = -1.0;
        cplx phi1, psi, ehx;
        for (size_t k = 0; k <= last; ++k) {
            cplx ca1, cb1;
            double tb;
            if (k < last) {
                tb = traj.times[k + 1];
                ca1 = traj.C_A[k + 1];
                cb1 = traj.C_B[k + 1];
            } else {
                if (!partial) break;
                tb = Tend;
                ca1 = caT;
                cb1 = cbT;
            }
            const double h = tb - traj.times[k];
            if (!(h > 0.0)) continue;
            if (h != h_cached) {
                // \int_0^h e^{ixu} du = h phi1, \int_0^h (u/h) e^{ixu} du = h psi
                const cplx z = I * (x * h);
                if (std::abs(x) * h < 1e-4) {
                    phi1 = 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
                    psi = 0.5 + z * (1.0 / 3.0 + z * (0.125 + z / 30.0));
                } else {
                    const cplx ez = std::exp(z);
                    phi1 = (ez - 1.0) / z;
                    psi = (ez * (z - 1.0) + 1.0) / (z * z);
                }
                ehx = std::exp(z);
                h_cached = h;
            }
            hatA += ph * h * (traj.C_A[k] * phi1 + (ca1 - traj.C_A[k]) * psi);
            hatB += ph * h * (traj.C_B[k] * phi1 + (cb1 - traj.C_B[k]) * psi);
            ph *= ehx;
        }
        const Vector3cd X = w.F_A * hatA + w.F_B * hatB;
        sr.S[i] = X.squaredNorm() * nrm;
    }
    try {
        sr.lines = extract_lines(sr);
    } catch (const ConfigError&) {
        sr.lines.clear();
    }
    return sr;
}

std::vector<double> default_spectrum_grid(
    const CouplingSet& cs, int points, const std::vector<SpectralLine>& focus) {
    const double gp = (cs.gamma(0, 0) + cs.gamma(0, 1)).real();
    const double span =
        std::max({10.0 * gp, 4.0 * std::abs(cs.delta_AB.real()),
                  4.0 * cs.Omega_plus, 4.0 * cs.Omega_minus});
    if (!(span > 0.0))
        throw ConfigError("coupling set carries no spectral scales");
    points = std::max(points, 2000);
    std::vector<double> grid;
    grid.reserve(static_cast<size_t>(points) + focus.size() * 161);
    const double lo = cs.omega_ref - 0.5 * span;
    const double step = span / (points - 1);
    for (int i = 0; i < points; ++i) grid.push_back(lo + i * step);
    for (const auto& ln : focus) {
        if (!(ln.width > 0.0)) continue;
        const double a = ln.position - 8.0 * ln.width;
        const double b = ln.position + 8.0 * ln.width;
        for (int i = 0; i <= 160; ++i)
            grid.push_back(a + (b - a) * i / 160.0);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

std::vector<SpectralLine> extract_lines(const SpectrumResult& sr,
                                        double prominence) {
    const auto& x = sr.omega_S;
    const auto& y = sr.S;
    if (x.size() < 5 || y.size() != x.size())
        throw ConfigError("spectrum too short for line extraction");
    const double ymax = *std::max_element(y.begin(), y.end());
    if (!(ymax > 0.0)) return {};

    std::vector<size_t> peaks;
    for (size_t i = 1; i + 1 < x.size(); ++i)
        if (y[i] >= prominence * ymax && y[i] > y[i - 1] && y[i] >= y[i + 1])
            peaks.push_back(i);

    std::vector<SpectralLine> out;
    for (size_t pi = 0; pi < peaks.size(); ++pi) {
        const size_t i = peaks[pi];
        const double half = 0.5 * y[i];
        // half-maximum crossings along the monotone flanks
        double wl = 0.0, wr = 0.0;
        for (size_t j = i; j > 0 && y[j - 1] <= y[j]; --j) {
            if (y[j - 1] <= half) {
                const double xc = x[j - 1] + (x[j] - x[j - 1]) *
                                                 (half - y[j - 1]) /
                                                 (y[j] - y[j - 1]);
                wl = x[i] - xc;
                break;
            }
        }
        for (size_t j = i; j + 1 < x.size() && y[j + 1] <= y[j]; ++j) {
            if (y[j + 1] <= half) {
                const double xc = x[j] + (x[j + 1] - x[j]) * (y[j] - half) /
                                             (y[j] - y[j + 1]);
                wr = xc - x[i];
                break;
            }
        }
        double w_est;
        if (wl > 0.0 && wr > 0.0) w_est = 0.5 * (wl + wr);
        else if (wl > 0.0) w_est = wl;
        else if (wr > 0.0) w_est = wr;
        else w_est = 2.0 * std::max(x[i] - x[i - 1], x[i + 1] - x[i]);

        double dist = std::numeric_limits<double>::infinity();
        for (size_t qi : peaks)
            if (qi != i) dist = std::min(dist, std::abs(x[qi] - x[i]));
        const double win = std::min(5.0 * w_est, 0.45 * dist);

        size_t a = i, b = i;
        while (a > 0 && x[i] - x[a - 1] <= win) --a;
        while (b + 1 < x.size() && x[b + 1] - x[i] <= win) ++b;
        while (b - a + 1 < 7 && (a > 0 || b + 1 < x.size())) {
            if (a > 0) --a;
            if (b + 1 < x.size()) ++b;
        }
        const std::vector<double> xs(x.begin() + a, x.begin() + b + 1);
        const std::vector<double> ys(y.begin() + a, y.begin() + b + 1);
        const LorentzianFit fit = fit_lorentzian(xs, ys, x[i], w_est);
        const double hw = std::abs(fit.w);
        out.push_back({fit.x0, 2.0 * hw, 4.0 * fit.A * hw * hw,
                       LineKind::residual});
    }
    sort_lines(out);
    return out;
}

} // namespace rddi
