#include "rddi/selftest.hpp"
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include "rddi/coupling.hpp"
#include "rddi/dynamics.hpp"
#include "rddi/errors.hpp"
#include "rddi/green.hpp"
#include "rddi/material.hpp"
#include "rddi/presets.hpp"
#include "rddi/runner.hpp"
#include "rddi/spectrum.hpp"
#include "rddi/volterra.hpp"

namespace rddi {

namespace {

std::string num(double v) {
    std::ostringstream o;
    o.precision(10);
    o << v;
    return o.str();
}

CouplingSet make_cs(double gA, double gB, cplx K_AB, cplx K_BA,
                    double omega_ref = 1.0) {
    CouplingSet cs;
    cs.omega_ref = omega_ref;
    cs.gamma = Eigen::Matrix2cd::Zero();
    cs.gamma(0, 0) = gA;
    cs.gamma(1, 1) = gB;
    cs.gamma(0, 1) = -2.0 * K_AB.real();
    cs.gamma(1, 0) = -2.0 * K_BA.real();
    cs.K_AB = K_AB;
    cs.K_BA = K_BA;
    cs.delta_AB = K_AB.imag();
    cs.delta_BA = K_BA.imag();
    cs.symmetric = (K_AB == K_BA);
    return cs;
}

CouplingSet make_strong(double g, double gab, double delta, double omega_m,
                        double dw, double omega_ref) {
    CouplingSet cs = make_cs(g, g, cplx(-0.5 * gab, delta),
                             cplx(-0.5 * gab, delta), omega_ref);
    cs.omega_m = omega_m;
    cs.delta_omega_m = dw;
    cs.Omega_plus = std::sqrt(std::max(0.0, 2.0 * (g + gab) * dw));
    cs.Omega_minus = std::sqrt(std::max(0.0, 2.0 * (g - gab) * dw));
    cs.regime = Regime::strong;
    return cs;
}

Atom at_frequency(Atom a, double w) {
    a.omega = w;
    a.omega_tilde = w;
    return a;
}

struct Harness {
    SelfTestOptions opt;
    Tolerances tol;
    SelfTestReport report;

    explicit Harness(const SelfTestOptions& o)
        : opt(o),
          tol(o.fast ? tolerance_profile_fast() : tolerance_profile_paper()) {}

    // run `body` returning the detail string; exceptions become failures
    void check(const std::string& name, const std::function<std::string()>& body) {
        CheckResult r;
        r.name = name;
        try {
            r.detail = body();
            r.status = CheckStatus::pass;
        } catch (const std::exception& e) {
            r.status = CheckStatus::fail;
            r.detail = e.what();
        }
        push(r);
    }

    void skip(const std::string& name, const std::string& why) {
        push({name, CheckStatus::skip, why});
    }

    void push(const CheckResult& r) {
        report.checks.push_back(r);
        if (opt.progress) opt.progress(r);
    }
};

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::runtime_error(msg);
}

void require_close(double got, double want, double tol_abs,
                   const std::string& label) {
    if (!(std::abs(got - want) <= tol_abs))
        throw std::runtime_error(label + " = " + num(got) + ", expected " +
                                 num(want) + " +- " + num(tol_abs));
}

// ---- closed-form rate and trapping checks ---------------------------------

std::string check_rate_ratios() {
    const cplx k(1e-9, 0.0);
    const RateReport ri = golden_rule_rate(make_cs(1e-4, 1e-8, k, k));
    const RateReport rii = golden_rule_rate(make_cs(1e-4, 1e-4, k, k));
    const RateReport riii = golden_rule_rate(make_cs(1e-8, 1e-4, k, k));
    require_close(ri.ratio, 1.0, 0.05, "case-i w1/w");
    require_close(rii.ratio, std::sqrt(2.0) - 1.0, 0.01, "case-ii w1/w");
    require_close(riii.ratio, 0.25, 0.02, "case-iii w1/w");
    require_close(ri.corrected_ratio, 1.0, 0.02, "case-i corrected");
    require_close(rii.corrected_ratio,
                  (std::sqrt(2.0) - 1.0) * std::exp(2.0 - std::sqrt(2.0)), 0.02,
                  "case-ii corrected");
    require_close(riii.corrected_ratio, 1.0, 0.02, "case-iii corrected");
    return "w1/w " + num(ri.ratio) + " " + num(rii.ratio) + " " +
           num(riii.ratio) + "; corrected " + num(ri.corrected_ratio) + " " +
           num(rii.corrected_ratio) + " " + num(riii.corrected_ratio);
}

std::string check_transfer_times() {
    const cplx k(1e-9, 0.0);
    const double ti = transfer_time_t0(make_cs(1e-4, 1e-8, k, k)) * 1e-4;
    const double tii = transfer_time_t0(make_cs(1e-4, 1e-4, k, k)) * 1e-4;
    const double tiii = transfer_time_t0(make_cs(1e-8, 1e-4, k, k)) * 1e-4;
    require_close(ti, std::log(4.0), 0.01 * std::log(4.0), "case-i Gamma*t0");
    require_close(tii, 2.0 - std::sqrt(2.0), 0.01 * (2.0 - std::sqrt(2.0)),
                  "case-ii Gamma*t0");
    require_close(tiii, std::log(4.0), 0.01 * std::log(4.0), "case-iii Gamma*t0");
    // the numeric max-slope cross-check runs inside transfer_rate_w1
    const RateReport rr = transfer_rate_w1(make_cs(1e-4, 1e-4, k, k));
    require(std::abs(rr.w1_numeric - rr.w1) <= 0.01 * rr.w1,
            "numeric max-slope disagrees with the closed form");
    return "Gamma*t0 " + num(ti) + " " + num(tii) + " " + num(tiii);
}

std::string check_trapping() {
    const double g = 1e-2, dw = 1e-9;
    const double Om = std::sqrt(4.0 * g * dw);
    ResonanceInfo res;
    res.omega_m = 1.0;
    res.delta_omega_m = dw;
    res.strength = 2.0 * g;
    const TrappingReport ti =
        classify_regime(make_strong(g, g, 250.0 * Om, 1.0, dw, 1.0 + 250.0 * Om), res);
    const TrappingReport tii =
        classify_regime(make_strong(g, g, 0.25 * Om, 1.0, dw, 1.0 + 0.25 * Om), res);
    const TrappingReport tiii = classify_regime(make_strong(g, g, 0.0, 1.0, dw, 1.0), res);
    require(ti.label == CaseLabel::i && tii.label == CaseLabel::ii &&
                tiii.label == CaseLabel::iii,
            "trapping labels misassigned");
    require_close(ti.P_A_avg, 0.5, 0.02, "case-i <P_A>");
    require_close(ti.P_B_avg, 0.5, 0.02, "case-i <P_B>");
    require_close(ti.P_L_avg, 0.0, 0.02, "case-i <P_L>");
    require_close(tii.P_A_avg, 5.0 / 8.0, 0.02, "case-ii <P_A>");
    require_close(tii.P_B_avg, 1.0 / 8.0, 0.02, "case-ii <P_B>");
    require_close(tii.P_L_avg, 2.0 / 8.0, 0.02, "case-ii <P_L>");
    require_close(tiii.P_A_avg, 3.0 / 8.0, 0.02, "case-iii <P_A>");
    require_close(tiii.P_B_avg, 3.0 / 8.0, 0.02, "case-iii <P_B>");
    require_close(tiii.P_L_avg, 2.0 / 8.0, 0.02, "case-iii <P_L>");
    return "averages (" + num(ti.P_A_avg) + "," + num(ti.P_B_avg) + "," +
           num(ti.P_L_avg) + ") (" + num(tii.P_A_avg) + "," + num(tii.P_B_avg) +
           "," + num(tii.P_L_avg) + ") (" + num(tiii.P_A_avg) + "," +
           num(tiii.P_B_avg) + "," + num(tiii.P_L_avg) + ")";
}

// ---- microsphere checks ----------------------------------------------------

Material tampered_sphere_material() {
    const Material base = Material::drude_lorentz(0.5, 1e-6);
    std::vector<double> om;
    std::vector<cplx> eps;
    for (int i = 0; i <= 4000; ++i) {
        const double w = 1.03 + 1e-5 * i;
        om.push_back(w);
        eps.push_back(std::conj(base.permittivity(w)));
    }
    return Material::tabulated(std::move(om), std::move(eps));
}

Environment fig_environment(FaultInjection fault) {
    Environment env;
    env.sphere = SphereGeometry{
        20.0, fault == FaultInjection::sphere_eps_sign
                  ? tampered_sphere_material()
                  : Material::drude_lorentz(0.5, 1e-6)};
    return env;
}

Atom radial_probe() {
    Atom a;
    a.position_lambda = {0.0, 0.0, 10.02};
    a.dipole = Eigen::Vector3cd::UnitZ();
    a.gamma0 = 1e-6;
    a.omega = a.omega_tilde = 1.05;
    return a;
}

} // namespace

bool SelfTestReport::all_passed() const {
    for (const auto& c : checks)
        if (c.status == CheckStatus::fail) return false;
    return true;
}

std::string format_report(const SelfTestReport& report) {
    std::ostringstream o;
    int passed = 0, failed = 0, skipped = 0;
    for (const auto& c : report.checks) {
        const char* tag = c.status == CheckStatus::pass   ? "PASS"
                          : c.status == CheckStatus::fail ? "FAIL"
                                                          : "SKIP";
        (c.status == CheckStatus::pass   ? passed
         : c.status == CheckStatus::fail ? failed
                                         : skipped)++;
        o << tag << " " << c.name << " " << c.detail << "\n";
    }
    o << "self-test: " << passed << " passed, " << failed << " failed, "
      << skipped << " skipped\n";
    return o.str();
}

SelfTestReport self_test(const SelfTestOptions& opt) {
    Harness h(opt);
    const Tolerances& tol = h.tol;

    h.check("rate-law-ratios", check_rate_ratios);
    h.check("transfer-time-constants", check_transfer_times);
    h.check("trapping-fractions", check_trapping);

    // microsphere resonance + strong splitting (shared Mie work)
    std::optional<ResonanceInfo> res;
    if (!opt.heavy) {
        h.skip("microsphere-resonance", "heavy checks disabled");
        h.skip("strong-splitting", "heavy checks disabled");
    } else {
        // atoms sit 0.02 lambda off the surface; the multipole sum only
        // converges there under the full-depth tolerances
        const Tolerances mie = tolerance_profile_paper();
        const Environment env = fig_environment(opt.fault);
        h.check("microsphere-resonance", [&] {
            const Atom probe = radial_probe();
            const ResonanceInfo ri = find_resonance(
                [&](double w) {
                    return gamma_coupling(at_frequency(probe, w),
                                          at_frequency(probe, w), env, mie)
                        .real();
                },
                1.0504, 1.0506, mie.resonance_rel);
            require(std::abs(ri.omega_m - 1.0504867) <= 1e-5 * 1.0504867,
                    "omega_m = " + num(ri.omega_m) + ", expected 1.0504867");
            require(ri.delta_omega_m >= 2.5e-7 && ri.delta_omega_m <= 1e-6,
                    "delta_omega_m = " + num(ri.delta_omega_m) +
                        ", expected 5e-7 within a factor 2");
            res = ri;
            return "omega_m " + num(ri.omega_m) + " delta_omega_m " +
                   num(ri.delta_omega_m);
        });
        if (!res) {
            h.skip("strong-splitting", "resonance location unavailable");
        } else {
            h.check("strong-splitting", [&] {
                Atom A = radial_probe(), B = radial_probe();
                B.position_lambda = {0.0, 0.0, -10.02};
                A = at_frequency(A, res->omega_m);
                B = at_frequency(B, res->omega_m);
                const double g0 = A.gamma0;
                const double gaa = gamma_coupling(A, A, env, mie).real();
                const double gab = gamma_coupling(A, B, env, mie).real();
                const double Om =
                    std::sqrt(std::max(0.0, 2.0 * (gaa + gab) * res->delta_omega_m));
                require_close(Om / g0, 128.0, 12.8, "Omega_plus/Gamma0");
                // near-field shift for the 0.01 lambda_T chord pair
                const double x = 0.005;
                const double z = std::sqrt(10.02 * 10.02 - x * x);
                Atom CA = at_frequency(radial_probe(), 1.04835747);
                Atom CB = CA;
                CA.position_lambda = {-x, 0.0, z};
                CB.position_lambda = {x, 0.0, z};
                const double dab = delta_coupling(CA, CB, env, mie).real() / g0;
                require_close(dab, -2129.0, 0.15 * 2129.0, "delta_AB/Gamma0");
                return "Omega_plus/Gamma0 " + num(Om / g0) +
                       " delta_AB/Gamma0 " + num(dab);
            });
        }
    }

    h.check("vacuum-im-green", [&] {
        double worst = 0.0;
        for (double w : {0.3, 1.0, 2.7}) {
            const Eigen::Vector3d r(0.7, -1.3, 2.1);
            const GreenTensor g = vacuum_green(r, r, w);
            const Eigen::Matrix3cd want =
                cplx(0, 1) * (w / (6.0 * pi)) * Eigen::Matrix3cd::Identity();
            worst = std::max(worst, (g.matrix - want).cwiseAbs().maxCoeff() /
                                        (w / (6.0 * pi)));
            require(g.imaginary_only, "coincident-point flag missing");
        }
        require(worst <= 1e-10, "vacuum Im G(r,r) off by " + num(worst));
        return "max relative deviation " + num(worst);
    });

    h.check("green-reciprocity", [&] {
        std::mt19937 rng(1234);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const Material medium = Material::drude_lorentz(0.5, 0.1);
        double worst = 0.0;
        auto rel_asym = [](const Eigen::Matrix3cd& g12, const Eigen::Matrix3cd& g21) {
            return (g12 - g21.transpose()).cwiseAbs().maxCoeff() /
                   std::max(g12.cwiseAbs().maxCoeff(), 1e-300);
        };
        for (int n = 0; n < 25; ++n) {
            const Eigen::Vector3d r1(2.0 * u(rng), 2.0 * u(rng), 2.0 * u(rng));
            Eigen::Vector3d r2(2.0 * u(rng), 2.0 * u(rng), 2.0 * u(rng));
            if ((r1 - r2).norm() < 0.3) r2 += Eigen::Vector3d(0.5, 0.5, 0.5);
            const double w = 0.6 + 0.4 * (u(rng) + 1.0);
            worst = std::max(worst, rel_asym(vacuum_green(r1, r2, w).matrix,
                                             vacuum_green(r2, r1, w).matrix));
            worst = std::max(worst,
                             rel_asym(bulk_green(r1, r2, w, medium).matrix,
                                      bulk_green(r2, r1, w, medium).matrix));
        }
        const SphereGeometry geo{2.0, Material::drude_lorentz(0.5, 0.05)};
        for (int n = 0; n < 3; ++n) {
            // positions in lambda_T, strictly outside the radius-1 sphere
            Eigen::Vector3d r1(1.3 + 0.1 * n, 0.2, -0.1);
            Eigen::Vector3d r2(-0.2, 1.2 + 0.1 * n, 0.4);
            r1 *= two_pi;
            r2 *= two_pi;
            const double w = 0.9 + 0.1 * n;
            worst = std::max(
                worst, rel_asym(sphere_scattering_green(geo, r1, r2, w, tol).matrix,
                                sphere_scattering_green(geo, r2, r1, w, tol).matrix));
        }
        require(worst <= 1e-6, "reciprocity violated at " + num(worst));
        return "max relative asymmetry " + num(worst);
    });

    h.check("im-green-positivity", [&] {
        std::mt19937 rng(4321);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const Material medium = Material::drude_lorentz(0.5, 0.1);
        for (int n = 0; n < 25; ++n) {
            const Eigen::Vector3d r1(u(rng), u(rng), u(rng));
            Eigen::Vector3d r2(u(rng), u(rng), u(rng));
            if ((r1 - r2).norm() < 0.2) r2 += Eigen::Vector3d(0.4, 0.0, 0.4);
            const double w = 0.5 + 0.5 * (u(rng) + 1.0);
            for (bool in_bulk : {false, true}) {
                auto G = [&](const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
                    return in_bulk ? bulk_green(a, b, w, medium).matrix
                                   : vacuum_green(a, b, w).matrix;
                };
                const Eigen::Matrix3d iaa = G(r1, r1).imag();
                const Eigen::Matrix3d ibb = G(r2, r2).imag();
                const Eigen::Matrix3d iab = G(r1, r2).imag();
                Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(iaa);
                require(es.eigenvalues().minCoeff() >= -1e-14 * w,
                        "Im G(r,r) not positive semi-definite");
                const Eigen::Vector3d d1(u(rng), u(rng), u(rng));
                const Eigen::Vector3d d2(u(rng), u(rng), u(rng));
                const double cross = d1.dot(iab * d2);
                const double bound = std::sqrt(std::max(0.0, d1.dot(iaa * d1)) *
                                               std::max(0.0, d2.dot(ibb * d2)));
                require(cross * cross <= bound * bound * (1.0 + 1e-9) + 1e-300,
                        "Cauchy-Schwarz bound violated");
            }
        }
        return "25 configurations, vacuum and absorbing bulk";
    });

    h.check("probability-bounds", [&] {
        std::mt19937 rng(99);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int n = 0; n < 1000; ++n) {
            const double gA = 1e-6 * (0.2 + 2.0 * u(rng));
            const double gB = 1e-6 * (0.2 + 2.0 * u(rng));
            const double gab = std::sqrt(gA * gB) * (2.0 * u(rng) - 1.0) * 0.999;
            const double dab = 1e-5 * (2.0 * u(rng) - 1.0);
            const CouplingSet cs =
                make_cs(gA, gB, cplx(-0.5 * gab, dab), cplx(-0.5 * gab, dab));
            for (int m = 0; m < 20; ++m) {
                const double t = 4e6 * u(rng);
                const AmplitudePair a = weak_amplitudes(cs, t);
                const double pa = std::norm(a.C_A), pb = std::norm(a.C_B);
                require(pa >= 0.0 && pa <= 1.0 + 1e-12, "P_A outside [0,1]");
                require(pb >= 0.0 && pb <= 1.0 + 1e-12, "P_B outside [0,1]");
                require(pa + pb <= 1.0 + 1e-9, "P_A + P_B exceeds 1");
            }
        }
        return "1000 random coupling sets, 20 sample times each";
    });

    h.check("doublet-separation", [&] {
        const double g = 1e-6, gab = 0.3e-6, dab = 4e-5;
        const CouplingSet cs =
            make_cs(g, g, cplx(-0.5 * gab, dab), cplx(-0.5 * gab, dab));
        EmissionWeights w;
        w.F_A = Eigen::Vector3cd(0, 0, cplx(1e-3, 0));
        w.F_B = Eigen::Vector3cd(0, 0, cplx(0.4e-3, 0));
        const auto grid = default_spectrum_grid(cs);
        const SpectrumResult sr = weak_spectrum(cs, w, grid);
        require(sr.lines.size() == 2, "expected a doublet");
        const double sep = std::abs(sr.lines[1].position - sr.lines[0].position);
        require_close(sep, 2.0 * std::abs(dab), 1e-12, "line separation");
        for (double s : sr.S) require(s >= 0.0, "negative spectral density");
        return "separation " + num(sep) + " = 2|delta|";
    });

    h.check("oracle-pv-vs-delta", [&] {
        Atom a;
        a.position_lambda = Eigen::Vector3d::Zero();
        a.dipole = Eigen::Vector3cd::UnitX();
        a.gamma0 = 1e-6;
        a.omega = a.omega_tilde = 1.0;
        Atom b = a;
        b.position_lambda = {0.0, 0.0, 0.5};
        const Environment vac{};
        const double exact = delta_coupling(a, b, vac, tol).real();
        const double pv = pv_coupling_oracle(a, b, vac, tol);
        require(std::abs(pv - exact) <= 0.01 * std::abs(exact),
                "PV integral " + num(pv) + " vs closed form " + num(exact));
        return "delta " + num(exact) + ", PV route " + num(pv);
    });

    h.check("oracle-volterra-weak", [&] {
        const double g = 1e-6, gab = 0.6e-6, hw = 3e-3;
        KernelSpec spec;
        spec.lines_AA = {{1.0, hw, g}};
        spec.lines_AB = {{1.0, hw, gab}};
        CouplingSet cs = make_cs(g, g, cplx(-0.5 * gab, 0.0), cplx(-0.5 * gab, 0.0));
        const Trajectory tr = volterra_solve(spec, cs, 5e6, 62.5);
        double worst = 0.0;
        for (std::size_t i = 8000; i < tr.times.size(); i += 8000) {
            const ProbabilityPair p = identical_probabilities(cs, tr.times[i]);
            worst = std::max(worst, std::abs(tr.P_A[i] - p.P_A));
            worst = std::max(worst, std::abs(tr.P_B[i] - p.P_B));
        }
        require(worst <= 1e-2, "worst probability deviation " + num(worst));
        return "worst probability deviation " + num(worst);
    });

    h.check("oracle-volterra-strong", [&] {
        const double hw = 5e-6, g = 6.25e-3;
        KernelSpec spec;
        spec.lines_AA = {{1.0, hw, g}};
        spec.lines_AB = {{1.0, hw, g}};
        CouplingSet cs = make_strong(g, g, 0.0, 1.0, hw, 1.0);
        ResonanceInfo res;
        res.omega_m = 1.0;
        res.delta_omega_m = hw;
        res.strength = 2.0 * g;
        const double Om = cs.Omega_plus;
        const Trajectory tr =
            volterra_solve(spec, cs, 3.0 * two_pi / Om, two_pi / Om / 400.0);
        double worst = 0.0;
        for (std::size_t i = 0; i < tr.times.size(); ++i) {
            const AmplitudePair a = strong_amplitudes(cs, res, tr.times[i]);
            worst = std::max(worst, std::abs(tr.C_A[i] - a.C_A));
            worst = std::max(worst, std::abs(tr.C_B[i] - a.C_B));
        }
        require(worst <= 2e-2, "worst amplitude deviation " + num(worst));
        return "worst amplitude deviation " + num(worst);
    });

    h.check("oracle-finite-spectrum", [&] {
        const double g = 1e-6, gab = 0.3e-6, dab = 4e-5;
        const CouplingSet cs =
            make_cs(g, g, cplx(-0.5 * gab, dab), cplx(-0.5 * gab, dab));
        EmissionWeights w;
        w.F_A = Eigen::Vector3cd(0, 0, cplx(1e-3, 0));
        w.F_B = Eigen::Vector3cd(0, 0, cplx(0.4e-3, 0));
        const SpectrumResult ref = weak_spectrum(cs, w, default_spectrum_grid(cs));
        std::vector<double> grid = default_spectrum_grid(cs, 2001, ref.lines);
        const SpectrumResult want = weak_spectrum(cs, w, grid);
        Trajectory tr;
        const double T = 2e7, dt = 1250.0;
        for (long i = 0; i * dt <= T; ++i) {
            const AmplitudePair a = weak_amplitudes(cs, i * dt);
            tr.push(i * dt, a.C_A, a.C_B);
        }
        const SpectrumResult fin = finite_time_spectrum(tr, w, grid, T);
        const double peak = *std::max_element(want.S.begin(), want.S.end());
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (want.S[i] >= 0.05 * peak)
                worst = std::max(worst,
                                 std::abs(fin.S[i] - want.S[i]) / want.S[i]);
        require(worst <= 2e-2,
                "finite-window spectrum off by " + num(worst) + " (peak region)");
        return "L-inf relative deviation " + num(worst) +
               " over a 20-lifetime window";
    });

    h.check("distance-law-near", [&] {
        Scenario sc = make_preset("vacuum_pair");
        std::vector<double> values;
        for (int i = 0; i < 7; ++i)
            values.push_back(0.005 * std::pow(0.02 / 0.005, i / 6.0));
        RunOptions ro;
        ro.tolerance_profile = opt.fast ? "fast" : "paper";
        const SweepResult table = sweep(sc, "atoms.separation", values, ro);
        // log-log fit of |delta| vs R
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int n = static_cast<int>(table.rows.size());
        for (const auto& row : table.rows) {
            const double R = std::stod(row[0]);
            const double d = std::abs(std::stod(row[2]));
            const double x = std::log(R), y = std::log(d);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        require_close(slope, -3.0, 0.02, "near-zone log-log slope");
        return "slope " + num(slope);
    });

    h.check("distance-law-far", [&] {
        Scenario sc = make_preset("bulk_long_range");
        const Material medium = Material::drude_lorentz(0.5, 0.1);
        const double wt = 0.8;
        const double nI = medium.refractive_index(wt).imag();
        std::vector<double> values = {2.5, 2.75, 3.0, 3.25, 3.5};
        RunOptions ro;
        ro.tolerance_profile = opt.fast ? "fast" : "paper";
        const SweepResult table = sweep(sc, "atoms.separation", values, ro);
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int n = static_cast<int>(table.rows.size());
        for (const auto& row : table.rows) {
            const double R_nat = std::stod(row[0]) * two_pi;
            const double d = std::stod(row[2]);
            const double gab = std::stod(row[5]);
            const double K = std::hypot(d, 0.5 * gab); // oscillation-free envelope
            const double x = R_nat, y = std::log(K * R_nat);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        const double want = -nI * wt;
        require(std::abs(slope - want) <= 0.02 * std::abs(want),
                "envelope constant " + num(-slope) + ", expected " + num(-want));
        return "envelope constant " + num(-slope) + " vs n_I*omega = " + num(-want);
    });

    // preset round-trips: parse -> validate -> serialize must be the identity
    for (const auto& name : preset_names()) {
        const std::string path = opt.presets_dir + "/" + name + ".scn";
        if (!std::filesystem::exists(path)) {
            h.skip("preset-roundtrip-" + name, "missing " + path);
            continue;
        }
        h.check("preset-roundtrip-" + name, [&] {
            std::ifstream in(path);
            std::ostringstream ss;
            ss << in.rdbuf();
            const std::string text = ss.str();
            const Scenario sc = parse_scenario(text, name + ".scn");
            validate_scenario(sc, opt.presets_dir);
            require(serialize_scenario(sc) == text,
                    "parse -> serialize changed the file");
            require(serialize_scenario(make_preset(name)) == text,
                    "shipped file differs from the built-in definition");
            return "canonical";
        });
    }

    return h.report;
}

} // namespace rddi
