#include "rddi/material.hpp"
#include "rddi/errors.hpp"
#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rddi {

Material Material::drude_lorentz(double omega_p, double gamma, double background) {
    if (omega_p < 0.0 || gamma < 0.0)
        throw ConfigError("material: omega_p and gamma must be non-negative");
    Material m;
    m.omega_p_ = omega_p;
    m.gamma_ = gamma;
    m.background_ = background;
    return m;
}

Material Material::tabulated(std::vector<double> omega, std::vector<cplx> eps) {
    if (omega.size() != eps.size() || omega.size() < 2)
        throw ConfigError("material: table needs >= 2 matching samples");
    if (!std::is_sorted(omega.begin(), omega.end()))
        throw ConfigError("material: table frequencies must be ascending");
    if (omega.front() <= 0.0)
        throw ConfigError("material: table frequencies must be positive");
    Material m;
    m.tab_ = true;
    m.tab_omega_ = std::move(omega);
    m.tab_eps_ = std::move(eps);
    return m;
}

Material Material::from_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("material: cannot open table " + path);
    std::vector<double> w;
    std::vector<cplx> e;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto h = line.find('#');
        if (h != std::string::npos) line.erase(h);
        std::istringstream ss(line);
        double om, re, im;
        if (!(ss >> om)) continue; // blank / comment-only line
        if (!(ss >> re >> im))
            throw ConfigError("material: " + path + ":" + std::to_string(lineno) +
                              ": expected 'omega Re(eps) Im(eps)'");
        w.push_back(om);
        e.emplace_back(re, im);
    }
    return tabulated(std::move(w), std::move(e));
}

cplx Material::permittivity(double omega) const {
    if (!(omega > 0.0)) throw ConfigError("material: permittivity needs omega > 0");
    if (!tab_) {
        if (omega_p_ == 0.0) return background_;
        // omega_T = 1
        return background_ + omega_p_ * omega_p_ /
                                 cplx(1.0 - omega * omega, -gamma_ * omega);
    }
    if (omega < tab_omega_.front() || omega > tab_omega_.back())
        throw ConfigError("material: omega outside tabulated range");
    auto it = std::lower_bound(tab_omega_.begin(), tab_omega_.end(), omega);
    if (it == tab_omega_.begin()) return tab_eps_.front();
    size_t i = size_t(it - tab_omega_.begin());
    double t = (omega - tab_omega_[i - 1]) / (tab_omega_[i] - tab_omega_[i - 1]);
    return tab_eps_[i - 1] * (1.0 - t) + tab_eps_[i] * t;
}

cplx Material::refractive_index(double omega) const {
    cplx n = std::sqrt(permittivity(omega));
    if (n.imag() < 0.0) n = -n; // passive medium: Im n >= 0
    return n;
}

cplx Material::permittivity_continued(cplx omega) const {
    if (tab_) throw ConfigError("material: continuation needs an analytic model");
    if (omega.real() >= 0.0)
        return background_ +
               omega_p_ * omega_p_ / (1.0 - omega * omega - I * gamma_ * omega);
    return std::conj(permittivity_continued(-std::conj(omega)));
}

KKResidual kramers_kronig_residual(const Material& m, std::vector<double> probes,
                                   double grid_max, int grid_n) {
    // trapezoid grid for Im eps; the pole at w = omega is removed by
    // subtracting Im eps(omega) * w/(w^2-omega^2), whose PV integral over
    // (0, W) is log|W^2-omega^2|/omega^2... handled analytically below.
    if (grid_n < 10) throw ConfigError("kk_residual: grid too small");
    std::vector<double> w(grid_n), ie(grid_n);
    const double dw = grid_max / grid_n;
    for (int i = 0; i < grid_n; ++i) {
        w[i] = dw * (i + 0.5);
        ie[i] = m.permittivity(w[i]).imag();
    }
    // detect if the absorption line is resolved: spacing vs damping width
    bool coarse = false;
    if (!m.is_tabulated() && m.damping() > 0.0 && m.damping() < 4.0 * dw)
        coarse = true;

    if (probes.empty()) {
        // deterministic subsample: dense near the resonance, sparse outside
        for (int i = 0; i < 256; ++i) probes.push_back(0.2 + 2.0 * i / 255.0);
        for (int i = 0; i < 256; ++i) probes.push_back(0.9 + 0.2 * i / 255.0);
        std::sort(probes.begin(), probes.end());
        probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
    }

    KKResidual out;
    out.coarse_warning = coarse;
    for (double om : probes) {
        if (!(om > 0.0) || om >= grid_max) continue;
        const double ie0 = m.permittivity(om).imag();
        double s = 0.0;
        for (int i = 0; i < grid_n; ++i) {
            double d = w[i] * w[i] - om * om;
            if (std::abs(d) < 1e-300) continue;
            s += (w[i] * ie[i] - w[i] * ie0) / d * dw;
        }
        // PV \int_0^W w/(w^2-om^2) dw = 0.5 log|W^2/om^2 - 1|
        s += ie0 * 0.5 * std::log(std::abs(grid_max * grid_max / (om * om) - 1.0));
        double res = m.permittivity(om).real() - 1.0 - (2.0 / pi) * s;
        out.omega.push_back(om);
        out.residual.push_back(res);
        out.max_abs = std::max(out.max_abs, std::abs(res));
    }
    if (out.omega.empty()) throw ConfigError("kk_residual: no valid probe frequencies");
    return out;
}

} // namespace rddi
