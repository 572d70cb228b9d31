#pragma once
#include <string>
#include <vector>
#include "rddi/units.hpp"

namespace rddi {

// Single-resonance dielectric
//   eps(omega) = background + omega_p^2 / (omega_T^2 - omega^2 - i gamma omega)
// with omega_T = 1 in natural units.  Alternatively a tabulated eps(omega)
// with linear interpolation between samples.
class Material {
public:
    static Material drude_lorentz(double omega_p, double gamma, double background = 1.0);
    static Material tabulated(std::vector<double> omega,
                              std::vector<cplx> eps);
    static Material from_table_file(const std::string& path);
    static Material vacuum() { return drude_lorentz(0.0, 0.0); }

    // eps(omega) for omega > 0; ConfigError outside a table's range.
    cplx permittivity(double omega) const;

    // principal branch sqrt(eps), Im n >= 0
    cplx refractive_index(double omega) const;

    // eps(-conj(omega)) = conj(eps(omega)) continuation to omega < 0
    cplx permittivity_continued(cplx omega) const;

    bool is_tabulated() const { return tab_; }
    bool is_vacuum() const { return !tab_ && omega_p_ == 0.0; }
    double plasma_frequency() const { return omega_p_; }
    double damping() const { return gamma_; }
    double background() const { return background_; }

private:
    Material() = default;
    bool tab_ = false;
    double omega_p_ = 0.0, gamma_ = 0.0, background_ = 1.0;
    std::vector<double> tab_omega_;
    std::vector<cplx> tab_eps_;
};

// Residual of the dispersion relation
//   Re eps(omega) - 1 - (2/pi) P \int_0^inf w Im eps(w) / (w^2 - omega^2) dw
// evaluated at `probes` frequencies (a deterministic subsample when empty).
// `grid_max`/`grid_n` control the integration grid; `coarse_warning` is set
// when the grid spacing is too coarse to resolve the absorption line.
struct KKResidual {
    std::vector<double> omega;
    std::vector<double> residual;
    double max_abs = 0.0;
    bool coarse_warning = false;
};

KKResidual kramers_kronig_residual(const Material& m,
                                   std::vector<double> probes = {},
                                   double grid_max = 200.0, int grid_n = 100000);

} // namespace rddi
