#include "rddi/errors.hpp"
#include "rddi/fit.hpp"
#include "rddi/green.hpp"
#include <algorithm>
#include <cmath>

namespace rddi {

ResonanceInfo find_resonance(const std::function<double(double)>& f, double lo,
                             double hi, double rel_tol, int coarse_n) {
    if (!(lo < hi)) throw ConfigError("find_resonance: empty window");
    std::vector<double> xs(coarse_n), ys(coarse_n);
    for (int i = 0; i < coarse_n; ++i) {
        xs[i] = lo + (hi - lo) * i / (coarse_n - 1);
        ys[i] = f(xs[i]);
    }
    double ymax = *std::max_element(ys.begin(), ys.end());
    std::vector<double> med = ys;
    std::nth_element(med.begin(), med.begin() + coarse_n / 2, med.end());
    const double base = med[coarse_n / 2];
    const double prominence = base + 0.5 * (ymax - base);

    // prominent interior maxima
    std::vector<int> peaks;
    for (int i = 1; i + 1 < coarse_n; ++i)
        if (ys[i] > ys[i - 1] && ys[i] >= ys[i + 1] && ys[i] > prominence)
            peaks.push_back(i);
    if (peaks.empty())
        throw ConvergenceError("find_resonance: no peak inside the scan window");
    if (peaks.size() > 1)
        throw ConvergenceError("find_resonance: " + std::to_string(peaks.size()) +
                               " peaks inside the scan window; narrow it");
    const int ip = peaks[0];

    // refine: parabolic estimate, then golden section on the bracket
    double x0 = parabolic_peak(xs[ip - 1], ys[ip - 1], xs[ip], ys[ip], xs[ip + 1],
                               ys[ip + 1]);
    x0 = golden_max(f, xs[ip - 1], xs[ip + 1], rel_tol);
    const double fpk = f(x0);

    // half-maximum crossings; step out geometrically until bracketed
    const double level = base + 0.5 * (fpk - base);
    double step = (hi - lo) / (coarse_n - 1);
    double xl = x0 - step, xr = x0 + step;
    while (f(xl) > level && xl > lo) xl = std::max(lo, xl - step);
    while (f(xr) > level && xr < hi) xr = std::min(hi, xr + step);
    if (f(xl) > level || f(xr) > level)
        throw ConvergenceError("find_resonance: half-maximum not bracketed in window");
    const double wl = bisect_level(f, xl, x0, level, rel_tol * x0);
    const double wr = bisect_level(f, x0, xr, level, rel_tol * x0);
    const double hwhm = 0.5 * (wr - wl);

    // Lorentzian + linear baseline fit over +-6 HWHM
    std::vector<double> fx, fy;
    const int nfit = 81;
    for (int i = 0; i < nfit; ++i) {
        double x = x0 + hwhm * (-6.0 + 12.0 * i / (nfit - 1));
        if (x <= lo || x >= hi) continue;
        fx.push_back(x);
        fy.push_back(f(x));
    }
    LorentzianFit lf = fit_lorentzian(fx, fy, x0, hwhm);

    ResonanceInfo info;
    info.omega_m = lf.x0;
    info.delta_omega_m = lf.w;
    info.strength = lf.A;
    if (!(info.delta_omega_m > 0.0) || std::abs(lf.x0 - x0) > 10.0 * hwhm)
        throw ConvergenceError("find_resonance: line fit did not converge");
    return info;
}

} // namespace rddi
