#pragma once
#include <functional>
#include <vector>
#include <Eigen/Dense>

namespace rddi {

// Small dense Levenberg-Marquardt: minimise |resid(p)|^2 with finite
// difference Jacobian.  Returns converged parameters.
Eigen::VectorXd levenberg_marquardt(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& resid,
    Eigen::VectorXd p0, int max_iter = 200, double tol = 1e-12);

// Lorentzian with linear baseline:
//   f(x) = A w^2 / ((x-x0)^2 + w^2) + c0 + c1 (x-x0)
struct LorentzianFit {
    double x0, w, A, c0, c1;
    double rms; // residual rms over the fit window
};

LorentzianFit fit_lorentzian(const std::vector<double>& x,
                             const std::vector<double>& y, double x0_guess,
                             double w_guess);

// maximum of a parabola through three samples
double parabolic_peak(double xl, double yl, double xm, double ym, double xr,
                      double yr);

// golden-section maximisation of f on [a,b]
double golden_max(const std::function<double(double)>& f, double a, double b,
                  double rel_tol);

// bisection for f(x) = level with f monotone across [a,b]
double bisect_level(const std::function<double(double)>& f, double a, double b,
                    double level, double xtol);

} // namespace rddi
