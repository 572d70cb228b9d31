#include "rddi/fit.hpp"
#include "rddi/errors.hpp"
#include <cmath>

namespace rddi {

Eigen::VectorXd levenberg_marquardt(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& resid,
    Eigen::VectorXd p, int max_iter, double tol) {
    const int np = int(p.size());
    double lambda = 1e-3;
    Eigen::VectorXd r = resid(p);
    double cost = r.squaredNorm();
    for (int it = 0; it < max_iter; ++it) {
        const int nr = int(r.size());
        Eigen::MatrixXd J(nr, np);
        for (int j = 0; j < np; ++j) {
            double h = 1e-7 * std::max(1.0, std::abs(p[j]));
            Eigen::VectorXd pp = p;
            pp[j] += h;
            J.col(j) = (resid(pp) - r) / h;
        }
        Eigen::MatrixXd JtJ = J.transpose() * J;
        Eigen::VectorXd g = J.transpose() * r;
        bool stepped = false;
        for (int tries = 0; tries < 30; ++tries) {
            Eigen::MatrixXd Areg = JtJ;
            Areg.diagonal() += lambda * JtJ.diagonal().cwiseMax(1e-12);
            Eigen::VectorXd dp = Areg.ldlt().solve(-g);
            Eigen::VectorXd pn = p + dp;
            Eigen::VectorXd rn = resid(pn);
            double cn = rn.squaredNorm();
            if (cn < cost) {
                double drop = cost - cn;
                p = pn;
                r = rn;
                cost = cn;
                lambda = std::max(lambda * 0.3, 1e-12);
                stepped = true;
                if (drop < tol * (cost + 1e-300) || dp.norm() < tol * (p.norm() + 1e-300))
                    return p;
                break;
            }
            lambda *= 10.0;
            if (lambda > 1e12) break;
        }
        if (!stepped) break;
    }
    return p;
}

LorentzianFit fit_lorentzian(const std::vector<double>& x,
                             const std::vector<double>& y, double x0_guess,
                             double w_guess) {
    if (x.size() != y.size() || x.size() < 6)
        throw ConfigError("fit_lorentzian: need >= 6 samples");
    double ymin = y[0], ymax = y[0];
    for (double v : y) {
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
    }
    Eigen::VectorXd p(5);
    p << x0_guess, w_guess, ymax - ymin, ymin, 0.0;
    auto model = [&](const Eigen::VectorXd& q, double xi) {
        double dx = xi - q[0], w = q[1];
        return q[2] * w * w / (dx * dx + w * w) + q[3] + q[4] * dx;
    };
    auto resid = [&](const Eigen::VectorXd& q) {
        Eigen::VectorXd r(x.size());
        for (size_t i = 0; i < x.size(); ++i) r[int(i)] = model(q, x[i]) - y[i];
        return r;
    };
    Eigen::VectorXd pf = levenberg_marquardt(resid, p);
    LorentzianFit out{pf[0], std::abs(pf[1]), pf[2], pf[3], pf[4], 0.0};
    Eigen::VectorXd rf = resid(pf);
    out.rms = std::sqrt(rf.squaredNorm() / double(rf.size()));
    return out;
}

double parabolic_peak(double xl, double yl, double xm, double ym, double xr,
                      double yr) {
    const double num = (xm - xl) * (xm - xl) * (ym - yr) -
                       (xm - xr) * (xm - xr) * (ym - yl);
    const double den = (xm - xl) * (ym - yr) - (xm - xr) * (ym - yl);
    if (den == 0.0) return xm;
    return xm - 0.5 * num / den;
}

double golden_max(const std::function<double(double)>& f, double a, double b,
                  double rel_tol) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    const double scale = std::max(std::abs(a), std::abs(b)) + 1e-300;
    while ((b - a) > rel_tol * scale) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

double bisect_level(const std::function<double(double)>& f, double a, double b,
                    double level, double xtol) {
    double fa = f(a) - level, fb = f(b) - level;
    if (fa * fb > 0.0) throw ConvergenceError("bisect_level: level not bracketed");
    while (std::abs(b - a) > xtol) {
        double m = 0.5 * (a + b), fm = f(m) - level;
        if (fa * fm <= 0.0) {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
    }
    (void)fb;
    return 0.5 * (a + b);
}

} // namespace rddi
