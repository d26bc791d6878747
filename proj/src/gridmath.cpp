#include "adsim/gridmath.hpp"

#include <cmath>

namespace adsim {

std::vector<double> uniform_grid(std::size_t npoints) {
    if (npoints < 2) throw std::invalid_argument("uniform_grid: need >= 2 points");
    std::vector<double> g(npoints);
    double h = 1.0 / double(npoints - 1);
    for (std::size_t i = 0; i < npoints; ++i) g[i] = double(i) * h;
    g.back() = 1.0;
    return g;
}

double derivative_noise_estimate(const std::vector<Eigen::VectorXcd>& f, double h) {
    std::size_t n = f.size();
    if (n < 11) throw std::invalid_argument("derivative_noise_estimate: grid too small");
    std::vector<Eigen::VectorXcd> coarse;
    coarse.reserve(n / 2 + 1);
    for (std::size_t i = 0; i < n; i += 2) coarse.push_back(f[i]);
    auto dfull = grid_derivative(f, h);
    auto dcoarse = grid_derivative(coarse, 2.0 * h);
    double worst = 0.0;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        double diff = (dcoarse[i] - dfull[2 * i]).norm();
        double scale = 1.0 + dfull[2 * i].norm();
        worst = std::max(worst, diff / scale);
    }
    // both stencils are 6th order, so the full-grid error is ~1/63 of the
    // full-vs-half discrepancy (Richardson)
    return worst / 63.0;
}

namespace {

template <typename T>
T simpson_impl(const std::vector<T>& f, double h) {
    std::size_t n = f.size();
    if (n < 3) throw std::invalid_argument("simpson: need >= 3 samples");
    T acc = T(0);
    std::size_t last_even = (n % 2 == 1) ? n - 1 : n - 2;
    for (std::size_t k = 2; k <= last_even; k += 2)
        acc += (h / 3.0) * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
    if (n % 2 == 0) acc += (h / 2.0) * (f[n - 2] + f[n - 1]);
    return acc;
}

// Simpson chain on the even indices; odd indices get a single cubic
// interpolatory step from the even neighbor, so the accumulated error stays
// fourth order everywhere.
template <typename T>
std::vector<T> cumulative_impl(const std::vector<T>& f, double h) {
    std::size_t n = f.size();
    if (n < 3) throw std::invalid_argument("cumulative_integral: need >= 3 samples");
    std::vector<T> F(n);
    F[0] = T(0);
    if (n == 3) { // too short for cubic stencils
        F[1] = (h / 12.0) * (5.0 * f[0] + 8.0 * f[1] - f[2]);
        F[2] = (h / 3.0) * (f[0] + 4.0 * f[1] + f[2]);
        return F;
    }
    for (std::size_t k = 2; k < n; k += 2)
        F[k] = F[k - 2] + (h / 3.0) * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
    for (std::size_t k = 1; k < n; k += 2) {
        T step;
        if (k == 1)
            step = (h / 24.0) * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
        else if (k + 1 < n)
            step = (h / 24.0) * (-f[k - 2] + 13.0 * f[k - 1] + 13.0 * f[k] - f[k + 1]);
        else
            step = (h / 24.0) * (f[k - 3] - 5.0 * f[k - 2] + 19.0 * f[k - 1] + 9.0 * f[k]);
        F[k] = F[k - 1] + step;
    }
    return F;
}

// Student-t 97.5% quantiles for small dof; 1.96 beyond the table.
double t975(std::size_t dof) {
    static const double table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365,
                                   2.306,  2.262, 2.228, 2.201, 2.179, 2.160, 2.145,
                                   2.131,  2.120, 2.110, 2.101, 2.093, 2.086};
    if (dof == 0) return 12.706;
    if (dof <= 20) return table[dof - 1];
    if (dof <= 30) return 2.042;
    return 1.96;
}

} // namespace

double simpson(const std::vector<double>& f, double h) { return simpson_impl(f, h); }
Complex simpson(const std::vector<Complex>& f, double h) { return simpson_impl(f, h); }

std::vector<Complex> cumulative_integral(const std::vector<Complex>& f, double h) {
    return cumulative_impl(f, h);
}
std::vector<double> cumulative_integral(const std::vector<double>& f, double h) {
    return cumulative_impl(f, h);
}

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("least_squares: need matching x/y with >= 2 points");
    std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("least_squares: degenerate x");
    LinearFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += r * r;
    }
    fit.r2 = (syy == 0.0) ? 1.0 : 1.0 - ss_res / syy;
    if (n > 2) {
        fit.slope_stderr = std::sqrt(ss_res / double(n - 2) / sxx);
        fit.slope_ci95 = t975(n - 2) * fit.slope_stderr;
    }
    return fit;
}

} // namespace adsim
