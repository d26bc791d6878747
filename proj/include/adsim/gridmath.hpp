#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

// Small numerical helpers shared across modules: uniform grids, 6th-order
// finite differences, and composite Simpson quadrature.

namespace adsim {

using Complex = std::complex<double>;

// Uniform grid on [0,1] with `npoints` samples (npoints >= 2).
std::vector<double> uniform_grid(std::size_t npoints);

namespace detail {

template <typename T>
T fd_combine(const std::vector<T>& f, std::size_t i, std::size_t n, double h) {
    // 6th-order stencils; offset 7-point stencils near the edges. The high
    // order matters because errors compound one power of h per nested
    // derivative in the correction recursion.
    if (i >= 3 && i + 3 < n) {
        return (-f[i - 3] + 9.0 * f[i - 2] - 45.0 * f[i - 1] + 45.0 * f[i + 1] -
                9.0 * f[i + 2] + f[i + 3]) /
               (60.0 * h);
    }
    auto window = [&](std::size_t o, double c0, double c1, double c2, double c3,
                      double c4, double c5, double c6) {
        return (c0 * f[o] + c1 * f[o + 1] + c2 * f[o + 2] + c3 * f[o + 3] +
                c4 * f[o + 4] + c5 * f[o + 5] + c6 * f[o + 6]) /
               (60.0 * h);
    };
    if (i == 0) return window(0, -147, 360, -450, 400, -225, 72, -10);
    if (i == 1) return window(0, -10, -77, 150, -100, 50, -15, 2);
    if (i == 2) return window(0, 2, -24, -35, 80, -30, 8, -1);
    if (i + 1 == n) return window(n - 7, 10, -72, 225, -400, 450, -360, 147);
    if (i + 2 == n) return window(n - 7, -2, 15, -50, 100, -150, 77, 10);
    return window(n - 7, 1, -8, 30, -80, 35, 24, -2); // i + 3 == n
}

} // namespace detail

// dF/dtau on a uniform grid with spacing h. Works for scalars, vectors, and
// matrices (anything with the usual linear-space operators).
template <typename T>
std::vector<T> grid_derivative(const std::vector<T>& f, double h) {
    std::size_t n = f.size();
    if (n < 7) throw std::invalid_argument("grid_derivative: need at least 7 samples");
    std::vector<T> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = detail::fd_combine(f, i, n, h);
    return out;
}

// Richardson estimate of the full-grid derivative error: the relative
// full-vs-half-grid discrepancy scaled by the 6th-order refinement factor.
double derivative_noise_estimate(const std::vector<Eigen::VectorXcd>& f, double h);

// Composite Simpson integral of samples on a uniform grid. Handles even
// sample counts by a trapezoid correction on the last interval.
double simpson(const std::vector<double>& f, double h);
Complex simpson(const std::vector<Complex>& f, double h);

// Running integral F(tau_k) = int_0^{tau_k} f: composite Simpson on even
// indices, single cubic interpolatory steps for odd indices (4th order).
std::vector<Complex> cumulative_integral(const std::vector<Complex>& f, double h);
std::vector<double> cumulative_integral(const std::vector<double>& f, double h);

// Ordinary least squares of y against x.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double slope_stderr = 0.0;
    double slope_ci95 = 0.0; // half-width, Student-t at n-2 dof
    std::size_t n = 0;
};

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

} // namespace adsim
