#ifndef HYPERFN_QUADRATURE_HPP
#define HYPERFN_QUADRATURE_HPP

#include <complex>
#include <functional>

namespace hyperfn {

struct QuadConfig {
    double r0 = 16.0;          // initial half-width of the real window
    double r_max = 262144.0;   // doubling cap
    double panel_width = 1.0;
    double tol = 1e-7;         // target for quadrature error + tail bound
    int max_bisect_depth = 12;
    double decay_floor = 1e-5;  // fitted rate below this means "not decaying"
};

struct QuadResult {
    std::complex<double> value{0.0, 0.0};
    double err = 0.0;        // panel error estimates plus tail bound
    double reached_r = 0.0;
    double fitted_rate = 0.0;  // min of the two one-sided decay rates
};

// Integrates f along the horizontal contour Im(z) = y0, Re(z) in [-R, R],
// with R doubled from cfg.r0 until the fitted exponential tail bound drops
// under cfg.tol.  Gauss-Legendre 64/32 panels, bisected where the local
// error estimate is out of budget.  Throws NotIntegrable when the tail fails
// to decay by cfg.r_max.
QuadResult integrate_line(const std::function<std::complex<double>(std::complex<double>)>& f,
                          double y0, const QuadConfig& cfg);

// Plain adaptive Gauss-Legendre on the segment [a, b] at height y0.
QuadResult integrate_segment(const std::function<std::complex<double>(std::complex<double>)>& f,
                             double a, double b, double y0, const QuadConfig& cfg);

}  // namespace hyperfn

#endif
