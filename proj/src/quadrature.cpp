#include "hyperfn/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "hyperfn/errors.hpp"

namespace hyperfn {
namespace {

using Complex = std::complex<double>;

// Nodes and weights of the n-point rule on [-1, 1], by Newton iteration on
// the Legendre recurrence.
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;

    explicit GaussRule(int n) : x(n), w(n) {
        const int m = (n + 1) / 2;
        for (int i = 0; i < m; ++i) {
            double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (;;) {
                double p1 = 1.0, p2 = 0.0;
                for (int j = 1; j <= n; ++j) {
                    const double p3 = p2;
                    p2 = p1;
                    p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
                }
                pp = n * (z * p1 - p2) / (z * z - 1.0);
                const double dz = -p1 / pp;
                z += dz;
                if (std::abs(dz) < 1e-15) break;
            }
            x[i] = -z;
            x[n - 1 - i] = z;
            w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
        }
    }
};

const GaussRule& rule64() {
    static const GaussRule r(64);
    return r;
}
const GaussRule& rule32() {
    static const GaussRule r(32);
    return r;
}

struct PanelEval {
    Complex value;
    double err;
};

PanelEval eval_panel(const std::function<Complex(Complex)>& f, double a, double b, double y0,
                     double negligible) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    Complex v64{0.0, 0.0}, v32{0.0, 0.0};
    const auto& g64 = rule64();
    for (int i = 0; i < 64; ++i)
        v64 += g64.w[i] * f(Complex(mid + half * g64.x[i], y0));
    v64 *= half;
    // Deep-tail panels whose entire contribution sits under the local budget
    // are booked against the error estimate without the comparison rule.
    if (std::abs(v64) < negligible) return {v64, std::abs(v64)};
    const auto& g32 = rule32();
    for (int i = 0; i < 32; ++i)
        v32 += g32.w[i] * f(Complex(mid + half * g32.x[i], y0));
    v32 *= half;
    return {v64, std::abs(v64 - v32)};
}

// Adds the panel [a, b], bisecting until the local estimate meets budget.
void add_panel(const std::function<Complex(Complex)>& f, double a, double b, double y0,
               double budget_density, int depth, int max_depth, Complex& acc, double& err) {
    const PanelEval pe = eval_panel(f, a, b, y0, 0.02 * budget_density * (b - a));
    if (pe.err > budget_density * (b - a) && depth < max_depth) {
        const double mid = 0.5 * (a + b);
        add_panel(f, a, mid, y0, budget_density, depth + 1, max_depth, acc, err);
        add_panel(f, mid, b, y0, budget_density, depth + 1, max_depth, acc, err);
        return;
    }
    acc += pe.value;
    err += pe.err;
}

void add_range(const std::function<Complex(Complex)>& f, double a, double b, double y0,
               const QuadConfig& cfg, double budget_density, Complex& acc, double& err) {
    const long n_panels = std::max(1L, std::lround(std::ceil((b - a) / cfg.panel_width)));
    const double w = (b - a) / static_cast<double>(n_panels);
    for (long i = 0; i < n_panels; ++i)
        add_panel(f, a + i * w, a + (i + 1) * w, y0, budget_density, 0, cfg.max_bisect_depth,
                  acc, err);
}

// Least-squares slope of log|f| over 8 samples approaching x_edge from
// inside; amplitude taken at the edge.  Underflowed samples mean the tail
// has already died.
struct TailFit {
    double rate;       // positive = decaying
    double amplitude;  // |f| at the edge
    bool dead;
};

TailFit fit_tail(const std::function<Complex(Complex)>& f, double x_edge, double y0,
                 double step) {
    constexpr int kSamples = 8;
    std::vector<double> xs, ls;
    double amp = 0.0;
    for (int j = 0; j < kSamples; ++j) {
        const double x = x_edge - std::copysign(j * step, x_edge);
        const double m = std::abs(f(Complex(x, y0)));
        if (j == 0) amp = m;
        if (m <= 1e-300) return {1.0, 0.0, true};
        xs.push_back(std::abs(x));
        ls.push_back(std::log(m));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int j = 0; j < kSamples; ++j) {
        sx += xs[j];
        sy += ls[j];
        sxx += xs[j] * xs[j];
        sxy += xs[j] * ls[j];
    }
    const double denom = kSamples * sxx - sx * sx;
    const double slope = (denom == 0.0) ? 0.0 : (kSamples * sxy - sx * sy) / denom;
    return {-slope, amp, false};
}

}  // namespace

QuadResult integrate_line(const std::function<Complex(Complex)>& f, double y0,
                          const QuadConfig& cfg) {
    QuadResult out;
    double r = cfg.r0;
    double budget_density = cfg.tol / (16.0 * r);
    Complex acc{0.0, 0.0};
    double err = 0.0;
    add_range(f, -r, r, y0, cfg, budget_density, acc, err);

    for (;;) {
        const TailFit right = fit_tail(f, r, y0, cfg.panel_width);
        const TailFit left = fit_tail(f, -r, y0, cfg.panel_width);
        double tail = 0.0;
        double min_rate = std::numeric_limits<double>::infinity();
        bool decaying = true;
        for (const TailFit& t : {right, left}) {
            if (t.dead) continue;
            min_rate = std::min(min_rate, t.rate);
            if (t.rate < cfg.decay_floor) {
                decaying = false;
                continue;
            }
            tail += 2.0 * t.amplitude / t.rate;  // safety factor 2 on C e^{-rate (x-R)}
        }
        if (decaying && tail < cfg.tol) {
            out.value = acc;
            out.err = err + tail;
            out.reached_r = r;
            out.fitted_rate = std::isfinite(min_rate) ? min_rate : 1.0;
            return out;
        }
        if (2.0 * r > cfg.r_max) {
            if (!decaying)
                throw NotIntegrable("integrate_line: tail fails to decay on the contour");
            out.value = acc;
            out.err = err + tail;
            out.reached_r = r;
            out.fitted_rate = std::isfinite(min_rate) ? min_rate : 0.0;
            return out;
        }
        budget_density = cfg.tol / (16.0 * 2.0 * r);
        add_range(f, r, 2.0 * r, y0, cfg, budget_density, acc, err);
        add_range(f, -2.0 * r, -r, y0, cfg, budget_density, acc, err);
        r *= 2.0;
    }
}

QuadResult integrate_segment(const std::function<Complex(Complex)>& f, double a, double b,
                             double y0, const QuadConfig& cfg) {
    QuadResult out;
    Complex acc{0.0, 0.0};
    double err = 0.0;
    add_range(f, a, b, y0, cfg, cfg.tol / std::max(1.0, b - a), acc, err);
    out.value = acc;
    out.err = err;
    out.reached_r = std::max(std::abs(a), std::abs(b));
    out.fitted_rate = 0.0;
    return out;
}

}  // namespace hyperfn
