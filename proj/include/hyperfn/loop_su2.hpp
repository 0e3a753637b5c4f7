#ifndef HYPERFN_LOOP_SU2_HPP
#define HYPERFN_LOOP_SU2_HPP

#include <array>
#include <map>

#include "hyperfn/fourier.hpp"
#include "hyperfn/hyperfunction.hpp"

namespace hyperfn {
namespace loop_su2 {

// Fixed points of the torus action on based loops in SU(2) are indexed by an
// integer coweight n; coordinates (z1, z2) are the coroot basis with the
// energy normalized so the basic loop carries 1/2.
struct LoopFixedPoint {
    long n = 0;
    std::array<double, 2> moment() const {
        return {static_cast<double>(n), 0.5 * static_cast<double>(n) * static_cast<double>(n)};
    }
};

// For k = 1..k_max the four level-k weights: (0,k) twice, (2, k+2n),
// (-2, k-2n).
std::vector<Weight> isotropy_weights(long n, long k_max);

// Default polarization (1/4, 1).
RationalVector default_polarization();

ConvexCone cone_gamma0();         // { y2 > 2|y1| }
ConvexCone cone_gamma_nonzero();  // gamma0 with y1 > 0

// gamma0 for n = 0, gamma_nonzero otherwise; derived from the polarized
// level cones and pruned.
ConvexCone polarization_cone(long n);

int fixed_point_sign(long n);  // +1 for n >= 0, -1 for n < 0

// The sin denominator can be written with the ratio z1/z2 (as in the
// assembled fixed-point sum) or shifted per fixed point by n; the two agree
// as functions since the shift is an integer period.
enum class EulerForm { Display, PerFixedPoint };

// Reciprocal of the regularized Euler class at the n-th fixed point:
// 2 pi (n + z1/z2) / sin(...), carried on polarization_cone(n).
BoundaryValueTerm regularized_euler(long n, EulerForm form = EulerForm::Display);

// Truncated Picken hyperfunction of the loop space: the grouped |n| <= N
// fixed-point sum on gamma_nonzero plus the n = 0 term on gamma0, scaled by
// (2 pi i)^{-2}.
Hyperfunction picken_omega_su2(long truncation, EulerForm form = EulerForm::Display);

// Smallest N whose Gaussian tail bound at the wedge point (Im part y,
// |z1/z2| <= ratio_mag, csc factor bounded by csc_mag) is below tol.
long certified_truncation(double tol, std::span<const double> y, double ratio_mag,
                          double csc_mag);

// Integrand of the Duistermaat-Heckman transform for one fixed point and
// partition piece, at fixed dual point zeta.
ExprPtr dh_integrand_expr(long n, std::array<Complex, 2> zeta, const PartitionPiece& piece);
Complex dh_integrand(long n, std::array<Complex, 2> zeta, std::span<const Complex> z,
                     const PartitionPiece& piece);

enum class Levi { IsG, IsT };

// Levi subgroup attached to the rank-one subtorus generated by (n, m):
// SU(2) itself exactly when n/m is a half integer, the maximal torus
// otherwise.  m = 0 is the trivial case and is rejected.
Levi classify_subtorus(long n, long m);

// A loop fixed by the (n, m) subtorus, stored through its Fourier modes.
struct FixedLoop {
    long n = 0;
    long m = 1;
    double initial_alpha_rate = 0.0;  // A, with alpha'(0) = iA
    Complex beta0_prime{0.0, 0.0};
    std::map<long, Complex> alpha_modes;
    std::map<long, Complex> beta_modes;

    Complex alpha(double t) const;
    Complex beta(double t) const;
    Complex alpha_dot(double t) const;
    Complex beta_dot(double t) const;
};

// Periodic solution of the fixed-loop system for the given initial data.
// Throws NoPeriodicSolution when the mode criterion admits no integer
// solutions (the fixed set then holds only diagonal loops).
FixedLoop solve_fixed_loop(long n, long m, double A, Complex beta0_prime);

// Mode-first construction: requires n/m = (k_high + k_low)/2 exactly; the
// initial data is the canonical choice A = -n/m, beta'(0) = (k_high-k_low)/2.
FixedLoop solve_fixed_loop_from_modes(long n, long m, long k_high, long k_low);

struct LoopReport {
    double ode_residual = 0.0;
    double unitarity_defect = 0.0;
    double hvf_residual = 0.0;
    bool pass = false;
};

// Max residuals of the mode solution against the defining ODEs, unitarity,
// and the Hamiltonian vector field of (n, m); PASS below 1e-8.
LoopReport verify_fixed_loop(const FixedLoop& loop, int samples = 256);

nlohmann::json to_json(const FixedLoop& loop);

}  // namespace loop_su2
}  // namespace hyperfn

#endif
