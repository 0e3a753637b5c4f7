#ifndef HYPERFN_FOURIER_HPP
#define HYPERFN_FOURIER_HPP

#include <array>
#include <string>
#include <vector>

#include "hyperfn/hyperfunction.hpp"
#include "hyperfn/quadrature.hpp"

namespace hyperfn {

// One holomorphic cutoff chi_sigma together with the (closed) cone sigma it
// localizes, stored through its open representative.
struct PartitionPiece {
    std::string label;
    ExprPtr chi;
    ConvexCone sigma;
};

struct PartitionOfUnity {
    std::size_t dim;
    std::vector<PartitionPiece> pieces;
};

// 2^n pieces chi_sigma(z) = prod_i 1/(1 + e^{-sigma_i z_i}); piece sigma
// decays exponentially outside the orthant { sigma_i x_i >= 0 }.
PartitionOfUnity orthant_partition(std::size_t n);

// The four-piece partition with e^{+-z1} and e^{+-pi z2} factors:
// 1 = sum over signs of 1/((1+e^{s1 z1})(1+e^{s2 pi z2})).
PartitionOfUnity mixed_partition_2d();

// Spot check of the partition identity and cone coverage.
void validate_partition(const PartitionOfUnity& p, int samples = 64, double tol = 1e-12);

// Contour configuration (JSON block with documented defaults).
struct ContourSettings {
    double delta = 0.1;           // contour height scale along the witness
    double r0 = 16.0;             // initial quadrature half-width
    double r_max = 262144.0;      // doubling cap
    double tol = 1e-7;            // per-integral tolerance
    double panel_width = 1.0;
    double pole_clearance = 1e-3; // minimal denominator along contours
};

nlohmann::json to_json(const ContourSettings& s);
ContourSettings contour_settings_from_json(const nlohmann::json& j);

struct ContourIntegral {
    Complex value{0.0, 0.0};
    double err = 0.0;
};

// Integral of the (1-variable) expression along Im z = y0.  The integrand
// must decay exponentially on both tails; poles within pole_clearance of the
// contour raise ContourBlocked.
ContourIntegral contour_integral_1d(const ExprPtr& integrand, double y0,
                                    const ContourSettings& cfg);

// Iterated two-variable contour integral, inner z1 then outer z2 by default.
ContourIntegral contour_integral_2d(const ExprPtr& integrand, std::array<double, 2> y0,
                                    const ContourSettings& cfg, bool inner_first = true);

// Which exponential appears in the denominator z(1+e^{sign z}).
enum class DenomSign { Plus, Minus };

// Closed form, via the residue chain, of
//   integral over Im z = -delta of e^{-i(zeta-a) z} / (z (1+e^{sign z})) dz
// as an expression in zeta: Log(tanh(pi (zeta-a)/2)) for sign = Plus (valid
// for Im zeta in (0,1)), and its negative for sign = Minus (valid for
// Im zeta in (-1,0)).
ExprPtr residue_sum_1d(double a, DenomSign sign);

// The Log(tanh(pi(zeta-a)/2)) building block.
ExprPtr log_tanh_form(double a);

struct FourierProvenance {
    std::size_t source_term;
    std::string piece;
    ConvexCone dual_cone;  // -sigma°, the output wedge
};

struct FourierResult {
    Hyperfunction transform;                 // evaluator-backed terms in zeta
    std::vector<FourierProvenance> provenance;
};

// Hyperfunction Fourier transform: for each (term, piece) pair a dual-
// variable term on the negated polar dual of the piece's cone, evaluated on
// demand by contour quadrature (memoized per zeta).  Every input term must
// classify as slowly increasing.
FourierResult fourier_transform(const Hyperfunction& f, const PartitionOfUnity& p,
                                double tol, const ContourSettings& cfg = {});

}  // namespace hyperfn

#endif
