#ifndef HYPERFN_LOCALIZATION_HPP
#define HYPERFN_LOCALIZATION_HPP

#include <string>
#include <vector>

#include "hyperfn/hyperfunction.hpp"

namespace hyperfn {

// One isolated fixed point: moment-map value, isotropy weights, and the
// polarized data derived from the problem's polarization vector.
struct FixedPointDatum {
    std::string label;
    std::vector<double> moment;
    std::vector<Weight> weights;
    PolarizedWeightSet polarized;
};

class LocalizationProblem {
  public:
    LocalizationProblem(std::size_t rank, RationalVector polarization,
                        std::vector<std::string> labels,
                        std::vector<std::vector<double>> moments,
                        std::vector<std::vector<Weight>> weights);

    std::size_t rank() const { return rank_; }
    const RationalVector& polarization() const { return xi_; }
    const std::vector<FixedPointDatum>& fixed_points() const { return points_; }

    // Same data re-polarized along a different vector.
    LocalizationProblem with_polarization(RationalVector xi) const;

  private:
    std::size_t rank_;
    RationalVector xi_;
    std::vector<FixedPointDatum> points_;
};

// b_{gamma_p}( prod 1/polarized-weight(z) ).  Requires the original weights
// to lie in a common open half-space (the properness proxy), else ConeEmpty.
BoundaryValueTerm euler_reciprocal(const FixedPointDatum& p);

// (2 pi i)^{-d} sum over fixed points of sign * e^{i mu(p)(z)} / euler.
Hyperfunction picken(const LocalizationProblem& problem);

// The rotation action on the two-sphere: two fixed points with moment values
// +-1 and weights +-1, default polarization -1.
LocalizationProblem builtin_s2();

nlohmann::json to_json(const LocalizationProblem& problem);
LocalizationProblem localization_problem_from_json(const nlohmann::json& j);

}  // namespace hyperfn

#endif
