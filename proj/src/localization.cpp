#include "hyperfn/localization.hpp"

#include <cmath>

#include "hyperfn/errors.hpp"

namespace hyperfn {
namespace {

// e^{i mu . z} as an expression (mu is a real vector).
ExprPtr moment_phase(const std::vector<double>& mu) {
    ExprPtr arg;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (mu[i] == 0.0) continue;
        ExprPtr part = Expr::mul(Expr::real(mu[i]), Expr::coord(i));
        arg = arg ? Expr::add(arg, part) : part;
    }
    if (!arg) return Expr::real(1.0);
    return Expr::exp(Expr::mul(Expr::imaginary_unit(), arg));
}

Complex two_pi_i_inverse_power(std::size_t d) {
    Complex c{1.0, 0.0};
    for (std::size_t k = 0; k < d; ++k) c /= Complex(0.0, 2.0 * M_PI);
    return c;
}

}  // namespace

LocalizationProblem::LocalizationProblem(std::size_t rank, RationalVector polarization,
                                         std::vector<std::string> labels,
                                         std::vector<std::vector<double>> moments,
                                         std::vector<std::vector<Weight>> weights)
    : rank_(rank), xi_(std::move(polarization)) {
    if (rank_ == 0) throw Error("localization: rank must be positive");
    if (xi_.size() != rank_) throw DimensionMismatch("localization: polarization length");
    if (labels.size() != moments.size() || labels.size() != weights.size())
        throw Error("localization: fixed-point arrays disagree in length");
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (moments[i].size() != rank_)
            throw DimensionMismatch("localization: moment length at " + labels[i]);
        if (weights[i].empty())
            throw Error("localization: fixed point " + labels[i] + " has no weights");
        PolarizedWeightSet pol = polarize(weights[i], xi_);
        points_.push_back(FixedPointDatum{std::move(labels[i]), std::move(moments[i]),
                                          std::move(weights[i]), std::move(pol)});
    }
}

LocalizationProblem LocalizationProblem::with_polarization(RationalVector xi) const {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> moments;
    std::vector<std::vector<Weight>> weights;
    for (const auto& p : points_) {
        labels.push_back(p.label);
        moments.push_back(p.moment);
        weights.push_back(p.weights);
    }
    return LocalizationProblem(rank_, std::move(xi), std::move(labels), std::move(moments),
                               std::move(weights));
}

BoundaryValueTerm euler_reciprocal(const FixedPointDatum& p) {
    // Properness proxy: the original weights must fit in one open half-space.
    std::vector<HalfSpace> original;
    for (const auto& w : p.weights) original.push_back(HalfSpace{w});
    ConvexCone common(p.weights.front().dimension(), std::move(original));
    if (!is_open_nonempty(common))
        throw ConeEmpty("euler_reciprocal: weights at " + p.label +
                        " span no common half-space");

    std::vector<ExprPtr> factors;
    factors.reserve(p.polarized.polarized.size());
    for (const auto& w : p.polarized.polarized) factors.push_back(Expr::affine(w));
    ExprPtr denom = (factors.size() == 1) ? factors[0] : Expr::product(std::move(factors));
    ExprPtr expr = Expr::div(Expr::real(1.0), denom);
    ConvexCone cone = p.polarized.cone.pruned();
    GrowthClass growth = classify_growth(*expr, cone);
    return BoundaryValueTerm(std::move(expr), std::move(cone), std::move(growth),
                             "euler_reciprocal[" + p.label + "]");
}

Hyperfunction picken(const LocalizationProblem& problem) {
    const Complex scale = two_pi_i_inverse_power(problem.rank());
    std::vector<BoundaryValueTerm> terms;
    for (const auto& p : problem.fixed_points()) {
        BoundaryValueTerm euler = euler_reciprocal(p);
        const Complex coeff = scale * static_cast<double>(p.polarized.sign);
        ExprPtr expr = Expr::mul(Expr::constant(coeff),
                                 Expr::mul(moment_phase(p.moment), euler.expr()));
        GrowthClass growth = classify_growth(*expr, euler.cone());
        terms.emplace_back(std::move(expr), euler.cone(), std::move(growth),
                           "picken[" + p.label + "]");
    }
    return Hyperfunction(problem.rank(), std::move(terms));
}

LocalizationProblem builtin_s2() {
    return LocalizationProblem(
        1, RationalVector{Rational(-1)}, {"N", "S"}, {{1.0}, {-1.0}},
        {{Weight({Rational(1)})}, {Weight({Rational(-1)})}});
}

nlohmann::json to_json(const LocalizationProblem& problem) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : problem.fixed_points()) {
        nlohmann::json ws = nlohmann::json::array();
        for (const auto& w : p.weights) ws.push_back(to_json(w));
        pts.push_back(nlohmann::json{
            {"label", p.label}, {"moment", p.moment}, {"weights", ws}});
    }
    nlohmann::json xi = nlohmann::json::array();
    for (const auto& q : problem.polarization()) xi.push_back(rational_to_string(q));
    return nlohmann::json{
        {"rank", problem.rank()}, {"polarization", xi}, {"fixed_points", pts}};
}

LocalizationProblem localization_problem_from_json(const nlohmann::json& j) {
    const std::size_t rank = j.at("rank").get<std::size_t>();
    RationalVector xi;
    for (const auto& q : j.at("polarization")) xi.push_back(parse_rational(q.get<std::string>()));
    std::vector<std::string> labels;
    std::vector<std::vector<double>> moments;
    std::vector<std::vector<Weight>> weights;
    for (const auto& pj : j.at("fixed_points")) {
        labels.push_back(pj.at("label").get<std::string>());
        moments.push_back(pj.at("moment").get<std::vector<double>>());
        std::vector<Weight> ws;
        for (const auto& wj : pj.at("weights")) ws.push_back(weight_from_json(wj));
        weights.push_back(std::move(ws));
    }
    return LocalizationProblem(rank, std::move(xi), std::move(labels), std::move(moments),
                               std::move(weights));
}

}  // namespace hyperfn
