#include "hyperfn/fourier.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>

#include "hyperfn/errors.hpp"

namespace hyperfn {
namespace {

bool closed_contains(const ConvexCone& c, const RationalVector& y) {
    for (const auto& h : c.halfspaces())
        if (h.weight(y) < 0) return false;
    return true;
}

ExprPtr logistic_factor(const RationalVector& exponent_coeffs) {
    // 1/(1 + e^{L}) with L the given affine exponent.
    return Expr::div(Expr::real(1.0),
                     Expr::add(Expr::real(1.0), Expr::exp(Expr::affine(exponent_coeffs))));
}

ExprPtr pi_scaled_logistic(double scale, std::size_t coord) {
    return Expr::div(Expr::real(1.0),
                     Expr::add(Expr::real(1.0),
                               Expr::exp(Expr::mul(Expr::real(scale), Expr::coord(coord)))));
}

// e^{-i zeta . z} as an expression in z for fixed zeta.
ExprPtr fourier_kernel(std::span<const Complex> zeta) {
    ExprPtr arg;
    for (std::size_t i = 0; i < zeta.size(); ++i) {
        ExprPtr part = Expr::mul(Expr::constant(Complex(0.0, -1.0) * zeta[i]), Expr::coord(i));
        arg = arg ? Expr::add(arg, part) : part;
    }
    return Expr::exp(arg);
}

QuadConfig quad_config(const ContourSettings& s) {
    QuadConfig q;
    q.r0 = s.r0;
    q.r_max = s.r_max;
    q.panel_width = s.panel_width;
    q.tol = s.tol;
    return q;
}

struct MemoKey {
    std::vector<double> bits;
    bool operator<(const MemoKey& o) const { return bits < o.bits; }
};

MemoKey key_of(std::span<const Complex> zeta) {
    MemoKey k;
    for (const auto& c : zeta) {
        k.bits.push_back(c.real());
        k.bits.push_back(c.imag());
    }
    return k;
}

}  // namespace

PartitionOfUnity orthant_partition(std::size_t n) {
    if (n < 1) throw Error("orthant_partition: dimension must be >= 1");
    PartitionOfUnity p;
    p.dim = n;
    const std::size_t count = std::size_t{1} << n;
    for (std::size_t mask = 0; mask < count; ++mask) {
        std::string label;
        std::vector<ExprPtr> factors;
        std::vector<HalfSpace> hs;
        for (std::size_t i = 0; i < n; ++i) {
            const int sigma = ((mask >> i) & 1) ? +1 : -1;
            label += (sigma > 0) ? '+' : '-';
            RationalVector l(n, Rational(0));
            l[i] = Rational(-sigma);  // chi = 1/(1+e^{-sigma z_i})
            factors.push_back(logistic_factor(l));
            RationalVector w(n, Rational(0));
            w[i] = Rational(sigma);
            hs.push_back(HalfSpace{Weight(std::move(w))});
        }
        ExprPtr chi = (n == 1) ? factors[0] : Expr::product(factors);
        p.pieces.push_back(PartitionPiece{label, chi, ConvexCone(n, std::move(hs))});
    }
    return p;
}

PartitionOfUnity mixed_partition_2d() {
    PartitionOfUnity p;
    p.dim = 2;
    for (int s1 : {+1, -1}) {
        for (int s2 : {+1, -1}) {
            ExprPtr chi = Expr::mul(pi_scaled_logistic(static_cast<double>(s1), 0),
                                    pi_scaled_logistic(M_PI * s2, 1));
            // 1/(1+e^{s z}) decays for s x -> +inf, so the piece localizes
            // the opposite quadrant.
            std::vector<HalfSpace> hs;
            RationalVector w1(2, Rational(0)), w2(2, Rational(0));
            w1[0] = Rational(-s1);
            w2[1] = Rational(-s2);
            hs.push_back(HalfSpace{Weight(std::move(w1))});
            hs.push_back(HalfSpace{Weight(std::move(w2))});
            std::string label;
            label += (s1 < 0) ? '+' : '-';
            label += (s2 < 0) ? '+' : '-';
            p.pieces.push_back(PartitionPiece{label, chi, ConvexCone(2, std::move(hs))});
        }
    }
    return p;
}

void validate_partition(const PartitionOfUnity& p, int samples, double tol) {
    std::mt19937 rng(20260810);
    std::uniform_real_distribution<double> re(-4.0, 4.0), im(-1.0, 1.0);
    for (int s = 0; s < samples; ++s) {
        std::vector<Complex> z(p.dim);
        for (auto& c : z) c = Complex(re(rng), im(rng));
        Complex sum{0.0, 0.0};
        for (const auto& piece : p.pieces) sum += evaluate(*piece.chi, z);
        if (std::abs(sum - Complex(1.0, 0.0)) > tol)
            throw InternalError("partition of unity: sum deviates from 1");
    }
    // Coverage: random rational directions must land in some closed cone.
    std::uniform_int_distribution<int> num(-50, 50);
    for (int s = 0; s < samples; ++s) {
        RationalVector y(p.dim);
        bool zero = true;
        for (auto& q : y) {
            q = Rational(num(rng), 7);
            if (q != 0) zero = false;
        }
        if (zero) continue;
        bool covered = false;
        for (const auto& piece : p.pieces)
            if (closed_contains(piece.sigma, y)) { covered = true; break; }
        if (!covered) throw InternalError("partition of unity: cones fail to cover");
    }
}

nlohmann::json to_json(const ContourSettings& s) {
    return nlohmann::json{{"delta", s.delta},   {"r0", s.r0},
                          {"r_max", s.r_max},   {"tol", s.tol},
                          {"panel_width", s.panel_width},
                          {"pole_clearance", s.pole_clearance}};
}

ContourSettings contour_settings_from_json(const nlohmann::json& j) {
    ContourSettings s;
    if (j.contains("delta")) s.delta = j.at("delta").get<double>();
    if (j.contains("r0")) s.r0 = j.at("r0").get<double>();
    if (j.contains("r_max")) s.r_max = j.at("r_max").get<double>();
    if (j.contains("tol")) s.tol = j.at("tol").get<double>();
    if (j.contains("panel_width")) s.panel_width = j.at("panel_width").get<double>();
    if (j.contains("pole_clearance")) s.pole_clearance = j.at("pole_clearance").get<double>();
    return s;
}

ContourIntegral contour_integral_1d(const ExprPtr& integrand, double y0,
                                    const ContourSettings& cfg) {
    if (!decays_everywhere(*integrand, 1))
        throw NotIntegrable("contour_integral_1d: integrand lacks two-sided decay");
    EvalOptions opts;
    opts.min_denominator = cfg.pole_clearance;
    auto f = [&](Complex z) -> Complex {
        try {
            return evaluate(*integrand, std::span<const Complex>(&z, 1), opts);
        } catch (const PoleError& pe) {
            throw ContourBlocked(std::string("pole within clearance of the contour: ") +
                                 pe.what());
        }
    };
    const QuadResult r = integrate_line(f, y0, quad_config(cfg));
    return ContourIntegral{r.value, r.err};
}

ContourIntegral contour_integral_2d(const ExprPtr& integrand, std::array<double, 2> y0,
                                    const ContourSettings& cfg, bool inner_first) {
    EvalOptions opts;
    opts.min_denominator = cfg.pole_clearance;
    const std::size_t inner = inner_first ? 0 : 1;
    const std::size_t outer = 1 - inner;

    QuadConfig inner_cfg = quad_config(cfg);
    inner_cfg.tol = cfg.tol / 16.0;
    QuadConfig outer_cfg = quad_config(cfg);
    outer_cfg.panel_width = 2.0 * cfg.panel_width;

    double inner_err_max = 0.0;
    auto outer_fn = [&](Complex zo) -> Complex {
        auto inner_fn = [&](Complex zi) -> Complex {
            std::array<Complex, 2> z;
            z[inner] = zi;
            z[outer] = zo;
            try {
                return evaluate(*integrand, std::span<const Complex>(z.data(), 2), opts);
            } catch (const PoleError& pe) {
                throw ContourBlocked(std::string("pole within clearance of the contour: ") +
                                     pe.what());
            }
        };
        const QuadResult ri = integrate_line(inner_fn, y0[inner], inner_cfg);
        inner_err_max = std::max(inner_err_max, ri.err);
        return ri.value;
    };
    const QuadResult ro = integrate_line(outer_fn, y0[outer], outer_cfg);
    return ContourIntegral{ro.value, ro.err + inner_err_max * 2.0 * ro.reached_r};
}

ExprPtr log_tanh_form(double a) {
    // tanh(u) = 1 - 2/(e^{2u}+1) with 2u = pi (zeta - a)
    ExprPtr two_u = Expr::mul(Expr::real(M_PI), Expr::sub(Expr::coord(0), Expr::real(a)));
    ExprPtr tanh_u = Expr::sub(
        Expr::real(1.0),
        Expr::div(Expr::real(2.0), Expr::add(Expr::exp(two_u), Expr::real(1.0))));
    return Expr::log(tanh_u);
}

ExprPtr residue_sum_1d(double a, DenomSign sign) {
    ExprPtr base = log_tanh_form(a);
    return (sign == DenomSign::Plus) ? base : Expr::neg(base);
}

FourierResult fourier_transform(const Hyperfunction& f, const PartitionOfUnity& p,
                                double tol, const ContourSettings& cfg) {
    if (f.dimension() != p.dim)
        throw DimensionMismatch("fourier_transform: partition dimension mismatch");
    if (f.dimension() > 2)
        throw Unsupported("fourier_transform: only 1 or 2 variables are implemented");

    FourierResult out{Hyperfunction(f.dimension()), {}};
    if (f.terms().empty()) return out;

    std::vector<BoundaryValueTerm> result_terms;
    ContourSettings local = cfg;
    local.tol = tol / 2.0;

    for (std::size_t j = 0; j < f.terms().size(); ++j) {
        const auto& term = f.terms()[j];
        if (!term.expr())
            throw Unsupported("fourier_transform: needs expression-backed source terms");
        GrowthClass g = term.growth();
        if (g.kind != GrowthKind::SlowlyIncreasing)
            g = classify_growth(*term.expr(), term.cone());
        if (g.kind != GrowthKind::SlowlyIncreasing)
            throw NotSlowlyIncreasing("fourier_transform: term " + std::to_string(j) +
                                      " is not certified slowly increasing");

        const auto witness = term.witness_direction();
        std::vector<double> y0(witness.size());
        for (std::size_t i = 0; i < witness.size(); ++i) y0[i] = cfg.delta * witness[i];

        for (const auto& piece : p.pieces) {
            ConvexCone dual = negated_cone(polar_dual(piece.sigma));
            const ExprPtr source = term.expr();
            const ExprPtr chi = piece.chi;
            const std::size_t dim = f.dimension();
            auto memo = std::make_shared<std::map<MemoKey, TermValue>>();
            auto memo_mutex = std::make_shared<std::mutex>();
            const ContourSettings settings = local;
            std::vector<double> offsets = y0;

            BoundaryValueTerm::Evaluator eval_fn =
                [source, chi, dim, settings, offsets, memo,
                 memo_mutex](std::span<const Complex> zeta) -> TermValue {
                if (zeta.size() != dim)
                    throw DimensionMismatch("fourier term: zeta dimension mismatch");
                const MemoKey key = key_of(zeta);
                {
                    std::lock_guard<std::mutex> lock(*memo_mutex);
                    auto it = memo->find(key);
                    if (it != memo->end()) return it->second;
                }
                ExprPtr integrand = Expr::mul(fourier_kernel(zeta), Expr::mul(source, chi));
                TermValue v;
                if (dim == 1) {
                    if (!decays_everywhere(*integrand, 1))
                        throw NotIntegrable(
                            "fourier term: kernel fails to enforce decay at this zeta");
                    const ContourIntegral ci =
                        contour_integral_1d(integrand, offsets[0], settings);
                    v = TermValue{ci.value, ci.err};
                } else {
                    const ContourIntegral ci = contour_integral_2d(
                        integrand, {offsets[0], offsets[1]}, settings);
                    v = TermValue{ci.value, ci.err};
                }
                std::lock_guard<std::mutex> lock(*memo_mutex);
                (*memo)[key] = v;
                return v;
            };

            std::ostringstream prov;
            prov << "ft[src=" << j << ",piece=" << piece.label << "]";
            result_terms.emplace_back(std::move(eval_fn), dual,
                                      GrowthClass::unclassified(), prov.str());
            out.provenance.push_back(FourierProvenance{j, piece.label, dual});
        }
    }
    out.transform = Hyperfunction(f.dimension(), std::move(result_terms));
    return out;
}

}  // namespace hyperfn
