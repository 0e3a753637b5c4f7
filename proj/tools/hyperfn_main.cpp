#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>

#include "hyperfn/errors.hpp"
#include "hyperfn/fourier.hpp"
#include "hyperfn/localization.hpp"
#include "hyperfn/loop_su2.hpp"

namespace {

using namespace hyperfn;

constexpr int kExitPass = 0;
constexpr int kExitNumericalFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

struct GridSpec {
    std::vector<double> min;
    std::vector<double> max;
    std::vector<std::size_t> steps;
};

struct RunConfig {
    double tolerance = 1e-3;
    ContourSettings contour;
    long euler_order = 10000;
    long picken_trunc = 0;  // 0 = certify automatically
    int eps_hi = 4;         // boundary ladder 2^-hi .. 2^-lo
    int eps_lo = 8;
    double wedge_scale = 0.25;
    GridSpec grid;
    std::string output;
};

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("config: cannot open " + path);
    nlohmann::json j;
    in >> j;
    if (j.contains("tolerance")) cfg.tolerance = j.at("tolerance").get<double>();
    if (j.contains("contour")) cfg.contour = contour_settings_from_json(j.at("contour"));
    if (j.contains("euler_order")) cfg.euler_order = j.at("euler_order").get<long>();
    if (j.contains("picken_trunc")) cfg.picken_trunc = j.at("picken_trunc").get<long>();
    if (j.contains("eps_hi")) cfg.eps_hi = j.at("eps_hi").get<int>();
    if (j.contains("eps_lo")) cfg.eps_lo = j.at("eps_lo").get<int>();
    if (j.contains("wedge_scale")) cfg.wedge_scale = j.at("wedge_scale").get<double>();
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        cfg.grid.min = g.at("min").get<std::vector<double>>();
        cfg.grid.max = g.at("max").get<std::vector<double>>();
        cfg.grid.steps = g.at("steps").get<std::vector<std::size_t>>();
    }
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open output file " + path);
    out.precision(17);
    return out;
}

int cmd_dh_s2(const RunConfig& cfg) {
    const double lo = cfg.grid.min.empty() ? -2.0 : cfg.grid.min[0];
    const double hi = cfg.grid.max.empty() ? 2.0 : cfg.grid.max[0];
    const std::size_t steps = cfg.grid.steps.empty() ? 41 : cfg.grid.steps[0];

    const Hyperfunction L = picken(builtin_s2());
    const FourierResult dh = fourier_transform(L, orthant_partition(1), cfg.contour.tol,
                                               cfg.contour);

    struct Row {
        double xi;
        BoundaryEvalResult r;
    };
    std::vector<std::future<Row>> jobs;
    for (std::size_t s = 0; s < steps; ++s) {
        const double xi = (steps == 1) ? lo : lo + (hi - lo) * s / double(steps - 1);
        jobs.push_back(std::async(std::launch::async, [&, xi] {
            // The ladder depth drives the quadrature window like 1/eps, and
            // only points near the jumps need the deep levels.
            const double dist = std::min(std::abs(xi - 1.0), std::abs(xi + 1.0));
            const int lo_k = (dist < 0.3) ? cfg.eps_lo
                                          : std::min(cfg.eps_lo, cfg.eps_hi + 2);
            std::vector<double> eps;
            for (int k = cfg.eps_hi; k <= lo_k; ++k) eps.push_back(std::ldexp(1.0, -k));
            return Row{xi, boundary_evaluate(dh.transform, std::span<const double>(&xi, 1),
                                             eps)};
        }));
    }

    auto out = open_output(cfg.output.empty() ? "dh_s2.csv" : cfg.output);
    out << "xi,re,im,err\n";
    double worst = 0.0;
    bool blocked = false;
    for (auto& job : jobs) {
        const Row row = job.get();
        if (!row.r.ok()) {
            out << row.xi << ",nan,nan,nan\n";
            std::cerr << "dh-s2: probe at " << row.xi << " " << row.r.note << "\n";
            if (std::min(std::abs(row.xi - 1.0), std::abs(row.xi + 1.0)) >= 0.1)
                blocked = true;
            continue;
        }
        out << row.xi << "," << row.r.value.real() << "," << row.r.value.imag() << ","
            << row.r.err << "\n";
        // jump points are excluded from the pass/fail set
        if (std::min(std::abs(row.xi - 1.0), std::abs(row.xi + 1.0)) < 0.1) continue;
        const double expected = (std::abs(row.xi) < 1.0) ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(row.r.value - expected));
    }
    std::cout << "dh-s2: max deviation from the box density " << worst << " (tolerance "
              << cfg.tolerance << ")\n";
    if (blocked || !(worst < cfg.tolerance)) return kExitNumericalFail;
    return kExitPass;
}

int cmd_su2_euler(const RunConfig& cfg, long n) {
    auto out = open_output(cfg.output.empty() ? "su2_euler.csv" : cfg.output);
    out << "re_w,im_w,abs_diff\n";
    double worst = 0.0;
    // stay >= 0.1 from the real polar locus but shallow enough that the
    // truncation tail ~ cosh(2 pi Im w) |2(n+w)| / (pi K) clears 1e-3
    const double ims[5] = {0.105, 0.12, 0.135, 0.15, 0.165};
    const ExprPtr prod = truncated_euler_product(n, cfg.euler_order);
    for (int i = 0; i < 20; ++i) {
        const double re = -1.9 + 3.8 * i / 19.0;
        for (double im : ims) {
            const Complex w(re, im);
            const Complex zs[2] = {w, Complex(1.0, 0.0)};
            const Complex truncated = evaluate(*prod, zs);
            const Complex arg = 2.0 * M_PI * (static_cast<double>(n) + w);
            const Complex closed = std::sin(arg) / arg;
            const double diff = std::abs(truncated - closed);
            out << re << "," << im << "," << diff << "\n";
            worst = std::max(worst, diff);
        }
    }
    std::cout << "su2-euler: n=" << n << " order=" << cfg.euler_order << " max |product-closed| "
              << worst << "\n";
    return worst < cfg.tolerance ? kExitPass : kExitNumericalFail;
}

int cmd_su2_fixed(const RunConfig& cfg, long n, long m, std::optional<double> A,
                  std::optional<double> beta_re, std::optional<double> beta_im,
                  std::optional<long> k_high, std::optional<long> k_low) {
    (void)cfg;
    nlohmann::json report;
    report["n"] = n;
    report["m"] = m;
    try {
        report["levi"] =
            (loop_su2::classify_subtorus(n, m) == loop_su2::Levi::IsG) ? "su2" : "torus";
    } catch (const TrivialCase&) {
        report["levi"] = "trivial";
        std::cout << report.dump(2) << "\n";
        return kExitUsage;
    }
    try {
        loop_su2::FixedLoop loop =
            (k_high && k_low)
                ? loop_su2::solve_fixed_loop_from_modes(n, m, *k_high, *k_low)
                : loop_su2::solve_fixed_loop(n, m, A.value_or(-double(n) / double(m)),
                                             Complex(beta_re.value_or(0.5),
                                                     beta_im.value_or(0.0)));
        const loop_su2::LoopReport rep = loop_su2::verify_fixed_loop(loop);
        report["loop"] = loop_su2::to_json(loop);
        nlohmann::json modes = nlohmann::json::array();
        for (const auto& [k, c] : loop.alpha_modes) modes.push_back(k);
        report["modes"] = modes;
        report["residuals"] = {{"ode", rep.ode_residual},
                               {"unitarity", rep.unitarity_defect},
                               {"hamiltonian_field", rep.hvf_residual}};
        report["pass"] = rep.pass;
        std::cout << report.dump(2) << "\n";
        return rep.pass ? kExitPass : kExitNumericalFail;
    } catch (const NoPeriodicSolution& e) {
        report["result"] = "no_periodic_solution";
        report["detail"] = e.what();
        std::cout << report.dump(2) << "\n";
        return kExitPass;
    }
}

int cmd_picken_eval(const RunConfig& cfg) {
    const double tol = cfg.tolerance;
    const auto witness = to_double_vector(interior_witness(loop_su2::cone_gamma_nonzero()));
    const double y_arr[2] = {cfg.wedge_scale * witness[0], cfg.wedge_scale * witness[1]};

    const double lo1 = cfg.grid.min.size() > 0 ? cfg.grid.min[0] : -1.5;
    const double hi1 = cfg.grid.max.size() > 0 ? cfg.grid.max[0] : 1.5;
    const double lo2 = cfg.grid.min.size() > 1 ? cfg.grid.min[1] : 1.0;
    const double hi2 = cfg.grid.max.size() > 1 ? cfg.grid.max[1] : 2.2;
    const std::size_t s1 = cfg.grid.steps.size() > 0 ? cfg.grid.steps[0] : 7;
    const std::size_t s2 = cfg.grid.steps.size() > 1 ? cfg.grid.steps[1] : 5;

    // Certify one truncation for the whole grid.
    long n_star = 1;
    for (std::size_t i = 0; i < s1; ++i) {
        for (std::size_t j = 0; j < s2; ++j) {
            const double x1 = (s1 == 1) ? lo1 : lo1 + (hi1 - lo1) * i / double(s1 - 1);
            const double x2 = (s2 == 1) ? lo2 : lo2 + (hi2 - lo2) * j / double(s2 - 1);
            const Complex zs[2] = {Complex(x1, y_arr[0]), Complex(x2, y_arr[1])};
            const Complex w = zs[0] / zs[1];
            const double csc_mag = 1.0 / std::abs(std::sin(2.0 * M_PI * w));
            n_star = std::max(n_star,
                              loop_su2::certified_truncation(
                                  tol, std::span<const double>(y_arr, 2), std::abs(w), csc_mag));
        }
    }
    const long trunc = cfg.picken_trunc > 0 ? cfg.picken_trunc : n_star;
    const Hyperfunction at_n = loop_su2::picken_omega_su2(trunc);
    const Hyperfunction at_2n = loop_su2::picken_omega_su2(2 * trunc);

    auto out = open_output(cfg.output.empty() ? "picken_su2.csv" : cfg.output);
    out << "x1,x2,re,im,err,n\n";
    double worst_cert = 0.0;
    for (std::size_t i = 0; i < s1; ++i) {
        for (std::size_t j = 0; j < s2; ++j) {
            const double x1 = (s1 == 1) ? lo1 : lo1 + (hi1 - lo1) * i / double(s1 - 1);
            const double x2 = (s2 == 1) ? lo2 : lo2 + (hi2 - lo2) * j / double(s2 - 1);
            const Complex zs[2] = {Complex(x1, y_arr[0]), Complex(x2, y_arr[1])};
            const Complex a = wedge_evaluate(at_n, zs).value;
            const Complex b = wedge_evaluate(at_2n, zs).value;
            const double cert = std::abs(a - b);
            worst_cert = std::max(worst_cert, cert);
            out << x1 << "," << x2 << "," << a.real() << "," << a.imag() << "," << cert << ","
                << trunc << "\n";
        }
    }
    std::cout << "picken-eval: N=" << trunc << " max |val(2N)-val(N)| " << worst_cert
              << " (tolerance " << tol << ")\n";
    return worst_cert < tol ? kExitPass : kExitNumericalFail;
}

int cmd_dh_su2_probe(const RunConfig& cfg, long n, const std::string& piece_label,
                     double zeta1, double zeta2, double zeta_im, bool use_orthants) {
    const PartitionOfUnity p = use_orthants ? orthant_partition(2) : mixed_partition_2d();
    // 'p'/'m' spellings keep the labels clear of the shell's "--" separator.
    std::string label = piece_label;
    for (auto& c : label) {
        if (c == 'p') c = '+';
        if (c == 'm') c = '-';
    }
    const PartitionPiece* piece = nullptr;
    for (const auto& pc : p.pieces)
        if (pc.label == label) piece = &pc;
    if (!piece) throw Error("dh-su2-probe: unknown piece label " + piece_label);

    // Contour direction: the cone witness, except at n = 0 where the
    // centered witness (0,1) would drive z1/z2 through the real polar locus;
    // tilt to (1/9, 8/9) so the ratio crosses the axis at 1/8.
    std::vector<double> witness =
        to_double_vector(interior_witness(loop_su2::polarization_cone(n)));
    if (n == 0) witness = {1.0 / 9.0, 8.0 / 9.0};

    // The piece's transform lives on the wedge over -sigma°; the kernel only
    // decays once Im(zeta) enters that cone, so the probe evaluates at
    // zeta + i zeta_im * (dual witness).
    const ConvexCone dual = negated_cone(polar_dual(piece->sigma));
    const auto dual_witness = to_double_vector(interior_witness(dual));
    const std::array<Complex, 2> zeta{Complex(zeta1, zeta_im * dual_witness[0]),
                                      Complex(zeta2, zeta_im * dual_witness[1])};
    const ExprPtr integrand = loop_su2::dh_integrand_expr(n, zeta, *piece);

    auto run = [&](double scale) {
        const std::array<double, 2> y0{scale * witness[0], scale * witness[1]};
        return contour_integral_2d(integrand, y0, cfg.contour);
    };
    const ContourIntegral a = run(cfg.wedge_scale);
    const ContourIntegral b = run(0.5 * cfg.wedge_scale);
    const double gap = std::abs(a.value - b.value);

    nlohmann::json report{
        {"n", n},
        {"piece", piece_label},
        {"zeta_re", {zeta1, zeta2}},
        {"zeta_im", {zeta[0].imag(), zeta[1].imag()}},
        {"value", {a.value.real(), a.value.imag()}},
        {"err", a.err},
        {"value_alt", {b.value.real(), b.value.imag()}},
        {"err_alt", b.err},
        {"contour_gap", gap},
        {"consistent", gap < 10.0 * (a.err + b.err) + 1e-9},
    };
    std::cout << report.dump(2) << "\n";
    return report["consistent"].get<bool>() ? kExitPass : kExitNumericalFail;
}

int cmd_fixtures_export(const RunConfig& cfg) {
    const std::string dir = cfg.output.empty() ? "fixtures" : cfg.output;
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir + "/s2_problem.json");
        out << to_json(builtin_s2()).dump(2) << "\n";
    }
    {
        std::ofstream out(dir + "/contour_defaults.json");
        out << to_json(ContourSettings{}).dump(2) << "\n";
    }
    {
        nlohmann::json defaults{{"tolerance", 1e-3},
                                {"euler_order", 10000},
                                {"eps_hi", 4},
                                {"eps_lo", 9},
                                {"wedge_scale", 0.25}};
        std::ofstream out(dir + "/run_defaults.json");
        out << defaults.dump(2) << "\n";
    }
    std::cout << "fixtures-export: wrote " << dir << "/{s2_problem,contour_defaults,run_defaults}.json\n";
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyperfunction localization toolkit"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flags override)");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--tol", cfg.tolerance, "pass/fail tolerance");
        sub->add_option("--output", cfg.output, "output path");
        sub->add_option("--quad-tol", cfg.contour.tol, "quadrature tolerance");
        sub->add_option("--delta", cfg.contour.delta, "contour height scale");
        sub->add_option("--eps-hi", cfg.eps_hi, "boundary ladder start exponent");
        sub->add_option("--eps-lo", cfg.eps_lo, "boundary ladder end exponent");
        sub->add_option("--wedge-scale", cfg.wedge_scale, "wedge probe scale");
        sub->add_option("--grid-min", cfg.grid.min, "grid lower corner");
        sub->add_option("--grid-max", cfg.grid.max, "grid upper corner");
        sub->add_option("--grid-steps", cfg.grid.steps, "grid steps per axis");
    };

    auto* dh_s2 = app.add_subcommand("dh-s2", "two-sphere fixed-point transform vs the box density");
    add_common(dh_s2);

    long n = 0, m = 1;
    auto* su2_euler = app.add_subcommand("su2-euler", "truncated Euler product vs closed form");
    add_common(su2_euler);
    su2_euler->add_option("--n", n, "fixed point index");
    su2_euler->add_option("--order", cfg.euler_order, "product truncation order");

    std::optional<double> A, beta_re, beta_im;
    std::optional<long> k_high, k_low;
    auto* su2_fixed = app.add_subcommand("su2-fixed", "fixed-loop solve and verification");
    su2_fixed->add_option("--n", n, "torus component")->required();
    su2_fixed->add_option("--m", m, "rotation component")->required();
    su2_fixed->add_option("--alpha-rate", A, "initial A with alpha'(0)=iA");
    su2_fixed->add_option("--beta-re", beta_re, "Re beta'(0)");
    su2_fixed->add_option("--beta-im", beta_im, "Im beta'(0)");
    su2_fixed->add_option("--k-high", k_high, "upper target mode");
    su2_fixed->add_option("--k-low", k_low, "lower target mode");

    auto* picken_eval = app.add_subcommand("picken-eval", "truncated fixed-point sum on a wedge grid");
    add_common(picken_eval);
    picken_eval->add_option("--trunc", cfg.picken_trunc, "override the certified truncation");

    std::string piece = "mm";
    double zeta1 = 0.0, zeta2 = 0.0, zeta_im = 0.8;
    bool use_orthants = false;
    auto* probe = app.add_subcommand("dh-su2-probe", "one transform integral of the loop space");
    add_common(probe);
    probe->add_option("--n", n, "fixed point index");
    probe->add_option("--piece", piece, "partition piece label (p/m per axis)");
    probe->add_option("--zeta1", zeta1, "dual coordinate 1 (real part)");
    probe->add_option("--zeta2", zeta2, "dual coordinate 2 (real part)");
    probe->add_option("--zeta-im", zeta_im, "imaginary offset into the dual cone");
    probe->add_flag("--orthants", use_orthants, "use the orthant partition");

    auto* fixtures = app.add_subcommand("fixtures-export", "write JSON fixtures");
    add_common(fixtures);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (!config_path.empty()) {
            RunConfig from_file;
            apply_config_file(from_file, config_path);
            // flags already parsed into cfg fields win over file values only
            // when explicitly given; count() tells us which were set.
            RunConfig merged = from_file;
            auto keep = [&](const char* flag, auto member_ptr) {
                for (auto* sub : app.get_subcommands())
                    if (sub->count(flag)) merged.*member_ptr = cfg.*member_ptr;
            };
            keep("--tol", &RunConfig::tolerance);
            keep("--output", &RunConfig::output);
            keep("--eps-hi", &RunConfig::eps_hi);
            keep("--eps-lo", &RunConfig::eps_lo);
            keep("--wedge-scale", &RunConfig::wedge_scale);
            keep("--trunc", &RunConfig::picken_trunc);
            keep("--order", &RunConfig::euler_order);
            for (auto* sub : app.get_subcommands()) {
                if (sub->count("--quad-tol")) merged.contour.tol = cfg.contour.tol;
                if (sub->count("--delta")) merged.contour.delta = cfg.contour.delta;
                if (sub->count("--grid-min")) merged.grid.min = cfg.grid.min;
                if (sub->count("--grid-max")) merged.grid.max = cfg.grid.max;
                if (sub->count("--grid-steps")) merged.grid.steps = cfg.grid.steps;
            }
            cfg = merged;
        }

        if (dh_s2->parsed()) return cmd_dh_s2(cfg);
        if (su2_euler->parsed()) return cmd_su2_euler(cfg, n);
        if (su2_fixed->parsed()) return cmd_su2_fixed(cfg, n, m, A, beta_re, beta_im, k_high, k_low);
        if (picken_eval->parsed()) return cmd_picken_eval(cfg);
        if (probe->parsed()) {
            // exploratory 2D quadrature: relax the per-integral budget
            // unless the caller pinned it.
            if (!probe->count("--quad-tol")) cfg.contour.tol = 1e-5;
            return cmd_dh_su2_probe(cfg, n, piece, zeta1, zeta2, zeta_im, use_orthants);
        }
        if (fixtures->parsed()) return cmd_fixtures_export(cfg);
        return kExitUsage;
    } catch (const NotIntegrable& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumericalFail;
    } catch (const ContourBlocked& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumericalFail;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
