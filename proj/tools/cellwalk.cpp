// Command-line front end: manifest validation, builtin generators, walk /
// trace / density / NSI experiments with reproducible CSV outputs.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cellwalk/csv.hpp"
#include "cellwalk/generators.hpp"
#include "cellwalk/spectral.hpp"

namespace fs = std::filesystem;
using namespace cellwalk;

namespace {

// Parse "9/10", "0.9" or "1" into an exact rational in [0,1].
Rational parse_rational(const std::string& text) {
    const auto dot = text.find('.');
    std::string fraction = text;
    if (dot != std::string::npos) {
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        const auto decimals = text.size() - dot - 1;
        fraction = digits + "/1" + std::string(decimals, '0');
    }
    try {
        Rational r(fraction, 10);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw SchemaError("cannot parse rational value '" + text + "'");
    }
}

struct CommonOptions {
    std::string complex_path;
    std::string generate_spec;
    int degree = -1;
    std::string q_text = "0";
    int steps = 50;
    long walkers = 100000;
    std::uint64_t seed = 0;
    int quad_m = 0;  // 0: 256 per dimension for d <= 2, 64 for d = 3+
    std::string window = "0.01:0.1";
    std::string nwindow = "50:400";
    std::string out_dir = ".";
    bool allow_absorbing = false;
    int exact_until = 64;
    std::string start_orbit;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool needs_complex = true) {
    if (needs_complex) {
        cmd->add_option("--complex", opt.complex_path, "path to a complex manifest (JSON)");
        cmd->add_option("--generate", opt.generate_spec,
                        "builtin generator spec, e.g. grid2d, grid(3), "
                        "cayley_suspension(2,3), simplicial(0 1 2; 0 1 3)");
    }
    cmd->add_option("--degree", opt.degree, "walk degree k");
    cmd->add_option("--q", opt.q_text, "laziness parameter in [0,1]; decimals stay exact");
    cmd->add_option("--steps", opt.steps, "number of steps n");
    cmd->add_option("--walkers", opt.walkers, "Monte Carlo walker count");
    cmd->add_option("--seed", opt.seed, "master RNG seed");
    cmd->add_option("--quad-m", opt.quad_m, "torus quadrature points per dimension");
    cmd->add_option("--window", opt.window, "lambda fit window LO:HI");
    cmd->add_option("--nwindow", opt.nwindow, "step fit window LO:HI for the walk estimate");
    cmd->add_option("--out", opt.out_dir, "output directory for CSV files");
    cmd->add_flag("--allow-absorbing", opt.allow_absorbing,
                  "treat cells without cofaces as immediately absorbed");
    cmd->add_option("--exact-until", opt.exact_until,
                    "largest power kept in exact rational arithmetic");
    cmd->add_option("--start", opt.start_orbit, "start orbit name (default: first k-orbit)");
}

GCWComplex resolve_complex(const CommonOptions& opt) {
    if (!opt.generate_spec.empty()) return generate_from_spec(opt.generate_spec);
    if (!opt.complex_path.empty()) return load_complex_file(opt.complex_path);
    throw SchemaError("either --complex or --generate is required");
}

int default_degree(const GCWComplex& x, int requested) {
    if (requested >= 0) return requested;
    return x.dim > 0 ? x.dim - 1 : 0;
}

int resolve_quad_m(const GCWComplex& x, int requested) {
    if (requested > 0) return requested;
    return x.group.rank <= 2 ? 256 : 64;
}

std::pair<double, double> parse_window(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw SchemaError("window must be LO:HI, got '" + text + "'");
    return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
}

std::pair<int, int> parse_nwindow(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw SchemaError("nwindow must be LO:HI, got '" + text + "'");
    return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
}

int resolve_start_orbit(const GCWComplex& x, int k, const std::string& name) {
    if (name.empty()) return 0;
    return x.orbit_index(k, name);
}

std::string out_path(const CommonOptions& opt, const std::string& file) {
    fs::create_directories(opt.out_dir);
    return (fs::path(opt.out_dir) / file).string();
}

void write_series_csv(const std::string& path, const ReturnSeries& series) {
    const char* method = series.method == ReturnSeries::Method::exact        ? "exact"
                         : series.method == ReturnSeries::Method::quadrature ? "quadrature"
                                                                             : "monte_carlo";
    CsvWriter csv(path, {"n", "p_plus", "p_minus", "p", "stderr", "method"});
    const bool mc = series.method == ReturnSeries::Method::monte_carlo;
    const bool oriented = !series.p_plus.empty();
    for (std::size_t n = 0; n < series.size(); ++n) {
        std::vector<std::string> row;
        row.push_back(CsvWriter::field(static_cast<long>(n)));
        row.push_back(oriented ? CsvWriter::field(series.p_plus[n]) : "");
        row.push_back(oriented ? CsvWriter::field(series.p_minus[n]) : "");
        row.push_back(CsvWriter::field(series.p[n]));
        row.push_back(mc ? CsvWriter::field(series.stderr_plus[n]) : "");
        row.push_back(method);
        csv.write_row(row);
    }
}

void write_density_csv(const std::string& path, const DensityCurve& curve) {
    CsvWriter csv(path, {"lambda", "F"});
    for (std::size_t i = 0; i < curve.lambda.size(); ++i)
        csv.write_row({CsvWriter::field(curve.lambda[i]), CsvWriter::field(curve.F[i])});
}

void write_nsi_csv(const std::string& path, const std::vector<NsiEstimate>& estimates) {
    CsvWriter csv(path, {"method", "alpha_hat", "b2_hat", "slope_stderr", "window_lo",
                         "window_hi"});
    for (const auto& est : estimates)
        csv.write_row({est.method, CsvWriter::field(est.alpha_hat),
                       CsvWriter::field(est.b2_hat), CsvWriter::field(est.slope_stderr),
                       CsvWriter::field(est.window_lo), CsvWriter::field(est.window_hi)});
}

int cmd_validate(const CommonOptions& opt) {
    GCWComplex x = resolve_complex(opt);
    std::cout << "group: " << x.group.describe() << ", dim " << x.dim << "\n";
    for (int d = 0; d <= x.dim; ++d) std::cout << "  " << x.orbit_count(d) << " orbit(s) in degree " << d << "\n";

    bool ok = true;
    // boundary composition wherever two consecutive incidence degrees exist
    for (int k = 0; k + 2 <= x.dim; ++k) {
        if (x.orbit_count(k) == 0 || x.orbit_count(k + 1) == 0 || x.orbit_count(k + 2) == 0)
            continue;
        auto dd = boundary_matrix(x, k) * boundary_matrix(x, k + 1);
        bool zero = true;
        for (int i = 0; i < dd.rows(); ++i)
            for (int j = 0; j < dd.cols(); ++j)
                if (!dd.at(i, j).is_zero()) zero = false;
        std::cout << "d_" << k + 1 << " o d_" << k + 2 << " = 0: " << (zero ? "ok" : "FAILED")
                  << "\n";
        if (!zero) ok = false;
    }

    const int k = default_degree(x, opt.degree);
    try {
        auto data = degree_quantities(x, k, opt.allow_absorbing);
        std::cout << "degree " << k << " quantities:\n";
        for (int a = 0; a < x.orbit_count(k); ++a) {
            const auto& od = data.orbits[static_cast<std::size_t>(a)];
            std::cout << "  " << x.orbit_names[static_cast<std::size_t>(k)]
                                               [static_cast<std::size_t>(a)]
                      << ": d_plus=" << od.d_plus << " d_plus2=" << od.d_plus2
                      << " d_minus=" << od.d_minus << "\n";
        }
        std::cout << "  D=" << data.degree_bound << " S_k=" << data.spectral_bound
                  << " q0=" << data.q0.get_str() << "\n";
        auto conn = check_upper_k_connected(x, k);
        std::cout << "upper " << k << "-connected: " << (conn.connected ? "yes" : "no") << "\n";
        if (!conn.connected) {
            std::cout << "  witness: " << conn.witness << "\n";
            ok = false;
        } else {
            auto reg = check_upper_k_regular(x, k);
            std::cout << "upper " << k << "-regular: " << (reg.regular ? "yes" : "no") << "\n";
            if (reg.regular)
                std::cout << "  C1_q = " << reg.c1_formula << ", C2_q = " << reg.c2_formula
                          << "\n";
        }
    } catch (const DegenerateCellError& e) {
        std::cout << "degenerate cells: " << e.what() << "\n";
        ok = false;
    }
    std::cout << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? 0 : 1;
}

int cmd_generate(const CommonOptions& opt) {
    if (opt.generate_spec.empty()) throw SchemaError("generate requires --generate SPEC");
    auto x = generate_from_spec(opt.generate_spec);
    const auto path = out_path(opt, "manifest.json");
    std::ofstream out(path);
    out << save_complex(x);
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_walk(const CommonOptions& opt) {
    GCWComplex x = resolve_complex(opt);
    const int k = default_degree(x, opt.degree);
    const Rational q = parse_rational(opt.q_text);
    auto table = build_transitions(x, k, q, opt.allow_absorbing);
    WalkRunConfig cfg{.steps = opt.steps,
                      .walkers = opt.walkers,
                      .seed = opt.seed,
                      .start_orbit = resolve_start_orbit(x, k, opt.start_orbit)};
    auto series = simulate(table, cfg);
    const auto path = out_path(opt, "walk.csv");
    write_series_csv(path, series);
    std::cout << "walk: degree " << k << ", q=" << q.get_str() << ", N=" << opt.walkers
              << ", steps " << opt.steps << "\n";
    std::cout << "p_plus(" << opt.steps << ") = " << series.p_plus.back() << " +- "
              << series.stderr_plus.back() << "\n";
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_trace(const CommonOptions& opt) {
    GCWComplex x = resolve_complex(opt);
    const int k = default_degree(x, opt.degree);
    const Rational q = parse_rational(opt.q_text);
    auto walk = build_signed_walk(x, k, q, opt.allow_absorbing);
    auto series = trace_power_series(walk, opt.steps, opt.exact_until);
    const auto path = out_path(opt, "trace.csv");
    write_series_csv(path, series);
    std::cout << "trace: degree " << k << ", q=" << q.get_str() << ", p(0)=" << series.p[0]
              << ", p(" << opt.steps << ")=" << series.p.back() << "\n";
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_density(const CommonOptions& opt) {
    GCWComplex x = resolve_complex(opt);
    const int k = default_degree(x, opt.degree);
    const auto [lo, hi] = parse_window(opt.window);
    const int quad_m = resolve_quad_m(x, opt.quad_m);
    auto curve = spectral_density(x, k, density_lambda_grid(lo, hi, 65), quad_m);
    const auto path = out_path(opt, "density.csv");
    write_density_csv(path, curve);
    std::cout << "density: degree " << k << ", M=" << quad_m << ", b2 = " << l2_betti(curve)
              << "\n";
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_nsi(const CommonOptions& opt) {
    GCWComplex x = resolve_complex(opt);
    const int k = default_degree(x, opt.degree);
    const Rational q = parse_rational(opt.q_text);
    const auto [lo, hi] = parse_window(opt.window);
    const auto [n_lo, n_hi] = parse_nwindow(opt.nwindow);
    const int quad_m = resolve_quad_m(x, opt.quad_m);

    auto curve = spectral_density(x, k, density_lambda_grid(lo, hi, 65), quad_m);
    auto density_est = nsi_from_density(curve, lo, hi);

    auto reg = check_upper_k_regular(x, k);
    if (!reg.regular)
        throw DomainError("the walk-side estimate requires an upper k-regular complex");
    auto walk = build_signed_walk(x, k, q, opt.allow_absorbing);
    auto series = trace_power_series(walk, n_hi, std::min(opt.exact_until, n_hi));
    auto walk_est =
        nsi_from_walk(series.p, reg.c1(q).get_d(), density_est.b2_hat, n_lo, n_hi);

    write_density_csv(out_path(opt, "density.csv"), curve);
    write_series_csv(out_path(opt, "trace.csv"), series);
    write_nsi_csv(out_path(opt, "nsi.csv"), {density_est, walk_est});

    // fit diagnostic: the rescaled series and its residual above b2
    {
        CsvWriter csv(out_path(opt, "residuals.csv"), {"n", "scaled_p", "residual"});
        const double c1 = reg.c1(q).get_d();
        double scale = 1.0;
        for (std::size_t n = 0; n < series.p.size(); ++n) {
            csv.write_row({CsvWriter::field(static_cast<long>(n)),
                           CsvWriter::field(scale * series.p[n]),
                           CsvWriter::field(scale * series.p[n] - density_est.b2_hat)});
            scale *= c1;
        }
    }

    std::cout << "b2 = " << density_est.b2_hat << "\n";
    std::cout << "alpha (density) = " << density_est.alpha_hat << " +- "
              << density_est.slope_stderr << " on [" << lo << ", " << hi << "]\n";
    std::cout << "alpha (walk)    = " << walk_est.alpha_hat << " +- " << walk_est.slope_stderr
              << " on n in [" << n_lo << ", " << n_hi << "], q=" << q.get_str() << "\n";
    std::cout << "agreement: |difference| = "
              << std::abs(density_est.alpha_hat - walk_est.alpha_hat) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"degree-k upper random walks on free G-CW complexes"};
    app.require_subcommand(1);

    CommonOptions opt;
    auto* validate = app.add_subcommand("validate", "load and check a complex");
    add_common(validate, opt);
    auto* generate = app.add_subcommand("generate", "emit a builtin complex manifest");
    add_common(generate, opt);
    auto* walk = app.add_subcommand("walk", "Monte Carlo return estimates");
    add_common(walk, opt);
    auto* trace = app.add_subcommand("trace", "exact trace power series");
    add_common(trace, opt);
    auto* density = app.add_subcommand("density", "spectral density and L2-Betti number");
    add_common(density, opt);
    auto* nsi = app.add_subcommand("nsi", "Novikov-Shubin estimates from both paths");
    add_common(nsi, opt);

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(opt);
        if (generate->parsed()) return cmd_generate(opt);
        if (walk->parsed()) return cmd_walk(opt);
        if (trace->parsed()) return cmd_trace(opt);
        if (density->parsed()) return cmd_density(opt);
        if (nsi->parsed()) return cmd_nsi(opt);
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
