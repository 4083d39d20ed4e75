#include "memoheat/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "memoheat/laplace.hpp"
#include "memoheat/output.hpp"
#include "memoheat/parallel.hpp"
#include "memoheat/scenario.hpp"
#include "memoheat/spaces.hpp"
#include "memoheat/spectrum.hpp"
#include "memoheat/verify.hpp"

namespace fs = std::filesystem;

namespace memoheat {

unsigned resolve_jobs(unsigned requested)
{
    if (requested > 0)
        return requested;
    const char* env = std::getenv("MEMOHEAT_JOBS");
    if (!env || !*env)
        return 1;
    unsigned v = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto res = std::from_chars(env, end, v);
    if (res.ec != std::errc() || res.ptr != end || v == 0)
        throw Error(ErrorKind::config_error, std::string("MEMOHEAT_JOBS='") + env + "' is not a positive integer");
    return v;
}

namespace cli {

namespace {

struct Common {
    std::string config;
    std::string out;
    unsigned jobs = 0;
};

struct SolveOpts : Common {};

struct SpectrumOpts : Common {
    std::string n_set;
    double tol = 1e-10;
    std::string scan;
    double eps = 1.0;
    double y_max = 64.0;
    double spacing = 0.02;
};

struct VerifyOpts : Common {
    std::string check;
    std::string n_set;
    std::string small;
    std::string large;
    std::optional<double> s;
    std::optional<double> eps;
    std::optional<std::uint64_t> seed;
    bool batch = false;
    std::string sizes = "8,32,128";
    std::size_t members = 4;
    std::string variant = "strong";
    std::string q_form = "displayed";
    double y_max = 64.0;
    double spacing = 0.02;
    std::optional<double> t;
    std::size_t max_steps = 256;
    std::size_t min_steps = 8;
    bool corollary = false;
};

struct AsymptoticsOpts : Common {
    std::string orders = "1,2,3";
    double from = 1.0;
    double to = 1e6;
    std::size_t points = 61;
    double angle = 0.0;
};

std::ofstream open_output(const fs::path& path)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw Error(ErrorKind::config_error, "cannot write '" + path.string() + "'");
    return f;
}

std::string mode_file(int n)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "mode_%04d.csv", n);
    return buf;
}

NormValue forcing_norm(const Scenario& sc, double s)
{
    std::vector<int> idx;
    std::vector<NormValue> norms;
    for (const auto& [n, rule] : sc.forcing.modes) {
        if (rule.is_zero())
            continue;
        idx.push_back(n);
        norms.push_back(weighted_time_norm(rule.on_grid(sc.grid).value, sc.grid, sc.eps));
    }
    return combine_mode_norms(idx, norms, s);
}

int run_solve(const SolveOpts& o, std::ostream& out, std::ostream& err)
{
    const Scenario sc = load_scenario(o.config);
    const std::string digest = sc.digest();
    const Field field = solve_field(sc, resolve_jobs(o.jobs));
    const fs::path dir = o.out.empty() ? fs::path("out") : fs::path(o.out);
    fs::create_directories(dir);

    for (const auto& m : field.modes) {
        auto f = open_output(dir / mode_file(m.n));
        write_trajectory_csv(f, m, digest);
        if (!m.certified())
            err << "warning: mode " << m.n << " step certificate " << format_double(m.step_certificate)
                << " > 0.5\n";
    }
    {
        auto f = open_output(dir / "scenario.json");
        f << header_line(digest, "//") << "\n" << sc.canonical_json() << "\n";
    }
    std::vector<NormEntry> norms;
    norms.push_back({"xi", sc.s, 0.0, NormValue::make(seq_norm(sc.xi, sc.s), 0.0)});
    norms.push_back({"forcing", sc.s, sc.eps, forcing_norm(sc, sc.s)});
    norms.push_back({"theta", sc.s, sc.eps, field_norm(field, sc.s, sc.eps, false)});
    norms.push_back({"theta_dot", sc.s, sc.eps, field_norm(field, sc.s, sc.eps, true)});
    {
        auto f = open_output(dir / "norms.json");
        write_norms_json(f, norms, digest);
    }
    out << "solved " << field.modes.size() << " modes into " << dir.string() << "\n";
    return exit_ok;
}

int run_spectrum(const SpectrumOpts& o, std::ostream& out)
{
    const Scenario sc = load_scenario(o.config);
    const std::string digest = sc.digest();
    const auto modes = parse_n_set(o.n_set.empty() ? "1:" + std::to_string(sc.N) : o.n_set);
    const fs::path dir = o.out.empty() ? fs::path("out") : fs::path(o.out);
    const unsigned jobs = resolve_jobs(o.jobs);

    std::vector<SpectrumResult> spectra(modes.size());
    parallel_for(modes.size(), jobs, [&](std::size_t i) {
        try {
            spectra[i] = compute_spectrum(sc.kernel, modes[i], o.tol);
        } catch (const Error& e) {
            throw e.with_mode(modes[i]);
        }
    });
    {
        auto f = open_output(dir / "spectrum.csv");
        write_spectrum_csv(f, spectra, digest);
    }
    if (!o.scan.empty()) {
        const SymbolKind kind = symbol_kind_from_string(o.scan);
        const auto quad = LineQuadrature::with_spacing(o.eps, o.y_max, o.spacing, TailModel::power_law);
        std::vector<std::vector<LineSample>> scans(modes.size());
        parallel_for(modes.size(), jobs,
                     [&](std::size_t i) { scans[i] = line_scan(sc.kernel, modes[i], kind, quad); });
        for (std::size_t i = 0; i < modes.size(); ++i) {
            char name[48];
            std::snprintf(name, sizeof name, "line_scan_%04d.csv", modes[i]);
            auto f = open_output(dir / name);
            write_line_scan_csv(f, scans[i], digest);
        }
    }
    out << "spectrum of " << modes.size() << " modes certified to " << format_double(o.tol) << "\n";
    return exit_ok;
}

std::vector<int> parse_int_list(const std::string& text, const char* what)
{
    try {
        return parse_n_set(text);
    } catch (const Error& e) {
        throw Error(ErrorKind::config_error, std::string(what) + ": " + e.what());
    }
}

int run_verify(const VerifyOpts& o, std::ostream& out)
{
    const unsigned jobs = resolve_jobs(o.jobs);
    const bool batch_mode = o.batch || o.seed.has_value();
    const bool batch_check = o.check == "regularity" || o.check == "strong";
    if (batch_mode && !batch_check)
        throw Error(ErrorKind::config_error, "--seed/--batch apply to regularity and strong only");

    std::optional<Scenario> sc;
    if (!(batch_mode && o.config.empty()))
        sc = load_scenario(o.config);

    const auto quad_at = [&](double eps) {
        return LineQuadrature::with_spacing(eps, o.y_max, o.spacing, TailModel::power_law);
    };
    const StrongVariant variant = [&] {
        if (o.variant == "VV")
            return StrongVariant::VV;
        if (o.variant == "strong")
            return StrongVariant::strong;
        throw Error(ErrorKind::config_error, "--variant must be VV or strong");
    }();

    std::vector<Report> reports;
    std::string digest;
    if (batch_mode) {
        BatchSpec spec;
        spec.seed = o.seed.value_or(1);
        spec.members = o.members;
        spec.sizes = parse_int_list(o.sizes, "--sizes");
        if (sc) {
            spec.eps = sc->eps;
            spec.s = sc->s;
            spec.t_end = sc->grid.t_end();
            spec.step = sc->grid.step();
            spec.method = sc->method;
        }
        if (o.eps)
            spec.eps = *o.eps;
        if (o.s)
            spec.s = *o.s;
        const auto batch = make_scenario_batch(spec);
        reports.push_back(o.check == "regularity" ? check_regularity(batch, {}, jobs)
                                                  : check_strong(batch, variant, {}, jobs));
        digest = reports.back().inputs_digest;
    } else {
        Scenario& base = *sc;
        if (o.eps)
            base.eps = *o.eps;
        if (o.s)
            base.s = *o.s;
        digest = base.digest();
        const double s = base.s;
        if (o.check == "lemma1") {
            const double eps = o.eps.value_or(1.0);
            std::optional<LemmaGroups> groups;
            std::vector<int> n_set;
            if (!o.n_set.empty()) {
                n_set = parse_int_list(o.n_set, "--n");
            }
            if (!o.small.empty() || !o.large.empty() || o.n_set.empty()) {
                groups = LemmaGroups{parse_int_list(o.small.empty() ? "1:16" : o.small, "--small"),
                                     parse_int_list(o.large.empty() ? "129:512" : o.large, "--large")};
                n_set.insert(n_set.end(), groups->small.begin(), groups->small.end());
                n_set.insert(n_set.end(), groups->large.begin(), groups->large.end());
            }
            reports.push_back(check_lemma_bounds(base.kernel, n_set, eps, quad_at(eps), groups, {}, jobs));
        } else if (o.check == "lm1") {
            const QForm form = [&] {
                if (o.q_form == "displayed")
                    return QForm::displayed;
                if (o.q_form == "derived")
                    return QForm::derived;
                throw Error(ErrorKind::config_error, "--q-form must be displayed or derived");
            }();
            const auto n_set = parse_int_list(o.n_set.empty() ? "16:256" : o.n_set, "--n");
            reports.push_back(check_Gn_equivalence(base.kernel, n_set, {}, form));
        } else if (o.check == "perturbation") {
            const auto n_set = parse_int_list(o.n_set.empty() ? "8:512:dyadic" : o.n_set, "--n");
            std::optional<CorollaryInputs> cor;
            if (o.corollary)
                cor = CorollaryInputs{base.xi, base.grid, base.eps, base.method};
            reports.push_back(check_perturbation(base.kernel, s, n_set, quad_at(0.0), cor, {}, jobs));
        } else if (o.check == "regularity") {
            reports.push_back(check_regularity(base, {}, jobs));
        } else if (o.check == "strong") {
            reports.push_back(check_strong(base, variant, {}, jobs));
        } else if (o.check == "continuity") {
            const Field field = solve_field(base, jobs);
            const double t = o.t.value_or(0.5 * base.grid.t_end());
            reports.push_back(check_continuity(field, s, t, o.max_steps, o.min_steps));
        } else {
            throw Error(ErrorKind::config_error, "unknown check '" + o.check + "'");
        }
    }

    const fs::path path = o.out.empty() ? fs::path("report.json") : fs::path(o.out);
    {
        auto f = open_output(path);
        write_reports_json(f, reports, digest);
    }
    bool failed = false;
    for (const auto& r : reports) {
        out << r.check_name << ": " << to_string(r.verdict) << " statistic=" << format_double(r.statistic)
            << " tolerance=" << format_double(r.tolerance) << "\n";
        failed = failed || r.verdict == Verdict::fail;
    }
    return failed ? exit_fail : exit_ok;
}

int run_asymptotics(const AsymptoticsOpts& o, std::ostream& out)
{
    const Scenario sc = load_scenario(o.config);
    const std::string digest = sc.digest();
    std::vector<int> orders;
    for (int r : parse_int_list(o.orders, "--orders"))
        orders.push_back(r);
    const auto grid = geometric_ray(o.from, o.to, o.points, o.angle);
    Report report = check_asymptotics(sc.kernel, grid, orders);

    std::vector<AsymptoticRow> rows;
    for (int order : orders)
        for (const auto& z : grid) {
            const auto res = asymptotic_residual(sc.kernel, z, order);
            const double abs_res = std::abs(res.value);
            rows.push_back({z, order, abs_res, std::pow(std::abs(z), order) * abs_res});
        }
    const fs::path dir = o.out.empty() ? fs::path("out") : fs::path(o.out);
    {
        auto f = open_output(dir / "asymptotics.csv");
        write_asymptotics_csv(f, rows, digest);
    }
    {
        auto f = open_output(dir / "report.json");
        write_reports_json(f, {report}, digest);
    }
    out << report.check_name << ": " << to_string(report.verdict)
        << " statistic=" << format_double(report.statistic) << "\n";
    return report.verdict == Verdict::fail ? exit_fail : exit_ok;
}

bool is_usage_error(ErrorKind k)
{
    switch (k) {
    case ErrorKind::config_error:
    case ErrorKind::parse_error:
    case ErrorKind::schema_error:
    case ErrorKind::invalid_argument:
    case ErrorKind::inadmissible_index:
    case ErrorKind::empty_kernel:
    case ErrorKind::length_mismatch:
    case ErrorKind::negative_amplitude:
    case ErrorKind::non_increasing_rates:
    case ErrorKind::invalid_grid:
    case ErrorKind::off_grid:
    case ErrorKind::unknown_forcing:
    case ErrorKind::ray_angle:
    case ErrorKind::negative_time:
        return true;
    default:
        return false;
    }
}

void add_common(CLI::App* sub, Common& c, bool config_required)
{
    auto* cfg = sub->add_option("--config", c.config, "scenario JSON file");
    if (config_required)
        cfg->required();
    sub->add_option("--out", c.out, "output file or directory");
    sub->add_option("--jobs", c.jobs, "worker threads (default: MEMOHEAT_JOBS or 1)")->check(CLI::PositiveNumber);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Gurtin-Pipkin heat equation with memory: solver and verification toolkit", "memoheat"};
    app.set_version_flag("--version", std::string(tool_version));
    app.require_subcommand(1);

    SolveOpts solve;
    auto* solve_cmd = app.add_subcommand("solve", "solve all modes of a scenario");
    add_common(solve_cmd, solve, true);

    SpectrumOpts spectrum;
    auto* spectrum_cmd = app.add_subcommand("spectrum", "certified zeros of G_n and line scans");
    add_common(spectrum_cmd, spectrum, true);
    spectrum_cmd->add_option("--n", spectrum.n_set, "mode set: lo:hi, lo:hi:dyadic or a,b,c");
    spectrum_cmd->add_option("--tol", spectrum.tol, "residual certificate");
    spectrum_cmd->add_option("--scan", spectrum.scan, "also scan a symbol along Re z = eps")
        ->check(CLI::IsMember({"G", "G0", "invG", "invG0", "Theta", "D"}));
    spectrum_cmd->add_option("--eps", spectrum.eps, "line abscissa for --scan");
    spectrum_cmd->add_option("--y-max", spectrum.y_max, "half-length of the scanned segment");
    spectrum_cmd->add_option("--spacing", spectrum.spacing, "sample spacing along the line");

    VerifyOpts verify;
    auto* verify_cmd = app.add_subcommand("verify", "run one verification check");
    add_common(verify_cmd, verify, false);
    verify_cmd->add_option("--check", verify.check, "check name")
        ->required()
        ->check(CLI::IsMember({"lemma1", "lm1", "regularity", "perturbation", "strong", "continuity"}));
    verify_cmd->add_option("--n", verify.n_set, "mode set: lo:hi, lo:hi:dyadic or a,b,c");
    verify_cmd->add_option("--small", verify.small, "lemma1: small-n group");
    verify_cmd->add_option("--large", verify.large, "lemma1: large-n group");
    verify_cmd->add_option("--s", verify.s, "smoothness index (overrides the scenario)");
    verify_cmd->add_option("--eps", verify.eps, "weight exponent / line abscissa");
    verify_cmd->add_option("--seed", verify.seed, "seeded random scenario batch (regularity, strong)");
    verify_cmd->add_flag("--batch", verify.batch, "use a seeded batch with the default seed");
    verify_cmd->add_option("--sizes", verify.sizes, "batch mode counts N");
    verify_cmd->add_option("--members", verify.members, "random kernels per batch size");
    verify_cmd->add_option("--variant", verify.variant, "strong check variant")->check(CLI::IsMember({"VV", "strong"}));
    verify_cmd->add_option("--q-form", verify.q_form, "lm1 comparison function")
        ->check(CLI::IsMember({"displayed", "derived"}));
    verify_cmd->add_option("--y-max", verify.y_max, "line quadrature half-length (raised to 4n)");
    verify_cmd->add_option("--spacing", verify.spacing, "line quadrature spacing");
    verify_cmd->add_option("--t", verify.t, "continuity: time of the modulus");
    verify_cmd->add_option("--max-steps", verify.max_steps, "continuity: largest delta in steps");
    verify_cmd->add_option("--min-steps", verify.min_steps, "continuity: smallest delta in steps");
    verify_cmd->add_flag("--corollary", verify.corollary, "perturbation: also measure theta - theta0");

    AsymptoticsOpts asym;
    auto* asym_cmd = app.add_subcommand("asymptotics", "K(z) expansion residuals along a ray");
    add_common(asym_cmd, asym, true);
    asym_cmd->add_option("--orders", asym.orders, "expansion orders, e.g. 1,2,3");
    asym_cmd->add_option("--from", asym.from, "smallest |z|");
    asym_cmd->add_option("--to", asym.to, "largest |z|");
    asym_cmd->add_option("--points", asym.points, "points on the ray");
    asym_cmd->add_option("--angle", asym.angle, "arg z of the ray, |angle| <= pi/2");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForVersion&) {
        out << tool_version << "\n";
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return exit_usage;
    }

    try {
        if (solve_cmd->parsed())
            return run_solve(solve, out, err);
        if (spectrum_cmd->parsed())
            return run_spectrum(spectrum, out);
        if (verify_cmd->parsed())
            return run_verify(verify, out);
        return run_asymptotics(asym, out);
    } catch (const Error& e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return is_usage_error(e.kind()) ? exit_usage : exit_fail;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
}

int run(const std::vector<std::string>& args)
{
    return run(args, std::cout, std::cerr);
}

} // namespace cli
} // namespace memoheat
