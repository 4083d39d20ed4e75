// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "memoheat/laplace.hpp"
#include "memoheat/modes.hpp"
#include "memoheat/parallel.hpp"
#include "memoheat/scenario.hpp"
#include "memoheat/spaces.hpp"
#include "memoheat/spectrum.hpp"
#include "memoheat/verify.hpp"
#include "oracles.hpp"

using namespace memoheat;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

std::string fmt(const char* f, double a)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

void criterion(const char* id, const char* title, double limit_seconds, const std::function<Outcome()>& body)
{
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = limit_seconds <= 0.0 || secs < limit_seconds;
    const bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("[%s] %-4s %s: %s; %.2f s", pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
    if (limit_seconds > 0.0)
        std::printf(" (limit %.0f s)", limit_seconds);
    std::printf("\n");
    std::fflush(stdout);
}

void info(const char* id, const std::string& text)
{
    std::printf("[INFO] %-4s %s\n", id, text.c_str());
    std::fflush(stdout);
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        e = std::max(e, std::abs(a[i] - b[i]));
    return e;
}

double sup_abs(const std::vector<double>& a)
{
    double e = 0.0;
    for (double v : a)
        e = std::max(e, std::abs(v));
    return e;
}

const unsigned jobs = resolve_jobs(0);

} // namespace

int main()
{
    const Kernel gp2({0.5, 0.5}, {1.0, 3.0});

    criterion("1", "wave recovery", 5.0, [] {
        const auto grid = TimeGrid::make(10.0, 1e-4);
        Scenario sc(Kernel({1.0}, {0.0}), 5, {0.0, 0.0, 0.0, 0.0, 1.0}, grid);
        const Field f = solve_field(sc, jobs);
        const auto& m = *f.find(5);
        double err = 0.0;
        for (std::size_t j = 0; j < grid.points(); ++j)
            err = std::max(err, std::abs(m.theta[j] - std::cos(5.0 * grid.time(j))));
        return Outcome{err <= 1e-5, "sup|theta_5 - cos 5t| = " + fmt("%.3e", err) + " (tol 1e-5)"};
    });

    criterion("2", "ode vs volterra on 20 random kernels", 60.0, [] {
        SeededRandom rng(2);
        const auto grid = TimeGrid::make(5.0, 1e-5);
        struct Case {
            Kernel kernel;
            int n;
            double xi;
        };
        std::vector<Case> cases;
        for (int i = 0; i < 20; ++i) {
            Kernel k = random_kernel(rng, 4);
            const int n = i % 4 == 0 ? 64 : rng.integer(1, 64);
            cases.push_back({std::move(k), n, rng.uniform(0.2, 1.0)});
        }
        std::vector<double> rel(cases.size());
        parallel_for(cases.size(), jobs, [&](std::size_t i) {
            const auto a = solve_mode(cases[i].kernel, cases[i].n, cases[i].xi, {}, grid, SolveMethod::ode);
            const auto b = solve_mode(cases[i].kernel, cases[i].n, cases[i].xi, {}, grid, SolveMethod::volterra);
            rel[i] = sup_diff(a.theta, b.theta) / sup_abs(a.theta);
        });
        double worst = 0.0;
        for (double r : rel)
            worst = std::max(worst, r);
        return Outcome{worst <= 1e-4, "max relative sup difference " + fmt("%.3e", worst) + " (tol 1e-4)"};
    });

    criterion("3", "single-exponential closed form", 0.0, [] {
        const auto grid = TimeGrid::make(5.0, 1e-4);
        struct Case {
            double a, b;
            int n;
        };
        double worst = 0.0;
        for (const Case c : {Case{1.0, 2.0, 1}, Case{1.0, 2.0, 2}, Case{1.0, 2.0, 5}, Case{0.7, 0.3, 3},
                             Case{2.0, 10.0, 1}, Case{0.25, 1.0, 8}}) {
            const Kernel k({c.a}, {c.b});
            for (auto method : {SolveMethod::ode, SolveMethod::volterra}) {
                const auto m = solve_mode(k, c.n, 1.0, {}, grid, method);
                for (std::size_t j = 0; j < grid.points(); ++j)
                    worst = std::max(worst, std::abs(m.theta[j] - oracle::damped_oscillator(
                                                                      c.a * c.n * c.n, c.b, 1.0, grid.time(j))));
            }
        }
        return Outcome{worst <= 1e-6, "sup error " + fmt("%.3e", worst) + " over 6 cases x 2 schemes (tol 1e-6)"};
    });

    criterion("4", "Plancherel identity", 0.0, [] {
        SeededRandom rng(4);
        const auto grid = TimeGrid::make(20.0, 2.5e-4);
        const auto quad = LineQuadrature::with_spacing(1.0, 1000.0, 0.02);
        struct Case {
            Kernel kernel;
            int n;
        };
        std::vector<Case> cases;
        for (int i = 0; i < 12; ++i) {
            Kernel k = random_kernel(rng, 3);
            const int n = i % 3 == 0 ? 64 : rng.integer(1, 64);
            cases.push_back({std::move(k), n});
        }
        std::vector<double> res(cases.size());
        parallel_for(cases.size(), jobs, [&](std::size_t i) {
            const auto m = solve_mode(cases[i].kernel, cases[i].n, 1.0, {}, grid, SolveMethod::ode);
            res[i] = plancherel_residual(m, cases[i].kernel, 1.0, quad).residual;
        });
        double worst = 0.0;
        for (double r : res)
            worst = std::max(worst, r);
        return Outcome{worst <= 1e-3, "max relative discrepancy " + fmt("%.3e", worst) + " over 12 kernels (tol 1e-3)"};
    });

    {
        const auto quad = LineQuadrature::with_spacing(1.0, 64.0, 0.02);
        LemmaGroups groups{parse_n_set("1:16"), parse_n_set("129:512")};
        std::vector<int> n_set = groups.small;
        n_set.insert(n_set.end(), groups.large.begin(), groups.large.end());
        Report lemma;
        const auto start = std::chrono::steady_clock::now();
        try {
            lemma = check_lemma_bounds(gp2, n_set, 1.0, quad, groups, {}, jobs);
        } catch (const std::exception& e) {
            lemma.notes.push_back(e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const auto ratio = [&](const char* key) {
            const auto it = lemma.details.find(key);
            return it == lemma.details.end() ? NAN : it->second;
        };
        criterion("5a", "sup|z/G_n| on Re z = 1, n in 129..512 vs 1..16", 120.0, [&] {
            const double r = ratio("ratio_sup_z_over_G");
            return Outcome{r <= 2.0, "max ratio " + fmt("%.4f", r) + " (tol 2); shared lemma run " +
                                         fmt("%.2f s", secs)};
        });
        criterion("5b", "||1/G_n|| on Re z = 1, n in 129..512 vs 1..16", 120.0, [&] {
            const double r = ratio("ratio_l2_invG");
            return Outcome{r <= 2.0 && secs < 120.0, "max ratio " + fmt("%.4f", r) + " (tol 2)"};
        });
        info("5", "sup|1/G_n| ratio (large/small) = " + fmt("%.4f", ratio("ratio_sup_invG")) +
                      "; sup|z/G_n| small-group max = " + fmt("%.4f", ratio("max_small_sup_z_over_G")));
    }

    criterion("6", "|G_n(iy)|^2 / Q(y) in [1/10, 10], n in 16..256, G and G0", 0.0, [&] {
        const auto r = check_Gn_equivalence(gp2, parse_n_set("16:256"), {}, QForm::displayed);
        return Outcome{r.verdict == Verdict::pass, "max(R, 1/R) = " + fmt("%.4g", r.statistic) + " (cap 10)"};
    });
    {
        const auto r = check_Gn_equivalence(gp2, parse_n_set("16:256"), {}, QForm::derived);
        info("6", "with Q(y) = y^-4 [y^2 (y^2-n^2)^2 + n^4]: max(R, 1/R) = " + fmt("%.4f", r.statistic) + ", " +
                      to_string(r.verdict));
    }

    criterion("7", "perturbation decay slopes s-1, s in {0,1,2,3}, n in 8..512 dyadic", 300.0, [&] {
        const auto quad = LineQuadrature::with_spacing(0.0, 64.0, 0.02);
        const auto n_set = parse_n_set("8:512:dyadic");
        bool ok = true;
        std::string detail;
        for (double s : {0.0, 1.0, 2.0, 3.0}) {
            const auto r = check_perturbation(gp2, s, n_set, quad, {}, {}, jobs);
            ok = ok && r.verdict == Verdict::pass;
            detail += (detail.empty() ? "" : ", ") + fmt("s=%.0f: ", s) + fmt("%.4f", r.statistic);
        }
        return Outcome{ok, "slopes " + detail + " (tol 0.1)"};
    });

    criterion("8", "trivial perturbation branch", 0.0, [] {
        const auto beta0 = check_Gn_equivalence(Kernel({1.0}, {0.0}), parse_n_set("1:64"));
        const Kernel single({1.0}, {2.0});
        double worst = 0.0;
        for (int n : {1, 4, 16, 64, 256})
            for (double y : {0.0, 0.5, 3.0, 17.0, 250.0, 4096.0})
                for (double x : {0.0, 0.5, 2.0})
                    worst = std::max(worst, std::abs(symbol(single, n, complex(x, y), SymbolKind::D)));
        const bool ok = beta0.verdict == Verdict::pass && worst <= 1e-15;
        return Outcome{ok, "beta=0: max|D|/max|1/G| = " + fmt("%.1e", beta0.statistic) + "; b=beta: max|D| = " +
                               fmt("%.1e", worst)};
    });

    criterion("9", "spectrum certification", 0.0, [] {
        const Kernel single({1.0}, {2.0});
        const auto s1 = compute_spectrum(single, 1);
        double e1 = 0.0;
        for (const auto& r : s1.roots)
            e1 = std::max(e1, std::abs(r + 1.0));
        const auto s2 = compute_spectrum(single, 2);
        const double e2 = std::max(std::abs(s2.roots[0] - complex(-1.0, -std::sqrt(3.0))),
                                   std::abs(s2.roots[1] - complex(-1.0, std::sqrt(3.0))));
        SeededRandom rng(9);
        double worst = 0.0;
        int over = 0, over_at_floor = 0, roots = 0;
        for (int i = 0; i < 60; ++i) {
            const Kernel k = random_kernel(rng, 8);
            const int n = i % 6 == 0 ? 128 : rng.integer(1, 128);
            // loose tolerance so every residual is measured instead of thrown
            const auto s = compute_spectrum(k, n, 1e-6);
            for (std::size_t j = 0; j < s.roots.size(); ++j) {
                ++roots;
                worst = std::max(worst, s.residuals[j]);
                if (s.residuals[j] > 1e-10) {
                    ++over;
                    over_at_floor += s.residuals[j] <= 2.0 * s.floors[j];
                }
            }
        }
        info("9", std::to_string(over) + " of " + std::to_string(roots) + " random-kernel roots exceed 1e-10; " +
                      std::to_string(over_at_floor) + " of those are within 2x of their double rounding floor");
        const bool ok = e1 <= 1e-8 && e2 <= 1e-10 && worst <= 1e-10;
        return Outcome{ok, "double root err " + fmt("%.1e", e1) + ", pair err " + fmt("%.1e", e2) +
                               ", max residual " + fmt("%.1e", worst) + " over 60 random kernels (tol 1e-10)"};
    });

    criterion("10", "weighted-space sharpness for the wave kernel", 0.0, [] {
        const auto r = check_sharpness(5, 1.0, {10, 20, 30, 40, 50, 60, 70, 80, 90, 100}, 1e-3);
        return Outcome{r.verdict == Verdict::pass,
                       "unweighted slope " + fmt("%.5f", r.statistic) + " (0.5 +- 5%), weighted increment " +
                           fmt("%.1e", r.details.at("weighted_increment_last_decade")) + " (tol 1e-6)"};
    });

    {
        BatchSpec spec;
        spec.seed = 11;
        spec.sizes = {8, 32, 128};
        const auto batch = make_scenario_batch(spec);
        criterion("11a", "regularity ratio trend over N in {8,32,128}", 0.0, [&] {
            const auto r = check_regularity(batch, {}, jobs);
            return Outcome{r.verdict == Verdict::pass, "largest/smallest N ratio " + fmt("%.4f", r.statistic) + " (cap 2)"};
        });
        criterion("11b", "strong estimate trend over N in {8,32,128}", 0.0, [&] {
            const auto r = check_strong(batch, StrongVariant::strong, {}, jobs);
            return Outcome{r.verdict == Verdict::pass, "largest/smallest N ratio " + fmt("%.4f", r.statistic) + " (cap 2)"};
        });
        criterion("11c", "VV estimate trend over N in {8,32,128}", 0.0, [&] {
            const auto r = check_strong(batch, StrongVariant::VV, {}, jobs);
            return Outcome{r.verdict == Verdict::pass, "largest/smallest N ratio " + fmt("%.4f", r.statistic) + " (cap 2)"};
        });
    }

    criterion("12", "continuity modulus under delta halving down to 8 steps", 0.0, [] {
        SeededRandom rng(12);
        bool ok = true;
        double worst = 0.0;
        for (int trial = 0; trial < 3; ++trial) {
            const double b1 = rng.uniform(0.0, 2.0);
            const Kernel k({rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0)}, {b1, b1 + rng.uniform(0.5, 3.0)});
            const auto grid = TimeGrid::make(4.0, 1e-3);
            std::vector<double> xi(16);
            for (int n = 1; n <= 16; ++n)
                xi[n - 1] = rng.uniform(-1.0, 1.0) * std::pow(double(n), -3.0);
            Scenario sc(k, 16, xi, grid);
            sc.forcing.modes[1] = ModeForcing::from_terms({{1.0, 0.5, 2.0, Oscillation::sin}});
            const Field f = solve_field(sc, jobs);
            for (double s : {0.0, 1.0}) {
                const auto r = check_continuity(f, s, 2.0, 256, 8);
                ok = ok && r.verdict == Verdict::pass;
                worst = std::max(worst, r.statistic);
            }
        }
        return Outcome{ok, "worst per-halving factor " + fmt("%.4f", worst) + " (cap 0.75), 3 kernels, s in {0,1}"};
    });

    std::printf("%s: %d criterion line(s) failed\n", failures ? "FAILED" : "OK", failures);
    return failures ? 1 : 0;
}
