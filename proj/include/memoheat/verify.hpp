#ifndef MEMOHEAT_VERIFY_HPP
#define MEMOHEAT_VERIFY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "memoheat/kernel.hpp"
#include "memoheat/laplace.hpp"
#include "memoheat/modes.hpp"
#include "memoheat/scenario.hpp"

namespace memoheat {

enum class Verdict { pass, fail, inconclusive };

const char* to_string(Verdict v) noexcept;

struct ReportEntry {
    double n = 0.0;  // mode index, N, delta in steps, ... depending on the check
    double measured = 0.0;
    double bound = 0.0;
};

struct Report {
    std::string check_name;
    std::string inputs_digest;
    std::vector<ReportEntry> per_n;
    double statistic = 0.0;
    Verdict verdict = Verdict::inconclusive;
    double tolerance = 0.0;
    std::map<std::string, double> details;
    std::map<std::string, std::vector<ReportEntry>> series;
    std::vector<std::string> notes;
};

// Estimates with unknown constants are only ever checked as trends, slopes
// or ratio caps; these are the defaults recorded in every report.
struct VerifyTolerances {
    double trend_factor = 2.0;
    double slope_tol = 0.1;
    double ratio_cap = 10.0;
    double continuity_factor = 0.75;
};

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y,
                           double* intercept = nullptr);

// Parses "lo:hi:dyadic", "lo:hi" or "a,b,c".
std::vector<int> parse_n_set(const std::string& text);

// ---- bounds on 1/G_n along Re z = eps ------------------------------------

struct LemmaGroups {
    std::vector<int> small;
    std::vector<int> large;
};

// statistic = max(ratio of sup|z/G_n|, ratio of ||1/G_n||_L2), each ratio
// being max over the large-n group / max over the small-n group (quartiles of
// n_set unless groups are given).
Report check_lemma_bounds(const Kernel& kernel, const std::vector<int>& n_set, double eps,
                          const LineQuadrature& quad, const std::optional<LemmaGroups>& groups = {},
                          const VerifyTolerances& tol = {}, unsigned jobs = 1);

// ---- two-sided comparison of |G_n(iy)|^2 with Q(y) -------------------------

// displayed: y^-4 [(y^2 (y^2 - n^2))^2 + n^4]
// derived:   y^-4 [ y^2 (y^2 - n^2)^2  + n^4], the form the expansion of
//            G_n(iy) through the gamma/z^3 term actually produces.
enum class QForm { displayed, derived };

double q_of_y(double y, int n, QForm form);

Report check_Gn_equivalence(const Kernel& kernel, const std::vector<int>& n_set,
                            std::vector<double> y_grid = {}, QForm form = QForm::displayed,
                            const VerifyTolerances& tol = {});

// ---- perturbation D_n = 1/G_n - 1/G0_n -------------------------------------

struct CorollaryInputs {
    std::vector<double> xi;  // xi_n, n = 1..N
    TimeGrid grid;
    double eps = 1.0;
    SolveMethod method = SolveMethod::ode;
};

Report check_perturbation(const Kernel& kernel, double s, const std::vector<int>& n_set,
                          const LineQuadrature& quad,
                          const std::optional<CorollaryInputs>& corollary = {},
                          const VerifyTolerances& tol = {}, unsigned jobs = 1);

// ---- regularity ratios over scenario batches --------------------------------

struct RatioMeasurement {
    double numerator = 0.0;
    double denominator = 0.0;
    double statistic = 0.0;  // NaN when the denominator vanishes
    std::vector<ReportEntry> partial;  // running sums over n
};

RatioMeasurement regularity_ratio(const Scenario& scenario, unsigned jobs = 1);
Report check_regularity(const Scenario& scenario, const VerifyTolerances& tol = {}, unsigned jobs = 1);
Report check_regularity(const std::vector<Scenario>& batch, const VerifyTolerances& tol = {},
                        unsigned jobs = 1);

enum class StrongVariant { VV, strong };

RatioMeasurement strong_ratio(const Scenario& scenario, StrongVariant variant, unsigned jobs = 1);
Report check_strong(const Scenario& scenario, StrongVariant variant, const VerifyTolerances& tol = {},
                    unsigned jobs = 1);
Report check_strong(const std::vector<Scenario>& batch, StrongVariant variant,
                    const VerifyTolerances& tol = {}, unsigned jobs = 1);

// ---- K(z) expansion ----------------------------------------------------------

Report check_asymptotics(const Kernel& kernel, const std::vector<complex>& z_grid,
                         const std::vector<int>& orders);

// Geometric grid r^0..r^k along the ray arg z = angle, from `from` to `to`.
std::vector<complex> geometric_ray(double from, double to, std::size_t points, double angle = 0.0);

// ---- continuity in time of the H_s-valued solution ---------------------------

// Halves delta from max_steps * step down to min_steps * step and checks that
// each halving shrinks the modulus by at least tol.continuity_factor.
Report check_continuity(const Field& field, double s, double t, std::size_t max_steps,
                        std::size_t min_steps = 8, const VerifyTolerances& tol = {});

// ---- weighted vs unweighted time norms for the wave kernel --------------------

// Unweighted int_0^T theta_n^2 should grow with slope 1/2 in T while the
// eps-weighted integral settles (increment over the last decade of horizons).
Report check_sharpness(int n, double eps, const std::vector<double>& horizons, double step,
                       double slope_rel_tol = 0.05, double increment_tol = 1e-6);

// ---- seeded scenario batches -------------------------------------------------

struct BatchSpec {
    std::uint64_t seed = 1;
    std::size_t members = 4;
    std::vector<int> sizes{8, 32, 128};
    double eps = 1.0;
    double s = 0.0;
    double xi_decay = 3.0;  // |xi_n| <= n^-xi_decay
    bool with_forcing = true;
    double t_end = 10.0;
    double step = 1e-3;
    SolveMethod method = SolveMethod::ode;
};

// Random C1 kernels (M <= 4), decaying data and optional single-mode
// damped-sine forcing with f(0) = 0.  Member i has the same kernel and data
// rule for every N.
std::vector<Scenario> make_scenario_batch(const BatchSpec& spec);

// Draws from std::mt19937_64 mapped by hand, so sequences do not depend on
// the standard library's distribution implementations.
class SeededRandom {
public:
    explicit SeededRandom(std::uint64_t seed) : engine_(seed) {}
    double uniform(double lo, double hi);
    int integer(int lo, int hi);  // inclusive

private:
    std::mt19937_64 engine_;
};

Kernel random_kernel(SeededRandom& rng, std::size_t max_terms, double max_rate = 5.0);

} // namespace memoheat

#endif
