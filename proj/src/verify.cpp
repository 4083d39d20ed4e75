#include "memoheat/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "memoheat/parallel.hpp"
#include "memoheat/spaces.hpp"

namespace memoheat {

const char* to_string(Verdict v) noexcept
{
    switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

std::string kernel_digest(const Kernel& kernel)
{
    return kernel.summary();
}

std::vector<int> sorted_unique(std::vector<int> v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

void require_modes(const std::vector<int>& n_set)
{
    if (n_set.empty())
        throw Error(ErrorKind::invalid_argument, "n set is empty");
    for (int n : n_set)
        if (n < 1)
            throw Error(ErrorKind::invalid_argument, "mode indices must be >= 1");
}

} // namespace

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y, double* intercept)
{
    if (x.size() != y.size() || x.size() < 2)
        throw Error(ErrorKind::invalid_argument, "regression needs at least two points");
    const double m = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0)
        throw Error(ErrorKind::invalid_argument, "regression abscissae are all equal");
    const double slope = sxy / sxx;
    if (intercept)
        *intercept = my - slope * mx;
    return slope;
}

std::vector<int> parse_n_set(const std::string& text)
{
    auto to_int = [&](const std::string& s) {
        std::size_t pos = 0;
        int v = 0;
        try {
            v = std::stoi(s, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != s.size() || s.empty())
            throw Error(ErrorKind::config_error, "bad mode index '" + s + "' in n set '" + text + "'");
        if (v < 1)
            throw Error(ErrorKind::config_error, "mode indices in '" + text + "' must be >= 1");
        return v;
    };

    if (text.empty())
        throw Error(ErrorKind::config_error, "empty n set");
    std::vector<std::string> parts;
    const char sep = text.find(':') != std::string::npos ? ':' : ',';
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, sep);)
        parts.push_back(item);

    std::vector<int> out;
    if (sep == ',') {
        for (const auto& p : parts)
            out.push_back(to_int(p));
        return sorted_unique(out);
    }
    if (parts.size() < 2 || parts.size() > 3)
        throw Error(ErrorKind::config_error, "n set '" + text + "' must be lo:hi or lo:hi:dyadic");
    const int lo = to_int(parts[0]);
    const int hi = to_int(parts[1]);
    if (hi < lo)
        throw Error(ErrorKind::config_error, "n set '" + text + "' has hi < lo");
    if (parts.size() == 3) {
        if (parts[2] != "dyadic")
            throw Error(ErrorKind::config_error, "unknown n set spacing '" + parts[2] + "'");
        for (long long n = lo; n <= hi; n *= 2)
            out.push_back(static_cast<int>(n));
    } else {
        for (int n = lo; n <= hi; ++n)
            out.push_back(n);
    }
    return out;
}

// ---------------------------------------------------------------------------

Report check_lemma_bounds(const Kernel& kernel, const std::vector<int>& n_set, double eps,
                          const LineQuadrature& quad, const std::optional<LemmaGroups>& groups,
                          const VerifyTolerances& tol, unsigned jobs)
{
    require_modes(n_set);
    if (!(eps > 0.0))
        throw Error(ErrorKind::invalid_argument, "line abscissa eps must be positive");

    Report r;
    r.check_name = "lemma1";
    r.inputs_digest = kernel_digest(kernel) + " eps=" + std::to_string(eps);
    r.tolerance = tol.trend_factor;

    std::vector<int> small, large;
    if (groups) {
        small = sorted_unique(groups->small);
        large = sorted_unique(groups->large);
    } else {
        const auto all = sorted_unique(n_set);
        if (all.size() >= 2) {
            const std::size_t q = std::max<std::size_t>(1, all.size() / 4);
            small.assign(all.begin(), all.begin() + q);
            large.assign(all.end() - q, all.end());
        }
    }
    std::vector<int> modes = n_set;
    modes.insert(modes.end(), small.begin(), small.end());
    modes.insert(modes.end(), large.begin(), large.end());
    modes = sorted_unique(modes);

    LineQuadrature line = quad;
    line.eps = eps;
    struct Row {
        double sup_z_over_g = 0.0;
        double sup_inv_g = 0.0;
        double l2 = 0.0;
        std::vector<std::string> warnings;
    };
    std::vector<Row> rows(modes.size());
    parallel_for(modes.size(), jobs, [&](std::size_t i) {
        const int n = modes[i];
        Row row;
        const LineNorm norm = weighted_line_norm(kernel, n, SymbolKind::invG, 0.0, line);
        row.l2 = norm.total;
        row.warnings = norm.warnings;
        for (const auto& sample : line_scan(kernel, n, SymbolKind::invG, line)) {
            const complex z(eps, sample.y);
            row.sup_inv_g = std::max(row.sup_inv_g, std::abs(sample.value));
            row.sup_z_over_g = std::max(row.sup_z_over_g, std::abs(z * sample.value));
        }
        rows[i] = std::move(row);
    });

    auto group_max = [&](const std::vector<int>& g, auto member) {
        double m = 0.0;
        for (int n : g) {
            const auto it = std::lower_bound(modes.begin(), modes.end(), n);
            m = std::max(m, rows[static_cast<std::size_t>(it - modes.begin())].*member);
        }
        return m;
    };

    const bool measurable = !small.empty() && !large.empty() && small != large;
    const double small_a = measurable ? group_max(small, &Row::sup_z_over_g) : nan_value;
    const double small_b = measurable ? group_max(small, &Row::l2) : nan_value;
    const double small_c = measurable ? group_max(small, &Row::sup_inv_g) : nan_value;

    auto& l2_series = r.series["l2_invG"];
    auto& inv_series = r.series["sup_invG"];
    for (std::size_t i = 0; i < modes.size(); ++i) {
        r.per_n.push_back({double(modes[i]), rows[i].sup_z_over_g, tol.trend_factor * small_a});
        l2_series.push_back({double(modes[i]), rows[i].l2, tol.trend_factor * small_b});
        inv_series.push_back({double(modes[i]), rows[i].sup_inv_g, tol.trend_factor * small_c});
        for (const auto& w : rows[i].warnings)
            r.notes.push_back("n=" + std::to_string(modes[i]) + ": " + w);
    }

    if (!measurable) {
        r.statistic = nan_value;
        r.verdict = Verdict::inconclusive;
        r.notes.push_back("fewer than two distinct mode groups: no trend measurable");
        return r;
    }
    const double ratio_a = group_max(large, &Row::sup_z_over_g) / small_a;
    const double ratio_b = group_max(large, &Row::l2) / small_b;
    const double ratio_c = group_max(large, &Row::sup_inv_g) / small_c;
    r.details["ratio_sup_z_over_G"] = ratio_a;
    r.details["ratio_l2_invG"] = ratio_b;
    r.details["ratio_sup_invG"] = ratio_c;
    r.details["max_small_sup_z_over_G"] = small_a;
    r.details["max_small_l2_invG"] = small_b;
    r.details["small_lo"] = small.front();
    r.details["small_hi"] = small.back();
    r.details["large_lo"] = large.front();
    r.details["large_hi"] = large.back();
    r.statistic = std::max(ratio_a, ratio_b);
    r.verdict = r.statistic <= tol.trend_factor ? Verdict::pass : Verdict::fail;
    if (ratio_a > tol.trend_factor)
        r.notes.push_back("sup|z/G_n| grows with n (ratio " + std::to_string(ratio_a) + ")");
    return r;
}

// ---------------------------------------------------------------------------

double q_of_y(double y, int n, QForm form)
{
    const double nn = n;
    const double y2 = y * y;
    const double gap = (y - nn) * (y + nn);  // y^2 - n^2
    const double n4 = nn * nn * nn * nn;
    const double y4 = y2 * y2;
    if (form == QForm::displayed) {
        const double lead = y2 * gap;
        return (lead * lead + n4) / y4;
    }
    return (y2 * gap * gap + n4) / y4;
}

Report check_Gn_equivalence(const Kernel& kernel, const std::vector<int>& n_set,
                            std::vector<double> y_grid, QForm form, const VerifyTolerances& tol)
{
    require_modes(n_set);
    const auto& m = kernel.moments();
    double max_rate = 0.0;
    for (double b : kernel.rates())
        max_rate = std::max(max_rate, b);
    const double y0 = std::max(4.0 * max_rate, 1.0);
    const int n_max = *std::max_element(n_set.begin(), n_set.end());

    if (y_grid.empty()) {
        const double linear_end = 4.0 * n_max;
        for (double y = y0; y <= linear_end; y += 0.05)
            y_grid.push_back(y);
        const double top = 1e3 * n_max;
        for (double y = linear_end; y <= top; y *= 1.05)
            y_grid.push_back(y);
    }
    for (double y : y_grid)
        if (!(y > 0.0))
            throw Error(ErrorKind::invalid_argument, "y grid must be positive");

    Report r;
    r.inputs_digest = kernel_digest(kernel);

    if (m.beta == 0.0) {
        // Only the zero rate carries mass: K = K0 and the perturbation vanishes.
        r.check_name = "lm1_trivial";
        r.tolerance = 64.0 * std::numeric_limits<double>::epsilon();
        double worst = 0.0;
        for (int n : n_set) {
            double max_d = 0.0, max_ref = 0.0;
            for (double y : y_grid) {
                for (const complex z : {complex(0.25, y), complex(0.5, y), complex(1.0, -y)}) {
                    max_d = std::max(max_d, std::abs(symbol(kernel, n, z, SymbolKind::D)));
                    max_ref = std::max(max_ref, std::abs(symbol(kernel, n, z, SymbolKind::invG)));
                }
            }
            const double rel = max_ref > 0.0 ? max_d / max_ref : max_d;
            r.per_n.push_back({double(n), rel, r.tolerance});
            worst = std::max(worst, rel);
        }
        r.statistic = worst;
        r.verdict = worst <= r.tolerance ? Verdict::pass : Verdict::fail;
        r.notes.push_back("beta = 0: D_n == 0 checked at sample points instead of the Q(y) bound");
        return r;
    }

    r.check_name = "lm1";
    r.tolerance = tol.ratio_cap;
    r.details["y0"] = y0;
    r.details["q_form_derived"] = form == QForm::derived ? 1.0 : 0.0;
    auto& reference = r.series["G0"];
    double worst = 0.0;
    for (int n : n_set) {
        double worst_g = 1.0, worst_g0 = 1.0;
        for (double y : y_grid) {
            const complex z(0.0, y);
            const double q = q_of_y(y, n, form);
            const double rg = std::norm(symbol(kernel, n, z, SymbolKind::G)) / q;
            const double rg0 = std::norm(symbol(kernel, n, z, SymbolKind::G0)) / q;
            worst_g = std::max({worst_g, rg, 1.0 / rg});
            worst_g0 = std::max({worst_g0, rg0, 1.0 / rg0});
        }
        r.per_n.push_back({double(n), worst_g, tol.ratio_cap});
        reference.push_back({double(n), worst_g0, tol.ratio_cap});
        worst = std::max({worst, worst_g, worst_g0});
    }
    r.statistic = worst;
    r.verdict = worst <= tol.ratio_cap ? Verdict::pass : Verdict::fail;
    if (form == QForm::displayed && r.verdict == Verdict::fail)
        r.notes.push_back("displayed Q(y) carries y^4 (y^2-n^2)^2 where |G_n(iy)|^2 carries "
                          "y^2 (y^2-n^2)^2; rerun with the derived form to compare");
    return r;
}

// ---------------------------------------------------------------------------

Report check_perturbation(const Kernel& kernel, double s, const std::vector<int>& n_set,
                          const LineQuadrature& quad, const std::optional<CorollaryInputs>& corollary,
                          const VerifyTolerances& tol, unsigned jobs)
{
    if (!(s < 4.5))
        throw Error(ErrorKind::inadmissible_index, "perturbation check needs s < 9/2");
    require_modes(n_set);
    const auto modes = sorted_unique(n_set);

    Report r;
    r.check_name = "perturbation";
    r.inputs_digest = kernel_digest(kernel) + " s=" + std::to_string(s);
    r.tolerance = tol.slope_tol;
    r.details["s"] = s;
    r.details["target_slope"] = s - 1.0;

    std::size_t charged = 0;
    for (double a : kernel.amplitudes())
        charged += a > 0.0;
    if (charged <= 1) {
        for (int n : modes)
            r.per_n.push_back({double(n), 0.0, 0.0});
        r.statistic = 0.0;
        r.verdict = Verdict::pass;
        r.notes.push_back(kernel.moments().beta == 0.0
                              ? "beta = 0: D_n == 0, trivial branch"
                              : "single-rate kernel matches its damped-wave reference: D_n == 0");
        return r;
    }
    if (modes.size() < 4)
        throw Error(ErrorKind::invalid_argument, "perturbation slope needs at least 4 mode indices");

    LineQuadrature line = quad;
    line.eps = 0.0;
    std::vector<LineNorm> norms(modes.size());
    parallel_for(modes.size(), jobs, [&](std::size_t i) {
        norms[i] = weighted_line_norm(kernel, modes[i], SymbolKind::D, s, line);
    });

    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        lx.push_back(std::log(double(modes[i])));
        ly.push_back(std::log(norms[i].total));
        r.series["tail_estimate"].push_back({double(modes[i]), norms[i].tail_estimate, 0.0});
        for (const auto& w : norms[i].warnings)
            r.notes.push_back("n=" + std::to_string(modes[i]) + ": " + w);
    }
    double intercept = 0.0;
    const double slope = least_squares_slope(lx, ly, &intercept);
    for (std::size_t i = 0; i < modes.size(); ++i)
        r.per_n.push_back({double(modes[i]), norms[i].total, std::exp(intercept + slope * lx[i])});
    r.statistic = slope;
    r.details["intercept"] = intercept;
    r.verdict = std::abs(slope - (s - 1.0)) <= tol.slope_tol ? Verdict::pass : Verdict::fail;

    if (corollary) {
        const auto& m = kernel.moments();
        const double ref_alpha = std::sqrt(m.alpha);
        const double ref_damping = m.beta / m.alpha;
        const std::size_t count = corollary->xi.size();
        std::vector<NormValue> value_norms(count), rate_norms(count);
        std::vector<int> idx(count);
        parallel_for(count, jobs, [&](std::size_t i) {
            const int n = static_cast<int>(i) + 1;
            idx[i] = n;
            const double xi = corollary->xi[i];
            const auto full = solve_mode(kernel, n, xi, ModeForcing{}, corollary->grid, corollary->method);
            const auto ref = reference_mode(ReferenceKind::damped_wave, ref_alpha, ref_damping, n, xi,
                                            corollary->grid);
            std::vector<double> dv(full.theta.size()), dr(full.theta.size());
            for (std::size_t j = 0; j < dv.size(); ++j) {
                dv[j] = full.theta[j] - ref.theta[j];
                dr[j] = full.theta_dot[j] - ref.theta_dot[j];
            }
            value_norms[i] = weighted_time_norm(dv, corollary->grid, corollary->eps);
            rate_norms[i] = weighted_time_norm(dr, corollary->grid, corollary->eps);
        });
        const NormValue v = combine_mode_norms(idx, value_norms, s + 1.0);
        const NormValue d = combine_mode_norms(idx, rate_norms, s);
        r.details["corollary_value_norm_grid"] = v.grid_part;
        r.details["corollary_value_norm_tail"] = v.tail_estimate;
        r.details["corollary_value_norm"] = v.total;
        r.details["corollary_rate_norm_grid"] = d.grid_part;
        r.details["corollary_rate_norm_tail"] = d.tail_estimate;
        r.details["corollary_rate_norm"] = d.total;
        if (!std::isfinite(v.total) || !std::isfinite(d.total)) {
            r.verdict = Verdict::fail;
            r.notes.push_back("corollary norms of theta - theta0 are not finite");
        }
    }
    return r;
}

// ---------------------------------------------------------------------------

namespace {

NormValue forcing_norm(const Scenario& sc, double s, double eps, bool derivative)
{
    std::vector<int> idx;
    std::vector<NormValue> norms;
    for (const auto& [n, rule] : sc.forcing.modes) {
        if (rule.is_zero())
            continue;
        const auto sampled = rule.on_grid(sc.grid);
        if (derivative && sampled.derivative.empty())
            throw Error(ErrorKind::unknown_forcing,
                        "mode " + std::to_string(n) + " forcing has no closed-form time derivative");
        idx.push_back(n);
        norms.push_back(weighted_time_norm(derivative ? sampled.derivative : sampled.value, sc.grid, eps));
    }
    return combine_mode_norms(idx, norms, s);
}

std::vector<NormValue> mode_norms(const Field& field, double eps, bool derivative)
{
    std::vector<NormValue> out;
    for (const auto& m : field.modes)
        out.push_back(mode_weighted_norm(m, eps, derivative));
    return out;
}

Report batch_report(const std::string& name, const std::vector<Scenario>& batch,
                    const std::vector<RatioMeasurement>& ratios, const VerifyTolerances& tol)
{
    Report r;
    r.check_name = name;
    r.tolerance = tol.trend_factor;
    std::map<int, double> by_size;
    std::string digest;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        digest += (i ? "," : "") + batch[i].digest();
        const double st = ratios[i].statistic;
        r.series["members"].push_back({double(batch[i].N), st, nan_value});
        if (!std::isfinite(st))
            continue;
        auto [it, fresh] = by_size.emplace(batch[i].N, st);
        if (!fresh)
            it->second = std::max(it->second, st);
    }
    r.inputs_digest = hex_digest(digest);
    if (by_size.size() < 2) {
        for (const auto& [n, v] : by_size)
            r.per_n.push_back({double(n), v, nan_value});
        r.statistic = nan_value;
        r.verdict = Verdict::inconclusive;
        r.notes.push_back("fewer than two mode counts with a finite ratio: no trend measurable");
        return r;
    }
    const double first = by_size.begin()->second;
    const double last = by_size.rbegin()->second;
    for (const auto& [n, v] : by_size)
        r.per_n.push_back({double(n), v, tol.trend_factor * first});
    r.statistic = last / first;
    r.details["smallest_N_ratio"] = first;
    r.details["largest_N_ratio"] = last;
    r.verdict = r.statistic <= tol.trend_factor ? Verdict::pass : Verdict::fail;
    return r;
}

Report single_report(const std::string& name, const Scenario& sc, const RatioMeasurement& m)
{
    Report r;
    r.check_name = name;
    r.inputs_digest = sc.digest();
    r.per_n = m.partial;
    r.statistic = m.statistic;
    r.details["numerator"] = m.numerator;
    r.details["denominator"] = m.denominator;
    r.tolerance = std::numeric_limits<double>::infinity();
    if (!std::isfinite(m.statistic)) {
        r.verdict = Verdict::inconclusive;
        r.notes.push_back(m.denominator == 0.0 ? "zero data and forcing: ratio undefined"
                                               : "ratio not finite");
    } else {
        r.verdict = Verdict::pass;
        r.notes.push_back("single scenario: boundedness means a finite ratio; use a batch for trends");
    }
    return r;
}

template <class Measure>
std::vector<RatioMeasurement> measure_all(const std::vector<Scenario>& batch, Measure measure)
{
    std::vector<RatioMeasurement> out;
    out.reserve(batch.size());
    for (const auto& sc : batch)
        out.push_back(measure(sc));
    return out;
}

} // namespace

RatioMeasurement regularity_ratio(const Scenario& scenario, unsigned jobs)
{
    if (!(scenario.eps > 0.0))
        throw Error(ErrorKind::invalid_argument, "regularity check needs eps > 0");
    const Field field = solve_field(scenario, jobs);
    const auto norms = mode_norms(field, scenario.eps, false);
    const double s = scenario.s;

    RatioMeasurement m;
    const NormValue forcing = forcing_norm(scenario, s, scenario.eps, false);
    double num2 = 0.0, xi2 = 0.0;
    for (std::size_t i = 0; i < norms.size(); ++i) {
        const double w = std::pow(double(field.modes[i].n), 2.0 * s);
        num2 += w * norms[i].total * norms[i].total;
        xi2 += w * scenario.xi[i] * scenario.xi[i];
        m.partial.push_back({double(field.modes[i].n), std::sqrt(num2), std::sqrt(xi2)});
    }
    m.numerator = std::sqrt(num2);
    m.denominator = std::sqrt(xi2) + forcing.total;
    m.statistic = m.denominator > 0.0 ? m.numerator / m.denominator : nan_value;
    return m;
}

Report check_regularity(const Scenario& scenario, const VerifyTolerances&, unsigned jobs)
{
    return single_report("regularity", scenario, regularity_ratio(scenario, jobs));
}

Report check_regularity(const std::vector<Scenario>& batch, const VerifyTolerances& tol, unsigned jobs)
{
    if (batch.empty())
        throw Error(ErrorKind::invalid_argument, "empty scenario batch");
    const auto ratios = measure_all(batch, [&](const Scenario& sc) { return regularity_ratio(sc, jobs); });
    return batch_report("regularity", batch, ratios, tol);
}

RatioMeasurement strong_ratio(const Scenario& scenario, StrongVariant variant, unsigned jobs)
{
    if (!(scenario.eps > 0.0))
        throw Error(ErrorKind::invalid_argument, "strong estimate needs eps > 0");
    if (variant == StrongVariant::VV && !(scenario.eps > scenario.forcing_weight))
        throw Error(ErrorKind::config_error, "VV estimate needs eps > forcing_weight");
    for (const auto& [n, rule] : scenario.forcing.modes)
        if (std::abs(rule.at_zero()) > 1e-12)
            throw Error(ErrorKind::invalid_argument,
                        "strong estimates need f(x,0) = 0 (mode " + std::to_string(n) + ")");

    const Field field = solve_field(scenario, jobs);
    const NormValue rate = field_norm(field, 0.0, scenario.eps, true);
    const NormValue value = field_norm(field, 2.0, scenario.eps, false);
    const double forcing_s = variant == StrongVariant::VV ? 1.0 : 0.0;
    const NormValue forcing = forcing_norm(scenario, forcing_s, scenario.eps, true);
    const double xi_norm = seq_norm(scenario.xi, 2.0);

    RatioMeasurement m;
    double rate2 = 0.0, value2 = 0.0;
    for (const auto& mode : field.modes) {
        const double r = mode_weighted_norm(mode, scenario.eps, true).total;
        const double v = mode_weighted_norm(mode, scenario.eps, false).total;
        rate2 += r * r;
        value2 += std::pow(double(mode.n), 4.0) * v * v;
        m.partial.push_back({double(mode.n), std::sqrt(rate2) + std::sqrt(value2), nan_value});
    }
    m.numerator = rate.total + value.total;
    m.denominator = forcing.total + xi_norm;
    m.statistic = m.denominator > 0.0 ? m.numerator / m.denominator : nan_value;
    return m;
}

Report check_strong(const Scenario& scenario, StrongVariant variant, const VerifyTolerances&, unsigned jobs)
{
    const char* name = variant == StrongVariant::VV ? "strong_VV" : "strong";
    return single_report(name, scenario, strong_ratio(scenario, variant, jobs));
}

Report check_strong(const std::vector<Scenario>& batch, StrongVariant variant, const VerifyTolerances& tol,
                    unsigned jobs)
{
    if (batch.empty())
        throw Error(ErrorKind::invalid_argument, "empty scenario batch");
    const auto ratios =
        measure_all(batch, [&](const Scenario& sc) { return strong_ratio(sc, variant, jobs); });
    return batch_report(variant == StrongVariant::VV ? "strong_VV" : "strong", batch, ratios, tol);
}

// ---------------------------------------------------------------------------

std::vector<complex> geometric_ray(double from, double to, std::size_t points, double angle)
{
    if (!(from > 0.0) || !(to > from) || points < 2)
        throw Error(ErrorKind::invalid_argument, "geometric ray needs 0 < from < to and >= 2 points");
    std::vector<complex> out;
    const double ratio = std::log(to / from) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i)
        out.push_back(std::polar(from * std::exp(ratio * static_cast<double>(i)), angle));
    return out;
}

Report check_asymptotics(const Kernel& kernel, const std::vector<complex>& z_grid,
                         const std::vector<int>& orders)
{
    if (z_grid.empty())
        throw Error(ErrorKind::invalid_argument, "asymptotics check needs a nonempty z grid");
    if (orders.empty())
        throw Error(ErrorKind::invalid_argument, "asymptotics check needs at least one order");
    for (const auto& z : z_grid)
        if (std::abs(std::arg(z)) > 0.5 * std::numbers::pi + 1e-12)
            throw Error(ErrorKind::ray_angle, "asymptotics grid must satisfy |arg z| <= pi/2");

    Report r;
    r.check_name = "asymptotics";
    r.inputs_digest = kernel_digest(kernel);
    r.tolerance = 1.0;

    double z_top = 0.0;
    for (const auto& z : z_grid)
        z_top = std::max(z_top, std::abs(z));
    const double window = z_top / 1e3;

    double worst = 0.0;
    bool all_decreasing = true;
    for (int order : orders) {
        if (order < 1 || order > 3)
            throw Error(ErrorKind::invalid_argument, "asymptotic orders must be in {1,2,3}");
        auto& series = r.series["order" + std::to_string(order)];
        double prev = nan_value, first_in_window = nan_value, last = 0.0;
        for (const auto& z : z_grid) {
            const auto res = asymptotic_residual(kernel, z, order);
            const double scaled = std::abs(std::pow(z, order) * res.value);
            series.push_back({std::abs(z), scaled, nan_value});
            r.details["scale"] = res.scale;
            if (std::abs(z) < window)
                continue;
            if (std::isnan(first_in_window))
                first_in_window = scaled;
            if (!std::isnan(prev)) {
                if (scaled > prev)
                    all_decreasing = false;
                if (prev > 0.0)
                    worst = std::max(worst, scaled / prev);
            }
            prev = scaled;
            last = scaled;
        }
        r.per_n.push_back({double(order), last, first_in_window});
    }
    r.statistic = worst;
    r.verdict = all_decreasing ? Verdict::pass : Verdict::fail;
    return r;
}

// ---------------------------------------------------------------------------

Report check_continuity(const Field& field, double s, double t, std::size_t max_steps,
                        std::size_t min_steps, const VerifyTolerances& tol)
{
    if (field.modes.empty())
        throw Error(ErrorKind::invalid_argument, "continuity check needs a nonempty field");
    if (min_steps < 1 || max_steps < 2 * min_steps)
        throw Error(ErrorKind::invalid_argument, "continuity check needs max_steps >= 2 min_steps >= 2");

    const double step = field.modes.front().grid.step();
    Report r;
    r.check_name = "continuity";
    r.inputs_digest = kernel_digest(field.kernel) + " N=" + std::to_string(field.modes.size());
    r.tolerance = tol.continuity_factor;
    r.details["s"] = s;
    r.details["t"] = t;

    double prev = nan_value, worst = 0.0;
    for (std::size_t steps = max_steps; steps >= min_steps; steps /= 2) {
        const double modulus = continuity_modulus(field, s, t, static_cast<double>(steps) * step);
        r.per_n.push_back({double(steps), modulus, std::isnan(prev) ? nan_value : tol.continuity_factor * prev});
        if (!std::isnan(prev))
            worst = std::max(worst, prev > 0.0 ? modulus / prev : (modulus > 0.0 ? 1.0 : 0.0));
        prev = modulus;
        if (steps == min_steps || steps % 2 != 0)
            break;
    }
    if (r.per_n.size() < 2) {
        r.statistic = nan_value;
        r.verdict = Verdict::inconclusive;
        return r;
    }
    r.statistic = worst;
    r.details["final_modulus"] = prev;
    r.verdict = worst <= tol.continuity_factor ? Verdict::pass : Verdict::fail;
    return r;
}

// ---------------------------------------------------------------------------

Report check_sharpness(int n, double eps, const std::vector<double>& horizons, double step,
                       double slope_rel_tol, double increment_tol)
{
    if (horizons.size() < 2)
        throw Error(ErrorKind::invalid_argument, "sharpness check needs at least two horizons");
    std::vector<double> T = horizons;
    std::sort(T.begin(), T.end());
    const TimeGrid grid = TimeGrid::make(T.back(), step);
    const Kernel wave({1.0}, {0.0});
    const auto mode = solve_mode(wave, n, 1.0, ModeForcing{}, grid, SolveMethod::ode);

    // running trapezoidal integrals of theta^2 and e^{-2 eps t} theta^2
    std::vector<double> plain(grid.points(), 0.0), weighted(grid.points(), 0.0);
    for (std::size_t j = 1; j < grid.points(); ++j) {
        const double a = mode.theta[j - 1] * mode.theta[j - 1];
        const double b = mode.theta[j] * mode.theta[j];
        plain[j] = plain[j - 1] + 0.5 * step * (a + b);
        weighted[j] = weighted[j - 1] + 0.5 * step *
                                            (std::exp(-2.0 * eps * grid.time(j - 1)) * a +
                                             std::exp(-2.0 * eps * grid.time(j)) * b);
    }

    Report r;
    r.check_name = "sharpness";
    r.inputs_digest = "wave kernel n=" + std::to_string(n) + " eps=" + std::to_string(eps);
    r.tolerance = slope_rel_tol;
    std::vector<double> xs, ys;
    for (double h : T) {
        const std::size_t j = grid.index_of(h);
        xs.push_back(h);
        ys.push_back(plain[j]);
        r.per_n.push_back({h, plain[j], 0.5 * h});
        r.series["weighted"].push_back({h, weighted[j], nan_value});
    }
    const double slope = least_squares_slope(xs, ys);
    const double tenth = T.back() / 10.0;
    const auto lower = std::lower_bound(T.begin(), T.end(), tenth);
    const std::size_t j_low = grid.index_of(lower == T.end() ? T.front() : *lower);
    const double increment = weighted.back() - weighted[j_low];
    r.statistic = slope;
    r.details["target_slope"] = 0.5;
    r.details["weighted_increment_last_decade"] = increment;
    r.details["increment_tol"] = increment_tol;
    const bool slope_ok = std::abs(slope - 0.5) <= slope_rel_tol * 0.5;
    const bool settles = std::abs(increment) <= increment_tol;
    r.verdict = slope_ok && settles ? Verdict::pass : Verdict::fail;
    return r;
}

// ---------------------------------------------------------------------------

double SeededRandom::uniform(double lo, double hi)
{
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

int SeededRandom::integer(int lo, int hi)
{
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(engine_() % span);
}

Kernel random_kernel(SeededRandom& rng, std::size_t max_terms, double max_rate)
{
    const int m = rng.integer(1, static_cast<int>(max_terms));
    std::vector<double> a(m), b(m);
    for (auto& v : a)
        v = rng.uniform(0.1, 1.0);
    for (auto& v : b)
        v = rng.uniform(0.0, max_rate);
    std::sort(b.begin(), b.end());
    for (int k = 1; k < m; ++k)
        if (b[k] <= b[k - 1])
            b[k] = b[k - 1] + 1e-3;
    return Kernel(std::move(a), std::move(b));
}

std::vector<Scenario> make_scenario_batch(const BatchSpec& spec)
{
    SeededRandom rng(spec.seed);
    struct Member {
        Kernel kernel;
        std::vector<double> signs;
        double scale;
        int forced_mode;
        DampedSinusoid forcing;
    };
    const int n_max = spec.sizes.empty() ? 1 : *std::max_element(spec.sizes.begin(), spec.sizes.end());
    std::vector<Member> members;
    for (std::size_t i = 0; i < spec.members; ++i) {
        Kernel k = random_kernel(rng, 4);
        std::vector<double> signs(n_max);
        for (auto& v : signs)
            v = rng.uniform(-1.0, 1.0);
        const double scale = rng.uniform(0.5, 2.0);
        const int forced = rng.integer(1, 8);
        DampedSinusoid f{rng.uniform(0.5, 2.0), rng.uniform(0.1, 1.0), rng.uniform(0.5, 6.0),
                         Oscillation::sin};
        members.push_back({std::move(k), std::move(signs), scale, forced, f});
    }

    const TimeGrid grid = TimeGrid::make(spec.t_end, spec.step);
    std::vector<Scenario> out;
    for (int N : spec.sizes) {
        for (const auto& m : members) {
            std::vector<double> xi(N);
            for (int n = 1; n <= N; ++n)
                xi[n - 1] = m.scale * m.signs[n - 1] * std::pow(double(n), -spec.xi_decay);
            Scenario sc(m.kernel, N, std::move(xi), grid);
            sc.eps = spec.eps;
            sc.s = spec.s;
            sc.method = spec.method;
            if (spec.with_forcing && m.forced_mode <= N)
                sc.forcing.modes[m.forced_mode] = ModeForcing::from_terms({m.forcing});
            out.push_back(std::move(sc));
        }
    }
    return out;
}

} // namespace memoheat
