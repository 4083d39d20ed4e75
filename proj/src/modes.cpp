#include "memoheat/modes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "memoheat/parallel.hpp"
#include "memoheat/scenario.hpp"

namespace memoheat {

TimeGrid TimeGrid::make(double t_end, double step)
{
    if (!(t_end > 0.0) || !std::isfinite(t_end))
        throw Error(ErrorKind::invalid_grid, "grid t_end must be positive and finite");
    if (!(step > 0.0) || step > t_end)
        throw Error(ErrorKind::invalid_grid, "grid step must be in (0, t_end]");
    const double ratio = std::round(t_end / step);
    if (ratio > 1e9)
        throw Error(ErrorKind::invalid_grid, "grid has more than 1e9 steps");
    const auto count = static_cast<std::size_t>(ratio);
    const double ulp = std::nextafter(t_end, std::numeric_limits<double>::infinity()) - t_end;
    if (std::abs(ratio * step - t_end) > ulp) {
        std::ostringstream os;
        os.precision(17);
        os << "grid step " << step << " does not divide t_end " << t_end;
        throw Error(ErrorKind::invalid_grid, os.str());
    }
    return TimeGrid(t_end, step, count);
}

std::size_t TimeGrid::index_of(double t) const
{
    const double r = std::round(t / step_);
    if (r < 0.0 || r > static_cast<double>(count_) || std::abs(r * step_ - t) > 1e-9 * step_) {
        std::ostringstream os;
        os.precision(17);
        os << "time " << t << " is not on the grid (step " << step_ << ", t_end " << t_end_ << ")";
        throw Error(ErrorKind::off_grid, os.str());
    }
    return static_cast<std::size_t>(r);
}

namespace {

complex exponent_of(const DampedSinusoid& d)
{
    return {-d.lambda, d.omega};
}

double pick(const DampedSinusoid& d, complex v)
{
    return d.shape == Oscillation::cos ? v.real() : v.imag();
}

// (exp(mu t) - 1) / mu, continuous at mu = 0.
complex phi1(complex mu, double t)
{
    const complex x = mu * t;
    if (std::abs(x) < 1e-3) {
        // t (1 + x/2 + x^2/6 + x^3/24 + x^4/120)
        return t * (1.0 + x * (0.5 + x * (1.0 / 6.0 + x * (1.0 / 24.0 + x / 120.0))));
    }
    return (std::exp(x) - 1.0) / mu;
}

} // namespace

double DampedSinusoid::value(double t) const
{
    return c * pick(*this, std::exp(exponent_of(*this) * t));
}

double DampedSinusoid::derivative(double t) const
{
    const complex mu = exponent_of(*this);
    return c * pick(*this, mu * std::exp(mu * t));
}

double DampedSinusoid::integral(double t) const
{
    return c * pick(*this, phi1(exponent_of(*this), t));
}

ModeForcing ModeForcing::from_terms(std::vector<DampedSinusoid> terms)
{
    ModeForcing f;
    f.terms_ = std::move(terms);
    return f;
}

ModeForcing ModeForcing::from_samples(std::vector<double> samples)
{
    if (samples.empty())
        throw Error(ErrorKind::unknown_forcing, "sampled forcing needs at least one value");
    ModeForcing f;
    f.samples_ = std::move(samples);
    return f;
}

double ModeForcing::at_zero() const
{
    if (is_sampled())
        return samples_.front();
    double v = 0.0;
    for (const auto& t : terms_)
        v += t.value(0.0);
    return v;
}

SampledForcing ModeForcing::on_grid(const TimeGrid& grid) const
{
    const std::size_t points = grid.points();
    SampledForcing out;
    out.value.assign(points, 0.0);
    out.integral.assign(points, 0.0);
    if (is_sampled()) {
        if (samples_.size() != points)
            throw Error(ErrorKind::unknown_forcing,
                        "sampled forcing has " + std::to_string(samples_.size()) +
                            " values, grid has " + std::to_string(points) + " points");
        out.value = samples_;
        for (std::size_t j = 1; j < points; ++j)
            out.integral[j] = out.integral[j - 1] + 0.5 * grid.step() * (samples_[j - 1] + samples_[j]);
        return out;
    }
    out.derivative.assign(points, 0.0);
    for (const auto& term : terms_) {
        for (std::size_t j = 0; j < points; ++j) {
            const double t = grid.time(j);
            out.value[j] += term.value(t);
            out.integral[j] += term.integral(t);
            out.derivative[j] += term.derivative(t);
        }
    }
    return out;
}

const ModeForcing& Forcing::mode(int n) const
{
    static const ModeForcing zero;
    const auto it = modes.find(n);
    return it == modes.end() ? zero : it->second;
}

bool Forcing::is_zero() const
{
    return std::all_of(modes.begin(), modes.end(),
                       [](const auto& kv) { return kv.second.is_zero(); });
}

namespace {

// Exact step integrals of the piecewise-linear interpolant against
// exp(-b v) and Q(v) = (1 - exp(-b v))/b over one step of length h.
struct StepWeights {
    double decay = 1.0;  // exp(-b h)
    double qh = 0.0;     // Q(h)
    double w_prev = 0.0, w_next = 0.0;  // exp(-b v) weights
    double v_prev = 0.0, v_next = 0.0;  // Q(v) weights
};

StepWeights step_weights(double b, double h)
{
    StepWeights w;
    const double x = b * h;
    w.decay = std::exp(-x);
    w.qh = b == 0.0 ? h : -std::expm1(-x) / b;
    if (x < 0.25) {
        // Taylor series in x; 30 terms leave < 1e-40 relative truncation.
        double power = 1.0;  // (-x)^m / m!
        for (int m = 0; m < 30; ++m) {
            const double md = m;
            w.w_prev += power / (md + 2.0);
            w.w_next += power / ((md + 1.0) * (md + 2.0));
            // v-series use index m+1 with (-x)^m/(m+1)!
            const double pv = power / (md + 1.0);
            w.v_prev += pv / (md + 3.0);
            w.v_next += pv / ((md + 2.0) * (md + 3.0));
            power *= -x / (md + 1.0);
        }
        w.w_prev *= h;
        w.w_next *= h;
        w.v_prev *= h * h;
        w.v_next *= h * h;
        return w;
    }
    const double e = std::exp(-x);
    const double one_minus_e = -std::expm1(-x);
    const double g = 1.0 - e * (1.0 + x);
    w.w_prev = h * g / (x * x);
    w.w_next = h * one_minus_e / x - w.w_prev;
    w.v_prev = h * h * (0.5 / x - g / (x * x * x));
    const double q_integral = h * h * (x - one_minus_e) / (x * x);
    w.v_next = q_integral - w.v_prev;
    return w;
}

ModeTrajectory empty_trajectory(const Kernel& kernel, int n, double xi, const TimeGrid& grid)
{
    ModeTrajectory tr;
    tr.n = n;
    tr.xi = xi;
    tr.grid = grid;
    tr.theta.assign(grid.points(), 0.0);
    tr.theta_dot.assign(grid.points(), 0.0);
    tr.aux.assign(kernel.size(), std::vector<double>(grid.points(), 0.0));
    tr.step_certificate = n * kernel.moments().alpha * grid.step();
    return tr;
}

void fill_theta_dot(const Kernel& kernel, ModeTrajectory& tr, const SampledForcing& f)
{
    const double n2 = static_cast<double>(tr.n) * tr.n;
    const auto a = kernel.amplitudes();
    for (std::size_t j = 0; j < tr.theta.size(); ++j) {
        double conv = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k)
            conv += a[k] * tr.aux[k][j];
        tr.theta_dot[j] = -n2 * conv + f.value[j];
    }
}

void solve_trapezoidal(const Kernel& kernel, ModeTrajectory& tr, const SampledForcing& f)
{
    const double h = tr.grid.step();
    const double n2 = static_cast<double>(tr.n) * tr.n;
    const auto a = kernel.amplitudes();
    const auto b = kernel.rates();
    const std::size_t m = a.size();

    // w_k^+ = c_k w_k + d_k (theta + theta^+)
    std::vector<double> c(m), d(m);
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double denom = 1.0 + 0.5 * h * b[k];
        c[k] = (1.0 - 0.5 * h * b[k]) / denom;
        d[k] = 0.5 * h / denom;
        s += a[k] * d[k];
    }
    const double lhs = 1.0 + 0.5 * h * n2 * s;

    std::vector<double> w(m, 0.0);
    double theta = tr.xi;
    tr.theta[0] = theta;
    for (std::size_t j = 0; j + 1 < tr.theta.size(); ++j) {
        double hist = 0.0;
        for (std::size_t k = 0; k < m; ++k)
            hist += a[k] * (1.0 + c[k]) * w[k];
        const double next =
            (theta - 0.5 * h * n2 * (hist + s * theta) + 0.5 * h * (f.value[j] + f.value[j + 1])) / lhs;
        for (std::size_t k = 0; k < m; ++k) {
            w[k] = c[k] * w[k] + d[k] * (theta + next);
            tr.aux[k][j + 1] = w[k];
        }
        theta = next;
        tr.theta[j + 1] = theta;
    }
}

void solve_product_trapezoidal(const Kernel& kernel, ModeTrajectory& tr, const SampledForcing& f)
{
    const double h = tr.grid.step();
    const double n2 = static_cast<double>(tr.n) * tr.n;
    const auto a = kernel.amplitudes();
    const auto b = kernel.rates();
    const std::size_t m = a.size();

    std::vector<StepWeights> wt(m);
    double diag = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        wt[k] = step_weights(b[k], h);
        diag += a[k] * wt[k].v_next;
    }
    const double lhs = 1.0 + n2 * diag;

    // conv_k = int_0^t Q_k(t-s) theta(s) ds,  expo_k = int_0^t e^{-b_k(t-s)} theta(s) ds
    std::vector<double> conv(m, 0.0), expo(m, 0.0);
    double cumulative = 0.0;  // int_0^t theta
    double theta = tr.xi;
    tr.theta[0] = theta;
    for (std::size_t j = 0; j + 1 < tr.theta.size(); ++j) {
        double known = 0.0;
        for (std::size_t k = 0; k < m; ++k)
            known += a[k] * (wt[k].qh * cumulative + wt[k].decay * conv[k] + wt[k].v_prev * theta);
        const double next = (tr.xi + f.integral[j + 1] - n2 * known) / lhs;
        for (std::size_t k = 0; k < m; ++k) {
            conv[k] = wt[k].qh * cumulative + wt[k].decay * conv[k] + wt[k].v_prev * theta +
                      wt[k].v_next * next;
            expo[k] = wt[k].decay * expo[k] + wt[k].w_prev * theta + wt[k].w_next * next;
            tr.aux[k][j + 1] = expo[k];
        }
        cumulative += 0.5 * h * (theta + next);
        theta = next;
        tr.theta[j + 1] = theta;
    }
}

} // namespace

ModeTrajectory solve_mode(const Kernel& kernel, int n, double xi, const ModeForcing& forcing,
                          const TimeGrid& grid, SolveMethod method)
{
    if (n < 1)
        throw Error(ErrorKind::invalid_argument, "mode index must be >= 1");
    if (!std::isfinite(xi))
        throw Error(ErrorKind::invalid_argument, "initial datum must be finite");
    const SampledForcing f = forcing.on_grid(grid);
    ModeTrajectory tr = empty_trajectory(kernel, n, xi, grid);
    if (method == SolveMethod::ode)
        solve_trapezoidal(kernel, tr, f);
    else
        solve_product_trapezoidal(kernel, tr, f);
    fill_theta_dot(kernel, tr, f);
    return tr;
}

ModeTrajectory reference_mode(ReferenceKind kind, double alpha, double b, int n, double xi,
                              const TimeGrid& grid)
{
    if (n < 1)
        throw Error(ErrorKind::invalid_argument, "mode index must be >= 1");
    if (!(alpha > 0.0) || !(b >= 0.0))
        throw Error(ErrorKind::invalid_argument, "reference mode needs alpha > 0 and b >= 0");
    if (kind == ReferenceKind::wave)
        b = 0.0;

    ModeTrajectory tr;
    tr.n = n;
    tr.xi = xi;
    tr.grid = grid;
    tr.theta.resize(grid.points());
    tr.theta_dot.resize(grid.points());
    tr.step_certificate = n * alpha * alpha * grid.step();

    const double stiffness = alpha * alpha * n * n;  // alpha^2 n^2
    const double half = 0.5 * b;
    const double disc = stiffness - half * half;
    for (std::size_t j = 0; j < grid.points(); ++j) {
        const double t = grid.time(j);
        double value, rate;
        if (disc > 0.0) {
            const double omega = std::sqrt(disc);
            const double env = std::exp(-half * t);
            const double cs = std::cos(omega * t), sn = std::sin(omega * t);
            value = env * (cs + half / omega * sn);
            rate = -env * stiffness / omega * sn;
        } else if (disc == 0.0) {
            const double env = std::exp(-half * t);
            value = (1.0 + half * t) * env;
            rate = -half * half * t * env;
        } else {
            const double root = std::sqrt(-disc);
            const double fast = -half - root, slow = -half + root;
            const double ef = std::exp(fast * t), es = std::exp(slow * t);
            value = (slow * ef - fast * es) / (slow - fast);
            rate = slow * fast * (ef - es) / (slow - fast);
        }
        tr.theta[j] = xi * value;
        tr.theta_dot[j] = xi * rate;
    }
    return tr;
}

const ModeTrajectory* Field::find(int n) const
{
    const auto it = std::lower_bound(modes.begin(), modes.end(), n,
                                     [](const ModeTrajectory& m, int v) { return m.n < v; });
    return it != modes.end() && it->n == n ? &*it : nullptr;
}

double eval_field(const Field& field, double x, double t)
{
    if (!(x >= 0.0 && x <= 3.14159265358979323846))
        throw Error(ErrorKind::invalid_argument, "x must lie in [0, pi]");
    if (x == 0.0 || x == 3.14159265358979323846)
        return 0.0;
    double sum = 0.0;
    for (const auto& mode : field.modes) {
        const std::size_t j = mode.grid.index_of(t);
        sum += mode.theta[j] * basis_constant * std::sin(mode.n * x);
    }
    return sum;
}

Field solve_field(const Scenario& scenario, unsigned jobs)
{
    scenario.validate();
    Field field{scenario.kernel, {}};
    field.modes.resize(static_cast<std::size_t>(scenario.N));
    parallel_for(field.modes.size(), jobs, [&](std::size_t i) {
        const int n = static_cast<int>(i) + 1;
        try {
            field.modes[i] = solve_mode(scenario.kernel, n, scenario.xi[i], scenario.forcing.mode(n),
                                        scenario.grid, scenario.method);
        } catch (const Error& e) {
            throw e.with_mode(n);
        }
    });
    return field;
}

} // namespace memoheat
