#ifndef MEMOHEAT_MODES_HPP
#define MEMOHEAT_MODES_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "memoheat/kernel.hpp"

namespace memoheat {

// Uniform grid t_j = j * step, j = 0..count, with count * step == t_end to
// within one ulp of t_end.
class TimeGrid {
public:
    static TimeGrid make(double t_end, double step);

    double t_end() const noexcept { return t_end_; }
    double step() const noexcept { return step_; }
    std::size_t count() const noexcept { return count_; }
    std::size_t points() const noexcept { return count_ + 1; }
    double time(std::size_t j) const noexcept { return static_cast<double>(j) * step_; }

    // Index of t on the grid; throws off_grid otherwise.
    std::size_t index_of(double t) const;

private:
    TimeGrid(double t_end, double step, std::size_t count)
        : t_end_(t_end), step_(step), count_(count) {}

    double t_end_;
    double step_;
    std::size_t count_;
};

enum class Oscillation { cos, sin };

// c * exp(-lambda t) * cos(omega t)  or  c * exp(-lambda t) * sin(omega t)
struct DampedSinusoid {
    double c = 0.0;
    double lambda = 0.0;
    double omega = 0.0;
    Oscillation shape = Oscillation::sin;

    double value(double t) const;
    double derivative(double t) const;
    double integral(double t) const;  // int_0^t, exact
};

// Forcing values of one mode sampled on a grid.
struct SampledForcing {
    std::vector<double> value;
    std::vector<double> integral;    // int_0^{t_j} f
    std::vector<double> derivative;  // empty when no closed form exists
};

// Forcing rule f_n(t) of a single mode: zero, a sum of damped sinusoids,
// or values sampled on the solve grid.
class ModeForcing {
public:
    ModeForcing() = default;
    static ModeForcing from_terms(std::vector<DampedSinusoid> terms);
    static ModeForcing from_samples(std::vector<double> samples);

    bool is_zero() const noexcept { return terms_.empty() && samples_.empty(); }
    bool is_sampled() const noexcept { return !samples_.empty(); }
    const std::vector<DampedSinusoid>& terms() const noexcept { return terms_; }
    const std::vector<double>& samples() const noexcept { return samples_; }

    double at_zero() const;

    // Sampled rules must have exactly grid.points() values (unknown_forcing
    // otherwise) and are integrated by the trapezoidal rule.
    SampledForcing on_grid(const TimeGrid& grid) const;

private:
    std::vector<DampedSinusoid> terms_;
    std::vector<double> samples_;
};

// Modal forcing f(x,t) = sum f_n(t) phi_n(x); modes not listed are zero.
struct Forcing {
    std::map<int, ModeForcing> modes;

    const ModeForcing& mode(int n) const;
    bool is_zero() const;
};

enum class SolveMethod { ode, volterra };

struct ModeTrajectory {
    int n = 1;
    double xi = 0.0;
    TimeGrid grid = TimeGrid::make(1.0, 1.0);
    std::vector<double> theta;
    std::vector<double> theta_dot;
    // Convolution states w_k(t) = int_0^t exp(-b_k (t-s)) theta(s) ds, one
    // row per kernel term.  Empty for closed-form reference modes.
    std::vector<std::vector<double>> aux;
    // n * alpha * step; full accuracy is expected at or below 0.5.
    double step_certificate = 0.0;

    bool certified() const noexcept { return step_certificate <= 0.5; }
};

// Solves theta' = -n^2 int_0^t k(t-s) theta(s) ds + f_n, theta(0) = xi.
//
// ode:      implicit trapezoidal rule on the augmented linear system
//           theta' = -n^2 sum a_k w_k + f_n,  w_k' = theta - b_k w_k.
// volterra: product-trapezoidal rule on the integrated form
//           theta = -n^2 int_0^t q(t-s) theta(s) ds + int_0^t f_n + xi,
//           with q integrated exactly against the piecewise-linear
//           interpolant of theta.
//
// Both paths fill theta_dot from theta' = -n^2 sum a_k w_k + f_n.
ModeTrajectory solve_mode(const Kernel& kernel, int n, double xi, const ModeForcing& forcing,
                          const TimeGrid& grid, SolveMethod method);

enum class ReferenceKind { wave, damped_wave };

// Closed-form solution of theta'' + b theta' + alpha^2 n^2 theta = 0 with
// theta(0) = xi, theta'(0) = 0 (b is ignored for kind = wave).
ModeTrajectory reference_mode(ReferenceKind kind, double alpha, double b, int n, double xi,
                              const TimeGrid& grid);

struct Field {
    Kernel kernel;
    std::vector<ModeTrajectory> modes;  // sorted by n, distinct

    const ModeTrajectory* find(int n) const;
};

inline constexpr double basis_constant = 0.79788456080286535588;  // sqrt(2/pi)

// sum_n theta_n(t) sqrt(2/pi) sin(n x)
double eval_field(const Field& field, double x, double t);

struct Scenario;

// Solves modes 1..N of the scenario, fanned out over `jobs` workers.  The
// result does not depend on `jobs`.
Field solve_field(const Scenario& scenario, unsigned jobs = 1);

} // namespace memoheat

#endif
