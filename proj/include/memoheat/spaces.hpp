#ifndef MEMOHEAT_SPACES_HPP
#define MEMOHEAT_SPACES_HPP

#include <span>
#include <vector>

#include "memoheat/modes.hpp"

namespace memoheat {

// Fourier-sine coefficients c_1..c_N; entry i belongs to mode n = i + 1.
using CoeffSeq = std::vector<double>;

// Infinite-horizon norm split into what the grid resolves and an explicit
// estimate of what lies beyond t_end.
struct NormValue {
    double grid_part = 0.0;
    double tail_estimate = 0.0;
    double total = 0.0;

    static NormValue make(double grid_part, double tail_estimate);
};

// (sum |c_n|^2 n^(2s))^(1/2)
double seq_norm(std::span<const double> seq, double s);

// (int_0^inf exp(-2 eps t) |g|^2 dt)^(1/2) for g sampled on the grid, by the
// trapezoidal rule on [0, T]; the tail beyond T is bounded by
// exp(-2 eps T) (max over the last 10% of |g|)^2 / (2 eps).
NormValue weighted_time_norm(std::span<const double> values, const TimeGrid& grid, double eps);

NormValue mode_weighted_norm(const ModeTrajectory& traj, double eps, bool use_derivative);

// (sum n^(2s) |mode norm|^2)^(1/2), grid and tail parts aggregated separately.
NormValue field_norm(const Field& field, double s, double eps, bool use_derivative);

// Weighted aggregation of per-mode norms (index i -> n = modes[i]).
NormValue combine_mode_norms(std::span<const int> modes, std::span<const NormValue> norms, double s);

// || theta(., t + delta) - theta(., t) ||_{H_s}
double continuity_modulus(const Field& field, double s, double t, double delta);

} // namespace memoheat

#endif
