#include "memoheat/spaces.hpp"

#include <algorithm>
#include <cmath>

namespace memoheat {

NormValue NormValue::make(double grid_part, double tail_estimate)
{
    return {grid_part, tail_estimate, std::hypot(grid_part, tail_estimate)};
}

double seq_norm(std::span<const double> seq, double s)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (seq[i] == 0.0)
            continue;
        const double n = static_cast<double>(i + 1);
        sum += seq[i] * seq[i] * std::pow(n, 2.0 * s);
    }
    return std::sqrt(sum);
}

NormValue weighted_time_norm(std::span<const double> values, const TimeGrid& grid, double eps)
{
    if (!(eps > 0.0))
        throw Error(ErrorKind::invalid_argument, "weight exponent eps must be positive");
    if (values.size() != grid.points())
        throw Error(ErrorKind::invalid_argument, "sample count does not match the grid");

    const double h = grid.step();
    const double decay = std::exp(-2.0 * eps * h);
    double weight = 1.0;
    double sum = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) {
        const double term = weight * values[j] * values[j];
        sum += (j == 0 || j + 1 == values.size()) ? 0.5 * term : term;
        weight *= decay;
    }
    sum *= h;

    const std::size_t tail_begin = values.size() - std::max<std::size_t>(1, values.size() / 10);
    double peak = 0.0;
    for (std::size_t j = tail_begin; j < values.size(); ++j)
        peak = std::max(peak, std::abs(values[j]));
    const double tail = std::exp(-2.0 * eps * grid.t_end()) * peak * peak / (2.0 * eps);
    return NormValue::make(std::sqrt(sum), std::sqrt(tail));
}

NormValue mode_weighted_norm(const ModeTrajectory& traj, double eps, bool use_derivative)
{
    return weighted_time_norm(use_derivative ? traj.theta_dot : traj.theta, traj.grid, eps);
}

NormValue combine_mode_norms(std::span<const int> modes, std::span<const NormValue> norms, double s)
{
    double grid = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < norms.size(); ++i) {
        const double w = std::pow(static_cast<double>(modes[i]), 2.0 * s);
        grid += w * norms[i].grid_part * norms[i].grid_part;
        tail += w * norms[i].tail_estimate * norms[i].tail_estimate;
    }
    return NormValue::make(std::sqrt(grid), std::sqrt(tail));
}

NormValue field_norm(const Field& field, double s, double eps, bool use_derivative)
{
    std::vector<int> modes;
    std::vector<NormValue> norms;
    modes.reserve(field.modes.size());
    norms.reserve(field.modes.size());
    for (const auto& m : field.modes) {
        modes.push_back(m.n);
        norms.push_back(mode_weighted_norm(m, eps, use_derivative));
    }
    return combine_mode_norms(modes, norms, s);
}

double continuity_modulus(const Field& field, double s, double t, double delta)
{
    double sum = 0.0;
    for (const auto& m : field.modes) {
        const std::size_t j0 = m.grid.index_of(t);
        const std::size_t j1 = m.grid.index_of(t + delta);
        const double d = m.theta[j1] - m.theta[j0];
        sum += d * d * std::pow(static_cast<double>(m.n), 2.0 * s);
    }
    return std::sqrt(sum);
}

} // namespace memoheat
