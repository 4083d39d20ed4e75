#ifndef MEMOHEAT_LAPLACE_HPP
#define MEMOHEAT_LAPLACE_HPP

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "memoheat/kernel.hpp"
#include "memoheat/modes.hpp"

namespace memoheat {

// Modal symbols on the Laplace side.  G0 is the damped-wave reference
// z + n^2 alpha / (z + beta/alpha), which is z + n^2/(z + beta) for alpha = 1;
// Theta is the transfer 1/G for unit datum and zero forcing.
enum class SymbolKind { G, G0, invG, invG0, Theta, D };

const char* to_string(SymbolKind kind) noexcept;
SymbolKind symbol_kind_from_string(const std::string& name);

enum class TailModel { none, power_law };

// Symmetric trapezoidal grid on the line Re z = eps, y in [-y_max, y_max].
// y_max is raised to 4n per mode (with `samples` scaled to keep the spacing).
struct LineQuadrature {
    double eps = 1.0;
    double y_max = 64.0;
    std::size_t samples = 6401;
    TailModel tail_model = TailModel::power_law;

    void validate() const;

    // Grid with roughly the requested spacing.
    static LineQuadrature with_spacing(double eps, double y_max, double spacing,
                                       TailModel tail = TailModel::power_law);
};

complex symbol(const Kernel& kernel, int n, complex z, SymbolKind kind);

complex theta_hat(const Kernel& kernel, int n, double xi, complex F, complex z);

struct LineNorm {
    double grid_part = 0.0;      // sqrt of the trapezoidal integral
    double tail_estimate = 0.0;  // sqrt of the extrapolated |y| > y_max mass
    double total = 0.0;
    double y_max = 0.0;          // effective truncation
    std::size_t samples = 0;     // effective sample count
    std::vector<std::string> warnings;
};

using SymbolFunction = std::function<complex(complex)>;

// (int |eps + iy|^(2s) |g(eps + iy)|^2 dy)^(1/2) for an arbitrary symbol.
// `min_y_max` is the mode-dependent lower bound on the truncation.
LineNorm line_norm(const SymbolFunction& g, double s, const LineQuadrature& quad,
                   double min_y_max = 0.0);

// Admissible s: kind D needs s < 9/2, the transfer kinds s < 1/2; G and G0
// are not square integrable and are rejected.
LineNorm weighted_line_norm(const Kernel& kernel, int n, SymbolKind kind, double s,
                            const LineQuadrature& quad);

struct LineSample {
    double y;
    complex value;
};

std::vector<LineSample> line_scan(const Kernel& kernel, int n, SymbolKind kind,
                                  const LineQuadrature& quad);

struct PlancherelCheck {
    double time_side = 0.0;  // int_0^inf e^{-2 eps t} |theta|^2 dt
    double line_side = 0.0;  // (1/2pi) xi^2 ||1/G_n||^2 on Re z = eps
    double residual = 0.0;   // |time - line| / max(time, line)
};

// Paley-Wiener cross-check of a zero-forcing trajectory.
PlancherelCheck plancherel_residual(const ModeTrajectory& traj, const Kernel& kernel, double eps,
                                    const LineQuadrature& quad);

} // namespace memoheat

#endif
