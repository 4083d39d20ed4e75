#ifndef MEMOHEAT_KERNEL_HPP
#define MEMOHEAT_KERNEL_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "memoheat/error.hpp"

namespace memoheat {

using complex = std::complex<double>;

// Moment sums of an exponential-series kernel.  For a finite series the
// C1-C3 sums are always finite; the C0 sum is +inf as soon as a zero rate
// carries mass.
struct KernelMoments {
    double c0_sum = 0.0;
    double alpha = 0.0;  // sum a_k = k(0)
    double beta = 0.0;   // sum a_k b_k
    double gamma = 0.0;  // sum a_k b_k^2
    bool c0 = false;
    bool c1 = true;
    bool c2 = true;
    bool c3 = true;
};

// Memory kernel k(t) = sum_k a_k exp(-b_k t) with a_k >= 0 and
// 0 <= b_1 < b_2 < ... .  Immutable once built.
class Kernel {
public:
    Kernel(std::vector<double> amplitudes, std::vector<double> rates);

    std::span<const double> amplitudes() const noexcept { return amplitudes_; }
    std::span<const double> rates() const noexcept { return rates_; }
    std::size_t size() const noexcept { return amplitudes_.size(); }
    const KernelMoments& moments() const noexcept { return moments_; }

    double k(double t) const;
    double q(double t) const;

    // K(z) = sum a_k / (z + b_k).  Throws pole_hit when z sits on some -b_k.
    complex laplace(complex z) const;

    // Same kernel with every amplitude multiplied by `factor` (> 0).
    Kernel scaled(double factor) const;

    // Rescaled copy with alpha = 1.  Requires alpha > 0.
    Kernel normalized() const;

    // Human-readable one-line summary, stable across runs.
    std::string summary() const;

private:
    std::vector<double> amplitudes_;
    std::vector<double> rates_;
    KernelMoments moments_;
};

Kernel make_kernel(std::vector<double> amplitudes, std::vector<double> rates);

enum class TimeFunction { k, q };

double eval_time(const Kernel& kernel, double t, TimeFunction which);

KernelMoments moments(const Kernel& kernel);

complex laplace_K(const Kernel& kernel, complex z);

struct AsymptoticResidual {
    complex value;
    // Factor the amplitudes were multiplied by to reach alpha = 1
    // (1 for order 0, where no normalization is applied).
    double scale = 1.0;
};

inline constexpr double default_sector_margin = 0.1;

// K(z) minus the first `order` terms of 1/z - beta/z^2 + gamma/z^3, on the
// alpha-normalized kernel for order >= 1.  The remainder is evaluated in the
// closed form sum a_k (-b_k)^order / (z^order (z + b_k)), so it carries no
// cancellation at large |z|.
AsymptoticResidual asymptotic_residual(const Kernel& kernel, complex z, int order,
                                       double sector_margin = default_sector_margin);

// Power-law family a_k = A k^-p, b_k = B k^q truncated so the tail bounds of
// every convergent C1-C3 sum drop below tail_tol.
struct KernelGenerator {
    double A = 1.0;
    double p = 2.0;
    double B = 1.0;
    double q = 1.0;
    double tail_tol = 1e-6;
    std::size_t max_terms = 100000;
};

struct GeneratedKernel {
    Kernel kernel;
    std::size_t terms = 0;
    // Which conditions the untruncated series satisfies.
    bool series_c1 = false;
    bool series_c2 = false;
    bool series_c3 = false;
    // Integral tail bounds of the dropped terms (inf when the sum diverges).
    double tail_c1 = 0.0;
    double tail_c2 = 0.0;
    double tail_c3 = 0.0;
};

GeneratedKernel generate_kernel(const KernelGenerator& gen);

} // namespace memoheat

#endif
