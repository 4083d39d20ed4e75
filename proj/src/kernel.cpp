#include "memoheat/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace memoheat {

const char* to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::empty_kernel: return "empty_kernel";
    case ErrorKind::length_mismatch: return "length_mismatch";
    case ErrorKind::negative_amplitude: return "negative_amplitude";
    case ErrorKind::non_increasing_rates: return "non_increasing_rates";
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::negative_time: return "negative_time";
    case ErrorKind::pole_hit: return "pole_hit";
    case ErrorKind::zero_hit: return "zero_hit";
    case ErrorKind::ray_angle: return "ray_angle";
    case ErrorKind::invalid_grid: return "invalid_grid";
    case ErrorKind::off_grid: return "off_grid";
    case ErrorKind::unknown_forcing: return "unknown_forcing";
    case ErrorKind::inadmissible_index: return "inadmissible_index";
    case ErrorKind::non_convergence: return "non_convergence";
    case ErrorKind::parse_error: return "parse_error";
    case ErrorKind::schema_error: return "schema_error";
    case ErrorKind::config_error: return "config_error";
    }
    return "unknown";
}

Error Error::with_mode(int n) const
{
    Error e(kind_, "mode " + std::to_string(n) + ": " + what());
    e.mode_ = n;
    return e;
}

namespace {

KernelMoments compute_moments(std::span<const double> a, std::span<const double> b)
{
    KernelMoments m;
    bool c0_infinite = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        m.alpha += a[k];
        m.beta += a[k] * b[k];
        m.gamma += a[k] * b[k] * b[k];
        if (b[k] == 0.0) {
            if (a[k] > 0.0)
                c0_infinite = true;
        } else {
            m.c0_sum += a[k] / b[k];
        }
    }
    if (c0_infinite)
        m.c0_sum = std::numeric_limits<double>::infinity();
    m.c0 = !c0_infinite;
    return m;
}

bool on_pole(complex z, double rate)
{
    const complex d = z + rate;
    return std::abs(d) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, rate);
}

} // namespace

Kernel::Kernel(std::vector<double> amplitudes, std::vector<double> rates)
    : amplitudes_(std::move(amplitudes)), rates_(std::move(rates))
{
    if (amplitudes_.empty() && rates_.empty())
        throw Error(ErrorKind::empty_kernel, "kernel needs at least one term");
    if (amplitudes_.size() != rates_.size())
        throw Error(ErrorKind::length_mismatch,
                    "kernel amplitudes and rates differ in length (" +
                        std::to_string(amplitudes_.size()) + " vs " +
                        std::to_string(rates_.size()) + ")");
    for (std::size_t k = 0; k < amplitudes_.size(); ++k) {
        if (!(amplitudes_[k] >= 0.0) || !std::isfinite(amplitudes_[k]))
            throw Error(ErrorKind::negative_amplitude,
                        "kernel amplitude a[" + std::to_string(k) + "] must be finite and >= 0");
        if (!(rates_[k] >= 0.0) || !std::isfinite(rates_[k]))
            throw Error(ErrorKind::non_increasing_rates,
                        "kernel rate b[" + std::to_string(k) + "] must be finite and >= 0");
        if (k > 0 && !(rates_[k] > rates_[k - 1]))
            throw Error(ErrorKind::non_increasing_rates,
                        "kernel rates must be strictly increasing (b[" + std::to_string(k) + "])");
    }
    moments_ = compute_moments(amplitudes_, rates_);
}

double Kernel::k(double t) const
{
    if (t < 0.0)
        throw Error(ErrorKind::negative_time, "kernel evaluated at negative time");
    double sum = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
        sum += rates_[i] == 0.0 ? amplitudes_[i] : amplitudes_[i] * std::exp(-rates_[i] * t);
    return sum;
}

double Kernel::q(double t) const
{
    if (t < 0.0)
        throw Error(ErrorKind::negative_time, "kernel integral evaluated at negative time");
    double sum = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        const double b = rates_[i];
        if (b == 0.0)
            sum += amplitudes_[i] == 0.0 ? 0.0 : amplitudes_[i] * t;
        else
            sum += amplitudes_[i] * (-std::expm1(-b * t)) / b;
    }
    return sum;
}

complex Kernel::laplace(complex z) const
{
    complex sum = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        if (on_pole(z, rates_[i])) {
            std::ostringstream os;
            os << "K(z) pole hit at z = " << z << " (rate b[" << i << "] = " << rates_[i] << ")";
            throw Error(ErrorKind::pole_hit, os.str());
        }
        sum += amplitudes_[i] / (z + rates_[i]);
    }
    return sum;
}

Kernel Kernel::scaled(double factor) const
{
    if (!(factor > 0.0))
        throw Error(ErrorKind::invalid_argument, "kernel scale factor must be positive");
    std::vector<double> a(amplitudes_);
    for (auto& v : a)
        v *= factor;
    return Kernel(std::move(a), rates_);
}

Kernel Kernel::normalized() const
{
    if (!(moments_.alpha > 0.0))
        throw Error(ErrorKind::invalid_argument, "cannot normalize a kernel with alpha = 0");
    return scaled(1.0 / moments_.alpha);
}

std::string Kernel::summary() const
{
    std::ostringstream os;
    os.precision(17);
    os << "M=" << size() << " a=[";
    for (std::size_t i = 0; i < size(); ++i)
        os << (i ? "," : "") << amplitudes_[i];
    os << "] b=[";
    for (std::size_t i = 0; i < size(); ++i)
        os << (i ? "," : "") << rates_[i];
    os << "]";
    return os.str();
}

Kernel make_kernel(std::vector<double> amplitudes, std::vector<double> rates)
{
    return Kernel(std::move(amplitudes), std::move(rates));
}

double eval_time(const Kernel& kernel, double t, TimeFunction which)
{
    return which == TimeFunction::k ? kernel.k(t) : kernel.q(t);
}

KernelMoments moments(const Kernel& kernel)
{
    return kernel.moments();
}

complex laplace_K(const Kernel& kernel, complex z)
{
    return kernel.laplace(z);
}

AsymptoticResidual asymptotic_residual(const Kernel& kernel, complex z, int order,
                                       double sector_margin)
{
    if (order < 0 || order > 3)
        throw Error(ErrorKind::invalid_argument, "asymptotic order must be in {0,1,2,3}");
    if (!(sector_margin > 0.0))
        throw Error(ErrorKind::invalid_argument, "sector margin must be positive");
    if (z == complex(0.0) || std::abs(std::arg(z)) >= std::numbers::pi - sector_margin) {
        std::ostringstream os;
        os << "z = " << z << " outside the sector |arg z| < pi - " << sector_margin;
        throw Error(ErrorKind::ray_angle, os.str());
    }
    if (order == 0)
        return {kernel.laplace(z), 1.0};

    const double scale = 1.0 / kernel.moments().alpha;
    const Kernel unit = kernel.normalized();
    unit.laplace(z); // pole check

    complex sum = 0.0;
    const complex zr = std::pow(z, order);
    for (std::size_t i = 0; i < unit.size(); ++i) {
        const double b = unit.rates()[i];
        const double a = unit.amplitudes()[i];
        if (a == 0.0 || b == 0.0)
            continue;
        sum += a * std::pow(-b, order) / (z + b);
    }
    return {sum / zr, scale};
}

GeneratedKernel generate_kernel(const KernelGenerator& gen)
{
    if (!(gen.A > 0.0) || !(gen.B > 0.0) || !std::isfinite(gen.p) || !std::isfinite(gen.q))
        throw Error(ErrorKind::invalid_argument, "generator needs A > 0, B > 0 and finite p, q");
    if (!(gen.tail_tol > 0.0))
        throw Error(ErrorKind::invalid_argument, "generator tail_tol must be positive");
    if (gen.q <= 0.0)
        throw Error(ErrorKind::non_increasing_rates, "generator rates B k^q need q > 0");

    // sum_{k>M} c k^-r <= c M^(1-r)/(r-1) for r > 1.
    struct Sum {
        double coeff;
        double r;
    };
    const Sum sums[3] = {{gen.A, gen.p}, {gen.A * gen.B, gen.p - gen.q},
                         {gen.A * gen.B * gen.B, gen.p - 2.0 * gen.q}};
    if (sums[0].r <= 1.0)
        throw Error(ErrorKind::invalid_argument,
                    "generator series violates C1 (need p > 1 for a finite alpha)");

    auto tail = [](const Sum& s, double m) {
        if (s.r <= 1.0)
            return std::numeric_limits<double>::infinity();
        return s.coeff * std::pow(m, 1.0 - s.r) / (s.r - 1.0);
    };

    double needed = 1.0;
    for (const auto& s : sums) {
        if (s.r <= 1.0)
            continue;
        // smallest M with coeff M^(1-r)/(r-1) <= tol
        const double m = std::pow(s.coeff / ((s.r - 1.0) * gen.tail_tol), 1.0 / (s.r - 1.0));
        needed = std::max(needed, std::ceil(m));
    }
    if (needed > static_cast<double>(gen.max_terms)) {
        std::ostringstream os;
        os << "tail_tol " << gen.tail_tol << " needs " << needed
           << " terms, above max_terms = " << gen.max_terms;
        throw Error(ErrorKind::invalid_argument, os.str());
    }
    const auto terms = static_cast<std::size_t>(needed);

    std::vector<double> a(terms), b(terms);
    for (std::size_t k = 1; k <= terms; ++k) {
        const double kk = static_cast<double>(k);
        a[k - 1] = gen.A * std::pow(kk, -gen.p);
        b[k - 1] = gen.B * std::pow(kk, gen.q);
    }
    const double m = static_cast<double>(terms);
    return GeneratedKernel{Kernel(std::move(a), std::move(b)),
                           terms,
                           sums[0].r > 1.0,
                           sums[1].r > 1.0,
                           sums[2].r > 1.0,
                           tail(sums[0], m),
                           tail(sums[1], m),
                           tail(sums[2], m)};
}

} // namespace memoheat
