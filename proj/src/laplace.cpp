#include "memoheat/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "memoheat/spaces.hpp"
#include "memoheat/spectrum.hpp"

namespace memoheat {

const char* to_string(SymbolKind kind) noexcept
{
    switch (kind) {
    case SymbolKind::G: return "G";
    case SymbolKind::G0: return "G0";
    case SymbolKind::invG: return "invG";
    case SymbolKind::invG0: return "invG0";
    case SymbolKind::Theta: return "Theta";
    case SymbolKind::D: return "D";
    }
    return "?";
}

SymbolKind symbol_kind_from_string(const std::string& name)
{
    for (auto k : {SymbolKind::G, SymbolKind::G0, SymbolKind::invG, SymbolKind::invG0,
                   SymbolKind::Theta, SymbolKind::D})
        if (name == to_string(k))
            return k;
    throw Error(ErrorKind::invalid_argument, "unknown symbol kind '" + name + "'");
}

void LineQuadrature::validate() const
{
    if (!std::isfinite(eps))
        throw Error(ErrorKind::invalid_argument, "line abscissa must be finite");
    if (!(y_max > 0.0))
        throw Error(ErrorKind::invalid_argument, "line quadrature needs y_max > 0");
    if (samples < 16)
        throw Error(ErrorKind::invalid_argument, "line quadrature needs at least 16 samples");
}

LineQuadrature LineQuadrature::with_spacing(double eps, double y_max, double spacing, TailModel tail)
{
    if (!(spacing > 0.0))
        throw Error(ErrorKind::invalid_argument, "line spacing must be positive");
    auto count = static_cast<std::size_t>(std::ceil(2.0 * y_max / spacing)) + 1;
    count = std::max<std::size_t>(count | 1u, 17);
    return {eps, y_max, count, tail};
}

namespace {

complex reference_K(const Kernel& kernel, complex z)
{
    const auto& m = kernel.moments();
    if (m.alpha == 0.0)
        return 0.0;
    const complex d = z + m.beta / m.alpha;
    if (std::abs(d) == 0.0) {
        std::ostringstream os;
        os << "reference K0 pole hit at z = " << z;
        throw Error(ErrorKind::pole_hit, os.str());
    }
    return m.alpha / d;
}

complex checked_inverse(complex g, complex z, const char* what)
{
    if (std::abs(g) == 0.0) {
        std::ostringstream os;
        os << what << " vanishes at z = " << z;
        throw Error(ErrorKind::zero_hit, os.str());
    }
    return 1.0 / g;
}

bool perturbation_vanishes(const Kernel& kernel)
{
    // D == 0 identically iff K == K0, i.e. all mass sits on a single rate.
    std::size_t charged = 0;
    for (double a : kernel.amplitudes())
        charged += a > 0.0;
    return charged <= 1;
}

} // namespace

complex symbol(const Kernel& kernel, int n, complex z, SymbolKind kind)
{
    if (n < 1)
        throw Error(ErrorKind::invalid_argument, "mode index must be >= 1");
    const double n2 = static_cast<double>(n) * n;
    switch (kind) {
    case SymbolKind::G: return z + n2 * kernel.laplace(z);
    case SymbolKind::G0: return z + n2 * reference_K(kernel, z);
    case SymbolKind::invG:
    case SymbolKind::Theta: return checked_inverse(z + n2 * kernel.laplace(z), z, "G_n");
    case SymbolKind::invG0: return checked_inverse(z + n2 * reference_K(kernel, z), z, "G0_n");
    case SymbolKind::D: {
        const complex g = z + n2 * kernel.laplace(z);
        const complex g0 = z + n2 * reference_K(kernel, z);
        return checked_inverse(g, z, "G_n") - checked_inverse(g0, z, "G0_n");
    }
    }
    return 0.0;
}

complex theta_hat(const Kernel& kernel, int n, double xi, complex F, complex z)
{
    const complex g = symbol(kernel, n, z, SymbolKind::G);
    if (std::abs(g) == 0.0) {
        std::ostringstream os;
        os << "z = " << z << " is a spectrum point of mode " << n;
        throw Error(ErrorKind::zero_hit, os.str());
    }
    return (xi + F) / g;
}

namespace {

struct ResolvedLine {
    double y_max;
    std::size_t samples;
    double spacing;
};

ResolvedLine resolve(const LineQuadrature& quad, double min_y_max)
{
    quad.validate();
    ResolvedLine r{quad.y_max, quad.samples, 0.0};
    if (min_y_max > r.y_max) {
        const double grow = min_y_max / quad.y_max;
        r.y_max = min_y_max;
        r.samples = static_cast<std::size_t>(std::ceil((quad.samples - 1) * grow)) + 1;
    }
    r.samples |= 1u;  // keep y = 0 on the grid
    r.spacing = 2.0 * r.y_max / static_cast<double>(r.samples - 1);
    return r;
}

// Least-squares fit log f = log C - p log y over the given samples, then
// int_{y_max}^inf C y^-p dy.
double power_law_tail(const std::vector<double>& y, const std::vector<double>& f, double y_max,
                      std::vector<std::string>& warnings)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!(f[i] > 0.0) || !(y[i] > 0.0))
            continue;
        const double lx = std::log(y[i]), ly = std::log(f[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++cnt;
    }
    if (cnt < 2)
        return 0.0;
    const double denom = cnt * sxx - sx * sx;
    if (denom <= 0.0)
        return 0.0;
    const double slope = (cnt * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / cnt;
    const double p = -slope;
    if (p <= 1.0) {
        warnings.push_back("tail decays no faster than 1/|y| (fitted exponent " +
                           std::to_string(p) + "); tail reported as infinite");
        return std::numeric_limits<double>::infinity();
    }
    return std::exp(intercept) * std::pow(y_max, 1.0 - p) / (p - 1.0);
}

} // namespace

LineNorm line_norm(const SymbolFunction& g, double s, const LineQuadrature& quad, double min_y_max)
{
    const ResolvedLine r = resolve(quad, min_y_max);
    LineNorm out;
    out.y_max = r.y_max;
    out.samples = r.samples;

    const std::size_t tail_count = std::max<std::size_t>(4, r.samples / 20);
    std::vector<double> ty_pos, tf_pos, ty_neg, tf_neg;

    double sum = 0.0;
    for (std::size_t j = 0; j < r.samples; ++j) {
        const double y = j + 1 == r.samples ? r.y_max : -r.y_max + j * r.spacing;
        const complex z(quad.eps, y);
        const complex v = g(z);
        double f = std::norm(v);
        if (s != 0.0)
            f *= std::pow(std::norm(z), s);
        sum += (j == 0 || j + 1 == r.samples) ? 0.5 * f : f;
        if (j < tail_count) {
            ty_neg.push_back(-y);
            tf_neg.push_back(f);
        } else if (j + tail_count >= r.samples) {
            ty_pos.push_back(y);
            tf_pos.push_back(f);
        }
    }
    sum *= r.spacing;
    out.grid_part = std::sqrt(sum);

    if (quad.tail_model == TailModel::power_law) {
        const double tail = power_law_tail(ty_pos, tf_pos, r.y_max, out.warnings) +
                            power_law_tail(ty_neg, tf_neg, r.y_max, out.warnings);
        out.tail_estimate = std::sqrt(tail);
    }
    out.total = std::hypot(out.grid_part, out.tail_estimate);
    return out;
}

namespace {

void annotate_spectrum(const Kernel& kernel, int n, SymbolKind kind, double eps, double spacing,
                       std::vector<std::string>& warnings)
{
    std::vector<complex> points;
    if (kind != SymbolKind::G0 && kind != SymbolKind::invG0) {
        try {
            const auto spec = compute_spectrum(kernel, n, 1e-6);
            points = spec.roots;
        } catch (const Error&) {
            warnings.push_back("spectrum of mode " + std::to_string(n) + " not certified");
        }
    }
    if (kind == SymbolKind::G0 || kind == SymbolKind::invG0 || kind == SymbolKind::D) {
        const auto& m = kernel.moments();
        if (m.alpha > 0.0) {
            // z^2 + c z + n^2 alpha, c = beta/alpha
            const double c = m.beta / m.alpha;
            const complex disc = std::sqrt(complex(c * c - 4.0 * n * n * m.alpha));
            points.push_back(0.5 * (-c + disc));
            points.push_back(0.5 * (-c - disc));
        }
    }
    for (const auto& p : points) {
        if (std::abs(p.real() - eps) < 10.0 * spacing) {
            std::ostringstream os;
            os << "spectrum point " << p << " lies within 10 grid steps of Re z = " << eps;
            warnings.push_back(os.str());
        }
    }
}

} // namespace

LineNorm weighted_line_norm(const Kernel& kernel, int n, SymbolKind kind, double s,
                            const LineQuadrature& quad)
{
    if (kind == SymbolKind::G || kind == SymbolKind::G0)
        throw Error(ErrorKind::inadmissible_index,
                    std::string(to_string(kind)) + " is not square integrable on a vertical line");
    if (kind == SymbolKind::D && !(s < 4.5))
        throw Error(ErrorKind::inadmissible_index, "kind D needs s < 9/2");
    if (kind != SymbolKind::D && !(s < 0.5))
        throw Error(ErrorKind::inadmissible_index,
                    std::string(to_string(kind)) + " needs s < 1/2 for a finite line norm");

    const double min_y = 4.0 * n;
    if (kind == SymbolKind::D && perturbation_vanishes(kernel)) {
        const ResolvedLine r = resolve(quad, min_y);
        LineNorm zero;
        zero.y_max = r.y_max;
        zero.samples = r.samples;
        return zero;
    }
    LineNorm out = line_norm([&](complex z) { return symbol(kernel, n, z, kind); }, s, quad, min_y);
    annotate_spectrum(kernel, n, kind, quad.eps, 2.0 * out.y_max / (out.samples - 1), out.warnings);
    return out;
}

std::vector<LineSample> line_scan(const Kernel& kernel, int n, SymbolKind kind,
                                  const LineQuadrature& quad)
{
    const ResolvedLine r = resolve(quad, 4.0 * n);
    std::vector<LineSample> out;
    out.reserve(r.samples);
    for (std::size_t j = 0; j < r.samples; ++j) {
        const double y = j + 1 == r.samples ? r.y_max : -r.y_max + j * r.spacing;
        out.push_back({y, symbol(kernel, n, complex(quad.eps, y), kind)});
    }
    return out;
}

PlancherelCheck plancherel_residual(const ModeTrajectory& traj, const Kernel& kernel, double eps,
                                    const LineQuadrature& quad)
{
    if (!(eps > 0.0))
        throw Error(ErrorKind::invalid_argument, "Plancherel check needs eps > 0");
    PlancherelCheck out;
    if (traj.xi == 0.0)
        return out;
    LineQuadrature line = quad;
    line.eps = eps;
    const NormValue time = mode_weighted_norm(traj, eps, false);
    const LineNorm freq = weighted_line_norm(kernel, traj.n, SymbolKind::invG, 0.0, line);
    out.time_side = time.total * time.total;
    out.line_side = traj.xi * traj.xi * freq.total * freq.total / (2.0 * std::numbers::pi);
    const double scale = std::max(out.time_side, out.line_side);
    out.residual = scale == 0.0 ? 0.0 : std::abs(out.time_side - out.line_side) / scale;
    return out;
}

} // namespace memoheat
