#include "memoheat/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace memoheat {

namespace {

using ldcomplex = std::complex<long double>;

// Multiplies the descending-power polynomial `p` by (z + c).
void multiply_linear(std::vector<double>& p, double c)
{
    p.push_back(0.0);
    for (std::size_t i = p.size() - 1; i > 0; --i)
        p[i] += c * p[i - 1];
}

std::vector<double> build_polynomial(std::span<const double> a, std::span<const double> b, int n)
{
    const double n2 = static_cast<double>(n) * n;
    std::vector<double> head{1.0, 0.0};  // z
    for (double r : b)
        multiply_linear(head, r);
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] == 0.0)
            continue;
        std::vector<double> term{1.0};
        for (std::size_t j = 0; j < b.size(); ++j)
            if (j != k)
                multiply_linear(term, b[j]);
        // term has degree M-1; align with head (degree M+1)
        const std::size_t offset = head.size() - term.size();
        for (std::size_t i = 0; i < term.size(); ++i)
            head[offset + i] += n2 * a[k] * term[i];
    }
    return head;
}

ldcomplex horner(const std::vector<long double>& p, ldcomplex z)
{
    ldcomplex v = p.front();
    for (std::size_t i = 1; i < p.size(); ++i)
        v = v * z + p[i];
    return v;
}

// Durand-Kerner on a monic polynomial (descending, p[0] == 1).
std::vector<ldcomplex> durand_kerner(const std::vector<long double>& p, int max_iter)
{
    const std::size_t d = p.size() - 1;
    long double radius = 1.0L;
    for (std::size_t i = 1; i < p.size(); ++i)
        radius = std::max(radius, 1.0L + std::abs(p[i]));
    std::vector<ldcomplex> w(d);
    const long double two_pi = 6.283185307179586476925286766559L;
    for (std::size_t k = 0; k < d; ++k)
        w[k] = std::polar(radius, two_pi * k / d + 0.4L);

    for (int it = 0; it < max_iter; ++it) {
        long double change = 0.0L;
        for (std::size_t k = 0; k < d; ++k) {
            ldcomplex denom = 1.0L;
            for (std::size_t j = 0; j < d; ++j)
                if (j != k)
                    denom *= w[k] - w[j];
            if (std::abs(denom) == 0.0L)
                denom = 1e-30L;
            const ldcomplex step = horner(p, w[k]) / denom;
            w[k] -= step;
            change = std::max(change, std::abs(step) / std::max(1.0L, std::abs(w[k])));
        }
        if (change < 1e-18L)
            break;
    }
    return w;
}

struct GnEval {
    ldcomplex value;
    ldcomplex slope;
};

// G_n and its derivative in extended precision; the individual terms are
// O(n^2) so double evaluation alone loses most of the certificate.
GnEval eval_gn(std::span<const double> a, std::span<const double> b, long double n2, complex z)
{
    const ldcomplex zl(z.real(), z.imag());
    GnEval e{zl, 1.0L};
    for (std::size_t k = 0; k < a.size(); ++k) {
        const ldcomplex inv = 1.0L / (zl + static_cast<long double>(b[k]));
        e.value += n2 * a[k] * inv;
        e.slope -= n2 * a[k] * inv * inv;
    }
    return e;
}

double residual(std::span<const double> a, std::span<const double> b, long double n2, complex z)
{
    return static_cast<double>(std::abs(eval_gn(a, b, n2, z).value));
}

} // namespace

std::vector<double> characteristic_polynomial(const Kernel& kernel, int n)
{
    if (n < 1)
        throw Error(ErrorKind::invalid_argument, "mode index must be >= 1");
    return build_polynomial(kernel.amplitudes(), kernel.rates(), n);
}

std::vector<complex> polynomial_from_roots(const std::vector<complex>& roots)
{
    std::vector<complex> p{1.0};
    for (const auto& r : roots) {
        p.push_back(0.0);
        for (std::size_t i = p.size() - 1; i > 0; --i)
            p[i] -= r * p[i - 1];
    }
    return p;
}

SpectrumResult compute_spectrum(const Kernel& kernel, int n, double tol)
{
    if (n < 1)
        throw Error(ErrorKind::invalid_argument, "mode index must be >= 1");
    if (!(tol > 0.0))
        throw Error(ErrorKind::invalid_argument, "spectrum tolerance must be positive");

    SpectrumResult out;
    out.n = n;
    out.poly_coeffs = characteristic_polynomial(kernel, n);

    std::vector<double> a, b;
    for (std::size_t k = 0; k < kernel.size(); ++k) {
        if (kernel.amplitudes()[k] > 0.0) {
            a.push_back(kernel.amplitudes()[k]);
            b.push_back(kernel.rates()[k]);
        } else {
            out.cancelled.push_back(-kernel.rates()[k]);
        }
    }
    const long double n2 = static_cast<long double>(n) * n;
    const std::vector<double> reduced = build_polynomial(a, b, n);

    // z = scale * w keeps the coefficients of large-n polynomials balanced.
    const long double scale = n;
    std::vector<long double> scaled(reduced.size());
    long double power = 1.0L;
    for (std::size_t j = 0; j < reduced.size(); ++j) {
        scaled[j] = reduced[j] / power;
        power *= scale;
    }
    std::vector<complex> roots;
    for (const auto& w : durand_kerner(scaled, 2000 + 200 * static_cast<int>(reduced.size())))
        roots.emplace_back(static_cast<double>(w.real() * scale), static_cast<double>(w.imag() * scale));

    // Replace tight clusters (multiple roots) by their centroid when that
    // does not worsen the residuals.
    const std::size_t d = roots.size();
    std::vector<std::size_t> group(d);
    std::iota(group.begin(), group.end(), 0);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            if (std::abs(roots[i] - roots[j]) <= 1e-6 * std::max(1.0, std::abs(roots[i])))
                group[j] = group[i];
    for (std::size_t g = 0; g < d; ++g) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < d; ++i)
            if (group[i] == g)
                members.push_back(i);
        if (members.size() < 2)
            continue;
        complex centroid = 0.0;
        double worst = 0.0;
        for (auto i : members) {
            centroid += roots[i];
            worst = std::max(worst, residual(a, b, n2, roots[i]));
        }
        centroid /= static_cast<double>(members.size());
        if (residual(a, b, n2, centroid) <= worst)
            for (auto i : members)
                roots[i] = centroid;
    }

    // Newton polishing on G_n itself; a step is kept only if it helps.
    for (auto& z : roots) {
        for (int it = 0; it < 3; ++it) {
            const GnEval e = eval_gn(a, b, n2, z);
            if (std::abs(e.slope) == 0.0L)
                break;
            const ldcomplex step = e.value / e.slope;
            const complex cand(static_cast<double>(z.real() - step.real()), static_cast<double>(z.imag() - step.imag()));
            if (residual(a, b, n2, cand) < static_cast<double>(std::abs(e.value)))
                z = cand;
            else
                break;
        }
        // Snap nearly-real roots onto the axis when that costs nothing.
        if (z.imag() != 0.0) {
            const complex real_z(z.real(), 0.0);
            if (residual(a, b, n2, real_z) <= std::max(residual(a, b, n2, z), 0.5 * tol))
                z = real_z;
        }
    }

    // Enforce exact conjugate pairing of the non-real roots.
    std::vector<bool> used(d, false);
    for (std::size_t i = 0; i < d; ++i) {
        if (used[i] || roots[i].imag() <= 0.0)
            continue;
        std::size_t best = d;
        double best_dist = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            if (j == i || used[j] || roots[j].imag() >= 0.0)
                continue;
            const double dist = std::abs(roots[j] - std::conj(roots[i]));
            if (best == d || dist < best_dist) {
                best = j;
                best_dist = dist;
            }
        }
        if (best == d)
            continue;
        const complex mid = 0.5 * (roots[i] + std::conj(roots[best]));
        roots[i] = mid;
        roots[best] = std::conj(mid);
        used[i] = used[best] = true;
    }

    std::sort(roots.begin(), roots.end(), [](complex x, complex y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    out.roots = roots;
    double worst = 0.0, worst_floor = 0.0;
    for (const auto& z : roots) {
        const GnEval e = eval_gn(a, b, n2, z);
        out.residuals.push_back(static_cast<double>(std::abs(e.value)));
        out.floors.push_back(static_cast<double>(std::abs(e.slope)) * std::abs(z) * 0x1p-53);
        if (out.residuals.back() > worst) {
            worst = out.residuals.back();
            worst_floor = out.floors.back();
        }
    }
    if (!(worst <= tol)) {
        std::ostringstream os;
        os << "spectrum of mode " << n << " not certified: best max residual " << worst
           << " > tol " << tol << " (double rounding floor at that root " << worst_floor << ")";
        throw Error(ErrorKind::non_convergence, os.str());
    }
    return out;
}

} // namespace memoheat
