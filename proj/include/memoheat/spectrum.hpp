#ifndef MEMOHEAT_SPECTRUM_HPP
#define MEMOHEAT_SPECTRUM_HPP

#include <vector>

#include "memoheat/kernel.hpp"

namespace memoheat {

struct SpectrumResult {
    int n = 1;
    std::vector<complex> roots;     // with multiplicity, sorted by (re, im)
    std::vector<double> residuals;  // |G_n(root)|
    // |G_n'(root)| |root| 2^-53: the residual a root rounded to double can
    // carry even when it is the double nearest the exact zero.
    std::vector<double> floors;
    std::vector<double> poly_coeffs;  // descending powers, leading 1
    // Rates -b_k of zero-amplitude terms: common factors of the polynomial
    // that are not zeros of G_n.
    std::vector<double> cancelled;
};

// P(z) = z prod (z + b_k) + n^2 sum a_k prod_{j != k} (z + b_j), monic, as
// coefficients of descending powers.  Zero-amplitude terms are kept, so the
// degree is always M + 1.
std::vector<double> characteristic_polynomial(const Kernel& kernel, int n);

// Zeros of G_n(z) = z + n^2 K(z), certified by |G_n(root)| <= tol.  Throws
// non_convergence (with the best residual in the message) otherwise.
SpectrumResult compute_spectrum(const Kernel& kernel, int n, double tol = 1e-10);

// Coefficients of prod (z - r_i), descending powers (real parts only when
// `roots` is closed under conjugation).
std::vector<complex> polynomial_from_roots(const std::vector<complex>& roots);

} // namespace memoheat

#endif
