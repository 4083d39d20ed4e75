#include <doctest.h>

#include <cmath>

#include "memoheat/spectrum.hpp"
#include "memoheat/verify.hpp"

using namespace memoheat;

TEST_SUITE("spectrum") {

TEST_CASE("characteristic polynomials")
{
    CHECK(characteristic_polynomial(Kernel({1.0}, {2.0}), 1) == std::vector<double>{1.0, 2.0, 1.0});
    CHECK(characteristic_polynomial(Kernel({1.0}, {0.0}), 3) == std::vector<double>{1.0, 0.0, 9.0});
    const auto p = characteristic_polynomial(Kernel({0.5, 0.5}, {1.0, 3.0}), 1);
    CHECK(p == std::vector<double>{1.0, 4.0, 4.0, 2.0});

    // P(z) = G_1(z) (z+1)(z+3) at arbitrary points
    const Kernel k({0.5, 0.5}, {1.0, 3.0});
    for (const complex z : {complex(0.3, 0.7), complex(-2.0, 5.0), complex(10.0, -1.0)}) {
        const complex poly = ((z + 4.0) * z + 4.0) * z + 2.0;
        CHECK(std::abs(poly - (z + k.laplace(z)) * (z + 1.0) * (z + 3.0)) < 1e-12 * std::abs(poly));
    }
}

TEST_CASE("closed-form spectra")
{
    const auto s1 = compute_spectrum(Kernel({1.0}, {2.0}), 1);
    REQUIRE(s1.roots.size() == 2);
    for (const auto& r : s1.roots)
        CHECK(std::abs(r + 1.0) <= 1e-8);

    const auto s2 = compute_spectrum(Kernel({1.0}, {2.0}), 2);
    REQUIRE(s2.roots.size() == 2);
    CHECK(std::abs(s2.roots[0] - complex(-1.0, -std::sqrt(3.0))) <= 1e-10);
    CHECK(std::abs(s2.roots[1] - complex(-1.0, std::sqrt(3.0))) <= 1e-10);

    const auto s3 = compute_spectrum(Kernel({1.0}, {0.0}), 3);
    REQUIRE(s3.roots.size() == 2);
    CHECK(std::abs(s3.roots[0] - complex(0.0, -3.0)) <= 1e-10);
    CHECK(std::abs(s3.roots[1] - complex(0.0, 3.0)) <= 1e-10);
}

TEST_CASE("zero-amplitude terms cancel")
{
    const auto s = compute_spectrum(Kernel({0.0, 1.0}, {1.0, 2.0}), 2);
    CHECK(s.poly_coeffs.size() == 4);
    CHECK(s.roots.size() == 2);
    REQUIRE(s.cancelled.size() == 1);
    CHECK(s.cancelled[0] == -1.0);
}

TEST_CASE("property: residuals, conjugate pairs, dissipativity and root-coefficient consistency")
{
    SeededRandom rng(20240917);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<double> a, b;
        const int m = rng.integer(1, 8);
        double rate = 0.0;
        for (int k = 0; k < m; ++k) {
            a.push_back(rng.uniform(0.05, 1.0));
            rate += rng.uniform(0.05, 3.0);
            b.push_back(k == 0 && trial % 5 == 0 ? 0.0 : rate);
        }
        const Kernel kernel(a, b);
        const int n = rng.integer(1, 128);
        // roots next to a pole are limited by their double representation
        const auto s = compute_spectrum(kernel, n, 1e-6);
        CHECK(s.roots.size() == a.size() + 1);
        for (std::size_t i = 0; i < s.roots.size(); ++i) {
            CHECK(s.residuals[i] <= std::max(1e-10, 2.0 * s.floors[i]));
            CHECK(s.roots[i].real() <= 1e-12);
            bool paired = s.roots[i].imag() == 0.0;
            for (const auto& other : s.roots)
                paired = paired || other == std::conj(s.roots[i]);
            CHECK(paired);
        }
        const auto rebuilt = polynomial_from_roots(s.roots);
        double scale = 0.0;
        for (double c : s.poly_coeffs)
            scale = std::max(scale, std::abs(c));
        for (std::size_t i = 0; i < rebuilt.size(); ++i)
            CHECK(std::abs(rebuilt[i] - s.poly_coeffs[i]) <= 1e-8 * scale);
    }
}

TEST_CASE("large-n root pair approaches -beta/2")
{
    const Kernel k({0.5, 0.5}, {1.0, 3.0});
    const double beta = k.moments().beta;
    for (int n : {64, 128, 256, 512, 1024}) {
        const auto s = compute_spectrum(k, n);
        const auto& top = s.roots.back();  // largest imaginary part among the leftmost-sorted pair
        complex pair = top;
        for (const auto& r : s.roots)
            if (r.imag() > pair.imag())
                pair = r;
        CHECK(std::abs(pair.real() + 0.5 * beta) <= 0.05 * 0.5 * beta);
        CHECK(pair.imag() == doctest::Approx(n).epsilon(0.01));
    }
}

TEST_CASE("invalid requests")
{
    CHECK_THROWS_AS(compute_spectrum(Kernel({1.0}, {2.0}), 0), Error);
    CHECK_THROWS_AS(compute_spectrum(Kernel({1.0}, {2.0}), 1, 0.0), Error);
}

}
