#include <doctest.h>

#include <cmath>
#include <limits>

#include "memoheat/kernel.hpp"
#include "oracles.hpp"

using namespace memoheat;

TEST_SUITE("kernel") {

TEST_CASE("construction and validation")
{
    const Kernel wave = make_kernel({1.0}, {0.0});
    CHECK(wave.k(0.0) == 1.0);
    CHECK(wave.k(7.5) == 1.0);

    const Kernel single = make_kernel({1.0}, {2.0});
    CHECK(single.k(0.0) == 1.0);
    CHECK(single.k(1.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));

    auto kind_of = [](auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::config_error;
    };
    CHECK(kind_of([] { make_kernel({1.0, -1.0}, {1.0, 2.0}); }) == ErrorKind::negative_amplitude);
    CHECK(kind_of([] { make_kernel({}, {}); }) == ErrorKind::empty_kernel);
    CHECK(kind_of([] { make_kernel({1.0}, {1.0, 2.0}); }) == ErrorKind::length_mismatch);
    CHECK(kind_of([] { make_kernel({1.0, 1.0}, {2.0, 2.0}); }) == ErrorKind::non_increasing_rates);
    CHECK(kind_of([] { make_kernel({1.0, 1.0}, {2.0, 1.0}); }) == ErrorKind::non_increasing_rates);
    CHECK(kind_of([] { make_kernel({1.0}, {-1.0}); }) == ErrorKind::non_increasing_rates);
    CHECK(kind_of([] { make_kernel({std::nan("")}, {1.0}); }) == ErrorKind::negative_amplitude);
    CHECK(kind_of([] { make_kernel({1.0}, {2.0}).k(-1.0); }) == ErrorKind::negative_time);
}

TEST_CASE("q values")
{
    const Kernel single = make_kernel({1.0}, {2.0});
    CHECK(eval_time(single, 0.0, TimeFunction::q) == 0.0);
    CHECK(eval_time(single, 60.0, TimeFunction::q) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(eval_time(make_kernel({1.0}, {0.0}), 3.0, TimeFunction::q) == doctest::Approx(3.0));
    // tiny t keeps full relative accuracy
    CHECK(single.q(1e-12) == doctest::Approx(1e-12).epsilon(1e-10));
}

TEST_CASE("moments")
{
    auto m = moments(make_kernel({1.0}, {2.0}));
    CHECK(m.c0_sum == 0.5);
    CHECK(m.alpha == 1.0);
    CHECK(m.beta == 2.0);
    CHECK(m.gamma == 4.0);
    CHECK(m.c0);

    m = moments(make_kernel({1.0}, {0.0}));
    CHECK(std::isinf(m.c0_sum));
    CHECK(!m.c0);
    CHECK(m.alpha == 1.0);
    CHECK(m.beta == 0.0);
    CHECK(m.gamma == 0.0);

    m = moments(make_kernel({0.5, 0.5}, {1.0, 3.0}));
    CHECK(m.alpha == 1.0);
    CHECK(m.beta == 2.0);
    CHECK(m.gamma == 5.0);

    // zero amplitude on a zero rate carries no mass
    m = moments(make_kernel({0.0, 1.0}, {0.0, 1.0}));
    CHECK(m.c0);
    CHECK(m.c0_sum == 1.0);
}

TEST_CASE("laplace image")
{
    CHECK(laplace_K(make_kernel({1.0}, {2.0}), 2.0) == complex(0.25, 0.0));
    const complex w = laplace_K(make_kernel({1.0}, {0.0}), complex(0.0, 1.0));
    CHECK(w.real() == doctest::Approx(0.0));
    CHECK(w.imag() == doctest::Approx(-1.0));
    try {
        laplace_K(make_kernel({1.0}, {2.0}), -2.0);
        FAIL("expected a pole error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::pole_hit);
    }
}

TEST_CASE("laplace image against time-domain quadrature")
{
    const Kernel kernel = make_kernel({0.3, 0.9, 0.2}, {0.0, 0.7, 4.0});
    for (const complex z : {complex(1.0, 0.0), complex(0.5, 3.0), complex(2.0, -7.0)}) {
        // T chosen so e^{-Re z T} is far below the tolerance
        const double T = 40.0 / z.real();
        const complex quad =
            oracle::simpson([&](double t) { return std::exp(-z * t) * kernel.k(t); }, T, 200000);
        const complex exact = kernel.laplace(z);
        CHECK(std::abs(quad - exact) <= 1e-6 * std::abs(exact));
    }
}

TEST_CASE("property: k(0) = alpha, q nondecreasing and bounded by c0_sum")
{
    const Kernel kernel = make_kernel({0.25, 0.5, 1.5, 0.75}, {0.1, 0.4, 2.0, 9.0});
    const auto& m = kernel.moments();
    CHECK(kernel.k(0.0) == doctest::Approx(m.alpha).epsilon(1e-15));
    double prev = 0.0;
    for (double t = 0.0; t <= 200.0; t += 0.37) {
        const double q = kernel.q(t);
        CHECK(q >= prev);
        CHECK(q <= m.c0_sum * (1 + 1e-14));
        prev = q;
    }
    CHECK(kernel.q(1000.0) == doctest::Approx(m.c0_sum).epsilon(1e-12));
}

TEST_CASE("property: gamma alpha >= beta^2")
{
    const std::vector<std::vector<double>> rates = {{0.0}, {0.0, 1.0}, {0.5, 1.0, 30.0}, {1e-3, 2.0, 2.5, 100.0}};
    for (const auto& b : rates) {
        std::vector<double> a(b.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            a[i] = 0.3 + 0.2 * double(i);
        const auto m = make_kernel(a, b).moments();
        CHECK(m.gamma * m.alpha >= m.beta * m.beta * (1 - 1e-15));
    }
}

TEST_CASE("asymptotic residual")
{
    const Kernel wave = make_kernel({1.0}, {0.0});
    for (const complex z : {complex(3.0, 0.0), complex(0.1, 5.0), complex(100.0, -2.0)})
        CHECK(std::abs(asymptotic_residual(wave, z, 1).value) == 0.0);

    const Kernel single = make_kernel({1.0}, {2.0});
    CHECK(asymptotic_residual(single, 10.0, 0).value.real() == doctest::Approx(1.0 / 12.0));

    // |z^2 (K - 1/z + beta/z^2)| decreases monotonically at z = 10, 100, 1000
    double prev = std::numeric_limits<double>::infinity();
    for (double x : {10.0, 100.0, 1000.0}) {
        const double v = std::abs(x * x * asymptotic_residual(single, x, 2).value);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < 1e-2);

    // the closed form agrees with direct subtraction where no cancellation occurs
    const Kernel two = make_kernel({0.5, 0.5}, {1.0, 3.0});
    const auto& m = two.moments();
    const complex z(3.0, 4.0);
    const complex direct = two.laplace(z) - 1.0 / z + m.beta / (z * z) - m.gamma / (z * z * z);
    CHECK(std::abs(asymptotic_residual(two, z, 3).value - direct) < 1e-14);
    for (double x : {10.0, 100.0, 1000.0})
        CHECK(std::abs(std::pow(x, 3) * asymptotic_residual(two, x, 3).value) < 15.0 / x);
}

TEST_CASE("asymptotic residual rescales to alpha = 1")
{
    const Kernel k = make_kernel({2.0, 2.0}, {1.0, 3.0});
    const auto r = asymptotic_residual(k, complex(5.0, 1.0), 2);
    CHECK(r.scale == doctest::Approx(0.25));
    const auto ref = asymptotic_residual(make_kernel({0.5, 0.5}, {1.0, 3.0}), complex(5.0, 1.0), 2);
    CHECK(std::abs(r.value - ref.value) < 1e-15);
    CHECK_THROWS_AS(asymptotic_residual(k, complex(-5.0, 0.01), 1), Error);
}

TEST_CASE("normalization and scaling are explicit")
{
    const Kernel k = make_kernel({2.0, 6.0}, {1.0, 3.0});
    const Kernel n = k.normalized();
    CHECK(n.moments().alpha == doctest::Approx(1.0));
    CHECK(k.amplitudes()[0] == 2.0);
    CHECK(k.scaled(0.5).amplitudes()[1] == 3.0);
}

TEST_CASE("generator truncation")
{
    // A k^-p, B k^q: tails of C1..C3 sums below tail_tol
    KernelGenerator gen{1.0, 4.0, 1.0, 1.0, 1e-4};
    const auto g = generate_kernel(gen);
    CHECK(g.terms == g.kernel.size());
    CHECK(g.series_c1);
    CHECK(g.series_c2);
    CHECK(g.tail_c3 > 0.0);  // p - 2q = 2 > 1 still converges
    CHECK(g.tail_c1 <= 1e-4);
    CHECK(g.tail_c2 <= 1e-4);
    CHECK(g.tail_c3 <= 1e-4);
    // sum_{k>M} k^-2 <= 1/M <= 1e-4 needs M = 10000 for the C3 sum
    CHECK(g.terms == 10000);

    KernelGenerator heavy{1.0, 2.0, 1.0, 1.0, 1e-8};
    CHECK_THROWS_AS(generate_kernel(heavy), Error);
    heavy.max_terms = 1000000;
    CHECK_THROWS_AS(generate_kernel(heavy), Error);
}

}
