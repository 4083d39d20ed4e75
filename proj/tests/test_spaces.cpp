#include <doctest.h>

#include <cmath>

#include "memoheat/scenario.hpp"
#include "memoheat/spaces.hpp"

using namespace memoheat;

namespace {

ModeTrajectory sampled(int n, const TimeGrid& grid, double (*g)(double))
{
    ModeTrajectory m;
    m.n = n;
    m.grid = grid;
    for (std::size_t j = 0; j < grid.points(); ++j) {
        m.theta.push_back(g(grid.time(j)));
        m.theta_dot.push_back(0.0);
    }
    return m;
}

double decay(double t) { return std::exp(-t); }
double nothing(double) { return 0.0; }

} // namespace

TEST_SUITE("spaces") {

TEST_CASE("sequence norms")
{
    CHECK(seq_norm(std::vector<double>{0.0, 1.0}, 1.0) == doctest::Approx(2.0));
    CHECK(seq_norm(std::vector<double>{3.0, 4.0}, 0.0) == doctest::Approx(5.0));
    CHECK(seq_norm(std::vector<double>{}, 2.0) == 0.0);
}

TEST_CASE("property: seq_norm is nondecreasing in s")
{
    const std::vector<double> c{0.3, -0.2, 0.0, 0.05, 0.01};
    double prev = 0.0;
    for (double s = -1.0; s <= 3.0; s += 0.25) {
        const double v = seq_norm(c, s);
        CHECK(v > prev);
        prev = v;
    }
    const std::vector<double> first_only{2.0};
    CHECK(seq_norm(first_only, 0.0) == seq_norm(first_only, 5.0));
}

TEST_CASE("weighted time norms")
{
    const auto grid = TimeGrid::make(30.0, 1e-3);
    const auto m = sampled(1, grid, decay);
    const NormValue v = mode_weighted_norm(m, 0.5, false);
    CHECK(v.total * v.total == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    CHECK(v.tail_estimate > 0.0);
    CHECK(v.total == doctest::Approx(std::hypot(v.grid_part, v.tail_estimate)));

    const NormValue z = mode_weighted_norm(sampled(1, grid, nothing), 0.5, false);
    CHECK(z.total == 0.0);
}

TEST_CASE("wave mode norm against the closed form")
{
    // int_0^inf e^{-2t} cos^2(5t) dt = 1/4 + 1/104
    const auto grid = TimeGrid::make(20.0, 1e-3);
    const Kernel wave({1.0}, {0.0});
    Scenario sc(wave, 5, {0.0, 0.0, 0.0, 0.0, 1.0}, grid);
    const Field f = solve_field(sc);
    const NormValue v = mode_weighted_norm(f.modes[4], 1.0, false);
    CHECK(v.total * v.total == doctest::Approx(0.25 + 1.0 / 104.0).epsilon(1e-4));
}

TEST_CASE("field norms")
{
    const auto grid = TimeGrid::make(30.0, 1e-3);
    Field one{Kernel({1.0}, {0.0}), {sampled(1, grid, decay)}};
    const NormValue m = mode_weighted_norm(one.modes[0], 0.5, false);
    CHECK(field_norm(one, 3.0, 0.5, false).total == doctest::Approx(m.total));
    CHECK(field_norm(one, 0.0, 0.5, false).total == doctest::Approx(m.total));

    Field two{Kernel({1.0}, {0.0}), {sampled(1, grid, decay), sampled(2, grid, decay)}};
    CHECK(field_norm(two, 1.0, 0.5, false).total == doctest::Approx(m.total * std::sqrt(5.0)));

    Field zero{Kernel({1.0}, {0.0}), {sampled(1, grid, nothing), sampled(2, grid, nothing)}};
    CHECK(field_norm(zero, 1.0, 0.5, false).total == 0.0);
}

TEST_CASE("continuity modulus")
{
    const auto grid = TimeGrid::make(1.0, 1e-4);
    Scenario sc(Kernel({1.0}, {0.0}), 1, {1.0}, grid);
    const Field f = solve_field(sc);
    CHECK(continuity_modulus(f, 0.0, 0.2, 0.0) == 0.0);
    for (double delta : {0.1, 0.05, 0.01}) {
        const double v = continuity_modulus(f, 0.0, 0.0, delta);
        CHECK(v == doctest::Approx(1.0 - std::cos(delta)).epsilon(1e-4));
        CHECK(v == doctest::Approx(0.5 * delta * delta).epsilon(0.01));
    }
    CHECK_THROWS_AS(continuity_modulus(f, 0.0, 0.9, 0.2), Error);
    CHECK_THROWS_AS(continuity_modulus(f, 0.0, 0.2, 0.00015), Error);
}

}
