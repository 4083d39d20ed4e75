#ifndef MEMOHEAT_SCENARIO_HPP
#define MEMOHEAT_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "memoheat/kernel.hpp"
#include "memoheat/modes.hpp"

namespace memoheat {

struct Scenario {
    Kernel kernel;
    int N = 1;
    std::vector<double> xi;  // xi_n for n = 1..N
    Forcing forcing;
    TimeGrid grid;
    double eps = 1.0;
    double s = 0.0;
    SolveMethod method = SolveMethod::ode;
    // Exponent of the weight attached to the forcing derivative in the strong
    // estimates (kept apart from the kernel moment gamma).
    double forcing_weight = 0.0;
    // Number of generator terms when the kernel came from a generator rule.
    std::size_t generated_terms = 0;

    Scenario(Kernel k, int modes, std::vector<double> data, TimeGrid g)
        : kernel(std::move(k)), N(modes), xi(std::move(data)), grid(g) {}

    // Throws config_error when an invariant is violated.
    void validate() const;

    // Canonical JSON (all defaults filled in), used for the run header.
    std::string canonical_json() const;
    std::string digest() const;
};

// Parses the documented scenario schema.  Errors: parse_error (with line and
// column), schema_error (naming the field), config_error (invariants).
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::string hex_digest(std::string_view bytes);

} // namespace memoheat

#endif
