#ifndef MEMOHEAT_ERROR_HPP
#define MEMOHEAT_ERROR_HPP

#include <optional>
#include <stdexcept>
#include <string>

namespace memoheat {

enum class ErrorKind {
    empty_kernel,
    length_mismatch,
    negative_amplitude,
    non_increasing_rates,
    invalid_argument,
    negative_time,
    pole_hit,
    zero_hit,
    ray_angle,
    invalid_grid,
    off_grid,
    unknown_forcing,
    inadmissible_index,
    non_convergence,
    parse_error,
    schema_error,
    config_error,
};

const char* to_string(ErrorKind kind) noexcept;

// Every library failure is reported through this type; `kind` lets callers
// (and tests) tell validation failures apart without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    // Mode index the failure belongs to, when it came out of a field solve.
    std::optional<int> mode() const noexcept { return mode_; }
    Error with_mode(int n) const;

private:
    ErrorKind kind_;
    std::optional<int> mode_;
};

} // namespace memoheat

#endif
