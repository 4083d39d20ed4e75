#ifndef MEMOHEAT_CLI_HPP
#define MEMOHEAT_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace memoheat::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_fail = 1;
inline constexpr int exit_usage = 2;

// Runs `memoheat <subcommand> ...` (args exclude the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args);

} // namespace memoheat::cli

#endif
