#include <string>
#include <vector>

#include "memoheat/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return memoheat::cli::run(args);
}
