#pragma once

/**
 * @file cli.hpp
 * @brief Command-line front end: list, check, grid and report subcommands.
 *
 * Exit codes: 0 when every non-skipped check passes, 1 when a check fails
 * (or a grid study is not within its band), 2 for usage and configuration
 * errors.
 */

#include <iosfwd>
#include <string>
#include <vector>

namespace hl::cli {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace hl::cli
