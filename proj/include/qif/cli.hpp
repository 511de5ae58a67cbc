// Copyright (c) qif-toolkit contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qif {

enum ExitCode : int {
    kExitOk = 0,
    kExitViolated = 1, // property fails, comparison inconclusive, or no witness exists
    kExitUsage = 2,    // bad arguments, unreadable or malformed input
    kExitCapacity = 3,
};

struct CliConfig {
    std::size_t capacity_bits = 24;
    double epsilon = 1e-9;
    std::string format = "text"; // text | json
    std::string engine = "brute"; // brute | sat
    std::uint64_t seed = 0;
};

/// Runs one command line (without the program name). Output goes to `out`,
/// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qif
