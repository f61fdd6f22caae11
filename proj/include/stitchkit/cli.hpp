// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stitchkit::cli {

/// Runs one CLI invocation (args exclude the program name). Reports and data
/// go to `out`; diagnostics go to `err`. Returns the process exit code:
/// 0 iff no error path was taken.
int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

} // namespace stitchkit::cli
