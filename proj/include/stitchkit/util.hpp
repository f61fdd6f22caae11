// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace stitchkit {

/// Worker cap: min(hardware concurrency, STITCHKIT_THREADS when set).
/// Values <= 1 mean sequential.
std::size_t thread_cap();

/// Runs fn(i) for i in [0, n). Each index writes only its own output slot,
/// so results are deterministic regardless of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn);

} // namespace stitchkit
