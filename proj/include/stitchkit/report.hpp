// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "stitchkit/evaluation.hpp"

namespace stitchkit {

/// Machine-readable key=value lines.
std::string metrics_kv(const LayoutMetrics &m);

/// One JSON object with the LayoutMetrics fields.
std::string metrics_json(const LayoutMetrics &m);

/// Aligned table, one row per named layout.
std::string
metrics_table(const std::vector<std::pair<std::string, LayoutMetrics>> &rows);

/// JSON object keyed by row name.
std::string
metrics_json_rows(const std::vector<std::pair<std::string, LayoutMetrics>> &rows);

} // namespace stitchkit
