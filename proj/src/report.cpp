// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "stitchkit/report.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

#include <json.hpp>

namespace stitchkit {

namespace {

std::string format_mpki(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string distance_label(std::uint64_t d) {
  return d == std::numeric_limits<std::uint64_t>::max() ? "inf"
                                                        : std::to_string(d);
}

nlohmann::ordered_json metrics_to_json(const LayoutMetrics &m) {
  nlohmann::ordered_json j;
  j["total_transfers"] = m.total_transfers;
  nlohmann::ordered_json d;
  for (const auto &[dist, count] : m.d_close_counts)
    d[distance_label(dist)] = count;
  j["d_close_counts"] = std::move(d);
  j["adjacent_transfers"] = m.adjacent_transfers;
  j["simulated_icache_mpki"] =
      m.simulated_icache_mpki ? nlohmann::ordered_json(*m.simulated_icache_mpki)
                              : nlohmann::ordered_json(nullptr);
  j["simulated_itlb_mpki"] =
      m.simulated_itlb_mpki ? nlohmann::ordered_json(*m.simulated_itlb_mpki)
                            : nlohmann::ordered_json(nullptr);
  return j;
}

std::vector<std::string> metric_headers(const LayoutMetrics &m) {
  std::vector<std::string> headers = {"total"};
  for (const auto &[dist, count] : m.d_close_counts)
    headers.push_back("d<=" + distance_label(dist));
  headers.push_back("adjacent");
  if (m.simulated_icache_mpki)
    headers.push_back("icache_mpki");
  if (m.simulated_itlb_mpki)
    headers.push_back("itlb_mpki");
  return headers;
}

std::vector<std::string> metric_cells(const LayoutMetrics &m) {
  std::vector<std::string> cells = {std::to_string(m.total_transfers)};
  for (const auto &[dist, count] : m.d_close_counts)
    cells.push_back(std::to_string(count));
  cells.push_back(std::to_string(m.adjacent_transfers));
  if (m.simulated_icache_mpki)
    cells.push_back(format_mpki(*m.simulated_icache_mpki));
  if (m.simulated_itlb_mpki)
    cells.push_back(format_mpki(*m.simulated_itlb_mpki));
  return cells;
}

} // namespace

std::string metrics_kv(const LayoutMetrics &m) {
  std::string out;
  out += "total_transfers=" + std::to_string(m.total_transfers) + "\n";
  for (const auto &[dist, count] : m.d_close_counts)
    out += "d_close_" + distance_label(dist) + "=" + std::to_string(count) +
           "\n";
  out += "adjacent_transfers=" + std::to_string(m.adjacent_transfers) + "\n";
  if (m.simulated_icache_mpki)
    out += "icache_mpki=" + format_mpki(*m.simulated_icache_mpki) + "\n";
  if (m.simulated_itlb_mpki)
    out += "itlb_mpki=" + format_mpki(*m.simulated_itlb_mpki) + "\n";
  return out;
}

std::string metrics_json(const LayoutMetrics &m) {
  return metrics_to_json(m).dump() + "\n";
}

std::string
metrics_table(const std::vector<std::pair<std::string, LayoutMetrics>> &rows) {
  if (rows.empty())
    return "";
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header = {"layout"};
  auto metric_cols = metric_headers(rows.front().second);
  header.insert(header.end(), metric_cols.begin(), metric_cols.end());
  grid.push_back(header);
  for (const auto &[name, metrics] : rows) {
    std::vector<std::string> row = {name};
    auto cells = metric_cells(metrics);
    row.insert(row.end(), cells.begin(), cells.end());
    grid.push_back(row);
  }
  std::vector<std::size_t> widths(grid.front().size(), 0);
  for (const auto &row : grid)
    for (std::size_t c = 0; c < row.size(); ++c)
      widths[c] = std::max(widths[c], row[c].size());
  std::string out;
  for (const auto &row : grid) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c)
        out += "  ";
      out += row[c];
      out.append(widths[c] - row[c].size(), ' ');
    }
    while (!out.empty() && out.back() == ' ')
      out.pop_back();
    out += '\n';
  }
  return out;
}

std::string metrics_json_rows(
    const std::vector<std::pair<std::string, LayoutMetrics>> &rows) {
  nlohmann::ordered_json j;
  for (const auto &[name, metrics] : rows)
    j[name] = metrics_to_json(metrics);
  return j.dump() + "\n";
}

} // namespace stitchkit
