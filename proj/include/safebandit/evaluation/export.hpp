#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "safebandit/evaluation/aggregate.hpp"

namespace safebandit {

/// Shortest round-trip decimal form of a double (locale independent), so
/// exported files are byte-stable and parse back to the exact value.
std::string format_double(double value);

/// FNV-1a over the canonical config text; 16 hex characters.
std::string fingerprint(const std::string& canonical_text);

/// One (policy, alpha) experiment cell with its aggregated series.
struct CellSeries {
  std::string policy;
  double alpha = 0.0;
  AggregateSeries series;
};

/// Writes the long-format series CSV:
///   step,metric,mean,sem,policy,alpha,realizations
/// preceded by a `# config=<fingerprint>` comment line. The sem column is
/// left empty when fewer than two realizations back the cell.
void export_series_csv(const std::vector<CellSeries>& cells,
                       const std::filesystem::path& path,
                       const std::string& config_fingerprint);

/// Writes the normalized-constraint table:
///   policy,alpha,mean,sem,realizations
void export_table_csv(const std::vector<CellSeries>& cells,
                      const std::filesystem::path& path,
                      const std::string& config_fingerprint);

}  // namespace safebandit
