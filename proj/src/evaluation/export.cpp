#include "safebandit/evaluation/export.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace safebandit {

std::string format_double(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (result.ec != std::errc())
    throw std::runtime_error("format_double: conversion failed");
  return std::string(buffer, result.ptr);
}

std::string fingerprint(const std::string& canonical_text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buffer[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buffer[i] = digits[hash & 0xF];
    hash >>= 4;
  }
  return std::string(buffer, 16);
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

}  // namespace

void export_series_csv(const std::vector<CellSeries>& cells,
                       const std::filesystem::path& path,
                       const std::string& config_fingerprint) {
  std::ofstream out = open_for_write(path);
  out << "# config=" << config_fingerprint << "\n";
  out << "step,metric,mean,sem,policy,alpha,realizations\n";
  for (const CellSeries& cell : cells) {
    const std::string alpha = format_double(cell.alpha);
    const std::string realizations =
        std::to_string(cell.series.realizations());
    const bool emit_sem = cell.series.realizations() >= 2;
    for (int m = 0; m < kNumSeriesMetrics; ++m) {
      for (int i = 0; i < cell.series.horizon(); ++i) {
        const MeanSem value = cell.series.at(m, i);
        out << (i + 1) << ',' << kSeriesMetricNames[m] << ','
            << format_double(value.mean) << ','
            << (emit_sem ? format_double(value.sem) : std::string()) << ','
            << cell.policy << ',' << alpha << ',' << realizations << '\n';
      }
    }
  }
  if (!out.flush())
    throw std::runtime_error("write failed: " + path.string());
}

void export_table_csv(const std::vector<CellSeries>& cells,
                      const std::filesystem::path& path,
                      const std::string& config_fingerprint) {
  std::ofstream out = open_for_write(path);
  out << "# config=" << config_fingerprint << "\n";
  out << "policy,alpha,mean,sem,realizations\n";
  for (const CellSeries& cell : cells) {
    const MeanSem value = cell.series.normalized_last_k();
    const bool emit_sem = cell.series.realizations() >= 2;
    out << cell.policy << ',' << format_double(cell.alpha) << ','
        << format_double(value.mean) << ','
        << (emit_sem ? format_double(value.sem) : std::string()) << ','
        << cell.series.realizations() << '\n';
  }
  if (!out.flush())
    throw std::runtime_error("write failed: " + path.string());
}

}  // namespace safebandit
