#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "warrantscore/types.hpp"

namespace warrantscore::io {

// Whole-file write via temp + rename in the destination directory; readers
// never observe a partial file.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

// Throws DataError if the file cannot be read.
std::vector<std::string> read_lines(const std::filesystem::path& path);

std::vector<WarrantRecord> read_warrant_sidecar(const std::filesystem::path& path);
void write_warrant_sidecar(const std::filesystem::path& path,
                           const std::vector<WarrantRecord>& records);

std::vector<MetricReport> read_metric_reports(const std::filesystem::path& path);
void write_metric_reports(const std::filesystem::path& path,
                          const std::vector<MetricReport>& reports);

} // namespace warrantscore::io
