#include "warrantscore/io.hpp"

#include <atomic>
#include <fstream>

#include <unistd.h>

#include "warrantscore/errors.hpp"
#include "warrantscore/json_codec.hpp"

namespace warrantscore::io {

void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    static std::atomic<unsigned> counter{0};
    const std::filesystem::path tmp = path.string() + ".tmp." + std::to_string(::getpid()) +
                                      "." + std::to_string(counter.fetch_add(1));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write: " + tmp.string());
        out << content;
        if (!out) throw DataError("short write: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read: " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<WarrantRecord> read_warrant_sidecar(const std::filesystem::path& path) {
    std::vector<WarrantRecord> records;
    for (const std::string& line : read_lines(path)) {
        if (line.empty()) continue;
        records.push_back(parse_warrant_record(line));
    }
    return records;
}

void write_warrant_sidecar(const std::filesystem::path& path,
                           const std::vector<WarrantRecord>& records) {
    std::string content;
    for (const WarrantRecord& record : records) {
        content += serialize_warrant_record(record);
        content.push_back('\n');
    }
    atomic_write_file(path, content);
}

std::vector<MetricReport> read_metric_reports(const std::filesystem::path& path) {
    std::vector<MetricReport> reports;
    for (const std::string& line : read_lines(path)) {
        if (line.empty()) continue;
        reports.push_back(parse_metric_report(line));
    }
    return reports;
}

void write_metric_reports(const std::filesystem::path& path,
                          const std::vector<MetricReport>& reports) {
    std::string content;
    for (const MetricReport& report : reports) {
        content += serialize_metric_report(report);
        content.push_back('\n');
    }
    atomic_write_file(path, content);
}

} // namespace warrantscore::io
