#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "warrantscore/types.hpp"

// Canonical JSON codecs. Serialization emits a fixed field order so that
// serialize -> parse -> serialize is byte-identical; unknown Review fields
// are carried through in their original relative order.
namespace warrantscore {

nlohmann::ordered_json review_to_json(const Review& review);
Review review_from_json(const nlohmann::ordered_json& j);
std::string serialize_review(const Review& review);
Review parse_review(std::string_view line);

nlohmann::ordered_json warrant_record_to_json(const WarrantRecord& record);
WarrantRecord warrant_record_from_json(const nlohmann::ordered_json& j);
std::string serialize_warrant_record(const WarrantRecord& record);
WarrantRecord parse_warrant_record(std::string_view line);

nlohmann::ordered_json metric_report_to_json(const MetricReport& report);
MetricReport metric_report_from_json(const nlohmann::ordered_json& j);
std::string serialize_metric_report(const MetricReport& report);
MetricReport parse_metric_report(std::string_view line);

} // namespace warrantscore
