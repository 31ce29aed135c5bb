#include "warrantscore/types.hpp"

#include "warrantscore/errors.hpp"

namespace warrantscore {

std::string to_string(Variant v) {
    return v == Variant::original ? "original" : "elongated";
}

std::string to_string(Sufficiency s) {
    return s == Sufficiency::sufficient ? "sufficient" : "deficient";
}

std::string to_string(Fallback f) {
    switch (f) {
        case Fallback::none: return "none";
        case Fallback::empty_evidence: return "empty_evidence";
        case Fallback::empty_warrant: return "empty_warrant";
        case Fallback::judge_parse_failure: return "judge_parse_failure";
    }
    return "none";
}

Variant variant_from_string(const std::string& s) {
    if (s == "original") return Variant::original;
    if (s == "elongated") return Variant::elongated;
    throw DataError("unknown variant: " + s);
}

Sufficiency sufficiency_from_string(const std::string& s) {
    if (s == "sufficient") return Sufficiency::sufficient;
    if (s == "deficient") return Sufficiency::deficient;
    throw DataError("unknown sufficiency: " + s);
}

Fallback fallback_from_string(const std::string& s) {
    if (s == "none") return Fallback::none;
    if (s == "empty_evidence") return Fallback::empty_evidence;
    if (s == "empty_warrant") return Fallback::empty_warrant;
    if (s == "judge_parse_failure") return Fallback::judge_parse_failure;
    throw DataError("unknown fallback: " + s);
}

} // namespace warrantscore
