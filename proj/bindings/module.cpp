#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "warrantscore/errors.hpp"
#include "warrantscore/gateway.hpp"
#include "warrantscore/json_codec.hpp"
#include "warrantscore/metrics.hpp"
#include "warrantscore/mock_backend.hpp"
#include "warrantscore/pipeline.hpp"
#include "warrantscore/spans.hpp"
#include "warrantscore/stats.hpp"
#include "warrantscore/text_stats.hpp"
#include "warrantscore/types.hpp"
#include "warrantscore/validate.hpp"

namespace py = pybind11;
namespace ws = warrantscore;

namespace {

std::optional<ws::Span> span_from_pair(const std::optional<std::pair<std::size_t, std::size_t>>& p) {
    if (!p) return std::nullopt;
    return ws::Span{p->first, p->second};
}

std::optional<std::pair<std::size_t, std::size_t>> span_to_pair(const std::optional<ws::Span>& s) {
    if (!s) return std::nullopt;
    return std::make_pair(s->start, s->end);
}

// Runs the full pipeline against the deterministic mock backend; the quickest
// way to get judged WarrantRecords without any network.
std::vector<ws::WarrantRecord> mock_warrants(const ws::Review& review) {
    ws::gateway::MockGateway gw;
    ws::pipeline::RoleProfiles profiles;
    profiles.generator.role = ws::gateway::Role::generator;
    profiles.generator.model = "mock-generator";
    profiles.acceptability.role = ws::gateway::Role::acceptability;
    profiles.acceptability.model = "mock-acceptability";
    profiles.judge.role = ws::gateway::Role::judge;
    profiles.judge.model = "mock-judge";
    ws::pipeline::PipelineConfig cfg;
    auto result = ws::pipeline::run_pipeline(review, gw, profiles, cfg, nullptr);
    if (!result.failures.empty()) {
        throw ws::Error("pipeline failure at claim " +
                        std::to_string(result.failures.front().claim_index) + ": " +
                        result.failures.front().message);
    }
    return std::move(result.records);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "substantiation metrics for peer-review comments";

    py::register_exception<ws::Error>(m, "WarrantscoreError");

    py::class_<ws::EvidenceUnit>(m, "EvidenceUnit")
        .def(py::init([](const std::string& text,
                         std::optional<std::pair<std::size_t, std::size_t>> span) {
                 return ws::EvidenceUnit{text, span_from_pair(span)};
             }),
             py::arg("evidence_text"), py::arg("evidence_span") = std::nullopt)
        .def_readwrite("evidence_text", &ws::EvidenceUnit::evidence_text)
        .def_property(
            "evidence_span",
            [](const ws::EvidenceUnit& e) { return span_to_pair(e.evidence_span); },
            [](ws::EvidenceUnit& e, std::optional<std::pair<std::size_t, std::size_t>> p) {
                e.evidence_span = span_from_pair(p);
            });

    py::class_<ws::ClaimUnit>(m, "ClaimUnit")
        .def(py::init([](int index, const std::string& text,
                         std::optional<std::pair<std::size_t, std::size_t>> span,
                         std::optional<ws::EvidenceUnit> evidence) {
                 return ws::ClaimUnit{index, text, span_from_pair(span), std::move(evidence)};
             }),
             py::arg("index"), py::arg("claim_text"), py::arg("claim_span") = std::nullopt,
             py::arg("evidence") = std::nullopt)
        .def_readwrite("index", &ws::ClaimUnit::index)
        .def_readwrite("claim_text", &ws::ClaimUnit::claim_text)
        .def_readwrite("evidence", &ws::ClaimUnit::evidence)
        .def_property(
            "claim_span",
            [](const ws::ClaimUnit& c) { return span_to_pair(c.claim_span); },
            [](ws::ClaimUnit& c, std::optional<std::pair<std::size_t, std::size_t>> p) {
                c.claim_span = span_from_pair(p);
            });

    py::class_<ws::Review>(m, "Review")
        .def(py::init([](const std::string& id, const std::string& text,
                         const std::string& source, std::vector<ws::ClaimUnit> claims,
                         std::map<std::string, std::vector<int>> human_scores) {
                 ws::Review r;
                 r.id = id;
                 r.text = text;
                 r.source = source;
                 r.claims = std::move(claims);
                 r.human_scores = std::move(human_scores);
                 return r;
             }),
             py::arg("id"), py::arg("text"), py::arg("source") = "",
             py::arg("claims") = std::vector<ws::ClaimUnit>{},
             py::arg("human_scores") = std::map<std::string, std::vector<int>>{})
        .def_readwrite("id", &ws::Review::id)
        .def_readwrite("text", &ws::Review::text)
        .def_readwrite("source", &ws::Review::source)
        .def_readwrite("claims", &ws::Review::claims)
        .def_readwrite("human_scores", &ws::Review::human_scores);

    py::class_<ws::WarrantAttempt>(m, "WarrantAttempt")
        .def_readonly("warrant", &ws::WarrantAttempt::warrant)
        .def_readonly("accepted", &ws::WarrantAttempt::accepted);

    py::class_<ws::WarrantRecord>(m, "WarrantRecord")
        .def_readonly("review_id", &ws::WarrantRecord::review_id)
        .def_readonly("claim_index", &ws::WarrantRecord::claim_index)
        .def_readonly("warrant_text", &ws::WarrantRecord::warrant_text)
        .def_readonly("attempts", &ws::WarrantRecord::attempts)
        .def_readonly("likert_v", &ws::WarrantRecord::likert_v)
        .def_readonly("value_V", &ws::WarrantRecord::value_V)
        .def_property_readonly("fallback", [](const ws::WarrantRecord& r) {
            return ws::to_string(r.fallback);
        });

    py::class_<ws::MetricFlags>(m, "MetricFlags")
        .def_readonly("no_claims", &ws::MetricFlags::no_claims)
        .def_readonly("judge_fallbacks", &ws::MetricFlags::judge_fallbacks)
        .def_readonly("no_embeddings", &ws::MetricFlags::no_embeddings);

    py::class_<ws::MetricReport>(m, "MetricReport")
        .def_readonly("review_id", &ws::MetricReport::review_id)
        .def_readonly("review_len", &ws::MetricReport::review_len)
        .def_readonly("fre", &ws::MetricReport::fre)
        .def_readonly("ttr", &ws::MetricReport::ttr)
        .def_readonly("supported_claims", &ws::MetricReport::supported_claims)
        .def_readonly("substan_score", &ws::MetricReport::substan_score)
        .def_readonly("coherence_rate", &ws::MetricReport::coherence_rate)
        .def_readonly("coherence_score", &ws::MetricReport::coherence_score)
        .def_readonly("warrant_rate", &ws::MetricReport::warrant_rate)
        .def_readonly("warrant_score", &ws::MetricReport::warrant_score)
        .def_readonly("flags", &ws::MetricReport::flags);

    m.def("parse_review", [](const std::string& line) { return ws::parse_review(line); });
    m.def("serialize_review", &ws::serialize_review);
    m.def("parse_warrant_record",
          [](const std::string& line) { return ws::parse_warrant_record(line); });
    m.def("serialize_warrant_record", &ws::serialize_warrant_record);
    m.def("serialize_metric_report", &ws::serialize_metric_report);
    m.def("validate_review", [](const ws::Review& r) {
        std::vector<std::string> messages;
        for (const auto& v : ws::validate_review(r)) messages.push_back(v.message);
        return messages;
    });

    m.def("word_count", [](const std::string& s) { return ws::text::word_count(s); });
    m.def("sentence_count", [](const std::string& s) { return ws::text::sentence_count(s); });
    m.def("syllable_count", [](const std::string& s) { return ws::text::syllable_count(s); });
    m.def("flesch_reading_ease",
          [](const std::string& s) { return ws::text::flesch_reading_ease(s); });
    m.def("type_token_ratio",
          [](const std::string& s) { return ws::text::type_token_ratio(s); });

    m.def("support_score", &ws::metrics::support_score);
    m.def("supported_claims",
          [](const ws::Review& r) { return ws::metrics::supported_claims(r).value; });
    m.def("substan_score",
          [](const ws::Review& r) { return ws::metrics::substan_score(r).value; });
    m.def("warrant_rate", [](const ws::Review& r, const std::vector<ws::WarrantRecord>& w) {
        return ws::metrics::warrant_rate(r, w).value;
    });
    m.def("warrant_score", [](const ws::Review& r, const std::vector<ws::WarrantRecord>& w) {
        return ws::metrics::warrant_score(r, w).value;
    });
    m.def("coherence_rate",
          [](const ws::Review& r, const std::vector<std::optional<double>>& sims) {
              return ws::metrics::coherence_rate(r, sims).value;
          });
    m.def("compute_report",
          [](const ws::Review& r, const std::vector<ws::WarrantRecord>& w,
             std::optional<std::vector<std::optional<double>>> sims) {
              return ws::metrics::compute_report(r, w, sims ? &*sims : nullptr);
          },
          py::arg("review"), py::arg("warrants"), py::arg("similarities") = std::nullopt);

    m.def("mock_warrants", &mock_warrants,
          "Deterministic mock-backend pipeline over one review");
    m.def("mock_embedding", &ws::gateway::mock_embedding, py::arg("text"),
          py::arg("dimension") = 64);
    m.def("cosine_similarity", &ws::gateway::cosine_similarity);

    m.def("aggregate_max", &ws::stats::aggregate_max);
    m.def("spearman", &ws::stats::spearman);
    m.def("t_test_independent_one_sided",
          [](const std::vector<double>& a, const std::vector<double>& b) {
              const auto r = ws::stats::t_test_independent_one_sided(a, b);
              return std::make_pair(r.t, r.p);
          });
    m.def("t_test_paired", [](const std::vector<double>& a, const std::vector<double>& b) {
        const auto r = ws::stats::t_test_paired(a, b);
        return std::make_pair(r.t, r.p);
    });
    m.def("cohens_d",
          [](const std::vector<double>& a, const std::vector<double>& b,
             const std::string& kind) {
              if (kind == "independent") {
                  return ws::stats::cohens_d(a, b, ws::stats::EffectKind::independent);
              }
              if (kind == "paired") {
                  return ws::stats::cohens_d(a, b, ws::stats::EffectKind::paired);
              }
              throw ws::DataError("kind must be independent or paired");
          },
          py::arg("a"), py::arg("b"), py::arg("kind") = "independent");
    m.def("percentile", &ws::stats::percentile);

    m.def("decode_bio",
          [](const std::vector<std::string>& tokens, const std::vector<std::string>& tags,
             const std::vector<std::size_t>& offsets, std::optional<std::size_t> text_length) {
              ws::spans::BioTagSequence seq;
              seq.tokens = tokens;
              for (const std::string& t : tags) {
                  seq.tags.push_back(ws::spans::bio_tag_from_string(t));
              }
              seq.offsets = offsets;
              seq.text_length = text_length;
              const auto decoded = ws::spans::decode_bio(seq);
              std::vector<std::pair<std::size_t, std::size_t>> out;
              for (const ws::Span& s : decoded.spans) out.emplace_back(s.start, s.end);
              return std::make_pair(out, decoded.dropped_orphans);
          },
          py::arg("tokens"), py::arg("tags"), py::arg("offsets"),
          py::arg("text_length") = std::nullopt);
    m.def("trim_span",
          [](const std::string& text, std::pair<std::size_t, std::size_t> span) {
              const ws::Span trimmed = ws::spans::trim_span(text, {span.first, span.second});
              return std::make_pair(trimmed.start, trimmed.end);
          });
    m.def("span_prf",
          [](const std::vector<std::pair<std::size_t, std::size_t>>& pred,
             const std::vector<std::pair<std::size_t, std::size_t>>& gold) {
              std::vector<ws::Span> p;
              std::vector<ws::Span> g;
              for (const auto& s : pred) p.push_back({s.first, s.second});
              for (const auto& s : gold) g.push_back({s.first, s.second});
              const auto r = ws::spans::span_prf(p, g);
              return std::make_tuple(r.precision, r.recall, r.f1);
          });
    m.def("qa_em_f1", [](const std::string& pred, const std::string& gold) {
        const auto r = ws::spans::qa_em_f1(pred, gold);
        return std::make_pair(r.em, r.token_f1);
    });

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}
