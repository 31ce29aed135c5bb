"""Substantiation metrics for peer-review comments."""

from warrantscore._core import (  # noqa: F401
    ClaimUnit,
    EvidenceUnit,
    MetricFlags,
    MetricReport,
    Review,
    WarrantAttempt,
    WarrantRecord,
    WarrantscoreError,
    __version__,
    aggregate_max,
    cohens_d,
    coherence_rate,
    compute_report,
    cosine_similarity,
    decode_bio,
    flesch_reading_ease,
    mock_embedding,
    mock_warrants,
    parse_review,
    parse_warrant_record,
    percentile,
    qa_em_f1,
    sentence_count,
    serialize_metric_report,
    serialize_review,
    serialize_warrant_record,
    span_prf,
    spearman,
    substan_score,
    support_score,
    supported_claims,
    syllable_count,
    t_test_independent_one_sided,
    t_test_paired,
    trim_span,
    type_token_ratio,
    validate_review,
    warrant_rate,
    warrant_score,
    word_count,
)
