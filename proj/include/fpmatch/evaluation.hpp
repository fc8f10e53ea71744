#pragma once

// FVC-style verification protocol and error-rate reporting.

#include "fpmatch/core_model.hpp"
#include "fpmatch/template_io.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace fpmatch {

enum class ComparisonKind { Genuine, Impostor };

/// Impostor pairing. AllPairs compares every cross-subject impression pair
/// (C(S,2) * I^2 comparisons); FirstImpressions only the first impression of
/// each subject (C(S,2)).
enum class ImpostorRule { AllPairs, FirstImpressions };

/// One planned comparison; `query` and `reference` index the manifest.
/// The query is always the lexicographically smaller (subject, impression).
struct ComparisonPlan {
    ComparisonKind kind = ComparisonKind::Genuine;
    std::size_t query = 0;
    std::size_t reference = 0;
};

struct ComparisonRecord {
    ComparisonKind kind = ComparisonKind::Genuine;
    int subject_a = 0;
    int imp_a = 0;
    int subject_b = 0;
    int imp_b = 0;
    double score = 0.0;
    double millis = 0.0;
};

struct ScoreSet {
    std::vector<double> genuine;
    std::vector<double> impostor;
    std::vector<double> timings;  // ms, one per completed comparison
    std::vector<ComparisonRecord> records;  // plan order
    std::size_t skipped = 0;
    std::vector<std::string> load_errors;  // one line per unreadable entry
    ImpostorRule impostor_rule = ImpostorRule::AllPairs;
};

struct ProtocolOptions {
    ImpostorRule impostor_rule = ImpostorRule::AllPairs;
    unsigned jobs = 1;
    /// When false no clocks are read and every duration is reported as 0, so
    /// outputs are byte-reproducible.
    bool measure_time = true;
};

std::vector<ComparisonPlan> plan_protocol(const DatasetManifest& manifest, ImpostorRule rule);

/// Loads every manifest entry once, then runs the planned comparisons.
/// Entries that fail to load are reported in load_errors; comparisons that
/// touch them are skipped and counted.
ScoreSet run_protocol(const DatasetManifest& manifest, const MatchConfig& cfg, const ProtocolOptions& options = {});

struct RocPoint {
    double threshold = 0.0;
    double far = 0.0;  // percent of impostor scores >= threshold
    double frr = 0.0;  // percent of genuine scores < threshold
};

struct ScoreSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct EvalReport {
    double eer = 0.0;  // percent
    std::vector<RocPoint> roc;  // ascending threshold
    double mean_time_ms = 0.0;
    std::size_t genuine_count = 0;
    std::size_t impostor_count = 0;
    std::size_t skipped_count = 0;
    ScoreSummary genuine_summary;
    ScoreSummary impostor_summary;
    ImpostorRule impostor_rule = ImpostorRule::AllPairs;
};

/// Throws EmptyScores if either list is empty.
EvalReport compute_eer(const ScoreSet& scores);

/// Columns: kind,subject_a,imp_a,subject_b,imp_b,score,millis
std::string write_scores_csv(const ScoreSet& scores);

std::string write_report_json(const EvalReport& report);

}  // namespace fpmatch
