#pragma once

// Iterative align / prune / reweight matching of two minutia templates.

#include "fpmatch/core_model.hpp"

#include <cstddef>
#include <vector>

namespace fpmatch {

struct IterationRecord {
    double threshold = 0.0;
    AlignmentParams alignment;
    bool ill_posed = false;
    std::size_t removed = 0;
    std::size_t queue_len_after = 0;
    double objective_after = 0.0;  // 0 when the surviving pairs carry no weight
};

struct MatchResult {
    double score = 0.0;
    std::vector<PairEntry> matched_pairs;
    AlignmentParams final_alignment;
    std::vector<IterationRecord> iterations;
    bool converged = false;
};

/// c1 * D^2 + c2 * Theta^2 for the pair after moving the query minutia by `p`.
double pair_displacement(const Minutia& mi, const Minutia& mk, const AlignmentParams& p, const MatchConfig& cfg);

/// Drops every pair whose displacement exceeds `threshold` and reweights the
/// survivors as 1 - displacement / threshold. Returns the number dropped.
std::size_t refine_once(PairQueue& q, const MinutiaTemplate& u, const MinutiaTemplate& v,
                        const AlignmentParams& p, double threshold, const MatchConfig& cfg);

/// Greedy one-to-one selection by descending weight; ties go to the lower
/// query index, then the lower template index.
std::vector<PairEntry> resolve_one_to_one(const PairQueue& q);

/// (sum of weights)^2 / (n_u * n_v), clamped to [0, 1].
double match_score(const std::vector<PairEntry>& pairs, std::size_t n_u, std::size_t n_v);

/// Full matcher. Empty inputs give score 0 and converged = false.
MatchResult run_matcher(const MinutiaTemplate& u, const MinutiaTemplate& v, const MatchConfig& cfg);

/// Upper bound on refine steps any single run may take.
std::size_t refine_step_bound(std::size_t n_u, std::size_t n_v, const MatchConfig& cfg);

}  // namespace fpmatch
