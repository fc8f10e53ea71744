#include "fpmatch/match_loop.hpp"

#include "fpmatch/errors.hpp"
#include "fpmatch/pair_weights.hpp"
#include "fpmatch/registration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fpmatch {

double pair_displacement(const Minutia& mi, const Minutia& mk, const AlignmentParams& p, const MatchConfig& cfg)
{
    const Point2 moved = transform_point(mi, p);
    const double dx = moved.x - mk.x;
    const double dy = moved.y - mk.y;
    const double ang = angle_diff(mi.direction + p.theta, mk.direction);
    return cfg.c1 * (dx * dx + dy * dy) + cfg.c2 * ang * ang;
}

std::size_t refine_once(PairQueue& q, const MinutiaTemplate& u, const MinutiaTemplate& v,
                        const AlignmentParams& p, double threshold, const MatchConfig& cfg)
{
    if (!(threshold > 0.0))
        throw ConfigError("refinement threshold must be positive");

    const double th = deg_to_rad(p.theta);
    const double cs = std::cos(th);
    const double sn = std::sin(th);
    const std::size_t before = q.entries.size();

    auto keep = q.entries.begin();
    for (auto it = q.entries.begin(); it != q.entries.end(); ++it) {
        const Minutia& mi = u.minutiae[it->query_index];
        const Minutia& mk = v.minutiae[it->template_index];
        const double dx = mi.x * cs - mi.y * sn + p.a - mk.x;
        const double dy = mi.x * sn + mi.y * cs + p.b - mk.y;
        const double ang = angle_diff(mi.direction + p.theta, mk.direction);
        const double delta = cfg.c1 * (dx * dx + dy * dy) + cfg.c2 * ang * ang;
        if (delta > threshold)
            continue;
        *keep = *it;
        keep->weight = 1.0 - delta / threshold;
        ++keep;
    }
    q.entries.erase(keep, q.entries.end());
    return before - q.entries.size();
}

std::vector<PairEntry> resolve_one_to_one(const PairQueue& q)
{
    std::vector<PairEntry> sorted = q.entries;
    std::sort(sorted.begin(), sorted.end(), [](const PairEntry& l, const PairEntry& r) {
        if (l.weight != r.weight)
            return l.weight > r.weight;
        if (l.query_index != r.query_index)
            return l.query_index < r.query_index;
        return l.template_index < r.template_index;
    });

    std::vector<bool> used_u(q.n_u, false);
    std::vector<bool> used_v(q.n_v, false);
    std::vector<PairEntry> out;
    for (const auto& e : sorted) {
        if (used_u[e.query_index] || used_v[e.template_index])
            continue;
        used_u[e.query_index] = true;
        used_v[e.template_index] = true;
        out.push_back(e);
    }
    return out;
}

double match_score(const std::vector<PairEntry>& pairs, std::size_t n_u, std::size_t n_v)
{
    if (n_u == 0 || n_v == 0)
        return 0.0;
    double mass = 0.0;
    for (const auto& e : pairs)
        mass += e.weight;
    const double s = mass * mass / (static_cast<double>(n_u) * static_cast<double>(n_v));
    return std::clamp(s, 0.0, 1.0);
}

std::size_t refine_step_bound(std::size_t n_u, std::size_t n_v, const MatchConfig& cfg)
{
    return cfg.thresholds.size() * n_u * n_v;
}

namespace {

void check_step(const PairQueue& q, std::size_t prev_len, std::size_t steps, std::size_t bound)
{
    if (q.size() > prev_len)
        throw InvariantViolation("pair queue grew during refinement");
    if (steps > bound)
        throw InvariantViolation("refine step bound exceeded (" + std::to_string(steps) + " > " +
                                 std::to_string(bound) + ")");
    for (const auto& e : q.entries)
        if (!(e.weight >= 0.0 && e.weight <= 1.0))
            throw InvariantViolation("pair weight left [0, 1]");
}

void check_one_to_one(const std::vector<PairEntry>& pairs, std::size_t n_u, std::size_t n_v)
{
    std::vector<bool> used_u(n_u, false);
    std::vector<bool> used_v(n_v, false);
    for (const auto& e : pairs) {
        if (used_u[e.query_index] || used_v[e.template_index])
            throw InvariantViolation("matched pairs are not one-to-one");
        used_u[e.query_index] = true;
        used_v[e.template_index] = true;
    }
}

}  // namespace

MatchResult run_matcher(const MinutiaTemplate& u, const MinutiaTemplate& v, const MatchConfig& cfg)
{
    MatchResult result;
    if (u.empty() || v.empty())
        return result;
    cfg.validate();

    PairQueue q = build_pair_queue(u, v, cfg);
    const std::size_t max_pairs = std::min(q.n_u, q.n_v);
    const std::size_t bound = refine_step_bound(q.n_u, q.n_v, cfg);
    AlignmentParams last_alignment;

    try {
        for (const double threshold : cfg.thresholds) {
            while (q.size() > max_pairs) {
                const Alignment al = solve_alignment(q, u, v, cfg);
                const std::size_t prev_len = q.size();
                const std::size_t removed = refine_once(q, u, v, al.params, threshold, cfg);
                last_alignment = al.params;

                IterationRecord rec;
                rec.threshold = threshold;
                rec.alignment = al.params;
                rec.ill_posed = al.diagnostics.ill_posed;
                rec.removed = removed;
                rec.queue_len_after = q.size();
                rec.objective_after = q.total_weight() > 0.0 ? objective(q, u, v, al.params) : 0.0;
                result.iterations.push_back(rec);
                check_step(q, prev_len, result.iterations.size(), bound);

                if (removed == 0)
                    break;  // threshold no longer discriminates; tighten
            }
            if (q.size() <= max_pairs)
                break;
        }
    } catch (const ZeroTotalWeight&) {
        // Nothing left to align against.
        result.final_alignment = last_alignment;
        result.converged = q.size() <= max_pairs;
        return result;
    }

    result.converged = q.size() <= max_pairs;
    result.final_alignment =
        !q.empty() && q.total_weight() > 0.0 ? solve_alignment(q, u, v, cfg).params : last_alignment;
    result.matched_pairs = resolve_one_to_one(q);
    check_one_to_one(result.matched_pairs, q.n_u, q.n_v);
    result.score = match_score(result.matched_pairs, q.n_u, q.n_v);
    return result;
}

}  // namespace fpmatch
