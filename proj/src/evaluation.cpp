#include "fpmatch/evaluation.hpp"

#include "fpmatch/errors.hpp"
#include "fpmatch/match_loop.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <map>
#include <optional>
#include <thread>

namespace fpmatch {

std::vector<ComparisonPlan> plan_protocol(const DatasetManifest& manifest, ImpostorRule rule)
{
    const auto& entries = manifest.entries;
    std::map<int, int> first_impression;
    for (const auto& e : entries) {
        auto [it, inserted] = first_impression.emplace(e.subject, e.impression);
        if (!inserted)
            it->second = std::min(it->second, e.impression);
    }

    // Sorted copy of indices so the query is always the smaller key even if
    // the manifest was assembled by hand.
    std::vector<std::size_t> order(entries.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        return std::pair{entries[l].subject, entries[l].impression} < std::pair{entries[r].subject, entries[r].impression};
    });

    std::vector<ComparisonPlan> plan;
    for (std::size_t p = 0; p < order.size(); ++p) {
        const auto& a = entries[order[p]];
        for (std::size_t q = p + 1; q < order.size(); ++q) {
            const auto& b = entries[order[q]];
            if (a.subject == b.subject) {
                plan.push_back({ComparisonKind::Genuine, order[p], order[q]});
                continue;
            }
            if (rule == ImpostorRule::FirstImpressions &&
                (a.impression != first_impression[a.subject] || b.impression != first_impression[b.subject]))
                continue;
            plan.push_back({ComparisonKind::Impostor, order[p], order[q]});
        }
    }
    return plan;
}

ScoreSet run_protocol(const DatasetManifest& manifest, const MatchConfig& cfg, const ProtocolOptions& options)
{
    cfg.validate();
    ScoreSet out;
    out.impostor_rule = options.impostor_rule;

    std::vector<std::optional<MinutiaTemplate>> templates(manifest.entries.size());
    for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
        try {
            templates[i] = load_template(manifest.entries[i].path);
        } catch (const Error& e) {
            out.load_errors.push_back(e.what());
        }
    }

    const auto plan = plan_protocol(manifest, options.impostor_rule);
    struct Slot {
        bool done = false;
        double score = 0.0;
        double millis = 0.0;
    };
    std::vector<Slot> slots(plan.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t j = next++; j < plan.size(); j = next++) {
            const auto& pc = plan[j];
            if (!templates[pc.query] || !templates[pc.reference])
                continue;
            Slot& slot = slots[j];
            if (options.measure_time) {
                const auto t0 = std::chrono::steady_clock::now();
                slot.score = run_matcher(*templates[pc.query], *templates[pc.reference], cfg).score;
                const auto t1 = std::chrono::steady_clock::now();
                slot.millis = std::chrono::duration<double, std::milli>(t1 - t0).count();
            } else {
                slot.score = run_matcher(*templates[pc.query], *templates[pc.reference], cfg).score;
            }
            slot.done = true;
        }
    };

    const unsigned jobs = std::max(1u, options.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < jobs; ++t)
            pool.emplace_back(worker);
    }

    for (std::size_t j = 0; j < plan.size(); ++j) {
        if (!slots[j].done) {
            ++out.skipped;
            continue;
        }
        const auto& pc = plan[j];
        const auto& a = manifest.entries[pc.query];
        const auto& b = manifest.entries[pc.reference];
        out.records.push_back({pc.kind, a.subject, a.impression, b.subject, b.impression, slots[j].score,
                               slots[j].millis});
        (pc.kind == ComparisonKind::Genuine ? out.genuine : out.impostor).push_back(slots[j].score);
        out.timings.push_back(slots[j].millis);
    }
    return out;
}

namespace {

ScoreSummary summarize(const std::vector<double>& v)
{
    ScoreSummary s;
    s.count = v.size();
    if (v.empty())
        return s;
    s.min = *std::min_element(v.begin(), v.end());
    s.max = *std::max_element(v.begin(), v.end());
    double sum = 0.0;
    for (double x : v)
        sum += x;
    s.mean = sum / static_cast<double>(v.size());
    return s;
}

}  // namespace

EvalReport compute_eer(const ScoreSet& scores)
{
    if (scores.genuine.empty() || scores.impostor.empty())
        throw EmptyScores();

    std::vector<double> gen = scores.genuine;
    std::vector<double> imp = scores.impostor;
    std::sort(gen.begin(), gen.end());
    std::sort(imp.begin(), imp.end());

    std::vector<double> thresholds;
    thresholds.reserve(gen.size() + imp.size());
    std::merge(gen.begin(), gen.end(), imp.begin(), imp.end(), std::back_inserter(thresholds));
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    const double n_gen = static_cast<double>(gen.size());
    const double n_imp = static_cast<double>(imp.size());

    EvalReport report;
    report.roc.reserve(thresholds.size());
    for (const double tau : thresholds) {
        const auto imp_below = std::lower_bound(imp.begin(), imp.end(), tau) - imp.begin();
        const auto gen_below = std::lower_bound(gen.begin(), gen.end(), tau) - gen.begin();
        report.roc.push_back({tau, 100.0 * (n_imp - static_cast<double>(imp_below)) / n_imp,
                              100.0 * static_cast<double>(gen_below) / n_gen});
    }

    // Past the largest score nothing is accepted: FAR 0, FRR 100.
    std::vector<RocPoint> sweep = report.roc;
    sweep.push_back({INFINITY, 0.0, 100.0});
    report.eer = 50.0;
    for (std::size_t j = 0; j < sweep.size(); ++j) {
        const double d = sweep[j].far - sweep[j].frr;
        if (d > 0.0)
            continue;
        if (j == 0) {
            report.eer = 0.5 * (sweep[j].far + sweep[j].frr);
        } else {
            const double d_prev = sweep[j - 1].far - sweep[j - 1].frr;
            const double f = d_prev / (d_prev - d);
            report.eer = sweep[j - 1].far + f * (sweep[j].far - sweep[j - 1].far);
        }
        break;
    }

    report.genuine_count = gen.size();
    report.impostor_count = imp.size();
    report.skipped_count = scores.skipped;
    report.genuine_summary = summarize(scores.genuine);
    report.impostor_summary = summarize(scores.impostor);
    report.impostor_rule = scores.impostor_rule;
    if (!scores.timings.empty()) {
        double sum = 0.0;
        for (double t : scores.timings)
            sum += t;
        report.mean_time_ms = sum / static_cast<double>(scores.timings.size());
    }
    return report;
}

std::string write_scores_csv(const ScoreSet& scores)
{
    std::string out = "kind,subject_a,imp_a,subject_b,imp_b,score,millis\n";
    char buf[160];
    for (const auto& r : scores.records) {
        std::snprintf(buf, sizeof buf, "%s,%d,%d,%d,%d,%.8f,%.4f\n",
                      r.kind == ComparisonKind::Genuine ? "genuine" : "impostor", r.subject_a, r.imp_a,
                      r.subject_b, r.imp_b, r.score, r.millis);
        out += buf;
    }
    return out;
}

std::string write_report_json(const EvalReport& report)
{
    using nlohmann::ordered_json;
    auto summary = [](const ScoreSummary& s) {
        return ordered_json{{"count", s.count}, {"mean", s.mean}, {"min", s.min}, {"max", s.max}};
    };
    ordered_json roc = ordered_json::array();
    for (const auto& p : report.roc)
        roc.push_back(ordered_json::array({p.threshold, p.far, p.frr}));

    ordered_json j;
    j["eer"] = report.eer;
    j["mean_time_ms"] = report.mean_time_ms;
    j["counts"] = {{"genuine", report.genuine_count},
                   {"impostor", report.impostor_count},
                   {"skipped", report.skipped_count}};
    j["impostor_rule"] = report.impostor_rule == ImpostorRule::AllPairs ? "all_pairs" : "first_impressions";
    j["genuine_scores"] = summary(report.genuine_summary);
    j["impostor_scores"] = summary(report.impostor_summary);
    j["roc_columns"] = {"threshold", "far_percent", "frr_percent"};
    j["roc"] = std::move(roc);
    return j.dump(2) + "\n";
}

}  // namespace fpmatch
