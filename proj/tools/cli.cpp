#include "cli.hpp"

#include "fpmatch/errors.hpp"
#include "fpmatch/evaluation.hpp"
#include "fpmatch/match_loop.hpp"
#include "fpmatch/pair_weights.hpp"
#include "fpmatch/registration.hpp"
#include "fpmatch/synth_bench.hpp"
#include "fpmatch/template_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>

namespace fpmatch::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(std::string_view key, std::string_view text)
{
    text = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || !std::isfinite(v))
        throw ConfigError("bad value for " + std::string(key) + ": '" + std::string(text) + "'");
    return v;
}

struct MatcherFlags {
    std::string config_path;
    std::optional<double> t1, tstep, tmin, c1, c2, td, tpsi;
};

void add_matcher_flags(CLI::App* sub, MatcherFlags& f)
{
    sub->add_option("--config", f.config_path, "key = value file of MatchConfig fields");
    sub->add_option("--t1", f.t1, "first pruning threshold");
    sub->add_option("--tstep", f.tstep, "threshold decrement");
    sub->add_option("--tmin", f.tmin, "last pruning threshold");
    sub->add_option("--c1", f.c1, "distance coefficient (px^-2)");
    sub->add_option("--c2", f.c2, "direction coefficient (deg^-2)");
    sub->add_option("--td", f.td, "octant distance tolerance (px)");
    sub->add_option("--tpsi", f.tpsi, "octant direction tolerance (deg)");
}

MatchConfig resolve_config(const MatcherFlags& f)
{
    MatchConfig cfg;
    if (!f.config_path.empty())
        apply_config_text(cfg, read_text_file(f.config_path));
    if (f.td)
        cfg.t_d = *f.td;
    if (f.tpsi)
        cfg.t_psi = *f.tpsi;
    if (f.c1)
        cfg.c1 = *f.c1;
    if (f.c2)
        cfg.c2 = *f.c2;
    if (f.t1 || f.tstep || f.tmin) {
        const double t1 = f.t1.value_or(cfg.thresholds.front());
        const double step = f.tstep.value_or(cfg.thresholds.size() > 1 ? cfg.thresholds[0] - cfg.thresholds[1] : 4.0);
        const double tmin = f.tmin.value_or(std::min(cfg.thresholds.back(), t1));
        cfg.thresholds = MatchConfig::threshold_schedule(t1, step, tmin);
    }
    cfg.validate();
    return cfg;
}

ordered_json params_json(const AlignmentParams& p)
{
    return {{"theta", p.theta}, {"a", p.a}, {"b", p.b}};
}

int cmd_match(const std::string& query, const std::string& reference, const MatcherFlags& flags, bool verbose,
              std::ostream& out)
{
    const MatchConfig cfg = resolve_config(flags);
    const MinutiaTemplate u = load_template(query);
    const MinutiaTemplate v = load_template(reference);
    const MatchResult r = run_matcher(u, v, cfg);

    ordered_json j;
    j["score"] = r.score;
    j["converged"] = r.converged;
    j["theta"] = r.final_alignment.theta;
    j["a"] = r.final_alignment.a;
    j["b"] = r.final_alignment.b;
    j["matched_count"] = r.matched_pairs.size();
    j["iterations"] = r.iterations.size();
    if (verbose) {
        ordered_json trace = ordered_json::array();
        for (const auto& it : r.iterations)
            trace.push_back({{"threshold", it.threshold},
                             {"alignment", params_json(it.alignment)},
                             {"ill_posed", it.ill_posed},
                             {"removed", it.removed},
                             {"queue_len", it.queue_len_after},
                             {"objective", it.objective_after}});
        j["trace"] = std::move(trace);
    }
    out << j.dump(2) << "\n";
    return kExitOk;
}

struct EvalFlags {
    std::string dataset;
    std::string out_dir = ".";
    unsigned jobs = 1;
    std::string impostor_rule = "all";
    bool no_timing = false;
};

int cmd_eval(const EvalFlags& ef, const MatcherFlags& flags, std::ostream& out, std::ostream& err)
{
    const MatchConfig cfg = resolve_config(flags);
    const DatasetManifest manifest = scan_dataset(ef.dataset);
    if (manifest.entries.empty())
        throw IoError("no templates matching " + std::string(kDefaultDatasetPattern) + " in " + ef.dataset);

    ProtocolOptions opt;
    opt.impostor_rule = ef.impostor_rule == "first" ? ImpostorRule::FirstImpressions : ImpostorRule::AllPairs;
    opt.jobs = ef.jobs;
    opt.measure_time = !ef.no_timing;
    const ScoreSet scores = run_protocol(manifest, cfg, opt);
    for (const auto& e : scores.load_errors)
        err << "warning: " << e << "\n";
    const EvalReport report = compute_eer(scores);

    std::error_code ec;
    fs::create_directories(ef.out_dir, ec);
    if (ec)
        throw IoError("cannot create " + ef.out_dir + ": " + ec.message());
    write_text_file(fs::path(ef.out_dir) / "scores.csv", write_scores_csv(scores));
    write_text_file(fs::path(ef.out_dir) / "report.json", write_report_json(report));

    char buf[200];
    std::snprintf(buf, sizeof buf, "EER %.4f%%  mean time %.4f ms  genuine %zu  impostor %zu  skipped %zu\n",
                  report.eer, report.mean_time_ms, report.genuine_count, report.impostor_count,
                  report.skipped_count);
    out << buf;
    return kExitOk;
}

struct SynthFlags {
    std::string out_dir;
    std::size_t subjects = 10;
    std::size_t impressions = 4;
    SynthParams params;
};

int cmd_synth(const SynthFlags& sf, std::ostream& out)
{
    const SynthDatasetLayout layout = write_synthetic_dataset(sf.out_dir, sf.params, sf.subjects, sf.impressions);
    out << "wrote " << layout.files_written << " files for " << layout.subjects << " subjects x "
        << layout.impressions << " impressions to " << sf.out_dir << "\n";
    return kExitOk;
}

int cmd_align(const std::string& query, const std::string& reference, const MatcherFlags& flags, bool oracle,
              double grid_step, std::ostream& out)
{
    const MatchConfig cfg = resolve_config(flags);
    const MinutiaTemplate u = load_template(query);
    const MinutiaTemplate v = load_template(reference);
    const MatchResult r = run_matcher(u, v, cfg);

    ordered_json j;
    j["alignment"] = params_json(r.final_alignment);
    j["converged"] = r.converged;
    j["matched_count"] = r.matched_pairs.size();

    PairQueue q;
    q.n_u = u.size();
    q.n_v = v.size();
    q.entries = r.matched_pairs;
    if (q.total_weight() > 0.0) {
        const Alignment closed = solve_alignment(q, u, v, cfg);
        j["closed_form"] = params_json(closed.params);
        j["closed_form"]["objective"] = objective(q, u, v, closed.params);
        j["closed_form"]["ill_posed"] = closed.diagnostics.ill_posed;
        if (oracle) {
            const AlignmentParams bf = brute_force_align(q, u, v, grid_step);
            j["oracle"] = params_json(bf);
            j["oracle"]["objective"] = objective(q, u, v, bf);
            j["oracle"]["grid_step"] = grid_step;
            j["theta_gap"] = angle_diff(bf.theta, closed.params.theta);
        }
    } else if (oracle) {
        j["oracle"] = nullptr;
    }
    out << j.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

void apply_config_text(MatchConfig& cfg, std::string_view text)
{
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));

        if (key == "t_d") {
            cfg.t_d = parse_number(key, value);
        } else if (key == "t_psi") {
            cfg.t_psi = parse_number(key, value);
        } else if (key == "c1") {
            cfg.c1 = parse_number(key, value);
        } else if (key == "c2") {
            cfg.c2 = parse_number(key, value);
        } else if (key == "ill_posed_epsilon") {
            cfg.ill_posed_epsilon = parse_number(key, value);
        } else if (key == "octant_count") {
            cfg.octant_count = static_cast<int>(parse_number(key, value));
        } else if (key == "thresholds") {
            std::vector<double> ts;
            std::string_view rest = value;
            while (true) {
                const auto comma = rest.find(',');
                ts.push_back(parse_number(key, rest.substr(0, comma)));
                if (comma == std::string_view::npos)
                    break;
                rest = rest.substr(comma + 1);
            }
            cfg.thresholds = std::move(ts);
        } else {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Minutia template matcher with iterative weighted alignment", "fpmatch"};
    app.require_subcommand(1);

    bool verbose = false;
    std::string query;
    std::string reference;
    MatcherFlags match_flags;
    auto* match = app.add_subcommand("match", "Match a query template against a reference template");
    match->add_option("query", query)->required();
    match->add_option("template", reference)->required();
    add_matcher_flags(match, match_flags);
    match->add_flag("-v,--verbose", verbose, "include the per-iteration trace");

    EvalFlags eval_flags;
    MatcherFlags eval_matcher;
    auto* eval = app.add_subcommand("eval", "Run the all-pairs verification protocol over a dataset directory");
    eval->add_option("dataset", eval_flags.dataset)->required();
    eval->add_option("--out", eval_flags.out_dir, "directory for scores.csv and report.json");
    eval->add_option("--jobs", eval_flags.jobs, "worker threads")->check(CLI::PositiveNumber);
    eval->add_option("--impostor-rule", eval_flags.impostor_rule, "all or first")
        ->check(CLI::IsMember({"all", "first"}));
    eval->add_flag("--no-timing", eval_flags.no_timing, "report zero durations for reproducible outputs");
    add_matcher_flags(eval, eval_matcher);

    SynthFlags sf;
    auto* synth = app.add_subcommand("synth", "Write a synthetic dataset with ground-truth sidecars");
    synth->add_option("--out", sf.out_dir, "output directory")->required();
    synth->add_option("--seed", sf.params.seed, "random seed");
    synth->add_option("--subjects", sf.subjects);
    synth->add_option("--impressions", sf.impressions);
    synth->add_option("--min-minutiae", sf.params.min_minutiae);
    synth->add_option("--max-minutiae", sf.params.max_minutiae);
    synth->add_option("--width", sf.params.width);
    synth->add_option("--height", sf.params.height);
    synth->add_option("--margin", sf.params.margin);
    synth->add_option("--spacing", sf.params.min_spacing);
    synth->add_option("--rotation", sf.params.max_rotation, "pairwise rotation range (deg)");
    synth->add_option("--translation", sf.params.max_translation, "pairwise translation range (px)");
    synth->add_option("--position-jitter", sf.params.position_jitter);
    synth->add_option("--direction-jitter", sf.params.direction_jitter);
    synth->add_option("--drop", sf.params.drop_fraction);
    synth->add_option("--spurious", sf.params.spurious_fraction);
    synth->add_option("--min-quality", sf.params.min_quality);
    synth->add_option("--max-quality", sf.params.max_quality);

    bool oracle = false;
    double grid_step = 0.01;
    std::string align_query;
    std::string align_reference;
    MatcherFlags align_flags;
    auto* align = app.add_subcommand("align", "Report the matcher's alignment, optionally against the grid oracle");
    align->add_option("query", align_query)->required();
    align->add_option("template", align_reference)->required();
    align->add_flag("--oracle", oracle, "compare the closed form with a brute-force grid search");
    align->add_option("--grid-step", grid_step, "oracle grid step (deg)")->check(CLI::PositiveNumber);
    add_matcher_flags(align, align_flags);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*match)
            return cmd_match(query, reference, match_flags, verbose, out);
        if (*eval)
            return cmd_eval(eval_flags, eval_matcher, out, err);
        if (*synth)
            return cmd_synth(sf, out);
        if (*align)
            return cmd_align(align_query, align_reference, align_flags, oracle, grid_step, out);
    } catch (const InvariantViolation& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInput;
}

}  // namespace fpmatch::cli
