#include "cli.hpp"

#include "logbench/catalog.hpp"
#include "logbench/complexity.hpp"
#include "logbench/detectors.hpp"
#include "logbench/eval.hpp"
#include "logbench/ingest.hpp"
#include "logbench/io.hpp"
#include "logbench/profile.hpp"
#include "logbench/sequencing.hpp"
#include "logbench/stats.hpp"
#include "logbench/synthetic.hpp"
#include "logbench/util.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#ifndef LOGBENCH_VERSION
#define LOGBENCH_VERSION "0.0.0"
#endif

namespace logbench::cli {

namespace fs = std::filesystem;

namespace {

/// Relative inputs that do not exist are looked up under $LOGBENCH_DATA_DIR.
fs::path resolve_input(const std::string& p) {
    fs::path path(p);
    if (path.empty() || fs::exists(path) || path.is_absolute()) return path;
    if (const char* root = std::getenv("LOGBENCH_DATA_DIR"); root && *root) {
        fs::path alt = fs::path(root) / path;
        if (fs::exists(alt)) return alt;
    }
    return path;
}

fs::path sibling(const fs::path& file, const std::string& suffix) {
    fs::path p = file;
    p += suffix;
    return p;
}

std::vector<std::size_t> parse_n_list(const std::string& text) {
    std::vector<std::size_t> out;
    for (auto part : util::split(text, ',')) {
        part = util::trim(part);
        if (part.empty()) continue;
        const auto dots = part.find("..");
        if (dots != std::string_view::npos) {
            const auto lo = util::parse_int<std::size_t>(util::trim(part.substr(0, dots)));
            const auto hi = util::parse_int<std::size_t>(util::trim(part.substr(dots + 2)));
            if (!lo || !hi || *lo == 0 || *lo > *hi) throw ValidationError("bad n-gram range '" + std::string(part) + "'");
            for (std::size_t n = *lo; n <= *hi; ++n) out.push_back(n);
        } else {
            const auto n = util::parse_int<std::size_t>(part);
            if (!n || *n == 0) throw ValidationError("bad n-gram size '" + std::string(part) + "'");
            out.push_back(*n);
        }
    }
    if (out.empty()) throw ValidationError("no n-gram sizes given");
    return out;
}

std::vector<std::string> parse_detector_list(const std::string& text) {
    std::vector<std::string> out;
    for (auto part : util::split(text, ',')) {
        part = util::trim(part);
        if (!part.empty()) out.emplace_back(part);
    }
    return out;
}

struct Context {
    std::vector<std::string> argv;
    std::ostream& out;
    std::ostream& err;

    RunManifest manifest() const {
        RunManifest m;
        m.tool_version = LOGBENCH_VERSION;
        m.command_line = argv;
        return m;
    }
    void warn(RunManifest& m, const std::string& w) const {
        err << "logbench: warning: " << w << '\n';
        m.warnings.push_back(w);
    }
};

std::vector<Sequence> load_input_sequences(const fs::path& path, RunManifest& m) {
    auto seqs = load_sequences(path);
    m.inputs.emplace_back(path.string(), sha256_path(path));
    return seqs;
}

// --- parse ---------------------------------------------------------------

struct ParseArgs {
    std::string profile, templates, input, out, unmatched;
    std::size_t jobs = util::default_jobs();
};

int cmd_parse(const ParseArgs& a, const Context& ctx) {
    Stopwatch clock;
    RunManifest m = ctx.manifest();
    const DatasetProfile profile = resolve_profile(a.profile, profile_directory());
    TemplateCatalog catalog;
    if (!a.templates.empty()) {
        const fs::path tpl = resolve_input(a.templates);
        catalog = load_template_catalog(tpl);
        m.inputs.emplace_back(tpl.string(), sha256_path(tpl));
        for (const auto& w : catalog.warnings()) ctx.warn(m, w);
    } else if (profile.event_source == EventSource::Templates) {
        throw ValidationError("profile '" + profile.name + "' needs --templates");
    }
    const fs::path input = resolve_input(a.input);
    if (!fs::exists(input)) throw IoError("input not found: " + input.string());
    m.inputs.emplace_back(input.string(), sha256_path(input));

    const LineParser parser(catalog, profile);
    ParseOptions opt;
    opt.jobs = a.jobs;
    std::unique_ptr<AtomicFile> unmatched;
    if (!a.unmatched.empty()) {
        unmatched = std::make_unique<AtomicFile>(a.unmatched);
        opt.unmatched_dump = &unmatched->stream();
    }
    AtomicFile out(a.out);
    ParsedEventWriter writer(out.stream());
    const IngestReport report = parse_path(input, parser, [&](const ParsedEvent& e) { writer.write(e); }, opt);
    if (!report.complete) throw IoError("ingest aborted: " + report.failure);
    out.commit();
    if (unmatched) unmatched->commit();
    write_file_atomic(sibling(a.out, ".report.json"), report.to_json() + "\n");

    m.config = {{"command", "parse"}, {"profile", profile.name}, {"templates", a.templates}, {"jobs", std::to_string(a.jobs)}};
    m.sample_sizes = {{"lines", report.total_lines}, {"matched", report.matched}, {"unmatched", report.unmatched},
                      {"invalid", report.invalid}, {"parsed_events", report.parsed_events}};
    m.timings_s = {{"total", clock.seconds()}};
    if (report.unmatched) ctx.warn(m, std::to_string(report.unmatched) + " lines matched no template");
    if (report.invalid) ctx.warn(m, std::to_string(report.invalid) + " lines could not be processed");
    write_file_atomic(sibling(a.out, ".manifest.json"), m.to_json());
    ctx.out << "lines " << report.total_lines << ", matched " << report.matched << ", unmatched " << report.unmatched
            << ", invalid " << report.invalid << ", parsed events " << report.parsed_events << '\n';
    return 0;
}

// --- group ---------------------------------------------------------------

struct GroupArgs {
    std::string input, out, labels, mode = "id", profile;
    std::size_t window = 0, step = 0;
    bool unlisted_normal = false;
};

int cmd_group(const GroupArgs& a, const Context& ctx) {
    Stopwatch clock;
    RunManifest m = ctx.manifest();
    const fs::path input = resolve_input(a.input);
    std::ifstream in(input);
    if (!in) throw IoError("cannot open " + input.string());
    m.inputs.emplace_back(input.string(), sha256_path(input));

    bool unlisted_normal = a.unlisted_normal;
    if (!a.profile.empty()) unlisted_normal = unlisted_normal || resolve_profile(a.profile, profile_directory()).unlisted_normal;

    std::vector<Sequence> seqs;
    std::uint64_t discarded = 0;
    if (a.mode == "id" || a.mode == "file") {
        IdentifierGrouper g(a.mode == "id" ? SequenceOrigin::Identifier : SequenceOrigin::File);
        read_parsed_events(in, [&](const ParsedEvent& e) { g.add(e); });
        discarded = g.discarded();
        seqs = std::move(g).finish();
    } else if (a.mode == "window") {
        if (a.window == 0) throw ValidationError("--mode window needs --window > 0");
        const auto events = read_parsed_events(in);
        seqs = group_by_window(events, a.window, a.step ? a.step : a.window);
    } else {
        throw ValidationError("unknown grouping mode '" + a.mode + "'");
    }

    std::vector<std::string> unlabeled;
    if (!a.labels.empty()) {
        const fs::path lp = resolve_input(a.labels);
        m.inputs.emplace_back(lp.string(), sha256_path(lp));
        auto att = attach_sequence_labels(std::move(seqs), load_sequence_labels(lp), unlisted_normal);
        seqs = std::move(att.labeled);
        unlabeled = std::move(att.unlabeled_ids);
    } else {
        std::vector<Sequence> kept;
        for (auto& s : seqs) {
            if (s.label.is_labeled()) kept.push_back(std::move(s));
            else unlabeled.push_back(s.seq_id);
        }
        seqs = std::move(kept);
    }
    {
        AtomicFile out(a.out);
        write_sequences(out.stream(), seqs);
        out.commit();
    }
    if (!unlabeled.empty()) {
        std::string list;
        for (const auto& id : unlabeled) list += id + '\n';
        write_file_atomic(sibling(a.out, ".unlabeled.txt"), list);
        ctx.warn(m, std::to_string(unlabeled.size()) + " sequences without a label were excluded");
    }
    m.config = {{"command", "group"}, {"mode", a.mode}, {"window", std::to_string(a.window)},
                {"step", std::to_string(a.step)}, {"labels", a.labels},
                {"unlisted_normal", unlisted_normal ? "true" : "false"}};
    m.sample_sizes = {{"sequences", seqs.size()}, {"unlabeled", unlabeled.size()}, {"discarded_no_id", discarded}};
    m.timings_s = {{"total", clock.seconds()}};
    write_file_atomic(sibling(a.out, ".manifest.json"), m.to_json());
    ctx.out << "sequences " << seqs.size() << ", unlabeled " << unlabeled.size() << '\n';
    return 0;
}

// --- stats ---------------------------------------------------------------

struct StatsArgs {
    std::string input, report, out_dir;
    std::size_t top = 10;
    bool by_pair = false;
};

int cmd_stats(const StatsArgs& a, const Context& ctx) {
    Stopwatch clock;
    RunManifest m = ctx.manifest();
    const auto seqs = load_input_sequences(resolve_input(a.input), m);
    std::optional<IngestReport> report;
    if (!a.report.empty()) {
        const fs::path rp = resolve_input(a.report);
        std::ifstream in(rp);
        if (!in) throw IoError("cannot open " + rp.string());
        std::stringstream ss;
        ss << in.rdbuf();
        report = IngestReport::from_json(ss.str());
        m.inputs.emplace_back(rp.string(), sha256_path(rp));
    }
    const fs::path dir(a.out_dir);
    const DatasetSummary summary = summarize(seqs, report ? &*report : nullptr);
    const auto write = [&](const char* name, auto&& fn) {
        AtomicFile f(dir / name);
        fn(f.stream());
        f.commit();
    };
    write("summary.csv", [&](std::ostream& o) { write_summary_csv(o, summary); });
    write_file_atomic(dir / "summary.json", summary_to_json(summary) + "\n");
    write("event_frequency.csv", [&](std::ostream& o) { write_event_frequency_csv(o, event_frequency_dist(seqs)); });
    write("lengths.csv", [&](std::ostream& o) { write_length_csv(o, length_dist(seqs)); });
    write("top_sequences.csv", [&](std::ostream& o) { write_top_sequences_csv(o, top_sequences(seqs, a.top)); });
    write("interarrival.csv", [&](std::ostream& o) { write_interarrival_csv(o, interarrival_dist(seqs, a.by_pair)); });

    m.config = {{"command", "stats"}, {"top", std::to_string(a.top)}, {"by_pair", a.by_pair ? "true" : "false"}};
    m.sample_sizes = {{"sequences", seqs.size()}};
    m.timings_s = {{"total", clock.seconds()}};
    write_file_atomic(dir / "manifest.json", m.to_json());
    for (const auto& r : summary.rows()) {
        ctx.out << r.metric;
        for (const auto& s : {r.total, r.normal, r.anom}) {
            if (!s) {
                ctx.out << "\t-";
                continue;
            }
            const auto pct = s->percent();
            ctx.out << '\t' << s->count << " (" << (pct ? util::format_fixed(*pct, 1) + "%" : std::string("NA")) << ")";
        }
        ctx.out << '\n';
    }
    return 0;
}

// --- complexity ----------------------------------------------------------

struct ComplexityArgs {
    std::string input, out, entropy_n = "1..10";
    bool lz = false, count_trailing = false;
};

int cmd_complexity(const ComplexityArgs& a, const Context& ctx) {
    Stopwatch clock;
    RunManifest m = ctx.manifest();
    const auto seqs = load_input_sequences(resolve_input(a.input), m);
    const auto ns = parse_n_list(a.entropy_n);
    const auto entries = entropy_report(seqs, ns);
    for (const auto& e : entries)
        if (e.degenerate) ctx.warn(m, "no " + std::to_string(e.n) + "-grams in the data; entropy reported as 0");
    {
        AtomicFile f(a.out);
        write_entropy_csv(f.stream(), entries);
        f.commit();
    }
    std::uint64_t lz_final = 0;
    if (a.lz) {
        const auto curve = lz_complexity(seqs, {a.count_trailing});
        if (!curve.empty()) lz_final = curve.back().complexity;
        fs::path lz_path = fs::path(a.out).replace_extension(".lz.csv");
        AtomicFile f(lz_path);
        write_lz_csv(f.stream(), curve);
        f.commit();
    }
    m.config = {{"command", "complexity"}, {"entropy_n", a.entropy_n}, {"lz", a.lz ? "true" : "false"},
                {"count_trailing", a.count_trailing ? "true" : "false"}};
    m.sample_sizes = {{"sequences", seqs.size()}};
    m.timings_s = {{"total", clock.seconds()}};
    write_file_atomic(sibling(a.out, ".manifest.json"), m.to_json());
    for (const auto& e : entries)
        ctx.out << "N=" << e.n << " entropy " << util::format_fixed(e.total_entropy, 4) << " normalized "
                << util::format_fixed(e.normalized_entropy, 4) << '\n';
    if (a.lz) ctx.out << "lz complexity " << lz_final << '\n';
    return 0;
}

// --- eval / sweep --------------------------------------------------------

struct DetectorFlags {
    std::string ecvc_norm = "mass", ngram_norm = "global-max", ngram_pad = "start";
    std::size_t jobs = util::default_jobs();

    DetectorOptions options() const {
        DetectorOptions o;
        if (ecvc_norm == "mass") o.ecvc_norm = EcvcNorm::Mass;
        else if (ecvc_norm == "len") o.ecvc_norm = EcvcNorm::Length;
        else throw ValidationError("--ecvc-norm must be mass or len");
        if (ngram_norm == "global-max") o.ngram_normalization = NGramNormalization::GlobalMax;
        else if (ngram_norm == "per-sequence") o.ngram_normalization = NGramNormalization::PerSequence;
        else throw ValidationError("--ngram-norm must be global-max or per-sequence");
        if (ngram_pad == "start") o.ngram_padding = NGramPadding::Start;
        else if (ngram_pad == "end") o.ngram_padding = NGramPadding::End;
        else if (ngram_pad == "none") o.ngram_padding = NGramPadding::None;
        else throw ValidationError("--ngram-pad must be start, end or none");
        o.jobs = std::max<std::size_t>(1, jobs);
        return o;
    }
    void record(RunManifest& m) const {
        m.config.emplace_back("ecvc_norm", ecvc_norm);
        m.config.emplace_back("ngram_norm", ngram_norm);
        m.config.emplace_back("ngram_pad", ngram_pad);
    }
};

struct EvalArgs {
    std::string input, out_dir, detectors = "event,length,ecvc,ngram2,ngram3,ngram10,edit,timing";
    std::string granularity = "sequence";
    double train_frac = 0.01;
    std::size_t runs = 25;
    std::uint64_t seed = 42;
    DetectorFlags det;
};

EvalConfig make_config(double train_frac, std::size_t runs, std::uint64_t seed, const std::string& granularity,
                       std::vector<std::string> detectors, const DetectorFlags& det) {
    EvalConfig c;
    c.train_fraction = train_frac;
    c.repetitions = runs;
    c.seed = seed;
    if (granularity == "sequence") c.granularity = Granularity::Sequence;
    else if (granularity == "event") c.granularity = Granularity::Event;
    else throw ValidationError("--granularity must be sequence or event");
    c.detectors = std::move(detectors);
    c.detector_options = det.options();
    c.validate();
    return c;
}

int cmd_eval(const EvalArgs& a, const Context& ctx) {
    Stopwatch clock;
    RunManifest m = ctx.manifest();
    const EvalConfig cfg = make_config(a.train_frac, a.runs, a.seed, a.granularity, parse_detector_list(a.detectors), a.det);
    const auto seqs = load_input_sequences(resolve_input(a.input), m);
    const StudyReport report =
        cfg.granularity == Granularity::Event ? evaluate_events(seqs, cfg) : evaluate_study(seqs, cfg);

    const fs::path dir(a.out_dir);
    const auto write = [&](const char* name, auto&& fn) {
        AtomicFile f(dir / name);
        fn(f.stream());
        f.commit();
    };
    write("results.csv", [&](std::ostream& o) { write_results_csv(o, report.runs); });
    write("summary.csv", [&](std::ostream& o) { write_summary_csv(o, report.summary); });
    write("runs.csv", [&](std::ostream& o) { write_runs_csv(o, report.runs); });
    std::vector<RunResult> first;
    for (const auto& r : report.runs)
        if (r.run == 0) first.push_back(r);
    write("sweep.csv", [&](std::ostream& o) { write_results_csv(o, first); });

    m.config = {{"command", "eval"}, {"detectors", a.detectors}, {"train_frac", util::format_double(a.train_frac)},
                {"runs", std::to_string(a.runs)}, {"seed", std::to_string(a.seed)}, {"granularity", a.granularity}};
    a.det.record(m);
    for (std::size_t r = 0; r < report.train_sizes.size(); ++r)
        m.sample_sizes.emplace_back("train_run_" + std::to_string(r), report.train_sizes[r]);
    m.sample_sizes.emplace_back("sequences", seqs.size());
    m.timings_s = {{"total", clock.seconds()}};
    for (const auto& w : report.warnings) ctx.warn(m, w);
    write_file_atomic(dir / "manifest.json", m.to_json());

    for (const auto& s : report.summary)
        ctx.out << s.detector << "\tavg_f1 " << format_metric(s.avg_f1) << "\tmax_f1 " << format_metric(s.max_f1)
                << (s.applicable ? "" : "\tnot applicable") << '\n';
    return 0;
}

struct SweepArgs {
    std::string input, out, detector = "ecvc", scores;
    double train_frac = 0.01;
    std::size_t run = 0;
    std::uint64_t seed = 42;
    std::optional<double> threshold;
    DetectorFlags det;
};

int cmd_sweep(const SweepArgs& a, const Context& ctx) {
    Stopwatch clock;
    RunManifest m = ctx.manifest();
    const EvalConfig cfg = make_config(a.train_frac, a.run + 1, a.seed, "sequence", {a.detector}, a.det);
    const auto seqs = load_input_sequences(resolve_input(a.input), m);
    const Split sp = split(seqs, cfg.train_fraction, cfg.seed, a.run);
    std::vector<Sequence> train, test;
    for (auto i : sp.train) train.push_back(seqs[i]);
    for (auto i : sp.test) test.push_back(seqs[i]);
    auto det = make_detector(a.detector, cfg.detector_options);
    BatchScores scores;
    RunResult r = evaluate_run(train, test, *det, cfg.threshold_grid, &scores);
    r.run = a.run;
    {
        AtomicFile f(a.out);
        write_results_csv(f.stream(), std::span<const RunResult>(&r, 1));
        f.commit();
    }
    if (!a.scores.empty() && r.applicable) {
        const auto* best = r.best_point();
        const double t = a.threshold ? *a.threshold : (best && best->threshold ? *best->threshold : 0.0);
        AtomicFile f(a.scores);
        write_score_dump(f.stream(), test, r.detector, scores, t);
        f.commit();
    }
    m.config = {{"command", "sweep"}, {"detector", a.detector}, {"train_frac", util::format_double(a.train_frac)},
                {"run", std::to_string(a.run)}, {"seed", std::to_string(a.seed)}};
    a.det.record(m);
    m.sample_sizes = {{"train", train.size()}, {"test", test.size()}};
    m.timings_s = {{"total", clock.seconds()}};
    for (const auto& w : degeneracy_warnings(r)) ctx.warn(m, w);
    write_file_atomic(sibling(a.out, ".manifest.json"), m.to_json());
    if (const auto* best = r.best_point())
        ctx.out << r.detector << " best threshold "
                << (best->threshold ? util::format_fixed(*best->threshold, 2) : std::string("NA")) << " f1 "
                << format_metric(best->metrics.f1) << '\n';
    else
        ctx.out << r.detector << " not applicable: " << r.reason << '\n';
    return 0;
}

// --- profiles / synth ----------------------------------------------------

int cmd_profiles_list(const Context& ctx) {
    for (const auto& n : bundled_profile_names(profile_directory())) ctx.out << n << '\n';
    return 0;
}

int cmd_profiles_show(const std::string& name, const Context& ctx) {
    const fs::path dir = profile_directory();
    fs::path path = fs::exists(name) ? fs::path(name) : dir / (name + ".profile");
    std::ifstream in(path);
    if (!in) throw ValidationError("unknown profile '" + name + "'");
    load_profile(path);  // validates
    ctx.out << in.rdbuf();
    return 0;
}

int cmd_synth(const std::string& out_dir, const Context& ctx) {
    for (const auto& name : synthetic::write_fixtures(out_dir)) ctx.out << (fs::path(out_dir) / name).string() << '\n';
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"logbench: log anomaly detection benchmark toolkit"};
    app.set_version_flag("--version", std::string("logbench ") + LOGBENCH_VERSION);
    app.set_help_all_flag("--help-all", "Print help for every subcommand");
    app.require_subcommand(1);

    ParseArgs pa;
    auto* parse = app.add_subcommand("parse", "Match raw log lines against a template catalog");
    parse->add_option("--profile", pa.profile, "Dataset profile name or file")->required();
    parse->add_option("--templates", pa.templates, "Template catalog (<id><TAB><pattern>)");
    parse->add_option("--input", pa.input, "Raw log file or directory")->required();
    parse->add_option("--out", pa.out, "Parsed-event output file")->required();
    parse->add_option("--unmatched", pa.unmatched, "Write unmatched lines to this file");
    parse->add_option("--jobs", pa.jobs, "Worker threads (default: all cores)");

    GroupArgs ga;
    auto* group = app.add_subcommand("group", "Group parsed events into labeled sequences");
    group->add_option("--input", ga.input, "Parsed-event file")->required();
    group->add_option("--out", ga.out, "Sequence store output file")->required();
    group->add_option("--mode", ga.mode, "id|window|file")->check(CLI::IsMember({"id", "window", "file"}));
    group->add_option("--window", ga.window, "Window size (events) for --mode window");
    group->add_option("--step", ga.step, "Window step (default: window size)");
    group->add_option("--labels", ga.labels, "Per-sequence label file (id,label)");
    group->add_option("--profile", ga.profile, "Dataset profile (label conventions)");
    group->add_flag("--unlisted-normal", ga.unlisted_normal, "Ids missing from --labels are normal");

    StatsArgs sa;
    auto* stats = app.add_subcommand("stats", "Dataset characterization tables");
    stats->add_option("--input", sa.input, "Sequence store")->required();
    stats->add_option("--report", sa.report, "Ingest report JSON (adds line counts)");
    stats->add_option("--out-dir", sa.out_dir, "Output directory")->required();
    stats->add_option("--top", sa.top, "Most common sequences per class");
    stats->add_flag("--by-pair", sa.by_pair, "Inter-arrival summaries per event pair");

    ComplexityArgs ca;
    auto* complexity = app.add_subcommand("complexity", "N-gram entropy and Lempel-Ziv complexity");
    complexity->add_option("--input", ca.input, "Sequence store")->required();
    complexity->add_option("--entropy-n", ca.entropy_n, "N-gram sizes, e.g. 1..10 or 1,2,5");
    complexity->add_flag("--lz", ca.lz, "Also write the LZ curve to <out stem>.lz.csv");
    complexity->add_flag("--count-trailing", ca.count_trailing, "Count unfinished phrases at sequence ends");
    complexity->add_option("--out", ca.out, "Entropy CSV (measure,N,value)")->required();

    const auto add_detector_flags = [](CLI::App* sub, DetectorFlags& d) {
        sub->add_option("--ecvc-norm", d.ecvc_norm, "mass|len")->check(CLI::IsMember({"mass", "len"}));
        sub->add_option("--ngram-norm", d.ngram_norm, "global-max|per-sequence")
            ->check(CLI::IsMember({"global-max", "per-sequence"}));
        sub->add_option("--ngram-pad", d.ngram_pad, "start|end|none")->check(CLI::IsMember({"start", "end", "none"}));
        sub->add_option("--jobs", d.jobs, "Worker threads (default: all cores)");
    };

    EvalArgs ea;
    auto* eval = app.add_subcommand("eval", "Repeated semi-supervised evaluation");
    eval->add_option("--input", ea.input, "Sequence store")->required();
    eval->add_option("--detectors", ea.detectors,
                     "Comma list: event,length,ecvc,ecvc-idf,ngram<N>,edit,timing or +-joined combinations");
    eval->add_option("--train-frac", ea.train_frac, "Fraction of normal sequences used for training");
    eval->add_option("--runs", ea.runs, "Repetitions");
    eval->add_option("--seed", ea.seed, "RNG seed");
    eval->add_option("--granularity", ea.granularity, "sequence|event")->check(CLI::IsMember({"sequence", "event"}));
    eval->add_option("--out-dir", ea.out_dir, "Output directory")->required();
    add_detector_flags(eval, ea.det);

    SweepArgs wa;
    auto* sweep = app.add_subcommand("sweep", "Metric curves over the threshold grid for one run");
    sweep->add_option("--input", wa.input, "Sequence store")->required();
    sweep->add_option("--detector", wa.detector, "Detector name or combination");
    sweep->add_option("--train-frac", wa.train_frac, "Fraction of normal sequences used for training");
    sweep->add_option("--run", wa.run, "Run index");
    sweep->add_option("--seed", wa.seed, "RNG seed");
    sweep->add_option("--out", wa.out, "Sweep CSV")->required();
    sweep->add_option("--scores", wa.scores, "Score dump (seq_id,detector,score,flag,label)");
    sweep->add_option("--threshold", wa.threshold, "Threshold for the score dump flags (default: best)");
    add_detector_flags(sweep, wa.det);

    auto* profiles = app.add_subcommand("profiles", "Bundled dataset profiles");
    profiles->require_subcommand(1);
    auto* plist = profiles->add_subcommand("list", "List bundled profiles");
    std::string show_name;
    auto* pshow = profiles->add_subcommand("show", "Print a profile");
    pshow->add_option("name", show_name, "Profile name or file")->required();

    std::string synth_dir;
    auto* synth = app.add_subcommand("synth", "Regenerate the bundled synthetic fixtures");
    synth->add_option("--out-dir", synth_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    const Context ctx{std::vector<std::string>(argv, argv + argc), out, err};
    try {
        if (*parse) return cmd_parse(pa, ctx);
        if (*group) return cmd_group(ga, ctx);
        if (*stats) return cmd_stats(sa, ctx);
        if (*complexity) return cmd_complexity(ca, ctx);
        if (*eval) return cmd_eval(ea, ctx);
        if (*sweep) return cmd_sweep(wa, ctx);
        if (*plist) return cmd_profiles_list(ctx);
        if (*pshow) return cmd_profiles_show(show_name, ctx);
        if (*synth) return cmd_synth(synth_dir, ctx);
    } catch (const ParseError& e) {
        err << "logbench: parse error: " << e.what() << '\n';
        return 2;
    } catch (const ValidationError& e) {
        err << "logbench: invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "logbench: error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace logbench::cli
