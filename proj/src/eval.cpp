#include "logbench/eval.hpp"

#include "logbench/util.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <unordered_set>

namespace logbench {

std::vector<double> default_threshold_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 100; ++i) grid.push_back(i / 100.0);
    return grid;
}

void EvalConfig::validate() const {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw ValidationError("training fraction must lie in (0, 1), got " + util::format_double(train_fraction));
    if (repetitions == 0) throw ValidationError("number of runs must be positive");
    if (threshold_grid.empty()) throw ValidationError("threshold grid is empty");
    for (std::size_t i = 0; i < threshold_grid.size(); ++i) {
        const double t = threshold_grid[i];
        if (!(t >= 0.0 && t <= 1.0)) throw ValidationError("thresholds must lie in [0, 1]");
        if (i && !(t > threshold_grid[i - 1])) throw ValidationError("threshold grid must be strictly increasing");
    }
    if (granularity == Granularity::Sequence && detectors.empty())
        throw ValidationError("no detectors requested");
    for (const auto& d : detectors) make_detector(d, detector_options);
}

Metrics compute_metrics(const ConfusionCounts& c) {
    const auto ratio = [](std::uint64_t num, std::uint64_t den) -> std::optional<double> {
        if (den == 0) return std::nullopt;
        return static_cast<double>(num) / static_cast<double>(den);
    };
    Metrics m;
    m.precision = ratio(c.tp, c.tp + c.fp);
    m.recall = ratio(c.tp, c.tp + c.fn);
    m.tnr = ratio(c.tn, c.tn + c.fp);
    if (m.precision && m.recall) {
        const double s = *m.precision + *m.recall;
        m.f1 = s > 0.0 ? 2.0 * *m.precision * *m.recall / s : 0.0;
    }
    return m;
}

std::size_t training_size(std::size_t normals, double fraction) {
    if (normals == 0) throw ValidationError("no normal sequences to train on");
    const auto n = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(normals) + 0.5));
    return std::clamp<std::size_t>(n, 1, normals);
}

std::uint64_t run_seed(std::uint64_t seed, std::size_t run) {
    return util::mix64(util::mix64(seed) ^ (static_cast<std::uint64_t>(run) + 0x9e3779b97f4a7c15ULL));
}

Split split(std::span<const Sequence> seqs, double train_fraction, std::uint64_t seed, std::size_t run) {
    std::vector<std::size_t> normals;
    std::size_t anomalies = 0;
    for (std::size_t i = 0; i < seqs.size(); ++i) {
        if (seqs[i].label.is_normal()) normals.push_back(i);
        else if (seqs[i].label.is_anomalous()) ++anomalies;
    }
    if (normals.empty()) throw ValidationError("evaluation needs at least one normal sequence");
    if (anomalies == 0) throw ValidationError("evaluation needs at least one anomalous sequence; none found");
    const std::size_t k = training_size(normals.size(), train_fraction);

    std::mt19937_64 rng(run_seed(seed, run));
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(util::uniform_below(rng, normals.size() - i));
        std::swap(normals[i], normals[j]);
    }
    Split out;
    out.train.assign(normals.begin(), normals.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(out.train.begin(), out.train.end());
    std::size_t t = 0;
    for (std::size_t i = 0; i < seqs.size(); ++i) {
        if (t < out.train.size() && out.train[t] == i) {
            ++t;
            continue;
        }
        if (seqs[i].label.is_labeled()) out.test.push_back(i);
    }
    return out;
}

ConfusionCounts confusion_at(const BatchScores& scores, std::span<const Sequence> test, double threshold) {
    if (scores.scores.size() != test.size()) throw ValidationError("score count differs from test set size");
    ConfusionCounts c;
    for (std::size_t i = 0; i < test.size(); ++i) {
        const bool flagged = scores.scores[i].flagged(threshold);
        if (test[i].label.is_anomalous()) (flagged ? c.tp : c.fn) += 1;
        else (flagged ? c.fp : c.tn) += 1;
    }
    return c;
}

std::size_t best_point_index(std::span<const ThresholdPoint> points) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        const auto& cand = points[i].metrics.f1;
        const auto& cur = points[best].metrics.f1;
        if (cand && (!cur || *cand > *cur)) best = i;
    }
    return best;
}

std::vector<ThresholdPoint> threshold_sweep(const BatchScores& scores, std::span<const Sequence> test,
                                            bool thresholded, std::span<const double> grid) {
    std::vector<ThresholdPoint> points;
    if (!thresholded) {
        const auto c = confusion_at(scores, test, 0.0);
        points.push_back({std::nullopt, c, compute_metrics(c)});
        return points;
    }
    points.reserve(grid.size());
    for (double t : grid) {
        const auto c = confusion_at(scores, test, t);
        points.push_back({t, c, compute_metrics(c)});
    }
    return points;
}

RunResult evaluate_run(std::span<const Sequence> train, std::span<const Sequence> test, Detector& detector,
                       std::span<const double> grid, BatchScores* scores_out) {
    RunResult r;
    r.detector = detector.name();
    r.train_size = train.size();
    try {
        detector.train(train);
    } catch (const NotApplicableError& e) {
        r.applicable = false;
        r.reason = e.what();
        return r;
    }
    BatchScores scores = detector.score(test);
    r.negative_deltas = scores.negative_deltas;
    r.points = threshold_sweep(scores, test, detector.thresholded(), grid);
    r.best = best_point_index(r.points);
    if (scores_out) *scores_out = std::move(scores);
    return r;
}

std::vector<std::string> degeneracy_warnings(const RunResult& r) {
    std::vector<std::string> w;
    const std::string who = r.detector + " run " + std::to_string(r.run);
    if (!r.applicable) {
        w.push_back(who + ": not applicable (" + r.reason + ")");
        return w;
    }
    const auto* p = r.best_point();
    if (!p) return w;
    const auto& m = p->metrics;
    if (!m.precision || !m.recall || !m.tnr || !m.f1) {
        std::string which;
        for (const auto& [name, v] : {std::pair{"precision", &m.precision}, {"recall", &m.recall},
                                      {"tnr", &m.tnr}, {"f1", &m.f1}})
            if (!*v) which += (which.empty() ? "" : ",") + std::string(name);
        w.push_back(who + ": undefined metrics at best operating point (NA: " + which + ")");
    }
    if (m.tnr && *m.tnr == 0.0)
        w.push_back(who + ": degenerate best operating point, TNR 0 (every normal test item is flagged)");
    if (r.negative_deltas)
        w.push_back(who + ": " + std::to_string(r.negative_deltas) + " negative time deltas clamped to 0");
    return w;
}

std::vector<DetectorSummary> summarize_runs(std::span<const RunResult> runs, std::span<const std::string> detectors) {
    std::vector<DetectorSummary> out;
    for (const auto& name : detectors) {
        DetectorSummary s;
        s.detector = name;
        std::vector<double> f1s;
        bool any_applicable = false;
        for (const auto& r : runs) {
            if (r.detector != name) continue;
            if (!r.applicable) continue;
            any_applicable = true;
            if (const auto* p = r.best_point(); p && p->metrics.f1) f1s.push_back(*p->metrics.f1);
        }
        s.applicable = any_applicable;
        s.runs = f1s.size();
        if (!f1s.empty()) {
            const double n = static_cast<double>(f1s.size());
            const double mean = std::accumulate(f1s.begin(), f1s.end(), 0.0) / n;
            double var = 0.0;
            for (double f : f1s) var += (f - mean) * (f - mean);
            s.avg_f1 = mean;
            s.max_f1 = *std::max_element(f1s.begin(), f1s.end());
            s.std_f1 = std::sqrt(var / n);
        }
        out.push_back(std::move(s));
    }
    return out;
}

namespace {

std::vector<Sequence> gather(std::span<const Sequence> seqs, std::span<const std::size_t> idx) {
    std::vector<Sequence> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(seqs[i]);
    return out;
}

}  // namespace

StudyReport evaluate_study(std::span<const Sequence> seqs, const EvalConfig& config) {
    config.validate();
    StudyReport report;
    std::vector<std::string> names;
    for (const auto& d : config.detectors) names.push_back(make_detector(d, config.detector_options)->name());
    for (std::size_t run = 0; run < config.repetitions; ++run) {
        const Split sp = split(seqs, config.train_fraction, config.seed, run);
        const auto train = gather(seqs, sp.train);
        const auto test = gather(seqs, sp.test);
        report.train_sizes.push_back(train.size());
        for (const auto& spec : config.detectors) {
            auto det = make_detector(spec, config.detector_options);
            RunResult r = evaluate_run(train, test, *det, config.threshold_grid);
            r.run = run;
            for (auto& w : degeneracy_warnings(r)) report.warnings.push_back(std::move(w));
            report.runs.push_back(std::move(r));
        }
    }
    report.summary = summarize_runs(report.runs, names);
    return report;
}

StudyReport evaluate_events(std::span<const Sequence> seqs, const EvalConfig& config) {
    EvalConfig cfg = config;
    cfg.granularity = Granularity::Event;
    cfg.validate();
    for (const auto& s : seqs)
        if (!s.events.empty() && !s.has_event_labels())
            throw ValidationError("event-granularity evaluation needs per-event labels; sequence " + s.seq_id +
                                  " has none");
    StudyReport report;
    report.granularity = Granularity::Event;
    const std::string name = "event";
    for (std::size_t run = 0; run < cfg.repetitions; ++run) {
        const Split sp = split(seqs, cfg.train_fraction, cfg.seed, run);
        std::unordered_set<EventId> known;
        for (auto i : sp.train) known.insert(seqs[i].events.begin(), seqs[i].events.end());
        ConfusionCounts c;
        for (auto i : sp.test) {
            const auto& s = seqs[i];
            for (std::size_t k = 0; k < s.size(); ++k) {
                const auto& l = s.event_labels[k];
                if (!l.is_labeled()) continue;
                const bool flagged = !known.contains(s.events[k]);
                if (l.is_anomalous()) (flagged ? c.tp : c.fn) += 1;
                else (flagged ? c.fp : c.tn) += 1;
            }
        }
        RunResult r;
        r.run = run;
        r.detector = name;
        r.train_size = sp.train.size();
        r.points.push_back({std::nullopt, c, compute_metrics(c)});
        for (auto& w : degeneracy_warnings(r)) report.warnings.push_back(std::move(w));
        report.train_sizes.push_back(sp.train.size());
        report.runs.push_back(std::move(r));
    }
    const std::vector<std::string> names{name};
    report.summary = summarize_runs(report.runs, names);
    return report;
}

std::string format_metric(const std::optional<double>& v) { return v ? util::format_fixed(*v, 6) : "NA"; }

namespace {

void put_point(std::ostream& out, const RunResult& r, const ThresholdPoint& p) {
    out << r.run << ',' << r.detector << ',' << (p.threshold ? util::format_fixed(*p.threshold, 2) : "NA") << ','
        << p.counts.tp << ',' << p.counts.fp << ',' << p.counts.tn << ',' << p.counts.fn << ','
        << format_metric(p.metrics.precision) << ',' << format_metric(p.metrics.recall) << ','
        << format_metric(p.metrics.tnr) << ',' << format_metric(p.metrics.f1);
}

}  // namespace

void write_results_csv(std::ostream& out, std::span<const RunResult> runs) {
    out << "run,detector,threshold,TP,FP,TN,FN,prec,rec,tnr,f1\n";
    for (const auto& r : runs) {
        if (!r.applicable) {
            out << r.run << ',' << r.detector << ",NA,NA,NA,NA,NA,NA,NA,NA,NA\n";
            continue;
        }
        for (const auto& p : r.points) {
            put_point(out, r, p);
            out << '\n';
        }
    }
}

void write_summary_csv(std::ostream& out, std::span<const DetectorSummary> summary) {
    out << "detector,avg_f1,max_f1,std_f1\n";
    for (const auto& s : summary)
        out << s.detector << ',' << format_metric(s.avg_f1) << ',' << format_metric(s.max_f1) << ','
            << format_metric(s.std_f1) << '\n';
}

void write_runs_csv(std::ostream& out, std::span<const RunResult> runs) {
    out << "run,detector,threshold,TP,FP,TN,FN,prec,rec,tnr,f1,train_size,warning\n";
    for (const auto& r : runs) {
        const auto warnings = degeneracy_warnings(r);
        std::string flag;
        for (const auto& w : warnings) {
            const auto colon = w.find(": ");
            flag += (flag.empty() ? "" : "; ") + (colon == std::string::npos ? w : w.substr(colon + 2));
        }
        for (char& ch : flag)
            if (ch == ',') ch = ' ';
        if (const auto* p = r.best_point()) put_point(out, r, *p);
        else out << r.run << ',' << r.detector << ",NA,NA,NA,NA,NA,NA,NA,NA,NA";
        out << ',' << r.train_size << ',' << flag << '\n';
    }
}

void write_score_dump(std::ostream& out, std::span<const Sequence> test, const std::string& detector,
                      const BatchScores& scores, double threshold) {
    out << "seq_id,detector,score,flag,label\n";
    for (std::size_t i = 0; i < test.size(); ++i) {
        const auto& s = scores.scores[i];
        out << test[i].seq_id << ',' << detector << ',' << (s.score ? util::format_double(*s.score) : "NA") << ','
            << (s.flagged(threshold) ? 1 : 0) << ',' << to_string(test[i].label) << '\n';
    }
}

}  // namespace logbench
