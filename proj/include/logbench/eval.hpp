#pragma once

#include "logbench/detectors.hpp"
#include "logbench/sequencing.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace logbench {

enum class Granularity { Sequence, Event };

/// 0.00, 0.01, ..., 1.00
std::vector<double> default_threshold_grid();

struct EvalConfig {
    double train_fraction = 0.01;
    std::size_t repetitions = 25;
    std::vector<double> threshold_grid = default_threshold_grid();
    std::uint64_t seed = 42;
    Granularity granularity = Granularity::Sequence;
    std::vector<std::string> detectors;
    DetectorOptions detector_options;

    /// Throws ValidationError.
    void validate() const;
};

struct ConfusionCounts {
    std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;

    std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Undefined values (zero denominators) are nullopt.
struct Metrics {
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> tnr;
    std::optional<double> f1;
};

/// F1 is undefined when precision or recall is; otherwise 2PR/(P+R), and 0 when P+R is 0.
Metrics compute_metrics(const ConfusionCounts& c);

/// round-half-up(fraction * normals), at least 1 and at most `normals`.
std::size_t training_size(std::size_t normals, double fraction);

/// Independent RNG seed for one run.
std::uint64_t run_seed(std::uint64_t seed, std::size_t run);

struct Split {
    std::vector<std::size_t> train;  // indices of sampled normal sequences, ascending
    std::vector<std::size_t> test;   // every other labeled sequence, in input order
};

/// Throws ValidationError without normal or anomalous sequences. Unlabeled sequences are skipped.
Split split(std::span<const Sequence> seqs, double train_fraction, std::uint64_t seed, std::size_t run);

ConfusionCounts confusion_at(const BatchScores& scores, std::span<const Sequence> test, double threshold);

struct ThresholdPoint {
    std::optional<double> threshold;  // nullopt for threshold-free detectors
    ConfusionCounts counts;
    Metrics metrics;
};

struct RunResult {
    std::size_t run = 0;
    std::string detector;
    bool applicable = true;
    std::string reason;  // why not applicable
    std::vector<ThresholdPoint> points;
    std::size_t best = 0;  // index into points
    std::size_t train_size = 0;
    std::size_t negative_deltas = 0;

    const ThresholdPoint* best_point() const { return points.empty() ? nullptr : &points[best]; }
};

/// argmax F1 over points; undefined F1 ranks last; ties go to the earliest (smallest threshold).
std::size_t best_point_index(std::span<const ThresholdPoint> points);

/// Points for every grid value from one set of cached scores (one point if threshold-free).
std::vector<ThresholdPoint> threshold_sweep(const BatchScores& scores, std::span<const Sequence> test,
                                            bool thresholded, std::span<const double> grid);

/// Trains once, scores once, sweeps the grid. Not-applicable detectors yield applicable = false.
RunResult evaluate_run(std::span<const Sequence> train, std::span<const Sequence> test, Detector& detector,
                       std::span<const double> grid, BatchScores* scores_out = nullptr);

struct DetectorSummary {
    std::string detector;
    std::size_t runs = 0;        // runs with a defined best F1
    std::optional<double> avg_f1;
    std::optional<double> max_f1;
    std::optional<double> std_f1;  // population standard deviation
    bool applicable = true;
};

struct StudyReport {
    std::vector<RunResult> runs;  // ordered by (run, detector order in config)
    std::vector<DetectorSummary> summary;
    std::vector<std::size_t> train_sizes;  // per run
    std::vector<std::string> warnings;
    Granularity granularity = Granularity::Sequence;
};

/// Degeneracy warnings for one run's best operating point (TNR 0, undefined metrics).
std::vector<std::string> degeneracy_warnings(const RunResult& r);

std::vector<DetectorSummary> summarize_runs(std::span<const RunResult> runs, std::span<const std::string> detectors);

StudyReport evaluate_study(std::span<const Sequence> seqs, const EvalConfig& config);

/// Event granularity: known types come from the sampled normal sequences; each event of a
/// test sequence is flagged iff its type is unknown. Requires per-event labels.
StudyReport evaluate_events(std::span<const Sequence> seqs, const EvalConfig& config);

std::string format_metric(const std::optional<double>& v);

void write_results_csv(std::ostream& out, std::span<const RunResult> runs);
void write_summary_csv(std::ostream& out, std::span<const DetectorSummary> summary);
void write_runs_csv(std::ostream& out, std::span<const RunResult> runs);

/// `seq_id,detector,score,flag,label`; score NA for threshold-free detectors.
void write_score_dump(std::ostream& out, std::span<const Sequence> test, const std::string& detector,
                      const BatchScores& scores, double threshold);

}  // namespace logbench
