#pragma once

#include "logbench/sequencing.hpp"
#include "logbench/types.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace logbench {

/// Reserved symbol used to pad sequences shorter than the n-gram size.
inline constexpr EventId kBoundaryEvent = -1;

/// Guards relative timing deviations against zero-length range boundaries (seconds).
inline constexpr double kTimingEpsilon = 1e-6;

struct Verdict {
    double score = 0.0;
    bool flag = false;
};

// --- new event types -------------------------------------------------------

struct KnownEvents {
    std::unordered_set<EventId> ids;
};

KnownEvents train_new_events(std::span<const Sequence> train);
bool score_new_events(const Sequence& seq, const KnownEvents& model);

// --- sequence lengths ------------------------------------------------------

/// Inclusive bounds: a length equal to min_len or max_len is normal.
struct LengthBounds {
    std::size_t min_len = 0;
    std::size_t max_len = 0;
};

LengthBounds train_lengths(std::span<const Sequence> train);
bool score_lengths(const Sequence& seq, const LengthBounds& model);

// --- event count vector clustering -----------------------------------------

/// TF-IDF style weights: ln(|train| / df(e)); events never seen in training
/// get ln(|train|) + 1.
struct IdfWeights {
    std::unordered_map<EventId, double> weights;
    double unseen_weight = 1.0;

    double weight(EventId e) const;
};

enum class EcvcNorm {
    Mass,    // sum_e w(e)|a_e - b_e| / sum_e w(e)(a_e + b_e)
    Length,  // sum_e w(e)|a_e - b_e| / max(sum_e w(e)a_e, sum_e w(e)b_e), capped at 1
};

struct CountVectorBank {
    std::vector<CountVector> vectors;  // deduplicated, in first-seen order
    std::optional<IdfWeights> idf;
    std::size_t training_size = 0;
};

CountVectorBank train_ecvc(std::span<const Sequence> train, bool idf);

/// Normalized, optionally weighted L1 distance in [0, 1]. Two empty vectors are at distance 0.
double ecvc_distance(const CountVector& a, const CountVector& b, const IdfWeights* idf,
                     EcvcNorm norm = EcvcNorm::Mass);

/// Distance to the closest bank vector.
double ecvc_score(const CountVector& cv, const CountVectorBank& bank, EcvcNorm norm = EcvcNorm::Mass);
Verdict score_ecvc(const Sequence& seq, const CountVectorBank& bank, double threshold,
                   EcvcNorm norm = EcvcNorm::Mass);

// --- n-grams ---------------------------------------------------------------

enum class NGramPadding { Start, End, None };
enum class NGramNormalization { PerSequence, GlobalMax };

struct NGramHash {
    std::size_t operator()(const std::vector<EventId>& g) const noexcept;
};

struct NGramDict {
    std::size_t n = 0;
    NGramPadding padding = NGramPadding::Start;
    std::unordered_set<std::vector<EventId>, NGramHash> grams;
};

/// Step-1 windows of size n. Shorter sequences yield one window padded with
/// kBoundaryEvent (or none when padding is off).
std::vector<std::vector<EventId>> sliding_windows(std::span<const EventId> events, std::size_t n,
                                                  NGramPadding padding);

NGramDict train_ngrams(std::span<const Sequence> train, std::size_t n,
                       NGramPadding padding = NGramPadding::Start);

struct NGramCounts {
    std::size_t windows = 0;
    std::size_t mismatches = 0;
};

NGramCounts count_ngram_mismatches(std::span<const EventId> events, const NGramDict& dict);

/// Per-sequence: mismatches / windows. Global-max: mismatches / max mismatches over the batch.
std::vector<double> score_ngrams(std::span<const Sequence> batch, const NGramDict& dict,
                                 NGramNormalization normalization);
std::vector<Verdict> score_ngrams(std::span<const Sequence> batch, const NGramDict& dict,
                                  double threshold, NGramNormalization normalization);

// --- edit distance ---------------------------------------------------------

std::size_t levenshtein(std::span<const EventId> a, std::span<const EventId> b);

/// Exact distance when it is <= max_distance, otherwise nullopt.
std::optional<std::size_t> levenshtein_bounded(std::span<const EventId> a, std::span<const EventId> b,
                                               std::size_t max_distance);

struct EditBank {
    std::vector<std::vector<EventId>> sequences;  // deduplicated, sorted by length
};

EditBank train_edit(std::span<const Sequence> train);

/// min over the bank of levenshtein / max(|a|, |b|); 0 for two empty sequences.
double edit_score(std::span<const EventId> events, const EditBank& bank);
Verdict score_edit(const Sequence& seq, const EditBank& bank, double threshold);

// --- event timing ----------------------------------------------------------

struct EventPairHash {
    std::size_t operator()(const std::pair<EventId, EventId>& p) const noexcept;
};

struct TimingRange {
    double min_dt = 0.0;
    double max_dt = 0.0;
};

struct TimingRanges {
    std::unordered_map<std::pair<EventId, EventId>, TimingRange, EventPairHash> ranges;
};

/// Throws NotApplicableError when no training sequence carries timestamps.
TimingRanges train_timing(std::span<const Sequence> train);

struct TimingScore {
    double score = 0.0;
    std::size_t negative_deltas = 0;  // non-monotone timestamps, clamped to 0
};

/// Largest relative deviation outside the learned range over adjacent pairs,
/// clamped to [0, 1]. Pairs never seen in training are ignored.
TimingScore timing_score(const Sequence& seq, const TimingRanges& model);
Verdict score_timing(const Sequence& seq, const TimingRanges& model, double threshold);

// --- combination -----------------------------------------------------------

/// Logical OR. Throws ValidationError on an empty list.
bool combine_or(std::span<const bool> flags);

// --- uniform detector interface -------------------------------------------

/// Score of one sequence. Threshold-free detectors set hard_flag only.
struct SequenceScore {
    bool hard_flag = false;
    std::optional<double> score;

    bool flagged(double threshold) const { return hard_flag || (score && *score > threshold); }
};

struct BatchScores {
    std::vector<SequenceScore> scores;
    std::size_t negative_deltas = 0;
};

struct DetectorOptions {
    EcvcNorm ecvc_norm = EcvcNorm::Mass;
    NGramNormalization ngram_normalization = NGramNormalization::GlobalMax;
    NGramPadding ngram_padding = NGramPadding::Start;
    std::size_t jobs = 1;
};

/// Trained once on normal sequences, then scores test batches. Scoring is const.
class Detector {
public:
    virtual ~Detector() = default;

    virtual std::string name() const = 0;
    /// True when the detector exposes a score that is compared against a threshold.
    virtual bool thresholded() const = 0;
    /// Throws NotApplicableError or ValidationError.
    virtual void train(std::span<const Sequence> train) = 0;
    virtual BatchScores score(std::span<const Sequence> batch) const = 0;
};

/// Names: event, length, ecvc, ecvc-idf, ngram<N> (ngram2, ngram3, ngram10, ...),
/// edit, timing, and `+`-joined combinations with at most one thresholded member.
std::unique_ptr<Detector> make_detector(std::string_view spec, const DetectorOptions& options = {});

std::vector<std::string> base_detector_names();

}  // namespace logbench
