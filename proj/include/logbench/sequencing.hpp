#pragma once

#include "logbench/ingest.hpp"
#include "logbench/types.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace logbench {

enum class SequenceOrigin { Identifier, Window, File };

/// Ordered event types of one process/trace plus its ground truth.
struct Sequence {
    std::string seq_id;
    std::vector<EventId> events;
    std::vector<double> timestamps;  // empty, or parallel to events (NaN = absent)
    std::vector<Label> event_labels;  // empty, or parallel to events
    Label label;
    SequenceOrigin origin = SequenceOrigin::Identifier;

    std::size_t size() const noexcept { return events.size(); }
    bool has_timestamps() const;
    bool has_event_labels() const noexcept { return !event_labels.empty(); }
};

/// Occurrence count per event type, sorted by event id.
class CountVector {
public:
    using Entry = std::pair<EventId, std::uint32_t>;

    CountVector() = default;
    explicit CountVector(std::span<const EventId> events);

    std::uint32_t count(EventId e) const;
    std::uint64_t total() const noexcept { return total_; }
    const std::vector<Entry>& entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }

    friend bool operator==(const CountVector&, const CountVector&) = default;

private:
    std::vector<Entry> entries_;
    std::uint64_t total_ = 0;
};

struct CountVectorHash {
    std::size_t operator()(const CountVector& cv) const noexcept;
};

struct EventListHash {
    std::size_t operator()(const std::vector<EventId>& v) const noexcept;
};

CountVector to_count_vector(const Sequence& seq);

/// Accumulates events into one sequence per identifier, in order of first appearance.
class IdentifierGrouper {
public:
    explicit IdentifierGrouper(SequenceOrigin origin = SequenceOrigin::Identifier) : origin_(origin) {}

    void add(const ParsedEvent& event);
    std::vector<Sequence> finish() &&;

    std::uint64_t discarded() const noexcept { return discarded_; }

private:
    SequenceOrigin origin_;
    std::vector<Sequence> sequences_;
    std::unordered_map<std::string, std::size_t> index_;
    std::uint64_t discarded_ = 0;
    bool any_timestamp_ = false;
    bool any_event_label_ = false;
};

/// An event with k ids contributes to k sequences. Events without ids are counted, not grouped.
std::vector<Sequence> group_by_identifier(std::span<const ParsedEvent> events);

/// One sequence per input file (events carry the file id as their only sequence id).
std::vector<Sequence> group_by_file(std::span<const ParsedEvent> events);

/// Windows start at 0, step, 2*step, ... and sliding stops after the first
/// window that runs past the end of the stream (that partial window is kept).
/// A window at least as long as the stream yields that single window.
/// Throws ValidationError when window_size or step is 0.
std::vector<Sequence> group_by_window(std::span<const ParsedEvent> events, std::size_t window_size,
                                      std::size_t step);

/// Start offsets produced by group_by_window for a stream of `n` events.
std::vector<std::pair<std::size_t, std::size_t>> window_bounds(std::size_t n, std::size_t window_size,
                                                               std::size_t step);

struct LiftedSequence {
    Sequence sequence;
    bool degenerate = false;  // empty sequence; labeled normal
};

/// Sequence is anomalous iff any event is; the tag is that of the first anomalous event.
/// Throws ValidationError when the sequence carries no per-event labels.
LiftedSequence lift_event_labels(Sequence seq);

using SequenceLabels = std::unordered_map<std::string, Label>;

/// Reads `id,label` (comma or tab separated, optional header). A single-column
/// file lists anomalous ids only.
SequenceLabels load_sequence_labels(const std::filesystem::path& path);
SequenceLabels parse_sequence_labels(std::istream& in);

struct LabelAttachment {
    std::vector<Sequence> labeled;
    std::vector<std::string> unlabeled_ids;  // excluded from evaluation
};

LabelAttachment attach_sequence_labels(std::vector<Sequence> seqs, const SequenceLabels& labels,
                                       bool unlisted_normal = false);

/// Tab-separated `seq_id, label, events, timestamps[, event_labels]` with a header.
void write_sequences(std::ostream& out, std::span<const Sequence> seqs);
std::vector<Sequence> read_sequences(std::istream& in);
std::vector<Sequence> load_sequences(const std::filesystem::path& path);

}  // namespace logbench
