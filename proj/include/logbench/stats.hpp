#pragma once

#include "logbench/ingest.hpp"
#include "logbench/sequencing.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace logbench {

/// A count together with the denominator its percentage refers to.
struct Share {
    std::uint64_t count = 0;
    std::uint64_t base = 0;

    /// Percent, or nullopt when the base is 0.
    std::optional<double> percent() const;
};

struct ClassCounts {
    std::uint64_t total = 0;
    std::uint64_t normal = 0;
    std::uint64_t anom = 0;
};

struct SummaryRow {
    std::string metric;
    std::optional<Share> total;
    std::optional<Share> normal;
    std::optional<Share> anom;
};

struct DatasetSummary {
    std::optional<std::uint64_t> lines_total;
    ClassCounts events;
    ClassCounts event_types;
    ClassCounts sequences;
    ClassCounts unique_sequences;
    ClassCounts unique_count_vectors;
    // Sequences of one class whose exact event list also occurs in the other class.
    std::uint64_t normal_seqs_in_anom = 0;
    std::uint64_t anom_seqs_in_normal = 0;
    // Same with count vector equality.
    std::uint64_t normal_cvs_in_anom = 0;
    std::uint64_t anom_cvs_in_normal = 0;

    /// Overview table. Bases: events vs lines (total) and vs all events (per class);
    /// unique sequences vs all sequences (total) and vs all unique sequences (per class);
    /// unique count vectors vs unique sequences (total) and vs all unique count vectors
    /// (per class); cross-class rows vs the class's sequence count.
    std::vector<SummaryRow> rows() const;
};

/// Throws ValidationError when a sequence is unlabeled.
DatasetSummary summarize(std::span<const Sequence> seqs, const IngestReport* report = nullptr);

struct EventFrequency {
    EventId event_id = 0;
    std::uint64_t normal = 0;
    std::uint64_t anom = 0;
};

/// Sorted ascending by normal frequency, then anomalous frequency, then event id.
std::vector<EventFrequency> event_frequency_dist(std::span<const Sequence> seqs);

struct LengthBin {
    std::size_t length = 0;
    std::uint64_t normal = 0;
    std::uint64_t anom = 0;
};

std::vector<LengthBin> length_dist(std::span<const Sequence> seqs);

struct SequenceCount {
    std::vector<EventId> events;
    std::uint64_t count = 0;
};

struct TopSequences {
    std::vector<SequenceCount> normal;
    std::vector<SequenceCount> anom;
};

/// Descending by count; ties by lexicographic event list.
TopSequences top_sequences(std::span<const Sequence> seqs, std::size_t k);

struct FiveNumber {
    double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

/// Quartiles by linear interpolation between order statistics. Throws on empty input.
FiveNumber five_number(std::vector<double> values);

struct InterarrivalSummary {
    bool anomalous = false;
    std::optional<std::pair<EventId, EventId>> pair;  // nullopt: all pairs pooled
    std::uint64_t count = 0;
    FiveNumber dt;
};

/// Per class; with by_pair also one entry per (event, next event) pair.
/// Timestampless data yields an empty report.
std::vector<InterarrivalSummary> interarrival_dist(std::span<const Sequence> seqs, bool by_pair = false);

void write_summary_csv(std::ostream& out, const DatasetSummary& summary);
std::string summary_to_json(const DatasetSummary& summary);
void write_event_frequency_csv(std::ostream& out, std::span<const EventFrequency> rows);
void write_length_csv(std::ostream& out, std::span<const LengthBin> rows);
void write_top_sequences_csv(std::ostream& out, const TopSequences& top);
void write_interarrival_csv(std::ostream& out, std::span<const InterarrivalSummary> rows);

}  // namespace logbench
