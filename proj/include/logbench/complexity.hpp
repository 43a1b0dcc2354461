#pragma once

#include "logbench/sequencing.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace logbench {

struct EntropyEntry {
    std::size_t n = 0;
    double total_entropy = 0.0;       // bits
    double normalized_entropy = 0.0;  // total / log2(distinct); 0 when distinct <= 1
    std::uint64_t distinct_ngrams = 0;
    std::uint64_t ngram_count = 0;
    bool degenerate = false;  // no n-gram of this size at all
};

/// Pooled n-grams over all sequences, no padding. Throws ValidationError for n == 0.
EntropyEntry ngram_entropy(std::span<const Sequence> seqs, std::size_t n);

std::vector<EntropyEntry> entropy_report(std::span<const Sequence> seqs, std::span<const std::size_t> ns);

struct LZPoint {
    std::uint64_t events_processed = 0;
    std::uint64_t complexity = 0;
};

struct LZOptions {
    /// Count the unfinished phrase left at a sequence boundary as a phrase of its own.
    bool count_trailing = false;
};

/// LZ78 phrase count with one dictionary shared by all sequences, in the given order.
/// The current phrase restarts at every sequence boundary. One point per sequence.
std::vector<LZPoint> lz_complexity(std::span<const Sequence> seqs, const LZOptions& options = {});

void write_entropy_csv(std::ostream& out, std::span<const EntropyEntry> entries);
void write_lz_csv(std::ostream& out, std::span<const LZPoint> curve);

}  // namespace logbench
