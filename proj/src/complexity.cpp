#include "logbench/complexity.hpp"

#include "logbench/detectors.hpp"
#include "logbench/util.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <unordered_map>

namespace logbench {

EntropyEntry ngram_entropy(std::span<const Sequence> seqs, std::size_t n) {
    if (n == 0) throw ValidationError("entropy n-gram size must be positive");
    std::unordered_map<std::vector<EventId>, std::uint64_t, NGramHash> counts;
    std::uint64_t total = 0;
    for (const auto& s : seqs) {
        for (auto& w : sliding_windows(s.events, n, NGramPadding::None)) {
            ++counts[std::move(w)];
            ++total;
        }
    }
    EntropyEntry e;
    e.n = n;
    e.ngram_count = total;
    e.distinct_ngrams = counts.size();
    if (total == 0) {
        e.degenerate = true;
        return e;
    }
    // Sum in a fixed order so the result does not depend on hash iteration.
    std::vector<std::uint64_t> freq;
    freq.reserve(counts.size());
    for (const auto& [g, c] : counts) freq.push_back(c);
    std::sort(freq.begin(), freq.end());
    const double t = static_cast<double>(total);
    double h = 0.0;
    for (auto c : freq) {
        const double p = static_cast<double>(c) / t;
        h -= p * std::log2(p);
    }
    e.total_entropy = std::max(0.0, h);
    if (e.distinct_ngrams > 1)
        e.normalized_entropy = std::clamp(e.total_entropy / std::log2(static_cast<double>(e.distinct_ngrams)), 0.0, 1.0);
    return e;
}

std::vector<EntropyEntry> entropy_report(std::span<const Sequence> seqs, std::span<const std::size_t> ns) {
    std::vector<EntropyEntry> out;
    out.reserve(ns.size());
    for (auto n : ns) out.push_back(ngram_entropy(seqs, n));
    return out;
}

std::vector<LZPoint> lz_complexity(std::span<const Sequence> seqs, const LZOptions& options) {
    // Trie of known phrases: node 0 is the empty phrase.
    std::vector<std::map<EventId, std::uint32_t>> trie(1);
    std::vector<LZPoint> curve;
    curve.reserve(seqs.size());
    std::uint64_t events = 0, phrases = 0;
    for (const auto& s : seqs) {
        std::uint32_t node = 0;
        for (EventId e : s.events) {
            const auto it = trie[node].find(e);
            if (it != trie[node].end()) {
                node = it->second;
                continue;
            }
            trie[node].emplace(e, static_cast<std::uint32_t>(trie.size()));
            trie.emplace_back();
            ++phrases;
            node = 0;
        }
        if (options.count_trailing && node != 0) ++phrases;
        events += s.events.size();
        curve.push_back({events, phrases});
    }
    return curve;
}

void write_entropy_csv(std::ostream& out, std::span<const EntropyEntry> entries) {
    out << "measure,N,value\n";
    for (const auto& e : entries) {
        out << "entropy," << e.n << ',' << util::format_double(e.total_entropy) << '\n';
        out << "normalized_entropy," << e.n << ',' << util::format_double(e.normalized_entropy) << '\n';
        out << "distinct_ngrams," << e.n << ',' << e.distinct_ngrams << '\n';
    }
}

void write_lz_csv(std::ostream& out, std::span<const LZPoint> curve) {
    out << "events_processed,complexity\n";
    for (const auto& p : curve) out << p.events_processed << ',' << p.complexity << '\n';
}

}  // namespace logbench
