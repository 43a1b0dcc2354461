#pragma once

// Deliberately naive reference implementations used to cross-check the library.

#include "logbench/eval.hpp"
#include "logbench/sequencing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

namespace oracle {

using logbench::EventId;
using logbench::Sequence;

/// Textbook recursion on suffixes, memoized only to keep exhaustive checks fast.
inline std::size_t levenshtein(const std::vector<EventId>& a, const std::vector<EventId>& b) {
    const std::size_t unset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> memo((a.size() + 1) * (b.size() + 1), unset);
    std::function<std::size_t(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t j) -> std::size_t {
        if (i == a.size()) return b.size() - j;
        if (j == b.size()) return a.size() - i;
        std::size_t& slot = memo[i * (b.size() + 1) + j];
        if (slot != unset) return slot;
        if (a[i] == b[j]) slot = rec(i + 1, j + 1);
        else slot = 1 + std::min({rec(i + 1, j), rec(i, j + 1), rec(i + 1, j + 1)});
        return slot;
    };
    return rec(0, 0);
}

/// Phrase dictionary kept as a set of strings.
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> lz(const std::vector<std::vector<EventId>>& seqs,
                                                                bool count_trailing = false) {
    std::unordered_set<std::string> dict;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> curve;
    std::uint64_t events = 0, phrases = 0;
    for (const auto& s : seqs) {
        std::string phrase;
        for (EventId e : s) {
            phrase += std::to_string(e) + ",";
            if (!dict.count(phrase)) {
                dict.insert(phrase);
                ++phrases;
                phrase.clear();
            }
        }
        if (count_trailing && !phrase.empty()) ++phrases;
        events += s.size();
        curve.emplace_back(events, phrases);
    }
    return curve;
}

/// Mismatching windows by explicit enumeration against a list of known windows.
inline std::size_t ngram_mismatches(const std::vector<EventId>& s, const std::vector<std::vector<EventId>>& known,
                                    std::size_t n) {
    std::vector<std::vector<EventId>> windows;
    if (s.size() >= n) {
        for (std::size_t i = 0; i + n <= s.size(); ++i) windows.emplace_back(s.begin() + i, s.begin() + i + n);
    } else {
        std::vector<EventId> w(n - s.size(), logbench::kBoundaryEvent);
        w.insert(w.end(), s.begin(), s.end());
        windows.push_back(w);
    }
    std::size_t miss = 0;
    for (const auto& w : windows)
        if (std::find(known.begin(), known.end(), w) == known.end()) ++miss;
    return miss;
}

inline std::vector<std::vector<EventId>> ngram_training_windows(const std::vector<std::vector<EventId>>& train,
                                                                std::size_t n) {
    std::vector<std::vector<EventId>> known;
    for (const auto& s : train) {
        if (s.size() >= n) {
            for (std::size_t i = 0; i + n <= s.size(); ++i) known.emplace_back(s.begin() + i, s.begin() + i + n);
        } else {
            std::vector<EventId> w(n - s.size(), logbench::kBoundaryEvent);
            w.insert(w.end(), s.begin(), s.end());
            known.push_back(w);
        }
    }
    return known;
}

/// Dense count arrays over the joint alphabet, unit weights, mass normalization.
inline double ecvc_score(const std::vector<EventId>& s, const std::vector<std::vector<EventId>>& bank) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : bank) {
        std::set<EventId> alphabet(s.begin(), s.end());
        alphabet.insert(b.begin(), b.end());
        double diff = 0, mass = 0;
        for (EventId e : alphabet) {
            const double ca = static_cast<double>(std::count(s.begin(), s.end(), e));
            const double cb = static_cast<double>(std::count(b.begin(), b.end(), e));
            diff += std::abs(ca - cb);
            mass += ca + cb;
        }
        best = std::min(best, mass == 0 ? 0.0 : diff / mass);
    }
    return best;
}

/// H = log2(T) - (1/T) sum c log2 c over pooled n-gram counts.
inline double entropy(const std::vector<std::vector<EventId>>& seqs, std::size_t n, std::size_t* distinct = nullptr) {
    std::map<std::vector<EventId>, double> counts;
    double total = 0;
    for (const auto& s : seqs)
        for (std::size_t i = 0; i + n <= s.size(); ++i) {
            counts[std::vector<EventId>(s.begin() + i, s.begin() + i + n)] += 1;
            total += 1;
        }
    if (distinct) *distinct = counts.size();
    if (total == 0) return 0.0;
    double acc = 0;
    for (const auto& [g, c] : counts) acc += c * std::log2(c);
    return std::log2(total) - acc / total;
}

/// Confusion counts from (score, anomalous) pairs at one threshold.
inline logbench::ConfusionCounts confusion(const std::vector<double>& scores, const std::vector<bool>& anomalous,
                                          double threshold) {
    logbench::ConfusionCounts c;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool flag = scores[i] > threshold;
        if (anomalous[i] && flag) ++c.tp;
        if (anomalous[i] && !flag) ++c.fn;
        if (!anomalous[i] && flag) ++c.fp;
        if (!anomalous[i] && !flag) ++c.tn;
    }
    return c;
}

}  // namespace oracle
