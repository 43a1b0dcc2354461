#include "logbench/stats.hpp"

#include "logbench/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

namespace logbench {

std::optional<double> Share::percent() const {
    if (base == 0) return std::nullopt;
    return 100.0 * static_cast<double>(count) / static_cast<double>(base);
}

namespace {

void require_labeled(std::span<const Sequence> seqs) {
    for (const auto& s : seqs)
        if (!s.label.is_labeled()) throw ValidationError("sequence " + s.seq_id + " is unlabeled");
}

template <typename Key, typename Hash>
struct ClassPresence {
    std::unordered_map<Key, std::pair<std::uint64_t, std::uint64_t>, Hash> counts;  // normal, anom

    void add(Key key, bool anomalous) {
        auto& c = counts[std::move(key)];
        (anomalous ? c.second : c.first) += 1;
    }
    ClassCounts unique() const {
        ClassCounts u;
        u.total = counts.size();
        for (const auto& [k, c] : counts) {
            if (c.first) ++u.normal;
            if (c.second) ++u.anom;
        }
        return u;
    }
    // Number of sequences of each class whose key also occurs in the other class.
    std::pair<std::uint64_t, std::uint64_t> cross() const {
        std::pair<std::uint64_t, std::uint64_t> x{0, 0};
        for (const auto& [k, c] : counts) {
            if (c.first && c.second) {
                x.first += c.first;
                x.second += c.second;
            }
        }
        return x;
    }
};

}  // namespace

DatasetSummary summarize(std::span<const Sequence> seqs, const IngestReport* report) {
    require_labeled(seqs);
    DatasetSummary s;
    if (report) s.lines_total = report->total_lines;

    std::unordered_set<EventId> types_all, types_normal, types_anom;
    ClassPresence<std::vector<EventId>, EventListHash> lists;
    ClassPresence<CountVector, CountVectorHash> vectors;
    for (const auto& seq : seqs) {
        const bool anom = seq.label.is_anomalous();
        ++s.sequences.total;
        (anom ? s.sequences.anom : s.sequences.normal) += 1;
        s.events.total += seq.size();
        (anom ? s.events.anom : s.events.normal) += seq.size();
        types_all.insert(seq.events.begin(), seq.events.end());
        (anom ? types_anom : types_normal).insert(seq.events.begin(), seq.events.end());
        lists.add(seq.events, anom);
        vectors.add(to_count_vector(seq), anom);
    }
    s.event_types = {types_all.size(), types_normal.size(), types_anom.size()};
    s.unique_sequences = lists.unique();
    s.unique_count_vectors = vectors.unique();
    std::tie(s.normal_seqs_in_anom, s.anom_seqs_in_normal) = lists.cross();
    std::tie(s.normal_cvs_in_anom, s.anom_cvs_in_normal) = vectors.cross();
    return s;
}

std::vector<SummaryRow> DatasetSummary::rows() const {
    std::vector<SummaryRow> r;
    if (lines_total) r.push_back({"lines", Share{*lines_total, *lines_total}, std::nullopt, std::nullopt});
    r.push_back({"events", lines_total ? std::optional<Share>(Share{events.total, *lines_total})
                                       : std::optional<Share>(Share{events.total, 0}),
                 Share{events.normal, events.total}, Share{events.anom, events.total}});
    r.push_back({"event_types", Share{event_types.total, event_types.total}, Share{event_types.normal, event_types.total},
                 Share{event_types.anom, event_types.total}});
    r.push_back({"sequences", Share{sequences.total, sequences.total}, Share{sequences.normal, sequences.total},
                 Share{sequences.anom, sequences.total}});
    r.push_back({"unique_sequences", Share{unique_sequences.total, sequences.total},
                 Share{unique_sequences.normal, unique_sequences.total},
                 Share{unique_sequences.anom, unique_sequences.total}});
    r.push_back({"sequences_in_other_class", std::nullopt, Share{normal_seqs_in_anom, sequences.normal},
                 Share{anom_seqs_in_normal, sequences.anom}});
    r.push_back({"unique_count_vectors", Share{unique_count_vectors.total, unique_sequences.total},
                 Share{unique_count_vectors.normal, unique_count_vectors.total},
                 Share{unique_count_vectors.anom, unique_count_vectors.total}});
    r.push_back({"count_vectors_in_other_class", std::nullopt, Share{normal_cvs_in_anom, sequences.normal},
                 Share{anom_cvs_in_normal, sequences.anom}});
    return r;
}

std::vector<EventFrequency> event_frequency_dist(std::span<const Sequence> seqs) {
    std::map<EventId, EventFrequency> freq;
    for (const auto& s : seqs) {
        const bool anom = s.label.is_anomalous();
        for (EventId e : s.events) {
            auto& f = freq[e];
            f.event_id = e;
            (anom ? f.anom : f.normal) += 1;
        }
    }
    std::vector<EventFrequency> out;
    out.reserve(freq.size());
    for (const auto& [e, f] : freq) out.push_back(f);
    std::stable_sort(out.begin(), out.end(), [](const EventFrequency& a, const EventFrequency& b) {
        if (a.normal != b.normal) return a.normal < b.normal;
        return a.anom < b.anom;
    });
    return out;
}

std::vector<LengthBin> length_dist(std::span<const Sequence> seqs) {
    std::map<std::size_t, LengthBin> bins;
    for (const auto& s : seqs) {
        auto& b = bins[s.size()];
        b.length = s.size();
        (s.label.is_anomalous() ? b.anom : b.normal) += 1;
    }
    std::vector<LengthBin> out;
    for (const auto& [len, b] : bins) out.push_back(b);
    return out;
}

namespace {

std::vector<SequenceCount> top_k(const std::unordered_map<std::vector<EventId>, std::uint64_t, EventListHash>& counts,
                                 std::size_t k) {
    std::vector<SequenceCount> all;
    all.reserve(counts.size());
    for (const auto& [ev, c] : counts) all.push_back({ev, c});
    const auto by_rank = [](const SequenceCount& a, const SequenceCount& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.events < b.events;
    };
    k = std::min(k, all.size());
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), by_rank);
    all.resize(k);
    return all;
}

}  // namespace

TopSequences top_sequences(std::span<const Sequence> seqs, std::size_t k) {
    std::unordered_map<std::vector<EventId>, std::uint64_t, EventListHash> normal, anom;
    for (const auto& s : seqs) ++(s.label.is_anomalous() ? anom : normal)[s.events];
    return {top_k(normal, k), top_k(anom, k)};
}

FiveNumber five_number(std::vector<double> values) {
    if (values.empty()) throw ValidationError("five-number summary of an empty sample");
    std::sort(values.begin(), values.end());
    const auto q = [&](double p) {
        const double pos = p * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return values[lo] + (values[hi] - values[lo]) * frac;
    };
    return {values.front(), q(0.25), q(0.5), q(0.75), values.back()};
}

std::vector<InterarrivalSummary> interarrival_dist(std::span<const Sequence> seqs, bool by_pair) {
    std::vector<double> pooled[2];
    std::map<std::pair<EventId, EventId>, std::vector<double>> pairs[2];
    for (const auto& s : seqs) {
        if (s.timestamps.size() != s.events.size()) continue;
        const int cls = s.label.is_anomalous() ? 1 : 0;
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            if (!has_timestamp(s.timestamps[i]) || !has_timestamp(s.timestamps[i + 1])) continue;
            const double dt = s.timestamps[i + 1] - s.timestamps[i];
            pooled[cls].push_back(dt);
            if (by_pair) pairs[cls][{s.events[i], s.events[i + 1]}].push_back(dt);
        }
    }
    std::vector<InterarrivalSummary> out;
    for (int cls = 0; cls < 2; ++cls) {
        if (pooled[cls].empty()) continue;
        out.push_back({cls == 1, std::nullopt, pooled[cls].size(), five_number(pooled[cls])});
        for (auto& [p, v] : pairs[cls]) out.push_back({cls == 1, p, v.size(), five_number(std::move(v))});
    }
    return out;
}

namespace {

void put_share(std::ostream& out, const std::optional<Share>& s) {
    if (!s) {
        out << ",,";
        return;
    }
    const auto pct = s->percent();
    out << s->count << ',' << (pct ? util::format_fixed(*pct, 3) : "NA") << ',' << s->base;
}

std::string join_events(const std::vector<EventId>& ev) {
    std::string s;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(ev[i]);
    }
    return s;
}

}  // namespace

void write_summary_csv(std::ostream& out, const DatasetSummary& summary) {
    out << "metric,total,total_pct,total_base,normal,normal_pct,normal_base,anom,anom_pct,anom_base\n";
    for (const auto& r : summary.rows()) {
        out << r.metric << ',';
        put_share(out, r.total);
        out << ',';
        put_share(out, r.normal);
        out << ',';
        put_share(out, r.anom);
        out << '\n';
    }
}

std::string summary_to_json(const DatasetSummary& summary) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : summary.rows()) {
        nlohmann::ordered_json row;
        row["metric"] = r.metric;
        for (const auto& [key, share] : {std::pair{"total", &r.total}, {"normal", &r.normal}, {"anom", &r.anom}}) {
            if (!*share) continue;
            const auto pct = (*share)->percent();
            row[key] = {{"count", (*share)->count},
                        {"percent", pct ? nlohmann::ordered_json(*pct) : nlohmann::ordered_json(nullptr)},
                        {"base", (*share)->base}};
        }
        rows.push_back(std::move(row));
    }
    return nlohmann::ordered_json{{"rows", rows}}.dump(2);
}

void write_event_frequency_csv(std::ostream& out, std::span<const EventFrequency> rows) {
    out << "event_id,normal,anom\n";
    for (const auto& r : rows) out << r.event_id << ',' << r.normal << ',' << r.anom << '\n';
}

void write_length_csv(std::ostream& out, std::span<const LengthBin> rows) {
    out << "length,normal,anom\n";
    for (const auto& r : rows) out << r.length << ',' << r.normal << ',' << r.anom << '\n';
}

void write_top_sequences_csv(std::ostream& out, const TopSequences& top) {
    out << "class,rank,count,events\n";
    for (const auto& [cls, list] : {std::pair{"normal", &top.normal}, {"anomaly", &top.anom}}) {
        for (std::size_t i = 0; i < list->size(); ++i)
            out << cls << ',' << i + 1 << ',' << (*list)[i].count << ',' << join_events((*list)[i].events) << '\n';
    }
}

void write_interarrival_csv(std::ostream& out, std::span<const InterarrivalSummary> rows) {
    out << "class,from_event,to_event,count,min,q1,median,q3,max\n";
    for (const auto& r : rows) {
        out << (r.anomalous ? "anomaly" : "normal") << ',';
        if (r.pair) out << r.pair->first << ',' << r.pair->second;
        else out << "*,*";
        out << ',' << r.count << ',' << util::format_double(r.dt.min) << ',' << util::format_double(r.dt.q1) << ','
            << util::format_double(r.dt.median) << ',' << util::format_double(r.dt.q3) << ','
            << util::format_double(r.dt.max) << '\n';
    }
}

}  // namespace logbench
