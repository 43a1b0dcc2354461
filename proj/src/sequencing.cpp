#include "logbench/sequencing.hpp"

#include "logbench/util.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

namespace logbench {

bool Sequence::has_timestamps() const {
    return std::any_of(timestamps.begin(), timestamps.end(), [](double t) { return has_timestamp(t); });
}

CountVector::CountVector(std::span<const EventId> events) {
    std::vector<EventId> sorted(events.begin(), events.end());
    std::sort(sorted.begin(), sorted.end());
    for (EventId e : sorted) {
        if (!entries_.empty() && entries_.back().first == e) ++entries_.back().second;
        else entries_.emplace_back(e, 1u);
    }
    total_ = events.size();
}

std::uint32_t CountVector::count(EventId e) const {
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), e,
                                     [](const Entry& a, EventId b) { return a.first < b; });
    return it != entries_.end() && it->first == e ? it->second : 0u;
}

std::size_t CountVectorHash::operator()(const CountVector& cv) const noexcept {
    std::uint64_t h = 0x51ed27a1ULL;
    for (const auto& [e, c] : cv.entries())
        h = util::mix64(h ^ (static_cast<std::uint64_t>(static_cast<std::uint32_t>(e)) << 32 | c));
    return static_cast<std::size_t>(h);
}

std::size_t EventListHash::operator()(const std::vector<EventId>& v) const noexcept {
    std::uint64_t h = v.size();
    for (EventId e : v) h = util::mix64(h ^ static_cast<std::uint32_t>(e));
    return static_cast<std::size_t>(h);
}

CountVector to_count_vector(const Sequence& seq) { return CountVector(seq.events); }

namespace {

void append_event(Sequence& s, const ParsedEvent& ev) {
    const std::size_t before = s.events.size();
    s.events.push_back(ev.event_id);
    if (has_timestamp(ev.timestamp)) {
        if (s.timestamps.size() < before) s.timestamps.resize(before, kNoTimestamp);
        s.timestamps.push_back(ev.timestamp);
    } else if (!s.timestamps.empty()) {
        s.timestamps.push_back(kNoTimestamp);
    }
    if (ev.label.is_labeled()) {
        if (s.event_labels.size() < before) s.event_labels.resize(before);
        s.event_labels.push_back(ev.label);
    } else if (!s.event_labels.empty()) {
        s.event_labels.emplace_back();
    }
}

}  // namespace

void IdentifierGrouper::add(const ParsedEvent& ev) {
    if (ev.seq_ids.empty()) {
        ++discarded_;
        return;
    }
    for (const auto& id : ev.seq_ids) {
        auto [it, inserted] = index_.try_emplace(id, sequences_.size());
        if (inserted) {
            Sequence s;
            s.seq_id = id;
            s.origin = origin_;
            sequences_.push_back(std::move(s));
        }
        append_event(sequences_[it->second], ev);
    }
}

std::vector<Sequence> IdentifierGrouper::finish() && {
    for (auto& s : sequences_) {
        if (s.has_event_labels()) {
            LiftedSequence lifted = lift_event_labels(std::move(s));
            s = std::move(lifted.sequence);
        }
    }
    index_.clear();
    return std::move(sequences_);
}

std::vector<Sequence> group_by_identifier(std::span<const ParsedEvent> events) {
    IdentifierGrouper g(SequenceOrigin::Identifier);
    for (const auto& e : events) g.add(e);
    return std::move(g).finish();
}

std::vector<Sequence> group_by_file(std::span<const ParsedEvent> events) {
    IdentifierGrouper g(SequenceOrigin::File);
    for (const auto& e : events) g.add(e);
    return std::move(g).finish();
}

std::vector<std::pair<std::size_t, std::size_t>> window_bounds(std::size_t n, std::size_t window_size,
                                                               std::size_t step) {
    if (window_size == 0) throw ValidationError("window size must be positive");
    if (step == 0) throw ValidationError("window step must be positive");
    std::vector<std::pair<std::size_t, std::size_t>> out;
    if (n == 0) return out;
    for (std::size_t start = 0; start < n; start += step) {
        const std::size_t end = std::min(n, start + window_size);
        out.emplace_back(start, end);
        if (start + window_size > n || window_size >= n) break;
    }
    return out;
}

std::vector<Sequence> group_by_window(std::span<const ParsedEvent> events, std::size_t window_size,
                                      std::size_t step) {
    std::vector<Sequence> out;
    for (const auto& [begin, end] : window_bounds(events.size(), window_size, step)) {
        Sequence s;
        s.seq_id = "w" + std::to_string(out.size());
        s.origin = SequenceOrigin::Window;
        for (std::size_t i = begin; i < end; ++i) append_event(s, events[i]);
        if (s.has_event_labels()) s = lift_event_labels(std::move(s)).sequence;
        out.push_back(std::move(s));
    }
    return out;
}

LiftedSequence lift_event_labels(Sequence seq) {
    if (seq.events.empty()) {
        seq.label = Label::normal();
        return {std::move(seq), true};
    }
    if (seq.event_labels.size() != seq.events.size())
        throw ValidationError("sequence " + seq.seq_id + " has no per-event labels");
    seq.label = Label::normal();
    for (const auto& l : seq.event_labels) {
        if (l.is_anomalous()) {
            seq.label = l;
            break;
        }
    }
    return {std::move(seq), false};
}

SequenceLabels parse_sequence_labels(std::istream& in) {
    SequenceLabels labels;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = util::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const char delim = line.find('\t') != std::string_view::npos ? '\t' : ',';
        const auto f = util::split(line, delim);
        const std::string id(util::trim(f[0]));
        if (f.size() == 1) {
            labels[id] = Label::anomalous();
            continue;
        }
        const std::string value = util::to_lower(util::trim(f[1]));
        if (line_no == 1 && (value == "label" || value == "labels")) continue;  // header
        if (id.empty()) throw ParseError("empty sequence id", line_no);
        labels[id] = parse_label(util::trim(f[1]));
    }
    return labels;
}

SequenceLabels load_sequence_labels(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open label file " + path.string());
    return parse_sequence_labels(in);
}

LabelAttachment attach_sequence_labels(std::vector<Sequence> seqs, const SequenceLabels& labels,
                                       bool unlisted_normal) {
    LabelAttachment out;
    out.labeled.reserve(seqs.size());
    for (auto& s : seqs) {
        const auto it = labels.find(s.seq_id);
        if (it != labels.end() && it->second.is_labeled()) {
            s.label = it->second;
        } else if (unlisted_normal) {
            s.label = Label::normal();
        } else {
            out.unlabeled_ids.push_back(s.seq_id);
            continue;
        }
        out.labeled.push_back(std::move(s));
    }
    return out;
}

void write_sequences(std::ostream& out, std::span<const Sequence> seqs) {
    out << "seq_id\tlabel\tevents\ttimestamps\tevent_labels\n";
    for (const auto& s : seqs) {
        out << s.seq_id << '\t' << to_string(s.label) << '\t';
        for (std::size_t i = 0; i < s.events.size(); ++i) out << (i ? " " : "") << s.events[i];
        out << '\t';
        if (s.has_timestamps()) {
            for (std::size_t i = 0; i < s.timestamps.size(); ++i) {
                if (i) out << ' ';
                out << (has_timestamp(s.timestamps[i]) ? util::format_double(s.timestamps[i]) : "-");
            }
        }
        out << '\t';
        for (std::size_t i = 0; i < s.event_labels.size(); ++i) out << (i ? " " : "") << to_token(s.event_labels[i]);
        out << '\n';
    }
}

std::vector<Sequence> read_sequences(std::istream& in) {
    std::vector<Sequence> seqs;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (line_no == 1 && line.rfind("seq_id\t", 0) == 0) continue;
        const auto f = util::split(line, '\t');
        if (f.size() < 3 || f.size() > 5) throw ParseError("expected 3 to 5 tab-separated fields", line_no);
        Sequence s;
        s.seq_id = f[0];
        s.label = parse_label(f[1]);
        for (auto tok : util::split_ws(f[2])) {
            const auto e = util::parse_int<EventId>(tok);
            if (!e) throw ParseError("bad event id '" + std::string(tok) + "'", line_no);
            s.events.push_back(*e);
        }
        if (f.size() > 3 && !util::trim(f[3]).empty()) {
            for (auto tok : util::split_ws(f[3])) {
                if (tok == "-") {
                    s.timestamps.push_back(kNoTimestamp);
                    continue;
                }
                const auto t = util::parse_double(tok);
                if (!t) throw ParseError("bad timestamp '" + std::string(tok) + "'", line_no);
                s.timestamps.push_back(*t);
            }
            if (s.timestamps.size() != s.events.size())
                throw ParseError("timestamp count differs from event count", line_no);
        }
        if (f.size() > 4 && !util::trim(f[4]).empty()) {
            for (auto tok : util::split_ws(f[4])) s.event_labels.push_back(parse_label_token(tok));
            if (s.event_labels.size() != s.events.size())
                throw ParseError("event label count differs from event count", line_no);
        }
        seqs.push_back(std::move(s));
    }
    return seqs;
}

std::vector<Sequence> load_sequences(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open sequence file " + path.string());
    return read_sequences(in);
}

}  // namespace logbench
