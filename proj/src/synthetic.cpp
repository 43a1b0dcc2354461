#include "logbench/synthetic.hpp"

#include "logbench/io.hpp"
#include "logbench/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <map>
#include <random>
#include <sstream>

namespace logbench::synthetic {

namespace {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(util::mix64(seed)) {}

    std::size_t below(std::size_t n) { return static_cast<std::size_t>(util::uniform_below(rng_, n)); }
    double real(double lo, double hi) { return util::uniform_real(rng_, lo, hi); }
    bool chance(double p) { return real(0.0, 1.0) < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 rng_;
};

double round_ms(double t) { return std::round(t * 1000.0) / 1000.0; }

// Typical gap between two consecutive event types, in seconds.
double base_gap(EventId a, EventId b) { return 0.5 + static_cast<double>((a * 7 + b * 3) % 5); }

void assign_times(Sequence& s, double start, Gen& g, double jitter) {
    s.timestamps.clear();
    double t = start;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) t += base_gap(s.events[i - 1], s.events[i]) * (1.0 + g.real(-jitter, jitter));
        s.timestamps.push_back(round_ms(t));
    }
}

Sequence make(std::vector<EventId> events) {
    Sequence s;
    s.events = std::move(events);
    s.event_labels.assign(s.events.size(), Label::normal());
    s.label = Label::normal();
    return s;
}

void plant(Sequence& s, std::size_t pos, const std::string& tag) {
    s.event_labels.at(pos) = Label::anomalous(tag);
    s.label = lift_event_labels(s).sequence.label;
}

/// Shuffles normals and anomalies together, names them and stamps times.
std::vector<Sequence> finish(std::vector<Sequence> seqs, Gen& g, double jitter) {
    g.shuffle(seqs);
    for (std::size_t i = 0; i < seqs.size(); ++i) {
        char id[16];
        std::snprintf(id, sizeof id, "s%03zu", i + 1);
        seqs[i].seq_id = id;
        if (seqs[i].timestamps.empty()) assign_times(seqs[i], 1'600'000'000.0 + 100.0 * static_cast<double>(i), g, jitter);
    }
    return seqs;
}

}  // namespace

std::vector<Sequence> new_event_fixture(const FixtureSize& size) {
    Gen g(size.seed ^ 0x01);
    const auto normal = [&] {
        std::vector<EventId> ev{1, 2, 3, 4, 5};
        const std::size_t extra = 3 + g.below(5);
        for (std::size_t i = 0; i < extra; ++i) ev.push_back(static_cast<EventId>(1 + g.below(5)));
        g.shuffle(ev);
        return make(std::move(ev));
    };
    std::vector<Sequence> seqs;
    for (std::size_t i = 0; i < size.normals; ++i) seqs.push_back(normal());
    for (std::size_t i = 0; i < size.anomalies; ++i) {
        Sequence s = normal();
        const std::size_t pos = g.below(s.size());
        s.events[pos] = static_cast<EventId>(90 + g.below(3));
        plant(s, pos, "new_event");
        seqs.push_back(std::move(s));
    }
    return finish(std::move(seqs), g, 0.02);
}

std::vector<Sequence> short_length_fixture(const FixtureSize& size) {
    Gen g(size.seed ^ 0x02);
    const auto draw = [&](std::size_t n) {
        std::vector<EventId> ev;
        for (std::size_t i = 0; i < n; ++i) ev.push_back(static_cast<EventId>(1 + g.below(6)));
        return make(std::move(ev));
    };
    std::vector<Sequence> seqs;
    for (std::size_t i = 0; i < size.normals; ++i) seqs.push_back(draw(10));
    for (std::size_t i = 0; i < size.anomalies; ++i) {
        Sequence s = draw(3);
        plant(s, 2, "short_length");
        seqs.push_back(std::move(s));
    }
    return finish(std::move(seqs), g, 0.02);
}

std::vector<Sequence> count_shift_fixture(const FixtureSize& size) {
    Gen g(size.seed ^ 0x03);
    const auto normal = [&] {
        std::vector<EventId> ev{1, 1, 1, 2, 2, 3, 3, 4, 4, 5};
        g.shuffle(ev);
        return make(std::move(ev));
    };
    std::vector<Sequence> seqs;
    for (std::size_t i = 0; i < size.normals; ++i) seqs.push_back(normal());
    for (std::size_t i = 0; i < size.anomalies; ++i) {
        Sequence s = normal();
        std::vector<std::size_t> ones;
        for (std::size_t k = 0; k < s.size(); ++k)
            if (s.events[k] == 1) ones.push_back(k);
        const std::size_t pos = ones[g.below(ones.size())];
        s.events[pos] = static_cast<EventId>(2 + g.below(4));
        plant(s, pos, "count_shift");
        seqs.push_back(std::move(s));
    }
    return finish(std::move(seqs), g, 0.02);
}

std::vector<Sequence> order_swap_fixture(const FixtureSize& size) {
    Gen g(size.seed ^ 0x04);
    const std::vector<EventId> flow{1, 2, 3, 4, 5, 6, 7, 8};
    std::vector<Sequence> seqs;
    for (std::size_t i = 0; i < size.normals; ++i) seqs.push_back(make(flow));
    for (std::size_t i = 0; i < size.anomalies; ++i) {
        Sequence s = make(flow);
        const std::size_t pos = g.below(flow.size() - 1);
        std::swap(s.events[pos], s.events[pos + 1]);
        plant(s, pos, "order_swap");
        plant(s, pos + 1, "order_swap");
        seqs.push_back(std::move(s));
    }
    return finish(std::move(seqs), g, 0.02);
}

std::vector<Sequence> timing_delay_fixture(const FixtureSize& size) {
    Gen g(size.seed ^ 0x05);
    const std::vector<EventId> flow{1, 2, 3, 4, 5, 6};
    std::vector<Sequence> seqs;
    for (std::size_t i = 0; i < size.normals; ++i) seqs.push_back(make(flow));
    for (std::size_t i = 0; i < size.anomalies; ++i) {
        Sequence s = make(flow);
        plant(s, 1 + g.below(flow.size() - 1), "timing_delay");
        seqs.push_back(std::move(s));
    }
    seqs = finish(std::move(seqs), g, 0.02);
    // Stretch the gap leading into the planted event.
    for (auto& s : seqs) {
        if (!s.label.is_anomalous()) continue;
        std::size_t pos = 0;
        while (!s.event_labels[pos].is_anomalous()) ++pos;
        const double extra = 4.0 * (s.timestamps[pos] - s.timestamps[pos - 1]);
        for (std::size_t k = pos; k < s.size(); ++k) s.timestamps[k] = round_ms(s.timestamps[k] + extra);
    }
    return seqs;
}

namespace {

Sequence workflow(Gen& g) {
    std::vector<EventId> ev{1};
    if (g.chance(0.3)) ev.insert(ev.end(), {3, 2});
    else ev.insert(ev.end(), {2, 3});
    const std::size_t reps = 2 + g.below(3);
    for (std::size_t i = 0; i < reps; ++i) ev.insert(ev.end(), {4, 5});
    ev.push_back(6);
    if (g.chance(0.3)) ev.push_back(7);
    ev.push_back(8);
    return make(std::move(ev));
}

}  // namespace

std::vector<Sequence> combined_corpus(std::uint64_t seed) {
    Gen g(seed);
    std::vector<Sequence> seqs;
    for (int i = 0; i < 160; ++i) seqs.push_back(workflow(g));
    for (int kind = 0; kind < 5; ++kind) {
        for (int i = 0; i < 8; ++i) {
            Sequence s = workflow(g);
            switch (kind) {
                case 0: {
                    const std::size_t pos = 1 + g.below(s.size() - 1);
                    s.events.insert(s.events.begin() + static_cast<std::ptrdiff_t>(pos),
                                    static_cast<EventId>(20 + g.below(3)));
                    s.event_labels.insert(s.event_labels.begin() + static_cast<std::ptrdiff_t>(pos), Label::normal());
                    plant(s, pos, "new_event");
                    break;
                }
                case 1: {
                    const std::size_t keep = 2 + g.below(2);
                    s.events.resize(keep);
                    s.event_labels.resize(keep);
                    plant(s, keep - 1, "short_length");
                    break;
                }
                case 2: {
                    const auto six = std::find(s.events.begin(), s.events.end(), 6) - s.events.begin();
                    s.events[static_cast<std::size_t>(six)] = 8;
                    plant(s, static_cast<std::size_t>(six), "count_shift");
                    break;
                }
                case 3: {
                    const std::size_t last = s.size() - 1;
                    std::swap(s.events[last], s.events[last - 1]);
                    plant(s, last - 1, "order_swap");
                    plant(s, last, "order_swap");
                    break;
                }
                default: plant(s, 1 + g.below(s.size() - 1), "timing_delay"); break;
            }
            seqs.push_back(std::move(s));
        }
    }
    g.shuffle(seqs);
    // Sessions overlap in time so the raw log interleaves them.
    for (std::size_t i = 0; i < seqs.size(); ++i) {
        auto& s = seqs[i];
        char id[16];
        std::snprintf(id, sizeof id, "s%03zu", i + 1);
        s.seq_id = id;
        assign_times(s, 1'600'000'000.0 + 7.0 * static_cast<double>(i), g, 0.02);
        if (s.label.is_anomalous() && s.label.tag == "timing_delay") {
            std::size_t pos = 0;
            while (!s.event_labels[pos].is_anomalous()) ++pos;
            const double extra = 4.0 * (s.timestamps[pos] - s.timestamps[pos - 1]);
            for (std::size_t k = pos; k < s.size(); ++k) s.timestamps[k] = round_ms(s.timestamps[k] + extra);
        }
    }
    return seqs;
}

namespace {

const std::map<EventId, std::string>& combined_messages() {
    static const std::map<EventId, std::string> m{
        {1, "connection opened from <*>"},
        {2, "auth token issued for user <*>"},
        {3, "loading profile for user <*>"},
        {4, "request <*> received"},
        {5, "request <*> served in <*> ms"},
        {6, "cache flushed, <*> entries"},
        {7, "slow disk warning on volume <*>"},
        {8, "connection closed after <*> requests"},
        {20, "kernel oops at address <*>"},
        {21, "segfault in worker <*>"},
        {22, "out of memory, killing process <*>"},
    };
    return m;
}

std::string fill(const std::string& pattern, Gen& g) {
    std::string out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t w = pattern.find("<*>", pos);
        out += pattern.substr(pos, w - pos);
        if (w == std::string::npos) break;
        out += std::to_string(10 + g.below(990));
        pos = w + 3;
    }
    return out;
}

}  // namespace

RawLog combined_raw_log(std::uint64_t seed) {
    const auto seqs = combined_corpus(seed);
    Gen g(seed ^ 0xabc);
    struct Line {
        double t;
        std::size_t seq, pos;
    };
    std::vector<Line> lines;
    for (std::size_t i = 0; i < seqs.size(); ++i)
        for (std::size_t k = 0; k < seqs[i].size(); ++k) lines.push_back({seqs[i].timestamps[k], i, k});
    std::stable_sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.t < b.t; });
    RawLog raw;
    for (const auto& l : lines) {
        const auto& s = seqs[l.seq];
        raw.log += util::format_fixed(l.t, 3) + ' ' + s.seq_id + ' ' + to_token(s.event_labels[l.pos]) + ' ' +
                   fill(combined_messages().at(s.events[l.pos]), g) + '\n';
    }
    raw.templates = "# id\tpattern\n";
    for (const auto& [id, pattern] : combined_messages()) raw.templates += std::to_string(id) + '\t' + pattern + '\n';
    return raw;
}

namespace {

std::string hdfs_stamp(double epoch) {
    const auto t = static_cast<std::time_t>(epoch);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%y%m%d %H%M%S", &tm);
    return buf;
}

std::string ip(Gen& g) {
    return "10.250." + std::to_string(g.below(20)) + "." + std::to_string(2 + g.below(250));
}

}  // namespace

HdfsSample mini_hdfs(std::uint64_t seed) {
    Gen g(seed);
    struct Line {
        double t;
        std::size_t order;
        std::string text;
    };
    std::vector<Line> lines;
    std::size_t order = 0;
    const double t0 = 1226262918.0;  // 2008-11-09 20:35:18 UTC
    const auto emit = [&](double t, const char* component, const std::string& msg) {
        lines.push_back({t, order++,
                         hdfs_stamp(t) + ' ' + std::to_string(13 + g.below(30)) + " INFO " + component + ": " + msg});
    };

    HdfsSample out;
    out.labels = "BlockId,Label\n";
    std::vector<std::string> normals;
    for (int b = 0; b < 24; ++b) {
        const bool anomalous = b % 5 == 4;
        std::string blk = "blk_" + std::string(g.chance(0.5) ? "-" : "") + std::to_string(1'000'000'000 + g.below(9'000'000'000ULL));
        const double start = t0 + 40.0 * b + static_cast<double>(g.below(30));
        out.labels += blk + (anomalous ? ",Anomaly\n" : ",Normal\n");
        const std::string path = "/user/root/rand/_temporary/_task_200811092030_0001_m_" + std::to_string(100 + b) + "_0/part-" +
                                 std::to_string(100 + b) + ". " + blk;
        // Allocation and the three receive events are near-simultaneous; order varies.
        const std::size_t alloc_slot = g.below(4);
        for (std::size_t k = 0; k < 4; ++k) {
            if (k == alloc_slot) emit(start, "dfs.FSNamesystem", "BLOCK* NameSystem.allocateBlock: " + path);
            else emit(start, "dfs.DataNode$DataXceiver",
                      "Receiving block " + blk + " src: /" + ip(g) + ":" + std::to_string(40000 + g.below(20000)) +
                          " dest: /" + ip(g) + ":50010");
        }
        if (anomalous) {
            emit(start + 1, "dfs.DataNode$DataXceiver",
                 "writeBlock " + blk + " received exception java.io.IOException: Could not read from stream");
            if (b % 10 == 4) continue;  // truncated block: nothing else happens
        }
        for (int r = 0; r < 3; ++r) {
            emit(start + 2 + r, "dfs.DataNode$PacketResponder", "PacketResponder " + std::to_string(r) + " for block " + blk + " terminating");
            emit(start + 2 + r, "dfs.DataNode$PacketResponder", "Received block " + blk + " of size 67108864 from /" + ip(g));
        }
        for (int r = 0; r < 3; ++r)
            emit(start + 6, "dfs.FSNamesystem",
                 "BLOCK* NameSystem.addStoredBlock: blockMap updated: " + ip(g) + ":50010 is added to " + blk + " size 67108864");
        if (anomalous) continue;
        normals.push_back(blk);
        for (int r = 0; r < 3; ++r)
            emit(start + 600, "dfs.FSNamesystem", "BLOCK* NameSystem.delete: " + blk + " is added to invalidSet of " + ip(g) + ":50010");
        for (int r = 0; r < 3; ++r) {
            const std::string file = "/mnt/hadoop/dfs/data/current/subdir" + std::to_string(g.below(60)) + "/" + blk;
            emit(start + 603 + r, "dfs.FSDataset", "Deleting block " + blk + " file " + file);
            emit(start + 603 + r, "dfs.FSDataset", "Deleted block " + blk + " at file " + file);
        }
    }
    // One request naming two blocks, and one line no template covers.
    emit(t0 + 590, "dfs.FSNamesystem", "BLOCK* ask " + ip(g) + ":50010 to delete " + normals[0] + " " + normals[1]);
    emit(t0 + 300, "dfs.DataNode", "Unrecognised heartbeat state from " + ip(g));
    std::stable_sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
        return a.t != b.t ? a.t < b.t : a.order < b.order;
    });
    for (const auto& l : lines) out.log += l.text + '\n';
    return out;
}

std::string three_line_hdfs() {
    return "081109 203518 143 INFO dfs.DataNode$DataXceiver: Receiving block blk_1 src: /10.250.19.102:54106 dest: "
           "/10.250.19.102:50010\n"
           "081109 203519 145 INFO dfs.DataNode$DataXceiver: Receiving block blk_2 src: /10.250.10.6:40524 dest: "
           "/10.250.10.6:50010\n"
           "081109 203521 19 INFO dfs.FSNamesystem: BLOCK* ask 10.250.14.224:50010 to delete blk_1 blk_2\n";
}

std::vector<std::string> write_fixtures(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> names;
    const auto put = [&](const std::string& name, const std::string& content) {
        write_file_atomic(dir / name, content);
        names.push_back(name);
    };
    const auto seq_file = [&](const std::string& name, const std::vector<Sequence>& seqs) {
        std::ostringstream os;
        write_sequences(os, seqs);
        put(name, os.str());
    };
    seq_file("new_event.seq.tsv", new_event_fixture());
    seq_file("short_length.seq.tsv", short_length_fixture());
    seq_file("count_shift.seq.tsv", count_shift_fixture());
    seq_file("order_swap.seq.tsv", order_swap_fixture());
    seq_file("timing_delay.seq.tsv", timing_delay_fixture());
    seq_file("combined.seq.tsv", combined_corpus());
    {
        // Every 1-gram and 2-gram occurs exactly once; and a single repeated gram.
        Sequence uniform = make({1, 2, 3, 4, 5, 6, 7, 8});
        uniform.seq_id = "uniform";
        Sequence single = make({7, 7, 7, 7, 7, 7});
        single.seq_id = "single";
        seq_file("uniform_ngrams.seq.tsv", {uniform});
        seq_file("single_gram.seq.tsv", {single});
    }
    const RawLog raw = combined_raw_log();
    put("combined.log", raw.log);
    put("combined.templates", raw.templates);
    const HdfsSample hdfs = mini_hdfs();
    put("hdfs_mini.log", hdfs.log);
    put("hdfs_mini_labels.csv", hdfs.labels);
    put("hdfs_three_lines.log", three_line_hdfs());
    std::sort(names.begin(), names.end());
    return names;
}

}  // namespace logbench::synthetic
