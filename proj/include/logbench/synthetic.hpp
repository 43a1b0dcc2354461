#pragma once

#include "logbench/sequencing.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace logbench::synthetic {

struct FixtureSize {
    std::size_t normals = 80;
    std::size_t anomalies = 20;
    std::uint64_t seed = 7;
};

// One fixture per detection technique. Normal sequences are built so that any
// training sample of them teaches the target detector everything it needs;
// the planted anomalies differ from normals only in the targeted property.
// Per-event labels mark the planted positions.

/// Anomalies contain an event type (90..92) never seen in normal sequences.
std::vector<Sequence> new_event_fixture(const FixtureSize& size = {});
/// Normals have length 10; anomalies length 3 over the same event types.
std::vector<Sequence> short_length_fixture(const FixtureSize& size = {});
/// Normals are permutations of one multiset; anomalies shift one count.
std::vector<Sequence> count_shift_fixture(const FixtureSize& size = {});
/// Normals are one fixed order; anomalies swap two adjacent events.
std::vector<Sequence> order_swap_fixture(const FixtureSize& size = {});
/// Same events everywhere; anomalies stretch one gap fivefold. Gaps carry 2% jitter.
std::vector<Sequence> timing_delay_fixture(const FixtureSize& size = {});

/// ~200 sequences mixing every planted anomaly kind over a varied normal workflow.
std::vector<Sequence> combined_corpus(std::uint64_t seed = 11);

/// Raw log in the synthetic profile's line format plus its template catalog.
struct RawLog {
    std::string log;
    std::string templates;
};
RawLog combined_raw_log(std::uint64_t seed = 11);

/// Small HDFS-style raw log with per-block label file (CSV with header).
struct HdfsSample {
    std::string log;
    std::string labels;
};
HdfsSample mini_hdfs(std::uint64_t seed = 3);

/// Three HDFS lines, one of them naming two blocks.
std::string three_line_hdfs();

/// Writes every fixture into `dir`. Returns the file names written, sorted.
std::vector<std::string> write_fixtures(const std::filesystem::path& dir);

}  // namespace logbench::synthetic
