#pragma once

#include "logbench/catalog.hpp"
#include "logbench/profile.hpp"
#include "logbench/types.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace logbench {

/// One occurrence of an event type in the raw log.
struct ParsedEvent {
    EventId event_id = 0;
    double timestamp = kNoTimestamp;
    std::vector<std::string> seq_ids;
    Label label;
    std::size_t line_no = 0;
    std::vector<std::string> params;

    friend bool operator==(const ParsedEvent& a, const ParsedEvent& b) {
        const bool same_ts = (std::isnan(a.timestamp) && std::isnan(b.timestamp)) ||
                             a.timestamp == b.timestamp;
        return same_ts && a.event_id == b.event_id && a.seq_ids == b.seq_ids &&
               a.label == b.label && a.line_no == b.line_no && a.params == b.params;
    }
};

struct Unmatched {};

/// Line that could not be processed (short preamble, bad timestamp, bad token).
struct InvalidLine {
    std::string reason;
};

using LineOutcome = std::variant<ParsedEvent, Unmatched, InvalidLine>;

/// Identity of the file a line came from; fills seq ids and labels for
/// file-grouped datasets.
struct SourceFile {
    std::string seq_id;
    Label label;
};

struct LineError {
    std::size_t line_no = 0;
    std::string reason;
};

/// Counters for one ingest pass. matched + unmatched + invalid == total_lines.
struct IngestReport {
    std::uint64_t total_lines = 0;
    std::uint64_t matched = 0;
    std::uint64_t unmatched = 0;
    std::uint64_t invalid = 0;
    std::uint64_t discarded_no_id = 0;  // matched lines without any sequence id
    std::uint64_t parsed_events = 0;    // one per (line, seq id) pair
    std::uint64_t normal_events = 0;
    std::uint64_t anomalous_events = 0;
    std::uint64_t unlabeled_events = 0;
    std::uint64_t files = 0;
    std::vector<LineError> errors;  // first kMaxStoredErrors only
    bool complete = true;
    std::string failure;

    static constexpr std::size_t kMaxStoredErrors = 1000;

    void merge(const IngestReport& other);
    std::string to_json() const;
    static IngestReport from_json(std::string_view text);
};

/// Compiled (catalog, profile) pair. Immutable; parse() may run concurrently.
class LineParser {
public:
    LineParser(const TemplateCatalog& catalog, const DatasetProfile& profile);
    ~LineParser();
    LineParser(LineParser&&) noexcept;
    LineParser& operator=(LineParser&&) noexcept;

    LineOutcome parse(std::string_view line, std::size_t line_no,
                      const SourceFile* source = nullptr) const;

    const DatasetProfile& profile() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Convenience wrapper; compiles a LineParser per call. Never throws on a non-matching line.
LineOutcome parse_line(std::string_view line, const TemplateCatalog& catalog,
                       const DatasetProfile& profile, std::size_t line_no = 1);

struct ParseOptions {
    std::size_t jobs = 1;
    std::size_t chunk_lines = 1 << 16;
    std::ostream* unmatched_dump = nullptr;  // receives unmatched lines verbatim
};

using EventSink = std::function<void(const ParsedEvent&)>;

/// Streams `in` line by line, emitting events in input order. Memory is bounded
/// by the chunk size. Matched lines with no id are counted as discarded unless
/// the profile has no id source.
IngestReport parse_stream(std::istream& in, const LineParser& parser, const EventSink& sink,
                          const ParseOptions& options = {}, const SourceFile* source = nullptr);

IngestReport parse_file(const std::filesystem::path& path, const LineParser& parser,
                        const EventSink& sink, const ParseOptions& options = {});

/// A file, or every regular file under a directory in sorted path order. For
/// file-grouped profiles each file becomes one sequence id (its path relative
/// to `path`), and FileDirectory labels come from the parent directory name.
IngestReport parse_path(const std::filesystem::path& path, const LineParser& parser,
                        const EventSink& sink, const ParseOptions& options = {});

/// Label of a file (path relative to the dataset root) under a FileDirectory profile:
/// normal when any enclosing directory is a normal directory, otherwise anomalous
/// and tagged with the immediate parent directory.
Label directory_label(const std::filesystem::path& relative_file, const DatasetProfile& profile);

/// Writes `line_no, event_id, timestamp, seq_id, label` records (tab separated,
/// header first), one per (line, seq id) pair.
class ParsedEventWriter {
public:
    explicit ParsedEventWriter(std::ostream& out);
    void write(const ParsedEvent& event);

private:
    std::ostream& out_;
};

/// Reads records written by ParsedEventWriter. Consecutive records sharing a
/// line number are merged back into one event with several ids.
void read_parsed_events(std::istream& in, const EventSink& sink);
std::vector<ParsedEvent> read_parsed_events(std::istream& in);

}  // namespace logbench
