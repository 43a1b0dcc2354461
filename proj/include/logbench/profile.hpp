#pragma once

#include "logbench/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace logbench {

/// Where ground truth comes from. Exactly one applies per dataset.
enum class LabelSource {
    SequenceFile,   // separate file mapping sequence id -> label (HDFS, OpenStack)
    EventMarker,    // per-line marker field, e.g. "-" for normal (BGL, Thunderbird)
    FileDirectory,  // label derived from the parent directory of each input file (Hadoop, ADFA)
};

enum class SeqIdSource {
    Regex,  // every match of seq_id_pattern in the message (group 1 if the pattern has one)
    Field,  // a named preamble field
    File,   // one sequence per input file
    None,   // no identifiers; window grouping only
};

enum class EventSource {
    Templates,  // match the message against the template catalog
    Tokens,     // each whitespace token is already an event id (system-call traces)
};

/// Per-dataset conventions. Loaded from flat `key = value` files.
struct DatasetProfile {
    std::string name;

    /// Names of the whitespace-separated fields preceding the free-text message.
    std::vector<std::string> preamble;

    /// Preamble fields joined with single spaces form the timestamp text.
    std::vector<std::string> timestamp_fields;
    /// strptime-style format or "epoch"; a trailing ".fff" / ",fff" fraction is accepted.
    std::string timestamp_format;
    /// Year used when the format carries none (syslog-style dates).
    int base_year = 1970;

    SeqIdSource seq_source = SeqIdSource::None;
    std::string seq_id_pattern;
    std::string seq_field;

    LabelSource label_source = LabelSource::SequenceFile;
    std::string label_field;
    std::string normal_marker = "-";
    /// FileDirectory: directories whose files are normal; all others are anomalous,
    /// tagged with the directory name.
    std::vector<std::string> normal_directories = {"normal"};
    /// SequenceFile: ids missing from the label file count as normal instead of unlabeled.
    bool unlisted_normal = false;

    EventSource event_source = EventSource::Templates;

    bool has_timestamps() const { return !timestamp_fields.empty(); }
    /// Throws ValidationError when referenced fields are missing or a setting is inconsistent.
    void validate() const;
};

DatasetProfile parse_profile(std::istream& in);
DatasetProfile load_profile(const std::filesystem::path& path);

/// Directory holding bundled `*.profile` files: $LOGBENCH_PROFILE_DIR, else the build-time default.
std::filesystem::path profile_directory();
std::vector<std::string> bundled_profile_names(const std::filesystem::path& dir);

/// Accepts a path to a profile file or the name of a bundled profile.
DatasetProfile resolve_profile(const std::string& name_or_path, const std::filesystem::path& dir);

/// Parses a timestamp per the profile's format. Returns NaN when unparseable.
double parse_timestamp(std::string_view text, const DatasetProfile& profile);

}  // namespace logbench
